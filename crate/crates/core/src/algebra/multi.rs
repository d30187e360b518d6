//! Multi-indices over paired holomorphic / antiholomorphic slots, and
//! truncation-order bookkeeping.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::scalar::Scalar;

/// Effective truncation order. Everything of degree `<= order` is known exactly;
/// a negative order means nothing is known.
pub type Order = i64;

/// Order of an exactly known (untruncated) object.
pub const EXACT: Order = i64::MAX;

pub(crate) fn ord_add(a: Order, b: Order) -> Order {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a + b
    }
}

pub(crate) fn ord_sub(a: Order, k: i64) -> Order {
    if a == EXACT {
        EXACT
    } else {
        a - k
    }
}

/// A coordinate of the chart: `z^k` or `z̄^l` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Z(usize),
    Zbar(usize),
}

impl Var {
    pub fn slot(self, dim: usize) -> usize {
        match self {
            Var::Z(k) => k,
            Var::Zbar(l) => dim + l,
        }
    }

    pub fn conjugate(self) -> Var {
        match self {
            Var::Z(k) => Var::Zbar(k),
            Var::Zbar(l) => Var::Z(l),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(k) => write!(f, "z{}", k + 1),
            Var::Zbar(l) => write!(f, "zb{}", l + 1),
        }
    }
}

/// Exponent vector of length `2n`: the first `n` slots are holomorphic
/// (`z`, `ζ`, `∂/∂z`), the last `n` antiholomorphic. Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multi(Vec<u16>);

impl Multi {
    pub fn zero(dim: usize) -> Self {
        Multi(vec![0; 2 * dim])
    }

    pub fn from_parts(holo: &[u16], anti: &[u16]) -> Self {
        assert_eq!(holo.len(), anti.len(), "multi-index halves differ in length");
        let mut v = Vec::with_capacity(2 * holo.len());
        v.extend_from_slice(holo);
        v.extend_from_slice(anti);
        Multi(v)
    }

    pub fn unit(dim: usize, var: Var) -> Self {
        let mut m = Self::zero(dim);
        m.0[var.slot(dim)] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len() / 2
    }

    pub fn slots(&self) -> &[u16] {
        &self.0
    }

    pub fn holo(&self) -> &[u16] {
        &self.0[..self.dim()]
    }

    pub fn anti(&self) -> &[u16] {
        &self.0[self.dim()..]
    }

    pub fn get(&self, var: Var) -> u16 {
        self.0[var.slot(self.dim())]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn holo_degree(&self) -> u32 {
        self.holo().iter().map(|&e| e as u32).sum()
    }

    pub fn anti_degree(&self) -> u32 {
        self.anti().iter().map(|&e| e as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Multi) -> Multi {
        Multi(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other`, or `None` unless `other <= self` componentwise.
    pub fn checked_sub(&self, other: &Multi) -> Option<Multi> {
        let mut v = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            v.push(a.checked_sub(*b)?);
        }
        Some(Multi(v))
    }

    pub fn divides(&self, other: &Multi) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn bump(&self, var: Var, by: i32) -> Option<Multi> {
        let slot = var.slot(self.dim());
        let e = self.0[slot] as i32 + by;
        if e < 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[slot] = e as u16;
        Some(Multi(v))
    }

    /// Swaps holomorphic and antiholomorphic halves.
    pub fn conjugate(&self) -> Multi {
        let n = self.dim();
        let mut v = Vec::with_capacity(2 * n);
        v.extend_from_slice(&self.0[n..]);
        v.extend_from_slice(&self.0[..n]);
        Multi(v)
    }

    /// `∏ e_i!`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&e| factorial(e as u32)).product()
    }

    /// `∏ C(self_i, sub_i)`; zero unless `sub <= self`.
    pub fn binomial(&self, sub: &Multi) -> BigInt {
        self.0
            .iter()
            .zip(&sub.0)
            .map(|(&a, &b)| binomial(a as u32, b as u32))
            .product()
    }

    /// `self! / (self − sub)!`: the constant produced by `∂^sub` acting on `x^self`.
    pub fn falling(&self, sub: &Multi) -> BigInt {
        self.0
            .iter()
            .zip(&sub.0)
            .map(|(&a, &b)| {
                if b > a {
                    BigInt::from(0)
                } else {
                    ((a - b + 1) as u32..=a as u32).map(BigInt::from).product()
                }
            })
            .product()
    }

    /// Every `γ <= self` componentwise, in lexicographic order.
    pub fn sub_indices(&self) -> Vec<Multi> {
        let mut out = vec![Multi(Vec::with_capacity(self.0.len()))];
        for &e in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for m in &out {
                for k in 0..=e {
                    let mut v = m.0.clone();
                    v.push(k);
                    next.push(Multi(v));
                }
            }
            out = next;
        }
        out
    }

    /// All multi-indices in `dim` pairs of slots with total degree exactly `degree`,
    /// restricted to the slots enabled by `holo` / `anti`.
    pub fn of_degree(dim: usize, degree: u32, holo: bool, anti: bool) -> Vec<Multi> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; 2 * dim];
        let active: Vec<usize> = (0..2 * dim)
            .filter(|&s| if s < dim { holo } else { anti })
            .collect();
        fill(&active, 0, degree, &mut cur, &mut out);
        out.sort();
        out
    }

    /// All multi-indices with total degree `<= degree` on the enabled slots.
    pub fn up_to_degree(dim: usize, degree: u32, holo: bool, anti: bool) -> Vec<Multi> {
        (0..=degree)
            .flat_map(|d| Self::of_degree(dim, d, holo, anti))
            .collect()
    }
}

fn fill(active: &[usize], pos: usize, remaining: u32, cur: &mut Vec<u16>, out: &mut Vec<Multi>) {
    if pos == active.len() {
        if remaining == 0 {
            out.push(Multi(cur.clone()));
        }
        return;
    }
    for e in 0..=remaining {
        cur[active[pos]] = e as u16;
        fill(active, pos + 1, remaining - e, cur, out);
    }
    cur[active[pos]] = 0;
}

impl fmt::Debug for Multi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}", self.holo(), self.anti())
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn int_scalar(n: BigInt) -> Scalar {
    Scalar::real(BigRational::from_integer(n))
}

pub(crate) fn inv_int_scalar(n: BigInt) -> Scalar {
    Scalar::real(BigRational::new(BigInt::one(), n))
}
