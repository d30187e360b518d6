//! Truncated Taylor series in the chart variables `(z, z̄)` at the base point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::multi::{int_scalar, ord_add, ord_sub, Multi, Order, Var, EXACT};
use super::scalar::{Coeff, Scalar};
use crate::error::Error;

/// A jet: sparse exact coefficients of `z^α z̄^β` for `|α| + |β| <= order`.
///
/// Zero coefficients are never stored. Equality compares canonical forms up to
/// the smaller of the two orders.
#[derive(Clone)]
pub struct JetSeries<C = Scalar> {
    dim: usize,
    order: Order,
    terms: BTreeMap<Multi, C>,
}

impl<C: Coeff> JetSeries<C> {
    /// The exact zero function.
    pub fn zero(dim: usize) -> Self {
        Self::zero_to(dim, EXACT)
    }

    /// Zero known up to `order`.
    pub fn zero_to(dim: usize, order: Order) -> Self {
        assert!(dim >= 1, "chart dimension must be positive");
        Self {
            dim,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: C) -> Self {
        Self::monomial(dim, Multi::zero(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, C::one())
    }

    pub fn monomial(dim: usize, exps: Multi, c: C) -> Self {
        let mut j = Self::zero(dim);
        if !c.is_zero() {
            j.terms.insert(exps, c);
        }
        j
    }

    /// The coordinate function `z^k` or `z̄^l`.
    pub fn var(dim: usize, var: Var) -> Self {
        Self::monomial(dim, Multi::unit(dim, var), C::one())
    }

    /// Builds a jet from terms, summing duplicates and dropping anything beyond `order`.
    pub fn from_terms(dim: usize, order: Order, terms: impl IntoIterator<Item = (Multi, C)>) -> Self {
        let mut j = Self::zero_to(dim, order);
        for (m, c) in terms {
            assert_eq!(m.dim(), dim, "multi-index dimension mismatch");
            j.add_term(m, &c);
        }
        j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order == EXACT
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multi, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no coefficient is stored (zero up to the effective order).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Multi) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Multi::zero(self.dim))
    }

    /// Lowest total degree of a stored term, or the first unknown degree if none.
    pub fn low_degree(&self) -> Order {
        self.terms
            .keys()
            .map(|m| m.degree() as Order)
            .min()
            .unwrap_or_else(|| ord_add(self.order, 1))
    }

    pub fn high_degree(&self) -> Option<u32> {
        self.terms.keys().map(Multi::degree).max()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.anti_degree() == 0)
    }

    pub fn is_antiholomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.holo_degree() == 0)
    }

    pub fn add_term(&mut self, m: Multi, c: &C) {
        if c.is_zero() || (m.degree() as Order) > self.order {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Lowers the effective order to `order` (never raises it).
    pub fn truncate(&mut self, order: Order) {
        if order < self.order {
            self.order = order;
            self.terms.retain(|m, _| (m.degree() as Order) <= order);
        }
    }

    pub fn truncated(mut self, order: Order) -> Self {
        self.truncate(order);
        self
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> JetSeries<D> {
        JetSeries::from_terms(self.dim, self.order, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero_to(self.dim, self.order);
        }
        self.map_coeffs(|x| x.mul_ref(c))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        self.check_dim(other)?;
        Ok(self.combine(other, false))
    }

    /// Exact Cauchy product, truncated at the effective order of the result.
    pub fn product(&self, other: &Self) -> Result<Self, Error> {
        self.check_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        // Unknown tails start at order+1, so the product is exact through
        // min(order_a + low_b, order_b + low_a).
        let order = ord_add(self.order, other.low_degree()).min(ord_add(other.order, self.low_degree()));
        let mut out = Self::zero_to(self.dim, order);
        for (ma, ca) in &self.terms {
            let da = ma.degree() as Order;
            if da > order {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() as Order > order {
                    continue;
                }
                out.add_term(ma.add(mb), &ca.mul_ref(cb));
            }
        }
        out
    }

    /// Reciprocal as a jet; requires a unit constant term.
    pub fn reciprocal(&self) -> Result<Self, Error> {
        let c0 = self.constant_term();
        let inv0 = c0.inv().ok_or(Error::NonUnitLeading)?;
        if self.order == EXACT {
            if self.terms.len() == 1 {
                return Ok(Self::constant(self.dim, inv0));
            }
            return Err(Error::TruncationInsufficient(
                "reciprocal of an exact non-constant jet needs a finite order".into(),
            ));
        }
        if self.order < 0 {
            return Err(Error::TruncationInsufficient("reciprocal of a vacuous jet".into()));
        }
        // 1/a = inv0 · Σ_m (−inv0·(a − c0))^m, terminating because (a − c0) has no constant term.
        let mut tail = self.clone();
        tail.terms.remove(&Multi::zero(self.dim));
        let step = tail.mul_coeff(&(-inv0.clone()));
        let mut power = Self::one(self.dim).truncated(self.order);
        let mut acc = power.clone();
        for _ in 0..self.order {
            power = power.mul_unchecked(&step);
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.mul_coeff(&inv0))
    }

    /// Termwise partial derivative; the effective order drops by one.
    pub fn derivative(&self, var: Var) -> Self {
        let slot = var.slot(self.dim);
        let mut out = Self::zero_to(self.dim, ord_sub(self.order, 1));
        for (m, c) in &self.terms {
            let e = m.slots()[slot];
            if e == 0 {
                continue;
            }
            let dm = m.bump(var, -1).expect("exponent checked");
            out.add_term(dm, &c.scale(&Scalar::from_int(e as i64)));
        }
        out
    }

    /// `∂^α` for a full multi-index `α` over `(z, z̄)`.
    pub fn derivative_multi(&self, alpha: &Multi) -> Self {
        let mut out = Self::zero_to(self.dim, ord_sub(self.order, alpha.degree() as i64));
        for (m, c) in &self.terms {
            if let Some(dm) = m.checked_sub(alpha) {
                out.add_term(dm, &c.scale(&int_scalar(m.falling(alpha))));
            }
        }
        out
    }

    /// Multiplies by the exact monomial `x^m`.
    pub fn shift(&self, m: &Multi) -> Self {
        let order = ord_add(self.order, m.degree() as i64);
        JetSeries::from_terms(self.dim, order, self.terms.iter().map(|(k, c)| (k.add(m), c.clone())))
    }

    /// Keeps only the terms whose exponent satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Multi) -> bool) -> Self {
        JetSeries::from_terms(
            self.dim,
            self.order,
            self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Purely holomorphic part (terms without `z̄`).
    pub fn holomorphic_part(&self) -> Self {
        self.filter(|m| m.anti_degree() == 0)
    }

    /// Swaps `z` and `z̄` (formal conjugation of exponents, coefficients unchanged).
    pub fn swap_variables(&self) -> Self {
        JetSeries::from_terms(self.dim, self.order, self.terms.iter().map(|(m, c)| (m.conjugate(), c.clone())))
    }

    /// Compares up to the common order, returning the residual `self − other`.
    pub fn residual(&self, other: &Self) -> Self {
        self - other
    }

    fn check_dim(&self, other: &Self) -> Result<(), Error> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.dim, other.dim, "jet dimension mismatch");
        let order = self.order.min(other.order);
        let mut out = self.clone();
        out.truncate(order);
        for (m, c) in &other.terms {
            if negate {
                out.add_term(m.clone(), &-(c.clone()));
            } else {
                out.add_term(m.clone(), c);
            }
        }
        out
    }
}

impl JetSeries<Scalar> {
    /// Lifts a scalar jet into any coefficient ring.
    pub fn lift<D: Coeff>(&self) -> JetSeries<D> {
        self.map_coeffs(|c| D::from_scalar(c.clone()))
    }
}

impl<C: Coeff> PartialEq for JetSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let order = self.order.min(other.order);
        let a = self.terms.iter().filter(|(m, _)| (m.degree() as Order) <= order);
        let b = other.terms.iter().filter(|(m, _)| (m.degree() as Order) <= order);
        a.eq(b)
    }
}

impl<C: Coeff> fmt::Debug for JetSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}·{m:?}")?;
        }
        if self.order == EXACT {
            Ok(())
        } else {
            write!(f, " + O({})", self.order + 1)
        }
    }
}

impl<C: Coeff> Add for &JetSeries<C> {
    type Output = JetSeries<C>;
    fn add(self, rhs: Self) -> JetSeries<C> {
        self.combine(rhs, false)
    }
}

impl<C: Coeff> Sub for &JetSeries<C> {
    type Output = JetSeries<C>;
    fn sub(self, rhs: Self) -> JetSeries<C> {
        self.combine(rhs, true)
    }
}

impl<C: Coeff> Mul for &JetSeries<C> {
    type Output = JetSeries<C>;
    fn mul(self, rhs: Self) -> JetSeries<C> {
        assert_eq!(self.dim, rhs.dim, "jet dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl<C: Coeff> Neg for &JetSeries<C> {
    type Output = JetSeries<C>;
    fn neg(self) -> JetSeries<C> {
        self.map_coeffs(|c| -(c.clone()))
    }
}
