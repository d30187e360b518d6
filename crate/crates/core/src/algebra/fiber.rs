//! Polynomials in the fiber variables `(ζ, ζ̄)` of `T*M` with jet coefficients:
//! functions on the formal neighborhood of the zero section.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::eps::{Dual, EpsPair};
use super::jet::JetSeries;
use super::multi::{ord_add, ord_sub, Multi, Order, Var, EXACT};
use super::scalar::{Coeff, Scalar};

/// A fiber variable: `ζ_k` or `ζ̄_l` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberVar {
    Zeta(usize),
    ZetaBar(usize),
}

impl FiberVar {
    fn as_var(self) -> Var {
        match self {
            FiberVar::Zeta(k) => Var::Z(k),
            FiberVar::ZetaBar(l) => Var::Zbar(l),
        }
    }

    /// The base coordinate canonically paired with this fiber variable.
    pub fn partner(self) -> Var {
        self.as_var()
    }
}

/// `Σ ζ^a ζ̄^b · c_{ab}(z, z̄)` with every fiber degree `<= fiber_order` exact and
/// every coefficient exact up to the common `jet_order`.
#[derive(Clone)]
pub struct FiberPoly<C = Scalar> {
    dim: usize,
    fiber_order: Order,
    jet_order: Order,
    terms: BTreeMap<Multi, JetSeries<C>>,
}

impl<C: Coeff> FiberPoly<C> {
    pub fn zero(dim: usize, fiber_order: Order, jet_order: Order) -> Self {
        assert!(fiber_order != EXACT, "fiber order must be finite");
        Self {
            dim,
            fiber_order,
            jet_order,
            terms: BTreeMap::new(),
        }
    }

    /// A base function viewed as a fiber-constant polynomial.
    pub fn from_jet(f: &JetSeries<C>, fiber_order: Order) -> Self {
        let mut p = Self::zero(f.dim(), fiber_order, f.order());
        p.add_term(Multi::zero(f.dim()), f.clone());
        p
    }

    pub fn monomial(dim: usize, fiber: Multi, coeff: JetSeries<C>, fiber_order: Order) -> Self {
        let mut p = Self::zero(dim, fiber_order, coeff.order());
        p.add_term(fiber, coeff);
        p
    }

    pub fn fiber_var(dim: usize, v: FiberVar, fiber_order: Order) -> Self {
        Self::monomial(dim, Multi::unit(dim, v.as_var()), JetSeries::one(dim), fiber_order)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fiber_order(&self) -> Order {
        self.fiber_order
    }

    pub fn jet_order(&self) -> Order {
        self.jet_order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multi, &JetSeries<C>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Multi) -> JetSeries<C> {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| JetSeries::zero_to(self.dim, self.jet_order))
    }

    /// Lowest fiber degree of a stored term, or the first unknown degree if none.
    pub fn min_degree(&self) -> Order {
        self.terms
            .keys()
            .map(|m| m.degree() as Order)
            .min()
            .unwrap_or_else(|| ord_add(self.fiber_order, 1))
    }

    /// Lowest base degree among the coefficients, or the first unknown jet degree if none.
    pub fn low_jet_degree(&self) -> Order {
        self.terms
            .values()
            .map(JetSeries::low_degree)
            .min()
            .unwrap_or_else(|| ord_add(self.jet_order, 1))
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Multi::degree).max()
    }

    /// Adds `coeff · ζ^fiber`, lowering the jet order to the coefficient's order.
    pub fn add_term(&mut self, fiber: Multi, coeff: JetSeries<C>) {
        assert_eq!(coeff.dim(), self.dim, "fiber coefficient dimension mismatch");
        if (fiber.degree() as Order) > self.fiber_order {
            return;
        }
        if coeff.order() < self.jet_order {
            self.set_jet_order(coeff.order());
        }
        if coeff.is_zero() {
            return;
        }
        let coeff = coeff.truncated(self.jet_order);
        let merged = match self.terms.remove(&fiber) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(fiber, merged);
        }
    }

    fn set_jet_order(&mut self, order: Order) {
        self.jet_order = order;
        let mut drop = Vec::new();
        for (m, c) in self.terms.iter_mut() {
            c.truncate(order);
            if c.is_zero() {
                drop.push(m.clone());
            }
        }
        for m in drop {
            self.terms.remove(&m);
        }
    }

    pub fn truncate_jet(&mut self, order: Order) {
        if order < self.jet_order {
            self.set_jet_order(order);
        }
    }

    pub fn truncate_fiber(&mut self, order: Order) {
        if order < self.fiber_order {
            self.fiber_order = order;
            self.terms.retain(|m, _| (m.degree() as Order) <= order);
        }
    }

    /// Drops terms above `order` and declares the rest exact through `order`.
    ///
    /// Raising the order asserts that the missing degrees are zero; callers use
    /// it to treat a truncation as an exact polynomial.
    pub fn with_fiber_order(mut self, order: Order) -> Self {
        assert!(order != EXACT, "fiber order must be finite");
        self.terms.retain(|m, _| (m.degree() as Order) <= order);
        self.fiber_order = order;
        self
    }

    pub fn truncated(mut self, fiber_order: Order, jet_order: Order) -> Self {
        self.truncate_fiber(fiber_order);
        self.truncate_jet(jet_order);
        self
    }

    /// Homogeneous component of total fiber degree `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        self.filter(|m| m.degree() == d)
    }

    /// Component of bidegree `(p, q)`: degree `p` in `ζ`, `q` in `ζ̄`.
    pub fn bidegree(&self, p: u32, q: u32) -> Self {
        self.filter(|m| m.holo_degree() == p && m.anti_degree() == q)
    }

    pub fn filter(&self, keep: impl Fn(&Multi) -> bool) -> Self {
        let mut out = Self::zero(self.dim, self.fiber_order, self.jet_order);
        for (m, c) in &self.terms {
            if keep(m) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Restriction to the zero section (the map `E`).
    pub fn zero_section(&self) -> JetSeries<C> {
        self.coeff(&Multi::zero(self.dim))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&JetSeries<C>) -> JetSeries<D>) -> FiberPoly<D> {
        let mut out = FiberPoly::zero(self.dim, self.fiber_order, self.jet_order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn mul_jet(&self, f: &JetSeries<C>) -> Self {
        let jet_order = ord_add(self.jet_order, f.low_degree()).min(ord_add(f.order(), self.low_jet_degree()));
        let mut out = Self::zero(self.dim, self.fiber_order, jet_order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * f);
        }
        out
    }

    /// Multiplies by the exact fiber monomial `ζ^m` (fiber order rises by `|m|`).
    pub fn shift_fiber(&self, m: &Multi) -> Self {
        let mut out = Self::zero(self.dim, ord_add(self.fiber_order, m.degree() as i64), self.jet_order);
        for (k, c) in &self.terms {
            out.add_term(k.add(m), c.clone());
        }
        out
    }

    /// Partial derivative in a base coordinate; the jet order drops by one.
    pub fn diff_base(&self, var: Var) -> Self {
        let mut out = Self::zero(self.dim, self.fiber_order, ord_sub(self.jet_order, 1));
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.derivative(var));
        }
        out
    }

    /// Partial derivative in a fiber variable; the fiber order drops by one.
    pub fn diff_fiber(&self, v: FiberVar) -> Self {
        let var = v.as_var();
        let mut out = Self::zero(self.dim, ord_sub(self.fiber_order, 1), self.jet_order);
        for (m, c) in &self.terms {
            let e = m.get(var);
            if e == 0 {
                continue;
            }
            let dm = m.bump(var, -1).expect("exponent checked");
            out.add_term(dm, c.scale(&Scalar::from_int(e as i64)));
        }
        out
    }

    /// Every monomial carries at least one `ζ` and at least one `ζ̄`.
    pub fn has_mixed_support(&self) -> bool {
        self.terms.keys().all(|m| m.holo_degree() >= 1 && m.anti_degree() >= 1)
    }

    /// True when all odd-degree components vanish.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.degree() % 2 == 0)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.dim, other.dim, "fiber polynomial dimension mismatch");
        let mut out = Self::zero(
            self.dim,
            self.fiber_order.min(other.fiber_order),
            self.jet_order.min(other.jet_order),
        );
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        for (m, c) in &other.terms {
            out.add_term(m.clone(), if negate { -c } else { c.clone() });
        }
        out
    }

    fn mul_impl(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "fiber polynomial dimension mismatch");
        let fiber_order = ord_add(self.fiber_order, other.min_degree())
            .min(ord_add(other.fiber_order, self.min_degree()));
        let jet_order = ord_add(self.jet_order, other.low_jet_degree()).min(ord_add(other.jet_order, self.low_jet_degree()));
        let mut out = Self::zero(self.dim, fiber_order, jet_order);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if (ma.degree() + mb.degree()) as Order > fiber_order {
                    continue;
                }
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        out
    }

    /// Total number of stored scalar coefficients.
    pub fn count_terms(&self) -> usize {
        self.terms.values().map(JetSeries::len).sum()
    }
}

impl FiberPoly<Scalar> {
    pub fn lift<D: Coeff>(&self) -> FiberPoly<D> {
        self.map_coeffs(|c| c.lift::<D>())
    }
}

impl FiberPoly<Dual> {
    pub fn body(&self) -> FiberPoly<Scalar> {
        self.map_coeffs(|c| c.map_coeffs(|d| d.body.clone()))
    }

    pub fn soul(&self) -> FiberPoly<Scalar> {
        self.map_coeffs(|c| c.map_coeffs(|d| d.soul.clone()))
    }

    pub fn split(&self) -> EpsPair<FiberPoly<Scalar>> {
        EpsPair::new(self.body(), self.soul())
    }

    pub fn from_parts(body: &FiberPoly<Scalar>, soul: &FiberPoly<Scalar>) -> Self {
        let b: FiberPoly<Dual> = body.lift();
        let s: FiberPoly<Dual> = soul.map_coeffs(|c| c.map_coeffs(|x| Dual::new(Scalar::zero(), x.clone())));
        &b + &s
    }
}

impl JetSeries<Dual> {
    pub fn body(&self) -> JetSeries<Scalar> {
        self.map_coeffs(|d| d.body.clone())
    }

    pub fn soul(&self) -> JetSeries<Scalar> {
        self.map_coeffs(|d| d.soul.clone())
    }

    pub fn from_parts(body: &JetSeries<Scalar>, soul: &JetSeries<Scalar>) -> Self {
        let b: JetSeries<Dual> = body.lift();
        let s = soul.map_coeffs(|x| Dual::new(Scalar::zero(), x.clone()));
        &b + &s
    }
}

impl<C: Coeff> PartialEq for FiberPoly<C> {
    /// Equal up to the common fiber order and the common jet order.
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        (self - other).is_zero()
    }
}

impl<C: Coeff> fmt::Debug for FiberPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiberPoly[N={}, M={}]{{", self.fiber_order, self.jet_order)?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "ζ{m:?}: {c:?}")?;
        }
        write!(f, "}}")
    }
}

impl<C: Coeff> Add for &FiberPoly<C> {
    type Output = FiberPoly<C>;
    fn add(self, rhs: Self) -> FiberPoly<C> {
        self.combine(rhs, false)
    }
}

impl<C: Coeff> Sub for &FiberPoly<C> {
    type Output = FiberPoly<C>;
    fn sub(self, rhs: Self) -> FiberPoly<C> {
        self.combine(rhs, true)
    }
}

impl<C: Coeff> Mul for &FiberPoly<C> {
    type Output = FiberPoly<C>;
    fn mul(self, rhs: Self) -> FiberPoly<C> {
        self.mul_impl(rhs)
    }
}

impl<C: Coeff> Neg for &FiberPoly<C> {
    type Output = FiberPoly<C>;
    fn neg(self) -> FiberPoly<C> {
        self.map_coeffs(|c| -c)
    }
}
