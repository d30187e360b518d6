//! `ν`-graded formal differential operators `A = Σ ν^r A_r` with jet coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::fiber::FiberPoly;
use super::jet::JetSeries;
use super::multi::{int_scalar, ord_sub, Multi, Order, EXACT};
use super::nu::NuSeries;
use super::scalar::{Coeff, Scalar};
use crate::error::{Error, Result};

/// One grade `Σ_α a_α ∂^α`, where `α` ranges over `(∂_z, ∂_z̄)` exponents.
///
/// All coefficients share one jet order; absent entries are zero up to it.
#[derive(Clone)]
pub struct OpGrade<C = Scalar> {
    dim: usize,
    order: Order,
    terms: BTreeMap<Multi, JetSeries<C>>,
}

impl<C: Coeff> OpGrade<C> {
    pub fn zero(dim: usize) -> Self {
        Self::zero_to(dim, EXACT)
    }

    pub fn zero_to(dim: usize, order: Order) -> Self {
        Self {
            dim,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn multiplication(f: &JetSeries<C>) -> Self {
        let mut g = Self::zero_to(f.dim(), f.order());
        g.add_term(Multi::zero(f.dim()), f.clone());
        g
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multi, &JetSeries<C>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Multi) -> JetSeries<C> {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| JetSeries::zero_to(self.dim, self.order))
    }

    /// Highest derivative order among stored terms.
    pub fn diff_order(&self) -> Option<u32> {
        self.terms.keys().map(Multi::degree).max()
    }

    /// Adds `coeff · ∂^m`; the grade's jet order drops to the coefficient's.
    pub fn add_term(&mut self, m: Multi, coeff: JetSeries<C>) {
        if coeff.order() < self.order {
            self.lower_order(coeff.order());
        }
        if coeff.is_zero() {
            return;
        }
        let coeff = coeff.truncated(self.order);
        let merged = match self.terms.remove(&m) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(m, merged);
        }
    }

    pub fn lower_order(&mut self, order: Order) {
        if order >= self.order {
            return;
        }
        self.order = order;
        self.terms.retain(|_, c| {
            c.truncate(order);
            !c.is_zero()
        });
    }

    pub fn map_coeffs(&self, f: impl Fn(&JetSeries<C>) -> JetSeries<C>) -> Self {
        let mut out = Self::zero_to(self.dim, self.order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let mut out = self.clone();
        out.lower_order(other.order);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), if negate { -c } else { c.clone() });
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    /// `Σ a_α ∂^α f`.
    pub fn apply(&self, f: &JetSeries<C>) -> JetSeries<C> {
        let ord = self.diff_order().unwrap_or(0) as i64;
        let order = self.order.min(ord_sub(f.order(), ord));
        let mut acc = JetSeries::zero_to(self.dim, order);
        for (m, c) in &self.terms {
            acc = &acc + &(c * &f.derivative_multi(m));
        }
        acc.truncated(order)
    }

    /// Leibniz composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        if (self.is_zero() && self.order == EXACT) || (other.is_zero() && other.order == EXACT) {
            return Self::zero(self.dim);
        }
        let ord = self.diff_order().unwrap_or(0) as i64;
        let order = self.order.min(ord_sub(other.order, ord));
        let mut out = Self::zero_to(self.dim, order);
        for (alpha, a) in &self.terms {
            for gamma in alpha.sub_indices() {
                let rest = alpha.checked_sub(&gamma).expect("γ <= α");
                let binom = int_scalar(alpha.binomial(&gamma));
                for (beta, b) in &other.terms {
                    let db = b.derivative_multi(&gamma);
                    if db.is_zero() {
                        continue;
                    }
                    out.add_term(rest.add(beta), (a * &db).scale(&binom));
                }
            }
        }
        out
    }

    /// Order-`r` principal part as a fiber polynomial of degree exactly `r`.
    pub fn principal_symbol(&self, r: u32, fiber_order: Order) -> FiberPoly<C> {
        let mut p = FiberPoly::zero(self.dim, fiber_order, self.order);
        for (m, c) in &self.terms {
            if m.degree() == r {
                p.add_term(m.clone(), c.clone());
            }
        }
        p
    }
}

impl<C: Coeff> PartialEq for OpGrade<C> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.sub(other).is_zero()
    }
}

impl<C: Coeff> fmt::Debug for OpGrade<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[M={}]{{", self.order)?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "∂{m:?}: {c:?}")?;
        }
        write!(f, "}}")
    }
}

/// `A_0 + ν A_1 + … + ν^R A_R`; grades beyond `R` are unknown.
#[derive(Clone)]
pub struct DiffOp<C = Scalar> {
    dim: usize,
    grades: Vec<OpGrade<C>>,
}

impl<C: Coeff> DiffOp<C> {
    pub fn zero(dim: usize, nu_order: usize) -> Self {
        Self {
            dim,
            grades: vec![OpGrade::zero(dim); nu_order + 1],
        }
    }

    pub fn identity(dim: usize, nu_order: usize) -> Self {
        Self::multiplication(&JetSeries::one(dim), nu_order)
    }

    /// Multiplication by `f` at grade 0.
    pub fn multiplication(f: &JetSeries<C>, nu_order: usize) -> Self {
        let mut op = Self::zero(f.dim(), nu_order);
        op.grades[0] = OpGrade::multiplication(f);
        op
    }

    pub fn from_grades(dim: usize, grades: Vec<OpGrade<C>>) -> Self {
        assert!(!grades.is_empty(), "an operator needs at least one grade");
        Self { dim, grades }
    }

    /// `ν^r · coeff · ∂^m` as a single-term operator with `ν`-order `nu_order`.
    pub fn term(r: usize, m: Multi, coeff: JetSeries<C>, nu_order: usize) -> Self {
        let mut op = Self::zero(coeff.dim(), nu_order);
        if r <= nu_order {
            op.grades[r].add_term(m, coeff);
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nu_order(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grade(&self, r: usize) -> &OpGrade<C> {
        &self.grades[r]
    }

    pub fn grade_mut(&mut self, r: usize) -> &mut OpGrade<C> {
        &mut self.grades[r]
    }

    pub fn grades(&self) -> &[OpGrade<C>] {
        &self.grades
    }

    /// Smallest jet order across grades.
    pub fn jet_order(&self) -> Order {
        self.grades.iter().map(OpGrade::order).min().expect("non-empty")
    }

    pub fn is_zero(&self) -> bool {
        self.grades.iter().all(OpGrade::is_zero)
    }

    pub fn truncated_nu(mut self, nu_order: usize) -> Self {
        self.grades.truncate(nu_order + 1);
        self
    }

    fn zip(&self, other: &Self, f: impl Fn(&OpGrade<C>, &OpGrade<C>) -> OpGrade<C>) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        let r = self.nu_order().min(other.nu_order());
        Self {
            dim: self.dim,
            grades: (0..=r).map(|i| f(&self.grades[i], &other.grades[i])).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, OpGrade::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, OpGrade::sub)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self {
            dim: self.dim,
            grades: self.grades.iter().map(|g| g.scale(s)).collect(),
        }
    }

    /// `ν^k · self`; the `ν`-order rises by `k`.
    pub fn shift_nu(&self, k: usize) -> Self {
        let mut grades = vec![OpGrade::zero(self.dim); k];
        grades.extend(self.grades.iter().cloned());
        Self { dim: self.dim, grades }
    }

    /// `self / ν`; fails unless grade 0 vanishes.
    pub fn div_nu(&self) -> Result<Self> {
        if !self.grades[0].is_zero() {
            return Err(Error::Divisibility(format!("grade 0 has {} nonzero terms", self.grades[0].terms.len())));
        }
        if self.grades.len() < 2 {
            return Err(Error::TruncationInsufficient("dividing a ν-order 0 operator by ν".into()));
        }
        Ok(Self {
            dim: self.dim,
            grades: self.grades[1..].to_vec(),
        })
    }

    /// Grade-wise sign flip `A_r ↦ (−1)^r A_r` (the substitution `ν ↦ −ν`).
    pub fn parity_flip(&self) -> Self {
        let minus = Scalar::from_int(-1);
        Self {
            dim: self.dim,
            grades: self
                .grades
                .iter()
                .enumerate()
                .map(|(r, g)| if r % 2 == 1 { g.scale(&minus) } else { g.clone() })
                .collect(),
        }
    }

    pub fn apply(&self, f: &JetSeries<C>) -> NuSeries<C> {
        NuSeries::from_grades(self.dim, self.grades.iter().map(|g| g.apply(f)).collect())
    }

    /// Applies to a formal function `Σ ν^i f_i`.
    pub fn apply_series(&self, f: &NuSeries<C>) -> NuSeries<C> {
        let r = self.nu_order().min(f.nu_order());
        let grades = (0..=r)
            .map(|s| {
                let mut acc = self.grades[0].apply(f.grade(s));
                for i in 1..=s {
                    acc = &acc + &self.grades[i].apply(f.grade(s - i));
                }
                acc
            })
            .collect();
        NuSeries::from_grades(self.dim, grades)
    }

    /// `self ∘ other`, exact through the smaller `ν`-order.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        let r = self.nu_order().min(other.nu_order());
        let grades = crate::exec::map_range(0..=r, |s| {
            let mut acc: Option<OpGrade<C>> = None;
            for i in 0..=s {
                let (a, b) = (&self.grades[i], &other.grades[s - i]);
                if a.is_zero() && b.is_zero() && a.order == EXACT && b.order == EXACT {
                    continue;
                }
                let c = a.compose(b);
                acc = Some(match acc {
                    Some(x) => x.add(&c),
                    None => c,
                });
            }
            acc.unwrap_or_else(|| OpGrade::zero(self.dim))
        });
        Self { dim: self.dim, grades }
    }

    /// `(1/ν)[self, other]`.
    pub fn commutator_over_nu(&self, other: &Self) -> Result<Self> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        ab.sub(&ba).div_nu()
    }

    /// `Σ_r σ_r(A_r)` through fiber degree `fiber_order`; fails on a non-natural grade.
    pub fn sigma_symbol(&self, fiber_order: Order) -> Result<FiberPoly<C>> {
        let report = self.naturality_report();
        if let Some(bad) = report.grades.iter().find(|g| !g.natural) {
            return Err(Error::NotNatural(format!(
                "grade {} has derivative order {}",
                bad.grade,
                bad.diff_order.unwrap_or(0)
            )));
        }
        let top = (self.nu_order() as Order).min(fiber_order);
        let mut acc = FiberPoly::zero(self.dim, top, EXACT);
        for r in 0..=top {
            let g = &self.grades[r as usize];
            acc = &acc + &g.principal_symbol(r as u32, top);
        }
        Ok(acc)
    }

    /// Per-grade derivative orders against the bound `ord(A_r) <= r` and the
    /// sharper bound `ord(A_{2k}), ord(A_{2k+1}) <= 2k`.
    pub fn naturality_report(&self) -> NaturalityReport {
        let grades: Vec<GradeOrder> = self
            .grades
            .iter()
            .enumerate()
            .map(|(r, g)| {
                let d = g.diff_order();
                let o = d.unwrap_or(0);
                GradeOrder {
                    grade: r,
                    diff_order: d,
                    jet_order: if g.order == EXACT { None } else { Some(g.order) },
                    natural: o as usize <= r,
                    sharp: o as usize <= r - r % 2,
                }
            })
            .collect();
        NaturalityReport {
            natural: grades.iter().all(|g| g.natural),
            sharp: grades.iter().all(|g| g.sharp),
            grades,
        }
    }
}

impl<C: Coeff> PartialEq for DiffOp<C> {
    /// Grade-wise equality up to the common `ν`-order and jet orders.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.grades.iter().zip(&other.grades).all(|(a, b)| a == b)
    }
}

impl<C: Coeff> fmt::Debug for DiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.grades).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradeOrder {
    pub grade: usize,
    /// `None` for a grade with no stored terms.
    pub diff_order: Option<u32>,
    /// `None` when the grade is exact.
    pub jet_order: Option<Order>,
    pub natural: bool,
    pub sharp: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalityReport {
    pub natural: bool,
    pub sharp: bool,
    pub grades: Vec<GradeOrder>,
}
