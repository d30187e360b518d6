//! Star products with separation of variables determined by a formal potential.
//!
//! `L_f` is the unique operator with holomorphic derivatives only that commutes
//! with every `∂/∂z̄^l + ∂Φ/∂z̄^l` and sends `1` to `f`; `R_f` is its mirror image.
//! Both are solved grade by grade, top derivative order first, using only the
//! invertibility of the mixed Hessian of `Φ_{-1}`.

mod berezin;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use serde::Serialize;

use crate::algebra::{inv_int_scalar, ord_sub, DiffOp, FiberPoly, JetSeries, Multi, NuSeries, OpGrade, Order, Scalar, Var};
use crate::error::{Error, Result};
use crate::geometry::{metric_from_potential, Geometry, PotentialData};
use crate::groupoid::Side;

pub use berezin::{
    berezin, dual_berezin_check, h_from_x3, operator_inverse, operator_log, pair_s1, parity_hat, reconstruct_operator,
    sigma_y_pipeline, BerezinData, SigmaYOutcome,
};

/// Which multiplication operator: `L_f g = f ∗ g` or `R_f g = g ∗ f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Hand {
    Left,
    Right,
}

impl Hand {
    pub fn name(self) -> &'static str {
        match self {
            Hand::Left => "left",
            Hand::Right => "right",
        }
    }

    /// The groupoid map whose σ-symbol this operator carries.
    pub fn side(self) -> Side {
        match self {
            Hand::Left => Side::Source,
            Hand::Right => Side::Target,
        }
    }

    /// Coordinate differentiated by the operator.
    fn active(self, i: usize) -> Var {
        match self {
            Hand::Left => Var::Z(i),
            Hand::Right => Var::Zbar(i),
        }
    }
}

impl From<Side> for Hand {
    fn from(side: Side) -> Self {
        match side {
            Side::Source => Hand::Left,
            Side::Target => Hand::Right,
        }
    }
}

impl FromStr for Hand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Hand::Left),
            "right" => Ok(Hand::Right),
            other => Err(Error::Invalid(format!("unknown side {other:?}"))),
        }
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

type CacheKey = (Hand, Order, Vec<(Multi, Scalar)>);

/// The star product of a potential, through `ν`-order `nu_order`.
///
/// Multiplication operators are cached per input function; the cache is behind a
/// mutex and only completed operators are inserted.
pub struct StarProduct {
    potential: PotentialData,
    nu_order: usize,
    geometry: Geometry,
    cache: Mutex<HashMap<CacheKey, DiffOp>>,
}

impl StarProduct {
    pub fn new(potential: PotentialData, nu_order: usize) -> Result<Self> {
        let geometry = metric_from_potential(&potential)?;
        Ok(Self {
            potential,
            nu_order,
            geometry,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn potential(&self) -> &PotentialData {
        &self.potential
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn dim(&self) -> usize {
        self.potential.dim()
    }

    pub fn nu_order(&self) -> usize {
        self.nu_order
    }

    /// The same potential at another `ν`-order.
    pub fn with_nu_order(&self, nu_order: usize) -> Self {
        Self {
            potential: self.potential.clone(),
            nu_order,
            geometry: self.geometry.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// `L_f` or `R_f`.
    pub fn mult_op(&self, f: &JetSeries, hand: Hand) -> Result<DiffOp> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), f.dim()));
        }
        let key: CacheKey = (hand, f.order(), f.terms().map(|(m, c)| (m.clone(), c.clone())).collect());
        if let Some(op) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(op.clone());
        }
        let op = self.solve_mult_op(f, hand)?;
        self.cache.lock().expect("cache poisoned").insert(key, op.clone());
        Ok(op)
    }

    /// `L_f` for a formal function `f = Σ ν^i f_i`.
    pub fn mult_op_series(&self, f: &NuSeries, hand: Hand) -> Result<DiffOp> {
        let r = self.nu_order.min(f.nu_order());
        let mut acc = DiffOp::zero(self.dim(), r);
        for i in 0..=r {
            let part = self.mult_op(f.grade(i), hand)?.truncated_nu(r - i).shift_nu(i);
            acc = acc.add(&part);
        }
        Ok(acc)
    }

    /// `f ∗ g` as a `ν`-series.
    pub fn star(&self, f: &JetSeries, g: &JetSeries) -> Result<NuSeries> {
        Ok(self.mult_op(f, Hand::Left)?.apply(g))
    }

    /// `f ∗ g` for formal functions.
    pub fn star_series(&self, f: &NuSeries, g: &NuSeries) -> Result<NuSeries> {
        Ok(self.mult_op_series(f, Hand::Left)?.apply_series(g))
    }

    /// The bidifferential component `C_r(f, g)`.
    pub fn component(&self, r: usize, f: &JetSeries, g: &JetSeries) -> Result<JetSeries> {
        if r > self.nu_order {
            return Err(Error::TruncationInsufficient(format!(
                "C_{r} requested from a product known to ν-order {}",
                self.nu_order
            )));
        }
        Ok(self.mult_op(f, Hand::Left)?.grade(r).apply(g))
    }

    /// `∂Φ_j/∂x` for `j = -1, 0, …, nu_order - 1`, indexed from `j = -1`.
    fn potential_gradients(&self, var: Var) -> Vec<JetSeries> {
        let mut out = vec![self.potential.phi_minus1.derivative(var)];
        for j in 0..self.nu_order {
            out.push(self.potential.phi(j).derivative(var));
        }
        out
    }

    /// `g^{lk}` with `active` the differentiated index and `partner` the other.
    fn contraction(&self, hand: Hand, active: usize, partner: usize) -> &JetSeries {
        match hand {
            Hand::Left => self.geometry.g(partner, active),
            Hand::Right => self.geometry.g(active, partner),
        }
    }

    fn solve_mult_op(&self, f: &JetSeries, hand: Hand) -> Result<DiffOp> {
        let dim = self.dim();
        // phi[p][j + 1] = ∂Φ_j / ∂(partner p)
        let phi: Vec<Vec<JetSeries>> = (0..dim)
            .map(|p| self.potential_gradients(hand.active(p).conjugate()))
            .collect();
        let mut grades = vec![OpGrade::multiplication(f)];
        for s in 0..self.nu_order {
            let rhs: Vec<OpGrade> = (0..dim)
                .map(|p| {
                    let mut c = coeff_derivative(&grades[s], hand.active(p).conjugate());
                    for j in 0..=s {
                        c = c.sub(&commutator_with(&grades[s - j], &phi[p][j + 1]));
                    }
                    c
                })
                .collect();
            grades.push(self.solve_grade(hand, &rhs, &phi, s as u32 + 1)?);
        }
        let op = DiffOp::from_grades(dim, grades);
        if op.jet_order() < 0 {
            return Err(Error::TruncationInsufficient(format!(
                "{} multiplication operator exhausted the jet order",
                hand.name()
            )));
        }
        Ok(op)
    }

    /// Solves `[A, ∂Φ_{-1}/∂(partner p)] = rhs[p]` for `A` of derivative order
    /// `<= top` with no zeroth-order term.
    fn solve_grade(&self, hand: Hand, rhs: &[OpGrade], phi: &[Vec<JetSeries>], top: u32) -> Result<OpGrade> {
        let dim = self.dim();
        let (holo, anti) = (hand == Hand::Left, hand == Hand::Right);
        let order = rhs.iter().map(OpGrade::order).min().unwrap_or(Order::MAX);
        let mut a = OpGrade::zero_to(dim, order);
        for d in (1..=top).rev() {
            for alpha in Multi::of_degree(dim, d, holo, anti) {
                let k = (0..dim).find(|&i| alpha.get(hand.active(i)) > 0).expect("d >= 1");
                let beta = alpha.bump(hand.active(k), -1).expect("positive slot");
                let mut u = JetSeries::zero_to(dim, order);
                for p in 0..dim {
                    let mut r = rhs[p].coeff(&beta);
                    for (known, coeff) in a.terms() {
                        let Some(gamma) = known.checked_sub(&beta) else { continue };
                        if gamma.degree() < 2 {
                            continue;
                        }
                        let dphi = phi[p][0].derivative_multi(&gamma);
                        let binom = crate::algebra::int_scalar(known.binomial(&gamma));
                        r = &r - &(coeff * &dphi).scale(&binom);
                    }
                    u = &u + &(&r * self.contraction(hand, k, p));
                }
                let denom = inv_int_scalar((beta.get(hand.active(k)) as i64 + 1).into());
                a.add_term(alpha, u.scale(&denom));
            }
        }
        Ok(a)
    }
}

impl fmt::Debug for StarProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StarProduct")
            .field("potential", &self.potential)
            .field("nu_order", &self.nu_order)
            .finish_non_exhaustive()
    }
}

/// `L_f` or `R_f` for `sp`.
pub fn left_mult_op(sp: &StarProduct, f: &JetSeries, hand: Hand) -> Result<DiffOp> {
    sp.mult_op(f, hand)
}

/// `f ∗ g`.
pub fn star_multiply(sp: &StarProduct, f: &JetSeries, g: &JetSeries) -> Result<NuSeries> {
    sp.star(f, g)
}

/// `σ(L_f)` or `σ(R_f)` through fiber degree `fiber_order`.
pub fn mult_op_symbol(sp: &StarProduct, f: &JetSeries, hand: Hand, fiber_order: Order) -> Result<FiberPoly> {
    sp.mult_op(f, hand)?.sigma_symbol(fiber_order)
}

/// The grade with every coefficient differentiated by `var`, i.e. `−[A, ∂/∂var]`.
fn coeff_derivative(a: &OpGrade, var: Var) -> OpGrade {
    let mut out = OpGrade::zero_to(a.dim(), ord_sub(a.order(), 1));
    for (m, c) in a.terms() {
        out.add_term(m.clone(), c.derivative(var));
    }
    out
}

/// `[A, φ]` for multiplication by `φ`: `Σ_α a_α Σ_{0<γ<=α} C(α,γ) (∂^γ φ) ∂^{α−γ}`.
fn commutator_with(a: &OpGrade, phi: &JetSeries) -> OpGrade {
    let ord = a.diff_order().unwrap_or(0) as i64;
    let mut out = OpGrade::zero_to(a.dim(), a.order().min(ord_sub(phi.order(), ord)));
    for (alpha, c) in a.terms() {
        for gamma in alpha.sub_indices() {
            if gamma.is_zero() {
                continue;
            }
            let dphi = phi.derivative_multi(&gamma);
            if dphi.is_zero() {
                continue;
            }
            let rest = alpha.checked_sub(&gamma).expect("γ <= α");
            let binom = crate::algebra::int_scalar(alpha.binomial(&gamma));
            out.add_term(rest, (c * &dphi).scale(&binom));
        }
    }
    out
}

#[cfg(test)]
mod tests;
