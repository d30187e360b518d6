//! The Hamiltonian `K` that generates a separation-of-variables groupoid, and
//! its first-order deformation `F = K + εJ`.
//!
//! `K` is determined degree by degree from `K_2 = g^{lk} ζ_k ζ̄_l` and the
//! requirement that `{e^{H_K} a, ã} = 0` for holomorphic `a, ã` (and the
//! conjugate condition). With linear test functions the degree-`n − 2` part of
//! that requirement reads
//!
//! `∂²K_n/∂ζ_k∂ζ_p = −∂/∂ζ_p [e^{H_{K'}} z^k]_{n−1}`, `K' = K_2 + … + K_{n−1}`,
//!
//! and Euler's identity rebuilds each bidegree `(p, q)` of `K_n` with `p >= 2`.
//! The conjugate equations rebuild every bidegree with `q >= 2`; where both
//! apply the two results must agree.

use serde::Serialize;

use crate::algebra::{
    check_hamiltonian, ham_exp_unchecked, ham_phi1, inv_int_scalar, poisson_bracket, Coeff, Dual, FiberPoly, FiberVar,
    JetSeries, Multi, Order, Scalar, Var, EXACT,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{DeformedGeometry, Geometry};
use crate::groupoid::{FiberMap, Side};
use crate::report::{Check, Report};

/// The element of the Hamiltonian set attached to a tensor `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct KElement {
    geometry: Geometry,
    value: FiberPoly,
}

impl KElement {
    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn value(&self) -> &FiberPoly {
        &self.value
    }

    pub fn fiber_order(&self) -> Order {
        self.value.fiber_order()
    }

    /// `K_n`.
    pub fn component(&self, n: u32) -> FiberPoly {
        self.value.homogeneous(n)
    }

    pub fn map(&self, side: Side) -> ElementMap {
        ElementMap::new(self.value.clone(), side)
    }
}

/// `F = K + εJ` attached to a deformed tensor `g + εh`.
#[derive(Clone, Debug, PartialEq)]
pub struct FElement {
    deformed: DeformedGeometry,
    value: FiberPoly<Dual>,
}

impl FElement {
    pub fn deformed(&self) -> &DeformedGeometry {
        &self.deformed
    }

    pub fn value(&self) -> &FiberPoly<Dual> {
        &self.value
    }

    pub fn fiber_order(&self) -> Order {
        self.value.fiber_order()
    }

    /// `K`.
    pub fn body(&self) -> KElement {
        KElement {
            geometry: self.deformed.base().clone(),
            value: self.value.body(),
        }
    }

    /// `J`.
    pub fn soul(&self) -> FiberPoly {
        self.value.soul()
    }

    pub fn map(&self, side: Side) -> ElementMap<Dual> {
        ElementMap::new(self.value.clone(), side)
    }
}

/// `K` through fiber degree `n`.
pub fn solve_k(g: &Geometry, n: Order) -> Result<KElement> {
    Ok(KElement {
        geometry: g.clone(),
        value: solve_element(g, n)?,
    })
}

/// `F = K + εJ` through fiber degree `n`, by the same recursion over dual numbers.
pub fn solve_f(d: &DeformedGeometry, n: Order) -> Result<FElement> {
    Ok(FElement {
        deformed: d.clone(),
        value: solve_element(&d.lifted(), n)?,
    })
}

/// `g^{lk} ζ_k ζ̄_l` with the given fiber order.
pub fn quadratic_part<C: Coeff>(g: &Geometry<C>, fiber_order: Order) -> FiberPoly<C> {
    let dim = g.dim();
    let mut k2 = FiberPoly::zero(dim, fiber_order, g.jet_order());
    for l in 0..dim {
        for k in 0..dim {
            let m = Multi::unit(dim, Var::Z(k)).add(&Multi::unit(dim, Var::Zbar(l)));
            k2.add_term(m, g.g(l, k).clone());
        }
    }
    k2
}

/// The recursion, generic over the coefficient ring.
pub fn solve_element<C: Coeff + Send + Sync>(g: &Geometry<C>, n: Order) -> Result<FiberPoly<C>> {
    if n < 2 {
        return Err(Error::Invalid(format!("fiber order {n} is below the quadratic part")));
    }
    let mut k = quadratic_part(g, 2);
    for deg in 3..=n {
        // K' is used as an exact polynomial here; the unknown K_deg is excluded on purpose.
        let known = k.with_fiber_order(deg);
        let r_holo = second_derivatives(&known, deg, true);
        let r_anti = second_derivatives(&known, deg, false);
        let kn = assemble(&euler_sum(&r_holo, deg, true), &euler_sum(&r_anti, deg, false), deg)?;
        check_residual(&kn, &r_holo, deg, true)?;
        check_residual(&kn, &r_anti, deg, false)?;
        if deg % 2 == 1 && !kn.is_zero() {
            return Err(Error::InconsistentRecursion {
                degree: deg as u32,
                detail: "odd component does not vanish".into(),
            });
        }
        k = &known + &kn;
    }
    if k.jet_order() < 0 {
        return Err(Error::TruncationInsufficient(format!(
            "jet order {} cannot support fiber order {n}",
            g.jet_order()
        )));
    }
    Ok(k)
}

/// `R^{ab} = ∂²K_deg/∂ζ_a∂ζ_b` as demanded by the recursion (or its conjugate,
/// with `ζ̄` and `z̄`), indexed `[a][b]`.
fn second_derivatives<C: Coeff + Send + Sync>(known: &FiberPoly<C>, deg: Order, holo: bool) -> Vec<Vec<FiberPoly<C>>> {
    let dim = known.dim();
    exec::map_range(0..=dim - 1, |a| {
        let test = FiberPoly::from_jet(&JetSeries::var(dim, base_var(holo, a)), deg - 1);
        let flow = ham_exp_unchecked(known, &test).homogeneous((deg - 1) as u32);
        (0..dim).map(|b| -&flow.diff_fiber(fiber_var(holo, b))).collect()
    })
}

fn base_var(holo: bool, i: usize) -> Var {
    if holo {
        Var::Z(i)
    } else {
        Var::Zbar(i)
    }
}

fn fiber_var(holo: bool, i: usize) -> FiberVar {
    if holo {
        FiberVar::Zeta(i)
    } else {
        FiberVar::ZetaBar(i)
    }
}

/// `Σ_{a,b} ζ_a ζ_b R^{ab}`, which equals `p(p−1)` times each `ζ`-degree-`p` part.
fn euler_sum<C: Coeff>(r: &[Vec<FiberPoly<C>>], deg: Order, holo: bool) -> FiberPoly<C> {
    let dim = r.len();
    let mut out = FiberPoly::zero(dim, deg, EXACT);
    for (a, row) in r.iter().enumerate() {
        for (b, rab) in row.iter().enumerate() {
            let shift = Multi::unit(dim, base_var(holo, a)).add(&Multi::unit(dim, base_var(holo, b)));
            out = &out + &rab.shift_fiber(&shift);
        }
    }
    out
}

/// Confirms that `K_deg` reproduces every demanded second derivative.
fn check_residual<C: Coeff>(kn: &FiberPoly<C>, r: &[Vec<FiberPoly<C>>], deg: Order, holo: bool) -> Result<()> {
    for (a, row) in r.iter().enumerate() {
        for (b, rab) in row.iter().enumerate() {
            let d2 = kn.diff_fiber(fiber_var(holo, a)).diff_fiber(fiber_var(holo, b));
            if &d2 != rab {
                return Err(Error::InconsistentRecursion {
                    degree: deg as u32,
                    detail: format!(
                        "{} second derivative ({}, {}) is not reproduced",
                        if holo { "holomorphic" } else { "antiholomorphic" },
                        a + 1,
                        b + 1
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Divides each bidegree of the Euler sums and cross-checks the overlap.
fn assemble<C: Coeff>(holo: &FiberPoly<C>, anti: &FiberPoly<C>, deg: Order) -> Result<FiberPoly<C>> {
    let dim = holo.dim();
    let mut out = FiberPoly::zero(dim, deg, holo.jet_order().min(anti.jet_order()));
    for p in 0..=deg as u32 {
        let q = deg as u32 - p;
        let from_holo = (p >= 2).then(|| holo.bidegree(p, q).scale(&inv_int_scalar((p * (p - 1)).into())));
        let from_anti = (q >= 2).then(|| anti.bidegree(p, q).scale(&inv_int_scalar((q * (q - 1)).into())));
        let part = match (from_holo, from_anti) {
            (Some(a), Some(b)) => {
                if a != b {
                    return Err(Error::InconsistentRecursion {
                        degree: deg as u32,
                        detail: format!("bidegree ({p},{q}) differs between the two routes"),
                    });
                }
                a
            }
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("degree >= 3 has p >= 2 or q >= 2"),
        };
        if (p == 0 || q == 0) && !part.is_zero() {
            return Err(Error::InconsistentRecursion {
                degree: deg as u32,
                detail: format!("bidegree ({p},{q}) is not divisible by both fiber directions"),
            });
        }
        for (m, c) in part.terms() {
            out.add_term(m.clone(), c.clone());
        }
    }
    Ok(out)
}

/// `{e^{H_F} a, ã}` and `{e^{H_F} b, b̃}` for all monomial test functions of degree
/// `1..=test_degree`.
pub fn membership_report<C: Coeff + Send + Sync>(f: &FiberPoly<C>, test_degree: u32) -> Result<Report> {
    check_hamiltonian(f)?;
    let dim = f.dim();
    let n = f.fiber_order();
    let mut report = Report::new("membership");
    for holo in [true, false] {
        let tests: Vec<Multi> = (1..=test_degree)
            .flat_map(|d| Multi::of_degree(dim, d, holo, !holo))
            .collect();
        let checks = exec::map(&tests, |a| {
            let lifted = FiberPoly::from_jet(&JetSeries::monomial(dim, a.clone(), C::one()), n);
            let flow = ham_exp_unchecked(f, &lifted);
            tests
                .iter()
                .map(|b| {
                    let other = FiberPoly::from_jet(&JetSeries::monomial(dim, b.clone(), C::one()), n);
                    let r = poisson_bracket(&flow, &other).expect("same dimension");
                    Check::from_fiber(format!("{}[{a:?},{b:?}]", if holo { "holomorphic" } else { "antiholomorphic" }), &r)
                })
                .collect::<Vec<_>>()
        });
        report.extend(checks.into_iter().flatten());
    }
    Ok(report)
}

/// `S(ab) = a·e^{H_K} b` or `T(ab) = (e^{H_K} a)·b`.
pub fn st_from_element<C: Coeff>(k: &FiberPoly<C>, a: &JetSeries<C>, b: &JetSeries<C>, side: Side) -> Result<FiberPoly<C>> {
    if !a.is_holomorphic() {
        return Err(Error::NotPure("first factor must be holomorphic".into()));
    }
    if !b.is_antiholomorphic() {
        return Err(Error::NotPure("second factor must be antiholomorphic".into()));
    }
    check_hamiltonian(k)?;
    let n = k.fiber_order();
    Ok(match side {
        Side::Source => ham_exp_unchecked(k, &FiberPoly::from_jet(b, n)).mul_jet(a),
        Side::Target => ham_exp_unchecked(k, &FiberPoly::from_jet(a, n)).mul_jet(b),
    })
}

/// Writes `f = Σ_β a_β z̄^β` (source) or `Σ_α z^α b_α` (target); returns
/// `(pure monomial to flow, remaining factor)` pairs.
fn split_pure<C: Coeff>(f: &JetSeries<C>, side: Side) -> Vec<(JetSeries<C>, JetSeries<C>)> {
    use std::collections::BTreeMap;
    let dim = f.dim();
    let mut groups: BTreeMap<Multi, JetSeries<C>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let (flowed, rest) = match side {
            Side::Source => (Multi::from_parts(&vec![0; dim], m.anti()), Multi::from_parts(m.holo(), &vec![0; dim])),
            Side::Target => (Multi::from_parts(m.holo(), &vec![0; dim]), Multi::from_parts(&vec![0; dim], m.anti())),
        };
        let order = crate::algebra::ord_sub(f.order(), flowed.degree() as i64);
        groups
            .entry(flowed)
            .or_insert_with(|| JetSeries::zero_to(dim, order))
            .add_term(rest, c);
    }
    groups
        .into_iter()
        .map(|(m, rest)| (JetSeries::monomial(dim, m, C::one()), rest))
        .collect()
}

/// `S` or `T` built from a Hamiltonian element, extended linearly to all jets.
#[derive(Clone, Debug)]
pub struct ElementMap<C: Coeff = Scalar> {
    k: FiberPoly<C>,
    side: Side,
}

impl<C: Coeff> ElementMap<C> {
    pub fn new(k: FiberPoly<C>, side: Side) -> Self {
        Self { k, side }
    }
}

impl<C: Coeff + Send + Sync> FiberMap<C> for ElementMap<C> {
    fn dim(&self) -> usize {
        self.k.dim()
    }
    fn side(&self) -> Side {
        self.side
    }
    fn fiber_order(&self) -> Order {
        self.k.fiber_order() - 1
    }
    fn apply(&self, f: &JetSeries<C>) -> Result<FiberPoly<C>> {
        check_hamiltonian(&self.k)?;
        let dim = self.dim();
        let n = self.k.fiber_order();
        let mut acc = FiberPoly::zero(dim, n, f.order());
        for (pure, rest) in split_pure(f, self.side) {
            acc = &acc + &ham_exp_unchecked(&self.k, &FiberPoly::from_jet(&pure, n)).mul_jet(&rest);
        }
        acc.truncate_fiber(self.fiber_order());
        Ok(acc)
    }
}

/// First-order variation of the map generated by `K` in the direction `J`:
/// `S_1(ab) = a{G, S_0 b}`, `T_1(ab) = {G, T_0 a} b` with `G = Σ_m H_K^m J / (m+1)!`.
pub fn deformation_from_hamiltonian(k: &FiberPoly, j: &FiberPoly, f: &JetSeries, side: Side) -> Result<FiberPoly> {
    check_hamiltonian(j)?;
    let gen = ham_phi1(k, j)?;
    let n = k.fiber_order();
    let dim = k.dim();
    let mut acc = FiberPoly::zero(dim, n, f.order());
    for (pure, rest) in split_pure(f, side) {
        let flowed = ham_exp_unchecked(k, &FiberPoly::from_jet(&pure, n));
        acc = &acc + &poisson_bracket(&gen, &flowed)?.mul_jet(&rest);
    }
    Ok(acc)
}

/// Summary of the structural invariants of a solved element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementShape {
    pub fiber_order: Order,
    pub jet_order: Option<Order>,
    pub even: bool,
    pub mixed_support: bool,
    pub terms: usize,
}

impl ElementShape {
    pub fn of<C: Coeff>(k: &FiberPoly<C>) -> Self {
        Self {
            fiber_order: k.fiber_order(),
            jet_order: (k.jet_order() != EXACT).then_some(k.jet_order()),
            even: k.is_even(),
            mixed_support: k.has_mixed_support(),
            terms: k.count_terms(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{h_from_psi, preset_geometry};
    use crate::groupoid::{deformed_source_target, source_target_exp, SourceTargetMap};

    fn m1(a: u16, b: u16) -> Multi {
        Multi::from_parts(&[a], &[b])
    }

    #[test]
    fn flat_is_quadratic() {
        let k = solve_k(&Geometry::flat(2), 6).unwrap();
        assert_eq!(k.value(), &quadratic_part(&Geometry::flat(2), 6));
        assert!(membership_report(k.value(), 3).unwrap().passed);
    }

    #[test]
    fn disc_element_shape_and_membership() {
        let (_, g) = preset_geometry("disc", 1, 14).unwrap();
        let k = solve_k(&g, 5).unwrap();
        assert!(k.component(3).is_zero());
        assert!(k.component(5).is_zero());
        assert!(!k.component(4).is_zero());
        let shape = ElementShape::of(k.value());
        assert!(shape.even && shape.mixed_support);
        let rep = membership_report(k.value(), 3).unwrap();
        assert!(rep.passed, "{rep}");
    }

    #[test]
    fn element_map_matches_exponential() {
        let (_, g) = preset_geometry("fubini-study", 1, 14).unwrap();
        let k = solve_k(&g, 5).unwrap();
        for side in [Side::Source, Side::Target] {
            let map = k.map(side);
            for alpha in 0..=2u16 {
                for beta in 0..=2u16 {
                    let f = JetSeries::monomial(1, m1(alpha, beta), Scalar::from_int(1));
                    let lhs = map.apply(&f).unwrap();
                    let rhs = source_target_exp(&g, &f, side, 4).unwrap();
                    assert_eq!(lhs.fiber_order(), 4);
                    assert_eq!(lhs, rhs, "{side} z^{alpha} zb^{beta}");
                }
            }
        }
    }

    #[test]
    fn wrong_candidate_fails_membership() {
        let mut k = FiberPoly::<Scalar>::zero(1, 4, EXACT);
        k.add_term(m1(1, 1), JetSeries::one(1));
        k.add_term(m1(2, 2), JetSeries::one(1));
        assert!(!membership_report(&k, 1).unwrap().passed);
        let low = FiberPoly::from_jet(&JetSeries::<Scalar>::one(1), 4);
        assert!(matches!(membership_report(&low, 1), Err(Error::FiberDegreeTooLow(_))));
    }

    #[test]
    fn purity_is_enforced() {
        let k = quadratic_part(&Geometry::flat(1), 4);
        let z = JetSeries::var(1, Var::Z(0));
        let zb = JetSeries::var(1, Var::Zbar(0));
        assert!(matches!(st_from_element(&k, &zb, &zb, Side::Source), Err(Error::NotPure(_))));
        let s = st_from_element(&k, &z, &zb, Side::Source).unwrap();
        // z(z̄ + ζ)
        let mut expect = FiberPoly::zero(1, 3, EXACT);
        expect.add_term(m1(0, 0), JetSeries::monomial(1, m1(1, 1), Scalar::from_int(1)));
        expect.add_term(m1(1, 0), z.clone());
        assert_eq!(s, expect);
    }

    #[test]
    fn jacobi_violation_is_inconsistent() {
        let mut g: Vec<Vec<JetSeries>> = vec![vec![JetSeries::one(2), JetSeries::zero(2)], vec![JetSeries::zero(2), JetSeries::one(2)]];
        g[0][1] = JetSeries::var(2, Var::Z(1));
        let g = Geometry::new_unchecked(g).unwrap();
        assert!(matches!(solve_element(&g, 4), Err(Error::InconsistentRecursion { .. })));
    }

    #[test]
    fn constant_deformation_is_quadratic() {
        let g = Geometry::new(vec![vec![JetSeries::constant(1, Scalar::from_int(2))]]).unwrap();
        let h = vec![vec![JetSeries::constant(1, Scalar::from_int(5))]];
        let d = DeformedGeometry::new(g, h).unwrap();
        let f = solve_f(&d, 6).unwrap();
        assert_eq!(f.value(), &quadratic_part(&d.lifted(), 6));
        assert!(solve_f(&DeformedGeometry::trivial(Geometry::flat(1)), 4).unwrap().soul().is_zero());
    }

    #[test]
    fn disc_deformation_routes_agree() {
        let (p, g) = preset_geometry("disc", 1, 14).unwrap();
        let d = h_from_psi(&g, &p.phi_minus1).unwrap();
        let f = solve_f(&d, 5).unwrap();
        assert_eq!(f.body(), solve_k(&g, 5).unwrap());
        assert!(f.soul().is_even() && f.soul().has_mixed_support());
        let rep = membership_report(f.value(), 2).unwrap();
        assert!(rep.passed, "{rep}");
        let map = f.map(Side::Source);
        let reference = SourceTargetMap::deformed(&d, Side::Source, 4);
        for side in [Side::Source, Side::Target] {
            for (a, b) in [(0u16, 1u16), (1, 1), (0, 2), (2, 1)] {
                let mono = JetSeries::monomial(1, m1(a, b), Scalar::from_int(1));
                let via_h = deformation_from_hamiltonian(f.body().value(), &f.soul(), &mono, side).unwrap();
                let via_f = f.map(side).apply(&mono.lift()).unwrap().soul();
                assert_eq!(via_h, via_f);
                let exp = deformed_source_target(&d, &mono, side, 4).unwrap().soul();
                assert_eq!(via_f, exp);
            }
        }
        let zb = JetSeries::var(1, Var::Zbar(0)).lift();
        assert_eq!(map.apply(&zb).unwrap(), reference.apply(&zb).unwrap());
    }
}
