use super::*;
use crate::algebra::{factorial, FiberVar, EXACT};
use crate::geometry::{Preset, PotentialData};
use crate::groupoid::{chart_bracket, s1_via_potential, source_target_exp};
use crate::kset::solve_k;
use crate::samples::Sampler;

type Jet = JetSeries;

fn mono(a: u16, b: u16) -> Jet {
    Jet::monomial(1, Multi::from_parts(&[a], &[b]), Scalar::from_int(1))
}

fn flat(nu: usize) -> StarProduct {
    StarProduct::new(Preset::Flat.potential(1, EXACT).unwrap(), nu).unwrap()
}

fn disc(nu: usize, m: Order) -> StarProduct {
    StarProduct::new(Preset::Disc.potential(1, m).unwrap(), nu).unwrap()
}

/// `Σ_r (ν^r/r!) (∂̄^r f) ∂^r`, the flat left multiplication.
fn flat_left(f: &Jet, nu: usize) -> DiffOp {
    let mut op = DiffOp::zero(1, nu);
    for r in 0..=nu {
        let coeff = f.derivative_multi(&Multi::from_parts(&[0], &[r as u16]));
        let scaled = coeff.scale(&inv_int_scalar(factorial(r as u32)));
        op = op.add(&DiffOp::term(r, Multi::from_parts(&[r as u16], &[0]), scaled, nu));
    }
    op
}

#[test]
fn flat_left_matches_closed_form() {
    let sp = flat(4);
    for f in Sampler::new(3, 1).jets(4) {
        assert_eq!(sp.mult_op(&f, Hand::Left).unwrap(), flat_left(&f, 4));
    }
    let zb = mono(0, 1);
    let z = mono(1, 0);
    let prod = sp.star(&zb, &z).unwrap();
    assert_eq!(prod.grade(0), &mono(1, 1));
    assert_eq!(prod.grade(1), &Jet::one(1));
    assert!(prod.grades()[2..].iter().all(Jet::is_zero));
}

#[test]
fn pure_inputs_multiply_pointwise() {
    let sp = disc(3, 10);
    let a = &mono(2, 0) + &mono(1, 0).scale(&Scalar::from_int(3));
    let left = sp.mult_op(&a, Hand::Left).unwrap();
    assert_eq!(left, DiffOp::multiplication(&a, 3));
    let b = mono(0, 3);
    assert_eq!(sp.mult_op(&b, Hand::Right).unwrap(), DiffOp::multiplication(&b, 3));
}

#[test]
fn twisted_derivative() {
    // L of ∂Φ_{-1}/∂z is ∂Φ_{-1}/∂z + ν ∂/∂z
    let sp = disc(3, 10);
    let u = sp.potential().phi_minus1.derivative(Var::Z(0));
    let op = sp.mult_op(&u, Hand::Left).unwrap();
    let expect = DiffOp::multiplication(&u, 3).add(&DiffOp::term(1, Multi::from_parts(&[1], &[0]), Jet::one(1), 3));
    assert_eq!(op, expect);
    assert!(op.jet_order() >= 0);
}

#[test]
fn unity_and_first_cochain() {
    let sp = disc(3, 10);
    let g = sp.geometry().g(0, 0).clone();
    let mut s = Sampler::new(11, 1);
    for _ in 0..3 {
        let (u, v) = (s.jet(), s.jet());
        assert_eq!(sp.star(&u, &Jet::one(1)).unwrap(), NuSeries::constant(&u, 3));
        assert_eq!(sp.star(&Jet::one(1), &u).unwrap(), NuSeries::constant(&u, 3));
        let c1 = sp.component(1, &u, &v).unwrap();
        let expect = &(&g * &u.derivative(Var::Zbar(0))) * &v.derivative(Var::Z(0));
        assert_eq!(c1, expect);
        let d1 = &c1 - &sp.component(1, &v, &u).unwrap();
        assert_eq!(d1, chart_bracket(sp.geometry(), &u, &v));
    }
}

#[test]
fn associativity_on_disc() {
    let sp = disc(3, 12);
    let mut s = Sampler::new(5, 1).with_max_degree(2);
    for _ in 0..2 {
        let (f, g, h) = (s.jet(), s.jet(), s.jet());
        let fg = sp.star(&f, &g).unwrap();
        let gh = sp.star(&g, &h).unwrap();
        let left = sp.star_series(&fg, &NuSeries::constant(&h, 3)).unwrap();
        let right = sp.star_series(&NuSeries::constant(&f, 3), &gh).unwrap();
        let res = left.sub(&right);
        assert!(res.is_zero() && res.jet_order() >= 0, "{res:?}");
    }
}

#[test]
fn left_and_right_commute() {
    let sp = disc(3, 12);
    let mut s = Sampler::new(9, 1).with_max_degree(2);
    let (f, g) = (s.jet(), s.jet());
    let l = sp.mult_op(&f, Hand::Left).unwrap();
    let r = sp.mult_op(&g, Hand::Right).unwrap();
    let c = l.compose(&r).unwrap().sub(&r.compose(&l).unwrap());
    assert!(c.is_zero() && c.jet_order() >= 0);
    // R_g f = f ∗ g
    let via_right = r.apply(&f);
    assert_eq!(via_right, sp.star(&f, &g).unwrap());
}

#[test]
fn symbol_of_multiplication_is_source_map() {
    let sp = disc(4, 12);
    let f = &mono(1, 2) + &mono(0, 1);
    let s = mult_op_symbol(&sp, &f, Hand::Left, 4).unwrap();
    let expect = source_target_exp(sp.geometry(), &f, Side::Source, 4).unwrap();
    assert_eq!(s, expect);
    let t = mult_op_symbol(&sp, &f, Hand::Right, 4).unwrap();
    assert_eq!(t, source_target_exp(sp.geometry(), &f, Side::Target, 4).unwrap());
}

fn laplacian_power(r: usize, nu: usize) -> DiffOp {
    let coeff = Jet::one(1).scale(&inv_int_scalar(factorial(r as u32)));
    DiffOp::term(r, Multi::from_parts(&[r as u16], &[r as u16]), coeff, nu)
}

#[test]
fn flat_berezin_and_log() {
    let sp = flat(4);
    let b = berezin(&sp).unwrap();
    let mut expect = DiffOp::zero(1, 4);
    for r in 0..=4 {
        expect = expect.add(&laplacian_power(r, 4));
    }
    assert_eq!(b, expect);
    let x = operator_log(&b).unwrap();
    assert_eq!(x.nu_order(), 5);
    let lap = DiffOp::term(2, Multi::from_parts(&[1], &[1]), Jet::one(1), 5);
    assert_eq!(x, lap);
    let (x_hat, y) = parity_hat(&x);
    assert_eq!(x_hat, x);
    assert!(y.is_zero());
    let inv = operator_inverse(&b).unwrap();
    let mut expect_inv = DiffOp::zero(1, 4);
    for r in 0..=4 {
        let sign = Scalar::from_int(if r % 2 == 0 { 1 } else { -1 });
        expect_inv = expect_inv.add(&laplacian_power(r, 4).scale(&sign));
    }
    assert_eq!(inv, expect_inv);
}

#[test]
fn disc_berezin_first_grade_and_log_symbol() {
    let sp = disc(3, 12);
    let b = berezin(&sp).unwrap();
    let g = sp.geometry().g(0, 0).clone();
    assert_eq!(b.grade(1), &OpGrade::zero(1).add(&DiffOp::term(1, Multi::from_parts(&[1], &[1]), g.clone(), 1).grade(1).clone()));
    let a = &mono(3, 0) + &mono(1, 0);
    assert_eq!(b.apply(&a), NuSeries::constant(&a, 3));
    assert_eq!(b.apply(&mono(0, 2)), NuSeries::constant(&mono(0, 2), 3));
    let x = operator_log(&b).unwrap();
    assert!(x.naturality_report().sharp);
    let k = solve_k(sp.geometry(), 5).unwrap();
    let sx = x.sigma_symbol(3).unwrap();
    let res = &sx - k.value();
    assert!(res.is_zero() && res.jet_order() >= 0, "{res:?}");
    let fiber = sx.filter(|m| m.holo_degree() == 0 || m.anti_degree() == 0);
    assert!(fiber.is_zero());
}

#[test]
fn pair_deformation_flat_example() {
    let base = Preset::Flat.potential(1, EXACT).unwrap();
    let psi = mono(1, 1);
    let shifted = StarProduct::new(base.shifted(&psi), 4).unwrap();
    let plain = StarProduct::new(base.clone(), 4).unwrap();
    let zb = mono(0, 1);
    let s1 = pair_s1(&shifted, &plain, &zb, Side::Source, 3).unwrap();
    let zeta = FiberPoly::fiber_var(1, FiberVar::Zeta(0), 3).scale(&Scalar::from_int(-1));
    assert_eq!(s1, zeta);
    let g = Geometry::flat(1);
    assert_eq!(s1, s1_via_potential(&g, &psi, &zb, Side::Source, 3).unwrap());
    assert!(pair_s1(&plain, &plain, &zb, Side::Target, 3).unwrap().is_zero());
    let other = StarProduct::new(PotentialData::new(mono(1, 1).scale(&Scalar::from_int(2))), 2).unwrap();
    assert!(matches!(pair_s1(&plain, &other, &zb, Side::Source, 3), Err(Error::SharedBodyViolation)));
}

#[test]
fn x3_shape_is_enforced() {
    let bad = DiffOp::term(3, Multi::from_parts(&[2], &[0]), Jet::one(1), 3)
        .add(&DiffOp::term(2, Multi::from_parts(&[1], &[1]), Jet::one(1), 3));
    assert!(matches!(h_from_x3(&bad), Err(Error::ShapeViolation(_))));
    let flat_x = DiffOp::term(2, Multi::from_parts(&[1], &[1]), Jet::one(1), 3);
    let d = h_from_x3(&flat_x).unwrap();
    assert!(d.h(0, 0).is_zero());
}

#[test]
fn flat_sigma_y_vanishes() {
    let out = sigma_y_pipeline(&Preset::Flat.potential(1, EXACT).unwrap(), 4, 5).unwrap();
    assert!(out.report.passed, "{}", out.report);
    assert!(out.sigma_y.is_zero() && out.half_j.is_zero());
}

#[test]
fn flat_dual_transform() {
    let sp = flat(3);
    let samples = Sampler::new(1, 1).jets(3);
    let report = dual_berezin_check(&sp, &samples);
    assert!(report.passed, "{report}");
}
