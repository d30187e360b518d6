//! The Berezin transform, its logarithm, the dual product and the `σ(Y)` pipeline.

use super::{Hand, StarProduct};
use crate::algebra::{inv_int_scalar, DiffOp, FiberPoly, JetSeries, Multi, NuSeries, OpGrade, Order, Scalar, Var};
use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{DeformedGeometry, Geometry, JetMatrix, PotentialData};
use crate::groupoid::Side;
use crate::kset::solve_f;
use crate::report::{Check, Report};

/// `B` together with `X = ν log B`, `X̂` and `Y = (X − X̂)/(2ν)`.
#[derive(Clone, Debug)]
pub struct BerezinData {
    pub b: DiffOp,
    pub x: DiffOp,
    pub x_hat: DiffOp,
    pub y: DiffOp,
}

impl BerezinData {
    pub fn new(b: DiffOp) -> Result<Self> {
        let x = operator_log(&b)?;
        let (x_hat, y) = parity_hat(&x);
        Ok(Self { b, x, x_hat, y })
    }
}

/// Rebuilds `D = Σ_r ν^r Σ_m d_{r,m} ∂^m` from its values on the monomials `x^m`
/// with at most `side_degree` holomorphic and at most `side_degree`
/// antiholomorphic factors.
///
/// Triangular in the monomial basis: `D(x^m) = Σ_{m' <= m} d_{m'} m!/(m−m')! x^{m−m'}`.
pub fn reconstruct_operator<F>(dim: usize, nu_order: usize, side_degree: u32, values: F) -> Result<DiffOp>
where
    F: Fn(&Multi) -> Result<NuSeries> + Sync + Send,
{
    let mut basis: Vec<Multi> = Multi::up_to_degree(dim, 2 * side_degree, true, true)
        .into_iter()
        .filter(|m| m.holo_degree() <= side_degree && m.anti_degree() <= side_degree)
        .collect();
    basis.sort_by_key(Multi::degree);
    let images = exec::map(&basis, |m| values(m));
    let images: Vec<NuSeries> = images.into_iter().collect::<Result<_>>()?;
    let nu = images.iter().map(NuSeries::nu_order).min().unwrap_or(0).min(nu_order);
    let grades = exec::map_range(0..=nu, |r| {
        let mut grade = OpGrade::zero(dim);
        for (m, image) in basis.iter().zip(&images) {
            let mut rest = image.grade(r).clone();
            for (known, d) in grade.terms() {
                if known != m && known.divides(m) {
                    let shift = m.checked_sub(known).expect("divides");
                    let weight = crate::algebra::int_scalar(m.falling(known));
                    rest = &rest - &d.shift(&shift).scale(&weight);
                }
            }
            grade.add_term(m.clone(), rest.scale(&inv_int_scalar(m.factorial())));
        }
        grade
    });
    Ok(DiffOp::from_grades(dim, grades))
}

/// `B` with `B(z^α z̄^β) = z̄^β ∗ z^α`, through the product's `ν`-order.
pub fn berezin(sp: &StarProduct) -> Result<DiffOp> {
    let dim = sp.dim();
    reconstruct_operator(dim, sp.nu_order(), sp.nu_order() as u32, |m| {
        let (a, b) = split_monomial(dim, m);
        Ok(sp.mult_op(&b, Hand::Left)?.apply(&a))
    })
}

/// `(z^α, z̄^β)` for the exponent `(α, β)`.
fn split_monomial(dim: usize, m: &Multi) -> (JetSeries, JetSeries) {
    let zeros = vec![0u16; dim];
    let a = JetSeries::monomial(dim, Multi::from_parts(m.holo(), &zeros), Scalar::from_int(1));
    let b = JetSeries::monomial(dim, Multi::from_parts(&zeros, m.anti()), Scalar::from_int(1));
    (a, b)
}

/// `B − I`, requiring grade 0 of `B` to be the identity.
fn unipotent_part(b: &DiffOp) -> Result<DiffOp> {
    let id = DiffOp::identity(b.dim(), b.nu_order());
    let delta = b.sub(&id);
    if !delta.grade(0).is_zero() {
        return Err(Error::Invalid("operator is not the identity at ν-order 0".into()));
    }
    Ok(delta)
}

/// `B⁻¹ = Σ_m (−Δ)^m` with `Δ = B − I`.
pub fn operator_inverse(b: &DiffOp) -> Result<DiffOp> {
    let minus = unipotent_part(b)?.scale(&Scalar::from_int(-1));
    let mut power = DiffOp::identity(b.dim(), b.nu_order());
    let mut acc = power.clone();
    for _ in 0..b.nu_order() {
        power = power.compose(&minus)?;
        acc = acc.add(&power);
    }
    Ok(acc)
}

/// `X = ν log B`; `X` has `ν`-order one more than `B`.
///
/// Fails with `NotNatural` unless every grade satisfies the sharp bound
/// `ord X_{2k}, ord X_{2k+1} <= 2k`.
pub fn operator_log(b: &DiffOp) -> Result<DiffOp> {
    let delta = unipotent_part(b)?;
    let mut power = DiffOp::identity(b.dim(), b.nu_order());
    let mut log = DiffOp::zero(b.dim(), b.nu_order());
    for m in 1..=b.nu_order() as i64 {
        power = power.compose(&delta)?;
        let sign = if m % 2 == 1 { 1 } else { -1 };
        log = log.add(&power.scale(&Scalar::ratio(sign, m)));
    }
    let x = log.shift_nu(1);
    let report = x.naturality_report();
    if let Some(bad) = report.grades.iter().find(|g| !g.sharp) {
        return Err(Error::NotNatural(format!(
            "grade {} of the logarithm has derivative order {}",
            bad.grade,
            bad.diff_order.unwrap_or(0)
        )));
    }
    Ok(x)
}

/// `(X̂, Y)` with `X̂_k = (−1)^k X_k` and `Y = (X − X̂)/(2ν) = ν²X_3 + ν⁴X_5 + …`.
pub fn parity_hat(x: &DiffOp) -> (DiffOp, DiffOp) {
    let x_hat = x.parity_flip();
    let doubled = x.sub(&x_hat).scale(&Scalar::ratio(1, 2));
    let y = doubled
        .div_nu()
        .unwrap_or_else(|_| DiffOp::zero(x.dim(), 0));
    (x_hat, y)
}

/// Reads the `∂²/∂z^k∂z̄^l` coefficients of a grade as a matrix `[l][k]`,
/// failing if anything else is present.
fn mixed_second_order(grade: &OpGrade, label: &str) -> Result<JetMatrix> {
    let dim = grade.dim();
    let mut stray = 0usize;
    for (m, _) in grade.terms() {
        if m.holo_degree() != 1 || m.anti_degree() != 1 {
            stray += 1;
        }
    }
    if stray > 0 {
        return Err(Error::ShapeViolation(format!(
            "{label} has {stray} terms outside the mixed second-derivative span"
        )));
    }
    Ok((0..dim)
        .map(|l| {
            (0..dim)
                .map(|k| grade.coeff(&Multi::unit(dim, Var::Z(k)).add(&Multi::unit(dim, Var::Zbar(l)))))
                .collect()
        })
        .collect())
}

/// `g^{lk}` from `X_2` and `h^{lk} = 2 × [X_3]^{lk}`, checked against the
/// linearized Jacobi identity.
pub fn h_from_x3(x: &DiffOp) -> Result<DeformedGeometry> {
    if x.nu_order() < 3 {
        return Err(Error::TruncationInsufficient(format!(
            "X known to ν-order {} lacks the third grade",
            x.nu_order()
        )));
    }
    let g = mixed_second_order(x.grade(2), "X_2")?;
    let h = mixed_second_order(x.grade(3), "X_3")?;
    let two = Scalar::from_int(2);
    let h = h.iter().map(|row| row.iter().map(|j| j.scale(&two)).collect()).collect();
    DeformedGeometry::new(Geometry::new(g)?, h)
}

/// Both sides of `σ(Y) = J/2` and their comparison.
#[derive(Clone, Debug)]
pub struct SigmaYOutcome {
    pub sigma_y: FiberPoly,
    pub half_j: FiberPoly,
    pub residual: FiberPoly,
    pub deformation: DeformedGeometry,
    pub report: Report,
}

/// Computes `σ(Y)` from the operator logarithm and `J/2` from the deformed
/// recursion with `h` read off `X_3`, through fiber degree `fiber_order`.
///
/// `nu_order` is the `ν`-order of `X`; the Berezin transform is built one
/// order lower.
pub fn sigma_y_pipeline(p: &PotentialData, fiber_order: Order, nu_order: usize) -> Result<SigmaYOutcome> {
    if fiber_order < 2 || (nu_order as Order) < fiber_order + 1 {
        return Err(Error::Invalid(format!(
            "ν-order {nu_order} must exceed fiber order {fiber_order} >= 2"
        )));
    }
    let sp = StarProduct::new(p.clone(), nu_order - 1)?;
    let data = BerezinData::new(berezin(&sp)?)?;
    let sigma_y = data.y.sigma_symbol(fiber_order)?;

    let deformation = h_from_x3(&data.x)?;
    let mut report = Report::new("sigma-y");
    let g_residual: Vec<JetSeries> = (0..sp.dim())
        .flat_map(|l| (0..sp.dim()).map(move |k| (l, k)))
        .map(|(l, k)| deformation.base().g(l, k) - sp.geometry().g(l, k))
        .collect();
    for (i, r) in g_residual.iter().enumerate() {
        report.push(Check::from_jet(format!("x2-metric[{i}]"), r));
    }
    let f = solve_f(&deformation, fiber_order)?;
    let half_j = f.soul().scale(&Scalar::ratio(1, 2));
    let residual = &sigma_y - &half_j;
    for d in 0..=fiber_order as u32 {
        report.push(Check::from_fiber(format!("degree-{d}"), &residual.homogeneous(d)));
    }
    Ok(SigmaYOutcome {
        sigma_y,
        half_j,
        residual,
        deformation,
        report,
    })
}

/// Builds the dual product `u ∗̃ v = B⁻¹(Bv ∗ Bu)`, reconstructs its Berezin
/// transform `B̃` from `B̃(z^α z̄^β) = z̄^β ∗̃ z^α`, and checks `B̃∘B = I` as
/// operators, `B̃(Bf) = f` on `samples`, and `C̃_1 = −C_1` on consecutive samples.
pub fn dual_berezin_check(sp: &StarProduct, samples: &[JetSeries]) -> Report {
    let mut report = Report::new("dual-berezin");
    if let Err(e) = dual_checks(sp, samples, &mut report) {
        report.push(Check::from_error("construction", &e));
    }
    report
}

fn dual_checks(sp: &StarProduct, samples: &[JetSeries], report: &mut Report) -> Result<()> {
    let dim = sp.dim();
    let r = sp.nu_order();
    let b = berezin(sp)?;
    let b_inv = operator_inverse(&b)?;
    let dual = |u: &JetSeries, v: &JetSeries| -> Result<NuSeries> {
        let bu = b.apply(u);
        let bv = b.apply(v);
        Ok(b_inv.apply_series(&sp.star_series(&bv, &bu)?))
    };
    let b_tilde = reconstruct_operator(dim, r, r as u32, |m| {
        let (a, bar) = split_monomial(dim, m);
        dual(&bar, &a)
    })?;
    let composed = b_tilde.compose(&b)?;
    let id = DiffOp::identity(dim, r);
    for (k, (c, i)) in composed.grades().iter().zip(id.grades()).enumerate() {
        report.push(Check::from_grade(format!("compose-identity/grade-{k}"), &c.sub(i)));
    }
    let per_sample = exec::map(samples, |f| {
        let round = b_tilde.apply_series(&b.apply(f));
        round.sub(&NuSeries::constant(f, r))
    });
    for (i, res) in per_sample.iter().enumerate() {
        report.push(Check::from_nu(format!("round-trip[{i}]"), res));
    }
    for (i, pair) in samples.windows(2).enumerate() {
        let (u, v) = (&pair[0], &pair[1]);
        let check = (|| -> Result<Check> {
            let tilde = dual(u, v)?;
            let c1 = sp.component(1, u, v)?;
            Ok(Check::from_jet(format!("dual-c1[{i}]"), &(tilde.grade(1) + &c1)))
        })();
        report.push(check.unwrap_or_else(|e| Check::from_error(format!("dual-c1[{i}]"), &e)));
    }
    Ok(())
}

/// `σ((1/ν)(L_f − L̃_f))` (or with right multiplications for the target side).
///
/// With `sp` built from `Φ + ψ` and `sp_tilde` from `Φ`, this is the first-order
/// part of the source (target) map deformed by `ψ`.
pub fn pair_s1(sp: &StarProduct, sp_tilde: &StarProduct, f: &JetSeries, side: Side, fiber_order: Order) -> Result<FiberPoly> {
    if sp.potential().phi_minus1 != sp_tilde.potential().phi_minus1 {
        return Err(Error::SharedBodyViolation);
    }
    let hand = Hand::from(side);
    let diff = sp.mult_op(f, hand)?.sub(&sp_tilde.mult_op(f, hand)?);
    diff.div_nu()?.sigma_symbol(fiber_order)
}
