//! Kähler–Poisson tensors, their infinitesimal deformations, and potentials.
//!
//! `g_upper[l][k]` stores `g^{lk}`: the row index is antiholomorphic, the column
//! index holomorphic. All data are jets at the chart origin.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{Coeff, Dual, JetSeries, Multi, Order, Scalar, Var, EXACT};
use crate::error::{Error, Result};

/// A square matrix of jets.
pub type JetMatrix<C = Scalar> = Vec<Vec<JetSeries<C>>>;

/// A Kähler–Poisson tensor on a single chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Geometry<C: Coeff = Scalar> {
    dim: usize,
    g_upper: JetMatrix<C>,
}

impl<C: Coeff> Geometry<C> {
    /// Builds a tensor and rejects it unless the Jacobi identity holds.
    pub fn new(g_upper: JetMatrix<C>) -> Result<Self> {
        let g = Self::new_unchecked(g_upper)?;
        let report = jacobi_check(&g);
        if !report.passed {
            return Err(Error::JacobiViolation(report.describe_failure()));
        }
        Ok(g)
    }

    /// Builds a tensor without the Jacobi check (shape is still validated).
    pub fn new_unchecked(g_upper: JetMatrix<C>) -> Result<Self> {
        let dim = check_square(&g_upper)?;
        Ok(Self { dim, g_upper })
    }

    /// The constant identity tensor `g^{lk} = δ^{lk}`.
    pub fn flat(dim: usize) -> Self {
        Self {
            dim,
            g_upper: identity_matrix(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `g^{lk}` (0-based indices: `l` antiholomorphic, `k` holomorphic).
    pub fn g(&self, l: usize, k: usize) -> &JetSeries<C> {
        &self.g_upper[l][k]
    }

    pub fn g_upper(&self) -> &JetMatrix<C> {
        &self.g_upper
    }

    /// Smallest jet order among the entries.
    pub fn jet_order(&self) -> Order {
        min_order(&self.g_upper)
    }

    pub fn truncated(&self, order: Order) -> Self {
        Self {
            dim: self.dim,
            g_upper: map_matrix(&self.g_upper, |j| j.clone().truncated(order)),
        }
    }
}

impl Geometry<Scalar> {
    pub fn lift<D: Coeff>(&self) -> Geometry<D> {
        Geometry {
            dim: self.dim,
            g_upper: map_matrix(&self.g_upper, |j| j.lift()),
        }
    }
}

/// A tensor `g` together with an infinitesimal deformation `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformedGeometry {
    base: Geometry,
    h_upper: JetMatrix,
}

impl DeformedGeometry {
    /// Rejects the pair unless the linearized Jacobi identity holds.
    pub fn new(base: Geometry, h_upper: JetMatrix) -> Result<Self> {
        let d = Self::new_unchecked(base, h_upper)?;
        let report = jacobi_deformed_check(&d);
        if !report.passed {
            return Err(Error::JacobiViolation(report.describe_failure()));
        }
        Ok(d)
    }

    pub fn new_unchecked(base: Geometry, h_upper: JetMatrix) -> Result<Self> {
        let n = check_square(&h_upper)?;
        if n != base.dim {
            return Err(Error::DimensionMismatch(base.dim, n));
        }
        Ok(Self { base, h_upper })
    }

    /// `h = 0`.
    pub fn trivial(base: Geometry) -> Self {
        let n = base.dim;
        Self {
            base,
            h_upper: zero_matrix(n),
        }
    }

    pub fn base(&self) -> &Geometry {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim
    }

    pub fn h(&self, l: usize, k: usize) -> &JetSeries {
        &self.h_upper[l][k]
    }

    pub fn h_upper(&self) -> &JetMatrix {
        &self.h_upper
    }

    pub fn jet_order(&self) -> Order {
        self.base.jet_order().min(min_order(&self.h_upper))
    }

    /// `g + εh` as a tensor over dual numbers.
    pub fn lifted(&self) -> Geometry<Dual> {
        let n = self.dim();
        let g_upper = (0..n)
            .map(|l| {
                (0..n)
                    .map(|k| JetSeries::<Dual>::from_parts(self.base.g(l, k), self.h(l, k)))
                    .collect()
            })
            .collect();
        Geometry { dim: n, g_upper }
    }

    /// Splits a dual-number tensor into body and soul.
    pub fn from_lifted(g: &Geometry<Dual>) -> Self {
        Self {
            base: Geometry {
                dim: g.dim,
                g_upper: map_matrix(&g.g_upper, JetSeries::body),
            },
            h_upper: map_matrix(&g.g_upper, JetSeries::soul),
        }
    }
}

/// `Φ = (1/ν)Φ_{-1} + Φ_0 + νΦ_1 + …` on the chart.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialData {
    pub phi_minus1: JetSeries,
    /// `Φ_0, Φ_1, …`; missing entries are zero.
    pub higher: Vec<JetSeries>,
}

impl PotentialData {
    pub fn new(phi_minus1: JetSeries) -> Self {
        Self {
            phi_minus1,
            higher: Vec::new(),
        }
    }

    pub fn with_higher(mut self, higher: Vec<JetSeries>) -> Self {
        self.higher = higher;
        self
    }

    pub fn dim(&self) -> usize {
        self.phi_minus1.dim()
    }

    /// `Φ_j` for `j >= 0`.
    pub fn phi(&self, j: usize) -> JetSeries {
        self.higher.get(j).cloned().unwrap_or_else(|| JetSeries::zero(self.dim()))
    }

    /// Adds `ψ` to `Φ_0`.
    pub fn shifted(&self, psi: &JetSeries) -> Self {
        let mut higher = self.higher.clone();
        if higher.is_empty() {
            higher.push(JetSeries::zero(self.dim()));
        }
        higher[0] = &higher[0] + psi;
        Self {
            phi_minus1: self.phi_minus1.clone(),
            higher,
        }
    }
}

/// `[∂²f/∂z^k∂z̄^l]` indexed `[k][l]`.
pub fn mixed_hessian<C: Coeff>(f: &JetSeries<C>) -> JetMatrix<C> {
    let n = f.dim();
    (0..n)
        .map(|k| {
            let dk = f.derivative(Var::Z(k));
            (0..n).map(|l| dk.derivative(Var::Zbar(l))).collect()
        })
        .collect()
}

/// `g^{lk}` as the jet inverse of the Hessian of `Φ_{-1}`.
pub fn metric_from_potential(p: &PotentialData) -> Result<Geometry> {
    let inv = jet_matrix_inverse(&mixed_hessian(&p.phi_minus1))?;
    Geometry::new(inv)
}

/// Inverse of a jet matrix with invertible constant part.
///
/// Uses `H⁻¹ = Σ_m (−H_0⁻¹E)^m H_0⁻¹` with `E = H − H_0`; the sum terminates at the
/// jet order because `E` has no constant term.
pub fn jet_matrix_inverse<C: Coeff>(h: &JetMatrix<C>) -> Result<JetMatrix<C>> {
    let n = check_square(h)?;
    let h0: Vec<Vec<C>> = h.iter().map(|row| row.iter().map(JetSeries::constant_term).collect()).collect();
    let h0_inv = constant_inverse(h0).ok_or(Error::DegenerateHessian)?;
    let h0_inv: JetMatrix<C> = h0_inv
        .into_iter()
        .map(|row| row.into_iter().map(|c| JetSeries::constant(n, c)).collect())
        .collect();
    let order = min_order(h);
    let e: JetMatrix<C> = map_matrix(h, |j| j.filter(|m| !m.is_zero()));
    if e.iter().flatten().all(JetSeries::is_zero) {
        return Ok(map_matrix(&h0_inv, |j| j.clone().truncated(order)));
    }
    if order == EXACT {
        return Err(Error::TruncationInsufficient(
            "inverting a non-constant exact matrix needs a finite jet order".into(),
        ));
    }
    if order < 0 {
        return Err(Error::TruncationInsufficient("matrix has no known jet coefficients".into()));
    }
    let step = map_matrix(&mat_mul(&h0_inv, &e), |j| -j);
    let mut power = identity_matrix::<C>(n);
    let mut acc = identity_matrix::<C>(n);
    for _ in 0..order {
        power = mat_mul(&power, &step);
        if power.iter().flatten().all(JetSeries::is_zero) {
            break;
        }
        acc = mat_add(&acc, &power);
    }
    Ok(map_matrix(&mat_mul(&acc, &h0_inv), |j| j.clone().truncated(order)))
}

/// `h^{lk} = −g^{lp} (∂²ψ/∂z^p∂z̄^q) g^{qk}`.
pub fn h_from_psi(g: &Geometry, psi: &JetSeries) -> Result<DeformedGeometry> {
    if psi.dim() != g.dim {
        return Err(Error::DimensionMismatch(g.dim, psi.dim()));
    }
    let hess = mixed_hessian(psi);
    let h = map_matrix(&mat_mul(&mat_mul(&g.g_upper, &hess), &g.g_upper), |j| -j);
    DeformedGeometry::new_unchecked(g.clone(), h)
}

/// A nonzero Jacobi residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiFailure {
    /// 1 for the holomorphic identity, 2 for the antiholomorphic one.
    pub identity: u8,
    /// Free indices, 1-based, in the order `(l, q, p)` or `(k, p, q)`.
    pub indices: [usize; 3],
    pub residual_terms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub passed: bool,
    /// Jet order through which residuals were compared; `None` when exact.
    pub compared_order: Option<Order>,
    pub failures: Vec<JacobiFailure>,
}

impl JacobiReport {
    fn from_residuals<C: Coeff>(residuals: Vec<(u8, [usize; 3], JetSeries<C>)>) -> Self {
        let order = residuals.iter().map(|(_, _, r)| r.order()).min().unwrap_or(EXACT);
        let failures: Vec<JacobiFailure> = residuals
            .into_iter()
            .filter(|(_, _, r)| !r.is_zero())
            .map(|(identity, idx, r)| JacobiFailure {
                identity,
                indices: idx.map(|i| i + 1),
                residual_terms: r.len(),
            })
            .collect();
        Self {
            passed: failures.is_empty() && order >= 0,
            compared_order: (order != EXACT).then_some(order),
            failures,
        }
    }

    pub fn describe_failure(&self) -> String {
        match self.failures.first() {
            Some(f) => format!(
                "identity {} fails at indices {:?} ({} residual terms)",
                f.identity, f.indices, f.residual_terms
            ),
            None if !self.passed => "no jet coefficients left to compare".into(),
            None => "no failure".into(),
        }
    }
}

impl fmt::Display for JacobiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "Jacobi identity holds")
        } else {
            write!(f, "Jacobi identity fails: {}", self.describe_failure())
        }
    }
}

/// Evaluates both Jacobi identities for every index triple.
pub fn jacobi_check<C: Coeff>(g: &Geometry<C>) -> JacobiReport {
    let n = g.dim;
    let dz: Vec<Vec<Vec<JetSeries<C>>>> = (0..n)
        .map(|k| map_matrix(&g.g_upper, |j| j.derivative(Var::Z(k))))
        .collect();
    let dzb: Vec<Vec<Vec<JetSeries<C>>>> = (0..n)
        .map(|l| map_matrix(&g.g_upper, |j| j.derivative(Var::Zbar(l))))
        .collect();
    let mut residuals = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // g^{lk} ∂_k g^{qp} − g^{qk} ∂_k g^{lp} with (l, q, p) = (a, b, c)
                let mut r1 = JetSeries::zero(n);
                for k in 0..n {
                    r1 = &r1 + &(g.g(a, k) * &dz[k][b][c]);
                    r1 = &r1 - &(g.g(b, k) * &dz[k][a][c]);
                }
                residuals.push((1, [a, b, c], r1));
                // g^{lk} ∂̄_l g^{qp} − g^{lp} ∂̄_l g^{qk} with (k, p, q) = (a, b, c)
                let mut r2 = JetSeries::zero(n);
                for l in 0..n {
                    r2 = &r2 + &(g.g(l, a) * &dzb[l][c][b]);
                    r2 = &r2 - &(g.g(l, b) * &dzb[l][c][a]);
                }
                residuals.push((2, [a, b, c], r2));
            }
        }
    }
    JacobiReport::from_residuals(residuals)
}

/// Evaluates the linearized Jacobi identities for `(g, h)` term by term.
pub fn jacobi_deformed_check(d: &DeformedGeometry) -> JacobiReport {
    let n = d.dim();
    let g = |l: usize, k: usize| d.base.g(l, k);
    let h = |l: usize, k: usize| d.h(l, k);
    let mut residuals = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // (l, q, p) = (a, b, c)
                let mut r1 = JetSeries::zero(n);
                for k in 0..n {
                    let z = Var::Z(k);
                    r1 = &r1 + &(g(a, k) * &h(b, c).derivative(z));
                    r1 = &r1 + &(h(a, k) * &g(b, c).derivative(z));
                    r1 = &r1 - &(g(b, k) * &h(a, c).derivative(z));
                    r1 = &r1 - &(h(b, k) * &g(a, c).derivative(z));
                }
                residuals.push((1, [a, b, c], r1));
                // (k, p, q) = (a, b, c)
                let mut r2 = JetSeries::zero(n);
                for l in 0..n {
                    let zb = Var::Zbar(l);
                    r2 = &r2 + &(g(l, a) * &h(c, b).derivative(zb));
                    r2 = &r2 + &(h(l, a) * &g(c, b).derivative(zb));
                    r2 = &r2 - &(g(l, b) * &h(c, a).derivative(zb));
                    r2 = &r2 - &(h(l, b) * &g(c, a).derivative(zb));
                }
                residuals.push((2, [a, b, c], r2));
            }
        }
    }
    JacobiReport::from_residuals(residuals)
}

/// The built-in test geometries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Flat,
    Disc,
    FubiniStudy,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Flat, Preset::Disc, Preset::FubiniStudy];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Flat => "flat",
            Preset::Disc => "disc",
            Preset::FubiniStudy => "fubini-study",
        }
    }

    /// `Φ_{-1}` to jet order `jet_order`: `Σ z^k z̄^k`, `−log(1−zz̄)` or `log(1+zz̄)`.
    pub fn potential(self, dim: usize, jet_order: Order) -> Result<PotentialData> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if self != Preset::Flat && dim != 1 {
            return Err(Error::Invalid(format!("preset {} is one-dimensional", self.name())));
        }
        let phi = match self {
            Preset::Flat => JetSeries::from_terms(
                dim,
                EXACT,
                (0..dim).map(|k| (Multi::unit(dim, Var::Z(k)).add(&Multi::unit(dim, Var::Zbar(k))), Scalar::from_int(1))),
            ),
            Preset::Disc | Preset::FubiniStudy => {
                if jet_order < 0 || jet_order == EXACT {
                    return Err(Error::Invalid("a logarithmic potential needs a finite jet order".into()));
                }
                let alternating = self == Preset::FubiniStudy;
                JetSeries::from_terms(
                    1,
                    jet_order,
                    (1..=jet_order / 2).map(|k| {
                        let sign = if alternating && k % 2 == 0 { -1 } else { 1 };
                        (Multi::from_parts(&[k as u16], &[k as u16]), Scalar::ratio(sign, k))
                    }),
                )
            }
        };
        Ok(PotentialData::new(phi))
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A preset's potential and its metric.
pub fn preset_geometry(name: &str, dim: usize, jet_order: Order) -> Result<(PotentialData, Geometry)> {
    let preset: Preset = name.parse()?;
    let p = preset.potential(dim, jet_order)?;
    let g = metric_from_potential(&p)?;
    Ok((p, g))
}

fn check_square<C>(m: &[Vec<C>]) -> Result<usize> {
    let n = m.len();
    if n == 0 {
        return Err(Error::Invalid("empty tensor".into()));
    }
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(n, row.len()));
    }
    Ok(n)
}

fn min_order<C: Coeff>(m: &JetMatrix<C>) -> Order {
    m.iter().flatten().map(JetSeries::order).min().unwrap_or(EXACT)
}

pub(crate) fn map_matrix<C: Coeff, D: Coeff>(m: &JetMatrix<C>, f: impl Fn(&JetSeries<C>) -> JetSeries<D>) -> JetMatrix<D> {
    m.iter().map(|row| row.iter().map(&f).collect()).collect()
}

fn identity_matrix<C: Coeff>(n: usize) -> JetMatrix<C> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { JetSeries::one(n) } else { JetSeries::zero(n) })
                .collect()
        })
        .collect()
}

fn zero_matrix<C: Coeff>(n: usize) -> JetMatrix<C> {
    vec![vec![JetSeries::zero(n); n]; n]
}

fn mat_mul<C: Coeff>(a: &JetMatrix<C>, b: &JetMatrix<C>) -> JetMatrix<C> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = JetSeries::zero(n);
                    for k in 0..n {
                        acc = &acc + &(&a[i][k] * &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn mat_add<C: Coeff>(a: &JetMatrix<C>, b: &JetMatrix<C>) -> JetMatrix<C> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

/// Gauss–Jordan inverse over the coefficient ring; `None` when singular.
fn constant_inverse<C: Coeff>(mut a: Vec<Vec<C>>) -> Option<Vec<Vec<C>>> {
    let n = a.len();
    let mut inv: Vec<Vec<C>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { C::one() } else { C::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col].inv().is_some())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] = a[col][j].mul_ref(&p);
            inv[col][j] = inv[col][j].mul_ref(&p);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = a[col][j].mul_ref(&f);
                a[r][j] -= &t;
                let t = inv[col][j].mul_ref(&f);
                inv[r][j] -= &t;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zzbar(k: u16) -> Multi {
        Multi::from_parts(&[k], &[k])
    }

    fn poly1(terms: &[(u16, u16, i64)]) -> JetSeries {
        JetSeries::from_terms(
            1,
            EXACT,
            terms.iter().map(|&(a, b, c)| (Multi::from_parts(&[a], &[b]), Scalar::from_int(c))),
        )
    }

    #[test]
    fn flat_metric_is_identity() {
        let (_, g) = preset_geometry("flat", 2, EXACT).unwrap();
        assert_eq!(g, Geometry::flat(2));
        assert!(jacobi_check(&g).passed);
    }

    #[test]
    fn fubini_study_metric() {
        let m = 12;
        let (p, g) = preset_geometry("fubini-study", 1, m).unwrap();
        // oracle: Hessian times claimed inverse is 1
        let hess = mixed_hessian(&p.phi_minus1)[0][0].clone();
        let claimed = poly1(&[(0, 0, 1), (1, 1, 2), (2, 2, 1)]);
        assert_eq!(&hess * &claimed, JetSeries::one(1).truncated(m - 2));
        assert_eq!(g.g(0, 0), &claimed);
        assert_eq!(g.jet_order(), m - 2);
    }

    #[test]
    fn disc_metric() {
        let (_, g) = preset_geometry("disc", 1, 10).unwrap();
        assert_eq!(g.g(0, 0), &poly1(&[(0, 0, 1), (1, 1, -2), (2, 2, 1)]));
    }

    #[test]
    fn degenerate_hessian() {
        let p = PotentialData::new(poly1(&[(2, 0, 1)]));
        assert!(matches!(metric_from_potential(&p), Err(Error::DegenerateHessian)));
        assert!(matches!(preset_geometry("torus", 1, 4), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn two_dimensional_jacobi_violation() {
        let mut g = identity_matrix::<Scalar>(2);
        g[0][1] = JetSeries::var(2, Var::Z(1));
        let geo = Geometry::new_unchecked(g.clone()).unwrap();
        let r = jacobi_check(&geo);
        assert!(!r.passed);
        assert!(r.failures.iter().any(|f| f.identity == 1));
        assert!(matches!(Geometry::new(g), Err(Error::JacobiViolation(_))));
    }

    #[test]
    fn h_from_psi_examples() {
        let flat = Geometry::flat(1);
        let d = h_from_psi(&flat, &poly1(&[(1, 1, 1)])).unwrap();
        assert_eq!(d.h(0, 0), &JetSeries::constant(1, Scalar::from_int(-1)));
        let hol = h_from_psi(&flat, &poly1(&[(3, 0, 2), (1, 0, 1)])).unwrap();
        assert!(hol.h(0, 0).is_zero());

        let m = 12;
        let (p, g) = preset_geometry("disc", 1, m).unwrap();
        let d = h_from_psi(&g, &p.phi_minus1).unwrap();
        // oracle: −g · ∂∂̄ψ · g computed with independent jet products
        let gg = poly1(&[(0, 0, 1), (1, 1, -2), (2, 2, 1)]);
        let inv_sq = JetSeries::from_terms(1, m - 2, (0..=6).map(|k| (zzbar(k), Scalar::from_int(k as i64 + 1))));
        let expect = -&(&(&gg * &inv_sq) * &gg);
        assert_eq!(d.h(0, 0), &expect);
        assert_eq!(d.h(0, 0), &-&gg);
        assert!(jacobi_deformed_check(&d).passed);
    }

    #[test]
    fn deformed_check_trivial_cases() {
        let (_, g) = preset_geometry("disc", 1, 10).unwrap();
        assert!(jacobi_deformed_check(&DeformedGeometry::trivial(g.clone())).passed);
        let scaled = map_matrix(g.g_upper(), |j| j.scale(&Scalar::ratio(3, 2)));
        let d = DeformedGeometry::new(g, scaled).unwrap();
        assert!(jacobi_check(&d.lifted()).passed);
        assert_eq!(DeformedGeometry::from_lifted(&d.lifted()), d);
    }

    #[test]
    fn two_dimensional_matrix_inverse() {
        // H = [[1 + z1 z̄1, z2], [z̄1, 2]]
        let n = 2;
        let m = 6;
        let j = |t: &[([u16; 2], [u16; 2], i64)]| {
            JetSeries::from_terms(n, m, t.iter().map(|(a, b, c)| (Multi::from_parts(a, b), Scalar::from_int(*c))))
        };
        let h = vec![
            vec![j(&[([0, 0], [0, 0], 1), ([1, 0], [1, 0], 1)]), j(&[([0, 1], [0, 0], 1)])],
            vec![j(&[([0, 0], [1, 0], 1)]), j(&[([0, 0], [0, 0], 2)])],
        ];
        let inv = jet_matrix_inverse(&h).unwrap();
        let prod = mat_mul(&h, &inv);
        assert_eq!(prod, identity_matrix::<Scalar>(n));
        assert!(prod.iter().flatten().all(|e| e.order() >= m - 1));
    }
}
