//! Source and target mappings `C∞(M) → C∞(T*M)` near the zero section.
//!
//! `S f = e^𝔇 f` with `𝔇 = ζ_k g^{lk} ∂/∂z̄^l`, and `T f = e^𝔇̄ f` with
//! `𝔇̄ = ζ̄_l g^{lk} ∂/∂z^k`. Each application of `𝔇` raises the fiber degree by
//! exactly one, so `N` applications give `S f` exactly through fiber degree `N`.
//! Deformations are handled by running the same code over dual numbers.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{Coeff, Dual, FiberPoly, FiberVar, JetSeries, Multi, Order, Scalar, Var};
use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{DeformedGeometry, Geometry};
use crate::report::{Check, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Source => "source",
            Side::Target => "target",
        }
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "source" => Ok(Side::Source),
            "target" => Ok(Side::Target),
            _ => Err(Error::Invalid(format!("unknown side {s:?}"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A lazily evaluated map from base jets to fiber polynomials.
pub trait FiberMap<C: Coeff>: Sync {
    fn dim(&self) -> usize;
    fn side(&self) -> Side;
    fn fiber_order(&self) -> Order;
    fn apply(&self, f: &JetSeries<C>) -> Result<FiberPoly<C>>;
}

/// `S` or `T` of a tensor, evaluated by the exponential formula.
#[derive(Clone, Debug)]
pub struct SourceTargetMap<C: Coeff = Scalar> {
    geometry: Geometry<C>,
    side: Side,
    fiber_order: Order,
}

impl<C: Coeff> SourceTargetMap<C> {
    pub fn new(geometry: Geometry<C>, side: Side, fiber_order: Order) -> Self {
        Self {
            geometry,
            side,
            fiber_order,
        }
    }

    pub fn geometry(&self) -> &Geometry<C> {
        &self.geometry
    }
}

impl SourceTargetMap<Dual> {
    /// The map of `g + εh`; its soul is the first-order variation.
    pub fn deformed(d: &DeformedGeometry, side: Side, fiber_order: Order) -> Self {
        Self::new(d.lifted(), side, fiber_order)
    }
}

impl<C: Coeff + Send + Sync> FiberMap<C> for SourceTargetMap<C> {
    fn dim(&self) -> usize {
        self.geometry.dim()
    }
    fn side(&self) -> Side {
        self.side
    }
    fn fiber_order(&self) -> Order {
        self.fiber_order
    }
    fn apply(&self, f: &JetSeries<C>) -> Result<FiberPoly<C>> {
        source_target_exp(&self.geometry, f, self.side, self.fiber_order)
    }
}

/// `𝔇 P` (source) or `𝔇̄ P` (target), acting on the jet coefficients of `P`.
pub fn apply_derivation<C: Coeff>(g: &Geometry<C>, p: &FiberPoly<C>, side: Side) -> FiberPoly<C> {
    let n = g.dim();
    let mut acc: Option<FiberPoly<C>> = None;
    for a in 0..n {
        let partial = match side {
            Side::Source => p.diff_base(Var::Zbar(a)),
            Side::Target => p.diff_base(Var::Z(a)),
        };
        for b in 0..n {
            // source: ζ_b g^{ab} ∂/∂z̄^a; target: ζ̄_b g^{ba} ∂/∂z^a
            let (coeff, fv) = match side {
                Side::Source => (g.g(a, b), Var::Z(b)),
                Side::Target => (g.g(b, a), Var::Zbar(b)),
            };
            let term = partial.mul_jet(coeff).shift_fiber(&Multi::unit(n, fv));
            acc = Some(match acc {
                Some(s) => &s + &term,
                None => term,
            });
        }
    }
    acc.expect("dimension is positive")
}

/// `Σ_{m <= N} 𝔇^m f / m!` (source) or the same with `𝔇̄` (target).
pub fn source_target_exp<C: Coeff>(g: &Geometry<C>, f: &JetSeries<C>, side: Side, n: Order) -> Result<FiberPoly<C>> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(g.dim(), f.dim()));
    }
    if n < 0 {
        return Err(Error::Invalid("fiber order must be non-negative".into()));
    }
    let mut sum = FiberPoly::from_jet(f, n);
    let mut term = sum.clone();
    for m in 1..=n {
        term = apply_derivation(g, &term, side).scale(&Scalar::ratio(1, m));
        sum = &sum + &term;
        // a truncated zero still loses jet order under later derivatives
        if term.is_zero() && term.jet_order() == crate::algebra::EXACT {
            break;
        }
    }
    sum.truncate_fiber(n);
    if sum.jet_order() < 0 {
        return Err(Error::TruncationInsufficient(format!(
            "jet order {} cannot support {n} derivative applications",
            g.jet_order().min(f.order())
        )));
    }
    Ok(sum)
}

/// The deformed map `e^{𝔇 + ε𝔈} f`; split the result for `(S_0 f, S_1 f)`.
pub fn deformed_source_target(d: &DeformedGeometry, f: &JetSeries, side: Side, n: Order) -> Result<FiberPoly<Dual>> {
    source_target_exp(&d.lifted(), &f.lift(), side, n)
}

/// A vector field on the base with fiber-polynomial components.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<C: Coeff = Scalar> {
    /// Components along `∂/∂z^k`.
    pub z: Vec<FiberPoly<C>>,
    /// Components along `∂/∂z̄^l`.
    pub zbar: Vec<FiberPoly<C>>,
}

impl<C: Coeff> VectorField<C> {
    /// `𝔇` (source) or `𝔇̄` (target) built from the tensor `t`.
    pub fn from_tensor(t: &[Vec<JetSeries<C>>], side: Side, fiber_order: Order) -> Self {
        let n = t.len();
        let zero = || FiberPoly::zero(n, fiber_order, crate::algebra::EXACT);
        let mut z: Vec<FiberPoly<C>> = (0..n).map(|_| zero()).collect();
        let mut zbar: Vec<FiberPoly<C>> = (0..n).map(|_| zero()).collect();
        for l in 0..n {
            for k in 0..n {
                match side {
                    Side::Source => {
                        let term = FiberPoly::monomial(n, Multi::unit(n, Var::Z(k)), t[l][k].clone(), fiber_order);
                        zbar[l] = &zbar[l] + &term;
                    }
                    Side::Target => {
                        let term = FiberPoly::monomial(n, Multi::unit(n, Var::Zbar(l)), t[l][k].clone(), fiber_order);
                        z[k] = &z[k] + &term;
                    }
                }
            }
        }
        Self { z, zbar }
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn is_zero(&self) -> bool {
        self.z.iter().chain(&self.zbar).all(FiberPoly::is_zero)
    }

    fn min_degree(&self) -> Order {
        self.z.iter().chain(&self.zbar).map(FiberPoly::min_degree).min().expect("non-empty")
    }

    fn fiber_order(&self) -> Order {
        self.z.iter().chain(&self.zbar).map(FiberPoly::fiber_order).min().expect("non-empty")
    }

    /// `Σ v^i ∂_i P` over base coordinates; fiber variables are parameters.
    pub fn apply(&self, p: &FiberPoly<C>) -> FiberPoly<C> {
        let mut acc = FiberPoly::zero(p.dim(), p.fiber_order(), p.jet_order());
        for (k, c) in self.z.iter().enumerate() {
            acc = &acc + &(c * &p.diff_base(Var::Z(k)));
        }
        for (l, c) in self.zbar.iter().enumerate() {
            acc = &acc + &(c * &p.diff_base(Var::Zbar(l)));
        }
        acc
    }

    /// `[U, W]^i = U(w^i) − W(u^i)`.
    pub fn commutator(&self, other: &Self) -> Self {
        let comp = |u: &FiberPoly<C>, w: &FiberPoly<C>| &self.apply(w) - &other.apply(u);
        Self {
            z: self.z.iter().zip(&other.z).map(|(u, w)| comp(u, w)).collect(),
            zbar: self.zbar.iter().zip(&other.zbar).map(|(u, w)| comp(u, w)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self {
            z: self.z.iter().map(|c| c.scale(s)).collect(),
            zbar: self.zbar.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
            zbar: self.zbar.iter().zip(&other.zbar).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `S_1 f = V(S_0 f)` with `V = Σ_m (ad 𝔇)^m 𝔈 / (m+1)!`.
pub fn s1_via_ad_series(d: &DeformedGeometry, f: &JetSeries, side: Side, n: Order) -> Result<FiberPoly> {
    let s0 = source_target_exp(d.base(), f, side, n)?;
    let dd = VectorField::from_tensor(d.base().g_upper(), side, n);
    let ee = VectorField::from_tensor(d.h_upper(), side, n);
    let mut v = ee.clone();
    let mut term = ee;
    let mut m = 2i64;
    loop {
        term = dd.commutator(&term).scale(&Scalar::ratio(1, m));
        if term.is_zero() || term.min_degree() > term.fiber_order().min(n) {
            break;
        }
        v = v.add(&term);
        m += 1;
    }
    let out = v.apply(&s0);
    let mut out = out;
    out.truncate_fiber(n);
    if out.jet_order() < 0 {
        return Err(Error::TruncationInsufficient("ad-series exhausted the jet order".into()));
    }
    Ok(out)
}

/// `D^p P = g^{lp} ∂P/∂z̄^l` (source) or `D̄^q P = g^{qk} ∂P/∂z^k` (target).
pub fn contracted_derivative<C: Coeff>(g: &Geometry<C>, p: &FiberPoly<C>, index: usize, side: Side) -> FiberPoly<C> {
    let n = g.dim();
    let mut acc = FiberPoly::zero(n, p.fiber_order(), p.jet_order());
    for a in 0..n {
        let term = match side {
            Side::Source => p.diff_base(Var::Zbar(a)).mul_jet(g.g(a, index)),
            Side::Target => p.diff_base(Var::Z(a)).mul_jet(g.g(index, a)),
        };
        acc = &acc + &term;
    }
    acc
}

/// `S_1 f = (∂ψ/∂z^p − S_0 ∂ψ/∂z^p) D^p S_0 f`, and its conjugate for the target.
pub fn s1_via_potential(g: &Geometry, psi: &JetSeries, f: &JetSeries, side: Side, n: Order) -> Result<FiberPoly> {
    if psi.dim() != g.dim() {
        return Err(Error::DimensionMismatch(g.dim(), psi.dim()));
    }
    let s0f = source_target_exp(g, f, side, n)?;
    let mut acc = FiberPoly::zero(g.dim(), n, s0f.jet_order());
    for p in 0..g.dim() {
        let dpsi = match side {
            Side::Source => psi.derivative(Var::Z(p)),
            Side::Target => psi.derivative(Var::Zbar(p)),
        };
        let pref = &FiberPoly::from_jet(&dpsi, n) - &source_target_exp(g, &dpsi, side, n)?;
        acc = &acc + &(&pref * &contracted_derivative(g, &s0f, p, side));
    }
    let mut out = acc;
    out.truncate_fiber(n);
    if out.jet_order() < 0 {
        return Err(Error::TruncationInsufficient("potential formula exhausted the jet order".into()));
    }
    Ok(out)
}

/// Reads `g^{lk}` from the first fiber derivatives of the map on coordinates.
pub fn recover_tensors<C: Coeff>(map: &dyn FiberMap<C>) -> Result<Geometry<C>> {
    let n = map.dim();
    let mut g = vec![vec![JetSeries::zero(n); n]; n];
    for a in 0..n {
        match map.side() {
            Side::Source => {
                let img = map.apply(&JetSeries::var(n, Var::Zbar(a)))?;
                for k in 0..n {
                    g[a][k] = img.diff_fiber(FiberVar::Zeta(k)).zero_section();
                }
            }
            Side::Target => {
                let img = map.apply(&JetSeries::var(n, Var::Z(a)))?;
                for l in 0..n {
                    g[l][a] = img.diff_fiber(FiberVar::ZetaBar(l)).zero_section();
                }
            }
        }
    }
    Geometry::new_unchecked(g)
}

/// Recovers `(g, h)` from a deformed map.
pub fn recover_deformation(map: &dyn FiberMap<Dual>) -> Result<DeformedGeometry> {
    Ok(DeformedGeometry::from_lifted(&recover_tensors(map)?))
}

/// `{f, g} = g^{lk}(∂f/∂z̄^l ∂g/∂z^k − ∂g/∂z̄^l ∂f/∂z^k)` on the chart.
///
/// Over dual numbers with `g + εh` this is `{f,g}_0 + ε{f,g}_1`.
pub fn chart_bracket<C: Coeff>(g: &Geometry<C>, f: &JetSeries<C>, h: &JetSeries<C>) -> JetSeries<C> {
    let n = g.dim();
    let mut acc = JetSeries::zero(n);
    for l in 0..n {
        let fl = f.derivative(Var::Zbar(l));
        let hl = h.derivative(Var::Zbar(l));
        for k in 0..n {
            let t = &(&fl * &h.derivative(Var::Z(k))) - &(&hl * &f.derivative(Var::Z(k)));
            acc = &acc + &(g.g(l, k) * &t);
        }
    }
    acc
}

/// Checks every groupoid axiom on each sample pair over dual numbers.
///
/// Body components are the undeformed axioms; soul components are their
/// first-order variations.
pub fn verify_axioms(
    s: &dyn FiberMap<Dual>,
    t: &dyn FiberMap<Dual>,
    d: &DeformedGeometry,
    samples: &[(JetSeries, JetSeries)],
) -> Report {
    let lifted = d.lifted();
    let per_pair = exec::map(samples, |(f, g)| axioms_for_pair(s, t, &lifted, &f.lift(), &g.lift()));
    let mut report = Report::new("axioms");
    for (i, checks) in per_pair.into_iter().enumerate() {
        for c in checks {
            let name = format!("{}[{i}]", c.name);
            report.push(c.renamed(name));
        }
    }
    report
}

fn axioms_for_pair(
    s: &dyn FiberMap<Dual>,
    t: &dyn FiberMap<Dual>,
    geo: &Geometry<Dual>,
    f: &JetSeries<Dual>,
    g: &JetSeries<Dual>,
) -> Vec<Check> {
    let mut out = Vec::new();
    let bracket = chart_bracket(geo, f, g);
    let fg = f * g;
    for (map, sign) in [(s, 1i64), (t, -1i64)] {
        let side = map.side().name();
        let run = || -> Result<Vec<Check>> {
            let mf = map.apply(f)?;
            let mg = map.apply(g)?;
            let unit_f = mf.zero_section().residual(f);
            let unit_g = mg.zero_section().residual(g);
            let prod = &map.apply(&fg)? - &(&mf * &mg);
            let pb = crate::algebra::poisson_bracket(&mf, &mg)?.scale(&Scalar::from_int(sign));
            let poisson = &map.apply(&bracket)? - &pb;
            Ok(vec![
                Check::from_jet(format!("zero-section/{side}/f"), &unit_f),
                Check::from_jet(format!("zero-section/{side}/g"), &unit_g),
                Check::from_fiber(format!("multiplicative/{side}"), &prod),
                Check::from_fiber(format!("{}/{side}", if sign > 0 { "poisson" } else { "anti-poisson" }), &poisson),
            ])
        };
        match run() {
            Ok(c) => out.extend(c),
            Err(e) => out.push(Check::from_error(format!("axioms/{side}"), &e)),
        }
    }
    let commuting = s
        .apply(f)
        .and_then(|sf| t.apply(g).and_then(|tg| crate::algebra::poisson_bracket(&sf, &tg)));
    out.push(match commuting {
        Ok(r) => Check::from_fiber("commuting", &r),
        Err(e) => Check::from_error("commuting", &e),
    });
    out
}
