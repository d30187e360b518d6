//! Named verification suites over one geometry, driven by a seeded sampler.
//!
//! Every suite returns a [`Report`]; computations that fail are recorded as
//! failed checks rather than aborting the suite.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{FiberPoly, JetSeries, Multi, NuSeries, Order, Scalar, Var};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::geometry::{h_from_psi, DeformedGeometry, Geometry, PotentialData};
use crate::groupoid::{
    chart_bracket, deformed_source_target, s1_via_ad_series, s1_via_potential, source_target_exp, verify_axioms, Side,
    SourceTargetMap,
};
use crate::kset::{deformation_from_hamiltonian, membership_report, solve_f, solve_k, st_from_element, ElementShape};
use crate::report::{Check, Report};
use crate::samples::Sampler;
use crate::starprod::{berezin, dual_berezin_check, operator_log, pair_s1, sigma_y_pipeline, Hand, StarProduct};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    Kset,
    Starprod,
    Pipeline,
    All,
}

impl Suite {
    pub const NAMED: [Suite; 4] = [Suite::Axioms, Suite::Kset, Suite::Starprod, Suite::Pipeline];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Kset => "kset",
            Suite::Starprod => "starprod",
            Suite::Pipeline => "pipeline",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::NAMED
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The geometry under test.
#[derive(Clone, Debug)]
pub struct Subject {
    pub geometry: Geometry,
    pub potential: Option<PotentialData>,
    /// Potential perturbation generating the deformation, when known.
    pub psi: Option<JetSeries>,
    pub deformation: DeformedGeometry,
}

impl Subject {
    /// A potential-defined geometry deformed by `ψ` (default `Φ_{-1}` itself).
    pub fn from_potential(potential: PotentialData, geometry: Geometry, psi: Option<JetSeries>) -> Result<Self> {
        let psi = psi.unwrap_or_else(|| potential.phi_minus1.clone());
        let deformation = h_from_psi(&geometry, &psi)?;
        Ok(Self {
            geometry,
            potential: Some(potential),
            psi: Some(psi),
            deformation,
        })
    }

    fn potential(&self) -> Result<&PotentialData> {
        self.potential
            .as_ref()
            .ok_or_else(|| Error::Invalid("this suite needs a potential, not only g^{lk}".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Options {
    pub fiber_order: Order,
    pub nu_order: usize,
    pub test_degree: u32,
    pub seed: u64,
    pub samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            fiber_order: 4,
            nu_order: 5,
            test_degree: 3,
            seed: 0,
            samples: 20,
        }
    }
}

/// Runs `suite` under `execution`; `All` concatenates the named suites.
pub fn run(suite: Suite, subject: &Subject, opts: &Options, execution: Execution) -> Report {
    execution.install(|| match suite {
        Suite::All => {
            let mut report = Report::new("all");
            for s in Suite::NAMED {
                report.absorb(run_one(s, subject, opts));
            }
            report
        }
        s => run_one(s, subject, opts),
    })
}

fn run_one(suite: Suite, subject: &Subject, opts: &Options) -> Report {
    let mut report = Report::new(suite.name());
    let outcome = match suite {
        Suite::Axioms => axioms(subject, opts, &mut report),
        Suite::Kset => kset(subject, opts, &mut report),
        Suite::Starprod => starprod(subject, opts, &mut report),
        Suite::Pipeline => pipeline(subject, opts, &mut report),
        Suite::All => unreachable!("expanded by run"),
    };
    if let Err(e) = outcome {
        report.push(Check::from_error("suite", &e));
    }
    report
}

fn sampler(subject: &Subject, opts: &Options, stream: u64) -> Sampler {
    Sampler::new(opts.seed.wrapping_mul(1000).wrapping_add(stream), subject.geometry.dim())
}

fn axioms(subject: &Subject, opts: &Options, report: &mut Report) -> Result<()> {
    let d = &subject.deformation;
    let s = SourceTargetMap::deformed(d, Side::Source, opts.fiber_order);
    let t = SourceTargetMap::deformed(d, Side::Target, opts.fiber_order);
    let pairs = sampler(subject, opts, 1).with_max_degree(2).pairs(opts.samples);
    report.extend(verify_axioms(&s, &t, d, &pairs).checks);
    Ok(())
}

/// Monomials `z^α`, `z̄^β` with `|α| + |β| <= degree`, as factor pairs.
fn factor_pairs(dim: usize, degree: u32) -> Vec<(JetSeries, JetSeries)> {
    let zeros = vec![0u16; dim];
    Multi::up_to_degree(dim, degree, true, true)
        .into_iter()
        .map(|m| {
            let one = Scalar::from_int(1);
            (
                JetSeries::monomial(dim, Multi::from_parts(m.holo(), &zeros), one.clone()),
                JetSeries::monomial(dim, Multi::from_parts(&zeros, m.anti()), one),
            )
        })
        .collect()
}

fn shape_checks(label: &str, k: &FiberPoly, report: &mut Report) {
    let shape = ElementShape::of(k);
    for d in (3..=k.fiber_order() as u32).step_by(2) {
        report.push(Check::from_fiber(format!("{label}/odd-degree-{d}"), &k.homogeneous(d)));
    }
    report.push(Check::flag(
        format!("{label}/mixed-support"),
        shape.mixed_support,
        (!shape.mixed_support).then(|| "a monomial lacks a ζ or a ζ̄ factor".to_string()),
    ));
}

fn kset(subject: &Subject, opts: &Options, report: &mut Report) -> Result<()> {
    let g = &subject.geometry;
    let n = opts.fiber_order;
    let k = solve_k(g, n + 1)?;
    shape_checks("k", k.value(), report);
    report.absorb(membership_report(k.value(), opts.test_degree)?);

    let pairs = factor_pairs(g.dim(), n as u32);
    for side in [Side::Source, Side::Target] {
        let checks = exec::map(&pairs, |(a, b)| {
            let name = format!("uniqueness/{side}[{a:?}·{b:?}]");
            let run = || -> Result<Check> {
                let mut via_k = st_from_element(k.value(), a, b, side)?;
                via_k.truncate_fiber(n);
                let direct = source_target_exp(g, &(a * b), side, n)?;
                Ok(Check::from_fiber(name.clone(), &(&via_k - &direct)))
            };
            run().unwrap_or_else(|e| Check::from_error(name.clone(), &e))
        });
        report.extend(checks);
    }

    let f = solve_f(&subject.deformation, n + 1)?;
    shape_checks("j", &f.soul(), report);
    let mut dm = membership_report(f.value(), opts.test_degree.min(2))?;
    dm.name = "deformed-membership".into();
    report.absorb(dm);

    let tests = sampler(subject, opts, 2).with_max_degree(2).jets(3);
    for (i, t) in tests.iter().enumerate() {
        for side in [Side::Source, Side::Target] {
            let name = format!("deformation-routes/{side}[{i}]");
            let run = || -> Result<Vec<Check>> {
                let mut soul = deformed_source_target(&subject.deformation, t, side, n)?.soul();
                soul.truncate_fiber(n - 1);
                let mut ham = deformation_from_hamiltonian(k.value(), &f.soul(), t, side)?;
                ham.truncate_fiber(n - 1);
                let mut ad = s1_via_ad_series(&subject.deformation, t, side, n)?;
                ad.truncate_fiber(n - 1);
                let mut out = vec![
                    Check::from_fiber(format!("{name}/hamiltonian"), &(&soul - &ham)),
                    Check::from_fiber(format!("{name}/ad-series"), &(&soul - &ad)),
                ];
                if let Some(psi) = &subject.psi {
                    let mut pot = s1_via_potential(g, psi, t, side, n)?;
                    pot.truncate_fiber(n - 1);
                    out.push(Check::from_fiber(format!("{name}/potential"), &(&soul - &pot)));
                }
                Ok(out)
            };
            match run() {
                Ok(cs) => report.extend(cs),
                Err(e) => report.push(Check::from_error(name, &e)),
            }
        }
    }
    Ok(())
}

fn starprod(subject: &Subject, opts: &Options, report: &mut Report) -> Result<()> {
    let p = subject.potential()?;
    let r = opts.nu_order;
    let n = opts.fiber_order;
    let sp = StarProduct::new(p.clone(), r)?;
    let g = sp.geometry();
    let dim = sp.dim();
    let mut s = sampler(subject, opts, 3).with_max_degree(2);
    let jets = s.jets(4);
    let one = JetSeries::one(dim);

    for (i, u) in jets.iter().enumerate() {
        let v = &jets[(i + 1) % jets.len()];
        let name = |what: &str| format!("{what}[{i}]");
        let (hol, anti) = (s.holomorphic(), s.antiholomorphic());
        let run = || -> Result<Vec<Check>> {
            let unit_l = sp.star(u, &one)?.sub(&NuSeries::constant(u, r));
            let unit_r = sp.star(&one, u)?.sub(&NuSeries::constant(u, r));
            let c1 = sp.component(1, u, v)?;
            let mut expect = JetSeries::zero(dim);
            for l in 0..dim {
                for k in 0..dim {
                    let t = &(g.g(l, k) * &u.derivative(Var::Zbar(l))) * &v.derivative(Var::Z(k));
                    expect = &expect + &t;
                }
            }
            let d1 = &(&c1 - &sp.component(1, v, u)?) - &chart_bracket(g, u, v);
            let perturbed = sp.mult_op(&(u + &hol), Hand::Left)?.apply(&(v + &anti));
            let plain = sp.star(u, v)?;
            let mut sepvar = perturbed.sub(&plain);
            sepvar.set_grade(0, JetSeries::zero(dim));
            let left = sp.mult_op(u, Hand::Left)?;
            let right = sp.mult_op(v, Hand::Right)?;
            let commute = left.compose(&right)?.sub(&right.compose(&left)?);
            let mut out = vec![
                Check::from_nu(name("unity/right"), &unit_l),
                Check::from_nu(name("unity/left"), &unit_r),
                Check::from_jet(name("c1-formula"), &(&c1 - &expect)),
                Check::from_jet(name("c1-antisymmetric-part"), &d1),
                Check::from_nu(name("separation"), &sepvar),
            ];
            for (k, grade) in commute.grades().iter().enumerate() {
                out.push(Check::from_grade(name(&format!("left-right-commute/grade-{k}")), grade));
            }
            for hand in [Hand::Left, Hand::Right] {
                let sym = sp.mult_op(u, hand)?.sigma_symbol(n)?;
                let direct = source_target_exp(g, u, hand.side(), n)?;
                out.push(Check::from_fiber(name(&format!("symbol/{hand}")), &(&sym - &direct)));
            }
            Ok(out)
        };
        match run() {
            Ok(cs) => report.extend(cs),
            Err(e) => report.push(Check::from_error(name("products"), &e)),
        }
    }

    let triple = s.jets(3);
    let run = || -> Result<Check> {
        let (f, gg, h) = (&triple[0], &triple[1], &triple[2]);
        let left = sp.star_series(&sp.star(f, gg)?, &NuSeries::constant(h, r))?;
        let right = sp.star_series(&NuSeries::constant(f, r), &sp.star(gg, h)?)?;
        Ok(Check::from_nu("associativity", &left.sub(&right)))
    };
    report.push(run().unwrap_or_else(|e| Check::from_error("associativity", &e)));

    let b = berezin(&sp)?;
    let x = operator_log(&b)?;
    let nat = x.naturality_report();
    report.push(Check::flag("log/sharp-naturality", nat.sharp, None));
    let k = solve_k(g, n)?;
    report.push(Check::from_fiber("log/symbol-equals-k", &(&x.sigma_symbol(n)? - k.value())));

    let dual_sp = sp.with_nu_order(r.min(4));
    let dual_samples = s.jets(4);
    report.absorb(dual_berezin_check(&dual_sp, &dual_samples));

    if let Some(psi) = &subject.psi {
        let shifted = StarProduct::new(p.shifted(psi), r.min(4))?;
        let base = sp.with_nu_order(r.min(4));
        let depth = (n - 1).min(3);
        for (a, bb) in factor_pairs(dim, 3) {
            let f = &a * &bb;
            if f.terms().next().map(|(m, _)| m.is_zero()).unwrap_or(true) {
                continue;
            }
            for side in [Side::Source, Side::Target] {
                let name = format!("pair-s1/{side}[{f:?}]");
                let run = || -> Result<Check> {
                    let pair = pair_s1(&shifted, &base, &f, side, depth)?;
                    let pot = s1_via_potential(g, psi, &f, side, depth)?;
                    Ok(Check::from_fiber(name.clone(), &(&pair - &pot)))
                };
                report.push(run().unwrap_or_else(|e| Check::from_error(name.clone(), &e)));
            }
        }
    }
    Ok(())
}

fn pipeline(subject: &Subject, opts: &Options, report: &mut Report) -> Result<()> {
    let p = subject.potential()?;
    let out = sigma_y_pipeline(p, opts.fiber_order, opts.nu_order)?;
    report.extend(out.report.checks);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::preset_geometry;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::NAMED.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn flat_all_passes() {
        let (p, g) = preset_geometry("flat", 1, crate::algebra::EXACT).unwrap();
        let subject = Subject::from_potential(p, g, None).unwrap();
        let opts = Options {
            samples: 3,
            ..Options::default()
        };
        let report = run(Suite::All, &subject, &opts, Execution::Sequential);
        assert!(report.passed, "{report}");
    }
}
