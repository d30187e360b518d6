//! Verb dispatch.

use std::path::Path;

use anyhow::{Context, Result};

use sepvar_core::algebra::{JetSeries, Order};
use sepvar_core::groupoid::{source_target_exp, Side};
use sepvar_core::kset::{solve_f, solve_k};
use sepvar_core::report::{Check, Report};
use sepvar_core::serial::{jet_from_terms, DualFiberDoc, FiberDoc, JetDoc, JetTerm, NuDoc, OpDoc};
use sepvar_core::starprod::{berezin, operator_log, sigma_y_pipeline, Hand, StarProduct};
use sepvar_core::verify::{self, Options, Subject};
use sepvar_core::{Error, Execution};

use crate::document::{Echo, Orders, Payload, ResultDocument};
use crate::spec::{parse_psi, GeometrySpec, Loaded, DEFAULT_JET_ORDER};
use crate::{Cli, Flags, Verb};

struct Input {
    spec: GeometrySpec,
    loaded: Loaded,
    jet_order: Order,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn geometry(flags: &Flags) -> Result<Input> {
    let path = Path::new(&flags.geometry);
    let spec = if path.is_file() {
        GeometrySpec::parse(&read(path)?).with_context(|| format!("in {}", path.display()))?
    } else {
        GeometrySpec::preset(&flags.geometry, flags.dim, flags.jet_order)
    };
    let loaded = spec.load(flags.jet_order, flags.skip_jacobi)?;
    let jet_order = flags.jet_order.or(spec.jet_order).unwrap_or(DEFAULT_JET_ORDER);
    Ok(Input { spec, loaded, jet_order })
}

/// `--function` text: inline JSON terms, or `@path` to a JSON file of terms.
fn function(text: &str, dim: usize) -> Result<JetSeries> {
    let body = match text.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => text.to_string(),
    };
    let terms: Vec<JetTerm> =
        serde_json::from_str(&body).map_err(|e| Error::Parse(format!("function: {e}")))?;
    Ok(jet_from_terms(dim, None, &terms)?)
}

fn required_function(flags: &Flags, dim: usize) -> Result<JetSeries> {
    let text = flags
        .function
        .as_deref()
        .ok_or_else(|| Error::Invalid("this command needs --function".into()))?;
    function(text, dim)
}

pub fn run(cli: &Cli) -> Result<ResultDocument> {
    let flags = &cli.flags;
    let mut ctx = geometry(flags)?;
    let dim = ctx.loaded.geometry.dim();
    if let Some(path) = &flags.psi {
        let order = flags.jet_order.or(ctx.spec.jet_order);
        ctx.loaded.psi = Some(parse_psi(&read(path)?, dim, order).with_context(|| format!("in {}", path.display()))?);
    }
    let execution = if flags.sequential { Execution::Sequential } else { Execution::Parallel };

    let mut echo = Echo {
        geometry: ctx.spec.clone(),
        orders: Orders {
            fiber_order: flags.fiber_order,
            nu_order: flags.nu_order,
            jet_order: ctx.jet_order,
        },
        skip_jacobi: flags.skip_jacobi,
        psi: ctx.loaded.psi.as_ref().map(JetDoc::of),
        side: None,
        function: None,
        with: None,
        suite: None,
        seed: None,
        test_degree: None,
    };
    let n = flags.fiber_order;
    let r = flags.nu_order;
    let loaded = &ctx.loaded;

    let doc = match &cli.verb {
        Verb::SolveK => {
            let k = solve_k(&loaded.geometry, n)?;
            ResultDocument::new(
                "solve-k",
                echo,
                &["value: fiber-degree recursion from the quadratic part g^{lk} ζ_l ζ̄_k"],
                None,
                Payload::Element {
                    value: FiberDoc::of(k.value()),
                },
            )
        }
        Verb::SolveF => {
            let f = solve_f(&loaded.deformation()?, n)?;
            ResultDocument::new(
                "solve-f",
                echo,
                &["value: the same recursion over dual coefficients, body K and soul J"],
                None,
                Payload::DeformedElement {
                    value: DualFiberDoc::of(f.value()),
                },
            )
        }
        Verb::Source | Verb::Target => {
            let side = if matches!(cli.verb, Verb::Source) { Side::Source } else { Side::Target };
            let f = required_function(flags, dim)?;
            let value = source_target_exp(&loaded.geometry, &f, side, n)?;
            echo.function = Some(JetDoc::of(&f));
            ResultDocument::new(
                side.name(),
                echo,
                &["value: exponential of the contracted derivation applied to the function"],
                None,
                Payload::Map {
                    side: side.name().into(),
                    value: FiberDoc::of(&value),
                },
            )
        }
        Verb::Star => {
            let sp = StarProduct::new(loaded.require_potential()?.clone(), r)?;
            let f = required_function(flags, dim)?;
            echo.function = Some(JetDoc::of(&f));
            match &flags.with {
                Some(text) => {
                    let g = function(text, dim)?;
                    echo.with = Some(JetDoc::of(&g));
                    let value = sp.star(&f, &g)?;
                    ResultDocument::new(
                        "star",
                        echo,
                        &["value: left multiplication operator of the first factor applied to the second"],
                        None,
                        Payload::Product {
                            value: NuDoc::of(&value),
                        },
                    )
                }
                None => {
                    let hand = hand(flags.side.as_deref())?;
                    echo.side = Some(hand.name().into());
                    let op = sp.mult_op(&f, hand)?;
                    ResultDocument::new(
                        "star",
                        echo,
                        &["value: grade-by-grade solution of the commutation relations with the potential gradients"],
                        None,
                        Payload::Operator {
                            hand: hand.name().into(),
                            value: OpDoc::of(&op),
                        },
                    )
                }
            }
        }
        Verb::Berezin => {
            let sp = StarProduct::new(loaded.require_potential()?.clone(), r)?;
            let b = berezin(&sp)?;
            ResultDocument::new(
                "berezin",
                echo,
                &["value: triangular reconstruction from B(a b) = L_b a on monomials"],
                None,
                Payload::Berezin { value: OpDoc::of(&b) },
            )
        }
        Verb::LogX => {
            let sp = StarProduct::new(loaded.require_potential()?.clone(), r)?;
            let x = operator_log(&berezin(&sp)?)?;
            let symbol = x.sigma_symbol(n)?;
            let k = solve_k(&loaded.geometry, n)?;
            let mut report = Report::new("log-x");
            report.push(Check::flag("sharp-naturality", x.naturality_report().sharp, None));
            report.push(Check::from_fiber("symbol-equals-k", &(&symbol - k.value())));
            ResultDocument::new(
                "log-x",
                echo,
                &[
                    "value: ν times the logarithm series of the reconstructed Berezin transform",
                    "symbol-equals-k: compared against the fiber-degree recursion",
                ],
                Some(report),
                Payload::Log {
                    value: OpDoc::of(&x),
                    symbol: FiberDoc::of(&symbol),
                },
            )
        }
        Verb::SigmaY => {
            let out = execution.install(|| sigma_y_pipeline(loaded.require_potential()?, n, r))?;
            ResultDocument::new(
                "sigma-y",
                echo,
                &[
                    "sigma_y: symbol of the odd part of ν log B",
                    "half_j: soul of the dual-coefficient recursion with h read off the third grade of ν log B",
                ],
                Some(out.report),
                Payload::SigmaY {
                    sigma_y: FiberDoc::of(&out.sigma_y),
                    half_j: FiberDoc::of(&out.half_j),
                    residual: FiberDoc::of(&out.residual),
                },
            )
        }
        Verb::Verify { suite } => {
            let subject = Subject {
                geometry: loaded.geometry.clone(),
                potential: loaded.potential.clone(),
                psi: loaded.psi.clone().or_else(|| loaded.potential.as_ref().map(|p| p.phi_minus1.clone())),
                deformation: loaded.deformation()?,
            };
            let opts = Options {
                fiber_order: n,
                nu_order: r,
                test_degree: flags.test_degree,
                seed: flags.seed,
                ..Options::default()
            };
            echo.suite = Some(suite.name().into());
            echo.seed = Some(flags.seed);
            echo.test_degree = Some(flags.test_degree);
            let report = verify::run(*suite, &subject, &opts, execution);
            ResultDocument::new(
                "verify",
                echo,
                &["samples: ChaCha8 stream seeded from --seed, degree <= 3, coefficient height <= 3"],
                Some(report),
                Payload::Verification,
            )
        }
    };
    Ok(doc)
}

fn hand(side: Option<&str>) -> Result<Hand> {
    Ok(match side {
        None | Some("left") | Some("source") => Hand::Left,
        Some("right") | Some("target") => Hand::Right,
        Some(other) => return Err(Error::Invalid(format!("unknown side {other:?}")).into()),
    })
}
