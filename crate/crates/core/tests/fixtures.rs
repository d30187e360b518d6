//! Frozen regression values. Each file records the oracle that produced it;
//! the assertions recompute the value by a different route where one exists.
//!
//! Regenerate with `cargo test -p sepvar-core --test fixtures -- --ignored`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use sepvar_core::algebra::{FiberPoly, Scalar};
use sepvar_core::geometry::{metric_from_potential, Preset};
use sepvar_core::kset::{solve_f, solve_k};
use sepvar_core::serial::{FiberDoc, JetDoc};
use sepvar_core::starprod::{berezin, h_from_x3, operator_log, parity_hat, StarProduct};

const JET_ORDER: i64 = 12;
const PRESETS: [Preset; 2] = [Preset::Disc, Preset::FubiniStudy];

#[derive(Debug, Serialize, Deserialize)]
struct Fixture {
    name: String,
    oracle: String,
    preset: String,
    jet_order: i64,
    nu_order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fiber: Option<FiberDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    jet: Option<JetDoc>,
}

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(format!("{name}.json"))
}

fn load(name: &str) -> Fixture {
    let text = std::fs::read_to_string(path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"));
    serde_json::from_str(&text).unwrap()
}

fn log_x(preset: Preset, b_order: usize) -> sepvar_core::algebra::DiffOp {
    let sp = StarProduct::new(preset.potential(1, JET_ORDER).unwrap(), b_order).unwrap();
    operator_log(&berezin(&sp).unwrap()).unwrap()
}

fn oracle_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for preset in PRESETS {
        let x = log_x(preset, 4);
        out.push(Fixture {
            name: format!("k4-{preset}"),
            oracle: "fiber-degree-4 part of sigma(nu log B), B from the star product at nu-order 4".into(),
            preset: preset.name().into(),
            jet_order: JET_ORDER,
            nu_order: 5,
            fiber: Some(FiberDoc::of(&x.sigma_symbol(4).unwrap().homogeneous(4))),
            jet: None,
        });
        let d = h_from_x3(&log_x(preset, 2)).unwrap();
        out.push(Fixture {
            name: format!("h-{preset}"),
            oracle: "twice the mixed second-derivative coefficient of X_3 from nu log B at nu-order 3".into(),
            preset: preset.name().into(),
            jet_order: JET_ORDER,
            nu_order: 3,
            fiber: None,
            jet: Some(JetDoc::of(d.h(0, 0))),
        });
        let (_, y) = parity_hat(&x);
        let j4 = y.sigma_symbol(4).unwrap().homogeneous(4).scale(&Scalar::from_int(2));
        out.push(Fixture {
            name: format!("j4-{preset}"),
            oracle: "twice the fiber-degree-4 part of sigma(Y), Y the odd part of nu log B at nu-order 5".into(),
            preset: preset.name().into(),
            jet_order: JET_ORDER,
            nu_order: 5,
            fiber: Some(FiberDoc::of(&j4)),
            jet: None,
        });
    }
    out
}

#[test]
#[ignore = "rewrites the frozen fixtures"]
fn regenerate() {
    for f in oracle_fixtures() {
        let text = serde_json::to_string_pretty(&f).unwrap() + "\n";
        std::fs::write(path(&f.name), text).unwrap();
    }
}

fn assert_matches(label: &str, computed: &FiberPoly, frozen: &FiberPoly) {
    let residual = computed - frozen;
    assert!(residual.is_zero(), "{label}: {residual:?}");
    assert!(residual.jet_order() >= 0, "{label}: empty comparison");
}

#[test]
fn k4_recursion_matches_frozen_log_symbol() {
    for preset in PRESETS {
        let fx = load(&format!("k4-{preset}"));
        let frozen = fx.fiber.unwrap().to_poly().unwrap();
        assert!(!frozen.is_zero());
        let g = metric_from_potential(&preset.potential(1, fx.jet_order).unwrap()).unwrap();
        let k = solve_k(&g, 4).unwrap();
        assert_matches(&fx.name, &k.component(4), &frozen);
    }
}

#[test]
fn h_matches_frozen_value() {
    for preset in PRESETS {
        let fx = load(&format!("h-{preset}"));
        let frozen = fx.jet.unwrap().to_jet().unwrap();
        let d = h_from_x3(&log_x(preset, fx.nu_order - 1)).unwrap();
        let residual = d.h(0, 0) - &frozen;
        assert!(residual.is_zero() && residual.order() >= 0, "{}: {residual:?}", fx.name);
    }
}

#[test]
fn j4_recursion_matches_frozen_log_value() {
    for preset in PRESETS {
        let fx = load(&format!("j4-{preset}"));
        let frozen = fx.fiber.unwrap().to_poly().unwrap();
        assert!(!frozen.is_zero());
        let h = load(&format!("h-{preset}")).jet.unwrap().to_jet().unwrap();
        let g = metric_from_potential(&preset.potential(1, fx.jet_order).unwrap()).unwrap();
        let d = sepvar_core::geometry::DeformedGeometry::new(g, vec![vec![h]]).unwrap();
        let j = solve_f(&d, 4).unwrap().soul();
        assert_matches(&fx.name, &j.homogeneous(4), &frozen);
    }
}

#[test]
fn fixtures_record_their_oracle() {
    for f in oracle_fixtures() {
        let frozen = load(&f.name);
        assert_eq!(frozen.oracle, f.oracle);
        assert_eq!((frozen.preset, frozen.jet_order), (f.preset, f.jet_order));
    }
}
