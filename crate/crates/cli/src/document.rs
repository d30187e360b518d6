//! The result document every command emits.

use std::fmt::Write as _;

use serde::Serialize;

use sepvar_core::algebra::Order;
use sepvar_core::report::Report;
use sepvar_core::serial::{DualFiberDoc, FiberDoc, JetDoc, NuDoc, OpDoc};

use crate::spec::GeometrySpec;

pub const ENGINE: &str = "sepvar";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Engine {
    pub name: &'static str,
    pub version: &'static str,
    pub schema: u32,
}

impl Default for Engine {
    fn default() -> Self {
        Self {
            name: ENGINE,
            version: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA_VERSION,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Orders {
    pub fiber_order: Order,
    pub nu_order: usize,
    pub jet_order: Order,
}

/// Everything the output depends on, echoed back.
#[derive(Clone, Debug, Serialize)]
pub struct Echo {
    pub geometry: GeometrySpec,
    pub orders: Orders,
    pub skip_jacobi: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<JetDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<JetDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub with: Option<JetDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_degree: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Element { value: FiberDoc },
    DeformedElement { value: DualFiberDoc },
    Map { side: String, value: FiberDoc },
    Product { value: NuDoc },
    Operator { hand: String, value: OpDoc },
    Berezin { value: OpDoc },
    Log { value: OpDoc, symbol: FiberDoc },
    SigmaY { sigma_y: FiberDoc, half_j: FiberDoc, residual: FiberDoc },
    Verification,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultDocument {
    pub engine: Engine,
    pub command: String,
    pub input: Echo,
    /// How each payload value was obtained.
    pub provenance: Vec<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    pub payload: Payload,
}

impl ResultDocument {
    pub fn new(command: &str, input: Echo, provenance: &[&str], report: Option<Report>, payload: Payload) -> Self {
        // checks are keyed by name; sorting makes the order independent of scheduling
        let report = report.map(|mut r| {
            r.checks.sort_by(|a, b| a.name.cmp(&b.name));
            r
        });
        Self {
            engine: Engine::default(),
            command: command.to_string(),
            input,
            provenance: provenance.iter().map(|s| s.to_string()).collect(),
            passed: report.as_ref().is_none_or(|r| r.passed),
            report,
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let o = &self.input.orders;
        let _ = writeln!(
            out,
            "{} {} (engine {} {}) N={} R={} M={}",
            self.command,
            if self.passed { "PASS" } else { "FAIL" },
            self.engine.name,
            self.engine.version,
            o.fiber_order,
            o.nu_order,
            o.jet_order
        );
        if let Some(seed) = self.input.seed {
            let _ = writeln!(out, "seed {seed}");
        }
        for p in &self.provenance {
            let _ = writeln!(out, "provenance: {p}");
        }
        let body = match &self.payload {
            Payload::Element { value } => fiber_lines(value),
            Payload::DeformedElement { value } => {
                format!("body:\n{}soul:\n{}", fiber_lines(&value.body), fiber_lines(&value.soul))
            }
            Payload::Map { side, value } => format!("{side}:\n{}", fiber_lines(value)),
            Payload::Product { value } => grade_lines(value.grades.iter().map(|g| jet_text(&g.terms))),
            Payload::Operator { hand, value } => format!("{hand} multiplication:\n{}", op_lines(value)),
            Payload::Berezin { value } => op_lines(value),
            Payload::Log { value, symbol } => format!("{}symbol:\n{}", op_lines(value), fiber_lines(symbol)),
            Payload::SigmaY { sigma_y, half_j, .. } => {
                format!("sigma(Y):\n{}J/2:\n{}", fiber_lines(sigma_y), fiber_lines(half_j))
            }
            Payload::Verification => String::new(),
        };
        out.push_str(&body);
        if let Some(r) = &self.report {
            out.push_str(&r.to_string());
        }
        out
    }
}

fn exps(label: &str, e: &[u16]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &p)| p > 0)
        .map(|(i, &p)| if p == 1 { format!("{label}{}", i + 1) } else { format!("{label}{}^{p}", i + 1) })
        .collect::<Vec<_>>()
        .join(" ")
}

fn jet_text(terms: &[sepvar_core::serial::JetTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|t| {
            let c = if t.im == "0" { t.re.clone() } else { format!("({} + {}i)", t.re, t.im) };
            let m = [exps("z", &t.z), exps("zb", &t.zbar)].join(" ");
            let m = m.trim();
            if m.is_empty() { c } else { format!("{c} {m}") }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn fiber_lines(d: &FiberDoc) -> String {
    if d.terms.is_empty() {
        return "  0\n".into();
    }
    d.terms
        .iter()
        .map(|t| {
            let m = [exps("ζ", &t.zeta), exps("ζ̄", &t.zetabar)].join(" ");
            format!("  [{}] {}\n", m.trim(), jet_text(&t.coeff))
        })
        .collect()
}

fn op_lines(d: &OpDoc) -> String {
    grade_lines(d.grades.iter().map(|g| {
        if g.terms.is_empty() {
            return "0".into();
        }
        g.terms
            .iter()
            .map(|t| {
                let m = [exps("∂z", &t.dz), exps("∂zb", &t.dzbar)].join(" ");
                format!("({}) {}", jet_text(&t.coeff), m.trim())
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }))
}

fn grade_lines(grades: impl Iterator<Item = String>) -> String {
    grades.enumerate().map(|(r, g)| format!("  ν^{r}: {g}\n")).collect()
}
