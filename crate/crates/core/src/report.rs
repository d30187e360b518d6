//! Pass/fail records for residual checks.
//!
//! A residual check passes only when the residual is exactly zero and the orders
//! through which it was compared are non-negative: an empty comparison is a failure.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Coeff, FiberPoly, JetSeries, NuSeries, OpGrade, Order, EXACT};
use crate::error::Error;

fn finite(o: Order) -> Option<Order> {
    (o != EXACT).then_some(o)
}

/// One named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Fiber degree through which the residual is known; `None` when not applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_order: Option<Order>,
    /// Jet order through which the residual is known; `None` when exact.
    pub jet_order: Option<Order>,
    pub residual_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn from_fiber<C: Coeff>(name: impl Into<String>, residual: &FiberPoly<C>) -> Self {
        let ok_orders = residual.fiber_order() >= 0 && residual.jet_order() >= 0;
        Self {
            name: name.into(),
            passed: residual.is_zero() && ok_orders,
            fiber_order: Some(residual.fiber_order()),
            jet_order: finite(residual.jet_order()),
            residual_terms: residual.count_terms(),
            detail: (!ok_orders).then(|| "nothing left to compare after truncation".into()),
        }
    }

    pub fn from_jet<C: Coeff>(name: impl Into<String>, residual: &JetSeries<C>) -> Self {
        let ok_orders = residual.order() >= 0;
        Self {
            name: name.into(),
            passed: residual.is_zero() && ok_orders,
            fiber_order: None,
            jet_order: finite(residual.order()),
            residual_terms: residual.len(),
            detail: (!ok_orders).then(|| "nothing left to compare after truncation".into()),
        }
    }

    /// Residual operator grade; every coefficient must vanish.
    pub fn from_grade<C: Coeff>(name: impl Into<String>, residual: &OpGrade<C>) -> Self {
        let ok_orders = residual.order() >= 0;
        Self {
            name: name.into(),
            passed: residual.is_zero() && ok_orders,
            fiber_order: None,
            jet_order: finite(residual.order()),
            residual_terms: residual.terms().map(|(_, c)| c.len()).sum(),
            detail: (!ok_orders).then(|| "nothing left to compare after truncation".into()),
        }
    }

    /// Residual `ν`-series; every grade must vanish.
    pub fn from_nu<C: Coeff>(name: impl Into<String>, residual: &NuSeries<C>) -> Self {
        let order = residual.jet_order();
        let ok_orders = order >= 0;
        Self {
            name: name.into(),
            passed: residual.is_zero() && ok_orders,
            fiber_order: None,
            jet_order: finite(order),
            residual_terms: residual.grades().iter().map(JetSeries::len).sum(),
            detail: (!ok_orders).then(|| "nothing left to compare after truncation".into()),
        }
    }

    /// A check whose computation itself failed.
    pub fn from_error(name: impl Into<String>, err: &Error) -> Self {
        Self::flag(name, false, Some(format!("{}: {err}", err.code())))
    }

    pub fn flag(name: impl Into<String>, passed: bool, detail: Option<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            fiber_order: None,
            jet_order: None,
            residual_terms: 0,
            detail,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.passed { "PASS" } else { "FAIL" }, self.name)?;
        if let Some(o) = self.fiber_order {
            write!(f, " fiber<={o}")?;
        }
        if let Some(o) = self.jet_order {
            write!(f, " jet<={o}")?;
        }
        if !self.passed && self.residual_terms > 0 {
            write!(f, " residual_terms={}", self.residual_terms)?;
        }
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

/// An ordered collection of checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    /// Appends another report's checks under `prefix/`.
    pub fn absorb(&mut self, other: Report) {
        for c in other.checks {
            let name = format!("{}/{}", other.name, c.name);
            self.push(c.renamed(name));
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl Extend<Check> for Report {
    fn extend<I: IntoIterator<Item = Check>>(&mut self, iter: I) {
        for c in iter {
            self.push(c);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.name, if self.passed { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}
