//! Lossless document forms of jets, fiber polynomials and operators.
//!
//! Coefficients travel as `"p/q"` strings; exponents as per-coordinate arrays.
//! A missing `jet_order` means exact.

use serde::{Deserialize, Serialize};

use crate::algebra::{DiffOp, Dual, FiberPoly, JetSeries, Multi, NuSeries, OpGrade, Order, Scalar, EXACT};
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::Zero;

fn zero_string() -> String {
    "0".into()
}

fn is_zero_string(s: &str) -> bool {
    s == "0"
}

fn finite(o: Order) -> Option<Order> {
    (o != EXACT).then_some(o)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetTerm {
    pub z: Vec<u16>,
    pub zbar: Vec<u16>,
    pub re: String,
    #[serde(default = "zero_string", skip_serializing_if = "is_zero_string")]
    pub im: String,
}

impl JetTerm {
    fn from_pair(m: &Multi, c: &Scalar) -> Self {
        Self {
            z: m.holo().to_vec(),
            zbar: m.anti().to_vec(),
            re: Scalar::format_rational(c.re()),
            im: Scalar::format_rational(c.im()),
        }
    }

    fn to_pair(&self, dim: usize) -> Result<(Multi, Scalar)> {
        if self.z.len() != dim || self.zbar.len() != dim {
            return Err(Error::Parse(format!(
                "term exponents {:?}/{:?} do not match dimension {dim}",
                self.z, self.zbar
            )));
        }
        let re: BigRational = Scalar::parse_rational(&self.re)?;
        let im: BigRational = if self.im.trim().is_empty() {
            BigRational::zero()
        } else {
            Scalar::parse_rational(&self.im)?
        };
        Ok((Multi::from_parts(&self.z, &self.zbar), Scalar::new(re, im)))
    }
}

pub fn jet_terms(f: &JetSeries) -> Vec<JetTerm> {
    f.terms().map(|(m, c)| JetTerm::from_pair(m, c)).collect()
}

/// Builds a jet from document terms; `order = None` means exact.
pub fn jet_from_terms(dim: usize, order: Option<Order>, terms: &[JetTerm]) -> Result<JetSeries> {
    let order = order.unwrap_or(EXACT);
    let pairs = terms.iter().map(|t| t.to_pair(dim)).collect::<Result<Vec<_>>>()?;
    if let Some((m, _)) = pairs.iter().find(|(m, _)| m.degree() as Order > order) {
        return Err(Error::Parse(format!(
            "term of degree {} exceeds declared jet order {order}",
            m.degree()
        )));
    }
    Ok(JetSeries::from_terms(dim, order, pairs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jet_order: Option<Order>,
    pub terms: Vec<JetTerm>,
}

impl JetDoc {
    pub fn of(f: &JetSeries) -> Self {
        Self {
            dim: f.dim(),
            jet_order: finite(f.order()),
            terms: jet_terms(f),
        }
    }

    pub fn to_jet(&self) -> Result<JetSeries> {
        jet_from_terms(self.dim, self.jet_order, &self.terms)
    }
}

/// Grade `r` of `grades` is the coefficient of `ν^r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuDoc {
    pub dim: usize,
    pub nu_order: usize,
    pub grades: Vec<JetDoc>,
}

impl NuDoc {
    pub fn of(s: &NuSeries) -> Self {
        Self {
            dim: s.dim(),
            nu_order: s.nu_order(),
            grades: s.grades().iter().map(JetDoc::of).collect(),
        }
    }

    pub fn to_series(&self) -> Result<NuSeries> {
        if self.grades.len() != self.nu_order + 1 {
            return Err(Error::Parse("grade count does not match nu_order".into()));
        }
        let grades = self.grades.iter().map(JetDoc::to_jet).collect::<Result<Vec<_>>>()?;
        Ok(NuSeries::from_grades(self.dim, grades))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberTerm {
    pub zeta: Vec<u16>,
    pub zetabar: Vec<u16>,
    pub coeff: Vec<JetTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDoc {
    pub dim: usize,
    pub fiber_order: Order,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jet_order: Option<Order>,
    pub terms: Vec<FiberTerm>,
}

impl FiberDoc {
    pub fn of(p: &FiberPoly) -> Self {
        Self {
            dim: p.dim(),
            fiber_order: p.fiber_order(),
            jet_order: finite(p.jet_order()),
            terms: p
                .terms()
                .map(|(m, c)| FiberTerm {
                    zeta: m.holo().to_vec(),
                    zetabar: m.anti().to_vec(),
                    coeff: jet_terms(c),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<FiberPoly> {
        let jet_order = self.jet_order.unwrap_or(EXACT);
        let mut p = FiberPoly::zero(self.dim, self.fiber_order, jet_order);
        for t in &self.terms {
            if t.zeta.len() != self.dim || t.zetabar.len() != self.dim {
                return Err(Error::Parse("fiber exponents do not match dimension".into()));
            }
            let m = Multi::from_parts(&t.zeta, &t.zetabar);
            if m.degree() as Order > self.fiber_order {
                return Err(Error::Parse(format!(
                    "fiber degree {} exceeds declared fiber order {}",
                    m.degree(),
                    self.fiber_order
                )));
            }
            p.add_term(m, jet_from_terms(self.dim, self.jet_order, &t.coeff)?);
        }
        Ok(p)
    }
}

/// A dual-number fiber polynomial as its two real parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualFiberDoc {
    pub body: FiberDoc,
    pub soul: FiberDoc,
}

impl DualFiberDoc {
    pub fn of(p: &FiberPoly<Dual>) -> Self {
        Self {
            body: FiberDoc::of(&p.body()),
            soul: FiberDoc::of(&p.soul()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTerm {
    pub dz: Vec<u16>,
    pub dzbar: Vec<u16>,
    pub coeff: Vec<JetTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeDoc {
    pub grade: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jet_order: Option<Order>,
    pub terms: Vec<OpTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpDoc {
    pub dim: usize,
    pub nu_order: usize,
    pub grades: Vec<GradeDoc>,
}

impl OpDoc {
    pub fn of(op: &DiffOp) -> Self {
        Self {
            dim: op.dim(),
            nu_order: op.nu_order(),
            grades: op
                .grades()
                .iter()
                .enumerate()
                .map(|(r, g)| GradeDoc {
                    grade: r,
                    jet_order: finite(g.order()),
                    terms: g
                        .terms()
                        .map(|(m, c)| OpTerm {
                            dz: m.holo().to_vec(),
                            dzbar: m.anti().to_vec(),
                            coeff: jet_terms(c),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_op(&self) -> Result<DiffOp> {
        if self.grades.len() != self.nu_order + 1 {
            return Err(Error::Parse("grade count does not match nu_order".into()));
        }
        let grades = self
            .grades
            .iter()
            .map(|g| {
                let mut out = OpGrade::zero_to(self.dim, g.jet_order.unwrap_or(EXACT));
                for t in &g.terms {
                    let m = Multi::from_parts(&t.dz, &t.dzbar);
                    out.add_term(m, jet_from_terms(self.dim, g.jet_order, &t.coeff)?);
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DiffOp::from_grades(self.dim, grades))
    }
}
