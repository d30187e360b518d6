//! TOML geometry files.
//!
//! A file either names a preset or carries exactly one of `potential` (terms of
//! `Φ_{-1}`) and `g_upper` (entries of the inverse metric). `psi`, `higher` and
//! `h_upper` are optional. Coefficients are `"p/q"` strings.

use serde::{Deserialize, Serialize};
use toml::Spanned;

use sepvar_core::algebra::{JetSeries, Order, Scalar};
use sepvar_core::geometry::{metric_from_potential, DeformedGeometry, Geometry, JetMatrix, PotentialData, Preset};
use sepvar_core::serial::{jet_from_terms, jet_terms, JetTerm};
use sepvar_core::{Error, Result};

/// Jet order used when neither the file nor the command line sets one.
pub const DEFAULT_JET_ORDER: Order = 12;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jet_order: Option<Order>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub potential: Vec<JetTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub g_upper: Vec<EntryTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub psi: Vec<JetTerm>,
    /// Terms of `Φ_j`, `j >= 0`, keyed by `grade = j`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub higher: Vec<GradedTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h_upper: Vec<EntryTerm>,
}

/// One monomial of the matrix entry `[l][k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryTerm {
    pub l: usize,
    pub k: usize,
    pub z: Vec<u16>,
    pub zbar: Vec<u16>,
    pub re: String,
    #[serde(default = "zero", skip_serializing_if = "is_zero")]
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedTerm {
    pub grade: usize,
    pub z: Vec<u16>,
    pub zbar: Vec<u16>,
    pub re: String,
    #[serde(default = "zero", skip_serializing_if = "is_zero")]
    pub im: String,
}

fn zero() -> String {
    "0".into()
}

fn is_zero(s: &str) -> bool {
    s == "0"
}

fn term(z: &[u16], zbar: &[u16], re: &str, im: &str) -> JetTerm {
    JetTerm {
        z: z.to_vec(),
        zbar: zbar.to_vec(),
        re: re.to_string(),
        im: im.to_string(),
    }
}

/// The only keys read from a `--psi` file; everything else is ignored.
#[derive(Deserialize)]
struct PsiSection {
    #[serde(default)]
    psi: Vec<JetTerm>,
}

#[derive(Deserialize)]
struct RawTerm {
    re: Spanned<String>,
    im: Option<Spanned<String>>,
}

/// Coefficient strings with their byte spans, for located errors.
#[derive(Deserialize)]
struct RawCoefficients {
    #[serde(default)]
    potential: Vec<RawTerm>,
    #[serde(default)]
    g_upper: Vec<RawTerm>,
    #[serde(default)]
    psi: Vec<RawTerm>,
    #[serde(default)]
    higher: Vec<RawTerm>,
    #[serde(default)]
    h_upper: Vec<RawTerm>,
}

impl RawCoefficients {
    fn check(&self, text: &str) -> Result<()> {
        let fields = [
            ("potential", &self.potential),
            ("g_upper", &self.g_upper),
            ("psi", &self.psi),
            ("higher", &self.higher),
            ("h_upper", &self.h_upper),
        ];
        for (field, terms) in fields {
            for (i, t) in terms.iter().enumerate() {
                for (part, value) in [("re", Some(&t.re)), ("im", t.im.as_ref())] {
                    let Some(value) = value else { continue };
                    if let Err(e) = Scalar::parse_rational(value.get_ref()) {
                        let line = text[..value.span().start].matches('\n').count() + 1;
                        return Err(Error::Parse(format!("line {line}, {field}[{i}].{part}: {}", strip(&e))));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A validated geometry ready for the engine.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub geometry: Geometry,
    pub potential: Option<PotentialData>,
    pub psi: Option<JetSeries>,
    /// Explicit `h^{lk}`; otherwise the deformation comes from `ψ`.
    pub h_upper: Option<JetMatrix>,
}

impl GeometrySpec {
    pub fn preset(name: &str, dimension: usize, jet_order: Option<Order>) -> Self {
        Self {
            preset: Some(name.to_string()),
            dimension,
            jet_order,
            ..Self::default()
        }
    }

    /// Parses a file body; syntax errors and malformed coefficients carry a line.
    pub fn parse(text: &str) -> Result<Self> {
        let spec = toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
        let raw: RawCoefficients = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.check(text)?;
        Ok(spec)
    }

    pub fn render(&self) -> String {
        toml::to_string(self).expect("a geometry spec always renders")
    }

    /// A spec with the potential written out term by term.
    pub fn from_potential(p: &PotentialData) -> Self {
        let order = p.phi_minus1.order();
        let higher = p
            .higher
            .iter()
            .enumerate()
            .flat_map(|(grade, f)| {
                jet_terms(f).into_iter().map(move |t| GradedTerm {
                    grade,
                    z: t.z,
                    zbar: t.zbar,
                    re: t.re,
                    im: t.im,
                })
            })
            .collect();
        Self {
            preset: None,
            dimension: p.dim(),
            jet_order: (order != sepvar_core::algebra::EXACT).then_some(order),
            potential: jet_terms(&p.phi_minus1),
            higher,
            ..Self::default()
        }
    }

    /// Builds the geometry. `jet_order` overrides the file's order when given.
    pub fn load(&self, jet_order: Option<Order>, skip_jacobi: bool) -> Result<Loaded> {
        let dim = self.dimension;
        if dim == 0 {
            return Err(Error::Parse("dimension: must be positive".into()));
        }
        let order = jet_order.or(self.jet_order);
        let sources = [self.preset.is_some(), !self.potential.is_empty(), !self.g_upper.is_empty()];
        if sources.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::Parse(
                "exactly one of preset, potential and g_upper must be given".into(),
            ));
        }

        let higher = self.higher_potential(order)?;
        let potential = if let Some(name) = &self.preset {
            let preset: Preset = name.parse()?;
            Some(preset.potential(dim, order.unwrap_or(DEFAULT_JET_ORDER))?.with_higher(higher))
        } else if !self.potential.is_empty() {
            Some(PotentialData::new(terms("potential", dim, order, &self.potential)?).with_higher(higher))
        } else {
            if !higher.is_empty() {
                return Err(Error::Parse("higher: needs a potential".into()));
            }
            None
        };

        let geometry = match &potential {
            Some(p) => metric_from_potential(p)?,
            None => {
                let g = matrix("g_upper", dim, order, &self.g_upper)?;
                if skip_jacobi {
                    Geometry::new_unchecked(g)?
                } else {
                    Geometry::new(g)?
                }
            }
        };
        let psi = (!self.psi.is_empty())
            .then(|| terms("psi", dim, order, &self.psi))
            .transpose()?;
        let h_upper = (!self.h_upper.is_empty())
            .then(|| matrix("h_upper", dim, order, &self.h_upper))
            .transpose()?;
        let loaded = Loaded {
            geometry,
            potential,
            psi,
            h_upper,
        };
        if !skip_jacobi {
            if let Some(h) = &loaded.h_upper {
                DeformedGeometry::new(loaded.geometry.clone(), h.clone())?;
            }
        }
        Ok(loaded)
    }

    fn higher_potential(&self, order: Option<Order>) -> Result<Vec<JetSeries>> {
        let Some(top) = self.higher.iter().map(|t| t.grade).max() else {
            return Ok(Vec::new());
        };
        let mut out = vec![JetSeries::zero(self.dimension); top + 1];
        for (i, t) in self.higher.iter().enumerate() {
            let jet = one_term(&format!("higher[{i}]"), self.dimension, order, term(&t.z, &t.zbar, &t.re, &t.im))?;
            out[t.grade] = &out[t.grade] + &jet;
        }
        if let Some(o) = order {
            for f in &mut out {
                f.truncate(o);
            }
        }
        Ok(out)
    }
}

impl Loaded {
    pub fn deformation(&self) -> Result<DeformedGeometry> {
        match (&self.h_upper, &self.psi, &self.potential) {
            (Some(h), _, _) => DeformedGeometry::new_unchecked(self.geometry.clone(), h.clone()),
            (None, Some(psi), _) => sepvar_core::geometry::h_from_psi(&self.geometry, psi),
            (None, None, Some(p)) => sepvar_core::geometry::h_from_psi(&self.geometry, &p.phi_minus1),
            (None, None, None) => Ok(DeformedGeometry::trivial(self.geometry.clone())),
        }
    }

    pub fn require_potential(&self) -> Result<&PotentialData> {
        self.potential
            .as_ref()
            .ok_or_else(|| Error::Invalid("this command needs a potential, not only g_upper".into()))
    }
}

/// Reads the `psi` array of a TOML file.
pub fn parse_psi(text: &str, dim: usize, order: Option<Order>) -> Result<JetSeries> {
    let section: PsiSection = toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
    if section.psi.is_empty() {
        return Err(Error::Parse("psi: no terms".into()));
    }
    terms("psi", dim, order, &section.psi)
}

fn one_term(field: &str, dim: usize, order: Option<Order>, t: JetTerm) -> Result<JetSeries> {
    jet_from_terms(dim, order, &[t]).map_err(|e| Error::Parse(format!("{field}: {}", strip(&e))))
}

fn strip(e: &Error) -> String {
    match e {
        Error::Parse(m) => m.clone(),
        other => other.to_string(),
    }
}

fn terms(field: &str, dim: usize, order: Option<Order>, ts: &[JetTerm]) -> Result<JetSeries> {
    let mut out = JetSeries::zero_to(dim, order.unwrap_or(sepvar_core::algebra::EXACT));
    for (i, t) in ts.iter().enumerate() {
        out = &out + &one_term(&format!("{field}[{i}]"), dim, order, t.clone())?;
    }
    Ok(out)
}

fn matrix(field: &str, dim: usize, order: Option<Order>, ts: &[EntryTerm]) -> Result<JetMatrix> {
    let zero = JetSeries::zero_to(dim, order.unwrap_or(sepvar_core::algebra::EXACT));
    let mut m = vec![vec![zero; dim]; dim];
    for (i, t) in ts.iter().enumerate() {
        let at = format!("{field}[{i}]");
        if t.l >= dim || t.k >= dim {
            return Err(Error::Parse(format!("{at}: index ({}, {}) out of range", t.l, t.k)));
        }
        let jet = one_term(&at, dim, order, term(&t.z, &t.zbar, &t.re, &t.im))?;
        m[t.l][t.k] = &m[t.l][t.k] + &jet;
    }
    Ok(m)
}
