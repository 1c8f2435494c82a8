//! Scenario files: the strict JSON input format for the command-line runner.
//!
//! A scenario declares a coefficient field, an ambient variable list, and
//! named polynomials, weighted algebras, arcs and points over that ambient,
//! plus an optional finite-morphism section. Unknown keys are rejected so
//! typos surface as errors rather than silently ignored data.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::arc::Arc;
use crate::error::Error;
use crate::field::{Coeff, Field};
use crate::morphism::{FiniteMorphismSpec, TriangularPresentation};
use crate::poly::{Polynomial, Ring};
use crate::rees::ReesAlgebra;
use crate::series::{TruncatedSeries, MAX_PRECISION};

#[derive(Clone, Copy, Debug)]
pub struct Defaults {
    pub precision: u32,
    pub max_steps: usize,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults { precision: 24, max_steps: 32 }
    }
}

/// A fully resolved scenario: every name checked, every polynomial parsed.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub field: Field,
    pub ring: Ring,
    pub polynomials: BTreeMap<String, Polynomial>,
    pub algebras: BTreeMap<String, ReesAlgebra>,
    pub arcs: BTreeMap<String, Arc>,
    pub points: BTreeMap<String, Vec<Coeff>>,
    pub morphism: Option<MorphismScenario>,
    pub defaults: Defaults,
}

/// The morphism section with its references resolved. The scenario's
/// ambient must equal the source ring (base + tower + extra tower), so the
/// declared arcs and points live on the source.
#[derive(Clone, Debug)]
pub struct MorphismScenario {
    pub spec: FiniteMorphismSpec,
    pub points: Vec<(String, Vec<Coeff>)>,
    pub arcs: Vec<(String, Arc)>,
}

// --- raw serde layer -------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(rename = "char", default)]
    characteristic: u32,
    variables: Vec<String>,
    #[serde(default)]
    polynomials: BTreeMap<String, String>,
    #[serde(default)]
    algebras: BTreeMap<String, Vec<RawGenerator>>,
    #[serde(default)]
    arcs: BTreeMap<String, RawArc>,
    #[serde(default)]
    points: BTreeMap<String, Vec<RawNumber>>,
    #[serde(default)]
    morphism: Option<RawMorphism>,
    #[serde(default)]
    defaults: Option<RawDefaults>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    poly: String,
    weight: u32,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Int(i64),
    // rationals come in as "p/q" strings
    Str(String),
}

#[derive(Deserialize)]
struct RawArc {
    precision: u32,
    // every other key is a variable name mapped to its coefficient list
    #[serde(flatten)]
    series: BTreeMap<String, Vec<RawNumber>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTowerEntry {
    var: String,
    poly: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    base_vars: Vec<String>,
    tower: Vec<RawTowerEntry>,
    #[serde(default)]
    extra_tower: Vec<RawTowerEntry>,
    #[serde(default)]
    extra_relations: Vec<String>,
    rank: u64,
    #[serde(default)]
    points: Vec<String>,
    #[serde(default)]
    arcs: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDefaults {
    precision: Option<u32>,
    max_steps: Option<usize>,
}

// --- resolution ------------------------------------------------------------

fn resolve_number(field: &Field, n: &RawNumber, context: &str) -> Result<Coeff, Error> {
    match n {
        RawNumber::Int(i) => Ok(field.from_i64(*i)),
        RawNumber::Str(s) => field
            .parse(s)
            .map_err(|e| Error::Scenario(format!("{context}: {e}"))),
    }
}

fn resolve_arc(ring: &Ring, name: &str, raw: &RawArc) -> Result<Arc, Error> {
    if raw.precision == 0 || raw.precision > MAX_PRECISION {
        return Err(Error::Scenario(format!(
            "arc `{name}`: precision must be between 1 and {MAX_PRECISION}"
        )));
    }
    for var in raw.series.keys() {
        if ring.var_index(var).is_none() {
            return Err(Error::Scenario(format!(
                "arc `{name}`: `{var}` is not an ambient variable"
            )));
        }
    }
    let field = *ring.field();
    let mut series = Vec::with_capacity(ring.dim());
    for var in ring.vars() {
        let coeffs = raw.series.get(var).ok_or_else(|| {
            Error::Scenario(format!("arc `{name}`: missing component for `{var}`"))
        })?;
        if coeffs.len() > raw.precision as usize {
            return Err(Error::Scenario(format!(
                "arc `{name}`: component `{var}` has {} coefficients but precision {}",
                coeffs.len(),
                raw.precision
            )));
        }
        let resolved = coeffs
            .iter()
            .map(|c| resolve_number(&field, c, &format!("arc `{name}`, component `{var}`")))
            .collect::<Result<Vec<_>, _>>()?;
        series.push(TruncatedSeries::from_coeffs(field, resolved, raw.precision));
    }
    Arc::new(ring.clone(), series)
}

impl Scenario {
    pub fn from_str(text: &str) -> Result<Scenario, Error> {
        Scenario::from_str_with_char(text, None)
    }

    /// Parses with an optional characteristic override (the `--char` flag).
    pub fn from_str_with_char(text: &str, char_override: Option<u32>) -> Result<Scenario, Error> {
        let mut raw: RawScenario = serde_json::from_str(text)?;
        if let Some(c) = char_override {
            raw.characteristic = c;
        }
        Scenario::resolve(raw)
    }

    pub fn from_path(path: &Path) -> Result<Scenario, Error> {
        Scenario::from_path_with_char(path, None)
    }

    pub fn from_path_with_char(path: &Path, char_override: Option<u32>) -> Result<Scenario, Error> {
        let text = std::fs::read_to_string(path)?;
        Scenario::from_str_with_char(&text, char_override)
    }

    fn resolve(raw: RawScenario) -> Result<Scenario, Error> {
        let field = Field::new(raw.characteristic)?;
        let ring = Ring::new(raw.variables.clone(), field)?;

        let mut polynomials = BTreeMap::new();
        for (name, text) in &raw.polynomials {
            let p = Polynomial::parse(&ring, text)
                .map_err(|e| Error::Scenario(format!("polynomial `{name}`: {e}")))?;
            polynomials.insert(name.clone(), p);
        }

        let mut algebras = BTreeMap::new();
        for (name, gens) in &raw.algebras {
            let resolved = gens
                .iter()
                .map(|g| {
                    let p = Polynomial::parse(&ring, &g.poly)
                        .map_err(|e| Error::Scenario(format!("algebra `{name}`: {e}")))?;
                    Ok((p, g.weight))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let alg = ReesAlgebra::new(ring.clone(), resolved)
                .map_err(|e| Error::Scenario(format!("algebra `{name}`: {e}")))?;
            algebras.insert(name.clone(), alg);
        }

        let mut arcs = BTreeMap::new();
        for (name, raw_arc) in &raw.arcs {
            arcs.insert(name.clone(), resolve_arc(&ring, name, raw_arc)?);
        }

        let mut points = BTreeMap::new();
        for (name, coords) in &raw.points {
            if coords.len() != ring.dim() {
                return Err(Error::Scenario(format!(
                    "point `{name}`: expected {} coordinates, got {}",
                    ring.dim(),
                    coords.len()
                )));
            }
            let resolved = coords
                .iter()
                .map(|c| resolve_number(&field, c, &format!("point `{name}`")))
                .collect::<Result<Vec<_>, _>>()?;
            points.insert(name.clone(), resolved);
        }

        let morphism = match &raw.morphism {
            None => None,
            Some(m) => {
                let target = TriangularPresentation::new(
                    field,
                    m.base_vars.clone(),
                    m.tower.iter().map(|t| (t.var.clone(), t.poly.clone())).collect(),
                    vec![],
                )?;
                let source = TriangularPresentation::new(
                    field,
                    m.base_vars.clone(),
                    m.tower
                        .iter()
                        .chain(m.extra_tower.iter())
                        .map(|t| (t.var.clone(), t.poly.clone()))
                        .collect(),
                    m.extra_relations.clone(),
                )?;
                if source.ring() != &ring {
                    return Err(Error::Scenario(format!(
                        "morphism source variables {:?} must match the ambient variable list",
                        source.ring().vars()
                    )));
                }
                let spec = FiniteMorphismSpec::new(target, source, m.rank)?;
                let m_points = m
                    .points
                    .iter()
                    .map(|name| {
                        points
                            .get(name)
                            .cloned()
                            .map(|p| (name.clone(), p))
                            .ok_or_else(|| Error::Scenario(format!("morphism references undeclared point `{name}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let m_arcs = m
                    .arcs
                    .iter()
                    .map(|name| {
                        arcs.get(name)
                            .cloned()
                            .map(|a| (name.clone(), a))
                            .ok_or_else(|| Error::Scenario(format!("morphism references undeclared arc `{name}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(MorphismScenario { spec, points: m_points, arcs: m_arcs })
            }
        };

        let defaults = match &raw.defaults {
            None => Defaults::default(),
            Some(d) => Defaults {
                precision: d.precision.unwrap_or(Defaults::default().precision),
                max_steps: d.max_steps.unwrap_or(Defaults::default().max_steps),
            },
        };

        Ok(Scenario { field, ring, polynomials, algebras, arcs, points, morphism, defaults })
    }
}
