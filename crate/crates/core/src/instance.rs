//! JSON instances: supports with optional lifts, coefficients, signs and directions.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::family::FamilyKind;
use crate::point::{ExactPoint, Support};
use crate::rational::Rational;
use crate::subdivision::LiftedSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One problem instance. Per-point data (`lifts`, `coefficients`, `signs`)
/// follows the order of the points in `supports`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub dim: usize,
    pub supports: Vec<Vec<ExactPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifts: Option<Vec<Vec<Rational>>>,
    /// Tropical coefficients `a_w`; the induced lift is `-a_w`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<Vec<Rational>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<Vec<Sign>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<Direction>>,
    /// Larger supports `W'_i ⊇ W_i`, for monotonicity probes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superset: Option<Vec<Vec<ExactPoint>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Instance {
    pub fn from_supports(supports: &[Support]) -> Instance {
        Instance {
            dim: supports.first().map_or(0, Support::ambient),
            supports: supports.iter().map(|s| s.points().to_vec()).collect(),
            ..Instance::default()
        }
    }

    pub fn parse(text: &str) -> Result<Instance> {
        let inst: Instance = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn load(path: &Path) -> Result<Instance> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            location: path.display().to_string(),
            message: e.to_string(),
        })?;
        Instance::parse(&text).map_err(|e| match e {
            Error::Parse { location, message } => Error::Parse {
                location: format!("{}: {location}", path.display()),
                message,
            },
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    fn validate(&self) -> Result<()> {
        if self.supports.is_empty() {
            return Err(field_error("supports", "at least one support is required"));
        }
        for (i, s) in self.supports.iter().enumerate() {
            if s.is_empty() {
                return Err(field_error(&format!("supports[{i}]"), "empty support"));
            }
            if let Some(k) = s.iter().position(|p| p.dim() != self.dim) {
                return Err(field_error(
                    &format!("supports[{i}][{k}]"),
                    &format!("point has {} coordinates, expected {}", s[k].dim(), self.dim),
                ));
            }
        }
        if self.lifts.is_some() && self.coefficients.is_some() {
            return Err(field_error("lifts", "give either lifts or coefficients, not both"));
        }
        for (name, lens) in [
            ("lifts", self.lifts.as_ref().map(|l| l.iter().map(Vec::len).collect::<Vec<_>>())),
            ("coefficients", self.coefficients.as_ref().map(|l| l.iter().map(Vec::len).collect())),
            ("signs", self.signs.as_ref().map(|l| l.iter().map(Vec::len).collect())),
        ] {
            let Some(lens) = lens else { continue };
            if lens.len() != self.supports.len() {
                return Err(field_error(name, &format!("{} lists for {} supports", lens.len(), self.supports.len())));
            }
            for (i, (&l, s)) in lens.iter().zip(&self.supports).enumerate() {
                if l != s.len() {
                    return Err(field_error(
                        &format!("{name}[{i}]"),
                        &format!("{l} entries for {} points", s.len()),
                    ));
                }
            }
        }
        if let Some(ds) = &self.deltas {
            if let Some(k) = ds.iter().position(|d| d.dim() != self.dim) {
                return Err(field_error(&format!("deltas[{k}]"), "wrong number of coordinates"));
            }
        }
        if let Some(sup) = &self.superset {
            if sup.len() != self.supports.len() {
                return Err(field_error("superset", "one list per support is required"));
            }
            for (i, (big, small)) in sup.iter().zip(&self.supports).enumerate() {
                if let Some(p) = small.iter().find(|p| !big.contains(p)) {
                    return Err(field_error(&format!("superset[{i}]"), &format!("missing point {p}")));
                }
            }
        }
        self.to_supports().map(|_| ())
    }

    pub fn r(&self) -> usize {
        self.supports.len()
    }

    pub fn to_supports(&self) -> Result<Vec<Support>> {
        self.supports
            .iter()
            .enumerate()
            .map(|(i, pts)| {
                Support::new(i + 1, pts.clone()).map_err(|e| field_error(&format!("supports[{i}]"), &e.to_string()))
            })
            .collect()
    }

    pub fn superset_supports(&self) -> Result<Option<Vec<Support>>> {
        let Some(sup) = &self.superset else { return Ok(None) };
        sup.iter()
            .enumerate()
            .map(|(i, pts)| Support::new(i + 1, pts.clone()))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    /// Explicit lifts, or `-a_w` from coefficients, if either is present.
    pub fn lifted_system(&self) -> Result<Option<LiftedSystem>> {
        let lifts = match (&self.lifts, &self.coefficients) {
            (Some(l), _) => l.clone(),
            (None, Some(c)) => c.iter().map(|row| row.iter().map(|a| -a).collect()).collect(),
            (None, None) => return Ok(None),
        };
        LiftedSystem::new(self.to_supports()?, lifts).map(Some)
    }
}

fn field_error(field: &str, message: &str) -> Error {
    Error::Parse { location: field.to_string(), message: message.to_string() }
}
