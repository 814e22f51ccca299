//! Loading a field together with its unit data, from a built-in name or a
//! config file.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use crate::config::FieldConfig;
use crate::error::{Error, Result};
use crate::field::{self, Element, FieldSpec};
use crate::units::UnitSystem;

const CUBIC13: &str = include_str!("../configs/cubic13.toml");
const CUBIC7: &str = include_str!("../configs/cubic7.toml");

/// Where a field comes from: `builtin:<name>` or a path to a config file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSource {
    /// ℚ(√D) for squarefree D ∉ {0, 1}.
    Quadratic(i64),
    /// One of the bundled config documents.
    Bundled(&'static str),
    Path(PathBuf),
}

impl FieldSource {
    /// Accepts `builtin:sqrt2`, `builtin:sqrt-3`, `builtin:5`,
    /// `builtin:cubic13`, `builtin:cubic7`, or a file path.
    pub fn parse(s: &str) -> Result<FieldSource> {
        let Some(name) = s.strip_prefix("builtin:") else {
            return Ok(FieldSource::Path(PathBuf::from(s)));
        };
        match name {
            "cubic13" => return Ok(FieldSource::Bundled("cubic13")),
            "cubic7" => return Ok(FieldSource::Bundled("cubic7")),
            _ => {}
        }
        let digits = name.strip_prefix("sqrt").unwrap_or(name);
        let d: i64 = digits
            .parse()
            .map_err(|_| Error::InvalidInput(format!("unknown built-in field {name:?}")))?;
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::InvalidInput(format!(
                "built-in quadratic fields need squarefree D ∉ {{0, 1}}, got {d}"
            )));
        }
        Ok(FieldSource::Quadratic(d))
    }
}

impl fmt::Display for FieldSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSource::Quadratic(d) => write!(f, "builtin:sqrt{d}"),
            FieldSource::Bundled(name) => write!(f, "builtin:{name}"),
            FieldSource::Path(p) => write!(f, "{}", p.display()),
        }
    }
}

fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// A field with its unit system, when one is available.
#[derive(Debug)]
pub struct FieldData {
    pub source: FieldSource,
    pub field: Arc<FieldSpec>,
    units: Option<UnitSystem>,
}

impl FieldData {
    pub fn load(source: &FieldSource, precision: u32) -> Result<FieldData> {
        match source {
            FieldSource::Quadratic(d) => {
                let field = field::make_quadratic(*d, precision)?;
                let units = if *d > 1 {
                    UnitSystem::for_real_quadratic(&field)?
                } else {
                    let w = match d {
                        -1 => 4,
                        -3 => 6,
                        _ => 2,
                    };
                    UnitSystem::new(&field, Vec::new(), w, 1, false)?
                };
                Ok(FieldData {
                    source: source.clone(),
                    field,
                    units: Some(units),
                })
            }
            FieldSource::Bundled(name) => {
                let text = match *name {
                    "cubic13" => CUBIC13,
                    "cubic7" => CUBIC7,
                    other => return Err(Error::InvalidInput(format!("unknown built-in field {other:?}"))),
                };
                Self::from_config(source, FieldConfig::parse(text)?, precision)
            }
            FieldSource::Path(path) => Self::from_config(source, FieldConfig::from_path(path)?, precision),
        }
    }

    fn from_config(source: &FieldSource, cfg: FieldConfig, precision: u32) -> Result<FieldData> {
        let field = FieldSpec::new(cfg.definition, precision)?;
        let units = match cfg.fundamental_units {
            Some(us) => {
                let elems = us
                    .into_iter()
                    .map(|u| Element::from_big_integers(&field, u))
                    .collect::<Result<Vec<_>>>()?;
                Some(UnitSystem::new(
                    &field,
                    elems,
                    cfg.roots_of_unity,
                    cfg.class_number_hint,
                    true,
                )?)
            }
            None if field.signature().unit_rank() == 0 => Some(UnitSystem::new(
                &field,
                Vec::new(),
                cfg.roots_of_unity,
                cfg.class_number_hint,
                false,
            )?),
            None => None,
        };
        Ok(FieldData {
            source: source.clone(),
            field,
            units,
        })
    }

    pub fn parse_and_load(source: &str, precision: u32) -> Result<FieldData> {
        Self::load(&FieldSource::parse(source)?, precision)
    }

    pub fn units(&self) -> Result<&UnitSystem> {
        self.units.as_ref().ok_or(Error::MissingUnits)
    }

    pub fn has_units(&self) -> bool {
        self.units.is_some()
    }
}
