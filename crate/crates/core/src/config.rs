//! Field-config documents (TOML).
//!
//! ```toml
//! name = "simplest cubic, a = 1"
//! degree = 3
//! min_poly = [-1, -4, -1, 1]          # ascending powers of θ, monic
//! integral_basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
//! sigma_on_basis = [[1, 0, 0], [-2, -2, 1], [1, -3, 1]]   # row i = σ(ωᵢ)
//! signature = [3, 0]
//! discriminant = 169
//! fundamental_units = [[0, 1, 0], [1, 1, 0]]
//! class_number_hint = 1
//! roots_of_unity = 2
//! ```
//!
//! Rationals may be written as integers or as strings `"p/q"` or exact
//! decimals `"-0.25"`; large integers may be quoted.

use std::path::Path;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::field::{FieldDefinition, Signature};

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn rational(&self) -> Result<Rational> {
        match self {
            Number::Int(v) => Ok(Rational::from(*v)),
            Number::Text(s) => parse_rational(s),
        }
    }

    fn integer(&self) -> Result<Integer> {
        let q = self.rational()?;
        if *q.denom() != 1 {
            return Err(Error::Schema(format!("expected an integer, found {q}")));
        }
        Ok(q.into_numer_denom().0)
    }
}

/// Parses `n`, `p/q` or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Schema(format!("not an exact rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = Integer::from_str(p.trim()).map_err(|_| bad())?;
        let q = Integer::from_str(q.trim()).map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::from((p, q)));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let whole = if int.is_empty() || int == "-" || int == "+" {
            Integer::new()
        } else {
            Integer::from_str(int).map_err(|_| bad())?
        };
        let digits = Integer::from_str(frac).map_err(|_| bad())?;
        let scale = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
        let mut q = Rational::from((digits, scale));
        if negative {
            q = -q;
        }
        return Ok(q + whole);
    }
    Integer::from_str(s).map(Rational::from).map_err(|_| bad())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    degree: usize,
    min_poly: Vec<Number>,
    integral_basis: Vec<Vec<Number>>,
    sigma_on_basis: Vec<Vec<Number>>,
    signature: [usize; 2],
    discriminant: Number,
    fundamental_units: Option<Vec<Vec<Number>>>,
    class_number_hint: Option<u32>,
    roots_of_unity: Option<u32>,
}

/// A parsed field-config document with exact values.
#[derive(Clone, Debug)]
pub struct FieldConfig {
    pub definition: FieldDefinition,
    pub fundamental_units: Option<Vec<Vec<Integer>>>,
    pub class_number_hint: u32,
    pub roots_of_unity: u32,
}

impl FieldConfig {
    pub fn parse(text: &str) -> Result<FieldConfig> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::Schema(e.message().to_string()))?;
        if raw.min_poly.len() != raw.degree + 1 {
            return Err(Error::Schema(format!(
                "min_poly has {} coefficients, degree {} needs {}",
                raw.min_poly.len(),
                raw.degree,
                raw.degree + 1
            )));
        }
        let ints = |row: &[Number]| row.iter().map(Number::integer).collect::<Result<Vec<_>>>();
        let min_poly = ints(&raw.min_poly)?;
        let integral_basis = raw
            .integral_basis
            .iter()
            .map(|row| row.iter().map(Number::rational).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let sigma_on_basis = raw
            .sigma_on_basis
            .iter()
            .map(|r| ints(r))
            .collect::<Result<Vec<_>>>()?;
        let fundamental_units = raw
            .fundamental_units
            .map(|units| units.iter().map(|u| ints(u)).collect::<Result<Vec<_>>>())
            .transpose()?;
        if let Some(units) = &fundamental_units {
            if let Some(bad) = units.iter().find(|u| u.len() != raw.degree) {
                return Err(Error::Schema(format!(
                    "fundamental unit has {} coordinates, expected {}",
                    bad.len(),
                    raw.degree
                )));
            }
        }
        let class_number_hint = raw.class_number_hint.unwrap_or(1);
        if class_number_hint == 0 {
            return Err(Error::Schema("class_number_hint must be positive".into()));
        }
        let roots_of_unity = raw.roots_of_unity.unwrap_or(2);
        if roots_of_unity < 2 || roots_of_unity % 2 == 1 {
            return Err(Error::Schema(format!(
                "roots_of_unity must be even and ≥ 2, got {roots_of_unity}"
            )));
        }
        Ok(FieldConfig {
            definition: FieldDefinition {
                label: raw.name.unwrap_or_else(|| "config field".into()),
                min_poly,
                integral_basis,
                sigma_on_basis,
                signature: Signature {
                    real: raw.signature[0],
                    complex: raw.signature[1],
                },
                discriminant: Some(raw.discriminant.integer()?),
            },
            fundamental_units,
            class_number_hint,
            roots_of_unity,
        })
    }

    pub fn from_path(path: &Path) -> Result<FieldConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3").unwrap(), 3);
        assert_eq!(parse_rational("-1/2").unwrap(), Rational::from((-1, 2)));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::from((1, 4)));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::from((-3, 2)));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational::from((-1, 2)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn parses_quadratic_with_fractions() {
        let cfg = FieldConfig::parse(
            r#"
            degree = 2
            min_poly = [-5, 0, 1]
            integral_basis = [[1, 0], ["1/2", "1/2"]]
            sigma_on_basis = [[1, 0], [1, -1]]
            signature = [2, 0]
            discriminant = 5
            fundamental_units = [[0, 1]]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.definition.integral_basis[1][0], Rational::from((1, 2)));
        assert_eq!(cfg.class_number_hint, 1);
        assert_eq!(cfg.roots_of_unity, 2);
    }

    #[test]
    fn schema_errors() {
        let missing = FieldConfig::parse("degree = 2\nmin_poly = [-2, 0, 1]");
        assert!(matches!(missing, Err(Error::Schema(_))));
        let wrong_len = FieldConfig::parse(
            r#"
            degree = 3
            min_poly = [-2, 0, 1]
            integral_basis = [[1, 0], [0, 1]]
            sigma_on_basis = [[1, 0], [0, -1]]
            signature = [2, 0]
            discriminant = 8
            "#,
        );
        assert!(matches!(wrong_len, Err(Error::Schema(_))));
        let unknown = FieldConfig::parse(
            r#"
            degree = 2
            min_poly = [-2, 0, 1]
            integral_basis = [[1, 0], [0, 1]]
            sigma_on_basis = [[1, 0], [0, -1]]
            signature = [2, 0]
            discriminant = 8
            colour = "blue"
            "#,
        );
        assert!(matches!(unknown, Err(Error::Schema(_))));
    }
}
