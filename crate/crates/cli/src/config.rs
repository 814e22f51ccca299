//! Validated run configuration assembled from the command line and the
//! environment.

use std::path::PathBuf;

use normone_core::field::{DEFAULT_PRECISION, MIN_PRECISION};

use crate::args::RunArgs;

pub const PRECISION_ENV: &str = "NORMONE_PRECISION_BITS";

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub field: String,
    pub bounds: Vec<f64>,
    /// None: one unit vector per torus dimension.
    pub characters: Option<Vec<Vec<i64>>>,
    pub s_values: Vec<f64>,
    pub cutoffs: Vec<f64>,
    pub grid: usize,
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub precision: u32,
    pub max_box_points: f64,
    pub box_radius: u32,
    pub tol: f64,
}

fn parse_list<T: std::str::FromStr>(what: &str, s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|_| format!("--{what}: cannot parse {x:?}")))
        .collect()
}

/// `1,2,-1` gives three 1-dimensional characters; `1:0,0:1` gives two
/// 2-dimensional ones.
pub fn parse_characters(s: &str) -> Result<Vec<Vec<i64>>, String> {
    let ks = s
        .split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.split(':')
                .map(|c| c.trim().parse::<i64>().map_err(|_| format!("--k: cannot parse {x:?}")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if ks.is_empty() {
        return Err("--k: no characters given".into());
    }
    if ks.iter().any(|k| k.len() != ks[0].len()) {
        return Err("--k: characters have different dimensions".into());
    }
    Ok(ks)
}

/// Flag first, then the environment, then the default.
pub fn resolve_precision(flag: Option<u32>, env: Option<&str>) -> Result<u32, String> {
    let p = match (flag, env) {
        (Some(p), _) => p,
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| format!("{PRECISION_ENV}: cannot parse {v:?}"))?,
        (None, None) => DEFAULT_PRECISION,
    };
    if p < MIN_PRECISION {
        return Err(format!("precision {p} is below the minimum of {MIN_PRECISION} bits"));
    }
    Ok(p)
}

impl RunConfig {
    pub fn from_args(a: &RunArgs) -> Result<RunConfig, String> {
        let bounds: Vec<f64> = parse_list("bounds", &a.bounds)?;
        if bounds.is_empty() {
            return Err("--bounds: no bounds given".into());
        }
        if bounds.iter().any(|b| !b.is_finite()) {
            return Err("--bounds: bounds must be finite".into());
        }
        if bounds.windows(2).any(|w| !(w[1] > w[0])) {
            return Err("--bounds must be strictly increasing".into());
        }
        let s_values: Vec<f64> = parse_list("s", &a.s)?;
        if s_values.is_empty() {
            return Err("--s: no values given".into());
        }
        let cutoffs: Vec<f64> = parse_list("cutoff", &a.cutoff)?;
        if cutoffs.is_empty() || cutoffs.iter().any(|x| !x.is_finite()) {
            return Err("--cutoff: need finite cutoffs".into());
        }
        if a.grid == 0 {
            return Err("--grid must be positive".into());
        }
        if !(a.tol >= 0.0) {
            return Err("--tol must be nonnegative".into());
        }
        let env = std::env::var(PRECISION_ENV).ok();
        Ok(RunConfig {
            field: a.field.clone(),
            bounds,
            characters: a.k.as_deref().map(parse_characters).transpose()?,
            s_values,
            cutoffs,
            grid: a.grid,
            out: a.out.clone(),
            workers: a.workers,
            precision: resolve_precision(a.precision, env.as_deref())?,
            max_box_points: a.max_box_points,
            box_radius: a.box_radius,
            tol: a.tol,
        })
    }
}
