//! Characters of the torus, Weyl sums, star discrepancy and the linear
//! counting fit.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::{csv_writer, float};
use crate::hilbert90::EnumerationReport;

/// The character t ↦ exp(2πi k·t), with k in the dual of the lattice
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Character {
    pub k: Vec<i64>,
}

impl Character {
    pub fn new(k: Vec<i64>) -> Character {
        Character { k }
    }

    pub fn trivial(dim: usize) -> Character {
        Character { k: vec![0; dim] }
    }

    pub fn is_trivial(&self) -> bool {
        self.k.iter().all(|&x| x == 0)
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }
}

/// exp(2πi k·t). The phase is reduced mod 1 before the exponential, so
/// t and t + 1 give identical values.
pub fn character_eval(k: &Character, t: &[f64]) -> Result<Complex64> {
    if k.dim() != t.len() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: t.len(),
        });
    }
    if k.is_trivial() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let phase = k
        .k
        .iter()
        .zip(t)
        .map(|(&ki, &ti)| (ki as f64 * ti.rem_euclid(1.0)).rem_euclid(1.0))
        .sum::<f64>()
        .rem_euclid(1.0);
    Ok(Complex64::from_polar(1.0, TAU * phase))
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub r: f64,
    pub k: Vec<i64>,
    pub s: Complex64,
    /// |S| / count (0 for an empty report).
    pub normalized: f64,
    pub count: usize,
    pub error: f64,
}

/// S = Σ χ_k(t) over the classes of a report, in report order.
pub fn weyl_sum(report: &EnumerationReport, k: &Character) -> Result<WeylReport> {
    if k.dim() != report.torus_dim {
        return Err(Error::DimensionMismatch {
            expected: report.torus_dim,
            got: k.dim(),
        });
    }
    let count = report.count();
    let k1: f64 = k.k.iter().map(|x| x.unsigned_abs() as f64).sum();
    let mut s = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    if k.is_trivial() {
        s.re = count as f64;
    } else {
        for c in &report.classes {
            s += character_eval(k, &c.torus_point.coords)?;
            error += TAU * k1 * c.torus_point.error + 4.0 * f64::EPSILON * (1.0 + k1);
        }
        error += count as f64 * f64::EPSILON;
    }
    Ok(WeylReport {
        r: report.bound,
        k: k.k.clone(),
        s,
        normalized: if count == 0 { 0.0 } else { s.norm() / count as f64 },
        count,
        error,
    })
}

/// CSV with columns `r, k_1..k_m, re_S, im_S, norm_mag, count`.
pub fn write_weyl_csv<W: Write>(reports: &[WeylReport], w: W) -> Result<()> {
    let mut out = csv_writer(w);
    let dim = reports.first().map_or(0, |r| r.k.len());
    let mut header = vec!["r".to_string()];
    header.extend((1..=dim).map(|i| format!("k_{i}")));
    header.extend(["re_S", "im_S", "norm_mag", "count"].map(String::from));
    out.write_record(&header)?;
    for r in reports {
        let mut row = vec![float(r.r)];
        row.extend(r.k.iter().map(|x| x.to_string()));
        row.push(float(r.s.re));
        row.push(float(r.s.im));
        row.push(float(r.normalized));
        row.push(r.count.to_string());
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub value: f64,
    /// True for the exact one-dimensional formula; false for the grid
    /// approximation, whose corner resolution is `1/grid`.
    pub exact: bool,
    pub grid: usize,
}

/// Star discrepancy of a point set in [0,1)^dim.
pub fn star_discrepancy_of_points(points: &[&[f64]], dim: usize, grid: usize) -> Result<Discrepancy> {
    if points.is_empty() {
        return Err(Error::EmptyReport);
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: p.len(),
        });
    }
    let n = points.len() as f64;
    match dim {
        0 => Ok(Discrepancy {
            value: 0.0,
            exact: true,
            grid,
        }),
        1 => {
            let mut xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
            xs.sort_by(f64::total_cmp);
            let value = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let i = i as f64;
                    ((i + 1.0) / n - x).max(x - i / n)
                })
                .fold(0.0, f64::max);
            Ok(Discrepancy {
                value,
                exact: true,
                grid,
            })
        }
        _ => grid_discrepancy(points, dim, grid),
    }
}

/// max over grid corners c of |#{p < c}/n − vol[0, c)|, with counts from
/// a prefix-summed histogram.
fn grid_discrepancy(points: &[&[f64]], dim: usize, grid: usize) -> Result<Discrepancy> {
    if grid == 0 {
        return Err(Error::InvalidInput("grid must be positive".into()));
    }
    let cells = (grid as f64).powi(dim as i32);
    if cells > 1e8 {
        return Err(Error::InvalidInput(format!(
            "grid^{dim} = {cells:e} cells is too large"
        )));
    }
    let side = grid + 1;
    let total = side.pow(dim as u32);
    let mut hist = vec![0u64; total];
    let stride: Vec<usize> = (0..dim).map(|j| side.pow(j as u32)).collect();
    for p in points {
        // a point in cell i is counted in every box with corner index > i
        let idx: usize = p
            .iter()
            .zip(&stride)
            .map(|(&x, s)| (((x * grid as f64).floor() as usize).min(grid - 1) + 1) * s)
            .sum();
        hist[idx] += 1;
    }
    for &s in &stride {
        for i in 0..total {
            if (i / s) % side > 0 {
                hist[i] += hist[i - s];
            }
        }
    }
    let n = points.len() as f64;
    let mut value = 0.0f64;
    for (i, &count) in hist.iter().enumerate() {
        let vol: f64 = stride
            .iter()
            .map(|s| ((i / s) % side) as f64 / grid as f64)
            .product();
        value = value.max((count as f64 / n - vol).abs());
    }
    Ok(Discrepancy {
        value,
        exact: false,
        grid,
    })
}

pub fn star_discrepancy(report: &EnumerationReport, grid: usize) -> Result<Discrepancy> {
    star_discrepancy_of_points(&report.points(), report.torus_dim, grid)
}

#[derive(Clone, Debug, Serialize)]
pub struct CountingFit {
    /// Least-squares slope of count against r through the origin.
    pub c_hat: f64,
    pub residuals: Vec<f64>,
    /// Fitted exponent of a free power law, for comparison with 1.
    pub exponent: f64,
}

/// Fits count ≈ C·r over (r, count) pairs with strictly increasing r.
pub fn counting_fit(data: &[(f64, usize)]) -> Result<CountingFit> {
    if data.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "counting fit needs at least 3 bounds, got {}",
            data.len()
        )));
    }
    if data.windows(2).any(|w| !(w[1].0 > w[0].0)) || data[0].0 <= 0.0 {
        return Err(Error::InsufficientData(
            "bounds must be positive and strictly increasing".into(),
        ));
    }
    let srr: f64 = data.iter().map(|(r, _)| r * r).sum();
    let src: f64 = data.iter().map(|(r, c)| r * *c as f64).sum();
    let c_hat = src / srr;
    let residuals = data.iter().map(|(r, c)| *c as f64 - c_hat * r).collect();
    let logs: Vec<(f64, f64)> = data
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|(r, c)| (r.ln(), (*c as f64).ln()))
        .collect();
    let exponent = if logs.len() >= 2 {
        let m = logs.len() as f64;
        let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
        let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        sxy / sxx
    } else {
        f64::NAN
    };
    Ok(CountingFit {
        c_hat,
        residuals,
        exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn character_examples() {
        let one = Complex64::new(1.0, 0.0);
        let minus_one = Complex64::new(-1.0, 0.0);
        assert_eq!(character_eval(&Character::new(vec![0]), &[0.37]).unwrap(), one);
        assert!(close(character_eval(&Character::new(vec![1]), &[0.5]).unwrap(), minus_one));
        assert!(close(character_eval(&Character::new(vec![2]), &[0.25]).unwrap(), minus_one));
        assert!(matches!(
            character_eval(&Character::new(vec![1, 0]), &[0.5]),
            Err(Error::DimensionMismatch { .. })
        ));
        let k = Character::new(vec![3, -2]);
        let a = character_eval(&k, &[0.1, 0.7]).unwrap();
        let b = character_eval(&k, &[1.1, -0.3]).unwrap();
        assert!(close(a, b));
        assert!((a.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn discrepancy_examples() {
        let d = |xs: &[f64]| {
            let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
            let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
            star_discrepancy_of_points(&refs, 1, 16).unwrap().value
        };
        assert_eq!(d(&[0.5]), 0.5);
        assert_eq!(d(&[0.25, 0.75]), 0.25);
        assert_eq!(d(&[0.0, 0.5]), 0.5);
        for n in 1..=64usize {
            let xs: Vec<f64> = (1..=n).map(|j| (2 * j - 1) as f64 / (2 * n) as f64).collect();
            assert!((d(&xs) - 1.0 / (2 * n) as f64).abs() < 1e-14, "n = {n}");
        }
        assert!(matches!(
            star_discrepancy_of_points(&[], 1, 16),
            Err(Error::EmptyReport)
        ));
    }

    /// Direct evaluation over all grid corners, for comparison.
    fn naive_grid(points: &[Vec<f64>], grid: usize) -> f64 {
        let n = points.len() as f64;
        let mut best = 0.0f64;
        for a in 0..=grid {
            for b in 0..=grid {
                let (x, y) = (a as f64 / grid as f64, b as f64 / grid as f64);
                let inside = points
                    .iter()
                    .filter(|p| {
                        ((p[0] * grid as f64).floor() as usize) < a && ((p[1] * grid as f64).floor() as usize) < b
                    })
                    .count() as f64;
                best = best.max((inside / n - x * y).abs());
            }
        }
        best
    }

    #[test]
    fn grid_discrepancy_matches_naive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Vec<f64>> = (0..200).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect();
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        for grid in [1usize, 4, 16, 33] {
            let got = star_discrepancy_of_points(&refs, 2, grid).unwrap();
            assert!(!got.exact);
            assert!((got.value - naive_grid(&pts, grid)).abs() < 1e-12);
        }
    }

    #[test]
    fn counting_fit_examples() {
        let f = counting_fit(&[(1e3, 379), (1e4, 3790), (1e5, 37900)]).unwrap();
        assert!((f.c_hat - 0.379).abs() < 1e-12);
        assert!(f.residuals.iter().all(|r| r.abs() < 1e-9));
        assert!((f.exponent - 1.0).abs() < 1e-12);
        assert!(matches!(counting_fit(&[(1e3, 379)]), Err(Error::InsufficientData(_))));
        assert!(counting_fit(&[(1e3, 1), (1e3, 2), (1e4, 3)]).is_err());
    }
}
