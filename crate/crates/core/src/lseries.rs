//! Truncated L(χ; s) over visible classes, the principal-ideal sum Ξ₁,
//! ζ(ds), the rewriting identity L = Ξ₁/ζ(ds), and the predicted counting
//! constant.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::{csv_writer, float};
use crate::hilbert90::EnumerationReport;
use crate::torus::{character_eval, Character};
use crate::units::UnitSystem;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZetaValue {
    pub value: f64,
    pub error: f64,
}

/// B₂, B₄, …, B₂₀.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Riemann ζ(s) for real s > 1 by Euler–Maclaurin summation from N = 20
/// with eight correction terms; the error bound is twice the first
/// omitted term plus rounding.
pub fn zeta(s: f64) -> Result<ZetaValue> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::InvalidInput(format!("zeta needs real s > 1, got {s}")));
    }
    const N: f64 = 20.0;
    const TERMS: usize = 8;
    let mut sum: f64 = (1..N as u32).rev().map(|n| (n as f64).powf(-s)).sum();
    sum += N.powf(1.0 - s) / (s - 1.0) + 0.5 * N.powf(-s);
    // term_k = B_{2k}/(2k)! · s(s+1)⋯(s+2k−2) · N^{−s−2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut power = N.powf(-s - 1.0);
    let mut next = 0.0;
    for (k, b) in BERNOULLI.iter().enumerate().take(TERMS + 1) {
        if k > 0 {
            rising *= (s + 2.0 * k as f64 - 1.0) * (s + 2.0 * k as f64);
            fact *= (2.0 * k as f64 + 1.0) * (2.0 * k as f64 + 2.0);
            power /= N * N;
        }
        let term = b / fact * rising * power;
        if k < TERMS {
            sum += term;
        } else {
            next = term.abs();
        }
    }
    Ok(ZetaValue {
        value: sum,
        error: 2.0 * next + 64.0 * f64::EPSILON * sum,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncatedSeries {
    pub s: f64,
    pub cutoff: f64,
    pub value: Complex64,
    /// Heuristic tail estimate Ĉ·X^(1−s)·s/(s−1) from the observed count
    /// growth; not a rigorous bound.
    pub tail: f64,
    pub terms: usize,
}

fn check_args(report: &EnumerationReport, k: &Character, s: f64, x: f64) -> Result<()> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::InvalidInput(format!("s must exceed 1, got {s}")));
    }
    if k.dim() != report.torus_dim {
        return Err(Error::DimensionMismatch {
            expected: report.torus_dim,
            got: k.dim(),
        });
    }
    if x >= 1.0 && !(report.bound > x.floor()) {
        return Err(Error::InvalidInput(format!(
            "cutoff {x} needs an enumeration with bound > {}, report has {}",
            x.floor(),
            report.bound
        )));
    }
    Ok(())
}

fn heuristic_tail(terms: usize, s: f64, x: f64) -> f64 {
    if x < 1.0 {
        return 0.0;
    }
    let c_hat = terms as f64 / x;
    c_hat * x.powf(1.0 - s) * s / (s - 1.0)
}

/// Σ over classes with h ≤ X of χ_k(t)/h^s.
pub fn l_truncated(report: &EnumerationReport, k: &Character, s: f64, x: f64) -> Result<TruncatedSeries> {
    check_args(report, k, s, x)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut terms = 0;
    for c in report.classes.iter().filter(|c| c.h as f64 <= x) {
        value += character_eval(k, &c.torus_point.coords)? * (c.h as f64).powf(-s);
        terms += 1;
    }
    Ok(TruncatedSeries {
        s,
        cutoff: x,
        value,
        tail: heuristic_tail(terms, s, x),
        terms,
    })
}

/// Σ over pairs (n ≥ 1, class) with n^d·h ≤ X of χ_k(t)/(n^d·h)^s, i.e.
/// the principal ideals (nα) of norm ≤ X.
pub fn xi1_truncated(report: &EnumerationReport, k: &Character, s: f64, x: f64) -> Result<TruncatedSeries> {
    check_args(report, k, s, x)?;
    let d = report.degree as i32;
    let mut value = Complex64::new(0.0, 0.0);
    let mut terms = 0;
    for c in report.classes.iter().filter(|c| c.h as f64 <= x) {
        let chi = character_eval(k, &c.torus_point.coords)?;
        let h = c.h as f64;
        let mut n = 1u64;
        loop {
            let norm = (n as f64).powi(d) * h;
            if norm > x {
                break;
            }
            value += chi * norm.powf(-s);
            terms += 1;
            n += 1;
        }
    }
    Ok(TruncatedSeries {
        s,
        cutoff: x,
        value,
        tail: heuristic_tail(terms, s, x),
        terms,
    })
}

/// Which normalization of the identity the measured ratio supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// L = Ξ₁/ζ(ds).
    Zeta,
    /// L = Ξ₁/(2ζ(ds)).
    TwoZeta,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub k: Vec<i64>,
    pub s: f64,
    pub cutoff: f64,
    pub l: TruncatedSeries,
    pub xi1: TruncatedSeries,
    pub zeta_ds: ZetaValue,
    /// Ξ₁/(ζ(ds)·L).
    pub ratio: Complex64,
    /// Ξ₁/(2ζ(ds)·L).
    pub ratio2: Complex64,
    pub residual: f64,
    pub residual2: f64,
    pub verdict: Normalization,
    /// Set when X < 1000, where the truncated sums are too short to
    /// discriminate.
    pub insufficient_cutoff: bool,
}

pub const MIN_IDENTITY_CUTOFF: f64 = 1e3;

/// Compares truncated Ξ₁ with ζ(ds)·L and with 2ζ(ds)·L.
pub fn identity_check(report: &EnumerationReport, k: &Character, s: f64, x: f64) -> Result<IdentityCheck> {
    let l = l_truncated(report, k, s, x)?;
    let xi1 = xi1_truncated(report, k, s, x)?;
    if l.value.norm() == 0.0 {
        return Err(Error::InsufficientData(format!(
            "truncated L vanishes at cutoff {x}"
        )));
    }
    let zeta_ds = zeta(report.degree as f64 * s)?;
    let ratio = xi1.value / (l.value * zeta_ds.value);
    let ratio2 = ratio / 2.0;
    let residual = (ratio - 1.0).norm();
    let residual2 = (ratio2 - 1.0).norm();
    Ok(IdentityCheck {
        k: k.k.clone(),
        s,
        cutoff: x,
        l,
        xi1,
        zeta_ds,
        ratio,
        ratio2,
        residual,
        residual2,
        verdict: if residual <= residual2 {
            Normalization::Zeta
        } else {
            Normalization::TwoZeta
        },
        insufficient_cutoff: x < MIN_IDENTITY_CUTOFF,
    })
}

/// CSV with columns `k_1..k_m, s, X, re_value, im_value, tail, ratio`; one
/// row per check, carrying the truncated L value and Re Ξ₁/(ζ(ds)L).
pub fn write_lcheck_csv<W: Write>(checks: &[IdentityCheck], w: W) -> Result<()> {
    let mut out = csv_writer(w);
    let dim = checks.first().map_or(0, |c| c.k.len());
    let mut header: Vec<String> = (1..=dim).map(|i| format!("k_{i}")).collect();
    header.extend(["s", "X", "re_value", "im_value", "tail", "ratio"].map(String::from));
    out.write_record(&header)?;
    for c in checks {
        let mut row: Vec<String> = c.k.iter().map(|x| x.to_string()).collect();
        row.push(float(c.s));
        row.push(float(c.cutoff));
        row.push(float(c.l.value.re));
        row.push(float(c.l.value.im));
        row.push(float(c.l.tail));
        row.push(float(c.ratio.re));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct ResiduePrediction {
    /// Residue of the Dedekind zeta function at s = 1.
    pub kappa: f64,
    /// Predicted lim count(r)/r = κ/(h·ζ(d)).
    pub c: f64,
    pub regulator: f64,
    pub class_number_hint: u32,
    pub roots_of_unity: u32,
    /// Conditions the value depends on.
    pub conditional_on: Vec<String>,
}

/// C = 2^{r₁}(2π)^{r₂}·Reg/(w·√|D|·ζ(d)).
pub fn residue_prediction(units: &UnitSystem) -> Result<ResiduePrediction> {
    let field = units.field();
    let sig = field.signature();
    let reg = units.regulator();
    let h = units.class_number_hint();
    let w = units.roots_of_unity();
    let disc = field.discriminant().to_f64().abs();
    let d = field.degree() as f64;
    let kappa = 2f64.powi(sig.real as i32) * (2.0 * PI).powi(sig.complex as i32) * h as f64 * reg
        / (w as f64 * disc.sqrt());
    let zeta_d = if field.degree() == 1 {
        return Err(Error::InvalidInput("degree-1 field has no residue prediction".into()));
    } else {
        zeta(d)?.value
    };
    let mut conditional_on = vec![format!("class number {h}")];
    if units.fundamentality_trusted() {
        conditional_on.push("fundamentality of the configured units".into());
    }
    Ok(ResiduePrediction {
        kappa,
        c: kappa / (h as f64 * zeta_d),
        regulator: reg,
        class_number_hint: h,
        roots_of_unity: w,
        conditional_on,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_real_quadratic;
    use crate::hilbert90::{enumerate_visible, EnumerateOptions};

    /// Direct partial sums with an integral tail, at a cutoff where the
    /// remainder is below 1e-13.
    fn zeta_direct(s: f64) -> f64 {
        let n = 200_000u64;
        let partial: f64 = (1..n).rev().map(|k| (k as f64).powf(-s)).sum();
        partial + (n as f64).powf(1.0 - s) / (s - 1.0) + 0.5 * (n as f64).powf(-s)
            + s / 12.0 * (n as f64).powf(-s - 1.0)
    }

    #[test]
    fn zeta_values() {
        let z2 = zeta(2.0).unwrap();
        assert!((z2.value - PI * PI / 6.0).abs() < 1e-14);
        assert!(z2.error < 1e-12);
        assert!((zeta(4.0).unwrap().value - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(6.0).unwrap().value - PI.powi(6) / 945.0).abs() < 1e-14);
        assert!((zeta(3.0).unwrap().value - 1.202_056_903_159_594_3).abs() < 1e-14);
        for s in [1.1, 1.5, 2.5, 3.7, 8.0, 20.0] {
            let z = zeta(s).unwrap();
            assert!(z.error < 1e-12);
            assert!((z.value - zeta_direct(s)).abs() < 1e-11, "s = {s}");
        }
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
    }

    fn sqrt2_report(r: f64) -> (UnitSystem, EnumerationReport) {
        let us = UnitSystem::for_real_quadratic(&make_real_quadratic(2, 192).unwrap()).unwrap();
        let rep = enumerate_visible(&us, r, &EnumerateOptions::default()).unwrap();
        (us, rep)
    }

    #[test]
    fn truncated_examples() {
        let (_, rep) = sqrt2_report(10.0);
        let k0 = Character::trivial(1);
        let k1 = Character::new(vec![1]);
        let l = l_truncated(&rep, &k0, 2.0, 2.0).unwrap();
        assert!((l.value.re - 1.25).abs() < 1e-15);
        let l = l_truncated(&rep, &k1, 2.0, 2.0).unwrap();
        assert!((l.value - Complex64::new(1.25, 0.0)).norm() < 1e-15);
        assert_eq!(l_truncated(&rep, &k0, 2.0, 0.5).unwrap().value, Complex64::new(0.0, 0.0));
        let x = xi1_truncated(&rep, &k0, 2.0, 4.0).unwrap();
        assert!((x.value.re - 1.3125).abs() < 1e-15);
        assert_eq!(xi1_truncated(&rep, &k0, 2.0, 1.0).unwrap().value.re, 1.0);
        assert_eq!(xi1_truncated(&rep, &k0, 2.0, 0.9).unwrap().value.re, 0.0);
        assert!(l_truncated(&rep, &k0, 1.0, 4.0).is_err());
        assert!(l_truncated(&rep, &k0, 2.0, 10.0).is_err());
    }

    #[test]
    fn degenerate_identity_is_flagged() {
        let (_, rep) = sqrt2_report(10.0);
        let c = identity_check(&rep, &Character::trivial(1), 2.0, 1.0).unwrap();
        assert!(c.insufficient_cutoff);
        assert!((c.ratio.re - 1.0 / zeta(4.0).unwrap().value).abs() < 1e-15);
    }

    #[test]
    fn residue_for_sqrt2() {
        let (us, _) = sqrt2_report(2.0);
        let p = residue_prediction(&us).unwrap();
        assert!((p.kappa - 0.623_225_240_140_230_5).abs() < 1e-9);
        assert!((p.c - 0.378_875_514_040_730_1).abs() < 1e-9);
    }
}
