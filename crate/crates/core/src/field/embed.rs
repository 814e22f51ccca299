//! Archimedean places: polynomial roots at working precision and the
//! images of the integral basis under each representative embedding.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// A complex number with both parts at a fixed precision.
#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn zero(prec: u32) -> Self {
        MpComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn real(re: Float) -> Self {
        let prec = re.prec();
        MpComplex {
            re,
            im: Float::new(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }

    pub fn sub(&self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }

    pub fn mul(&self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        MpComplex { re, im }
    }

    pub fn scale(&self, s: &Float) -> MpComplex {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn div(&self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        let den = o.abs_sq();
        let re = Float::with_val(p, &self.re * &o.re) + Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.im * &o.re) - Float::with_val(p, &self.re * &o.im);
        MpComplex {
            re: re / &den,
            im: im / &den,
        }
    }

    pub fn abs_sq(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.abs_sq().sqrt()
    }

    /// Argument in (−π, π].
    pub fn arg(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Whether a place is real or one of a pair of complex-conjugate places.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum PlaceKind {
    Real,
    Complex,
}

impl PlaceKind {
    /// Exponent in ‖x‖_v = |x|^e: squared at complex places.
    pub fn exponent(self) -> u32 {
        match self {
            PlaceKind::Real => 1,
            PlaceKind::Complex => 2,
        }
    }
}

/// One representative embedding: the root of the defining polynomial and
/// the images of the integral basis.
#[derive(Clone, Debug)]
pub struct Place {
    pub kind: PlaceKind,
    pub root: MpComplex,
    pub basis_values: Vec<MpComplex>,
}

fn horner(coeffs: &[Integer], z: &MpComplex) -> MpComplex {
    let p = z.prec();
    let mut acc = MpComplex::zero(p);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

fn derivative(coeffs: &[Integer]) -> Vec<Integer> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| Integer::from(c * i as u64))
        .collect()
}

/// All complex roots of a monic squarefree integer polynomial (coefficients
/// in ascending order), via Durand-Kerner followed by Newton polishing.
pub fn polynomial_roots(coeffs: &[Integer], prec: u32) -> Result<Vec<MpComplex>> {
    let d = coeffs.len() - 1;
    let wp = prec + 64;
    if d == 1 {
        return Ok(vec![MpComplex::real(Float::with_val(prec, -Integer::from(&coeffs[0])))]);
    }
    let bound = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0f64, f64::max);
    let mut z: Vec<MpComplex> = (0..d)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            MpComplex {
                re: Float::with_val(wp, bound * angle.cos()),
                im: Float::with_val(wp, bound * angle.sin()),
            }
        })
        .collect();
    let tol = Float::with_val(wp, Float::i_exp(1, -(wp as i32 - 16))) * bound;
    let mut converged = false;
    for _ in 0..5000 {
        let mut max_step = Float::new(wp);
        for k in 0..d {
            let num = horner(coeffs, &z[k]);
            let mut den = MpComplex::real(Float::with_val(wp, 1));
            for j in 0..d {
                if j != k {
                    den = den.mul(&z[k].sub(&z[j]));
                }
            }
            if den.abs_sq().is_zero() {
                continue;
            }
            let step = num.div(&den);
            let s = step.abs();
            if s > max_step {
                max_step = s;
            }
            z[k] = z[k].sub(&step);
        }
        if max_step < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Precision {
            precision: prec,
            detail: "root iteration did not converge".into(),
        });
    }
    let dcoeffs = derivative(coeffs);
    for root in z.iter_mut() {
        for _ in 0..3 {
            let f = horner(coeffs, root);
            let fp = horner(&dcoeffs, root);
            if fp.abs_sq().is_zero() {
                break;
            }
            *root = root.sub(&f.div(&fp));
        }
    }
    Ok(z
        .into_iter()
        .map(|r| MpComplex {
            re: Float::with_val(prec, &r.re),
            im: Float::with_val(prec, &r.im),
        })
        .collect())
}

/// Splits the roots into real roots (descending) and one representative per
/// conjugate pair (positive imaginary part, descending real part), snapping
/// numerically real roots onto the real line and polishing them there.
pub fn classify_roots(
    coeffs: &[Integer],
    roots: Vec<MpComplex>,
    prec: u32,
) -> Result<(Vec<MpComplex>, Vec<MpComplex>)> {
    let snap = Float::with_val(prec, Float::i_exp(1, -(prec as i32 / 2)));
    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = 0usize;
    let dcoeffs = derivative(coeffs);
    for r in roots {
        let scale = Float::with_val(prec, 1) + r.abs();
        if Float::with_val(prec, r.im.abs_ref()) <= Float::with_val(prec, &snap * &scale) {
            let mut x = MpComplex::real(r.re);
            for _ in 0..2 {
                let f = horner(coeffs, &x);
                let fp = horner(&dcoeffs, &x);
                if fp.re.is_zero() {
                    break;
                }
                x.re -= Float::with_val(prec, &f.re / &fp.re);
            }
            real.push(x);
        } else if r.im.is_sign_positive() {
            upper.push(r);
        } else {
            lower += 1;
        }
    }
    if lower != upper.len() {
        return Err(Error::Precision {
            precision: prec,
            detail: "complex roots do not pair up".into(),
        });
    }
    real.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap_or(std::cmp::Ordering::Equal));
    upper.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok((real, upper))
}

/// |f(root)| at the root's precision.
pub fn residual(coeffs: &[Integer], root: &MpComplex) -> Float {
    horner(coeffs, root).abs()
}

/// Evaluates a rational polynomial in θ (ascending coefficients) at a root.
pub fn eval_rational_poly(coeffs: &[Rational], root: &MpComplex) -> MpComplex {
    let p = root.prec();
    let mut acc = MpComplex::zero(p);
    for c in coeffs.iter().rev() {
        acc = acc.mul(root);
        acc.re += c;
    }
    acc
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// 2^(-bits) as a float at the given precision.
pub fn pow2_neg(bits: u32, prec: u32) -> Float {
    Float::with_val(prec, 2).pow(-(bits as i32))
}
