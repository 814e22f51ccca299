//! Small dense linear algebra over exact integers, exact rationals and
//! fixed-precision floats. Matrices are row-major `Vec<Vec<_>>`; sizes are
//! tiny (the field degree), so no effort is made to be cache friendly.

use rug::{Float, Integer, Rational};

/// Fraction-free (Bareiss) determinant.
pub fn det_integer(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    if n == 0 {
        return Integer::from(1);
    }
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Integer::new();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = Integer::from(&m[i][j] * &m[k][k]) - Integer::from(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Bareiss on machine integers; `None` on overflow so callers can fall
/// back to [`det_integer`].
pub fn det_i128(m: &mut [[i128; MAX_FAST_DIM]], n: usize) -> Option<i128> {
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let p = (k + 1..n).find(|&i| m[i][k] != 0)?;
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j]
                    .checked_mul(m[k][k])?
                    .checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    m[n - 1][n - 1].checked_mul(sign)
}

/// Largest degree handled by the machine-integer fast paths.
pub const MAX_FAST_DIM: usize = 8;

pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::from(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return Rational::new();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let f = Rational::from(&a[i][k] / &a[k][k]);
            for j in k..n {
                let t = Rational::from(&f * &a[k][j]);
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Exact inverse by Gauss-Jordan elimination; `None` when singular.
pub fn inverse_rational(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| Rational::from(u8::from(i == j))).collect())
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| a[i][k] != 0)?;
        a.swap(p, k);
        inv.swap(p, k);
        let piv = a[k][k].clone();
        for j in 0..n {
            a[k][j] /= &piv;
            inv[k][j] /= &piv;
        }
        for i in 0..n {
            if i == k || a[i][k] == 0 {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let t = Rational::from(&f * &a[k][j]);
                a[i][j] -= t;
                let t = Rational::from(&f * &inv[k][j]);
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Gauss-Jordan inverse with partial pivoting at precision `prec`.
/// Returns `None` when a pivot vanishes.
pub fn inverse_float(m: &[Vec<Float>], prec: u32) -> Option<Vec<Vec<Float>>> {
    let n = m.len();
    let mut a: Vec<Vec<Float>> = m.to_vec();
    let mut inv: Vec<Vec<Float>> = (0..n)
        .map(|i| (0..n).map(|j| Float::with_val(prec, u8::from(i == j))).collect())
        .collect();
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| {
            a[x][k]
                .clone()
                .abs()
                .partial_cmp(&a[y][k].clone().abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[p][k].is_zero() {
            return None;
        }
        a.swap(p, k);
        inv.swap(p, k);
        let piv = a[k][k].clone();
        for j in 0..n {
            a[k][j] /= &piv;
            inv[k][j] /= &piv;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let t = Float::with_val(prec, &f * &a[k][j]);
                a[i][j] -= t;
                let t = Float::with_val(prec, &f * &inv[k][j]);
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Inverse of a small `f64` matrix, used only to size search boxes.
pub fn inverse_f64(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))?;
        if a[p][k] == 0.0 {
            return None;
        }
        a.swap(p, k);
        inv.swap(p, k);
        let piv = a[k][k];
        for j in 0..n {
            a[k][j] /= piv;
            inv[k][j] /= piv;
        }
        for i in 0..n {
            if i != k {
                let f = a[i][k];
                for j in 0..n {
                    a[i][j] -= f * a[k][j];
                    inv[i][j] -= f * inv[k][j];
                }
            }
        }
    }
    Some(inv)
}

pub fn gcd_of(values: &[Integer]) -> Integer {
    values
        .iter()
        .fold(Integer::new(), |g, v| g.gcd(v))
}

pub fn gcd_i64(values: &[i64]) -> u64 {
    values.iter().fold(0u64, |mut a, &v| {
        let mut b = v.unsigned_abs();
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    })
}
