//! The unit group: fundamental units, the log-unit lattice log U ⊂ ker Σ,
//! the regulator, canonical reduction of elements modulo units, and
//! coordinates on the torus T = ker Σ / log U.

use std::sync::Arc;

use rug::ops::DivRounding;
use rug::{Float, Integer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::embed::{self, PlaceKind};
use crate::field::{Element, FieldSpec};
use crate::linalg;

/// The vector (log ‖α‖_v)_v over the representative places, with the
/// complex places squared.
#[derive(Clone, Debug)]
pub struct LogVector {
    pub values: Vec<Float>,
    pub error: f64,
}

impl LogVector {
    pub fn sum(&self) -> Float {
        let p = self.values.first().map_or(64, |v| v.prec());
        self.values.iter().fold(Float::new(p), |acc, v| acc + v)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64()).collect()
    }

    pub fn sub(&self, other: &LogVector) -> LogVector {
        LogVector {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| Float::with_val(a.prec(), a - b))
                .collect(),
            error: self.error + other.error,
        }
    }
}

/// A point of the torus with coordinates in [0, 1).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusPoint {
    pub coords: Vec<f64>,
    pub error: f64,
}

/// Logarithmic embedding of a nonzero element.
pub fn log_embed(a: &Element) -> Result<LogVector> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let field = a.field();
    let p = field.precision();
    let emb = a.embed();
    let mut values = Vec::with_capacity(emb.values.len());
    let mut error = 0.0f64;
    for (v, place) in emb.values.iter().zip(field.places()) {
        let e = place.kind.exponent();
        let modulus = match place.kind {
            PlaceKind::Real => Float::with_val(p, v.re.abs_ref()),
            PlaceKind::Complex => v.abs(),
        };
        let m = modulus.to_f64();
        if !(m > 2.0 * emb.error) {
            return Err(Error::Precision {
                precision: p,
                detail: format!("embedding modulus {m:e} within error {:e}", emb.error),
            });
        }
        let log = match place.kind {
            PlaceKind::Real => modulus.ln(),
            PlaceKind::Complex => v.abs_sq().ln(),
        };
        error = error.max(e as f64 * emb.error / (m - emb.error));
        values.push(log);
    }
    let rounding = 2f64.powi(8 - p as i32) * (1.0 + values.iter().map(|v| v.to_f64().abs()).sum::<f64>());
    Ok(LogVector {
        values,
        error: error + rounding,
    })
}

/// Result of reducing an element modulo units.
#[derive(Clone, Debug)]
pub struct UnitReduction {
    pub reduced: Element,
    /// mᵢ with reduced = ζʲ · a · ∏ uᵢ^(−mᵢ).
    pub exponents: Vec<i64>,
    pub root_power: u32,
}

/// Fundamental units, roots of unity and the log-unit lattice.
#[derive(Debug)]
pub struct UnitSystem {
    field: Arc<FieldSpec>,
    units: Vec<Element>,
    inverses: Vec<Element>,
    w: u32,
    /// Generator of the roots of unity, normalised to argument 2π/w at the
    /// first place.
    zeta_powers: Vec<Element>,
    /// `log_basis[v][i]` = log ‖uᵢ‖_v.
    log_basis: Vec<Vec<Float>>,
    log_basis_error: f64,
    /// Inverse of the first `rank` rows of `log_basis`.
    solver: Vec<Vec<Float>>,
    solver_norm: f64,
    regulator: Float,
    class_number_hint: u32,
    fundamentality_trusted: bool,
}

impl UnitSystem {
    /// Verifies that `units` are independent units of the right count and
    /// builds the log lattice. `fundamentality_trusted` records that index
    /// 1 in U/W was taken on faith rather than proved.
    pub fn new(
        field: &Arc<FieldSpec>,
        units: Vec<Element>,
        w: u32,
        class_number_hint: u32,
        fundamentality_trusted: bool,
    ) -> Result<UnitSystem> {
        let rank = field.signature().unit_rank();
        if units.len() != rank {
            return Err(Error::invariant(
                "unit_count",
                format!("{} fundamental units given, rank is {rank}", units.len()),
            ));
        }
        for (i, u) in units.iter().enumerate() {
            if !u.is_integral() {
                return Err(Error::invariant("unit_norm", format!("unit {} is not integral", i + 1)));
            }
            let n = u.norm();
            if n != 1 && n != -1 {
                return Err(Error::invariant(
                    "unit_norm",
                    format!("N(u{}) = {n}, expected ±1", i + 1),
                ));
            }
        }
        if field.signature().complex == 0 && w != 2 {
            return Err(Error::invariant(
                "roots_of_unity",
                format!("a totally real field has w = 2, config says {w}"),
            ));
        }
        let p = field.precision();
        let n_places = field.signature().places();
        let logs = units.iter().map(log_embed).collect::<Result<Vec<_>>>()?;
        let log_basis_error = logs.iter().map(|l| l.error).fold(0.0, f64::max);
        let log_basis: Vec<Vec<Float>> = (0..n_places)
            .map(|v| logs.iter().map(|l| l.values[v].clone()).collect())
            .collect();
        for (i, l) in logs.iter().enumerate() {
            let s = l.sum().to_f64().abs();
            if s > 10.0 * n_places as f64 * l.error {
                return Err(Error::invariant(
                    "unit_log_sum",
                    format!("column {} of the log lattice sums to {s:e}", i + 1),
                ));
            }
        }
        let square: Vec<Vec<Float>> = log_basis[..rank].to_vec();
        let regulator = if rank == 0 {
            Float::with_val(p, 1)
        } else {
            Float::with_val(p, det_float(&square, p).abs_ref())
        };
        if rank > 0 && regulator.to_f64() <= 1e-10 {
            return Err(Error::invariant(
                "unit_independence",
                format!("regulator {:e} ≤ 1e-10", regulator.to_f64()),
            ));
        }
        let solver = if rank == 0 {
            Vec::new()
        } else {
            linalg::inverse_float(&square, p).ok_or_else(|| {
                Error::invariant("unit_independence", "log lattice basis is singular")
            })?
        };
        let solver_norm = solver
            .iter()
            .map(|row| row.iter().map(|x| x.to_f64().abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let inverses = units.iter().map(Element::inverse).collect::<Result<Vec<_>>>()?;
        let zeta = normalized_root_of_unity(field, w)?;
        let mut zeta_powers = vec![Element::one(field)];
        for j in 1..w as usize {
            zeta_powers.push(zeta_powers[j - 1].mul(&zeta)?);
        }
        Ok(UnitSystem {
            field: Arc::clone(field),
            units,
            inverses,
            w,
            zeta_powers,
            log_basis,
            log_basis_error,
            solver,
            solver_norm,
            regulator,
            class_number_hint,
            fundamentality_trusted,
        })
    }

    /// Unit system of a real quadratic field from its continued-fraction
    /// fundamental unit (fundamentality is proved, not assumed).
    pub fn for_real_quadratic(field: &Arc<FieldSpec>) -> Result<UnitSystem> {
        let eps = pell_fundamental_unit(field)?;
        UnitSystem::new(field, vec![eps], 2, 1, false)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.units.len()
    }

    pub fn fundamental_units(&self) -> &[Element] {
        &self.units
    }

    pub fn roots_of_unity(&self) -> u32 {
        self.w
    }

    pub fn root_of_unity(&self) -> &Element {
        &self.zeta_powers[1 % self.zeta_powers.len()]
    }

    pub fn regulator(&self) -> f64 {
        self.regulator.to_f64()
    }

    pub fn class_number_hint(&self) -> u32 {
        self.class_number_hint
    }

    pub fn fundamentality_trusted(&self) -> bool {
        self.fundamentality_trusted
    }

    /// B as f64, `[place][unit]`.
    pub fn log_basis(&self) -> Vec<Vec<f64>> {
        self.log_basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_f64()).collect())
            .collect()
    }

    /// ρ_v = ½ Σᵢ |B_{v,i}|, the sup of |(Bc)_v| over the cell |cᵢ| ≤ ½.
    pub fn cell_radii(&self) -> Vec<f64> {
        self.log_basis
            .iter()
            .map(|r| 0.5 * r.iter().map(|x| x.to_f64().abs()).sum::<f64>())
            .collect()
    }

    /// Human-readable assumption flags attached to every report.
    pub fn assumptions(&self) -> Vec<String> {
        let mut flags = Vec::new();
        if self.fundamentality_trusted {
            flags.push("fundamental units trusted from config (index 1 in U/W not proved)".into());
        }
        if self.class_number_hint != 1 {
            flags.push(format!("class number hint {} taken from config", self.class_number_hint));
        }
        flags
    }

    /// Coordinates of a ker Σ vector in the basis B (not reduced).
    fn lattice_coordinates(&self, log: &LogVector) -> (Vec<Float>, f64) {
        let p = self.field.precision();
        let rank = self.rank();
        let coords: Vec<Float> = (0..rank)
            .map(|i| {
                (0..rank).fold(Float::new(p), |acc, j| {
                    acc + Float::with_val(p, &self.solver[i][j] * &log.values[j])
                })
            })
            .collect();
        let l1: f64 = coords.iter().map(|c| c.to_f64().abs()).sum();
        let error = self.solver_norm * (log.error + self.log_basis_error * l1) * 1.01
            + 2f64.powi(8 - p as i32) * (1.0 + l1);
        (coords, error)
    }

    /// Projection of a log vector onto ker Σ along (1, …, 1).
    fn project(&self, log: &LogVector) -> LogVector {
        let n = log.values.len() as u32;
        let mean = log.sum() / n;
        LogVector {
            values: log.values.iter().map(|v| Float::with_val(v.prec(), v - &mean)).collect(),
            error: 2.0 * log.error,
        }
    }

    /// Torus coordinates of a log vector lying in ker Σ.
    pub fn torus_coordinates_of_log(&self, log: &LogVector) -> Result<TorusPoint> {
        let n = log.values.len();
        if n != self.field.signature().places() {
            return Err(Error::DimensionMismatch {
                expected: self.field.signature().places(),
                got: n,
            });
        }
        let sum = log.sum().to_f64();
        let bound = 10.0 * n as f64 * log.error;
        if sum.abs() > bound {
            return Err(Error::NotNormOne { sum, bound });
        }
        let (coords, error) = self.lattice_coordinates(log);
        Ok(TorusPoint {
            coords: coords.iter().map(wrap_unit_interval).collect(),
            error,
        })
    }

    /// Torus coordinates of an element of absolute norm 1.
    pub fn torus_coordinates(&self, a: &Element) -> Result<TorusPoint> {
        self.torus_coordinates_of_log(&log_embed(a)?)
    }

    /// Torus point of π(α) = α/σ(α), computed as log α − log σ(α).
    pub fn torus_point_of_pi(&self, alpha: &Element) -> Result<TorusPoint> {
        let la = log_embed(alpha)?;
        let ls = log_embed(&alpha.apply_sigma(1))?;
        self.torus_coordinates_of_log(&la.sub(&ls))
    }

    /// Canonical representative of the orbit of `a` under U.
    ///
    /// The projected log vector is brought into the cell c ∈ [−½, ½)^r by
    /// round-half-up, then a root of unity fixes the orientation: first
    /// embedding positive (totally real) or argument in [0, 2π/w) at the
    /// first complex place. Coordinates that fall within 2^(−p/4) of a cell
    /// face are ambiguous; both sides are tried and the lexicographically
    /// least candidate wins, so exact ties are resolved identically from
    /// every starting point of the orbit.
    pub fn unit_reduce(&self, a: &Element) -> Result<UnitReduction> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let p = self.field.precision();
        let guard = 2f64.powi(-(p as i32) / 4);
        let projected = self.project(&log_embed(a)?);
        let (coords, err) = self.lattice_coordinates(&projected);
        if err >= guard {
            return Err(Error::Precision {
                precision: p,
                detail: format!("lattice coordinate error {err:e} exceeds guard band {guard:e}"),
            });
        }
        let mut choices: Vec<Vec<i64>> = Vec::with_capacity(coords.len());
        for c in &coords {
            let fl = Float::with_val(p, c.floor_ref());
            let frac = Float::with_val(p, c - &fl).to_f64();
            let base = fl
                .to_integer()
                .and_then(|i| i.to_i64())
                .ok_or_else(|| Error::Precision {
                    precision: p,
                    detail: "unit exponent out of range".into(),
                })?;
            if (frac - 0.5).abs() < guard {
                choices.push(vec![base, base + 1]);
            } else if frac < 0.5 {
                choices.push(vec![base]);
            } else {
                choices.push(vec![base + 1]);
            }
        }
        let mut best: Option<UnitReduction> = None;
        for exponents in cartesian(&choices) {
            let mut cand = a.clone();
            for (i, &m) in exponents.iter().enumerate() {
                if m != 0 {
                    let base = if m > 0 { &self.inverses[i] } else { &self.units[i] };
                    cand = cand.mul(&base.pow(m.abs())?)?;
                }
            }
            for j in self.orientations(&cand)? {
                let oriented = if j == 0 {
                    cand.clone()
                } else {
                    cand.mul(&self.zeta_powers[j as usize])?
                };
                let better = best.as_ref().is_none_or(|b| oriented < b.reduced);
                if better {
                    best = Some(UnitReduction {
                        reduced: oriented,
                        exponents: exponents.clone(),
                        root_power: j,
                    });
                }
            }
        }
        Ok(best.expect("at least one candidate"))
    }

    /// Powers j such that ζʲ·a is canonically oriented (two when the
    /// argument sits on a boundary within the guard band).
    fn orientations(&self, a: &Element) -> Result<Vec<u32>> {
        let p = self.field.precision();
        let place = &self.field.places()[0];
        let emb = a.embed();
        let v = &emb.values[0];
        match place.kind {
            PlaceKind::Real => {
                let x = v.re.to_f64();
                if x.abs() <= emb.error {
                    return Err(Error::Precision {
                        precision: p,
                        detail: "sign of first embedding undecidable".into(),
                    });
                }
                Ok(vec![if x > 0.0 { 0 } else { 1 }])
            }
            PlaceKind::Complex => {
                let w = self.w as i64;
                let guard = 2f64.powi(-(p as i32) / 4);
                let turns = Float::with_val(p, v.arg() * self.w) / (embed::pi(p) * 2u32);
                let fl = Float::with_val(p, turns.floor_ref());
                let frac = Float::with_val(p, &turns - &fl).to_f64();
                let f = fl.to_f64() as i64;
                let j = |k: i64| (-k).rem_euclid(w) as u32;
                if frac < guard {
                    Ok(vec![j(f), j(f - 1)])
                } else if frac > 1.0 - guard {
                    Ok(vec![j(f), j(f + 1)])
                } else {
                    Ok(vec![j(f)])
                }
            }
        }
    }
}

fn cartesian(choices: &[Vec<i64>]) -> Vec<Vec<i64>> {
    choices.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect()
    })
}

fn wrap_unit_interval(c: &Float) -> f64 {
    let p = c.prec();
    let fl = Float::with_val(p, c.floor_ref());
    let t = Float::with_val(p, c - &fl).to_f64();
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

fn det_float(m: &[Vec<Float>], p: u32) -> Float {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Float::with_val(p, 1);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&x, &y| {
                a[x][k]
                    .clone()
                    .abs()
                    .partial_cmp(&a[y][k].clone().abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(k);
        if a[piv][k].is_zero() {
            return Float::new(p);
        }
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            let f = Float::with_val(p, &a[i][k] / &a[k][k]);
            for j in k..n {
                let t = Float::with_val(p, &f * &a[k][j]);
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Finds a primitive w-th root of unity among small integral elements and
/// normalises it to argument 2π/w at the first complex place.
fn normalized_root_of_unity(field: &Arc<FieldSpec>, w: u32) -> Result<Element> {
    if w == 2 {
        return Element::from_integers(field, &{
            let mut v = vec![0i64; field.degree()];
            v[0] = -1;
            v
        });
    }
    let d = field.degree();
    let primes: Vec<u32> = (2..=w).filter(|q| w.is_multiple_of(*q) && (2..*q).all(|r| q % r != 0)).collect();
    let radius = 3i64;
    let mut coords = vec![-radius; d];
    loop {
        if field.norm_of_integers(&coords).clone().abs() == 1 {
            let x = Element::from_integers(field, &coords)?;
            if x.pow(w as i64)?.is_one() && primes.iter().all(|q| !x.pow((w / q) as i64).is_ok_and(|y| y.is_one())) {
                // pick the power with argument 2π/w at the first place
                let p = field.precision();
                let target = 2.0 * std::f64::consts::PI / w as f64;
                let mut y = x.clone();
                for _ in 0..w {
                    let arg = y.embed().values[0].arg().to_f64();
                    if (arg - target).abs() < 1e-6 {
                        return Ok(y);
                    }
                    y = y.mul(&x)?;
                }
                return Err(Error::Precision {
                    precision: p,
                    detail: "could not orient the root of unity".into(),
                });
            }
        }
        let mut k = 0;
        while k < d {
            coords[k] += 1;
            if coords[k] <= radius {
                break;
            }
            coords[k] = -radius;
            k += 1;
        }
        if k == d {
            break;
        }
    }
    Err(Error::invariant(
        "roots_of_unity",
        format!("no primitive {w}-th root of unity with coordinates in [−{radius}, {radius}]"),
    ))
}

/// Fundamental unit ε > 1 (first embedding) of a real quadratic field built
/// by [`crate::field::make_real_quadratic`], from the continued fraction of
/// the basis generator ω = √D or (1 + √D)/2: the first convergent h/k with
/// N(h − kω) = ±1 gives ε up to sign and conjugation.
pub fn pell_fundamental_unit(field: &Arc<FieldSpec>) -> Result<Element> {
    let dd = field
        .quadratic_radicand()
        .filter(|d| **d > 1)
        .ok_or_else(|| Error::InvalidInput("field is not a built-in real quadratic field".into()))?
        .clone();
    let s = dd.clone().sqrt();
    let one_mod_four = dd.mod_u(4) == 1;
    let (mut pp, mut qq) = if one_mod_four {
        (Integer::from(1), Integer::from(2))
    } else {
        (Integer::new(), Integer::from(1))
    };
    let (mut h1, mut h2) = (Integer::from(1), Integer::new());
    let (mut k1, mut k2) = (Integer::new(), Integer::from(1));
    for _ in 0..10_000_000u64 {
        let num = Integer::from(&pp + &s);
        let a = num.div_floor(&qq);
        let h = Integer::from(&a * &h1) + &h2;
        let k = Integer::from(&a * &k1) + &k2;
        let x = Element::from_big_integers(field, vec![h.clone(), -k.clone()])?;
        let n = x.norm();
        if n == 1 || n == -1 {
            return orient_unit(x);
        }
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        pp = Integer::from(&a * &qq) - &pp;
        qq = (&dd - Integer::from(&pp * &pp)).div_exact(&qq);
    }
    Err(Error::InvalidInput("continued fraction period too long".into()))
}

/// Picks the one of ±x, ±σ(x) that exceeds 1 under the first embedding.
fn orient_unit(x: Element) -> Result<Element> {
    let candidates = [x.clone(), x.neg(), x.apply_sigma(1), x.apply_sigma(1).neg()];
    candidates
        .into_iter()
        .find(|c| c.embed().values[0].re.to_f64() > 1.0)
        .ok_or_else(|| Error::invariant("unit_orientation", "no conjugate of the unit exceeds 1"))
}
