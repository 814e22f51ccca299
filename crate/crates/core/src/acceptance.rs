//! The acceptance suite: ten end-to-end checks over ℚ(√2), ℚ(√3) and a
//! simplest cubic field. Each check returns a [`CriterionResult`]; the
//! expensive ℚ(√2) enumerations are computed once and shared.

use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Integer;

use crate::context::FieldData;
use crate::error::Result;
use crate::field::{Element, DEFAULT_PRECISION};
use crate::hilbert90::{
    brute_force_oracle, collision_scan, enumerate_visible, is_primitive, pi_map, visible_decompose,
    EnumerateOptions, EnumerationReport,
};
use crate::lseries::{identity_check, residue_prediction, Normalization};
use crate::torus::{star_discrepancy, weyl_sum, Character};
use crate::units::UnitSystem;

pub const CUBIC_FIELD: &str = "builtin:cubic13";
pub const BOUNDS: [f64; 3] = [1e3, 1e4, 1e5];

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {:<22} {} ({:.1}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.seconds
        )
    }
}

struct Shared {
    sqrt2: FieldData,
    /// Reports at 10³, 10⁴, 10⁵ with a single worker.
    reports: Vec<EnumerationReport>,
}

fn shared() -> std::result::Result<&'static Shared, String> {
    static CELL: OnceLock<std::result::Result<Shared, String>> = OnceLock::new();
    CELL.get_or_init(|| {
        let build = || -> Result<Shared> {
            let sqrt2 = FieldData::parse_and_load("builtin:sqrt2", DEFAULT_PRECISION)?;
            let opts = EnumerateOptions {
                workers: 1,
                ..Default::default()
            };
            let reports = BOUNDS
                .iter()
                .map(|&r| enumerate_visible(sqrt2.units()?, r, &opts))
                .collect::<Result<Vec<_>>>()?;
            Ok(Shared { sqrt2, reports })
        };
        build().map_err(|e| e.to_string())
    })
    .as_ref()
    .map_err(Clone::clone)
}

fn run(id: u32, name: &'static str, body: impl FnOnce() -> std::result::Result<(bool, String), String>) -> CriterionResult {
    let started = Instant::now();
    let (passed, detail) = match body() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        seconds: started.elapsed().as_secs_f64(),
    }
}

fn e2s(e: crate::error::Error) -> String {
    e.to_string()
}

fn class_set(report: &EnumerationReport) -> Vec<(u64, Vec<i64>)> {
    let mut v: Vec<_> = report.classes.iter().map(|c| (c.h, c.coords.clone())).collect();
    v.sort();
    v
}

/// Bounds checked by the oracle comparison: every integer and half-integer
/// in (1, 500].
fn oracle_bounds() -> Vec<f64> {
    (3..=1000).map(|i| i as f64 / 2.0).collect()
}

/// 1. enumerate_visible(r) equals the box-50 brute-force oracle as class
///    sets, for ℚ(√2) and ℚ(√3) and every r ≤ 500 on a half-integer grid.
pub fn criterion_1() -> CriterionResult {
    run(1, "oracle equivalence", || {
        let opts = EnumerateOptions {
            workers: 1,
            ..Default::default()
        };
        let mut checked = 0;
        for name in ["builtin:sqrt2", "builtin:sqrt3"] {
            let fd = FieldData::parse_and_load(name, DEFAULT_PRECISION).map_err(e2s)?;
            let us = fd.units().map_err(e2s)?;
            // the oracle's filters act class by class, so restricting the
            // r = 500 oracle to h < r is the oracle at r
            let oracle = brute_force_oracle(us, 50, 500.0).map_err(e2s)?;
            for r in oracle_bounds() {
                let fast = enumerate_visible(us, r, &opts).map_err(e2s)?;
                if class_set(&fast) != class_set(&oracle.restrict(r)) {
                    return Ok((false, format!("{name}: class sets differ at r = {r}")));
                }
                checked += 1;
            }
            for r in [1.5, 8.0, 97.5] {
                let direct = brute_force_oracle(us, 50, r).map_err(e2s)?;
                if class_set(&direct) != class_set(&oracle.restrict(r)) {
                    return Ok((false, format!("{name}: oracle restriction differs at r = {r}")));
                }
            }
        }
        Ok((true, format!("{checked} (field, r) pairs identical")))
    })
}

fn exact_properties(us: &UnitSystem, radius: i64) -> std::result::Result<(usize, usize), String> {
    let field = us.field();
    let d = field.degree();
    let mut v = vec![-radius; d];
    let mut checked = 0;
    let mut failures = 0;
    loop {
        if v.iter().any(|&x| x != 0) {
            checked += 1;
            let g = Element::from_integers(field, &v).map_err(e2s)?;
            let (n, alpha) = visible_decompose(&g).map_err(e2s)?;
            let n_i = n.to_i64().ok_or("gcd overflow")?;
            let mut ok = n_i > 0 && is_primitive(&alpha).map_err(e2s)?;
            ok &= alpha.scale(&n.clone().into()) == g;
            // uniqueness: γ/m is a primitive integral element only for m = n
            for m in 1..=radius {
                if m != n_i && v.iter().all(|x| x % m == 0) {
                    let w: Vec<i64> = v.iter().map(|x| x / m).collect();
                    ok &= crate::linalg::gcd_i64(&w) != 1;
                }
            }
            let pg = pi_map(&g).map_err(e2s)?;
            ok &= pg == pi_map(&alpha).map_err(e2s)?;
            ok &= pg.norm() == 1;
            let lhs = g.norm().abs();
            let rhs = alpha.norm().abs() * Integer::from((&n).pow(d as u32));
            ok &= lhs == rhs;
            if !ok {
                failures += 1;
            }
        }
        let mut k = 0;
        while k < d {
            v[k] += 1;
            if v[k] <= radius {
                break;
            }
            v[k] = -radius;
            k += 1;
        }
        if k == d {
            return Ok((checked, failures));
        }
    }
}

/// 2. Exact decomposition, π-invariance and norm scaling over [−20, 20]^d
///    in ℚ(√2) and the cubic field.
pub fn criterion_2() -> CriterionResult {
    run(2, "exact properties", || {
        let mut parts = Vec::new();
        let mut total_failures = 0;
        for name in ["builtin:sqrt2", CUBIC_FIELD] {
            let fd = FieldData::parse_and_load(name, DEFAULT_PRECISION).map_err(e2s)?;
            let (checked, failures) = exact_properties(fd.units().map_err(e2s)?, 20)?;
            total_failures += failures;
            parts.push(format!("{name}: {checked} elements, {failures} failures"));
        }
        Ok((total_failures == 0, parts.join("; ")))
    })
}

fn wrap_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).abs().fract();
            d.min(1.0 - d)
        })
        .fold(0.0, f64::max)
}

/// 3. torus_point(π(uα)) = torus_point(π(α)) to 1e-9 over 1000 seeded
///    random (u, α), split between ℚ(√2) and the cubic field.
pub fn criterion_3() -> CriterionResult {
    run(3, "unit invariance", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
        let fields = [
            FieldData::parse_and_load("builtin:sqrt2", DEFAULT_PRECISION).map_err(e2s)?,
            FieldData::parse_and_load(CUBIC_FIELD, DEFAULT_PRECISION).map_err(e2s)?,
        ];
        let mut failures = 0;
        let mut worst = 0.0f64;
        for trial in 0..1000 {
            let us = fields[trial % 2].units().map_err(e2s)?;
            let field = us.field();
            let coords: Vec<i64> = loop {
                let c: Vec<i64> = (0..field.degree()).map(|_| rng.gen_range(-30..=30)).collect();
                if c.iter().any(|&x| x != 0) {
                    break c;
                }
            };
            let alpha = Element::from_integers(field, &coords).map_err(e2s)?;
            let mut u = if rng.gen_bool(0.5) {
                Element::one(field)
            } else {
                Element::one(field).neg()
            };
            for base in us.fundamental_units() {
                u = u.mul(&base.pow(rng.gen_range(-3..=3)).map_err(e2s)?).map_err(e2s)?;
            }
            let ua = u.mul(&alpha).map_err(e2s)?;
            let t1 = us.torus_point_of_pi(&alpha).map_err(e2s)?;
            let t2 = us.torus_point_of_pi(&ua).map_err(e2s)?;
            let gap = wrap_gap(&t1.coords, &t2.coords);
            worst = worst.max(gap);
            if gap > 1e-9 {
                failures += 1;
            }
        }
        Ok((
            failures == 0,
            format!("1000 trials, {failures} failures, max wrap gap {worst:.2e}"),
        ))
    })
}

/// 4. count(10⁵)/10⁵ in ℚ(√2) within 3% of the predicted constant.
pub fn criterion_4() -> CriterionResult {
    run(4, "counting", || {
        let sh = shared()?;
        let pred = residue_prediction(sh.sqrt2.units().map_err(e2s)?).map_err(e2s)?;
        let rep = &sh.reports[2];
        let ratio = rep.count() as f64 / rep.bound;
        let rel = ratio / pred.c - 1.0;
        Ok((
            rel.abs() <= 0.03,
            format!(
                "count {} at r = 1e5, count/r = {ratio:.5}, predicted C = {:.5} ({:+.3}%)",
                rep.count(),
                pred.c,
                100.0 * rel
            ),
        ))
    })
}

/// 5. Normalized Weyl sums for k ∈ {1, 2, 3, −1} below 0.02 at 10⁵ and
///    nonincreasing along 10³, 10⁴, 10⁵ up to a factor 2.
pub fn criterion_5() -> CriterionResult {
    run(5, "weyl decay", || {
        let sh = shared()?;
        let mut ok = true;
        let mut parts = Vec::new();
        for k in [1i64, 2, 3, -1] {
            let ch = Character::new(vec![k]);
            let vals = sh
                .reports
                .iter()
                .map(|r| weyl_sum(r, &ch).map(|w| w.normalized))
                .collect::<Result<Vec<_>>>()
                .map_err(e2s)?;
            ok &= vals[2] < 0.02 && vals.windows(2).all(|w| w[1] <= 2.0 * w[0]);
            parts.push(format!(
                "k={k}: {}",
                vals.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(" -> ")
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// 6. Exact one-dimensional star discrepancy strictly decreasing along
///    10³, 10⁴, 10⁵ and below 0.02 at the end.
pub fn criterion_6() -> CriterionResult {
    run(6, "discrepancy decay", || {
        let sh = shared()?;
        let vals = sh
            .reports
            .iter()
            .map(|r| star_discrepancy(r, 256).map(|d| d.value))
            .collect::<Result<Vec<_>>>()
            .map_err(e2s)?;
        let ok = vals.windows(2).all(|w| w[1] < w[0]) && vals[2] < 0.02;
        Ok((
            ok,
            format!(
                "D* = {}",
                vals.iter().map(|v| format!("{v:.5}")).collect::<Vec<_>>().join(", ")
            ),
        ))
    })
}

/// 7. |Ξ₁/(ζ(4)·L) − 1| ≤ 1e-3 at s = 2, X = 10⁴ for k ∈ {0, 1}, and which
///    normalization the ratio supports.
pub fn criterion_7() -> CriterionResult {
    run(7, "L-identity", || {
        let sh = shared()?;
        let mut ok = true;
        let mut parts = Vec::new();
        for k in [0i64, 1] {
            let c = identity_check(&sh.reports[2], &Character::new(vec![k]), 2.0, 1e4).map_err(e2s)?;
            ok &= c.residual <= 1e-3 && c.verdict == Normalization::Zeta;
            parts.push(format!(
                "k={k}: |ratio-1| = {:.2e}, |ratio/2-1| = {:.3}, matches {}",
                c.residual,
                c.residual2,
                match c.verdict {
                    Normalization::Zeta => "zeta(ds)",
                    Normalization::TwoZeta => "2 zeta(ds)",
                }
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// 8. Weyl sums on the 2-torus of the cubic field below 0.05 at 10⁴.
pub fn criterion_8() -> CriterionResult {
    run(8, "cubic weyl", || {
        let fd = FieldData::parse_and_load(CUBIC_FIELD, DEFAULT_PRECISION).map_err(e2s)?;
        let us = fd.units().map_err(e2s)?;
        let rep = enumerate_visible(us, 1e4, &EnumerateOptions::default()).map_err(e2s)?;
        let mut ok = true;
        let mut parts = vec![format!("{} classes", rep.count())];
        for k in [vec![1, 0], vec![0, 1], vec![1, 1]] {
            let w = weyl_sum(&rep, &Character::new(k.clone())).map_err(e2s)?;
            ok &= w.normalized < 0.05;
            parts.push(format!("k={k:?}: {:.4}", w.normalized));
        }
        if !rep.assumptions.is_empty() {
            parts.push(format!("flags: {}", rep.assumptions.join(", ")));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// 9. At r = 3 in ℚ(√2) the collision scan finds exactly the group
///    {h = 1, h = 2} at t = 0.
pub fn criterion_9() -> CriterionResult {
    run(9, "collision probe", || {
        let sh = shared()?;
        let rep = sh.reports[0].restrict(3.0);
        let groups = collision_scan(&rep, 1e-8);
        let ok = groups.len() == 1 && groups[0].heights == vec![1, 2] && groups[0].torus_point == vec![0.0];
        Ok((
            ok,
            format!(
                "{} group(s): {}",
                groups.len(),
                groups
                    .iter()
                    .map(|g| format!("h={:?} at t={:?}", g.heights, g.torus_point))
                    .collect::<Vec<_>>()
                    .join("; ")
            ),
        ))
    })
}

/// 10. The 10⁵ enumeration gives byte-identical CSV with 1 and 4 workers.
pub fn criterion_10() -> CriterionResult {
    run(10, "determinism", || {
        let sh = shared()?;
        let us = sh.sqrt2.units().map_err(e2s)?;
        let mut one = Vec::new();
        sh.reports[2].write_csv(&mut one).map_err(e2s)?;
        let four = enumerate_visible(
            us,
            1e5,
            &EnumerateOptions {
                workers: 4,
                ..Default::default()
            },
        )
        .map_err(e2s)?;
        let mut other = Vec::new();
        four.write_csv(&mut other).map_err(e2s)?;
        Ok((
            one == other,
            format!("{} bytes (1 worker) vs {} bytes (4 workers)", one.len(), other.len()),
        ))
    })
}

/// The criteria in order, for drivers that report as they go.
pub const CRITERIA: [fn() -> CriterionResult; 10] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
];

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| c()).collect()
}
