//! The map π(α) = α/σ(α), visible (primitive) points, and enumeration of
//! visible classes of bounded norm modulo units.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::{csv_writer, float};
use crate::field::embed::PlaceKind;
use crate::field::{Element, FieldSpec};
use crate::linalg;
use crate::units::{TorusPoint, UnitSystem};

/// π(a) = a/σ(a). The result always has norm 1.
pub fn pi_map(a: &Element) -> Result<Element> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    a.div_exact(&a.apply_sigma(1))
}

fn integral_nonzero(a: &Element) -> Result<Vec<Integer>> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    a.integer_coords().ok_or(Error::NotIntegral)
}

/// True iff the coordinate gcd of an integral element is 1.
pub fn is_primitive(a: &Element) -> Result<bool> {
    Ok(linalg::gcd_of(&integral_nonzero(a)?) == 1)
}

/// Writes g = n·α with n > 0 the coordinate gcd and α primitive.
pub fn visible_decompose(g: &Element) -> Result<(Integer, Element)> {
    let n = linalg::gcd_of(&integral_nonzero(g)?);
    let alpha = g.scale(&Rational::from((Integer::from(1), n.clone())));
    Ok((n, alpha))
}

/// A unit orbit of primitive integral elements.
#[derive(Clone, Debug)]
pub struct VisibleClass {
    /// Canonical representative (see [`UnitSystem::unit_reduce`]).
    pub alpha: Element,
    pub coords: Vec<i64>,
    /// |N(alpha)|.
    pub h: u64,
    pub torus_point: TorusPoint,
}

#[derive(Serialize)]
struct ClassRecord<'a> {
    h: u64,
    alpha: &'a [i64],
    torus_point: &'a [f64],
    error: f64,
}

/// All visible classes with h < bound, sorted by (h, coordinates).
#[derive(Clone, Debug)]
pub struct EnumerationReport {
    pub field_label: String,
    pub degree: usize,
    pub torus_dim: usize,
    pub bound: f64,
    pub classes: Vec<VisibleClass>,
    pub wall_clock_secs: f64,
    pub assumptions: Vec<String>,
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    field: &'a str,
    bound: f64,
    count: usize,
    wall_clock_secs: f64,
    assumptions: &'a [String],
    classes: Vec<ClassRecord<'a>>,
}

impl EnumerationReport {
    fn empty(units: &UnitSystem, bound: f64) -> EnumerationReport {
        let field = units.field();
        EnumerationReport {
            field_label: field.label().to_string(),
            degree: field.degree(),
            torus_dim: units.rank(),
            bound,
            classes: Vec::new(),
            wall_clock_secs: 0.0,
            assumptions: units.assumptions(),
        }
    }

    pub fn count(&self) -> usize {
        self.classes.len()
    }

    /// Torus points in report order.
    pub fn points(&self) -> Vec<&[f64]> {
        self.classes.iter().map(|c| c.torus_point.coords.as_slice()).collect()
    }

    /// The classes with h < bound, for bound ≤ the report's own.
    pub fn restrict(&self, bound: f64) -> EnumerationReport {
        let mut out = self.clone();
        out.bound = bound;
        out.classes.retain(|c| (c.h as f64) < bound);
        out
    }

    /// CSV with columns `h, coord_1..coord_d, t_1..t_{r-1}, err`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv_writer(w);
        let mut header = vec!["h".to_string()];
        header.extend((1..=self.degree).map(|i| format!("coord_{i}")));
        header.extend((1..=self.torus_dim).map(|i| format!("t_{i}")));
        header.push("err".into());
        out.write_record(&header)?;
        for c in &self.classes {
            let mut row = vec![c.h.to_string()];
            row.extend(c.coords.iter().map(|x| x.to_string()));
            row.extend(c.torus_point.coords.iter().map(|&x| float(x)));
            row.push(float(c.torus_point.error));
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let rec = ReportRecord {
            field: &self.field_label,
            bound: self.bound,
            count: self.count(),
            wall_clock_secs: self.wall_clock_secs,
            assumptions: &self.assumptions,
            classes: self
                .classes
                .iter()
                .map(|c| ClassRecord {
                    h: c.h,
                    alpha: &c.coords,
                    torus_point: &c.torus_point.coords,
                    error: c.torus_point.error,
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&rec)?)
    }
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
    /// Largest admissible search-box volume (number of lattice points).
    pub max_box_points: f64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            workers: 0,
            max_box_points: 2e9,
        }
    }
}

/// Rows: Re ω(θ_v) for real places, Re and Im rows for complex places.
fn real_embedding_matrix(field: &FieldSpec) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(field.degree());
    for place in field.places() {
        rows.push(place.basis_values.iter().map(|w| w.re.to_f64()).collect());
        if place.kind == PlaceKind::Complex {
            rows.push(place.basis_values.iter().map(|w| w.im.to_f64()).collect());
        }
    }
    rows
}

/// Half-widths of an integer coordinate box containing a unit-reduced
/// representative of every orbit with |N| < bound.
pub fn search_box(units: &UnitSystem, bound: f64) -> Result<Vec<i64>> {
    let field = units.field();
    let n = field.signature().places() as f64;
    let radii = units.cell_radii();
    let mut row_bounds = Vec::with_capacity(field.degree());
    for (place, rho) in field.places().iter().zip(&radii) {
        let e = place.kind.exponent() as f64;
        let abs_bound = ((bound.ln() / n + rho) / e).exp() * (1.0 + 1e-6);
        row_bounds.push(abs_bound);
        if place.kind == PlaceKind::Complex {
            row_bounds.push(abs_bound);
        }
    }
    let m = real_embedding_matrix(field);
    let inv = linalg::inverse_f64(&m)
        .ok_or_else(|| Error::invariant("embedding_matrix", "real embedding matrix is singular"))?;
    Ok(inv
        .iter()
        .map(|row| {
            let b: f64 = row.iter().zip(&row_bounds).map(|(a, x)| a.abs() * x).sum();
            (b * (1.0 + 1e-9) + 1e-9).floor() as i64
        })
        .collect())
}

/// Canonical form of a primitive integral element with 0 < |N| < bound,
/// or None when a filter rejects it.
fn canonical_candidate(
    units: &UnitSystem,
    coords: &[i64],
    bound: f64,
) -> Result<Option<(Vec<i64>, u64)>> {
    let field = units.field();
    let norm = field.norm_of_integers(coords);
    if norm == 0 {
        return Ok(None);
    }
    let h = norm.abs();
    if !(h < bound) {
        return Ok(None);
    }
    if linalg::gcd_i64(coords) != 1 {
        return Ok(None);
    }
    let a = Element::from_integers(field, coords)?;
    let red = units.unit_reduce(&a)?;
    let canon: Vec<i64> = red
        .reduced
        .integer_coords()
        .ok_or_else(|| Error::invariant("unit_reduce", "reduction left the ring of integers"))?
        .iter()
        .map(|c| c.to_i64())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::invariant("unit_reduce", "canonical coordinates overflow i64"))?;
    let h = h
        .to_u64()
        .ok_or_else(|| Error::invariant("norm_range", "norm exceeds u64"))?;
    Ok(Some((canon, h)))
}

/// Visits every vector of the box ∏[−wᵢ, wᵢ] whose first coordinate equals
/// `first`, skipping vectors whose first nonzero coordinate is negative
/// when `half` is set.
fn scan_slice(
    units: &UnitSystem,
    widths: &[i64],
    first: i64,
    bound: f64,
    half: bool,
    out: &mut BTreeMap<Vec<i64>, u64>,
) -> Result<()> {
    let d = widths.len();
    let mut v: Vec<i64> = widths.iter().map(|w| -w).collect();
    v[0] = first;
    loop {
        let skip = v.iter().all(|&x| x == 0)
            || (half && v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0));
        if !skip {
            if let Some((canon, h)) = canonical_candidate(units, &v, bound)? {
                out.insert(canon, h);
            }
        }
        let mut k = 1;
        while k < d {
            v[k] += 1;
            if v[k] <= widths[k] {
                break;
            }
            v[k] = -widths[k];
            k += 1;
        }
        if k >= d {
            return Ok(());
        }
    }
}

fn finish(
    units: &UnitSystem,
    bound: f64,
    found: BTreeMap<Vec<i64>, u64>,
    started: Instant,
) -> Result<EnumerationReport> {
    let field = units.field();
    let mut classes = found
        .into_iter()
        .map(|(coords, h)| {
            let alpha = Element::from_integers(field, &coords)?;
            let torus_point = units.torus_point_of_pi(&alpha)?;
            Ok(VisibleClass {
                alpha,
                coords,
                h,
                torus_point,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    classes.sort_by(|a, b| a.h.cmp(&b.h).then_with(|| a.coords.cmp(&b.coords)));
    let mut report = EnumerationReport::empty(units, bound);
    report.classes = classes;
    report.wall_clock_secs = started.elapsed().as_secs_f64();
    Ok(report)
}

/// Exactly one class per unit orbit of primitive integral α with |N(α)| < r.
pub fn enumerate_visible(
    units: &UnitSystem,
    r: f64,
    opts: &EnumerateOptions,
) -> Result<EnumerationReport> {
    let started = Instant::now();
    if !(r > 1.0) {
        return Ok(EnumerationReport::empty(units, r));
    }
    let widths = search_box(units, r)?;
    let volume: f64 = widths.iter().map(|&w| 2.0 * w as f64 + 1.0).product();
    if volume > opts.max_box_points {
        return Err(Error::Resource {
            volume,
            budget: opts.max_box_points,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    // −1 is a unit, so half of the box suffices
    let parts: Vec<BTreeMap<Vec<i64>, u64>> = pool.install(|| {
        (0..=widths[0])
            .into_par_iter()
            .map(|first| {
                let mut out = BTreeMap::new();
                scan_slice(units, &widths, first, r, true, &mut out)?;
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut found = BTreeMap::new();
    for part in parts {
        found.extend(part);
    }
    finish(units, r, found, started)
}

/// Every integral vector in [−R, R]^d through the same filters, with no
/// fundamental-domain bound.
pub fn brute_force_oracle(units: &UnitSystem, box_radius: u32, r: f64) -> Result<EnumerationReport> {
    let started = Instant::now();
    let d = units.field().degree();
    let rad = box_radius as i64;
    let widths = vec![rad; d];
    let mut found = BTreeMap::new();
    for first in -rad..=rad {
        scan_slice(units, &widths, first, r, false, &mut found)?;
    }
    finish(units, r, found, started)
}

/// Classes whose torus points coincide within a tolerance while their
/// heights differ.
#[derive(Clone, Debug, Serialize)]
pub struct CollisionGroup {
    /// Indices into the report's class list.
    pub members: Vec<usize>,
    pub heights: Vec<u64>,
    pub torus_point: Vec<f64>,
}

fn wrap_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).abs().fract();
            d.min(1.0 - d)
        })
        .fold(0.0, f64::max)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Groups of classes at (wrap-aware) max-distance ≤ tol, keeping only the
/// groups that contain at least two distinct heights.
pub fn collision_scan(report: &EnumerationReport, tol: f64) -> Vec<CollisionGroup> {
    let n = report.count();
    let mut parent: Vec<usize> = (0..n).collect();
    let pts = report.points();
    if report.torus_dim == 0 {
        for i in 1..n {
            parent[i] = 0;
        }
    } else {
        // sweep along the first coordinate, with points near 0 repeated at +1
        let mut keys: Vec<(f64, usize)> = pts.iter().enumerate().map(|(i, p)| (p[0], i)).collect();
        keys.extend(
            pts.iter()
                .enumerate()
                .filter(|(_, p)| p[0] <= tol)
                .map(|(i, p)| (p[0] + 1.0, i)),
        );
        keys.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for a in 0..keys.len() {
            for b in a + 1..keys.len() {
                if keys[b].0 - keys[a].0 > tol {
                    break;
                }
                let (i, j) = (keys[a].1, keys[b].1);
                if i != j && wrap_distance(pts[i], pts[j]) <= tol {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups
        .into_values()
        .filter_map(|members| {
            let heights: Vec<u64> = members.iter().map(|&i| report.classes[i].h).collect();
            if heights.iter().all(|&h| h == heights[0]) {
                return None;
            }
            Some(CollisionGroup {
                torus_point: pts[members[0]].to_vec(),
                members,
                heights,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_real_quadratic;

    fn setup(d: i64) -> UnitSystem {
        UnitSystem::for_real_quadratic(&make_real_quadratic(d, 192).unwrap()).unwrap()
    }

    fn el(us: &UnitSystem, c: &[i64]) -> Element {
        Element::from_integers(us.field(), c).unwrap()
    }

    #[test]
    fn pi_map_examples() {
        let us = setup(2);
        assert!(pi_map(&el(&us, &[1, 0])).unwrap().is_one());
        assert_eq!(pi_map(&el(&us, &[2, 1])).unwrap(), el(&us, &[3, 2]));
        assert_eq!(pi_map(&el(&us, &[1, 1])).unwrap(), el(&us, &[-3, -2]));
        assert!(matches!(pi_map(&el(&us, &[0, 0])), Err(Error::ZeroElement)));
    }

    #[test]
    fn primitivity_and_decomposition() {
        let us = setup(2);
        assert!(is_primitive(&el(&us, &[2, 1])).unwrap());
        assert!(!is_primitive(&el(&us, &[2, 2])).unwrap());
        assert!(!is_primitive(&el(&us, &[3, 0])).unwrap());
        let half = Element::new(us.field(), vec![Rational::from((1, 2)), Rational::new()]).unwrap();
        assert!(matches!(is_primitive(&half), Err(Error::NotIntegral)));
        let (n, a) = visible_decompose(&el(&us, &[6, 3])).unwrap();
        assert_eq!((n, a), (Integer::from(3), el(&us, &[2, 1])));
        let (n, a) = visible_decompose(&el(&us, &[3, 1])).unwrap();
        assert_eq!((n, a), (Integer::from(1), el(&us, &[3, 1])));
        let (n, a) = visible_decompose(&el(&us, &[4, 0])).unwrap();
        assert_eq!((n, a), (Integer::from(4), el(&us, &[1, 0])));
        let (n, a) = visible_decompose(&el(&us, &[-4, -6])).unwrap();
        assert_eq!((n, a), (Integer::from(2), el(&us, &[-2, -3])));
    }

    #[test]
    fn sqrt2_small_bounds() {
        let us = setup(2);
        let opts = EnumerateOptions::default();
        let r = enumerate_visible(&us, 1.5, &opts).unwrap();
        assert_eq!(r.count(), 1);
        assert!(r.classes[0].alpha.is_one());
        assert_eq!(r.classes[0].torus_point.coords, vec![0.0]);
        let r = enumerate_visible(&us, 3.0, &opts).unwrap();
        assert_eq!(r.classes.iter().map(|c| c.h).collect::<Vec<_>>(), vec![1, 2]);
        assert!(r.classes.iter().all(|c| c.torus_point.coords == vec![0.0]));
        let r = enumerate_visible(&us, 8.0, &opts).unwrap();
        assert_eq!(r.classes.iter().map(|c| c.h).collect::<Vec<_>>(), vec![1, 2, 7, 7]);
        let mut ts: Vec<f64> = r.classes[2..].iter().map(|c| c.torus_point.coords[0]).collect();
        ts.sort_by(f64::total_cmp);
        assert!((ts[0] - 0.161_538_359_289_007_66).abs() < 1e-12);
        assert!((ts[1] - 0.838_461_640_710_992_3).abs() < 1e-12);
        assert_eq!(enumerate_visible(&us, 0.5, &opts).unwrap().count(), 0);
        assert_eq!(enumerate_visible(&us, 1.0, &opts).unwrap().count(), 0);
    }

    #[test]
    fn strict_bound_excludes_integer_ties() {
        let us = setup(2);
        let r = enumerate_visible(&us, 7.0, &EnumerateOptions::default()).unwrap();
        assert!(r.classes.iter().all(|c| c.h < 7));
        assert_eq!(r.count(), 2);
    }

    #[test]
    fn oracle_examples() {
        let us = setup(2);
        let opts = EnumerateOptions::default();
        let o = brute_force_oracle(&us, 20, 8.0).unwrap();
        let e = enumerate_visible(&us, 8.0, &opts).unwrap();
        assert_eq!(
            o.classes.iter().map(|c| &c.coords).collect::<Vec<_>>(),
            e.classes.iter().map(|c| &c.coords).collect::<Vec<_>>()
        );
        assert_eq!(brute_force_oracle(&us, 20, 1.5).unwrap().count(), 1);
        assert_eq!(brute_force_oracle(&us, 0, 8.0).unwrap().count(), 0);
    }

    #[test]
    fn resource_error_reports_volume() {
        let us = setup(2);
        let opts = EnumerateOptions {
            workers: 1,
            max_box_points: 100.0,
        };
        match enumerate_visible(&us, 1e4, &opts) {
            Err(Error::Resource { volume, budget }) => {
                assert!(volume > 100.0);
                assert_eq!(budget, 100.0);
            }
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn collisions_at_r3() {
        let us = setup(2);
        let r = enumerate_visible(&us, 3.0, &EnumerateOptions::default()).unwrap();
        for tol in [1e-8, 0.0] {
            let g = collision_scan(&r, tol);
            assert_eq!(g.len(), 1);
            assert_eq!(g[0].heights, vec![1, 2]);
            assert_eq!(g[0].torus_point, vec![0.0]);
        }
        assert!(collision_scan(&r.restrict(0.5), 1e-8).is_empty());
    }

    #[test]
    fn collision_scan_wraps() {
        let us = setup(2);
        let mut r = enumerate_visible(&us, 8.0, &EnumerateOptions::default()).unwrap();
        r.classes.truncate(2);
        r.classes[0].torus_point.coords = vec![0.9999];
        r.classes[1].torus_point.coords = vec![0.0001];
        assert_eq!(collision_scan(&r, 1e-3).len(), 1);
        assert!(collision_scan(&r, 1e-5).is_empty());
    }

    #[test]
    fn csv_layout() {
        let us = setup(2);
        let r = enumerate_visible(&us, 3.0, &EnumerateOptions::default()).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("h,coord_1,coord_2,t_1,err"));
        assert!(lines.next().unwrap().starts_with("1,1,0,0.0,"));
        assert!(!text.contains('\r'));
    }
}
