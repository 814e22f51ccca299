//! Exact arithmetic in a cyclic number field K of degree d given by an
//! integral basis ω₁ = 1, ω₂, …, ω_d, an explicit generator σ of Gal(K/ℚ)
//! and representative archimedean embeddings at a configurable precision.

mod element;
pub mod embed;

use std::fmt;
use std::sync::Arc;

use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
pub use element::{Element, Embedding};
use embed::{MpComplex, Place, PlaceKind};

pub const DEFAULT_PRECISION: u32 = 192;
pub const MIN_PRECISION: u32 = 64;

/// Counts of real places and of complex-conjugate place pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub real: usize,
    pub complex: usize,
}

impl Signature {
    pub fn places(&self) -> usize {
        self.real + self.complex
    }

    /// Rank of the unit group, r₁ + r₂ − 1.
    pub fn unit_rank(&self) -> usize {
        self.places() - 1
    }
}

/// Raw description of a field, before any invariant has been checked.
#[derive(Clone, Debug)]
pub struct FieldDefinition {
    pub label: String,
    /// Monic defining polynomial, ascending coefficients.
    pub min_poly: Vec<Integer>,
    /// Row i holds ωᵢ as ascending coefficients in powers of θ.
    pub integral_basis: Vec<Vec<Rational>>,
    /// Row i holds the basis coordinates of σ(ωᵢ).
    pub sigma_on_basis: Vec<Vec<Integer>>,
    pub signature: Signature,
    /// Checked against the computed discriminant when present.
    pub discriminant: Option<Integer>,
}

/// A verified cyclic number field.
#[derive(Debug)]
pub struct FieldSpec {
    label: String,
    degree: usize,
    min_poly: Vec<Integer>,
    integral_basis: Vec<Vec<Rational>>,
    /// `mult_table[i][j][k]` is the k-th coordinate of ωᵢωⱼ.
    mult_table: Vec<Vec<Vec<Integer>>>,
    mult_table_small: Option<Vec<i64>>,
    /// `sigma_powers[k]` is the matrix of σᵏ (row i = σᵏ(ωᵢ)), k = 0..d.
    sigma_powers: Vec<Vec<Vec<Integer>>>,
    signature: Signature,
    discriminant: Integer,
    precision: u32,
    places: Vec<Place>,
    quadratic_radicand: Option<Integer>,
}

impl FieldSpec {
    /// Verifies every invariant of `def` and computes embeddings at
    /// `precision` bits.
    pub fn new(def: FieldDefinition, precision: u32) -> Result<Arc<FieldSpec>> {
        Self::build(def, precision, None)
    }

    fn build(
        def: FieldDefinition,
        precision: u32,
        quadratic_radicand: Option<Integer>,
    ) -> Result<Arc<FieldSpec>> {
        if precision < MIN_PRECISION {
            return Err(Error::InvalidInput(format!(
                "precision {precision} below minimum {MIN_PRECISION}"
            )));
        }
        let d = def.min_poly.len().saturating_sub(1);
        if d == 0 {
            return Err(Error::Schema("min_poly must have degree ≥ 1".into()));
        }
        if def.min_poly[d] != 1 {
            return Err(Error::invariant("monic", "leading coefficient of min_poly must be 1"));
        }
        if d > linalg::MAX_FAST_DIM {
            return Err(Error::InvalidInput(format!(
                "degree {d} exceeds supported maximum {}",
                linalg::MAX_FAST_DIM
            )));
        }
        let sig = def.signature;
        if sig.real + 2 * sig.complex != d {
            return Err(Error::invariant(
                "signature",
                format!("r1 + 2 r2 = {} ≠ degree {d}", sig.real + 2 * sig.complex),
            ));
        }
        if sig.real != 0 && sig.complex != 0 {
            return Err(Error::invariant(
                "signature",
                "cyclic field must be totally real or totally imaginary",
            ));
        }
        if let Some(root) = integer_root(&def.min_poly) {
            if d > 1 {
                return Err(Error::invariant(
                    "irreducible",
                    format!("min_poly has the rational root {root}"),
                ));
            }
        }

        let basis = normalize_basis(&def.integral_basis, d)?;
        let winv = linalg::inverse_rational(&basis)
            .ok_or_else(|| Error::invariant("integral_basis", "basis is linearly dependent"))?;
        let mult_table = multiplication_table(&def.min_poly, &basis, &winv)?;

        let traces: Vec<Integer> = (0..d)
            .map(|k| (0..d).map(|j| mult_table[k][j][j].clone()).sum())
            .collect();
        let trace_form: Vec<Vec<Integer>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d)
                            .map(|k| Integer::from(&mult_table[i][j][k] * &traces[k]))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let discriminant = linalg::det_integer(trace_form);
        if discriminant == 0 {
            return Err(Error::invariant("squarefree", "min_poly has a repeated root"));
        }
        if let Some(given) = &def.discriminant {
            if *given != discriminant {
                return Err(Error::invariant(
                    "discriminant",
                    format!("config says {given}, integral basis gives {discriminant}"),
                ));
            }
        }

        let sigma = check_sigma_shape(&def.sigma_on_basis, d)?;
        let sigma_powers = sigma_powers(&sigma, d)?;
        check_homomorphism(&sigma, &mult_table)?;

        let places = compute_places(&def.min_poly, &basis, sig, precision)?;

        let mult_table_small = mult_table
            .iter()
            .flatten()
            .flatten()
            .map(|v| v.to_i64())
            .collect::<Option<Vec<i64>>>();

        Ok(Arc::new(FieldSpec {
            label: def.label,
            degree: d,
            min_poly: def.min_poly,
            integral_basis: basis,
            mult_table,
            mult_table_small,
            sigma_powers,
            signature: sig,
            discriminant,
            precision,
            places,
            quadratic_radicand,
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &[Integer] {
        &self.min_poly
    }

    pub fn integral_basis(&self) -> &[Vec<Rational>] {
        &self.integral_basis
    }

    pub fn mult_table(&self) -> &[Vec<Vec<Integer>>] {
        &self.mult_table
    }

    /// Matrix of σ on the basis; row i holds σ(ωᵢ).
    pub fn sigma_matrix(&self) -> &[Vec<Integer>] {
        &self.sigma_powers[1 % self.degree.max(1)]
    }

    pub fn sigma_power(&self, k: usize) -> &[Vec<Integer>] {
        &self.sigma_powers[k % self.degree]
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn discriminant(&self) -> &Integer {
        &self.discriminant
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    /// `Some(D)` when built by [`make_real_quadratic`] or [`make_quadratic`].
    pub fn quadratic_radicand(&self) -> Option<&Integer> {
        self.quadratic_radicand.as_ref()
    }

    pub(crate) fn mult_table_small(&self) -> Option<&[i64]> {
        self.mult_table_small.as_deref()
    }

    /// Exact norm of an integral element given by machine-integer
    /// coordinates.
    pub fn norm_of_integers(&self, coords: &[i64]) -> Integer {
        let d = self.degree;
        if let Some(t) = self.mult_table_small() {
            let mut m = [[0i128; linalg::MAX_FAST_DIM]; linalg::MAX_FAST_DIM];
            let mut ok = true;
            'outer: for j in 0..d {
                for k in 0..d {
                    let mut acc = 0i128;
                    for (i, &a) in coords.iter().enumerate() {
                        if a == 0 {
                            continue;
                        }
                        let term = (a as i128).checked_mul(t[(i * d + j) * d + k] as i128);
                        match term.and_then(|x| acc.checked_add(x)) {
                            Some(v) => acc = v,
                            None => {
                                ok = false;
                                break 'outer;
                            }
                        }
                    }
                    m[j][k] = acc;
                }
            }
            if ok {
                if let Some(n) = linalg::det_i128(&mut m, d) {
                    return Integer::from(n);
                }
            }
        }
        let ints: Vec<Integer> = coords.iter().map(|&c| Integer::from(c)).collect();
        linalg::det_integer(self.multiplication_matrix(&ints))
    }

    /// Row j = coordinates of a·ωⱼ.
    pub(crate) fn multiplication_matrix(&self, a: &[Integer]) -> Vec<Vec<Integer>> {
        let d = self.degree;
        (0..d)
            .map(|j| {
                (0..d)
                    .map(|k| {
                        let mut acc = Integer::new();
                        for (i, ai) in a.iter().enumerate() {
                            if *ai != 0 {
                                acc += Integer::from(ai * &self.mult_table[i][j][k]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// True iff `other` describes the same field (same polynomial, basis
    /// and σ).
    pub fn same_field(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other)
            || (self.min_poly == other.min_poly
                && self.integral_basis == other.integral_basis
                && self.sigma_powers[1 % self.degree] == other.sigma_powers[1 % other.degree])
    }

    /// Images of θ at each representative place, as f64 pairs.
    pub fn embedding_summary(&self) -> Vec<(f64, f64)> {
        self.places.iter().map(|p| p.root.to_f64_pair()).collect()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (degree {}, disc {})", self.label, self.degree, self.discriminant)
    }
}

fn normalize_basis(rows: &[Vec<Rational>], d: usize) -> Result<Vec<Vec<Rational>>> {
    if rows.len() != d {
        return Err(Error::Schema(format!(
            "integral_basis has {} entries, expected {d}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(d);
    for (i, row) in rows.iter().enumerate() {
        if row.len() > d {
            return Err(Error::Schema(format!("integral_basis[{i}] has more than {d} coefficients")));
        }
        let mut r = row.clone();
        r.resize(d, Rational::new());
        out.push(r);
    }
    let one: Vec<Rational> = (0..d).map(|k| Rational::from(u8::from(k == 0))).collect();
    if out[0] != one {
        return Err(Error::invariant("integral_basis", "ω₁ must be 1"));
    }
    Ok(out)
}

/// Reduces a polynomial (ascending, any length) modulo the monic `f`.
fn reduce_mod(mut p: Vec<Rational>, f: &[Integer]) -> Vec<Rational> {
    let d = f.len() - 1;
    while p.len() > d {
        let lead = p.pop().unwrap_or_default();
        if lead == 0 {
            continue;
        }
        let shift = p.len() - d;
        for (k, c) in f[..d].iter().enumerate() {
            let t = Rational::from(&lead * c);
            p[shift + k] -= t;
        }
    }
    p.resize(d, Rational::new());
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

fn multiplication_table(
    f: &[Integer],
    basis: &[Vec<Rational>],
    winv: &[Vec<Rational>],
) -> Result<Vec<Vec<Vec<Integer>>>> {
    let d = basis.len();
    let mut table = vec![vec![Vec::with_capacity(d); d]; d];
    for i in 0..d {
        for j in 0..d {
            let p = reduce_mod(poly_mul(&basis[i], &basis[j]), f);
            for k in 0..d {
                let c: Rational = (0..d).map(|m| Rational::from(&p[m] * &winv[m][k])).sum();
                if *c.denom() != 1 {
                    return Err(Error::invariant(
                        "integral_basis",
                        format!("ω{}·ω{} has non-integral coordinate {c}", i + 1, j + 1),
                    ));
                }
                table[i][j].push(c.into_numer_denom().0);
            }
        }
    }
    Ok(table)
}

fn check_sigma_shape(s: &[Vec<Integer>], d: usize) -> Result<Vec<Vec<Integer>>> {
    if s.len() != d || s.iter().any(|r| r.len() != d) {
        return Err(Error::Schema(format!("sigma_on_basis must be {d}×{d}")));
    }
    let det = linalg::det_integer(s.to_vec());
    if det != 1 && det != -1 {
        return Err(Error::invariant("sigma_det", format!("det σ = {det}, expected ±1")));
    }
    let fixes_one = s[0].iter().enumerate().all(|(k, v)| *v == u8::from(k == 0));
    if !fixes_one {
        return Err(Error::invariant("sigma_fixes_one", "σ(1) ≠ 1"));
    }
    Ok(s.to_vec())
}

fn mat_mul(a: &[Vec<Integer>], b: &[Vec<Integer>]) -> Vec<Vec<Integer>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| Integer::from(&a[i][k] * &b[k][j])).sum())
                .collect()
        })
        .collect()
}

fn is_identity(m: &[Vec<Integer>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, v)| *v == u8::from(i == j)))
}

fn sigma_powers(s: &[Vec<Integer>], d: usize) -> Result<Vec<Vec<Vec<Integer>>>> {
    let identity: Vec<Vec<Integer>> = (0..d)
        .map(|i| (0..d).map(|j| Integer::from(u8::from(i == j))).collect())
        .collect();
    let mut powers = vec![identity];
    for k in 1..=d {
        let next = mat_mul(&powers[k - 1], s);
        if is_identity(&next) && k < d {
            return Err(Error::invariant("sigma_order", format!("σ has order {k} ≠ {d}")));
        }
        powers.push(next);
    }
    if !is_identity(&powers[d]) {
        return Err(Error::invariant("sigma_order", format!("σ^{d} ≠ identity")));
    }
    powers.truncate(d);
    Ok(powers)
}

fn check_homomorphism(s: &[Vec<Integer>], t: &[Vec<Vec<Integer>>]) -> Result<()> {
    let d = s.len();
    let mul = |a: &[Integer], b: &[Integer]| -> Vec<Integer> {
        let mut out = vec![Integer::new(); d];
        for i in 0..d {
            for j in 0..d {
                let ab = Integer::from(&a[i] * &b[j]);
                if ab == 0 {
                    continue;
                }
                for k in 0..d {
                    out[k] += Integer::from(&ab * &t[i][j][k]);
                }
            }
        }
        out
    };
    let apply = |v: &[Integer]| -> Vec<Integer> {
        (0..d)
            .map(|j| (0..d).map(|i| Integer::from(&v[i] * &s[i][j])).sum())
            .collect()
    };
    for i in 0..d {
        for j in 0..d {
            let lhs = apply(&t[i][j]);
            let rhs = mul(&s[i], &s[j]);
            if lhs != rhs {
                return Err(Error::invariant(
                    "sigma_homomorphism",
                    format!("σ(ω{}ω{}) ≠ σ(ω{})σ(ω{})", i + 1, j + 1, i + 1, j + 1),
                ));
            }
        }
    }
    Ok(())
}

fn compute_places(
    f: &[Integer],
    basis: &[Vec<Rational>],
    sig: Signature,
    prec: u32,
) -> Result<Vec<Place>> {
    let roots = embed::polynomial_roots(f, prec)?;
    let bound = embed::pow2_neg(prec / 2, prec);
    for r in &roots {
        if embed::residual(f, r) >= bound {
            return Err(Error::Precision {
                precision: prec,
                detail: "root residual exceeds 2^(-p/2)".into(),
            });
        }
    }
    let (real, complex) = embed::classify_roots(f, roots, prec)?;
    if real.len() != sig.real || complex.len() != sig.complex {
        return Err(Error::invariant(
            "signature",
            format!(
                "declared ({}, {}) but min_poly has signature ({}, {})",
                sig.real,
                sig.complex,
                real.len(),
                complex.len()
            ),
        ));
    }
    let make = |kind: PlaceKind, root: MpComplex| Place {
        kind,
        basis_values: basis
            .iter()
            .map(|w| embed::eval_rational_poly(w, &root))
            .collect(),
        root,
    };
    Ok(real
        .into_iter()
        .map(|r| make(PlaceKind::Real, r))
        .chain(complex.into_iter().map(|r| make(PlaceKind::Complex, r)))
        .collect())
}

/// An integer root of a monic polynomial, if any (by the rational root
/// theorem every rational root is an integer dividing the constant term).
fn integer_root(f: &[Integer]) -> Option<Integer> {
    let eval = |x: &Integer| -> Integer {
        f.iter()
            .rev()
            .fold(Integer::new(), |acc, c| acc * x + c)
    };
    let c0 = f[0].clone().abs();
    if c0 == 0 {
        return Some(Integer::new());
    }
    let limit = c0.to_u64().filter(|&v| v <= 1_000_000_000_000)?;
    let mut k = 1u64;
    while k * k <= limit {
        if limit % k == 0 {
            for cand in [k, limit / k] {
                for x in [Integer::from(cand), -Integer::from(cand)] {
                    if eval(&x) == 0 {
                        return Some(x);
                    }
                }
            }
        }
        k += 1;
    }
    None
}

fn is_squarefree(n: &Integer) -> bool {
    let n = n.clone().abs();
    let mut p = Integer::from(2);
    while Integer::from(&p * &p) <= n {
        if n.is_divisible(&Integer::from(&p * &p)) {
            return false;
        }
        p += 1;
    }
    true
}

/// ℚ(√D) for a squarefree D ≠ 0, 1, with the standard integral basis and
/// σ(√D) = −√D.
pub fn make_quadratic(d_sf: i64, precision: u32) -> Result<Arc<FieldSpec>> {
    let dd = Integer::from(d_sf);
    if d_sf == 0 || d_sf == 1 || !is_squarefree(&dd) {
        return Err(Error::InvalidInput(format!(
            "{d_sf} is not a squarefree integer other than 0 and 1"
        )));
    }
    let r = |n: i64, q: i64| Rational::from((n, q));
    let one_mod_four = dd.mod_u(4) == 1;
    let (basis, sigma, disc) = if one_mod_four {
        (
            vec![vec![r(1, 1), r(0, 1)], vec![r(1, 2), r(1, 2)]],
            vec![vec![1, 0], vec![1, -1]],
            dd.clone(),
        )
    } else {
        (
            vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]],
            vec![vec![1, 0], vec![0, -1]],
            Integer::from(&dd * 4),
        )
    };
    let signature = if d_sf > 0 {
        Signature { real: 2, complex: 0 }
    } else {
        Signature { real: 0, complex: 1 }
    };
    let def = FieldDefinition {
        label: format!("Q(sqrt({d_sf}))"),
        min_poly: vec![-dd.clone(), Integer::new(), Integer::from(1)],
        integral_basis: basis,
        sigma_on_basis: sigma
            .into_iter()
            .map(|row| row.into_iter().map(Integer::from).collect())
            .collect(),
        signature,
        discriminant: Some(disc),
    };
    FieldSpec::build(def, precision, Some(dd))
}

/// ℚ(√D) for squarefree D > 1.
pub fn make_real_quadratic(d_sf: i64, precision: u32) -> Result<Arc<FieldSpec>> {
    if d_sf <= 1 {
        return Err(Error::InvalidInput(format!("{d_sf} must exceed 1")));
    }
    make_quadratic(d_sf, precision)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn cubic_def(sigma: Vec<Vec<i64>>, sig: Signature) -> FieldDefinition {
        FieldDefinition {
            label: "cubic".into(),
            min_poly: ints(&[-1, -4, -1, 1]),
            integral_basis: (0..3)
                .map(|i| (0..3).map(|k| Rational::from(u8::from(i == k))).collect())
                .collect(),
            sigma_on_basis: sigma.into_iter().map(|r| ints(&r)).collect(),
            signature: sig,
            discriminant: Some(Integer::from(169)),
        }
    }

    #[test]
    fn sqrt2_basics() {
        let k = make_real_quadratic(2, 192).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.min_poly(), &ints(&[-2, 0, 1])[..]);
        assert_eq!(*k.discriminant(), 8);
        assert_eq!(k.signature(), Signature { real: 2, complex: 0 });
        assert_eq!(k.integral_basis()[1], vec![Rational::new(), Rational::from(1)]);
    }

    #[test]
    fn sqrt5_uses_half_integral_basis() {
        let k = make_real_quadratic(5, 192).unwrap();
        assert_eq!(*k.discriminant(), 5);
        assert_eq!(
            k.integral_basis()[1],
            vec![Rational::from((1, 2)), Rational::from((1, 2))]
        );
        // ω² = ω + 1
        assert_eq!(k.mult_table()[1][1], ints(&[1, 1]));
    }

    #[test]
    fn non_squarefree_rejected() {
        assert!(matches!(make_real_quadratic(12, 192), Err(Error::InvalidInput(_))));
        assert!(matches!(make_real_quadratic(1, 192), Err(Error::InvalidInput(_))));
        assert!(matches!(make_real_quadratic(-3, 192), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn imaginary_quadratic() {
        let k = make_quadratic(-1, 128).unwrap();
        assert_eq!(k.signature(), Signature { real: 0, complex: 1 });
        assert_eq!(*k.discriminant(), -4);
        let k = make_quadratic(-3, 128).unwrap();
        assert_eq!(*k.discriminant(), -3);
    }

    #[test]
    fn simplest_cubic_verifies() {
        let def = cubic_def(
            vec![vec![1, 0, 0], vec![-2, -2, 1], vec![1, -3, 1]],
            Signature { real: 3, complex: 0 },
        );
        let k = FieldSpec::new(def, 192).unwrap();
        assert_eq!(k.sigma_power(3), k.sigma_power(0));
    }

    #[test]
    fn involution_on_cubic_is_rejected_with_order() {
        // swaps θ and θ²: an order-2 matrix that is not a field automorphism
        let def = cubic_def(
            vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]],
            Signature { real: 3, complex: 0 },
        );
        let err = FieldSpec::new(def, 192).unwrap_err();
        assert_eq!(err.to_string(), "invariant `sigma_order` violated: σ has order 2 ≠ 3");
    }

    #[test]
    fn mixed_signature_rejected() {
        let def = cubic_def(
            vec![vec![1, 0, 0], vec![-2, -2, 1], vec![1, -3, 1]],
            Signature { real: 1, complex: 1 },
        );
        let err = FieldSpec::new(def, 192).unwrap_err();
        assert!(err
            .to_string()
            .contains("cyclic field must be totally real or totally imaginary"));
    }

    #[test]
    fn wrong_discriminant_rejected() {
        let mut def = cubic_def(
            vec![vec![1, 0, 0], vec![-2, -2, 1], vec![1, -3, 1]],
            Signature { real: 3, complex: 0 },
        );
        def.discriminant = Some(Integer::from(49));
        assert!(matches!(
            FieldSpec::new(def, 192),
            Err(Error::Invariant { invariant: "discriminant", .. })
        ));
    }

    #[test]
    fn non_homomorphism_rejected() {
        // θ ↦ θ², θ² ↦ −θ − θ²: order 3, determinant 1, not multiplicative
        let def = cubic_def(
            vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, -1, -1]],
            Signature { real: 3, complex: 0 },
        );
        let err = FieldSpec::new(def, 192).unwrap_err();
        assert!(
            matches!(err, Error::Invariant { invariant: "sigma_homomorphism", .. }),
            "{err}"
        );
    }

    #[test]
    fn reducible_polynomial_rejected() {
        let def = FieldDefinition {
            label: "bad".into(),
            min_poly: ints(&[-1, 0, 1]),
            integral_basis: vec![
                vec![Rational::from(1), Rational::new()],
                vec![Rational::new(), Rational::from(1)],
            ],
            sigma_on_basis: vec![ints(&[1, 0]), ints(&[0, -1])],
            signature: Signature { real: 2, complex: 0 },
            discriminant: None,
        };
        assert!(matches!(
            FieldSpec::new(def, 128),
            Err(Error::Invariant { invariant: "irreducible", .. })
        ));
    }

    #[test]
    fn mult_table_is_associative() {
        for k in [make_real_quadratic(5, 128).unwrap(), make_real_quadratic(2, 128).unwrap()] {
            let t = k.mult_table();
            let d = k.degree();
            let prod = |a: &[Integer], j: usize| -> Vec<Integer> {
                (0..d)
                    .map(|m| (0..d).map(|i| Integer::from(&a[i] * &t[i][j][m])).sum())
                    .collect()
            };
            for i in 0..d {
                for j in 0..d {
                    for l in 0..d {
                        let left = prod(&t[i][j], l);
                        let right = prod(&t[j][l], i);
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }
}
