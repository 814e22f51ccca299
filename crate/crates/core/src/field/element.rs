use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::embed::MpComplex;
use super::FieldSpec;
use crate::error::{Error, Result};
use crate::linalg;

/// An element of K as exact rational coordinates over the integral basis.
#[derive(Clone)]
pub struct Element {
    field: Arc<FieldSpec>,
    coords: Vec<Rational>,
}

/// Images of an element under the representative embeddings, with an
/// absolute error bound valid for every component.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub values: Vec<MpComplex>,
    pub error: f64,
}

impl Element {
    pub fn new(field: &Arc<FieldSpec>, coords: Vec<Rational>) -> Result<Element> {
        if coords.len() != field.degree() {
            return Err(Error::DimensionMismatch {
                expected: field.degree(),
                got: coords.len(),
            });
        }
        Ok(Element {
            field: Arc::clone(field),
            coords,
        })
    }

    pub fn from_integers(field: &Arc<FieldSpec>, coords: &[i64]) -> Result<Element> {
        Self::new(field, coords.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn from_big_integers(field: &Arc<FieldSpec>, coords: Vec<Integer>) -> Result<Element> {
        Self::new(field, coords.into_iter().map(Rational::from).collect())
    }

    pub fn from_rational(field: &Arc<FieldSpec>, q: Rational) -> Element {
        let mut coords = vec![Rational::new(); field.degree()];
        coords[0] = q;
        Element {
            field: Arc::clone(field),
            coords,
        }
    }

    pub fn one(field: &Arc<FieldSpec>) -> Element {
        Self::from_rational(field, Rational::from(1))
    }

    pub fn zero(field: &Arc<FieldSpec>) -> Element {
        Self::from_rational(field, Rational::new())
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|c| *c == 0)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| *c.denom() == 1)
    }

    /// Integer coordinates, or `None` when the element is not integral.
    pub fn integer_coords(&self) -> Option<Vec<Integer>> {
        self.coords
            .iter()
            .map(|c| (*c.denom() == 1).then(|| c.numer().clone()))
            .collect()
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with_coords(&self, coords: Vec<Rational>) -> Element {
        Element {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(self.with_coords(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| Rational::from(a + b))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(self.with_coords(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| Rational::from(a - b))
                .collect(),
        ))
    }

    pub fn neg(&self) -> Element {
        self.with_coords(self.coords.iter().map(|a| Rational::from(-a)).collect())
    }

    pub fn scale(&self, q: &Rational) -> Element {
        self.with_coords(self.coords.iter().map(|a| Rational::from(a * q)).collect())
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Element) -> Element {
        let d = self.coords.len();
        let t = self.field.mult_table();
        let mut out = vec![Rational::new(); d];
        for (i, a) in self.coords.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if *b == 0 {
                    continue;
                }
                let ab = Rational::from(a * b);
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &t[i][j][k];
                    if *c != 0 {
                        *o += Rational::from(&ab * c);
                    }
                }
            }
        }
        self.with_coords(out)
    }

    /// The unique c with c·b = a.
    pub fn div_exact(&self, b: &Element) -> Result<Element> {
        self.check_same(b)?;
        Ok(self.mul_unchecked(&b.inverse()?))
    }

    /// b⁻¹ = σ(b)σ²(b)⋯σ^{d−1}(b) / N(b), valid because K/ℚ is Galois.
    pub fn inverse(&self) -> Result<Element> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let mut acc = Element::one(&self.field);
        for k in 1..self.field.degree() {
            acc = acc.mul_unchecked(&self.apply_sigma(k));
        }
        Ok(acc.scale(&Rational::from(n.recip_ref())))
    }

    /// Integer power; negative exponents go through [`Element::inverse`].
    pub fn pow(&self, e: i64) -> Result<Element> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Element::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(acc)
    }

    /// σᵏ(a), with k reduced modulo the degree.
    pub fn apply_sigma(&self, k: usize) -> Element {
        let s = self.field.sigma_power(k);
        let d = self.coords.len();
        let coords = (0..d)
            .map(|j| {
                let mut acc = Rational::new();
                for (i, c) in self.coords.iter().enumerate() {
                    if *c != 0 && s[i][j] != 0 {
                        acc += Rational::from(c * &s[i][j]);
                    }
                }
                acc
            })
            .collect();
        self.with_coords(coords)
    }

    /// Exact norm N_{K/ℚ}, as the determinant of multiplication by `self`.
    pub fn norm(&self) -> Rational {
        let den = self
            .coords
            .iter()
            .fold(Integer::from(1), |l, c| l.lcm(c.denom()));
        let scaled: Vec<Integer> = self
            .coords
            .iter()
            .map(|c| Rational::from(c * &den).into_numer_denom().0)
            .collect();
        let det = linalg::det_integer(self.field.multiplication_matrix(&scaled));
        let d = self.field.degree() as u32;
        Rational::from((det, den.pow(d)))
    }

    pub fn trace(&self) -> Rational {
        let t = self.field.mult_table();
        let d = self.coords.len();
        let mut acc = Rational::new();
        for (i, c) in self.coords.iter().enumerate() {
            let tr: Integer = (0..d).map(|j| t[i][j][j].clone()).sum();
            acc += Rational::from(c * &tr);
        }
        acc
    }

    /// Images under the representative embeddings at the field precision.
    ///
    /// The reported bound is 2^(−p/2)·(1 + Σ|cᵢ|)·max(1, |ωᵢ(θ_v)|), which
    /// dominates the root error and the rounding of the evaluation.
    pub fn embed(&self) -> Embedding {
        let p = self.field.precision();
        let mut values = Vec::with_capacity(self.field.places().len());
        let mut scale = 1.0f64;
        let coords: Vec<Float> = self.coords.iter().map(|c| Float::with_val(p, c)).collect();
        for place in self.field.places() {
            let mut v = MpComplex::zero(p);
            for (c, w) in coords.iter().zip(&place.basis_values) {
                if c.is_zero() {
                    continue;
                }
                v.re += Float::with_val(p, c * &w.re);
                v.im += Float::with_val(p, c * &w.im);
                scale = scale.max(w.abs().to_f64());
            }
            values.push(v);
        }
        let l1: f64 = coords.iter().map(|c| c.to_f64().abs()).sum();
        let error = 2f64.powi(-(p as i32) / 2) * (1.0 + l1) * scale;
        Embedding { values, error }
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.coords == other.coords
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

/// Lexicographic order on coordinates (fields are assumed equal).
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{self}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_real_quadratic;

    fn q2() -> Arc<FieldSpec> {
        make_real_quadratic(2, 192).unwrap()
    }

    fn el(k: &Arc<FieldSpec>, c: &[i64]) -> Element {
        Element::from_integers(k, c).unwrap()
    }

    #[test]
    fn sqrt2_products() {
        let k = q2();
        let p = el(&k, &[1, 1]).mul(&el(&k, &[1, -1])).unwrap();
        assert_eq!(p, el(&k, &[-1, 0]));
        let a = el(&k, &[3, 7]);
        assert_eq!(a.mul(&Element::one(&k)).unwrap(), a);
        assert!(a.div_exact(&a).unwrap().is_one());
    }

    #[test]
    fn division_by_zero() {
        let k = q2();
        assert!(matches!(
            el(&k, &[1, 2]).div_exact(&Element::zero(&k)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn mismatched_fields() {
        let k = q2();
        let k3 = make_real_quadratic(3, 192).unwrap();
        assert!(matches!(
            el(&k, &[1, 0]).add(&el(&k3, &[1, 0])),
            Err(Error::FieldMismatch)
        ));
    }

    #[test]
    fn sigma_on_sqrt2() {
        let k = q2();
        assert_eq!(el(&k, &[3, 1]).apply_sigma(1), el(&k, &[3, -1]));
        let a = el(&k, &[5, -2]);
        assert_eq!(a.apply_sigma(2), a);
    }

    #[test]
    fn norms() {
        let k = q2();
        assert_eq!(el(&k, &[3, 2]).norm(), 1);
        assert_eq!(el(&k, &[0, 1]).norm(), -2);
        assert_eq!(el(&k, &[7, 0]).norm(), 49);
        assert_eq!(Element::zero(&k).norm(), 0);
        let half = Element::new(&k, vec![Rational::from((1, 2)), Rational::from((1, 3))]).unwrap();
        // 1/4 − 2/9
        assert_eq!(half.norm(), Rational::from((1, 36)));
    }

    #[test]
    fn embeddings_of_theta() {
        let k = q2();
        let e = el(&k, &[0, 1]).embed();
        assert!((e.values[0].re.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((e.values[1].re.to_f64() + std::f64::consts::SQRT_2).abs() < 1e-15);
        let one = Element::one(&k).embed();
        assert_eq!(one.values[0].re.to_f64(), 1.0);
    }

    #[test]
    fn embedding_product_is_norm() {
        let k = q2();
        let a = el(&k, &[17, -5]);
        let e = a.embed();
        let prod = Float::with_val(192, &e.values[0].re * &e.values[1].re);
        assert!((prod.to_f64() - a.norm().to_f64()).abs() < 10.0 * e.error * 30.0);
    }

    #[test]
    fn powers_and_inverse() {
        let k = q2();
        let eps = el(&k, &[1, 1]);
        assert_eq!(eps.pow(2).unwrap(), el(&k, &[3, 2]));
        assert_eq!(eps.pow(-1).unwrap(), el(&k, &[-1, 1]));
        assert!(eps.pow(0).unwrap().is_one());
    }

    #[test]
    fn integrality() {
        let k = q2();
        assert!(el(&k, &[2, 3]).is_integral());
        let h = Element::new(&k, vec![Rational::from((1, 2)), Rational::new()]).unwrap();
        assert!(!h.is_integral());
        assert!(h.integer_coords().is_none());
    }
}
