//! Exact arithmetic invariants over several fields, checked on random
//! integral elements.

use std::sync::Arc;

use normone_core::context::FieldData;
use normone_core::field::FieldSpec;
use normone_core::hilbert90::{pi_map, visible_decompose};
use normone_core::Element;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

fn field(name: &str) -> Arc<FieldSpec> {
    FieldData::parse_and_load(name, 128).unwrap().field
}

fn fields() -> Vec<Arc<FieldSpec>> {
    ["builtin:sqrt2", "builtin:sqrt5", "builtin:sqrt-1", "builtin:sqrt-3", "builtin:cubic13", "builtin:cubic7"]
        .iter()
        .map(|n| field(n))
        .collect()
}

fn element(k: &Arc<FieldSpec>, raw: &[i64]) -> Element {
    Element::from_integers(k, &raw[..k.degree()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_multiplicative(a in prop::collection::vec(-40i64..40, 3), b in prop::collection::vec(-40i64..40, 3)) {
        for k in fields() {
            let (x, y) = (element(&k, &a), element(&k, &b));
            prop_assert_eq!(x.mul(&y).unwrap().norm(), x.norm() * y.norm());
        }
    }

    #[test]
    fn sigma_is_a_ring_automorphism_of_order_d(a in prop::collection::vec(-40i64..40, 3), b in prop::collection::vec(-40i64..40, 3)) {
        for k in fields() {
            let (x, y) = (element(&k, &a), element(&k, &b));
            prop_assert_eq!(x.mul(&y).unwrap().apply_sigma(1), x.apply_sigma(1).mul(&y.apply_sigma(1)).unwrap());
            prop_assert_eq!(x.apply_sigma(k.degree()), x.clone());
            prop_assert_eq!(x.apply_sigma(1).norm(), x.norm());
        }
    }

    #[test]
    fn inverse_and_pi(a in prop::collection::vec(-40i64..40, 3)) {
        for k in fields() {
            let x = element(&k, &a);
            prop_assume!(!x.is_zero());
            prop_assert!(x.mul(&x.inverse().unwrap()).unwrap().is_one());
            let p = pi_map(&x).unwrap();
            prop_assert_eq!(p.norm(), Rational::from(1));
            prop_assert_eq!(p.mul(&x.apply_sigma(1)).unwrap(), x.clone());
        }
    }

    #[test]
    fn decomposition_scales_norm(a in prop::collection::vec(-12i64..12, 3), n in 1i64..9) {
        for k in fields() {
            let x = element(&k, &a);
            prop_assume!(!x.is_zero());
            let g = x.scale(&Rational::from(n));
            let (m, alpha) = visible_decompose(&g).unwrap();
            let (m0, alpha0) = visible_decompose(&x).unwrap();
            prop_assert_eq!(&alpha, &alpha0);
            prop_assert_eq!(m, Integer::from(&m0 * n));
            let d = k.degree() as u32;
            prop_assert_eq!(g.norm().abs(), alpha.norm().abs() * Integer::from(n).pow(d) * m0.pow(d));
            prop_assert_eq!(pi_map(&g).unwrap(), pi_map(&alpha).unwrap());
        }
    }

    #[test]
    fn fast_norm_matches_exact(a in prop::collection::vec(-1_000_000i64..1_000_000, 3)) {
        for k in fields() {
            let coords = &a[..k.degree()];
            let exact = Element::from_integers(&k, coords).unwrap().norm();
            prop_assert_eq!(Rational::from(k.norm_of_integers(coords)), exact);
        }
    }
}

#[test]
fn huge_coordinates_fall_back_to_big_integers() {
    let k = field("builtin:cubic13");
    let c = [i64::MAX / 3, -(i64::MAX / 5), 12345];
    let exact = Element::from_integers(&k, &c).unwrap().norm();
    assert_eq!(Rational::from(k.norm_of_integers(&c)), exact);
}
