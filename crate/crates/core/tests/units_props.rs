//! Unit reduction and torus coordinates under random unit multiples.

use normone_core::context::FieldData;
use normone_core::units::UnitSystem;
use normone_core::Element;
use proptest::prelude::*;

const FIELDS: [&str; 6] = [
    "builtin:sqrt2",
    "builtin:sqrt3",
    "builtin:sqrt5",
    "builtin:sqrt-1",
    "builtin:sqrt-3",
    "builtin:cubic13",
];

fn load(name: &str) -> FieldData {
    FieldData::parse_and_load(name, 192).unwrap()
}

fn random_unit(us: &UnitSystem, root: u32, exps: &[i64]) -> Element {
    let field = us.field();
    let mut u = us.root_of_unity().pow(root as i64).unwrap();
    for (base, &e) in us.fundamental_units().iter().zip(exps) {
        u = u.mul(&base.pow(e).unwrap()).unwrap();
    }
    assert!(u.norm() == 1 || u.norm() == -1, "not a unit in {}", field.label());
    u
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_form_is_a_class_invariant(
        a in prop::collection::vec(-25i64..25, 3),
        exps in prop::collection::vec(-4i64..4, 2),
        root in 0u32..6,
    ) {
        for name in FIELDS {
            let fd = load(name);
            let us = fd.units().unwrap();
            let alpha = Element::from_integers(us.field(), &a[..us.field().degree()]).unwrap();
            prop_assume!(!alpha.is_zero());
            let u = random_unit(us, root, &exps);
            let r1 = us.unit_reduce(&alpha).unwrap();
            let r2 = us.unit_reduce(&u.mul(&alpha).unwrap()).unwrap();
            prop_assert_eq!(&r1.reduced, &r2.reduced);
            // idempotent, and the reduced element stays in the orbit
            let again = us.unit_reduce(&r1.reduced).unwrap();
            prop_assert_eq!(&again.reduced, &r1.reduced);
            prop_assert!(again.exponents.iter().all(|&e| e == 0));
            prop_assert_eq!(r1.reduced.norm().abs(), alpha.norm().abs());
            let quotient = r1.reduced.div_exact(&alpha).unwrap();
            prop_assert!(quotient.is_integral());
            prop_assert!(quotient.norm() == 1 || quotient.norm() == -1);
        }
    }

    #[test]
    fn torus_point_of_pi_is_unit_invariant(
        a in prop::collection::vec(-25i64..25, 3),
        exps in prop::collection::vec(-5i64..5, 2),
    ) {
        for name in FIELDS {
            let fd = load(name);
            let us = fd.units().unwrap();
            let alpha = Element::from_integers(us.field(), &a[..us.field().degree()]).unwrap();
            prop_assume!(!alpha.is_zero());
            let u = random_unit(us, 1, &exps);
            let t1 = us.torus_point_of_pi(&alpha).unwrap();
            let t2 = us.torus_point_of_pi(&u.mul(&alpha).unwrap()).unwrap();
            prop_assert!(wrap_gap(&t1.coords, &t2.coords) <= 1e-12);
            prop_assert!(t1.coords.iter().all(|&t| (0.0..1.0).contains(&t)));
            // the two routes to the torus point agree
            let via_pi = us.torus_coordinates(&normone_core::hilbert90::pi_map(&alpha).unwrap()).unwrap();
            prop_assert!(wrap_gap(&t1.coords, &via_pi.coords) <= 1e-12);
        }
    }
}

#[test]
fn lattice_points_map_to_the_origin() {
    for name in FIELDS {
        let fd = load(name);
        let us = fd.units().unwrap();
        for exps in [[1i64, 0], [0, 1], [3, -2], [-5, 4]] {
            let u = random_unit(us, 1, &exps);
            let t = us.torus_coordinates(&u).unwrap();
            assert!(t.coords.iter().all(|&c| c.min(1.0 - c) < 1e-30), "{name}: {:?}", t.coords);
        }
    }
}

#[test]
fn precision_floor_is_enforced() {
    assert!(FieldData::parse_and_load("builtin:sqrt2", 32).is_err());
    let fd = FieldData::parse_and_load("builtin:sqrt2", 64).unwrap();
    assert_eq!(fd.field.precision(), 64);
}
