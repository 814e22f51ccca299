//! Loading field configs from disk and rejecting malformed ones.

use std::path::PathBuf;

use normone_core::context::FieldData;
use normone_core::Error;

const CUBIC7: &str = include_str!("../configs/cubic7.toml");

fn write(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn load(name: &str, text: &str) -> normone_core::Result<FieldData> {
    let p = write(name, text);
    FieldData::parse_and_load(p.to_str().unwrap(), 192)
}

fn invariant(r: normone_core::Result<FieldData>) -> &'static str {
    match r {
        Err(Error::Invariant { invariant, .. }) => invariant,
        other => panic!("expected an invariant violation, got {:?}", other.map(|_| ())),
    }
}

#[test]
fn path_config_matches_builtin() {
    let from_file = load("cubic7.toml", CUBIC7).unwrap();
    let builtin = FieldData::parse_and_load("builtin:cubic7", 192).unwrap();
    let (a, b) = (from_file.units().unwrap(), builtin.units().unwrap());
    assert_eq!(a.regulator(), b.regulator());
    assert!((a.regulator() - 0.525454682122572).abs() < 1e-12);
}

#[test]
fn config_without_units_loads_field_only() {
    let text = CUBIC7.replace("fundamental_units = [[0, 1, 0], [1, 1, 0]]\n", "");
    let fd = load("no_units.toml", &text).unwrap();
    assert!(!fd.has_units());
    assert!(matches!(fd.units(), Err(Error::MissingUnits)));
}

#[test]
fn invariant_violations_are_named() {
    // σ = identity has order 1, not 3.
    let text = CUBIC7.replace(
        "sigma_on_basis = [[1, 0, 0], [-2, 0, 1], [3, -1, -1]]",
        "sigma_on_basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]",
    );
    assert_eq!(invariant(load("sigma_id.toml", &text)), "sigma_order");

    let text = CUBIC7.replace("signature = [3, 0]", "signature = [1, 1]");
    assert_eq!(invariant(load("signature.toml", &text)), "signature");

    let text = CUBIC7.replace("discriminant = 49", "discriminant = 50");
    assert_eq!(invariant(load("disc.toml", &text)), "discriminant");

    let text = CUBIC7.replace("[[0, 1, 0], [1, 1, 0]]", "[[0, 1, 0], [3, 1, 0]]");
    assert_eq!(invariant(load("unit_norm.toml", &text)), "unit_norm");

    let text = CUBIC7.replace("[[0, 1, 0], [1, 1, 0]]", "[[0, 1, 0]]");
    assert_eq!(invariant(load("unit_count.toml", &text)), "unit_count");

    let text = CUBIC7.replace("roots_of_unity = 2", "roots_of_unity = 4");
    assert_eq!(invariant(load("w.toml", &text)), "roots_of_unity");
}

#[test]
fn schema_errors() {
    let text = CUBIC7.replace("min_poly = [-1, -2, 1, 1]", "min_poly = [-1, -2, 1]");
    assert!(matches!(load("short_poly.toml", &text), Err(Error::Schema(_))));
    let text = CUBIC7.replace("degree = 3\n", "");
    assert!(matches!(load("no_degree.toml", &text), Err(Error::Schema(_))));
    assert!(matches!(load("garbage.toml", "this is = = not toml"), Err(Error::Schema(_))));
}

#[test]
fn missing_file_names_the_path() {
    let err = FieldData::parse_and_load("/nonexistent/field.toml", 192).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/field.toml"), "{err}");
}
