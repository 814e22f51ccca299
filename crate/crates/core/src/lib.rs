//! Norm-one elements of cyclic number fields, their Hilbert-90 parameters,
//! and equidistribution statistics on the unit torus.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod acceptance;
pub mod config;
pub mod context;
pub mod error;
pub mod export;
pub mod field;
pub mod hilbert90;
pub mod linalg;
pub mod lseries;
pub mod torus;
pub mod units;

pub use error::{Error, Result};
pub use field::{Element, FieldSpec};
