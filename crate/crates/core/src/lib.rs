// Negated float comparisons are deliberate throughout: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod analytics;
pub mod error;
pub mod hilbert;
pub mod lindblad;
pub mod model;
pub mod observables;
pub mod sweep;

pub use error::{Error, Result};
