//! Large-N Schwinger-Dyson saddles of the dissipative bosonic SYK model.
#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons reject NaN

pub mod action;
pub mod error;
pub mod mat2;
pub mod model;
pub mod observables;
pub mod registry;
pub mod solver;
pub mod sweep;
pub mod symmetry;
pub mod timegrid;

pub use error::{Error, Result};
