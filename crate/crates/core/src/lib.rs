//! Moore-Penrose and group inverses in matrix `*`-rings over exact fields
//! with involution, element classification, and an executable registry of
//! SEP characterizations checked by exhaustive and randomized sweeps.

pub mod classify;
pub mod cli;
pub mod error;
pub mod geninv;
pub mod harness;
pub mod matrix;
pub mod report;
pub mod starfield;
pub mod theorems;

pub use error::{Error, Result};
pub use geninv::InverseBundle;
pub use matrix::Matrix;
pub use starfield::{Field, Scalar};
