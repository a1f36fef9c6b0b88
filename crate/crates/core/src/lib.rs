//! Exact Lie superalgebras of super vector fields on Grassmann and
//! truncated jet models.

pub mod automorphism;
pub mod cli;
pub mod error;
pub mod lie_model;
pub mod linalg;
pub mod monomial;
pub mod rational;
pub mod report;
pub mod sample;
pub mod spec;
pub mod suites;
pub mod superfunction;
pub mod vector_field;

pub use error::{Error, Result};
