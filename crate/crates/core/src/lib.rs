//! Exact arithmetic for plane polynomial maps whose degree decomposition has
//! pairwise-distinct degree sums (a "scattered" degree set).
//!
//! The pipeline: decompose a pair (f, g) into homogeneous components, test the
//! degree set, classify the Jacobian, normalize the linear part, extract the
//! coefficient table that a constant Jacobian forces, check the structure
//! matrix minors, and synthesize the polynomial inverse in closed form. An
//! independent power-series inverter and a seeded map generator live in
//! [`oracle`] so every step can be cross-checked.
//!
//! All coefficients are arbitrary-precision rationals; every announced
//! identity is checked exactly, never numerically.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod inverse;
pub mod jacobian;
pub mod mapform;
pub mod oracle;
pub mod poly;
pub mod structure;

pub use error::{Error, Result};
pub use inverse::{invert_map, verify_inverse, CaseTag, InverseWitness};
pub use jacobian::JacobianReport;
pub use mapform::{DegreeDecomposition, LinearChange, ScatterWitness};
pub use oracle::{generate_map, power_series_inverse, GeneratorCase, GeneratorSpec, SeriesInverseResult};
pub use poly::{BivarPoly, Monomial, Rational};
pub use structure::{CoefficientTable, MinorReport, StructureMatrix};
