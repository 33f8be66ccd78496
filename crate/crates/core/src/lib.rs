//! Quantum graphs over finite quantum spaces and their Mycielski transformations.
//!
//! A quantum graph is a triple of a finite quantum space (a direct sum of
//! matrix blocks), a faithful δ-form state and a quantum adjacency operator
//! on the GNS space. This crate materializes those objects as dense complex
//! matrices, verifies the defining axioms numerically, constructs generalized
//! Mycielski transformations together with their embedding isometries, and
//! provides verifiers (and, for classical graphs, exact solvers) for the
//! coloring and clique parameters attached to them.

pub mod chromatic;
pub mod clique;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod mycielski;
pub mod qgraph;
pub mod qspace;

pub use error::{Error, Result};

/// Complex scalar used throughout; all file formats carry `[re, im]` pairs.
pub type C64 = num_complex::Complex64;

/// Default relative tolerance (Frobenius-norm relative error) for all checks.
pub const DEFAULT_TOL: f64 = 1e-9;
