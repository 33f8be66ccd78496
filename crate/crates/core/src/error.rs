//! Error type shared by all modules of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// State weights do not sum to one.
    #[error("weights sum to {sum}, not 1 (not a state)")]
    NotAState { sum: f64 },

    /// A state weight is zero or negative, so the state is not faithful.
    #[error("weight {weight} at block {block}, entry {index} is not positive (state not faithful)")]
    NotFaithful {
        block: usize,
        index: usize,
        weight: f64,
    },

    /// `m m*` is not a scalar multiple of the identity within tolerance.
    #[error("state is not a delta-form: relative residual {residual:.3e}")]
    NotDeltaForm { residual: f64 },

    /// Gram matrix is not usable as a positive-definite inner product.
    #[error("Gram matrix is singular or not positive definite")]
    SingularGram,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// One of the quantum-graph axioms fails on an input that must satisfy them.
    #[error("axiom violation in {check}: relative residual {residual:.3e}")]
    AxiomViolation { check: &'static str, residual: f64 },

    /// Componentwise and embedding-form adjacency matrices of a Mycielskian
    /// disagree; signals an implementation bug, never a bad input.
    #[error("Mycielski adjacency cross-check failed: relative residual {residual:.3e}")]
    FormulaMismatch { residual: f64 },

    /// Operation defined only for classical graphs (all blocks of size one,
    /// 0/1 symmetric adjacency with zero diagonal).
    #[error("not a classical graph: {reason}")]
    NotClassical { reason: String },

    #[error("self-loop at vertex {vertex}: classical graphs are irreflexive here")]
    SelfLoop { vertex: usize },

    #[error("graph is not irreflexive: residual {residual:.3e}")]
    NotIrreflexive { residual: f64 },

    #[error("invalid coloring certificate: {reason} (residual {residual:.3e})")]
    InvalidCertificate { reason: String, residual: f64 },

    /// The commutativity hypothesis of the coloring reduction fails.
    #[error("coloring reduction not applicable: components do not commute (residual {residual:.3e})")]
    CommutativityFailure { residual: f64 },

    /// The apex color class has a nonzero last-copy component.
    #[error("apex color class has nonzero second-copy component (residual {residual:.3e})")]
    LemmaViolation { residual: f64 },

    #[error("clique witness vector {index} has GNS norm {norm:.3e}, effectively zero")]
    ZeroVector { index: usize, norm: f64 },

    #[error("map is not an isometry: ||J*J - id|| residual {residual:.3e}")]
    NotIsometry { residual: f64 },

    #[error("auxiliary operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    LambdaNotPsd { min_eigenvalue: f64 },

    /// Motzkin–Straus objective reached one: the cone is mis-specified or the
    /// clique-type parameter is unbounded.
    #[error("Motzkin-Straus value {value} is at least 1 - tol; omega is unbounded on this cone")]
    ValueAtLeastOne { value: f64 },

    /// Exact chromatic numbers violate the Mycielski sandwich bounds;
    /// signals a solver or construction bug.
    #[error("chromatic sandwich violated at r = {r}: chi(G) = {chi_base}, chi(mu) = {chi_mu}")]
    SandwichViolation {
        r: usize,
        chi_base: usize,
        chi_mu: usize,
    },
}
