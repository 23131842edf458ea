use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid size {0} is not a power of two >= 8")]
    InvalidGrid(usize),

    #[error("expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{0} must be a real trace")]
    NotReal(&'static str),

    #[error("point {z} lies outside the admissible disk |z| <= 1 - 2^-40")]
    OutsideDisk { z: Complex64 },

    #[error("point {z} lies outside the mapped domain")]
    OutsideDomain { z: Complex64 },

    #[error("sample {index} has modulus {modulus}, expected 1")]
    NotUnimodular { index: usize, modulus: f64 },

    #[error("sample {0} has zero magnitude")]
    ZeroMagnitude(usize),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("traces live on different grids ({0} vs {1})")]
    GridMismatch(usize, usize),

    #[error("{what} reached {value:.3e}, above the configured bound {bound:.3e}")]
    Overflow { what: &'static str, value: f64, bound: f64 },

    #[error("{what} did not converge after {iterations} iterations (last change {residual:.3e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("correspondence table has {table} nodes, fewer than the {grid}-point grid")]
    CorrespondenceTooCoarse { table: usize, grid: usize },

    #[error("no grid point lies outside the exclusion zones")]
    EmptyAdmittedSet,

    #[error("unknown {kind} '{name}' (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
