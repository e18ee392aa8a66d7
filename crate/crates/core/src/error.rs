use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: [{a}, {b}] with {n_cells} cells (need b > a and at least 2 cells)")]
    InvalidDomain { a: f64, b: f64, n_cells: usize },

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown model `{0}` (expected advection-reaction, burgers or traffic)")]
    UnknownModel(String),

    #[error("degenerate wave speed: max |lambda(q)| = {max_speed:e} is below 1e-12")]
    DegenerateSpeed { max_speed: f64 },

    #[error("non-finite state produced at step {step}")]
    NonfiniteState { step: usize },

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    #[error("iterate is identically zero; cannot form the scaling coefficient")]
    DegenerateNorm,

    #[error("model `{0}` has no closed-form solution")]
    WrongModel(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("direct error is zero; gaining coefficient undefined")]
    ZeroDirectError,

    #[error("no convergence after {iterations} iterations (last change {last_change:e})")]
    NoConvergence { iterations: usize, last_change: f64 },

    #[error("malformed csv at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}
