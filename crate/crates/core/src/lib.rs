//! Finite-volume solver for scalar one-dimensional balance laws
//! `q_t + f(q)_x = s(q)`.
//!
//! Two solution paths share one space-time mesh:
//!
//! - the conventional one-step update with the source evaluated on the
//!   current state ([`scheme::solve`] in [`scheme::SourceMode::Direct`]);
//! - the scaling iteration ([`iteration::iterate`]), which repeatedly solves
//!   auxiliary problems whose source is frozen from the previous iterate and
//!   tracks the scaling coefficients `beta_n = 1 / ||w_n||` until they settle.
//!
//! [`reference`] provides fine-mesh MUSCL-Hancock and closed-form reference
//! solutions, and [`report`] turns a run into a convergence table.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod grid;
pub mod iteration;
pub mod models;
pub mod reference;
pub mod report;
pub mod scheme;

pub use error::{Error, Result};
pub use grid::{BoundaryKind, CellField, Grid, SpaceTimeField};
pub use iteration::{direct_solution, iterate, IterationRow, IterationTrace};
pub use models::{ModelSpec, RunDefaults};
pub use report::{ConvergenceRow, ConvergenceTable};
pub use scheme::{SchemeParams, SourceMode, TimeGrid};
