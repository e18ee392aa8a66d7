//! The scaling-function iteration.
//!
//! Starting from `w^0 = 0` (`v^0 = 0`, `beta_0 = 1`), each pass solves
//! `w_t + f(w)_x = s(w^n)` with the source frozen from the previous iterate,
//! then sets `beta_{n+1} = 1 / ||w^{n+1}||` with the space-time sup norm. The
//! loop stops once `|beta_n - beta_{n+1}| <= tol`.
//!
//! Only the physical iterate `w^n = beta_n v^n` is stored; `beta_n` is kept as
//! a diagnostic.

use crate::error::{Error, Result};
use crate::grid::{CellField, Grid, SpaceTimeField};
use crate::models::{ModelSpec, RunDefaults};
use crate::scheme::{solve, SourceMode, TimeGrid};

/// Max of `|w(x_i, t^m)|` over every time level (the initial one included)
/// and every cell.
pub fn sup_norm(w: &SpaceTimeField) -> f64 {
    w.levels().iter().fold(0.0_f64, |m, l| m.max(l.max_abs()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRow {
    pub n: usize,
    pub beta: f64,
    /// `|beta_{n-1} - beta_n|`; absent on the first row.
    pub change: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub rows: Vec<IterationRow>,
    /// Final-time level of every iterate, in row order.
    pub final_levels: Vec<CellField>,
    pub final_field: SpaceTimeField,
    pub time: TimeGrid,
    pub converged: bool,
    pub iterations_used: usize,
}

impl IterationTrace {
    pub fn last_row(&self) -> &IterationRow {
        self.rows.last().expect("trace has at least one row")
    }

    pub fn final_beta(&self) -> f64 {
        self.last_row().beta
    }

    pub fn ensure_converged(&self) -> Result<&Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                iterations: self.iterations_used,
                last_change: self.last_row().change.unwrap_or(f64::NAN),
            })
        }
    }
}

fn shared_mesh(model: &ModelSpec, cfg: &RunDefaults) -> Result<(Grid, TimeGrid)> {
    cfg.validate()?;
    let (a, b) = model.domain;
    let grid = Grid::new(a, b, cfg.n_cells)?;
    let time = TimeGrid::from_initial_condition(model, &grid, cfg.cfl, cfg.t_final)?;
    Ok((grid, time))
}

/// Runs the iteration on the model's domain with `cfg.n_cells` cells.
pub fn iterate(model: &ModelSpec, cfg: &RunDefaults) -> Result<IterationTrace> {
    iterate_with(model, cfg, |_| {})
}

/// Like [`iterate`], calling `observe` after every completed solve.
pub fn iterate_with(
    model: &ModelSpec,
    cfg: &RunDefaults,
    mut observe: impl FnMut(&IterationRow),
) -> Result<IterationTrace> {
    let (grid, time) = shared_mesh(model, cfg)?;
    let mut previous = SpaceTimeField::zeros(grid.len(), time.n_steps, time.dt);
    let mut beta_prev = 1.0;
    let mut rows = Vec::new();
    let mut final_levels = Vec::new();
    let mut converged = false;

    for n in 1..=cfg.max_iters {
        let w = solve(
            model,
            &grid,
            &time,
            cfg.alpha,
            SourceMode::Frozen(&previous),
        )?;
        let norm = sup_norm(&w);
        if norm == 0.0 {
            return Err(Error::DegenerateNorm);
        }
        let beta = 1.0 / norm;
        let change = (n > 1).then(|| (beta_prev - beta).abs());
        let row = IterationRow { n, beta, change };
        observe(&row);
        rows.push(row);
        final_levels.push(w.final_level().clone());
        previous = w;
        beta_prev = beta;
        if change.is_some_and(|e| e <= cfg.tol) {
            converged = true;
            break;
        }
    }

    Ok(IterationTrace {
        iterations_used: rows.len(),
        rows,
        final_levels,
        final_field: previous,
        time,
        converged,
    })
}

/// The conventional solve with `S_i = s(q_i^n)` on the same mesh that
/// [`iterate`] uses for the same model and settings.
pub fn direct_solution(model: &ModelSpec, cfg: &RunDefaults) -> Result<SpaceTimeField> {
    let (grid, time) = shared_mesh(model, cfg)?;
    solve(model, &grid, &time, cfg.alpha, SourceMode::Direct)
}

/// Grid on which [`iterate`] and [`direct_solution`] work.
pub fn run_grid(model: &ModelSpec, cfg: &RunDefaults) -> Result<Grid> {
    let (a, b) = model.domain;
    Grid::new(a, b, cfg.n_cells)
}
