//! Reference solutions: second-order MUSCL-Hancock on a fine mesh, and the
//! closed form for linear advection-reaction.

use crate::error::{Error, Result};
use crate::grid::{extend_with_ghosts, sample_at_centers, CellField, Grid};
use crate::models::{Flux, ModelSpec, RunDefaults};
use crate::scheme::compute_dt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limiter {
    Minmod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceConfig {
    pub n_cells: usize,
    pub cfl: f64,
    pub limiter: Limiter,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        Self {
            n_cells: 1000,
            cfl: 0.9,
            limiter: Limiter::Minmod,
        }
    }
}

impl ReferenceConfig {
    pub fn with_cells(n_cells: usize) -> Self {
        Self {
            n_cells,
            ..Self::default()
        }
    }
}

/// Exact Riemann flux for a scalar law: the minimum of `f` over `[qL, qR]`
/// when `qL <= qR`, otherwise the maximum over `[qR, qL]`.
///
/// The registered fluxes have at most one critical point, so the extremum is
/// either an endpoint or that point.
pub fn godunov_scalar_flux(ql: f64, qr: f64, flux: &Flux) -> f64 {
    let (fl, fr) = (flux.eval(ql), flux.eval(qr));
    let (lo, hi) = if ql <= qr { (ql, qr) } else { (qr, ql) };
    let interior = flux
        .critical_point()
        .filter(|&c| lo < c && c < hi)
        .map(|c| flux.eval(c));
    if ql <= qr {
        interior.map_or(fl.min(fr), |fc| fl.min(fr).min(fc))
    } else {
        interior.map_or(fl.max(fr), |fc| fl.max(fr).max(fc))
    }
}

#[inline]
fn minmod(a: f64, b: f64) -> f64 {
    if a * b > 0.0 {
        a.signum() * a.abs().min(b.abs())
    } else {
        0.0
    }
}

/// Second-order MUSCL-Hancock solve of the full balance law on
/// `rc.n_cells` cells of the model's domain, to exactly `t_final`.
///
/// Limited slopes give boundary-extrapolated values, which are evolved half
/// a step with the flux difference and half the source. Godunov fluxes at the
/// evolved face values then update the cell, with the source evaluated at the
/// half-step cell value.
pub fn muscl_hancock_solve(
    model: &ModelSpec,
    rc: &ReferenceConfig,
    t_final: f64,
) -> Result<CellField> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "final time {t_final} must be positive"
        )));
    }
    if !(rc.cfl > 0.0 && rc.cfl <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "reference cfl {} not in (0, 1]",
            rc.cfl
        )));
    }
    let (a, b) = model.domain;
    let grid = Grid::new(a, b, rc.n_cells)?;
    let dx = grid.dx();
    let n = grid.len();
    let mut q = grid.sample(|x| model.initial_condition(x));

    let mut t = 0.0;
    let mut step = 0;
    // per extended cell 1..=n+2: left/right evolved face values and half-step centre
    let mut minus = vec![0.0; n + 2];
    let mut plus = vec![0.0; n + 2];
    let mut half = vec![0.0; n + 2];
    let mut faces = vec![0.0; n + 1];
    while t < t_final * (1.0 - 1e-14) {
        step += 1;
        let mut dt = match compute_dt(&q, model, rc.cfl, dx) {
            Ok(dt) => dt,
            // a state with no wave speed is stationary apart from the source
            Err(Error::DegenerateSpeed { .. }) => t_final - t,
            Err(e) => return Err(e),
        };
        if t + dt > t_final {
            dt = t_final - t;
        }
        let ext = extend_with_ghosts(q.values(), model.bc, 2);
        for j in 0..n + 2 {
            let (l, c, r) = (ext[j], ext[j + 1], ext[j + 2]);
            let slope = match rc.limiter {
                Limiter::Minmod => minmod(c - l, r - c),
            };
            let (qm, qp) = (c - 0.5 * slope, c + 0.5 * slope);
            let shift =
                -0.5 * dt / dx * (model.flux(qp) - model.flux(qm)) + 0.5 * dt * model.source(c);
            minus[j] = qm + shift;
            plus[j] = qp + shift;
            half[j] = c + shift;
        }
        for (i, face) in faces.iter_mut().enumerate() {
            *face = godunov_scalar_flux(plus[i], minus[i + 1], &model.flux);
        }
        let ratio = dt / dx;
        let next: Vec<f64> = (0..n)
            .map(|i| q[i] - ratio * (faces[i + 1] - faces[i]) + dt * model.source(half[i + 1]))
            .collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonfiniteState { step });
        }
        q = CellField::new(next)?;
        t += dt;
    }
    Ok(q)
}

/// Closed-form advection-reaction solution sampled at the cell centres.
pub fn exact_advection_reaction(model: &ModelSpec, grid: &Grid, t: f64) -> Result<CellField> {
    if !model.has_exact_solution() {
        return Err(Error::WrongModel(model.name.clone()));
    }
    let values = grid
        .centers()
        .iter()
        .map(|&x| model.exact_solution(x, t).expect("checked above"))
        .collect();
    CellField::new(values)
}

/// The reference profile at `cfg.t_final` on `grid`: the exact solution when
/// the model has one, otherwise a MUSCL-Hancock solve on
/// `cfg.reference_cells` cells interpolated to the centres of `grid`.
pub fn reference_on(model: &ModelSpec, grid: &Grid, cfg: &RunDefaults) -> Result<CellField> {
    if model.has_exact_solution() {
        return exact_advection_reaction(model, grid, cfg.t_final);
    }
    let rc = ReferenceConfig::with_cells(cfg.reference_cells);
    let fine = muscl_hancock_solve(model, &rc, cfg.t_final)?;
    let fine_grid = Grid::new(grid.a(), grid.b(), rc.n_cells)?;
    sample_at_centers(&fine, &fine_grid, grid)
}
