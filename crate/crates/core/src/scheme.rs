//! First-order conservative update with the FORCE-alpha centred flux.
//!
//! `q_i^{n+1} = q_i^n - dt/dx (F_{i+1/2} - F_{i-1/2}) + dt S_i`, where the
//! source `S_i` is either `s(q_i^n)` or read from a frozen space-time field.

use crate::error::{Error, Result};
use crate::grid::{extend_with_ghosts, BoundaryKind, CellField, Grid, SpaceTimeField};
use crate::models::ModelSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    pub cfl: f64,
    pub alpha: f64,
    pub dx: f64,
    pub dt: f64,
}

impl SchemeParams {
    pub fn new(cfl: f64, alpha: f64, dx: f64, dt: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!("cfl {cfl} not in (0, 1]")));
        }
        if !(alpha >= 1.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha {alpha} < 1")));
        }
        if !(dx > 0.0 && dx.is_finite() && dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dx = {dx} and dt = {dt} must be positive and finite"
            )));
        }
        Ok(Self { cfl, alpha, dx, dt })
    }
}

/// Lax-Friedrichs flux with the time step stretched by `alpha`:
/// `(f(qL) + f(qR))/2 - dx/(2 alpha dt) (qR - qL)`.
#[inline]
pub fn lf_alpha_flux(ql: f64, qr: f64, f: impl Fn(f64) -> f64, p: &SchemeParams) -> f64 {
    0.5 * (f(ql) + f(qr)) - p.dx / (2.0 * p.alpha * p.dt) * (qr - ql)
}

/// Two-step Lax-Wendroff flux with the time step stretched by `alpha`.
#[inline]
pub fn lw_alpha_flux(ql: f64, qr: f64, f: impl Fn(f64) -> f64, p: &SchemeParams) -> f64 {
    let q_mid = 0.5 * (ql + qr) - p.alpha * p.dt / (2.0 * p.dx) * (f(qr) - f(ql));
    f(q_mid)
}

/// FORCE-alpha: mean of the alpha-modified LF and LW fluxes. `alpha = 1` is
/// the classic FORCE flux.
#[inline]
pub fn force_alpha_flux(ql: f64, qr: f64, f: impl Fn(f64) -> f64, p: &SchemeParams) -> f64 {
    let (fl, fr) = (f(ql), f(qr));
    let lf = 0.5 * (fl + fr) - p.dx / (2.0 * p.alpha * p.dt) * (qr - ql);
    let q_mid = 0.5 * (ql + qr) - p.alpha * p.dt / (2.0 * p.dx) * (fr - fl);
    0.5 * (lf + f(q_mid))
}

/// `cfl * dx / max_i |lambda(q_i)|`.
pub fn compute_dt(field: &CellField, model: &ModelSpec, cfl: f64, dx: f64) -> Result<f64> {
    let max_speed = field
        .values()
        .iter()
        .fold(0.0_f64, |m, &q| m.max(model.wave_speed(q).abs()));
    if !(max_speed >= 1e-12) {
        return Err(Error::DegenerateSpeed { max_speed });
    }
    Ok(cfl * dx / max_speed)
}

/// The fixed time levels shared by the direct solve and every auxiliary
/// solve of the iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub dt: f64,
    pub n_steps: usize,
    pub cfl: f64,
}

impl TimeGrid {
    pub fn t_final(&self) -> f64 {
        self.dt * self.n_steps as f64
    }

    /// Takes the CFL step of the sampled initial condition, rounds the step
    /// count up and shrinks `dt` so that `n_steps * dt = t_final`.
    pub fn from_initial_condition(
        model: &ModelSpec,
        grid: &Grid,
        cfl: f64,
        t_final: f64,
    ) -> Result<Self> {
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "final time {t_final} must be positive"
            )));
        }
        let q0 = grid.sample(|x| model.initial_condition(x));
        let dt_cfl = compute_dt(&q0, model, cfl, grid.dx())?;
        let n_steps = ((t_final / dt_cfl) - 1e-12).ceil().max(1.0) as usize;
        Ok(Self {
            dt: t_final / n_steps as f64,
            n_steps,
            cfl,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub enum SourceMode<'a> {
    /// `S_i = s(q_i^n)`.
    Direct,
    /// `S_i = s(w(x_i, t^n))` for a stored field `w` on the same mesh.
    Frozen(&'a SpaceTimeField),
}

fn advance(
    prev: &[f64],
    source_values: &[f64],
    model: &ModelSpec,
    p: &SchemeParams,
    bc: BoundaryKind,
    step_index: usize,
) -> Result<CellField> {
    let ext = extend_with_ghosts(prev, bc, 1);
    let f = |q: f64| model.flux(q);
    let faces: Vec<f64> = ext
        .windows(2)
        .map(|w| force_alpha_flux(w[0], w[1], f, p))
        .collect();
    let ratio = p.dt / p.dx;
    let next: Vec<f64> = prev
        .iter()
        .zip(faces.windows(2))
        .zip(source_values)
        .map(|((&q, fw), &s)| q - ratio * (fw[1] - fw[0]) + p.dt * s)
        .collect();
    if next.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonfiniteState { step: step_index });
    }
    Ok(CellField::from_vec_unchecked(next))
}

/// One explicit update of `prev` with the given cell source values.
pub fn step(
    prev: &CellField,
    source_values: &[f64],
    model: &ModelSpec,
    p: &SchemeParams,
    bc: BoundaryKind,
) -> Result<CellField> {
    if source_values.len() != prev.len() {
        return Err(Error::LengthMismatch {
            left: source_values.len(),
            right: prev.len(),
        });
    }
    advance(prev.values(), source_values, model, p, bc, 1)
}

/// March the sampled initial condition through `time.n_steps` steps.
pub fn solve(
    model: &ModelSpec,
    grid: &Grid,
    time: &TimeGrid,
    alpha: f64,
    mode: SourceMode<'_>,
) -> Result<SpaceTimeField> {
    let p = SchemeParams::new(time.cfl, alpha, grid.dx(), time.dt)?;
    if let SourceMode::Frozen(w) = mode {
        if w.n_steps() != time.n_steps || w.n_cells() != grid.len() {
            return Err(Error::MeshMismatch(format!(
                "frozen source has {} steps x {} cells, run has {} x {}",
                w.n_steps(),
                w.n_cells(),
                time.n_steps,
                grid.len()
            )));
        }
        if (w.dt() - time.dt).abs() > 1e-12 * time.dt {
            return Err(Error::MeshMismatch(format!(
                "frozen source dt {} differs from run dt {}",
                w.dt(),
                time.dt
            )));
        }
    }

    let mut levels = Vec::with_capacity(time.n_steps + 1);
    levels.push(grid.sample(|x| model.initial_condition(x)));
    let mut src = vec![0.0; grid.len()];
    for n in 0..time.n_steps {
        let current = &levels[n];
        let state = match mode {
            SourceMode::Direct => current.values(),
            SourceMode::Frozen(w) => w.level(n).values(),
        };
        for (s, &q) in src.iter_mut().zip(state) {
            *s = model.source(q);
        }
        let next = advance(current.values(), &src, model, &p, model.bc, n + 1)?;
        levels.push(next);
    }
    SpaceTimeField::new(levels, time.dt, time.t_final())
}
