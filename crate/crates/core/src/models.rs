//! The registered balance laws and their default run parameters.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::grid::BoundaryKind;

/// Flux functions with a closed-form derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Flux {
    /// `f(q) = speed * q`
    Linear { speed: f64 },
    /// `f(q) = q^2 / 2`
    Burgers,
    /// `f(q) = q * u_max * (1 - q / q_max)`
    Traffic { u_max: f64, q_max: f64 },
}

impl Flux {
    #[inline]
    pub fn eval(&self, q: f64) -> f64 {
        match *self {
            Flux::Linear { speed } => speed * q,
            Flux::Burgers => 0.5 * q * q,
            Flux::Traffic { u_max, q_max } => q * u_max * (1.0 - q / q_max),
        }
    }

    /// Characteristic speed `f'(q)`.
    #[inline]
    pub fn speed(&self, q: f64) -> f64 {
        match *self {
            Flux::Linear { speed } => speed,
            Flux::Burgers => q,
            Flux::Traffic { u_max, q_max } => u_max * (1.0 - 2.0 * q / q_max),
        }
    }

    /// The sonic point where `f'(q) = 0`, if the flux has one.
    pub fn critical_point(&self) -> Option<f64> {
        match *self {
            Flux::Linear { .. } => None,
            Flux::Burgers => Some(0.0),
            Flux::Traffic { q_max, .. } => Some(0.5 * q_max),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    /// `s(q) = rate * q`
    Linear { rate: f64 },
    /// `s(q) = coeff * q^power`
    Power { coeff: f64, power: i32 },
}

impl Source {
    #[inline]
    pub fn eval(&self, q: f64) -> f64 {
        match *self {
            Source::Linear { rate } => rate * q,
            Source::Power { coeff, power } => coeff * q.powi(power),
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Source::Linear { rate } => rate == 0.0,
            Source::Power { coeff, .. } => coeff == 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// `exp(-sharpness * (x - center)^2)`
    Gaussian { center: f64, sharpness: f64 },
    /// `sin(2 pi x)^4`
    SineFourth,
    /// Smoothed step from `left` to `right` around `center`; `delta` is the
    /// transition width.
    SmoothStep {
        left: f64,
        right: f64,
        center: f64,
        delta: f64,
    },
}

impl InitialCondition {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            InitialCondition::Gaussian { center, sharpness } => {
                (-sharpness * (x - center).powi(2)).exp()
            }
            InitialCondition::SineFourth => (2.0 * PI * x).sin().powi(4),
            InitialCondition::SmoothStep {
                left,
                right,
                center,
                delta,
            } => {
                let y = x - center;
                let c = y / (y * y + delta * delta).sqrt();
                right * (1.0 + c) / 2.0 + left * (1.0 - c) / 2.0
            }
        }
    }
}

/// Default run parameters of a model; every field can be overridden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunDefaults {
    pub n_cells: usize,
    pub cfl: f64,
    pub alpha: f64,
    pub t_final: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub reference_cells: usize,
}

impl RunDefaults {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n_cells < 2 {
            return bad(format!("cells must be at least 2, got {}", self.n_cells));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be >= 1, got {}", self.alpha));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad(format!("final time must be > 0, got {}", self.t_final));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tolerance must be > 0, got {}", self.tol));
        }
        if self.max_iters == 0 {
            return bad("max iterations must be positive".into());
        }
        if self.reference_cells < 2 {
            return bad(format!(
                "reference cells must be at least 2, got {}",
                self.reference_cells
            ));
        }
        Ok(())
    }
}

/// A scalar balance law `q_t + f(q)_x = s(q)` on `[a, b]` with its initial
/// data, boundary treatment and default parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    pub flux: Flux,
    pub source: Source,
    pub initial: InitialCondition,
    pub bc: BoundaryKind,
    pub domain: (f64, f64),
    pub defaults: RunDefaults,
}

impl ModelSpec {
    #[inline]
    pub fn flux(&self, q: f64) -> f64 {
        self.flux.eval(q)
    }

    #[inline]
    pub fn wave_speed(&self, q: f64) -> f64 {
        self.flux.speed(q)
    }

    #[inline]
    pub fn source(&self, q: f64) -> f64 {
        self.source.eval(q)
    }

    pub fn initial_condition(&self, x: f64) -> f64 {
        self.initial.eval(x)
    }

    pub fn has_exact_solution(&self) -> bool {
        matches!(
            (self.flux, self.source, self.bc),
            (
                Flux::Linear { .. },
                Source::Linear { .. },
                BoundaryKind::Periodic
            )
        )
    }

    /// Closed-form solution along characteristics, available for linear flux
    /// with linear source on a periodic domain:
    /// `u0(wrap(x - lambda t)) * exp(r t)`.
    pub fn exact_solution(&self, x: f64, t: f64) -> Option<f64> {
        match (self.flux, self.source, self.bc) {
            (Flux::Linear { speed }, Source::Linear { rate }, BoundaryKind::Periodic) => {
                let (a, b) = self.domain;
                let foot = a + (x - speed * t - a).rem_euclid(b - a);
                Some(self.initial.eval(foot) * (rate * t).exp())
            }
            _ => None,
        }
    }

    /// Same model with its source switched off.
    pub fn without_source(&self) -> Self {
        let source = match self.source {
            Source::Linear { .. } => Source::Linear { rate: 0.0 },
            Source::Power { power, .. } => Source::Power { coeff: 0.0, power },
        };
        Self {
            source,
            ..self.clone()
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub const MODEL_NAMES: [&str; 3] = ["advection-reaction", "burgers", "traffic"];

/// `q_t + (lambda q)_x = r q` with a Gaussian pulse on periodic `[0, 1]`.
pub fn model_advection_reaction(lambda: f64, r: f64) -> ModelSpec {
    ModelSpec {
        name: "advection-reaction".into(),
        flux: Flux::Linear { speed: lambda },
        source: Source::Linear { rate: r },
        initial: InitialCondition::Gaussian {
            center: 0.5,
            sharpness: 100.0,
        },
        bc: BoundaryKind::Periodic,
        domain: (0.0, 1.0),
        defaults: RunDefaults {
            n_cells: 100,
            cfl: 0.18,
            alpha: 5.6,
            t_final: 0.25,
            tol: 1e-7,
            max_iters: 100,
            reference_cells: 1000,
        },
    }
}

/// `q_t + (q^2/2)_x = q^4` with `sin(2 pi x)^4` on periodic `[0, 1]`.
pub fn model_burgers() -> ModelSpec {
    ModelSpec {
        name: "burgers".into(),
        flux: Flux::Burgers,
        source: Source::Power {
            coeff: 1.0,
            power: 4,
        },
        initial: InitialCondition::SineFourth,
        bc: BoundaryKind::Periodic,
        domain: (0.0, 1.0),
        defaults: RunDefaults {
            n_cells: 100,
            cfl: 0.5,
            alpha: 2.55,
            t_final: 0.12,
            tol: 1e-7,
            max_iters: 100,
            reference_cells: 1000,
        },
    }
}

/// LWR traffic flow with source `r q^3`, a jam (2.2) upstream of light
/// traffic (0.2), transmissive boundaries.
pub fn model_traffic(r: f64, u_max: f64, q_max: f64, delta: f64) -> Result<ModelSpec> {
    if !(u_max > 0.0 && q_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "traffic model needs u_max > 0 and q_max > 0, got {u_max}, {q_max}"
        )));
    }
    Ok(ModelSpec {
        name: "traffic".into(),
        flux: Flux::Traffic { u_max, q_max },
        source: Source::Power { coeff: r, power: 3 },
        initial: InitialCondition::SmoothStep {
            left: 2.2,
            right: 0.2,
            center: 0.5,
            delta,
        },
        bc: BoundaryKind::Transmissive,
        domain: (0.0, 1.0),
        defaults: RunDefaults {
            n_cells: 100,
            cfl: 0.5,
            alpha: 2.0,
            t_final: 0.02,
            tol: 1e-7,
            max_iters: 100,
            reference_cells: 1000,
        },
    })
}

/// Looks up a registered model with its default parameters.
pub fn model_by_name(name: &str) -> Result<ModelSpec> {
    match name {
        "advection-reaction" => Ok(model_advection_reaction(1.0, 10.0)),
        "burgers" => Ok(model_burgers()),
        "traffic" => model_traffic(2.0, 3.0, 0.8, 1e-6),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
    Indefinite,
}

/// Sampled check of the structural assumptions behind the convergence
/// theory. Advisory only: nothing in the solver refuses a model that fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisReport {
    pub source_vanishes_at_zero: bool,
    pub lipschitz_estimate: f64,
    pub flux_convexity: Convexity,
    pub flux_origin_conditions: bool,
}

pub fn check_hypotheses(
    model: &ModelSpec,
    q_range: (f64, f64),
    n_samples: usize,
) -> Result<HypothesisReport> {
    let (lo, hi) = q_range;
    if !(hi > lo) || n_samples < 3 {
        return Err(Error::InvalidParameter(format!(
            "need a non-degenerate range and >= 3 samples, got [{lo}, {hi}] with {n_samples}"
        )));
    }
    let h = 1e-5 * (hi - lo).max(1.0);
    let step = (hi - lo) / (n_samples - 1) as f64;
    let samples = (0..n_samples).map(|i| lo + i as f64 * step);

    let mut lipschitz = 0.0_f64;
    let (mut pos, mut neg) = (false, false);
    for q in samples {
        let ds = (model.source(q + h) - model.source(q - h)) / (2.0 * h);
        lipschitz = lipschitz.max(ds.abs());
        let curvature = (model.wave_speed(q + h) - model.wave_speed(q - h)) / (2.0 * h);
        if curvature > 1e-9 {
            pos = true;
        } else if curvature < -1e-9 {
            neg = true;
        }
    }
    let flux_convexity = match (pos, neg) {
        (true, false) => Convexity::Convex,
        (false, true) => Convexity::Concave,
        _ => Convexity::Indefinite,
    };
    Ok(HypothesisReport {
        source_vanishes_at_zero: model.source(0.0).abs() <= 1e-12,
        lipschitz_estimate: lipschitz,
        flux_convexity,
        flux_origin_conditions: model.flux(0.0).abs() <= 1e-12
            && model.wave_speed(0.0).abs() <= 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traffic() -> ModelSpec {
        model_traffic(2.0, 3.0, 0.8, 1e-6).unwrap()
    }

    fn all_models() -> Vec<ModelSpec> {
        MODEL_NAMES
            .iter()
            .map(|n| model_by_name(n).unwrap())
            .collect()
    }

    #[test]
    fn advection_reaction_pieces() {
        let m = model_advection_reaction(1.0, 10.0);
        assert_eq!(m.flux(2.0), 2.0);
        assert_eq!(m.source(0.5), 5.0);
        let exact = m.exact_solution(0.75, 0.25).unwrap();
        assert!((exact - 2.5_f64.exp()).abs() < 1e-12);
        assert!((exact - 12.18249).abs() < 1e-5);
        // wraps across the periodic boundary
        let e = m.exact_solution(0.1, 0.25).unwrap();
        assert!((e - m.initial_condition(0.85) * 2.5_f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn burgers_pieces() {
        let m = model_burgers();
        assert!((m.flux(0.4) - 0.08).abs() < 1e-15);
        assert_eq!(m.source(-1.0), 1.0);
        assert!((m.initial_condition(0.25) - 1.0).abs() < 1e-15);
        assert!(m.exact_solution(0.3, 0.1).is_none());
    }

    #[test]
    fn traffic_pieces() {
        let m = traffic();
        assert!((m.flux(0.4) - 0.6).abs() < 1e-15);
        assert!((m.initial_condition(0.0) - 2.2).abs() < 1e-9);
        assert!((m.initial_condition(1.0) - 0.2).abs() < 1e-9);
        assert_eq!(m.bc, BoundaryKind::Transmissive);
        assert!(model_traffic(2.0, 0.0, 0.8, 1e-6).is_err());
        assert!(model_traffic(2.0, 3.0, -1.0, 1e-6).is_err());
    }

    #[test]
    fn traffic_ic_bounded() {
        let m = traffic();
        for i in 0..=10_000 {
            let x = i as f64 / 10_000.0;
            let q = m.initial_condition(x);
            assert!((0.2 - 1e-9..=2.2 + 1e-9).contains(&q), "q({x}) = {q}");
        }
    }

    #[test]
    fn source_vanishes_at_zero() {
        for m in all_models() {
            assert_eq!(m.source(0.0), 0.0, "{}", m.name);
        }
    }

    #[test]
    fn wave_speed_is_flux_derivative() {
        let h = 1e-5;
        for m in all_models() {
            for i in 0..=600 {
                let q = -3.0 + i as f64 * 0.01;
                let fd = (m.flux(q + h) - m.flux(q - h)) / (2.0 * h);
                assert!((fd - m.wave_speed(q)).abs() <= 1e-6, "{} at {q}", m.name);
            }
        }
    }

    #[test]
    fn exact_solution_at_zero_time_is_ic() {
        let m = model_advection_reaction(1.0, 10.0);
        for i in 0..100 {
            let x = (i as f64 + 0.5) / 100.0;
            let d = m.exact_solution(x, 0.0).unwrap() - m.initial_condition(x);
            assert!(d.abs() <= 1e-15);
        }
    }

    #[test]
    fn defaults_validate() {
        for m in all_models() {
            m.defaults.validate().unwrap();
        }
        let mut d = model_burgers().defaults;
        d.cfl = 5.0;
        assert!(d.validate().is_err());
        d.cfl = 0.5;
        d.alpha = 0.5;
        assert!(d.validate().is_err());
    }

    #[test]
    fn unknown_model() {
        assert!(matches!(
            model_by_name("nosuch"),
            Err(Error::UnknownModel(_))
        ));
    }

    #[test]
    fn hypotheses() {
        let r = check_hypotheses(&model_burgers(), (-2.0, 2.0), 401).unwrap();
        assert_eq!(r.flux_convexity, Convexity::Convex);
        assert!(r.source_vanishes_at_zero);
        assert!(r.flux_origin_conditions);

        let r = check_hypotheses(&traffic(), (0.0, 2.5), 401).unwrap();
        assert_eq!(r.flux_convexity, Convexity::Concave);
        assert!(!r.flux_origin_conditions);

        let r = check_hypotheses(&model_burgers(), (-1.1, 1.1), 401).unwrap();
        assert!((r.lipschitz_estimate - 5.324).abs() < 1e-6);

        let r = check_hypotheses(&model_advection_reaction(1.0, 10.0), (-3.0, 3.0), 11).unwrap();
        assert_eq!(r.flux_convexity, Convexity::Indefinite);
        assert!((r.lipschitz_estimate - 10.0).abs() < 1e-6);

        assert!(check_hypotheses(&model_burgers(), (1.0, 1.0), 10).is_err());
        assert!(check_hypotheses(&model_burgers(), (0.0, 1.0), 2).is_err());
    }
}
