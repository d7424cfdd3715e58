//! Transfer-efficiency studies: gamma, dipole-ratio and thermal sweeps, and
//! the microscopic-versus-phenomenological comparison.
//!
//! Sweep points are independent jobs fanned out over a rayon pool; results
//! are sorted into canonical (lexicographic) order before they are returned,
//! so identical specs produce byte-identical output files regardless of
//! scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::dissipator::BathModel;
use crate::drive::{PulseSchedule, Sequence};
use crate::error::{Error, Result};
use crate::integrator::{evolve, IntegratorConfig, ModelSpec};
use crate::state::DensityMatrix;

/// Pulse parameters shared by every point of a sweep. The pulse width is
/// the time unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseParams {
    pub omega0: f64,
    pub tau: f64,
    pub delta: f64,
}

impl Default for PulseParams {
    fn default() -> Self {
        Self { omega0: 25.0, tau: 1.5, delta: 1.0 }
    }
}

impl PulseParams {
    pub fn schedule(&self, sequence: Sequence) -> Result<PulseSchedule<f64>> {
        PulseSchedule::new(self.omega0, self.tau, 1.0, self.delta, sequence)
    }
}

/// Which dissipation model a record was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Microscopic,
    Phenomenological,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelKind::Microscopic => write!(f, "microscopic"),
            ModelKind::Phenomenological => write!(f, "phenomenological"),
        }
    }
}

/// Model selection for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Microscopic,
    Phenomenological,
    Both,
}

impl ModelChoice {
    fn kinds(self) -> Vec<ModelKind> {
        match self {
            ModelChoice::Microscopic => vec![ModelKind::Microscopic],
            ModelChoice::Phenomenological => vec![ModelKind::Phenomenological],
            ModelChoice::Both => vec![ModelKind::Microscopic, ModelKind::Phenomenological],
        }
    }
}

/// Full description of a sweep: grids, pulse parameters and integration
/// settings. Named sweeps are just shapes of the grids: a plain gamma sweep
/// uses singleton alpha and occupation grids, and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub sequence: Sequence,
    pub model: ModelChoice,
    pub gamma_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub n_grid: Vec<f64>,
    pub pulses: PulseParams,
    pub integrator: IntegratorConfig<f64>,
    /// Multiplier on every effective step; 0.5 performs a global
    /// step-halving for convergence studies.
    pub step_refine: f64,
}

impl SweepSpec {
    pub fn new(sequence: Sequence, model: ModelChoice, gamma_grid: Vec<f64>) -> Self {
        Self {
            sequence,
            model,
            gamma_grid,
            alpha_grid: vec![1.0],
            n_grid: vec![0.0],
            pulses: PulseParams::default(),
            integrator: IntegratorConfig::default(),
            step_refine: 1.0,
        }
    }

    /// Default logarithmic gamma grid: 40 points across `[1e-2, 1e2]`.
    pub fn default_gamma_grid() -> Vec<f64> {
        log_grid(1e-2, 1e2, 40)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma_grid.is_empty() || self.alpha_grid.is_empty() || self.n_grid.is_empty() {
            return Err(Error::InvalidParameter("sweep grids must be non-empty".into()));
        }
        for (name, grid, lo) in [
            ("gamma", &self.gamma_grid, 0.0),
            ("alpha", &self.alpha_grid, 0.0),
            ("n", &self.n_grid, 0.0),
        ] {
            if grid.iter().any(|v| !v.is_finite() || *v < lo) {
                return Err(Error::InvalidParameter(format!(
                    "{name} grid values must be finite and >= {lo}"
                )));
            }
        }
        if !(self.step_refine.is_finite() && self.step_refine > 0.0) {
            return Err(Error::InvalidParameter("step_refine must be > 0".into()));
        }
        self.integrator.validate()?;
        self.pulses.schedule(self.sequence)?;
        Ok(())
    }
}

/// One sweep result: grid coordinates, the post-pulse target population and
/// worst-case physicality diagnostics over the trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyRecord {
    pub sequence: Sequence,
    pub model: ModelKind,
    pub gamma: f64,
    pub alpha: f64,
    pub n_photons: f64,
    pub p3_final: f64,
    pub trace_err: f64,
    pub min_eig: f64,
}

/// Transfer efficiency: population of the target state `|3>`.
pub fn efficiency(rho_final: &DensityMatrix<f64>) -> Result<f64> {
    rho_final.population(3)
}

/// Log-spaced grid between `min` and `max` inclusive.
pub fn log_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    assert!(min > 0.0 && max >= min && points >= 1);
    if points == 1 {
        return vec![min];
    }
    let (l0, l1) = (min.log10(), max.log10());
    (0..points)
        .map(|k| 10f64.powf(l0 + (l1 - l0) * k as f64 / (points - 1) as f64))
        .collect()
}

/// Linearly spaced grid between `min` and `max` inclusive.
pub fn linear_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    assert!(max >= min && points >= 1);
    if points == 1 {
        return vec![min];
    }
    (0..points)
        .map(|k| min + (max - min) * k as f64 / (points - 1) as f64)
        .collect()
}

fn model_spec(kind: ModelKind, gamma: f64, alpha: f64, n: f64) -> Result<ModelSpec<f64>> {
    match kind {
        ModelKind::Microscopic => Ok(ModelSpec::Microscopic(BathModel::new(gamma, alpha, n)?)),
        // the phenomenological counterpart uses the bare decay rates
        // Gamma_1 = gamma and Gamma_3 = alpha * gamma
        ModelKind::Phenomenological => ModelSpec::phenomenological(gamma, alpha * gamma),
    }
}

/// Bound on the stiffest rate in the generator, used to cap the explicit
/// step for stability.
const STEP_SAFETY: f64 = 0.4;

fn stable_config(
    base: &IntegratorConfig<f64>,
    pulses: &PulseParams,
    model: &ModelSpec<f64>,
    refine: f64,
) -> IntegratorConfig<f64> {
    let lambda = pulses.omega0 + pulses.delta.abs() + model.dissipation_scale();
    let mut cfg = *base;
    cfg.h = base.h.min(STEP_SAFETY / lambda) * refine;
    cfg
}

/// Run a single grid point starting from `|1><1|`.
pub fn run_point(
    sequence: Sequence,
    kind: ModelKind,
    gamma: f64,
    alpha: f64,
    n_photons: f64,
    pulses: &PulseParams,
    integrator: &IntegratorConfig<f64>,
    step_refine: f64,
) -> Result<EfficiencyRecord> {
    let fail = |reason: String| Error::SweepPointFailure {
        sequence: sequence.to_string(),
        model: kind.to_string(),
        gamma,
        alpha,
        n_photons,
        reason,
    };
    let sched = pulses.schedule(sequence).map_err(|e| fail(e.to_string()))?;
    let model = model_spec(kind, gamma, alpha, n_photons).map_err(|e| fail(e.to_string()))?;
    let cfg = stable_config(integrator, pulses, &model, step_refine);
    let rho0 = DensityMatrix::pure(1).expect("valid index");
    let (fin, traj) = evolve(&model, &sched, &rho0, &cfg).map_err(|e| fail(e.to_string()))?;
    Ok(EfficiencyRecord {
        sequence,
        model: kind,
        gamma,
        alpha,
        n_photons,
        p3_final: efficiency(&fin).map_err(|e| fail(e.to_string()))?,
        trace_err: traj.max_trace_error(),
        min_eig: traj.min_eigenvalue(),
    })
}

fn canonical_key(r: &EfficiencyRecord) -> (u8, u8, f64, f64, f64) {
    let seq = match r.sequence {
        Sequence::Counterintuitive => 0,
        Sequence::Intuitive => 1,
    };
    let model = match r.model {
        ModelKind::Microscopic => 0,
        ModelKind::Phenomenological => 1,
    };
    (seq, model, r.gamma, r.alpha, r.n_photons)
}

/// Run every grid point of the spec in parallel and return the records in
/// canonical order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<EfficiencyRecord>> {
    spec.validate()?;
    let mut points: Vec<(ModelKind, f64, f64, f64)> = Vec::new();
    for kind in spec.model.kinds() {
        for &gamma in &spec.gamma_grid {
            for &alpha in &spec.alpha_grid {
                for &n in &spec.n_grid {
                    points.push((kind, gamma, alpha, n));
                }
            }
        }
    }
    let mut records: Vec<EfficiencyRecord> = points
        .par_iter()
        .map(|&(kind, gamma, alpha, n)| {
            run_point(
                spec.sequence,
                kind,
                gamma,
                alpha,
                n,
                &spec.pulses,
                &spec.integrator,
                spec.step_refine,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| {
        canonical_key(a)
            .partial_cmp(&canonical_key(b))
            .expect("finite grid coordinates")
    });
    Ok(records)
}

/// Efficiency versus gamma at fixed dipole ratio and occupation.
pub fn sweep_gamma(spec: &SweepSpec) -> Result<Vec<EfficiencyRecord>> {
    run_sweep(spec)
}

/// Efficiency over the (gamma, alpha) surface.
pub fn sweep_gamma_alpha(spec: &SweepSpec) -> Result<Vec<EfficiencyRecord>> {
    run_sweep(spec)
}

/// Efficiency over the (gamma, occupation) surface.
pub fn sweep_gamma_n(spec: &SweepSpec) -> Result<Vec<EfficiencyRecord>> {
    run_sweep(spec)
}

/// Pointwise microscopic-versus-phenomenological comparison on a gamma grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison {
    pub gamma: Vec<f64>,
    pub microscopic: Vec<f64>,
    pub phenomenological: Vec<f64>,
    /// Largest value of (microscopic - phenomenological).
    pub max_gap: f64,
    /// Smallest value of (microscopic - phenomenological).
    pub min_gap: f64,
    pub max_abs_gap: f64,
    /// First gamma at which the gap changes sign, if it does.
    pub crossover_gamma: Option<f64>,
    #[serde(skip)]
    pub records: Vec<EfficiencyRecord>,
}

/// Run both models over the given gamma grid and summarize the differences.
pub fn compare_models(
    sequence: Sequence,
    gamma_grid: &[f64],
    alpha: f64,
    n_photons: f64,
    pulses: &PulseParams,
    integrator: &IntegratorConfig<f64>,
) -> Result<ModelComparison> {
    if gamma_grid.is_empty() {
        return Err(Error::InvalidParameter("comparison grid is empty".into()));
    }
    let mut spec = SweepSpec::new(sequence, ModelChoice::Both, gamma_grid.to_vec());
    spec.alpha_grid = vec![alpha];
    spec.n_grid = vec![n_photons];
    spec.pulses = *pulses;
    spec.integrator = *integrator;
    let records = run_sweep(&spec)?;
    let micro: Vec<&EfficiencyRecord> =
        records.iter().filter(|r| r.model == ModelKind::Microscopic).collect();
    let phen: Vec<&EfficiencyRecord> =
        records.iter().filter(|r| r.model == ModelKind::Phenomenological).collect();

    let mut gamma = Vec::new();
    let mut p_micro = Vec::new();
    let mut p_phen = Vec::new();
    let mut max_gap = f64::NEG_INFINITY;
    let mut min_gap = f64::INFINITY;
    let mut crossover = None;
    let mut prev_sign: Option<bool> = None;
    for (m, p) in micro.iter().zip(&phen) {
        debug_assert_eq!(m.gamma, p.gamma);
        let gap = m.p3_final - p.p3_final;
        gamma.push(m.gamma);
        p_micro.push(m.p3_final);
        p_phen.push(p.p3_final);
        max_gap = max_gap.max(gap);
        min_gap = min_gap.min(gap);
        if gap != 0.0 {
            let sign = gap > 0.0;
            if let Some(prev) = prev_sign {
                if prev != sign && crossover.is_none() {
                    crossover = Some(m.gamma);
                }
            }
            prev_sign = Some(sign);
        }
    }
    Ok(ModelComparison {
        gamma,
        microscopic: p_micro,
        phenomenological: p_phen,
        max_gap,
        min_gap,
        max_abs_gap: max_gap.abs().max(min_gap.abs()),
        crossover_gamma: crossover,
        records,
    })
}
