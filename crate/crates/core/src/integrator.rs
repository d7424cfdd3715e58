//! Density-matrix propagation through the pulse sequence.
//!
//! Classical explicit fourth-order stepping with an optional embedded
//! Dormand-Prince 5(4) adaptive mode. The state is re-symmetrized once per
//! step; positivity is monitored at checkpoints and never projected, so an
//! unstable run surfaces as an error instead of silently producing an
//! unphysical state.

use crate::dissipator::{microscopic_generator, phenomenological_generator, BathModel};
use crate::drive::{self, PulseSchedule};
use crate::error::{Error, Result};
use crate::mat::{hermitian_eigenvalues, CMat3};
use crate::scalar::{approx_f64, real, Scalar};
use crate::state::{DensityMatrix, StateBasis};

/// Which master equation drives the evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec<T> {
    Microscopic(BathModel<T>),
    Phenomenological { gamma1: T, gamma3: T },
}

impl<T: Scalar> ModelSpec<T> {
    pub fn phenomenological(gamma1: T, gamma3: T) -> Result<Self> {
        for (name, v) in [("gamma1", gamma1), ("gamma3", gamma3)] {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0"
                )));
            }
        }
        Ok(Self::Phenomenological { gamma1, gamma3 })
    }

    /// Crude upper bound on the dissipative part of the generator's
    /// spectral radius, used to pick stable explicit steps.
    pub fn dissipation_scale(&self) -> T {
        let two = real::<T>(2.0);
        match self {
            ModelSpec::Microscopic(b) => {
                two * b.gamma * (T::one() + b.alpha) * (T::one() + two * b.n_photons)
            }
            ModelSpec::Phenomenological { gamma1, gamma3 } => two * (*gamma1 + *gamma3),
        }
    }
}

/// Right-hand side of the chosen master equation.
pub fn rhs<T: Scalar>(
    model: &ModelSpec<T>,
    sched: &PulseSchedule<T>,
    t: T,
    rho: &CMat3<T>,
) -> Result<CMat3<T>> {
    match model {
        ModelSpec::Microscopic(bath) => microscopic_generator(t, sched, bath, rho),
        ModelSpec::Phenomenological { gamma1, gamma3 } => {
            Ok(phenomenological_generator(t, sched, *gamma1, *gamma3, rho))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMode {
    Fixed,
    Adaptive,
}

/// Integration window, stepping scheme and diagnostics cadence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    pub t_start: T,
    pub t_end: T,
    pub step_mode: StepMode,
    /// Fixed step, or initial step in adaptive mode, units T.
    pub h: T,
    pub rel_tol: T,
    pub abs_tol: T,
    /// Steps between physicality checks.
    pub invariant_check_every: usize,
    /// Number of trajectory samples to record.
    pub samples: usize,
}

impl<T: Scalar> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            t_start: real(-6.0),
            t_end: real(6.0),
            step_mode: StepMode::Fixed,
            h: real(1e-3),
            rel_tol: real(1e-9),
            abs_tol: real(1e-11),
            invariant_check_every: 100,
            samples: 600,
        }
    }
}

impl<T: Scalar> IntegratorConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_start.is_finite() && self.t_end.is_finite()) || self.t_start >= self.t_end {
            return Err(Error::InvalidParameter("need t_start < t_end".into()));
        }
        if !(self.h.is_finite() && self.h > T::zero()) {
            return Err(Error::InvalidParameter("step must be > 0".into()));
        }
        if !(self.rel_tol > T::zero() && self.abs_tol > T::zero()) {
            return Err(Error::InvalidParameter("tolerances must be > 0".into()));
        }
        if self.invariant_check_every == 0 || self.samples < 2 {
            return Err(Error::InvalidParameter(
                "need invariant_check_every >= 1 and samples >= 2".into(),
            ));
        }
        Ok(())
    }

    /// Same window with the step halved and the adaptive tolerances
    /// tightened tenfold, for convergence checks.
    pub fn refined(&self) -> Self {
        let mut c = *self;
        c.h = c.h * real::<T>(0.5);
        c.rel_tol = c.rel_tol * real::<T>(0.1);
        c.abs_tol = c.abs_tol * real::<T>(0.1);
        c
    }
}

/// One recorded trajectory point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample<T> {
    pub time: T,
    /// Bare-basis populations `rho_11, rho_22, rho_33`.
    pub bare: [T; 3],
    /// Dressed populations `P_+, P_0, P_-` at the instantaneous frame.
    pub dressed: [T; 3],
    /// `|tr(rho) - 1|`.
    pub trace_error: T,
    /// Smallest eigenvalue of the (symmetrized) state.
    pub min_eigenvalue: T,
    /// Hermiticity defect of the raw step output, before symmetrization.
    pub herm_defect: T,
}

/// Sampled history of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<T> {
    pub samples: Vec<TrajectorySample<T>>,
}

impl<T: Scalar> TrajectoryRecord<T> {
    pub fn max_trace_error(&self) -> T {
        self.samples
            .iter()
            .fold(T::zero(), |acc, s| acc.max(s.trace_error))
    }

    pub fn min_eigenvalue(&self) -> T {
        self.samples
            .iter()
            .fold(T::infinity(), |acc, s| acc.min(s.min_eigenvalue))
    }

    pub fn max_herm_defect(&self) -> T {
        self.samples
            .iter()
            .fold(T::zero(), |acc, s| acc.max(s.herm_defect))
    }

    pub fn last(&self) -> &TrajectorySample<T> {
        self.samples.last().expect("trajectory always has samples")
    }
}

/// Physicality thresholds beyond which a run is declared failed.
const FAIL_TRACE_TOL: f64 = 1e-6;
const FAIL_EIG_TOL: f64 = -1e-6;

struct Monitor<'a, T: Scalar> {
    sched: &'a PulseSchedule<T>,
    samples: Vec<TrajectorySample<T>>,
}

impl<'a, T: Scalar> Monitor<'a, T> {
    fn new(sched: &'a PulseSchedule<T>, capacity: usize) -> Self {
        Self { sched, samples: Vec::with_capacity(capacity) }
    }

    fn check(&self, t: T, rho: &CMat3<T>) -> Result<()> {
        if !rho.is_finite() {
            return Err(Error::IntegrationFailure {
                t: approx_f64(t),
                reason: "non-finite state".into(),
            });
        }
        let trace_err = (rho.trace().re - T::one()).abs().max(rho.trace().im.abs());
        if trace_err > real::<T>(FAIL_TRACE_TOL) {
            return Err(Error::IntegrationFailure {
                t: approx_f64(t),
                reason: format!("trace error {:.3e}", approx_f64(trace_err)),
            });
        }
        let min_eig = hermitian_eigenvalues(rho)[0];
        if min_eig < real::<T>(FAIL_EIG_TOL) {
            return Err(Error::IntegrationFailure {
                t: approx_f64(t),
                reason: format!("minimum eigenvalue {:.3e}", approx_f64(min_eig)),
            });
        }
        Ok(())
    }

    fn record(&mut self, t: T, rho: &CMat3<T>, raw_defect: T) -> Result<()> {
        let frame = drive::dressed_frame(t, self.sched)?;
        let trace_error = (rho.trace().re - T::one()).abs().max(rho.trace().im.abs());
        self.samples.push(TrajectorySample {
            time: t,
            bare: [rho.m[0][0].re, rho.m[1][1].re, rho.m[2][2].re],
            dressed: drive::dressed_populations(rho, &frame),
            trace_error,
            min_eigenvalue: hermitian_eigenvalues(rho)[0],
            herm_defect: raw_defect,
        });
        Ok(())
    }
}

/// Propagate `rho0` from `t_start` to `t_end` under the chosen model.
///
/// Returns the final state (validated physical) and the sampled trajectory.
/// The default initial state for transfer studies is `|1><1|`.
pub fn evolve<T: Scalar>(
    model: &ModelSpec<T>,
    sched: &PulseSchedule<T>,
    rho0: &DensityMatrix<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<(DensityMatrix<T>, TrajectoryRecord<T>)> {
    cfg.validate()?;
    if rho0.basis() != StateBasis::BareRotating {
        return Err(Error::InvalidParameter(
            "evolve expects a bare-rotating-frame state".into(),
        ));
    }
    let (rho, monitor) = match cfg.step_mode {
        StepMode::Fixed => evolve_fixed(model, sched, rho0, cfg)?,
        StepMode::Adaptive => evolve_adaptive(model, sched, rho0, cfg)?,
    };
    let record = TrajectoryRecord { samples: monitor.samples };
    let final_state =
        DensityMatrix::from_matrix(rho, StateBasis::BareRotating).map_err(|e| {
            Error::IntegrationFailure {
                t: approx_f64(cfg.t_end),
                reason: format!("final state rejected: {e}"),
            }
        })?;
    Ok((final_state, record))
}

fn evolve_fixed<'a, T: Scalar>(
    model: &ModelSpec<T>,
    sched: &'a PulseSchedule<T>,
    rho0: &DensityMatrix<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<(CMat3<T>, Monitor<'a, T>)> {
    let span = cfg.t_end - cfg.t_start;
    let n_steps = (span / cfg.h).ceil().to_usize().unwrap_or(1).max(1);
    let h = span / real::<T>(n_steps as f64);
    let stride = n_steps.div_ceil(cfg.samples - 1).max(1);

    let mut monitor = Monitor::new(sched, cfg.samples + 2);
    let mut rho = *rho0.matrix();
    monitor.record(cfg.t_start, &rho, T::zero())?;

    let half = real::<T>(0.5);
    let sixth = T::one() / real::<T>(6.0);
    let two = real::<T>(2.0);

    for step in 0..n_steps {
        let t = cfg.t_start + h * real::<T>(step as f64);
        let t_mid = t + h * half;
        let t_next = cfg.t_start + h * real::<T>((step + 1) as f64);

        let k1 = rhs(model, sched, t, &rho)?;
        let k2 = rhs(model, sched, t_mid, &(rho + k1.scale_re(h * half)))?;
        let k3 = rhs(model, sched, t_mid, &(rho + k2.scale_re(h * half)))?;
        let k4 = rhs(model, sched, t_next, &(rho + k3.scale_re(h)))?;
        let raw = rho + (k1 + k2.scale_re(two) + k3.scale_re(two) + k4).scale_re(h * sixth);
        let defect = raw.herm_defect();
        rho = raw.hermitized();

        let done = step + 1 == n_steps;
        if (step + 1) % cfg.invariant_check_every == 0 || done {
            monitor.check(t_next, &rho)?;
        }
        if (step + 1) % stride == 0 || done {
            monitor.record(t_next, &rho, defect)?;
        }
    }
    Ok((rho, monitor))
}

// Dormand-Prince 5(4) coefficients.
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn evolve_adaptive<'a, T: Scalar>(
    model: &ModelSpec<T>,
    sched: &'a PulseSchedule<T>,
    rho0: &DensityMatrix<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<(CMat3<T>, Monitor<'a, T>)> {
    let span = cfg.t_end - cfg.t_start;
    let n_intervals = cfg.samples - 1;
    let interval = span / real::<T>(n_intervals as f64);

    let mut monitor = Monitor::new(sched, cfg.samples + 2);
    let mut rho = *rho0.matrix();
    monitor.record(cfg.t_start, &rho, T::zero())?;

    let h_min = span * real::<T>(1e-13);
    let mut h = cfg.h.min(interval);
    let mut accepted: usize = 0;
    let mut last_defect = T::zero();

    for k in 0..n_intervals {
        let t_goal = if k + 1 == n_intervals {
            cfg.t_end
        } else {
            cfg.t_start + interval * real::<T>((k + 1) as f64)
        };
        let mut t = if k == 0 {
            cfg.t_start
        } else {
            cfg.t_start + interval * real::<T>(k as f64)
        };
        while t_goal - t > h_min {
            let h_try = h.min(t_goal - t);
            let (next, err_ratio, defect) = dp_step(model, sched, t, &rho, h_try, cfg)?;
            if err_ratio <= T::one() {
                rho = next;
                t = t + h_try;
                last_defect = defect;
                accepted += 1;
                if accepted % cfg.invariant_check_every == 0 {
                    monitor.check(t, &rho)?;
                }
            } else if h_try <= h_min {
                return Err(Error::IntegrationFailure {
                    t: approx_f64(t),
                    reason: "adaptive step underflow".into(),
                });
            }
            // classic fifth-root controller with clamps
            let order_scale = err_ratio.max(real::<T>(1e-10)).powf(real::<T>(-0.2));
            let factor = (real::<T>(0.9) * order_scale)
                .max(real::<T>(0.2))
                .min(real::<T>(5.0));
            h = (h_try * factor).max(h_min);
        }
        monitor.check(t_goal, &rho)?;
        monitor.record(t_goal, &rho, last_defect)?;
    }
    Ok((rho, monitor))
}

/// One embedded 5(4) trial step; returns (5th-order state symmetrized,
/// error ratio, raw Hermiticity defect).
fn dp_step<T: Scalar>(
    model: &ModelSpec<T>,
    sched: &PulseSchedule<T>,
    t: T,
    rho: &CMat3<T>,
    h: T,
    cfg: &IntegratorConfig<T>,
) -> Result<(CMat3<T>, T, T)> {
    let mut k: [CMat3<T>; 7] = [CMat3::zeros(); 7];
    k[0] = rhs(model, sched, t, rho)?;
    for stage in 1..7 {
        let mut arg = *rho;
        for (j, kj) in k.iter().enumerate().take(stage) {
            let a = DP_A[stage - 1][j];
            if a != 0.0 {
                arg = arg + kj.scale_re(h * real::<T>(a));
            }
        }
        let ts = t + h * real::<T>(DP_C[stage]);
        k[stage] = rhs(model, sched, ts, &arg)?;
    }
    let mut next = *rho;
    let mut err = CMat3::zeros();
    for (j, kj) in k.iter().enumerate() {
        if DP_B5[j] != 0.0 {
            next = next + kj.scale_re(h * real::<T>(DP_B5[j]));
        }
        if DP_ERR[j] != 0.0 {
            err = err + kj.scale_re(h * real::<T>(DP_ERR[j]));
        }
    }
    let scale = cfg.abs_tol + cfg.rel_tol * rho.max_abs().max(next.max_abs());
    let err_ratio = err.max_abs() / scale;
    let defect = next.herm_defect();
    Ok((next.hermitized(), err_ratio, defect))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drive::Sequence;

    fn schedule(seq: Sequence) -> PulseSchedule<f64> {
        PulseSchedule::new(25.0, 1.5, 1.0, 1.0, seq).unwrap()
    }

    fn closed_system() -> ModelSpec<f64> {
        ModelSpec::Microscopic(BathModel::new(0.0, 1.0, 0.0).unwrap())
    }

    #[test]
    fn closed_system_counterintuitive_transfer() {
        let sched = schedule(Sequence::Counterintuitive);
        let rho0 = DensityMatrix::pure(1).unwrap();
        let cfg = IntegratorConfig::default();
        let (fin, traj) = evolve(&closed_system(), &sched, &rho0, &cfg).unwrap();
        assert!(fin.population(3).unwrap() >= 0.99, "P3 = {}", fin.population(3).unwrap());
        assert!(traj.max_trace_error() < 1e-8);
        assert!(traj.min_eigenvalue() > -1e-7);
    }

    #[test]
    fn closed_system_intuitive_transfer() {
        let sched = schedule(Sequence::Intuitive);
        let rho0 = DensityMatrix::pure(1).unwrap();
        let cfg = IntegratorConfig::default();
        let (fin, _) = evolve(&closed_system(), &sched, &rho0, &cfg).unwrap();
        assert!(fin.population(3).unwrap() >= 0.99, "P3 = {}", fin.population(3).unwrap());
    }

    #[test]
    fn no_pulses_initial_state_is_stationary() {
        let sched = PulseSchedule::<f64>::new(0.0, 1.5, 1.0, 1.0, Sequence::Counterintuitive).unwrap();
        let rho0 = DensityMatrix::pure(1).unwrap();
        let cfg = IntegratorConfig { samples: 60, ..IntegratorConfig::default() };
        for model in [
            ModelSpec::Microscopic(BathModel::new(2.0, 1.3, 0.0).unwrap()),
            ModelSpec::phenomenological(2.0, 2.6).unwrap(),
        ] {
            let (fin, _) = evolve(&model, &sched, &rho0, &cfg).unwrap();
            assert!((fin.population(1).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rhs_dispatch_matches_generators() {
        let sched = schedule(Sequence::Counterintuitive);
        let rho = DensityMatrix::pure(2).unwrap();
        let t = 0.2;
        let micro = ModelSpec::Microscopic(BathModel::new(0.0, 1.0, 0.0).unwrap());
        let g = rhs(&micro, &sched, t, rho.matrix()).unwrap();
        let h = drive::hamiltonian(t, &sched);
        let expect = crate::dissipator::hamiltonian_flow(&h, rho.matrix());
        assert!(g.max_abs_diff(&expect) < 1e-15);

        // with the drive off, the phenomenological flow vanishes on |1><1|
        let quiet = PulseSchedule::new(0.0, 1.5, 1.0, 1.0, Sequence::Counterintuitive).unwrap();
        let ground = DensityMatrix::pure(1).unwrap();
        let phen = ModelSpec::phenomenological(1.0, 1.0).unwrap();
        let g = rhs(&phen, &quiet, 1e5, ground.matrix()).unwrap();
        assert!(g.max_abs() < 1e-15);
    }

    #[test]
    fn microscopic_zero_temperature_two_paths_agree() {
        // the finite-temperature generator at N = 0 equals the dedicated
        // zero-temperature channel set, through the full rhs dispatch
        let sched = schedule(Sequence::Intuitive);
        let bath = BathModel::new(1.7, 0.8, 0.0).unwrap();
        let micro = ModelSpec::Microscopic(bath);
        let mut rng = crate::testkit::Rng::new(3);
        for _ in 0..20 {
            let t = rng.uniform(-3.0, 3.0);
            let rho = rng.density();
            let via_rhs = rhs(&micro, &sched, t, &rho).unwrap();
            let frame = drive::dressed_frame(t, &sched).unwrap();
            let terms =
                crate::dissipator::jump_operators(frame.theta, frame.phi, &bath).unwrap();
            let active: Vec<_> = terms
                .iter()
                .filter(|term| term.rate > 0.0)
                .map(|term| (term.to_bare(&frame), term.rate))
                .collect();
            assert_eq!(active.len(), 5);
            let h = drive::hamiltonian(t, &sched);
            let direct = crate::dissipator::hamiltonian_flow(&h, &rho)
                + crate::dissipator::lindblad_dissipator(&active, &rho);
            assert!(via_rhs.max_abs_diff(&direct) < 1e-14);
        }
    }

    #[test]
    fn step_refinement_changes_little() {
        let sched = schedule(Sequence::Counterintuitive);
        let model = ModelSpec::Microscopic(BathModel::new(1.0, 1.0, 0.0).unwrap());
        let rho0 = DensityMatrix::pure(1).unwrap();
        let cfg = IntegratorConfig::default();
        let (a, _) = evolve(&model, &sched, &rho0, &cfg).unwrap();
        let (b, _) = evolve(&model, &sched, &rho0, &cfg.refined()).unwrap();
        let d = (a.population(3).unwrap() - b.population(3).unwrap()).abs();
        assert!(d < 1e-6, "step halving moved P3 by {d:.3e}");
    }

    #[test]
    fn adaptive_matches_fixed() {
        let sched = schedule(Sequence::Counterintuitive);
        let model = ModelSpec::Microscopic(BathModel::new(0.5, 1.0, 0.0).unwrap());
        let rho0 = DensityMatrix::pure(1).unwrap();
        let fixed = IntegratorConfig::default();
        let adaptive = IntegratorConfig { step_mode: StepMode::Adaptive, ..fixed };
        let (a, _) = evolve(&model, &sched, &rho0, &fixed).unwrap();
        let (b, _) = evolve(&model, &sched, &rho0, &adaptive).unwrap();
        assert!((a.population(3).unwrap() - b.population(3).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn unstable_step_fails_loudly() {
        let sched = schedule(Sequence::Counterintuitive);
        let model = ModelSpec::Microscopic(BathModel::new(100.0, 1.0, 0.0).unwrap());
        let rho0 = DensityMatrix::pure(1).unwrap();
        let cfg = IntegratorConfig { h: 0.5, ..IntegratorConfig::default() };
        let res = evolve(&model, &sched, &rho0, &cfg);
        assert!(matches!(res, Err(Error::IntegrationFailure { .. })));
    }

    #[test]
    fn config_validation() {
        let mut cfg = IntegratorConfig::<f64>::default();
        cfg.t_end = cfg.t_start;
        assert!(cfg.validate().is_err());
        let cfg = IntegratorConfig { h: 0.0, ..IntegratorConfig::<f64>::default() };
        assert!(cfg.validate().is_err());
        let cfg = IntegratorConfig { samples: 1, ..IntegratorConfig::<f64>::default() };
        assert!(cfg.validate().is_err());
    }
}
