//! Built-in consistency checks behind `stirap verify`.
//!
//! Fast versions of the crate's structural guarantees: the closed-form
//! dressed channels against the first-principles spectral pipeline, the
//! conservation properties of both generators, and the dressed-frame
//! identities. Exits nonzero if anything fails.

use std::process::ExitCode;

use stirap_core::dissipator::{
    bohr_degeneracy_threshold, jump_operators, microscopic_generator, rates,
    spectral_decompose, spectral_pipeline_generator, BathModel, DegeneracyPolicy,
};
use stirap_core::drive::{dressed_frame, DressedFrame, PulseSchedule, Sequence};
use stirap_core::integrator::{evolve, IntegratorConfig, ModelSpec};
use stirap_core::mat::{commutator, CMat3};
use stirap_core::state::DensityMatrix;
use stirap_core::testkit::Rng;

struct Suite {
    failures: usize,
}

impl Suite {
    fn check(&mut self, name: &str, pass: bool, detail: String) {
        if pass {
            println!("[PASS] {name}");
        } else {
            self.failures += 1;
            println!("[FAIL] {name}: {detail}");
        }
    }
}

pub fn run() -> ExitCode {
    let mut suite = Suite { failures: 0 };

    let sched =
        PulseSchedule::new(25.0, 1.5, 1.0, 1.0, Sequence::Counterintuitive).expect("schedule");

    // dressed-frame identities
    {
        let mut rng = Rng::new(101);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let t = rng.uniform(-6.0, 6.0);
            let f = dressed_frame(t, &sched).expect("frame");
            let h = stirap_core::drive::hamiltonian(t, &sched);
            worst = worst.max(f.reconstruct_hamiltonian().max_abs_diff(&h));
        }
        suite.check(
            "eigen-decomposition completeness over 100 random times",
            worst < 1e-10,
            format!("worst residual {worst:.3e}"),
        );
    }
    {
        let mut worst = 0.0f64;
        for seq in [Sequence::Counterintuitive, Sequence::Intuitive] {
            let s = PulseSchedule::<f64>::new(25.0, 1.5, 1.0, 1.0, seq).unwrap();
            let mut t = -6.0;
            while t <= 6.0 {
                let x = s.tan_theta_exponent(t);
                let expect = x.exp();
                if expect.is_finite() && expect > 0.0 {
                    let rel = ((s.theta(t).tan() - expect) / expect).abs();
                    worst = worst.max(rel);
                }
                t += 0.05;
            }
        }
        suite.check(
            "log-ratio identity for tan(theta)",
            worst < 1e-12,
            format!("worst relative error {worst:.3e}"),
        );
    }

    // rate structure
    {
        let bath = BathModel::<f64>::new(0.8, 2.5, 3.0).unwrap();
        let r = rates(&bath);
        let ratio = bath.n_photons / (1.0 + bath.n_photons);
        let ok = (r.absorption_a / r.emission_a - ratio).abs() < 1e-15
            && (r.absorption_b / r.emission_b - ratio).abs() < 1e-15;
        suite.check("detailed balance of the rate table", ok, String::new());
    }

    // oracle equivalence: closed-form channels vs spectral pipeline
    {
        let mut rng = Rng::new(2025);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let theta = rng.uniform(0.05, std::f64::consts::FRAC_PI_2 - 0.05);
            let phi = rng.uniform(0.05, std::f64::consts::FRAC_PI_4 - 0.02);
            let delta = 2.0 / (2.0 * phi).tan();
            let frame = DressedFrame::from_parameters(theta, 1.0, delta);
            let bath = BathModel::new(rng.uniform(0.1, 2.0), rng.uniform(0.2, 3.0), rng.uniform(0.0, 2.0)).unwrap();
            let rho = rng.density();
            let terms = jump_operators(frame.theta, frame.phi, &bath).expect("angles");
            let bare: Vec<(CMat3<f64>, f64)> =
                terms.iter().map(|t| (t.to_bare(&frame), t.rate)).collect();
            let h = frame.reconstruct_hamiltonian();
            let closed = stirap_core::dissipator::hamiltonian_flow(&h, &rho)
                + stirap_core::dissipator::lindblad_dissipator(&bare, &rho);
            let pipeline =
                spectral_pipeline_generator(&frame, &bath, &rho, bohr_degeneracy_threshold(1.0))
                    .expect("pipeline");
            worst = worst.max(closed.max_abs_diff(&pipeline));
        }
        suite.check(
            "closed-form jump operators match the spectral pipeline (100 random angles)",
            worst < 1e-10,
            format!("worst deviation {worst:.3e}"),
        );
    }

    // spectral decomposition structural identities
    {
        let mut rng = Rng::new(7);
        let mut worst_sum = 0.0f64;
        let mut worst_comm = 0.0f64;
        for _ in 0..100 {
            let theta = rng.uniform(0.05, std::f64::consts::FRAC_PI_2 - 0.05);
            let phi = rng.uniform(0.05, std::f64::consts::FRAC_PI_4 - 0.02);
            let delta = 2.0 / (2.0 * phi).tan();
            let frame = DressedFrame::from_parameters(theta, 1.0, delta);
            let a = rng.hermitian_unit_trace();
            let comps =
                spectral_decompose(&a, &frame, bohr_degeneracy_threshold(1.0), DegeneracyPolicy::Abort)
                    .expect("decompose");
            let mut total = CMat3::zeros();
            let h = frame.reconstruct_hamiltonian();
            for (w, c) in &comps {
                total = total + *c;
                let lhs = commutator(&h, c);
                worst_comm = worst_comm.max(lhs.max_abs_diff(&c.scale_re(-*w)));
            }
            worst_sum = worst_sum.max(total.max_abs_diff(&a));
        }
        suite.check(
            "spectral components sum back to the operator",
            worst_sum < 1e-12,
            format!("worst completeness defect {worst_sum:.3e}"),
        );
        suite.check(
            "spectral components satisfy the ladder commutator",
            worst_comm < 1e-10,
            format!("worst commutator defect {worst_comm:.3e}"),
        );
    }

    // generator conservation laws
    {
        let bath = BathModel::new(1.1, 1.6, 0.9).unwrap();
        let mut rng = Rng::new(13);
        let mut worst_trace = 0.0f64;
        let mut worst_herm = 0.0f64;
        for _ in 0..500 {
            let t = rng.uniform(-6.0, 6.0);
            let rho = rng.density();
            let g = microscopic_generator(t, &sched, &bath, &rho).expect("generator");
            worst_trace = worst_trace.max(g.trace().re.abs()).max(g.trace().im.abs());
            worst_herm = worst_herm.max(g.herm_defect());
            let p = stirap_core::dissipator::phenomenological_generator(t, &sched, 0.7, 1.3, &rho);
            worst_trace = worst_trace.max(p.trace().re.abs()).max(p.trace().im.abs());
            worst_herm = worst_herm.max(p.herm_defect());
        }
        suite.check(
            "generators are trace-free on random states",
            worst_trace < 1e-12,
            format!("worst trace {worst_trace:.3e}"),
        );
        suite.check(
            "generators preserve Hermiticity on random states",
            worst_herm < 1e-12,
            format!("worst defect {worst_herm:.3e}"),
        );
    }

    // zero-temperature channel reduction
    {
        let bath = BathModel::new(1.4, 0.7, 0.0).unwrap();
        let terms = jump_operators(0.7, 0.5, &bath).expect("angles");
        let active = terms.iter().filter(|t| t.rate > 0.0).count();
        suite.check(
            "five channels survive at zero temperature",
            active == 5,
            format!("{active} active channels"),
        );
    }

    // dressed-basis funneling into the dark state (short horizon)
    {
        let bath = BathModel::new(1.0, 1.0, 0.0).unwrap();
        let terms = jump_operators(std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_6, &bath)
            .expect("angles");
        let all: Vec<(CMat3<f64>, f64)> = terms.iter().map(|t| (t.jump, t.rate)).collect();
        let mut rho = CMat3::diag_real(0.4, 0.1, 0.5);
        let h = 5e-3;
        let mut monotone = true;
        let mut prev = rho.m[1][1].re;
        for _ in 0..(20.0 / h) as usize {
            let k1 = stirap_core::dissipator::lindblad_dissipator(&all, &rho);
            let k2 = stirap_core::dissipator::lindblad_dissipator(&all, &(rho + k1.scale_re(h / 2.0)));
            let k3 = stirap_core::dissipator::lindblad_dissipator(&all, &(rho + k2.scale_re(h / 2.0)));
            let k4 = stirap_core::dissipator::lindblad_dissipator(&all, &(rho + k3.scale_re(h)));
            rho = rho + (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(h / 6.0);
            let p0 = rho.m[1][1].re;
            monotone &= p0 >= prev - 1e-12;
            prev = p0;
        }
        suite.check(
            "zero-temperature flow funnels into the dark state",
            monotone && prev > 1.0 - 1e-3,
            format!("P0(20T) = {prev:.6}, monotone = {monotone}"),
        );
    }

    // propagation sanity: closed-system transfer
    {
        let rho0 = DensityMatrix::pure(1).expect("state");
        let cfg = IntegratorConfig { samples: 40, ..IntegratorConfig::default() };
        let closed = ModelSpec::Microscopic(BathModel::new(0.0, 1.0, 0.0).unwrap());
        let (fin, traj) = evolve(&closed, &sched, &rho0, &cfg).expect("evolve");
        let p3 = fin.population(3).expect("population");
        suite.check(
            "closed-system counterintuitive transfer reaches the target",
            p3 >= 0.99 && traj.max_trace_error() < 1e-8,
            format!("P3 = {p3:.6}"),
        );
    }

    // basis round trip
    {
        let f = dressed_frame(0.3, &sched).expect("frame");
        let rho = DensityMatrix::pure(1).expect("state");
        let back = rho
            .to_dressed(&f)
            .and_then(|d| d.to_bare(&f))
            .expect("round trip");
        let dev = back.matrix().max_abs_diff(rho.matrix());
        suite.check(
            "dressed-basis round trip is the identity",
            dev < 1e-12,
            format!("deviation {dev:.3e}"),
        );
    }

    if suite.failures == 0 {
        println!("all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("{} check(s) failed", suite.failures);
        ExitCode::FAILURE
    }
}
