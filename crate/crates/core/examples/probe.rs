//! Scratch diagnostics for threshold calibration (not part of the build).

use stirap_core::drive::Sequence;
use stirap_core::experiments::{
    log_grid, run_sweep, ModelChoice, ModelKind, PulseParams, SweepSpec,
};

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "thermal".into());
    match which.as_str() {
        "thermal" => thermal(),
        "ci" => ci_sweep(),
        "in" => in_sweep(),
        _ => eprintln!("unknown probe"),
    }
}

fn thermal() {
    for omega0 in [25.0, 12.5] {
        println!("== intuitive thermal curve at gamma = 1, omega0 = {omega0}");
        let mut spec = SweepSpec::new(Sequence::Intuitive, ModelChoice::Microscopic, vec![1.0]);
        spec.pulses = PulseParams { omega0, tau: 1.5, delta: 1.0 };
        let mut n = vec![0.0];
        n.extend(log_grid(1e-2, 1e3, 26));
        spec.n_grid = n;
        spec.integrator.samples = 60;
        let recs = run_sweep(&spec).unwrap();
        for r in &recs {
            println!("  N = {:9.4}  P3 = {:.5}", r.n_photons, r.p3_final);
        }
    }
}

fn ci_sweep() {
    let mut spec = SweepSpec::new(
        Sequence::Counterintuitive,
        ModelChoice::Both,
        log_grid(1e-2, 1e2, 40),
    );
    spec.integrator.samples = 60;
    let recs = run_sweep(&spec).unwrap();
    let micro: Vec<_> = recs.iter().filter(|r| r.model == ModelKind::Microscopic).collect();
    let phen: Vec<_> = recs.iter().filter(|r| r.model == ModelKind::Phenomenological).collect();
    println!("gamma, micro, phen, gap");
    for (m, p) in micro.iter().zip(&phen) {
        println!(
            "  {:9.4}  {:.5}  {:.5}  {:+.5}",
            m.gamma,
            m.p3_final,
            p.p3_final,
            m.p3_final - p.p3_final
        );
    }
}

fn in_sweep() {
    let mut g = log_grid(1e-2, 2.0, 23);
    g.push(1.0);
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut spec = SweepSpec::new(Sequence::Intuitive, ModelChoice::Both, g);
    spec.integrator.samples = 60;
    let recs = run_sweep(&spec).unwrap();
    let micro: Vec<_> = recs.iter().filter(|r| r.model == ModelKind::Microscopic).collect();
    let phen: Vec<_> = recs.iter().filter(|r| r.model == ModelKind::Phenomenological).collect();
    println!("gamma, micro, phen, |gap|");
    for (m, p) in micro.iter().zip(&phen) {
        println!(
            "  {:9.4}  {:.5}  {:.5}  {:.5}",
            m.gamma,
            m.p3_final,
            p.p3_final,
            (m.p3_final - p.p3_final).abs()
        );
    }
}
