//! `stirap` — population-transfer studies in a lossy three-level system.

mod config;
mod gnuplot;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stirap_core::drive::Sequence;
use stirap_core::experiments::{
    self, compare_models, ModelChoice, ModelKind, PulseParams, SweepSpec,
};
use stirap_core::integrator::{evolve, IntegratorConfig, StepMode};
use stirap_core::io::{self, OutputFormat};
use stirap_core::state::DensityMatrix;
use stirap_core::Error;

#[derive(Parser)]
#[command(
    name = "stirap",
    version,
    about = "Simulate STIRAP / b-STIRAP transfer in a three-level lambda system \
             under microscopic (dressed-state) or phenomenological dissipation",
    after_help = "Units: the pulse width T is the time unit; rates and frequencies \
                  are in 1/T, delays in T."
)]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true, env = "STIRAP_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a single evolution and write the sampled trajectory.
    Simulate(SimulateArgs),
    /// Efficiency versus gamma at fixed alpha and N.
    SweepGamma(SweepGammaArgs),
    /// Efficiency over the (gamma, alpha) surface.
    SweepGammaAlpha(SweepGammaAlphaArgs),
    /// Efficiency over the (gamma, N) surface.
    SweepGammaN(SweepGammaNArgs),
    /// Run both models on a gamma grid and summarize the differences.
    Compare(CompareArgs),
    /// Run the built-in consistency checks; nonzero exit on failure.
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum SequenceArg {
    /// Stokes before pump (STIRAP, dark-state transfer).
    #[value(alias = "ci")]
    Counterintuitive,
    /// Pump before Stokes (b-STIRAP, bright-state transfer).
    #[value(alias = "in")]
    Intuitive,
}

impl From<SequenceArg> for Sequence {
    fn from(s: SequenceArg) -> Self {
        match s {
            SequenceArg::Counterintuitive => Sequence::Counterintuitive,
            SequenceArg::Intuitive => Sequence::Intuitive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    #[value(alias = "micro")]
    Microscopic,
    #[value(alias = "phen")]
    Phenomenological,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct PulseArgs {
    /// Peak Rabi parameter, units 1/T.
    #[arg(long, default_value_t = 25.0)]
    omega0: f64,
    /// Pulse delay, units T.
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    tau: f64,
    /// Single-photon detuning, units 1/T.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
}

impl From<PulseArgs> for PulseParams {
    fn from(p: PulseArgs) -> Self {
        PulseParams { omega0: p.omega0, tau: p.tau, delta: p.delta }
    }
}

#[derive(Args, Clone, Copy)]
struct IntegrationArgs {
    /// Start of the integration window, units T.
    #[arg(long, default_value_t = -6.0, allow_negative_numbers = true)]
    t_start: f64,
    /// End of the integration window, units T.
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    t_end: f64,
    /// Fixed step (or initial step when adaptive), units T.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Use the embedded adaptive scheme instead of fixed stepping.
    #[arg(long)]
    adaptive: bool,
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-11)]
    abs_tol: f64,
    /// Trajectory samples per run.
    #[arg(long, default_value_t = 600)]
    samples: usize,
}

impl From<IntegrationArgs> for IntegratorConfig<f64> {
    fn from(a: IntegrationArgs) -> Self {
        IntegratorConfig {
            t_start: a.t_start,
            t_end: a.t_end,
            step_mode: if a.adaptive { StepMode::Adaptive } else { StepMode::Fixed },
            h: a.step,
            rel_tol: a.rel_tol,
            abs_tol: a.abs_tol,
            samples: a.samples,
            ..IntegratorConfig::default()
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    sequence: SequenceArg,
    #[arg(long, value_enum, default_value = "microscopic")]
    model: ModelArg,
    /// Base decay rate Gamma, units 1/T.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Dipole ratio alpha (channel b carries alpha * gamma).
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Mean photon occupation N of the bath.
    #[arg(long, default_value_t = 0.0)]
    n_photons: f64,
    /// Override Gamma_1 of the phenomenological model (default: gamma).
    #[arg(long)]
    gamma1: Option<f64>,
    /// Override Gamma_3 of the phenomenological model (default: alpha * gamma).
    #[arg(long)]
    gamma3: Option<f64>,
    #[command(flatten)]
    pulses: PulseArgs,
    #[command(flatten)]
    integration: IntegrationArgs,
    #[arg(long, short, default_value = "trajectory.csv")]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct GridArgs {
    /// Smallest gamma of the log grid, units 1/T.
    #[arg(long, default_value_t = 1e-2)]
    gamma_min: f64,
    /// Largest gamma of the log grid, units 1/T.
    #[arg(long, default_value_t = 1e2)]
    gamma_max: f64,
    /// Number of log-spaced gamma points.
    #[arg(long, default_value_t = 40)]
    gamma_points: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<Vec<f64>, Error> {
        if !(self.gamma_min > 0.0 && self.gamma_max >= self.gamma_min && self.gamma_points >= 1) {
            return Err(Error::InvalidParameter(
                "need 0 < gamma-min <= gamma-max and gamma-points >= 1".into(),
            ));
        }
        Ok(experiments::log_grid(self.gamma_min, self.gamma_max, self.gamma_points))
    }
}

#[derive(Args)]
struct SweepGammaArgs {
    #[arg(long, value_enum)]
    sequence: SequenceArg,
    #[arg(long, value_enum, default_value = "microscopic")]
    model: ModelArg,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    n_photons: f64,
    #[command(flatten)]
    pulses: PulseArgs,
    #[command(flatten)]
    integration: IntegrationArgs,
    #[arg(long, short, default_value = "sweep_gamma.csv")]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    gnuplot_script: bool,
}

#[derive(Args)]
struct SweepGammaAlphaArgs {
    #[arg(long, value_enum)]
    sequence: SequenceArg,
    #[arg(long, value_enum, default_value = "microscopic")]
    model: ModelArg,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 0.2)]
    alpha_min: f64,
    #[arg(long, default_value_t = 5.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 20)]
    alpha_points: usize,
    #[arg(long, default_value_t = 0.0)]
    n_photons: f64,
    #[command(flatten)]
    pulses: PulseArgs,
    #[command(flatten)]
    integration: IntegrationArgs,
    #[arg(long, short, default_value = "sweep_gamma_alpha.csv")]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    gnuplot_script: bool,
}

#[derive(Args)]
struct SweepGammaNArgs {
    #[arg(long, value_enum)]
    sequence: SequenceArg,
    #[arg(long, value_enum, default_value = "microscopic")]
    model: ModelArg,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1e-2)]
    n_min: f64,
    #[arg(long, default_value_t = 1e3)]
    n_max: f64,
    #[arg(long, default_value_t = 26)]
    n_points: usize,
    /// Prepend N = 0 (exact zero temperature) to the occupation grid.
    #[arg(long, default_value_t = true)]
    include_n_zero: bool,
    #[command(flatten)]
    pulses: PulseArgs,
    #[command(flatten)]
    integration: IntegrationArgs,
    #[arg(long, short, default_value = "sweep_gamma_n.csv")]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    gnuplot_script: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, value_enum)]
    sequence: SequenceArg,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    n_photons: f64,
    #[command(flatten)]
    pulses: PulseArgs,
    #[command(flatten)]
    integration: IntegrationArgs,
    #[arg(long, short, default_value = "compare.csv")]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    gnuplot_script: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be >= 1");
            return ExitCode::from(2);
        }
        // ignore the error if a pool already exists (e.g. under tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let outcome = match cli.cmd {
        Cmd::Simulate(args) => run_simulate(args),
        Cmd::SweepGamma(args) => run_sweep_gamma(args),
        Cmd::SweepGammaAlpha(args) => run_sweep_gamma_alpha(args),
        Cmd::SweepGammaN(args) => run_sweep_gamma_n(args),
        Cmd::Compare(args) => run_compare(args),
        Cmd::Verify => return verify::run(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Argument/validation problems exit 2; numerical failures exit 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) | Error::IndexOutOfRange(_) | Error::AnglesUndefined => 2,
        _ => 1,
    }
}

fn run_simulate(args: SimulateArgs) -> Result<(), Error> {
    let sequence: Sequence = args.sequence.into();
    let pulses: PulseParams = args.pulses.into();
    let cfg: IntegratorConfig<f64> = args.integration.into();
    let model = config::validated_model(
        args.model.into_choice_single()?,
        args.gamma,
        args.alpha,
        args.n_photons,
        args.gamma1,
        args.gamma3,
    )?;
    let sched = pulses.schedule(sequence)?;
    cfg.validate()?;
    let rho0 = DensityMatrix::pure(1)?;
    let (fin, traj) = evolve(&model, &sched, &rho0, &cfg)?;
    io::write_trajectory(&traj, args.format.into(), &args.output)?;
    println!(
        "final populations: rho11 = {:.6}, rho22 = {:.6}, rho33 = {:.6}  ({} samples -> {})",
        fin.population(1)?,
        fin.population(2)?,
        fin.population(3)?,
        traj.samples.len(),
        args.output.display()
    );
    Ok(())
}

impl ModelArg {
    fn into_choice(self) -> ModelChoice {
        match self {
            ModelArg::Microscopic => ModelChoice::Microscopic,
            ModelArg::Phenomenological => ModelChoice::Phenomenological,
            ModelArg::Both => ModelChoice::Both,
        }
    }

    fn into_choice_single(self) -> Result<ModelKind, Error> {
        match self {
            ModelArg::Microscopic => Ok(ModelKind::Microscopic),
            ModelArg::Phenomenological => Ok(ModelKind::Phenomenological),
            ModelArg::Both => Err(Error::InvalidParameter(
                "simulate runs one model; pick microscopic or phenomenological".into(),
            )),
        }
    }
}

fn run_sweep_gamma(args: SweepGammaArgs) -> Result<(), Error> {
    let mut spec = SweepSpec::new(args.sequence.into(), args.model.into_choice(), args.grid.grid()?);
    spec.alpha_grid = vec![args.alpha];
    spec.n_grid = vec![args.n_photons];
    spec.pulses = args.pulses.into();
    spec.integrator = args.integration.into();
    let records = experiments::sweep_gamma(&spec)?;
    io::write_records(&records, args.format.into(), &args.output)?;
    println!("wrote {} records to {}", records.len(), args.output.display());
    if args.gnuplot_script {
        let script = gnuplot::gamma_sweep_script(&args.output);
        gnuplot::write_next_to(&args.output, &script)?;
    }
    Ok(())
}

fn run_sweep_gamma_alpha(args: SweepGammaAlphaArgs) -> Result<(), Error> {
    if !(args.alpha_min > 0.0 && args.alpha_max >= args.alpha_min && args.alpha_points >= 1) {
        return Err(Error::InvalidParameter(
            "need 0 < alpha-min <= alpha-max and alpha-points >= 1".into(),
        ));
    }
    let mut spec = SweepSpec::new(args.sequence.into(), args.model.into_choice(), args.grid.grid()?);
    spec.alpha_grid = experiments::linear_grid(args.alpha_min, args.alpha_max, args.alpha_points);
    spec.n_grid = vec![args.n_photons];
    spec.pulses = args.pulses.into();
    spec.integrator = args.integration.into();
    let records = experiments::sweep_gamma_alpha(&spec)?;
    io::write_records(&records, args.format.into(), &args.output)?;
    println!("wrote {} records to {}", records.len(), args.output.display());
    if args.gnuplot_script {
        let script = gnuplot::surface_script(&args.output, "alpha", 4);
        gnuplot::write_next_to(&args.output, &script)?;
    }
    Ok(())
}

fn run_sweep_gamma_n(args: SweepGammaNArgs) -> Result<(), Error> {
    if !(args.n_min > 0.0 && args.n_max >= args.n_min && args.n_points >= 1) {
        return Err(Error::InvalidParameter(
            "need 0 < n-min <= n-max and n-points >= 1".into(),
        ));
    }
    let mut spec = SweepSpec::new(args.sequence.into(), args.model.into_choice(), args.grid.grid()?);
    spec.alpha_grid = vec![args.alpha];
    let mut n_grid = Vec::new();
    if args.include_n_zero {
        n_grid.push(0.0);
    }
    n_grid.extend(experiments::log_grid(args.n_min, args.n_max, args.n_points));
    spec.n_grid = n_grid;
    spec.pulses = args.pulses.into();
    spec.integrator = args.integration.into();
    let records = experiments::sweep_gamma_n(&spec)?;
    io::write_records(&records, args.format.into(), &args.output)?;
    println!("wrote {} records to {}", records.len(), args.output.display());
    if args.gnuplot_script {
        let script = gnuplot::surface_script(&args.output, "N", 5);
        gnuplot::write_next_to(&args.output, &script)?;
    }
    Ok(())
}

fn run_compare(args: CompareArgs) -> Result<(), Error> {
    let cfg: IntegratorConfig<f64> = args.integration.into();
    let cmp = compare_models(
        args.sequence.into(),
        &args.grid.grid()?,
        args.alpha,
        args.n_photons,
        &args.pulses.into(),
        &cfg,
    )?;
    io::write_records(&cmp.records, args.format.into(), &args.output)?;
    println!("wrote {} records to {}", cmp.records.len(), args.output.display());
    println!(
        "gap (microscopic - phenomenological): max = {:+.6}, min = {:+.6}, max |gap| = {:.6}",
        cmp.max_gap, cmp.min_gap, cmp.max_abs_gap
    );
    match cmp.crossover_gamma {
        Some(g) => println!("gap changes sign near gamma = {g:.6}"),
        None => println!("gap never changes sign on the grid"),
    }
    if args.gnuplot_script {
        let script = gnuplot::gamma_sweep_script(&args.output);
        gnuplot::write_next_to(&args.output, &script)?;
    }
    Ok(())
}
