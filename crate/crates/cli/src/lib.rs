//! Command-line front end for the rotation-teleportation simulator.
//!
//! Every subcommand produces one JSON [`RunReport`]. Reports carry no
//! timestamps, so the same command, config and seed always print the same
//! bytes.

pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use telerot_core::analysis::{
    average_fidelity, average_fidelity_quadrature, rotation_fidelity, AngleMeasure, PolarMeasure,
};
use telerot_core::parties::{
    full_cooperation, non_cooperation_average, run_secret_sharing, validate_transcript, MessageFamily,
};
use telerot_core::protocol::{enumerate_branches, recovery_plan, run_sampled};
use telerot_core::{AverageSpec, BlochState, PartyId};

pub use config::{ConfigFile, MessageSpec};
pub use report::RunReport;
use report::*;

/// Tolerance for the post-run self-checks.
const CHECK_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for bad input, 2 when the simulation contradicts itself.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }
}

impl From<telerot_core::Error> for CliError {
    fn from(e: telerot_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "telerot", version, about = "Simulate teleportation of a rotation to a remote qubit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every measurement branch with its probability and angle.
    Enumerate(ConfigArgs),
    /// Sample one execution and apply the recovery.
    Run(RunArgs),
    /// Average reconstruction fidelity when φ is unknown.
    FidelitySweep(SweepArgs),
    /// Secret sharing among the receivers, with an optional withholder.
    SecretShare(ShareArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Overrides the config file's seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, conflicts_with = "quadrature")]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact average instead of Monte Carlo.
    #[arg(long)]
    pub quadrature: bool,
    /// Hold the message's azimuthal angle fixed (radians).
    #[arg(long, value_name = "RADIANS", allow_negative_numbers = true)]
    pub fix_varphi: Option<f64>,
    /// Hold the message's polar angle fixed (radians).
    #[arg(long, value_name = "RADIANS", conflicts_with = "haar", allow_negative_numbers = true)]
    pub fix_vartheta: Option<f64>,
    /// Hold the effective rotation angle fixed (radians).
    #[arg(long, value_name = "RADIANS", allow_negative_numbers = true)]
    pub fix_phi: Option<f64>,
    /// Draw messages uniformly over the Bloch sphere instead of uniform polar angle.
    #[arg(long)]
    pub haar: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Fixed,
    Real,
    Uniform,
    SigmaYEigenstates,
}

impl From<FamilyArg> for MessageFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Fixed => MessageFamily::Fixed,
            FamilyArg::Real => MessageFamily::Real,
            FamilyArg::Uniform => MessageFamily::Uniform,
            FamilyArg::SigmaYEigenstates => MessageFamily::SigmaYEigenstates,
        }
    }
}

#[derive(Debug, Args)]
pub struct ShareArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Receiver (0-based) who gets Alice's qubit.
    #[arg(long, default_value_t = 0)]
    pub bob: usize,
    /// Receiver (0-based) who keeps their angle and outcome to themselves.
    #[arg(long)]
    pub withhold: Option<usize>,
    /// Averaging trials for the withholding scenario.
    #[arg(long, requires = "withhold")]
    pub trials: Option<usize>,
    /// Where each averaging trial's message comes from.
    #[arg(long, value_enum, default_value = "fixed", requires = "withhold")]
    pub message_family: FamilyArg,
    /// Overrides the config file's seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_TRIALS: usize = 100_000;

/// Runs one subcommand and returns its report.
pub fn execute(command: &Command) -> Result<RunReport, CliError> {
    match command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Run(a) => cmd_run(a),
        Command::FidelitySweep(a) => cmd_fidelity_sweep(a),
        Command::SecretShare(a) => cmd_secret_share(a),
    }
}

pub fn cmd_enumerate(args: &ConfigArgs) -> Result<RunReport, CliError> {
    let file = ConfigFile::load(&args.config)?;
    let config = file.scenario(None)?;
    let message = config.message();
    let mut branches = Vec::new();
    for b in enumerate_branches(&config)? {
        let plan = recovery_plan(b.phi, b.alice_outcome);
        let fidelity = plan.apply(&b.final_state)?.fidelity_up_to_phase(&message)?;
        check(fidelity, 1.0, "post-recovery fidelity")?;
        branches.push(branch_report(&b, plan.kind, fidelity));
    }
    let total_probability: f64 = branches.iter().map(|b| b.probability).sum();
    check(total_probability, 1.0, "total branch probability")?;
    let body = Body::Enumerate(EnumerateBody {
        branches,
        total_probability,
    });
    Ok(RunReport::new("enumerate", None, Some(&config), body))
}

pub fn cmd_run(args: &RunArgs) -> Result<RunReport, CliError> {
    let file = ConfigFile::load(&args.config)?;
    let config = file.scenario(args.seed)?;
    let message = config.message();
    let b = run_sampled(&config)?;
    let plan = recovery_plan(b.phi, b.alice_outcome);
    let pre = b.final_state.fidelity_up_to_phase(&message)?;
    let post = plan.apply(&b.final_state)?.fidelity_up_to_phase(&message)?;
    check(post, 1.0, "post-recovery fidelity")?;
    let predicted = if b.alice_outcome == 0 {
        let bloch = BlochState::from_amplitudes(config.alpha(), config.beta())?;
        let f = rotation_fidelity(&bloch, b.phi);
        check(pre, f, "pre-recovery fidelity against closed form")?;
        Some(f)
    } else {
        None
    };
    let body = Body::Run(RunBody {
        branch: branch_report(&b, plan.kind, post),
        pre_recovery_fidelity: pre,
        predicted_pre_recovery_fidelity: predicted,
    });
    Ok(RunReport::new("run", Some(config.seed()), Some(&config), body))
}

pub fn sweep_spec(args: &SweepArgs) -> Result<AverageSpec, CliError> {
    if args.haar && args.fix_vartheta.is_some() {
        return Err(CliError::Usage("--haar and --fix-vartheta are mutually exclusive".into()));
    }
    let vartheta = match (args.fix_vartheta, args.haar) {
        (Some(x), _) => PolarMeasure::Fixed(x),
        (None, true) => PolarMeasure::Haar,
        (None, false) => PolarMeasure::Uniform,
    };
    let angle = |v: Option<f64>| v.map_or(AngleMeasure::Uniform, AngleMeasure::Fixed);
    Ok(AverageSpec {
        vartheta,
        varphi: angle(args.fix_varphi),
        phi: angle(args.fix_phi),
    })
}

pub fn cmd_fidelity_sweep(args: &SweepArgs) -> Result<RunReport, CliError> {
    if args.quadrature && args.samples.is_some() {
        return Err(CliError::Usage("--quadrature takes no --samples".into()));
    }
    let spec = sweep_spec(args)?;
    let analytic = average_fidelity_quadrature(&spec)?;
    let (method, statistics, seed) = if args.quadrature {
        (SweepMethod::Quadrature, None, None)
    } else {
        let samples = args.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        let stats = average_fidelity(&spec, samples, args.seed)?;
        (SweepMethod::MonteCarlo, Some(stats), Some(args.seed))
    };
    let body = Body::Sweep(SweepBody {
        average: spec,
        method,
        statistics,
        analytic,
    });
    Ok(RunReport::new("fidelity-sweep", seed, None, body))
}

pub fn cmd_secret_share(args: &ShareArgs) -> Result<RunReport, CliError> {
    let file = ConfigFile::load(&args.config)?;
    let config = file.scenario(args.seed)?;
    let n = config.n();
    for (flag, idx) in [("--bob", Some(args.bob)), ("--withhold", args.withhold)] {
        if let Some(i) = idx.filter(|&i| i >= n) {
            return Err(CliError::Usage(format!("{flag} {i} out of range for {n} receivers")));
        }
    }
    if args.withhold == Some(args.bob) {
        return Err(CliError::Usage(
            "Bob cannot withhold: his angle and outcome never leave him".into(),
        ));
    }
    let cooperating: Vec<PartyId> = full_cooperation(n)
        .into_iter()
        .filter(|p| args.withhold.is_none_or(|w| *p != PartyId::Receiver(w)))
        .collect();
    let transcript = run_secret_sharing(&config, args.bob, &cooperating, config.seed())?;
    let violations = validate_transcript(&transcript);
    if !violations.is_empty() {
        return Err(CliError::Invariant(format!("transcript violations: {violations:?}")));
    }
    let non_cooperation = match args.withhold {
        None => {
            check(transcript.fidelity, 1.0, "full-cooperation fidelity")?;
            None
        }
        Some(w) => {
            let trials = args.trials.unwrap_or(DEFAULT_TRIALS);
            if trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let family = MessageFamily::from(args.message_family);
            let statistics = non_cooperation_average(&config, args.bob, w, trials, config.seed(), family)?;
            Some(NonCooperation {
                withholder: w,
                family,
                trials,
                statistics,
            })
        }
    };
    let body = Body::SecretShare(SecretShareBody {
        transcript,
        violations,
        non_cooperation,
    });
    Ok(RunReport::new("secret-share", Some(config.seed()), Some(&config), body))
}

fn check(got: f64, want: f64, what: &str) -> Result<(), CliError> {
    if (got - want).abs() <= CHECK_TOL {
        Ok(())
    } else {
        Err(CliError::Invariant(format!("{what} is {got}, expected {want}")))
    }
}
