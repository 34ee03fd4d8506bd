//! The `tmd` command line.
//!
//! Exit codes: 0 on success, 2 for usage errors (bad flags or ranges,
//! unreadable input), 3 for numeric or degenerate-input failures. Output is
//! rendered in memory first, so a failing command never leaves a partial
//! file behind.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::coherent::CoherentClickModel;
use crate::detection::{self, DetectorModel, Method, OccupancyProfile};
use crate::error::Error;
use crate::fit;
use crate::io::{self, SweepRow};
use crate::montecarlo::{self, CoherentLoss, McConfig, Source, TimingConfig};
use crate::network::{self, NetworkConfig};
use crate::oracle;
use crate::BINS;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tmd", version, about = "Time-multiplexed detector statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Click distribution P(m|n) for an n-photon number state
    Pmn(PmnArgs),
    /// P(n|n) as a function of detector efficiency
    Sweep(SweepArgs),
    /// Binomial click distribution for coherent input
    Coherent(CoherentArgs),
    /// Monte Carlo click histogram
    Mc(McArgs),
    /// Least-squares fit of a click histogram
    Fit(FitArgs),
    /// Mode table of the 23-mode network as JSON
    Layout(LayoutArgs),
}

#[derive(Debug, Args)]
pub struct PmnArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.43)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.97)]
    pub f: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated photon numbers
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub eta_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta_max: f64,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.97)]
    pub f: f64,
    /// Append the lossless closed-form value as `p_analytic`
    #[arg(long)]
    pub with_analytic: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoherentArgs {
    #[arg(long)]
    pub eta_l_mu0: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McMode {
    Fock,
    Coherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossMode {
    Equal,
    PerBin,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, value_enum)]
    pub mode: McMode,
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Photon number (fock mode)
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 0.43)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.97)]
    pub f: f64,
    /// Mean input photon number (coherent mode)
    #[arg(long, conflicts_with = "eta_l_mu0")]
    pub mu0: Option<f64>,
    /// Product eta*l*mu0 (coherent mode); mu0 is derived from it
    #[arg(long)]
    pub eta_l_mu0: Option<f64>,
    /// Average system transmission for equal loss
    #[arg(long, default_value_t = 0.55)]
    pub l: f64,
    #[arg(long, value_enum, default_value_t = LossMode::Equal)]
    pub loss: LossMode,
    /// Filter clicks through the detector dead time
    #[arg(long)]
    pub dead_time: bool,
    #[arg(long, default_value_t = 110.0)]
    pub delta_t: f64,
    #[arg(long, default_value_t = 60.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.05)]
    pub pulse_duration: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Numeric(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ModeOutOfRange { .. }
            | Error::ProbabilityOutOfRange { .. }
            | Error::InvalidParameter(_)
            | Error::Io(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn unit_interval(name: &str, v: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(usage(format!("--{name} must lie in [0, 1], got {v}")))
    }
}

/// A rendered output destined for `--out` or stdout.
struct Output {
    path: Option<PathBuf>,
    bytes: Vec<u8>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let invocation: Vec<String> = std::iter::once("tmd".to_string())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect();
    let header = format!(
        "{} {}: {}",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        invocation.join(" ")
    );

    let result = execute(&cli.command, &header).and_then(|out| match out.path {
        Some(path) => fs::write(&path, &out.bytes)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(&out.bytes)
            .map_err(|e| CliError::Numeric(e.to_string())),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command, header: &str) -> Result<Output, CliError> {
    match command {
        Command::Pmn(a) => cmd_pmn(a, header),
        Command::Sweep(a) => cmd_sweep(a, header),
        Command::Coherent(a) => cmd_coherent(a, header),
        Command::Mc(a) => cmd_mc(a, header),
        Command::Fit(a) => cmd_fit(a),
        Command::Layout(a) => cmd_layout(a),
    }
}

fn cmd_pmn(a: &PmnArgs, header: &str) -> Result<Output, CliError> {
    if a.n > BINS {
        return Err(usage(format!("--n must be in 0..={BINS}, got {}", a.n)));
    }
    unit_interval("eta", a.eta)?;
    unit_interval("f", a.f)?;
    let det = DetectorModel::new(a.eta)?;
    let method = detection::preferred_method(a.n);
    let dist = detection::pmn_with(method, a.n, a.f, &det)?;
    let comments = [header.to_string(), format!("method: {}", method_name(method))];
    let mut bytes = Vec::new();
    io::write_distribution(&mut bytes, &dist, a.n, &comments)?;
    Ok(Output { path: a.out.clone(), bytes })
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::Quantum => "quantum",
        Method::Routing => "routing",
    }
}

/// Efficiency grid from `eta_min` to `eta_max` inclusive.
pub fn eta_grid(eta_min: f64, eta_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![eta_min],
        _ => (0..steps)
            .map(|i| eta_min + (eta_max - eta_min) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

fn cmd_sweep(a: &SweepArgs, header: &str) -> Result<Output, CliError> {
    if a.n_list.is_empty() || a.steps == 0 {
        return Err(usage("empty sweep: need at least one --n-list entry and --steps >= 1"));
    }
    unit_interval("eta-min", a.eta_min)?;
    unit_interval("eta-max", a.eta_max)?;
    unit_interval("f", a.f)?;
    if a.eta_min > a.eta_max {
        return Err(usage("--eta-min exceeds --eta-max"));
    }
    if let Some(n) = a.n_list.iter().find(|&&n| n > BINS) {
        return Err(usage(format!("--n-list entries must be in 0..={BINS}, got {n}")));
    }
    let etas = eta_grid(a.eta_min, a.eta_max, a.steps);
    let layout = network::build_layout();
    let mut rows = Vec::with_capacity(etas.len() * a.n_list.len());
    for &n in &a.n_list {
        let p_of: Box<dyn Fn(f64) -> Result<f64, Error>> = match detection::preferred_method(n) {
            Method::Quantum => {
                let state = network::propagate_with_layout(&layout, &NetworkConfig::new(a.f, n)?)?;
                let profile = OccupancyProfile::from_state(&state, &layout)?;
                Box::new(move |eta| Ok(profile.click_distribution(&DetectorModel::new(eta)?).get(n)))
            }
            Method::Routing => {
                let reach = network::reach_by_mode(a.f)?;
                Box::new(move |eta| {
                    Ok(detection::routing_distribution(n, &reach, &DetectorModel::new(eta)?)?.get(n))
                })
            }
        };
        for &eta in &etas {
            rows.push(SweepRow {
                eta,
                n,
                p_correct: p_of(eta)?,
                p_analytic: a
                    .with_analytic
                    .then(|| oracle::p_all(BINS as u32, n as u32, eta)),
            });
        }
    }
    let mut bytes = Vec::new();
    io::write_sweep(&mut bytes, &rows, &[header.to_string()])?;
    Ok(Output { path: a.out.clone(), bytes })
}

fn cmd_coherent(a: &CoherentArgs, header: &str) -> Result<Output, CliError> {
    if !(a.eta_l_mu0 >= 0.0 && a.eta_l_mu0.is_finite()) {
        return Err(usage(format!("--eta-l-mu0 must be >= 0, got {}", a.eta_l_mu0)));
    }
    let model = CoherentClickModel::from_eta_l_mu0(a.eta_l_mu0)?;
    let comments = [header.to_string(), format!("mu_prime: {}", model.mu_prime())];
    let mut bytes = Vec::new();
    io::write_distribution(&mut bytes, &model.distribution(), BINS, &comments)?;
    Ok(Output { path: a.out.clone(), bytes })
}

fn cmd_mc(a: &McArgs, header: &str) -> Result<Output, CliError> {
    if a.shots == 0 {
        return Err(usage("--shots must be at least 1"));
    }
    unit_interval("eta", a.eta)?;
    let source = match a.mode {
        McMode::Fock => {
            let n = a.n.ok_or_else(|| usage("--n is required with --mode fock"))?;
            unit_interval("f", a.f)?;
            Source::Fock { n, f: a.f, eta: a.eta }
        }
        McMode::Coherent => {
            unit_interval("l", a.l)?;
            let mu0 = match (a.mu0, a.eta_l_mu0) {
                (Some(mu0), None) => mu0,
                (None, Some(product)) => {
                    if a.eta * a.l == 0.0 {
                        return Err(usage("--eta-l-mu0 needs non-zero --eta and --l"));
                    }
                    product / (a.eta * a.l)
                }
                _ => return Err(usage("coherent mode needs --mu0 or --eta-l-mu0")),
            };
            if !(mu0 >= 0.0 && mu0.is_finite()) {
                return Err(usage(format!("mean photon number must be >= 0, got {mu0}")));
            }
            let loss = match a.loss {
                LossMode::Equal => CoherentLoss::Equal { l: a.l },
                LossMode::PerBin => {
                    unit_interval("f", a.f)?;
                    CoherentLoss::PerBin { f: a.f }
                }
            };
            Source::Coherent { mu0, eta: a.eta, loss }
        }
    };
    let timing = if a.dead_time {
        Some(TimingConfig::new(a.delta_t, a.tau, a.pulse_duration)?)
    } else {
        None
    };
    let config = McConfig {
        shots: a.shots,
        seed: a.seed,
        source,
        timing,
    };
    let result = montecarlo::run(&config)?;
    let mut comments = vec![header.to_string(), format!("seed: {}", result.seed_used)];
    if timing.is_some() {
        comments.push(format!("lost_clicks: {}", result.lost_clicks));
    }
    let mut bytes = Vec::new();
    io::write_histogram(&mut bytes, &result.histogram, &comments)?;
    Ok(Output { path: a.out.clone(), bytes })
}

fn cmd_fit(a: &FitArgs) -> Result<Output, CliError> {
    let file = fs::File::open(&a.input)
        .map_err(|e| usage(format!("cannot read {}: {e}", a.input.display())))?;
    let hist = io::read_histogram(file)?;
    let result = fit::fit_histogram(&hist)?;
    let mut bytes = Vec::new();
    io::write_fit(&mut bytes, &result)?;
    Ok(Output { path: a.out.clone(), bytes })
}

fn cmd_layout(a: &LayoutArgs) -> Result<Output, CliError> {
    let mut bytes = network::build_layout().to_json()?.into_bytes();
    bytes.push(b'\n');
    Ok(Output { path: a.out.clone(), bytes })
}
