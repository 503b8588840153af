//! Command-line front end.
//!
//! Eight subcommands map one-to-one onto [`pspin_anneal::config::Command`].
//! Every flag can also live in a JSON config file (`--config`); flags given
//! on the command line override the file. Output is a deterministic CSV (or
//! JSON) artifact whose comment header embeds the fully resolved config, so
//! a data file is always reproducible from its own header.
//!
//! Exit codes: 0 success, 2 invalid configuration or runtime failure,
//! 3 numerical warnings promoted to failure by `--strict`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pspin_anneal::config::{Command, Format, RunConfig};
use pspin_anneal::{runner, Disorder, Error, FieldSchedule, PathSpec, Result};

#[derive(Parser)]
#[command(
    name = "pspin-anneal",
    version,
    about = "Statics of the ferromagnetic p-spin model under inhomogeneous transverse-field driving"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Trace first-order transition lines in the (s, tau) or (s, T) plane
    PhaseDiagram(Flags),
    /// Semiclassical gap components along a path, with optional finite-N gaps
    Gap(Flags),
    /// Fit how the minimum gap scales with system size
    GapScaling(Flags),
    /// Magnetization jumps along traced transition lines
    DeltaM(Flags),
    /// Entanglement entropy of a subsystem cut along a path
    Entropy(Flags),
    /// Classical simulated-annealing baseline with an inhomogeneous stop profile
    Sa(Flags),
    /// Spin-vector Monte Carlo effective potential: transition rows per tau
    Svmc(Flags),
    /// Free-energy landscape f(m) at one fixed drive point
    Landscape(Flags),
}

impl Sub {
    fn split(&self) -> (Command, &Flags) {
        match self {
            Sub::PhaseDiagram(f) => (Command::PhaseDiagram, f),
            Sub::Gap(f) => (Command::Gap, f),
            Sub::GapScaling(f) => (Command::GapScaling, f),
            Sub::DeltaM(f) => (Command::DeltaM, f),
            Sub::Entropy(f) => (Command::Entropy, f),
            Sub::Sa(f) => (Command::Sa, f),
            Sub::Svmc(f) => (Command::Svmc, f),
            Sub::Landscape(f) => (Command::Landscape, f),
        }
    }
}

#[derive(Args)]
struct Flags {
    /// JSON config file mirroring these flags; explicit flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Interaction order of the ferromagnetic coupling (p >= 2)
    #[arg(long)]
    p: Option<u32>,

    /// Annealing parameter s in [0, 1]
    #[arg(long)]
    s: Option<f64>,

    /// Inhomogeneity parameter tau in [0, 1]
    #[arg(long)]
    tau: Option<f64>,

    /// Temperature (0 = ground state); also the top of the swept T range
    /// when a phase-diagram runs in the temperature plane
    #[arg(long)]
    temperature: Option<f64>,

    /// Transverse-field profile: homogeneous | step | step-diagonal:<n> |
    /// residual:<gamma> | slope:<a>
    #[arg(long)]
    schedule: Option<String>,

    /// Path through the (s, tau) plane: tau-eq-s | tau-power:<c> |
    /// ramp:<a> | homogeneous
    #[arg(long)]
    path: Option<String>,

    /// Longitudinal random field: none | bimodal:<h0> | gaussian:<sigma>
    #[arg(long)]
    disorder: Option<String>,

    /// Grid resolution (slow axis for traces, path samples for scans)
    #[arg(long)]
    grid: Option<usize>,

    /// System sizes for exact diagonalization, comma separated (e.g. 8,12,16)
    #[arg(long, value_delimiter = ',', value_name = "N,...")]
    n: Option<Vec<usize>>,

    /// Subsystem fraction for the entanglement cut, in [0, 1]
    #[arg(long)]
    u: Option<f64>,

    /// Final inverse temperature of the simulated-annealing baseline
    #[arg(long)]
    beta0: Option<f64>,

    /// Output file (directories are created); stdout when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format: csv | json
    #[arg(long)]
    format: Option<String>,

    /// Worker threads (0 = rayon default)
    #[arg(long)]
    threads: Option<usize>,

    /// Treat numerical warnings (flagged points, fragmented traces) as failure
    #[arg(long)]
    strict: bool,
}

/// A bare `step-diagonal` only makes sense once a size is known; accept it
/// when exactly one `--n` was given, otherwise ask for the explicit form.
fn resolve_schedule(text: &str, sizes: &[usize]) -> Result<FieldSchedule> {
    if text == "step-diagonal" {
        return match sizes {
            [n] => Ok(FieldSchedule::StepDiagonal { n: *n }),
            _ => Err(Error::Config(
                "step-diagonal needs a size: write step-diagonal:<n>, or pass exactly one --n"
                    .into(),
            )),
        };
    }
    FieldSchedule::try_from(text.to_string())
}

fn parse_format(text: &str) -> Result<Format> {
    match text {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(Error::Config(format!("unknown format `{other}` (expected csv or json)"))),
    }
}

/// Build the effective config: file (if any) as the base, command-line
/// flags layered on top, the subcommand always authoritative.
fn resolve(command: Command, flags: &Flags) -> Result<RunConfig> {
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::new(command),
    };
    cfg.command = command;

    if let Some(p) = flags.p {
        cfg.p = p;
    }
    if let Some(s) = flags.s {
        cfg.s = Some(s);
    }
    if let Some(tau) = flags.tau {
        cfg.tau = Some(tau);
    }
    if let Some(t) = flags.temperature {
        cfg.temperature = t;
    }
    if let Some(n) = &flags.n {
        cfg.n = n.clone();
    }
    if let Some(text) = &flags.schedule {
        cfg.schedule = resolve_schedule(text, &cfg.n)?;
    }
    if let Some(text) = &flags.path {
        cfg.path = Some(PathSpec::try_from(text.clone())?);
    }
    if let Some(text) = &flags.disorder {
        cfg.disorder = Disorder::try_from(text.clone())?;
    }
    if let Some(grid) = flags.grid {
        cfg.grid = Some(grid);
    }
    if let Some(u) = flags.u {
        cfg.u = u;
    }
    if let Some(beta0) = flags.beta0 {
        cfg.beta0 = beta0;
    }
    if let Some(out) = &flags.out {
        cfg.out = Some(out.clone());
    }
    if let Some(text) = &flags.format {
        cfg.format = parse_format(text)?;
    }
    if let Some(threads) = flags.threads {
        cfg.threads = threads;
    }
    if flags.strict {
        cfg.strict = true;
    }
    Ok(cfg)
}

fn try_main() -> Result<u8> {
    let cli = Cli::parse();
    let (command, flags) = cli.command.split();
    let cfg = resolve(command, flags)?;
    let artifact = runner::run(&cfg)?;
    artifact.emit()?;
    if cfg.strict && !artifact.warnings.is_empty() {
        for w in &artifact.warnings {
            eprintln!("warning: {w}");
        }
        eprintln!("error: {} warning(s) promoted to failure by --strict", artifact.warnings.len());
        return Ok(3);
    }
    Ok(0)
}

fn main() -> ExitCode {
    match try_main() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
