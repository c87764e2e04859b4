//! `hh`: batch harness for the exact identity suites and the kinetic experiments.
//!
//! Exit codes: 0 when every check passes, 1 on an identity violation, 2 on a configuration
//! error, 3 when a computation fails after validation.

mod checks;
mod config;
mod experiments;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Compute(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "hh", version, about = "Exact hierarchy identity suites and kinetic experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration: `key = value` lines or a flat JSON object.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for all random draws; overrides the `seed` key of the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Arithmetic of the run; each subcommand supports exactly one mode.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Antisymmetry, bilinearity, Jacobi, filtration, composition and injectivity suites.
    AlgebraCheck,
    /// Poisson-morphism residuals and Hamiltonian pullback identities.
    MorphismCheck,
    /// Velocity-Verlet trajectory as CSV.
    Nbody,
    /// Semi-Lagrangian Vlasov run; CSV of moments per stored step.
    Vlasov1d,
    /// Particle-versus-grid mean-field table as CSV.
    Meanfield,
    /// Coefficient gaps between the N-particle and unbounded brackets as CSV.
    Limits,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::AlgebraCheck => "algebra-check",
            Command::MorphismCheck => "morphism-check",
            Command::Nbody => "nbody",
            Command::Vlasov1d => "vlasov1d",
            Command::Meanfield => "meanfield",
            Command::Limits => "limits",
        }
    }

    fn mode(self) -> Mode {
        match self {
            Command::AlgebraCheck | Command::MorphismCheck | Command::Limits => Mode::Exact,
            Command::Nbody | Command::Vlasov1d | Command::Meanfield => Mode::Float,
        }
    }
}

enum Outcome {
    Pass(String),
    Violation(String),
}

fn load_config(cli: &Cli) -> Result<(RunConfig, u64), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.set("seed", seed.to_string());
    }
    let seed = cfg.get("seed", 1u64)?;
    let mode = cli.mode.unwrap_or(cli.command.mode());
    if mode != cli.command.mode() {
        return Err(CliError::Config(format!(
            "{} runs in {} mode only",
            cli.command.name(),
            cli.command.mode().name()
        )));
    }
    Ok((cfg, seed))
}

fn report(command: Command, seed: u64, r: checks::SuiteReport) -> Outcome {
    let pass = r.counterexample.is_none();
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command.name(),
        "mode": "exact",
        "seed": seed,
        "status": if pass { "pass" } else { "violation" },
        "counts": Value::Object(r.counts),
    });
    if let Some(c) = r.counterexample {
        v["counterexample"] = c;
    }
    let text = serde_json::to_string_pretty(&v).expect("report serializes") + "\n";
    if pass {
        Outcome::Pass(text)
    } else {
        Outcome::Violation(text)
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let (cfg, seed) = load_config(cli)?;
    Ok(match cli.command {
        Command::AlgebraCheck => {
            let settings = checks::AlgebraSettings::from_config(&cfg)?;
            report(cli.command, seed, checks::algebra_check(&settings, seed)?)
        }
        Command::MorphismCheck => {
            let settings = checks::MorphismSettings::from_config(&cfg)?;
            report(cli.command, seed, checks::morphism_check(&settings, seed)?)
        }
        Command::Nbody => {
            let settings = experiments::NbodySettings::from_config(&cfg)?;
            Outcome::Pass(experiments::nbody(&settings, seed)?)
        }
        Command::Vlasov1d => {
            let settings = experiments::VlasovSettings::from_config(&cfg)?;
            let (csv, warnings) = experiments::vlasov1d(&settings)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            Outcome::Pass(csv)
        }
        Command::Meanfield => {
            let settings = experiments::MeanFieldSettings::from_config(&cfg)?;
            let table = experiments::meanfield(&settings, seed)?;
            for w in &table.warnings {
                eprintln!("warning: {w}");
            }
            if !table.grid_valid {
                eprintln!("warning: grid reference flagged invalid");
            }
            eprint!("{}", experiments::meanfield_summary(&table, settings.n_list()));
            Outcome::Pass(table.to_csv())
        }
        Command::Limits => {
            let settings = experiments::LimitsSettings::from_config(&cfg)?;
            Outcome::Pass(experiments::limits(&settings, seed)?)
        }
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| match outcome {
        Outcome::Pass(text) => emit(&cli.out, &text).map(|_| 0),
        Outcome::Violation(text) => {
            eprint!("{text}");
            emit(&cli.out, &text).map(|_| 1)
        }
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
