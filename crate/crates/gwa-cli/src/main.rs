use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use gwa::job::{run_job, Command, CorollaryKind, FunctorKind, JobConfig, JobReport};

/// Exact-arithmetic workbench for generalized Weyl algebras over finite rings.
#[derive(Parser)]
#[command(name = "gwa", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Job config (JSON); supplies the instance, seed and precision.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Precision N for the idempotent (overrides the config).
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Seed for every randomized search (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for report.json, summary.txt, meta.json and artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the command list of the config file.
    Run,
    /// Re-verify the instance hypotheses.
    CheckInstance,
    /// Compute e', e, u, u^{-1} and verify their identities.
    Idempotent,
    /// Apply F or G to a module file.
    Functor {
        #[arg(value_enum)]
        which: Which,
        #[arg(long)]
        module: PathBuf,
    },
    /// Check G(F(M)) ≅ M and F(G(N)) ≅ N.
    Roundtrip {
        #[arg(long)]
        module: PathBuf,
    },
    /// Compare eM with the z-torsion of M.
    Torsion {
        #[arg(long)]
        module: PathBuf,
    },
    /// Run one of the corollary suites.
    Corollary {
        #[arg(value_enum)]
        which: Corollary,
    },
    /// Run every property suite.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "F")]
    F,
    #[value(name = "G")]
    G,
}

#[derive(Clone, Copy, ValueEnum)]
enum Corollary {
    Weyl,
    Quantized,
    Classical,
    SimpleDim,
}

fn job_command(cmd: &Cmd, precision: Option<usize>) -> Option<Command> {
    Some(match cmd {
        Cmd::Run => return None,
        Cmd::CheckInstance => Command::CheckInstance {},
        Cmd::Idempotent => Command::Idempotent { precision },
        Cmd::Functor { which, module } => Command::Functor {
            which: match which {
                Which::F => FunctorKind::F,
                Which::G => FunctorKind::G,
            },
            module: module.clone(),
        },
        Cmd::Roundtrip { module } => Command::Roundtrip {
            module: module.clone(),
        },
        Cmd::Torsion { module } => Command::Torsion {
            module: module.clone(),
        },
        Cmd::Corollary { which } => Command::Corollary {
            which: match which {
                Corollary::Weyl => CorollaryKind::Weyl,
                Corollary::Quantized => CorollaryKind::Quantized,
                Corollary::Classical => CorollaryKind::Classical,
                Corollary::SimpleDim => CorollaryKind::SimpleDim,
            },
        },
        Cmd::Selftest => Command::Selftest {},
    })
}

fn write(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_outputs(dir: &Path, report: &JobReport, command: &str) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    write(&dir.join("report.json"), &report.to_json())?;
    write(&dir.join("summary.txt"), &report.to_string())?;
    for (name, contents) in &report.artifacts {
        write(&dir.join(name), contents)?;
    }
    let seconds = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "command": command,
        "generated_at_unix": seconds,
        "version": env!("CARGO_PKG_VERSION"),
    });
    write(
        &dir.join("meta.json"),
        &(serde_json::to_string_pretty(&meta).expect("serializable") + "\n"),
    )
}

fn run(cli: &Cli) -> Result<JobReport, String> {
    let (mut config, config_dir) = match &cli.config {
        Some(path) => {
            let config = JobConfig::load(path).map_err(|e| e.to_string())?;
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            (config, base)
        }
        None => (JobConfig::default(), PathBuf::new()),
    };
    if let Some(cmd) = job_command(&cli.command, cli.precision) {
        config.commands = vec![cmd];
    } else if cli.config.is_none() {
        return Err("run needs --config FILE".into());
    }
    if cli.precision.is_some() {
        config.precision = cli.precision;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    // Paths given on the command line are relative to the working directory.
    let base_dir = if matches!(cli.command, Cmd::Run) {
        config_dir.clone()
    } else {
        PathBuf::new()
    };
    let report = run_job(&config, &base_dir).map_err(|e| e.to_string())?;
    let out = cli
        .out
        .clone()
        .or_else(|| config.out.as_ref().map(|o| config_dir.join(o)));
    if let Some(dir) = out {
        let label = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
        write_outputs(&dir, &report, &label)?;
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = if cli.json {
                report.to_json()
            } else {
                report.to_string()
            };
            // A closed pipe is not a failure of the job.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
