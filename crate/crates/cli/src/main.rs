mod commands;
mod report;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ncg_core::fuzz::Suite;
use ncg_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "ncgpi1",
    version,
    about = "Checks and invariants for truncated differential graded algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input file; repeat for commands taking several. `-` reads stdin.
    #[arg(long, global = true)]
    input: Vec<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Numeric tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add wall-clock time to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Differential graded algebra axioms of an algebra file.
    Check,
    /// Graded center of an algebra file, or lattice cross-check of a torus spec.
    Center,
    /// Curvature of a connection file.
    Curvature,
    /// Whether a connection is flat.
    Flat,
    /// Tensor product of two connections and the curvature law.
    Tensor,
    /// Dual connection and the curvature law.
    Dual,
    /// Pseudoinverse and kernel/image/cokernel idempotents of a matrix file.
    Pseudoinverse,
    /// Parallel transport job.
    Transport,
    /// Fundamental-group descriptor of a torus spec.
    Pi1,
    /// Seeded property suite.
    Fuzz {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::DivergenceDetected(_)) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(s) => f.write_str(s),
        }
    }
}

pub struct Input {
    pub label: String,
    pub text: String,
    pub dir: Option<PathBuf>,
}

fn read_inputs(paths: &[String]) -> Result<Vec<Input>, CliError> {
    let mut stdin_used = false;
    paths
        .iter()
        .map(|p| {
            if p == "-" {
                if stdin_used {
                    return Err(CliError::Io("stdin can be read only once".into()));
                }
                stdin_used = true;
                let mut text = String::new();
                std::io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
                Ok(Input {
                    label: "-".into(),
                    text,
                    dir: None,
                })
            } else {
                let path = PathBuf::from(p);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Io(format!("{p}: {e}")))?;
                Ok(Input {
                    label: p.clone(),
                    text,
                    dir: path.parent().map(|d| d.to_path_buf()),
                })
            }
        })
        .collect()
}

/// Output text and whether every check passed.
fn execute(cli: &Cli) -> Result<(String, bool), CliError> {
    let inputs = read_inputs(&cli.input)?;
    let start = Instant::now();
    let text = cli.format == Format::Text;
    if let Command::Fuzz { suite } = &cli.command {
        let report = commands::fuzz(*suite, &inputs, cli.seed, cli.tol)?;
        let mut out = if text {
            commands::fuzz_text(&report)
        } else {
            report.json_lines()
        };
        if cli.timing {
            out.push_str(&format!(
                "{{\"wall_clock_ms\":{}}}\n",
                start.elapsed().as_secs_f64() * 1e3
            ));
        }
        return Ok((out, report.all_pass()));
    }
    let ctx = commands::Context {
        inputs: &inputs,
        tol: cli.tol,
        seed: cli.seed,
    };
    let mut report = match &cli.command {
        Command::Check => commands::check(&ctx)?,
        Command::Center => commands::center(&ctx)?,
        Command::Curvature => commands::curvature_cmd(&ctx)?,
        Command::Flat => commands::flat(&ctx)?,
        Command::Tensor => commands::tensor(&ctx)?,
        Command::Dual => commands::dual(&ctx)?,
        Command::Pseudoinverse => commands::pseudoinverse(&ctx)?,
        Command::Transport => commands::transport(&ctx)?,
        Command::Pi1 => commands::pi1(&ctx)?,
        Command::Fuzz { .. } => unreachable!(),
    };
    report = report.with_timing(cli.timing.then(|| start.elapsed()));
    let out = if text {
        report.to_text()
    } else {
        report.to_json()
    };
    Ok((out, report.pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((out, pass)) => {
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &out).map_err(|e| format!("{}: {e}", p.display())),
                None => std::io::stdout()
                    .write_all(out.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
