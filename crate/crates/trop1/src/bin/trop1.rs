//! Thin command-line front end; all logic lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use trop1::cli::{self, CheckOptions, CliOutcome, ExportOptions, ModuliOptions};

#[derive(Parser)]
#[command(
    name = "trop1",
    about = "Realizability of genus-1 tropical stable maps: well-spacedness, \
             moduli cones, radial subdivisions, and the descent oracle",
    version
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide well-spacedness of an instance (exit 0 yes / 1 no / 2 invalid)
    Check {
        /// Instance file, or a directory with --batch
        path: PathBuf,
        /// Check all *.json files in the given directory
        #[arg(long)]
        batch: bool,
        /// Check a single character "c1,c2,...,cr" instead of all of them
        #[arg(long)]
        chi: Option<String>,
        /// Also evaluate Speyer's two-vertex condition
        #[arg(long)]
        speyer: bool,
        /// Write a structured JSON report
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Enumerate types over a recession type and build the cone complex
    Moduli {
        /// Recession type JSON file
        #[arg(long)]
        recession: PathBuf,
        /// Bound on the number of vertices
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
        /// Write the complex as JSON
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the face poset as DOT
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Restrict to the well-spaced subcomplex
        #[arg(long)]
        well_spaced_only: bool,
    },
    /// Evaluate or search the residue descent condition
    Descent {
        /// A full descent instance as JSON
        #[arg(long, conflicts_with_all = ["search", "parts", "c"])]
        instance: Option<PathBuf>,
        /// Search for a point configuration
        #[arg(long, requires = "parts", requires = "c")]
        search: bool,
        /// Branch spec "SIZE:a1,a2,...;SIZE:..."
        #[arg(long)]
        parts: Option<String>,
        /// Residue constants "c1,c2,..."
        #[arg(long)]
        c: Option<String>,
    },
    /// Export the radial subdivision complex of an instance (JSON + DOT)
    Export {
        path: PathBuf,
        /// Write the complex as JSON
        #[arg(long)]
        complex: Option<PathBuf>,
        /// Write the face poset as DOT
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Restrict to the well-spaced subcomplex
        #[arg(long)]
        well_spaced_only: bool,
    },
    /// List the bundled instances, optionally writing them to a directory
    Corpus {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(args: Args) -> CliOutcome {
    match args.command {
        Command::Check { path, batch, chi, speyer, report } => {
            let chi = match chi.as_deref().map(cli::parse_chi).transpose() {
                Ok(c) => c,
                Err(e) => {
                    return CliOutcome {
                        exit_code: cli::EXIT_INVALID,
                        stdout: format!("error: {e}\n"),
                    }
                }
            };
            let opts = CheckOptions { chi, speyer, report };
            if batch {
                cli::run_check_batch(&path, &opts)
            } else {
                cli::run_check(&path, &opts)
            }
        }
        Command::Moduli { recession, max_vertices, out, dot, well_spaced_only } => cli::run_moduli(
            &recession,
            &ModuliOptions { max_vertices, out, dot, well_spaced_only },
        ),
        Command::Descent { instance, search, parts, c } => {
            if let Some(path) = instance {
                cli::run_descent_instance(&path)
            } else if search {
                cli::run_descent_search(
                    parts.as_deref().unwrap_or_default(),
                    c.as_deref().unwrap_or_default(),
                )
            } else {
                CliOutcome {
                    exit_code: cli::EXIT_INVALID,
                    stdout: "error: pass --instance FILE or --search --parts ... --c ...\n"
                        .to_string(),
                }
            }
        }
        Command::Export { path, complex, dot, well_spaced_only } => cli::run_export(
            &path,
            &ExportOptions {
                complex_out: complex,
                dot_out: dot,
                well_spaced_only,
            },
        ),
        Command::Corpus { out } => cli::run_corpus(out.as_deref()),
    }
}

fn main() -> ExitCode {
    let outcome = dispatch(Args::parse());
    print!("{}", outcome.stdout);
    ExitCode::from(outcome.exit_code as u8)
}
