//! `conekit` binary: thin argument-parsing wrapper over the library's
//! command functions.
//!
//! Exit codes: 0 on success, 2 on parse or input errors, 3 on solver
//! failures, 4 on unsupported cone combinations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use conekit::cli::{self, CliError};

#[derive(Parser)]
#[command(
    name = "conekit",
    about = "Conic geometry toolkit: intrinsic volumes, restricted singular values, \
             feasibility classification, and distribution bound tables",
    version
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the intrinsic-volume profile of a cone with its statistical
    /// dimension and squared Gaussian width.
    Profile {
        /// Cone spec, e.g. "orthant 8", "circ 100 1.0", "polar (circ 4 0.5)".
        spec: String,
    },
    /// Tabulate scaled-circular-cone moment quotients over a slope grid,
    /// one table file per (dimension, moment order) pair.
    Figure1 {
        /// Ambient dimensions to tabulate.
        #[arg(long = "m", value_delimiter = ',', default_values_t = vec![50usize, 100, 200])]
        ms: Vec<usize>,
        /// Slope scale factor between the two cones.
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        /// Moment orders.
        #[arg(long = "r", value_delimiter = ',', default_values_t = vec![0.5f64, 1.0, 2.0])]
        rs: Vec<f64>,
        /// Slope grid as a:b:n.
        #[arg(long, default_value = "0.02:1.0:50")]
        grid: String,
        /// Output directory for the table files.
        #[arg(long, default_value = "figure1")]
        out: PathBuf,
    },
    /// Sample Gaussian restricted norms and singular values for a cone pair
    /// and write empirical tables with their bound curves and mean markers.
    Figure2 {
        /// Column-side cone spec.
        cone_c: String,
        /// Row-side cone spec.
        cone_d: String,
        /// Seed for the Gaussian trial streams.
        #[arg(long)]
        seed: u64,
        /// Number of Monte Carlo trials.
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        /// Override the level grid for both tables, as a:b:n.
        #[arg(long)]
        grid: Option<String>,
        /// Output directory for the table files.
        #[arg(long, default_value = "figure2")]
        out: PathBuf,
    },
    /// Classify a matrix instance as primal or dual feasible and report
    /// distances to ill-posedness with the condition number.
    Classify {
        /// Matrix file with a `# n m` header line.
        matrix: PathBuf,
        /// Column-side cone spec.
        cone_c: String,
        /// Row-side cone spec.
        cone_d: String,
        /// Absolute feasibility tolerance (default: 1e-6 times the norm).
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Profile { spec } => {
            print!("{}", cli::cmd_profile(&spec)?);
        }
        Command::Figure1 { ms, s, rs, grid, out } => {
            let t_grid = cli::parse_grid_spec(&grid)?;
            for path in cli::cmd_figure1(&ms, s, &rs, &t_grid, &out)? {
                println!("{}", path.display());
            }
        }
        Command::Figure2 {
            cone_c,
            cone_d,
            seed,
            trials,
            grid,
            out,
        } => {
            for path in cli::cmd_figure2(&cone_c, &cone_d, trials, seed, grid.as_deref(), &out)? {
                println!("{}", path.display());
            }
        }
        Command::Classify {
            matrix,
            cone_c,
            cone_d,
            tol,
        } => {
            print!("{}", cli::cmd_classify(&matrix, &cone_c, &cone_d, tol)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
