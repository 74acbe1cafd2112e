//! `cycloid`: spectra, decompositions and figures of discrete cycloids.

mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use discrete_cycloids::render::RenderWhat;
use discrete_cycloids::{BallError, CycloidError, ErrorClass};

#[derive(Parser, Debug)]
#[command(
    name = "cycloid",
    version,
    about = "Discrete cycloids over polygonal unit balls"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Ball JSON with `vertices` or `half_vertices` plus `"symmetric": true`.
    #[arg(long, global = true, value_name = "PATH")]
    ball: Option<PathBuf>,
    /// Traverse the ball this many times.
    #[arg(long, global = true, default_value_t = 1, value_name = "M",
          value_parser = clap::value_parser!(u32).range(1..))]
    turns: u32,
    /// Write files into this directory instead of printing.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Geometry and closedness tolerance.
    #[arg(long, global = true, env = "CYCLOID_TOL")]
    tol: Option<f64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The dual ball and the coefficients alpha, beta.
    Dual,
    /// The ordered cycloid spectrum.
    Spectrum,
    /// All cycloids; `--render DIR` writes one SVG per cycloid.
    Cycloids {
        #[arg(long, value_name = "DIR")]
        render: Option<PathBuf>,
    },
    /// Coefficients of a closed polygon in the cycloid basis.
    Decompose {
        /// Radii as CSV (`index,r`) or JSON (`{"radii": [...], "ball": ...}`).
        #[arg(long, value_name = "PATH")]
        radii: PathBuf,
    },
    /// Edgex count of a closed polygon, or `--fuzz N` random checks.
    Edgex {
        #[arg(long, value_name = "PATH", required_unless_present = "fuzz")]
        radii: Option<PathBuf>,
        #[arg(long, value_name = "N", conflicts_with = "radii")]
        fuzz: Option<usize>,
        /// Also count edgices along this many double-involute steps.
        #[arg(long, default_value_t = 0)]
        trace: usize,
    },
    /// Evolute radii, double evolute radii with `--double`, or the operator
    /// matrix with `--matrix`.
    Evolute {
        #[arg(long, value_name = "PATH", required_unless_present = "matrix")]
        radii: Option<PathBuf>,
        #[arg(long)]
        double: bool,
        #[arg(long)]
        matrix: bool,
    },
    /// An SVG figure.
    Render {
        #[arg(long)]
        what: RenderWhat,
        #[arg(long, value_name = "PATH")]
        radii: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
        #[command(flatten)]
        spiral: SpiralArgs,
        /// Pixels per unit.
        #[arg(long, default_value_t = 100.0)]
        scale: f64,
        #[arg(long)]
        no_cusps: bool,
    },
    /// A spiraling cycloid: vertices of the polygon with radii following the
    /// recurrence at `lambda`.
    Spiral {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[command(flatten)]
        spiral: SpiralArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct SpiralArgs {
    #[arg(long, default_value_t = 3)]
    laps: usize,
    /// First two radii.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    r1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    r2: f64,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let class = err
        .downcast_ref::<CycloidError>()
        .map(CycloidError::class)
        .or_else(|| {
            err.downcast_ref::<BallError>()
                .map(|_| ErrorClass::Validation)
        });
    match class {
        Some(ErrorClass::Numerical) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run::run(&cli.common, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
