//! `flatlyap` command-line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, Report};

#[derive(Parser, Debug)]
#[command(name = "flatlyap", version, about = "Square-tiled surfaces, cyclic covers, monodromy and Lyapunov exponents")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Largest orbit explored before giving up.
    #[arg(long, global = true, default_value_t = 1000)]
    pub cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

/// Either a cover file or a base surface together with a degree.
#[derive(Args, Debug, Clone)]
pub struct CoverInput {
    /// Cover file, or base surface file when `--d` is given.
    pub file: PathBuf,

    /// Degree of the cyclic cover branched at every singularity of the base.
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load and check a surface or cover file.
    Validate { file: PathBuf },
    /// Stratum and genus of a surface.
    Stratum { file: PathBuf },
    /// Horizontal cylinder decomposition.
    Cylinders { file: PathBuf },
    /// PSL(2,Z)-orbit of a surface.
    Orbit {
        file: PathBuf,
        /// Also write the orbit graph in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Cusp widths and fixed points of the orbit graph.
    GraphReport { file: PathBuf },
    /// Cyclic cover branched at every singularity of a genus-zero surface.
    CyclicCover {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// Exact sum of the positive Lyapunov exponents of a surface or of a cover.
    LyapunovSum {
        /// Surface whose orbit is used directly.
        #[arg(required_unless_present = "cover", conflicts_with = "cover")]
        file: Option<PathBuf>,
        /// Base surface of a cyclic cover branched at its singularities.
        #[arg(long, requires = "d")]
        cover: Option<PathBuf>,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Monodromy of a deck eigenspace over the orbit of a cover.
    Monodromy {
        #[command(flatten)]
        input: CoverInput,
        /// Eigenvalue exponent: the deck generator acts by ζ^k.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Commutator-determinant irreducibility certificate.
    Irreducibility {
        #[command(flatten)]
        input: CoverInput,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// First loop, read left to right.
        #[arg(long, default_value = commands::RHO1)]
        rho1: String,
        /// Second loop, read left to right.
        #[arg(long, default_value = commands::RHO2)]
        rho2: String,
        /// Base point; defaults to the first node where both loops close.
        #[arg(long)]
        node: Option<usize>,
    },
    /// Monte-Carlo estimate of the Lyapunov spectrum.
    SpectrumEstimate {
        #[command(flatten)]
        input: CoverInput,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Use the whole first homology instead of one eigenspace.
        #[arg(long)]
        full: bool,
        /// Independent trajectories.
        #[arg(long, default_value_t = 16)]
        trials: usize,
        /// Continued-fraction digits per trajectory.
        #[arg(long, default_value_t = 10_000)]
        digits: usize,
    },
    /// Numerical Zariski-density certificate for two generators.
    Zariski {
        /// Cover input; ignored when `--matrices` is given.
        #[arg(required_unless_present = "matrices")]
        file: Option<PathBuf>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// JSON file with exact generators `{"A": [[...]], "B": [[...]]}`.
        #[arg(long)]
        matrices: Option<PathBuf>,
        /// Loop giving the elliptic generator A.
        #[arg(long, default_value = commands::MU1)]
        mu1: String,
        /// Loop giving the generator B.
        #[arg(long, default_value = commands::MU2)]
        mu2: String,
        /// Relative singular-value threshold for the numerical rank.
        #[arg(long, default_value_t = 1e-8)]
        tol_rank: f64,
        /// Leave out the B-conjugated vectors.
        #[arg(long)]
        without_b: bool,
    },
    /// Exact check of the sum formula for cyclic covers on an (n, d) grid.
    NonvaryingTable {
        #[arg(long, value_delimiter = ',', default_values_t = vec![6, 9, 12, 8])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4])]
        d: Vec<usize>,
    },
}

fn emit(report: &Report, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&report.json).map_err(|e| CliError::Io(e.to_string()))?;
            println!("{text}");
        }
        Format::Text => print!("{}", report.text),
        Format::Dot => match &report.dot {
            Some(d) => print!("{d}"),
            None => return Err(CliError::Usage("--format dot is only available for `orbit`".into())),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(&cli).and_then(|report| {
        emit(&report, cli.format)?;
        Ok(report.success)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
