//! `birkhoff`: decide, generate and measure unistochastic matrices.
//!
//! Exit codes: 0 success (or unistochastic), 1 not unistochastic, 2
//! inconclusive, 64 bad input, 65 computation failed.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use birkhoff::ensembles::Ensemble;
use birkhoff::polytope::RayKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use table::Format;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_UNISTOCHASTIC: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_INPUT: u8 = 64;
pub const EXIT_COMPUTE: u8 = 65;

#[derive(Parser, Debug)]
#[command(
    name = "birkhoff",
    version,
    about = "Unistochastic matrices and the Birkhoff polytope"
)]
pub struct Cli {
    /// Output format for tables and reports. Matrices use the text format
    /// under csv.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads for restarts and sampling.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SeedArg {
    /// Random seed.
    #[arg(long, env = "BIRKHOFF_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    #[command(flatten)]
    pub seed: SeedArg,
    /// Independent restarts of the random walk.
    #[arg(long, default_value_t = 100)]
    pub restarts: usize,
    /// Distance below which the target counts as reached.
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    /// Smallest step angle before a run gives up.
    #[arg(long, default_value_t = birkhoff::matcore::DEFAULT_ALPHA_MIN)]
    pub alpha_min: f64,
    /// Use the published stopping angle 1e-4 instead of --alpha-min.
    #[arg(long)]
    pub paper_alpha: bool,
    /// Step cap per run.
    #[arg(long, default_value_t = 2_000_000)]
    pub max_steps: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a bistochastic matrix is unistochastic.
    Check {
        /// Matrix file (text or JSON), or - for stdin.
        file: PathBuf,
        /// Expected dimension.
        #[arg(long)]
        n: Option<usize>,
        /// Where to write the witness unitary; defaults to a sidecar next
        /// to the input.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Edge classes, hyperplanes, theorem residuals and hyperoctants of the
    /// 4x4 polytope.
    Geometry {
        #[command(subcommand)]
        what: GeometryCmd,
    },
    /// Corners, tetrahedra and hyperplane incidence of the 4x4 polytope.
    Atlas {
        #[arg(long, value_enum, default_value_t = AtlasView::Tetrahedra)]
        view: AtlasView,
    },
    /// Points on a central ray through the 4x4 van der Waerden matrix.
    Ray {
        #[arg(long, default_value = "I", value_parser = parse_kind)]
        kind: RayKind,
        /// A single parameter; otherwise the admissible interval is sampled.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        /// Points across the admissible interval.
        #[arg(long, default_value_t = 13)]
        steps: usize,
        /// Also run the stochastic search at every point.
        #[arg(long)]
        solve: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Boundary of the unistochastic set in an equilateral section of the
    /// 3x3 polytope.
    CrossSection {
        #[arg(long, value_enum, default_value_t = Plane::Delta1)]
        plane: Plane,
        #[arg(long, default_value_t = 360)]
        resolution: usize,
    },
    /// Monte Carlo estimates.
    Experiment {
        #[arg(value_enum)]
        kind: ExperimentKind,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Ensemble for the entropy average: flat_b3, flat_u3 or haar_u3.
        #[arg(long, default_value = "flat_b3", value_parser = parse_ensemble)]
        ensemble: Ensemble,
        /// Independent random streams the samples are split over.
        #[arg(long, default_value_t = birkhoff::ensembles::DEFAULT_SHARDS)]
        shards: u64,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Rank of the first-order map from the unitary group to the polytope.
    TangentRank {
        /// Unitary matrix file; see --hadamard, --haar and --permutation
        /// for built-in choices.
        file: Option<PathBuf>,
        /// The 4x4 complex Hadamard family at this phase.
        #[arg(long, allow_hyphen_values = true)]
        hadamard: Option<f64>,
        /// A Haar-random unitary of this size.
        #[arg(long)]
        haar: Option<usize>,
        /// The 4x4 permutation matrix with this index.
        #[arg(long)]
        permutation: Option<usize>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Write a matrix from one of the built-in constructions.
    Generate {
        #[command(subcommand)]
        what: GenerateCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum GeometryCmd {
    /// Segment classes between corners, with counts.
    Edges {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// The nine hyperplanes through the centre.
    Planes,
    /// Residuals of the triangle and tetrahedron theorems.
    Theorems {
        /// Grid resolution for the orthogonal triangles.
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Number of sign patterns in each hyperoctant type.
    Octants,
    /// Admissible parameter interval of a central ray.
    Interval {
        #[arg(long, default_value = "I", value_parser = parse_kind)]
        kind: RayKind,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenerateCmd {
    VanDerWaerden {
        #[arg(long)]
        n: usize,
    },
    Fourier {
        #[arg(long)]
        n: usize,
    },
    /// The 4x4 complex Hadamard family.
    Hadamard {
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
    },
    Permutation {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        index: usize,
    },
    CentralRay {
        #[arg(long, default_value = "I", value_parser = parse_kind)]
        kind: RayKind,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// Convex combination of the even 3x3 permutations, weights p0,p3,p4.
    Delta1 {
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
    },
    /// Convex combination of the odd 3x3 permutations, weights p1,p2,p5.
    Delta2 {
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
    },
    /// Point of tetrahedron k (1..6), or its orthogonal witness.
    Tetrahedron {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long)]
        witness: bool,
    },
    /// Family A from a,b,c,e,g.
    FamilyA {
        #[arg(long, value_delimiter = ',')]
        params: Vec<f64>,
    },
    /// Family B from four angles.
    FamilyB {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<f64>,
    },
    /// Family C from a,b,c,d.
    FamilyC {
        #[arg(long, value_delimiter = ',')]
        params: Vec<f64>,
    },
    /// Haar-random unitary, or its image with --image.
    Haar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        image: bool,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Flat random point of the 3x3 polytope.
    FlatB3 {
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AtlasView {
    Tetrahedra,
    Corners,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Plane {
    Delta1,
    Delta2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    /// Unistochastic fraction of the 3x3 polytope.
    Volume,
    /// Mean entropy over an ensemble.
    Entropy,
    /// Volume of the 3x3 polytope.
    B3Volume,
}

fn parse_kind(s: &str) -> Result<RayKind, String> {
    s.parse()
}

fn parse_ensemble(s: &str) -> Result<Ensemble, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_COMPUTE);
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}
