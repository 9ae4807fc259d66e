use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "waring",
    version,
    about = "Sums of powers of forms as reproducible batch jobs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random choice in the job.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Prime modulus for exact computations (default: largest suitable prime below 2^62).
    #[arg(long, global = true)]
    pub modulus: Option<u64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Allow jobs estimated to take more than a couple of minutes.
    #[arg(long, global = true)]
    pub long_running: bool,

    /// Forms in the text format, one per line; `-` reads standard input.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Style {
    #[value(name = "random-general-forms", alias = "random")]
    Random,
    #[value(name = "root-of-unity-linear-powers", alias = "root-of-unity")]
    RootOfUnity,
    #[value(name = "odd-subset-linear-powers", alias = "odd-subset")]
    OddSubset,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of the space of degree-d forms in n+1 variables.
    Dims {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// dim S^{kd} / dim S^d next to k^n.
    Bound(Nkd),
    /// Does the power ideal contain every form of degree t?
    Regular {
        #[command(flatten)]
        nkd: Nkd,
        /// Number of generators (default: all the style provides, k^n for random).
        #[arg(long)]
        p: Option<usize>,
        /// Target degree (default: kd).
        #[arg(long)]
        t: Option<u32>,
        #[arg(long, value_enum, default_value = "random-general-forms")]
        style: Style,
    },
    /// Fewest random degree-d forms whose (k-1)-st powers span degree kd.
    MinGens {
        #[command(flatten)]
        nkd: Nkd,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Sweep d up to this value.
        #[arg(long)]
        d_max: Option<u32>,
    },
    /// Forms whose low-order derivatives vanish at the root-of-unity points are zero.
    VerifyVanishing {
        #[command(flatten)]
        nkd: Nkd,
        /// `kd` or `kd+k-1`.
        #[arg(long, default_value = "kd")]
        variant: String,
    },
    /// Hyperplanes x_i = ξ^s x_j and their incidences with the root-of-unity points.
    Arrangement {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Compare l^{m-s} ∘ f = 0 with vanishing of the derivatives of f at l.
    ApolarCheck {
        #[arg(long)]
        n: u32,
        /// Coefficients of l, comma separated.
        #[arg(long)]
        point: String,
        /// Derivative order.
        #[arg(long)]
        s: u32,
    },
    /// Binary form of degree 2d as a sum of two squares.
    TwoSquares {
        /// Half the degree of a random real form, used when no input is given.
        #[arg(long)]
        d: Option<u32>,
        /// Root indices that make up the first factor, comma separated.
        #[arg(long)]
        pairing: Option<String>,
    },
    /// Enumerate the decompositions of a binary form as two squares.
    CountTwoSquares {
        #[arg(long)]
        d: Option<u32>,
    },
    /// Write f of degree kd as Σ h_i l_i^{(k-1)d} exactly.
    Represent(Nkd),
    /// Fit f of degree kd by p k-th powers (damped Gauss-Newton).
    Decompose {
        #[command(flatten)]
        nkd: Nkd,
        /// Number of summands (default: k^n).
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
    },
    /// Hilbert function of a power ideal next to the conjectured series.
    Hilbert {
        #[command(flatten)]
        nkd: Nkd,
        #[arg(long)]
        p: Option<usize>,
        /// Largest degree (default: kd + k).
        #[arg(long)]
        t: Option<u32>,
        #[arg(long, value_enum, default_value = "odd-subset-linear-powers")]
        style: Style,
        /// Scan root-of-unity ideals with parameters up to n, k, d for mismatches.
        #[arg(long)]
        search: bool,
    },
    /// Generic number of m-th powers of linear forms for a form of degree m.
    AhRank {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        deg: u32,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Nkd {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub d: u32,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dims { .. } => "dims",
            Command::Bound(_) => "bound",
            Command::Regular { .. } => "regular",
            Command::MinGens { .. } => "min-gens",
            Command::VerifyVanishing { .. } => "verify-vanishing",
            Command::Arrangement { .. } => "arrangement",
            Command::ApolarCheck { .. } => "apolar-check",
            Command::TwoSquares { .. } => "two-squares",
            Command::CountTwoSquares { .. } => "count-two-squares",
            Command::Represent(_) => "represent",
            Command::Decompose { .. } => "decompose",
            Command::Hilbert { .. } => "hilbert",
            Command::AhRank { .. } => "ah-rank",
        }
    }

    /// Commands whose answer is a single number print it bare by default.
    pub fn default_format(&self) -> Format {
        match self {
            Command::Dims { .. } | Command::AhRank { .. } | Command::MinGens { .. } => Format::Text,
            _ => Format::Json,
        }
    }
}
