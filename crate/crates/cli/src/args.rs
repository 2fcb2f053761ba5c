use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug, Clone)]
#[command(name = "obstructa", version, about = "Exact embedding-obstruction computations with re-verifiable certificates")]
pub struct Cli {
    /// Cap on enumerated cells, simplices and matrix sizes.
    #[arg(long, global = true, default_value_t = obstructa::DEFAULT_SIZE_GUARD)]
    pub size_guard: usize,
    /// Print the report as one JSON line instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Append the report to this JSON Lines file.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Load, validate and export simplicial complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Deleted products.
    #[command(subcommand)]
    Dp(DpCmd),
    /// Integer linear algebra.
    #[command(subcommand)]
    Linalg(LinalgCmd),
    /// Exact PL geometry.
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Van Kampen obstruction of a moment-curve map.
    Vk(VkArgs),
    /// Third obstruction.
    #[command(subcommand)]
    O3(O3Cmd),
    /// Whitney cocycle w₃ of a Whitney datum.
    W3(W3Args),
    /// Tower cocycle wₙ with tree-group values.
    Wn(WnArgs),
    /// Tree groups modulo AS and IHX.
    #[command(subcommand)]
    Trees(TreesCmd),
    /// Massey-type cochains on the 4-fold deleted product.
    Massey(MasseyArgs),
    /// Re-verify every certificate in a report file.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug, Clone)]
pub enum ComplexCmd {
    /// Check face closure, duplicates and tags.
    Validate { complex: String },
    /// Write a built-in complex as JSON (to -o, or stdout).
    Builtin { name: String },
    /// Simplex counts and tags.
    Show { complex: String },
}

#[derive(Subcommand, Debug, Clone)]
pub enum DpCmd {
    /// Cell census per dimension, orbit counts and structural checks.
    Stats {
        complex: String,
        #[arg(short = 'n', long, default_value_t = 2)]
        arity: usize,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum LinalgCmd {
    /// Smith normal form with transforms.
    Snf { matrix: String },
    /// Integer solve A·x = b with a certificate either way.
    Solve {
        matrix: String,
        /// Right-hand side, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum GeomCmd {
    /// Signed intersection of two simplex images.
    Intersect {
        map: String,
        /// Vertices, comma separated.
        sigma: String,
        tau: String,
    },
    /// Linking number of a tagged 2-cycle and a tagged 1-cycle in R⁴.
    Link {
        map: String,
        /// Complex carrying the cycle tags; defaults to the sphere-sphere-torus for synthetic builtins.
        #[arg(long)]
        complex: Option<String>,
        #[arg(long)]
        cycle2: String,
        #[arg(long)]
        cycle1: String,
        /// Ray direction, comma-separated rationals or a builtin.
        #[arg(long, default_value = "builtin:synthetic_direction", allow_hyphen_values = true)]
        direction: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct VkArgs {
    pub complex: String,
    /// Ambient dimension; defaults to twice the complex dimension.
    #[arg(short = 'd', long)]
    pub dim: Option<usize>,
    /// Moment-curve parameters, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Also compare with a second parameter set.
    #[arg(long)]
    pub stability: bool,
    /// Second parameter set for --stability (default tᵢ = i² + 1).
    #[arg(long, allow_hyphen_values = true)]
    pub params2: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum O3Cmd {
    /// Linking-number route x₁y₂ − x₂y₁.
    Kunneth {
        complex_pos: Option<String>,
        #[arg(long)]
        complex: Option<String>,
        #[arg(long)]
        linking: String,
        /// A,B,g1,g2 tags; defaults from the complex.
        #[arg(long)]
        cycles: Option<String>,
    },
    /// Cochain route: Arnold pullback paired with the product 6-cycle.
    Cochain {
        complex_pos: Option<String>,
        #[arg(long)]
        complex: Option<String>,
        /// Placement for the Gauss cocycle.
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value = "builtin:synthetic_direction", allow_hyphen_values = true)]
        direction: String,
        /// Linking form for the cross-product cocycle (instead of --map).
        #[arg(long)]
        linking: Option<String>,
        /// A,B,T,g1,g2 tags; defaults from the complex.
        #[arg(long)]
        cycles: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct W3Args {
    pub complex: String,
    pub datum: String,
    /// Pair with the product of three tagged 2-cycles.
    #[arg(long)]
    pub certify: bool,
    /// Tags of the product cycle.
    #[arg(long, default_value = "S,Sp,T")]
    pub cycle: String,
    /// Apply this many random stabilizations and check the change.
    #[arg(long, default_value_t = 0)]
    pub stabilize: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Split every Whitney disk before computing.
    #[arg(long)]
    pub split: bool,
}

#[derive(Args, Debug, Clone)]
pub struct WnArgs {
    pub complex: String,
    pub towers: String,
    #[arg(short = 'n', long)]
    pub arity: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum TreesCmd {
    /// Rank and torsion of 𝒯ₘ.
    Rank {
        #[arg(short = 'm', long)]
        order: usize,
    },
    /// Basis coordinates of a tree.
    Reduce {
        #[arg(short = 'm', long)]
        order: usize,
        /// Tree as nested JSON arrays, e.g. [[1,2],3,4].
        tree: String,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MasseyRoute {
    /// U = δW with W random; primitives are explicit.
    Exact,
    /// U = δW, but the primitive on the 3-fold product is solved for.
    Solve,
}

#[derive(Args, Debug, Clone)]
pub struct MasseyArgs {
    pub complex: String,
    #[arg(long, value_enum, default_value_t = MasseyRoute::Exact)]
    pub route: MasseyRoute,
    /// Seed for the random 2-cochain W.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    pub report: String,
}
