use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "normone",
    version,
    about = "Norm-one classes of cyclic number fields and their distribution on the unit torus"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Field data, units, regulator and the predicted counting constant
    FieldInfo(RunArgs),
    /// Enumerate visible classes for each bound
    Enumerate(RunArgs),
    /// Weyl sums for each bound and character
    Weyl(RunArgs),
    /// Star discrepancy per bound and the linear counting fit
    Discrepancy(RunArgs),
    /// Truncated L, Ξ₁ and the ratio Ξ₁/(ζ(ds)L)
    Lcheck(RunArgs),
    /// Compare enumeration with the brute-force box oracle; report collisions
    Oracle(RunArgs),
    /// Run the acceptance suite
    Accept(RunArgs),
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// `builtin:sqrt2`, `builtin:sqrt-1`, `builtin:cubic13`, `builtin:cubic7` or a config path
    #[arg(long, default_value = "builtin:sqrt2")]
    pub field: String,

    /// Comma-separated strictly increasing norm bounds r
    #[arg(long, default_value = "1e3,1e4,1e5")]
    pub bounds: String,

    /// Characters: `1,2,-1` on a 1-torus, `1:0,0:1,1:1` on higher tori
    #[arg(long)]
    pub k: Option<String>,

    /// Comma-separated exponents s > 1
    #[arg(long, default_value = "2.0")]
    pub s: String,

    /// Comma-separated truncation cutoffs X
    #[arg(long, default_value = "1e4")]
    pub cutoff: String,

    /// Grid resolution for multidimensional discrepancy
    #[arg(long, default_value_t = 256)]
    pub grid: usize,

    /// Output directory for CSV and JSON artifacts (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    pub workers: usize,

    /// Working precision in bits (overrides NORMONE_PRECISION_BITS)
    #[arg(long)]
    pub precision: Option<u32>,

    /// Largest admissible search box, in lattice points
    #[arg(long, default_value_t = 2e9)]
    pub max_box_points: f64,

    /// Coordinate radius of the brute-force oracle box
    #[arg(long, default_value_t = 20)]
    pub box_radius: u32,

    /// Torus distance below which classes count as colliding
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}
