mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polytile::torus_search::Dedup;

/// Tilings of Z^n by translates of a finite cluster.
#[derive(Parser, Debug)]
#[command(name = "polytile", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// Period lattice of the torus: `5` (scaled identity), `3,3,6`
    /// (diagonal) or `1,2;0,5` (basis rows separated by `;`).
    #[arg(long, global = true)]
    torus: Option<String>,

    /// Keep one tiling per class.
    #[arg(long, global = true, value_enum, default_value_t = DedupArg::None)]
    dedup: DedupArg,

    /// Stop after this many tilings.
    #[arg(long, global = true)]
    limit: Option<usize>,

    /// Worker threads for torus searches.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Work cap: search nodes for searches, root-grid points for analyze,
    /// torus cells for verify and cyclic-construct.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Directory for emitted tiling files; without it tilings are inlined in
    /// the report.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Include wall time in the report (makes reports run-dependent).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DedupArg {
    None,
    Translation,
    Congruence,
}

impl From<DedupArg> for Dedup {
    fn from(d: DedupArg) -> Dedup {
        match d {
            DedupArg::None => Dedup::None,
            DedupArg::Translation => Dedup::Translation,
            DedupArg::Congruence => Dedup::Congruence,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Size, generation, root-of-unity search and lattice-tiling search for a tile.
    Analyze {
        tile: PathBuf,
        /// Root grid moduli, comma separated (default: |V| if prime, else 2..=2|V|).
        #[arg(long)]
        moduli: Option<String>,
    },
    /// All tilings of a torus by translates of a tile.
    Enumerate { tile: PathBuf },
    /// Run checks on a tiling file.
    Verify {
        tiling: PathBuf,
        /// Comma-separated subset of cover,period,product,exclusion,blowup,census, or `all`.
        #[arg(long, default_value = "cover")]
        checks: String,
        /// Multipliers for product/exclusion/blowup (default: -1 and every a in
        /// 2..=2|V| coprime to |V|).
        #[arg(long, allow_hyphen_values = true)]
        multipliers: Option<String>,
    },
    /// Search a torus for a tiling whose center set is not a lattice.
    NonlatticeSearch { tile: PathBuf },
    /// Try to prove that a tile does not tile Z^n by covering growing balls.
    PatchProve {
        tile: PathBuf,
        /// Largest ball radius to try.
        #[arg(long, default_value_t = 8)]
        radius: u32,
    },
    /// Codeword-type census of a semi-cross tiling.
    Census {
        tiling: PathBuf,
        /// Count a single type such as `1^2,-1^1` instead of the full table.
        #[arg(long = "type", allow_hyphen_values = true)]
        type_spec: Option<String>,
        /// Reference word for --type (default: the first center).
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        /// Reference words sampled per class for the full table.
        #[arg(long, default_value_t = polytile::semicross_stats::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// The cyclic lattice tiling of Z^{q-1} by semi-crosses.
    CyclicConstruct { q: i64 },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, &cli.common) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
