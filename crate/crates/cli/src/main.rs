//! `zonotile`: enumerate tilings, classify regularity, and reproduce the
//! diameter experiments from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use zonotile::flipgraph::DEFAULT_CAP;
use zonotile::PointConfig;

#[derive(Parser, Debug)]
#[command(name = "zonotile", version, about = "Fine zonotopal tilings of points on a line")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Global {
    /// Use the points 1, 2, ..., n.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Explicit points as comma-separated rationals, e.g. `--points=-2,-1/2,0,3`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, num_args = 1..)]
    pub points: Option<Vec<String>>,
    /// Level k.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Every level k = 1..n-2.
    #[arg(long, global = true)]
    pub all: bool,
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest n the flip graph may be enumerated for.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Directory for JSON/DOT/SVG artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit with status 1 when any checked statement fails.
    #[arg(long, global = true)]
    pub strict: bool,
    /// What to print on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate all tilings and their flips.
    Enumerate,
    /// Decide regularity of every tiling.
    Classify,
    /// Skeleton diameters of Σ_k and Σ_k + Σ_{k-1} against the closed forms.
    Diameters,
    /// Lifting and reduced hypertriangulation diameters, plus path fixtures.
    Hypertri {
        /// Also print the level-k and reduced paths of this tiling.
        #[arg(long)]
        tiling: Option<u32>,
    },
    /// Audit the level potential against a reference tiling.
    Potential {
        /// Reference tiling id.
        #[arg(long = "ref", default_value_t = 0)]
        reference: u32,
    },
    /// Sample maximal chains and tally their level censuses.
    Chains {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Draw one tiling as SVG.
    Render {
        #[arg(long, default_value_t = 0)]
        tiling: u32,
    },
    /// Count commutation classes of reduced words independently of tilings.
    OracleCount,
    /// Run the acceptance checks.
    Verify {
        /// Skip the n = 7 enumeration.
        #[arg(long)]
        quick: bool,
    },
}

impl Global {
    pub fn config(&self) -> Result<PointConfig> {
        match (&self.n, &self.points) {
            (Some(_), Some(_)) => bail!("give either --n or --points, not both"),
            (None, None) => bail!("one of --n or --points is required"),
            (Some(n), None) => Ok(PointConfig::standard(*n)?),
            (None, Some(p)) => Ok(PointConfig::from_strs(p)?),
        }
    }

    /// Levels selected by `--k` / `--all`, checked against `1..=n-2`.
    pub fn levels(&self, n: usize) -> Result<Vec<usize>> {
        let top = n.saturating_sub(2);
        match (self.k, self.all) {
            (Some(_), true) => bail!("give either --k or --all, not both"),
            (Some(k), false) if (1..=top).contains(&k) => Ok(vec![k]),
            (Some(k), false) => bail!("level {k} is outside 1..={top}"),
            (None, _) if top == 0 => bail!("no levels for n = {n}"),
            (None, _) => Ok((1..=top).collect()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli).context("zonotile") {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
