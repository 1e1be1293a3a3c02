use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use squeeze_cert::domains::ConvexityClass;
use squeeze_cert::verify::Family;

#[derive(Debug, Parser)]
#[command(name = "squeeze-cert", version, about = "Universal squeezing-function lower bounds for convex and C-convex domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Root seed of every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Tolerated negative slack of sampled containments.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Samples per sampled check.
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of the universal bounds for n = 2..=n_max.
    Constants {
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    /// Certify a domain given as JSON, recentered at a point.
    Bound {
        #[arg(long)]
        spec: PathBuf,
        /// Override the class declared in the spec.
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        /// Base point as `[[re, im], ...]`; the origin by default.
        #[arg(long)]
        point: Option<String>,
    },
    /// Run property suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Dimension or range, e.g. `3` or `2..5` (inclusive).
        #[arg(long, default_value = "2..4")]
        n: DimRange,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Sweep a domain family for the smallest witness bounds.
    ProbeKappa {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Star,
    Lemmas,
    Strictness,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassArg {
    Convex,
    Cconvex,
}

impl From<ClassArg> for ConvexityClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Convex => ConvexityClass::Convex,
            ClassArg::Cconvex => ConvexityClass::CConvex,
        }
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: squeeze_cert::Error| e.to_string())
}

/// Inclusive dimension range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimRange {
    pub lo: usize,
    pub hi: usize,
}

impl DimRange {
    pub fn dims(&self) -> Vec<usize> {
        (self.lo..=self.hi).collect()
    }
}

impl FromStr for DimRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad dimension `{t}`"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if lo < 2 || hi < lo || hi > 16 {
            return Err(format!("dimension range must satisfy 2 <= lo <= hi <= 16, got {s}"));
        }
        Ok(DimRange { lo, hi })
    }
}
