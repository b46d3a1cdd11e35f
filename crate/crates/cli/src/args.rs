use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gpauli",
    version,
    about = "Generalized Pauli and Weyl channel analysis"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Time grid as T_MAX,POINTS.
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<GridArg>,
    /// Output file (build, spectrum, check) or directory (repro).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for random corpora.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg {
    pub t_max: f64,
    pub points: usize,
}

pub fn parse_grid(s: &str) -> Result<GridArg, String> {
    let (t, n) = s
        .split_once(',')
        .ok_or_else(|| format!("expected T_MAX,POINTS, got {s:?}"))?;
    let t_max = f64::from_str(t.trim()).map_err(|e| format!("bad T_MAX {t:?}: {e}"))?;
    let points = usize::from_str(n.trim()).map_err(|e| format!("bad POINTS {n:?}: {e}"))?;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(format!("T_MAX must be positive, got {t_max}"));
    }
    if points < 2 {
        return Err(format!("POINTS must be at least 2, got {points}"));
    }
    Ok(GridArg { t_max, points })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumList(pub Vec<f64>);

pub fn parse_list(s: &str) -> Result<NumList, String> {
    s.split(',')
        .map(|x| f64::from_str(x.trim()).map_err(|e| format!("bad number {x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(NumList)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a channel spec file.
    Build {
        #[command(subcommand)]
        builder: Builder,
    },
    /// Tabulate the eigenvalue functions on the grid.
    Spectrum { spec: PathBuf },
    /// Run one analysis on a channel spec.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        spec: PathBuf,
    },
    /// Reproduce a worked example and assert its reference values.
    Repro {
        #[command(subcommand)]
        name: ReproName,
    },
}

#[derive(Debug, Subcommand)]
pub enum Builder {
    /// Semigroup with the given decay rates.
    Semigroup {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Comma-separated rates c_1..c_{d+1}.
        #[arg(long, value_parser = parse_list)]
        c: NumList,
    },
    /// Dephasing channel along one basis.
    Dephasing {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// 1-based basis index.
        #[arg(long)]
        alpha: usize,
        /// Dephasing function, e.g. "(1-exp(-2*t))*0.5".
        #[arg(long, allow_hyphen_values = true)]
        pi: String,
    },
    /// Qubit channel with oscillating weights (cos(a t + pi) + 1) / (2(a + 1)).
    Eq13,
    /// The two invertible qutrit Weyl channels and their non-invertible mixture.
    WeylExample1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Cp,
    Invertible,
    Semigroup,
    DephasingSet,
    Rates,
    PDivisible,
    NegCount,
}

#[derive(Debug, Subcommand)]
pub enum ReproName {
    /// Weights of the oscillating qubit channel over one period.
    Fig1,
    /// Dephasing-set membership of the oscillating qubit channel.
    Eq13Membership,
    /// Invertibility of two Weyl channels and their mixture.
    Example1,
    /// Qubit semigroup as a mixture of dephasing channels.
    Prop4Qubit {
        #[arg(long, value_parser = parse_list, default_value = "1,2,3")]
        c: NumList,
    },
    /// Qudit semigroup outside the dephasing-mixture set.
    Prop4Qudit {
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// Split the all-rates-one semigroup into n invertible channels.
    SplitN {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Randomized property corpora, seeded by --seed.
    Properties {
        /// Samples per property.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}
