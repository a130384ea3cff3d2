use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "bergman", version, about = "Zeros of weighted Bergman kernels on the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; defaults to `$BERGMAN_OUT_DIR/<command>.<ext>` when that
    /// variable is set, standard output otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate 𝒦_{α,β}(ξ).
    KernelEval(KernelEvalArgs),
    /// Roots of G_{α,β}.
    Roots(PointArgs),
    /// Trace the zero curves over a β grid.
    Trace(TraceArgs),
    /// Rouché window (β1, β2) of P_α = (1-z)^(α+1).
    Rouche(RoucheArgs),
    /// Zero counts of the even and odd numerators.
    EvenOdd(EvenOddArgs),
    /// β at which the real zero curve crosses -1.
    SAlpha(AlphaListArgs),
    /// Atoms of the empirical zero measure.
    Measure(PointArgs),
    /// Identity and reproducing-property checks at one (α, β).
    Verify(VerifyArgs),
}

impl Command {
    /// Commands whose output is a point set and so has an SVG form.
    pub fn has_plot(&self) -> bool {
        matches!(self, Command::Roots(_) | Command::Trace(_) | Command::Measure(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::KernelEval(_) => "kernel-eval",
            Command::Roots(_) => "roots",
            Command::Trace(_) => "trace",
            Command::Rouche(_) => "rouche",
            Command::EvenOdd(_) => "even-odd",
            Command::SAlpha(_) => "s-alpha",
            Command::Measure(_) => "measure",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct KernelEvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Real part of ξ.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub xi_im: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    /// One or more α, comma separated.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
    /// `default`, `geometric:<per-half>:<offset>` or `uniform:<n>`.
    #[arg(long, default_value = "default")]
    pub grid: String,
    /// Keep only this component.
    #[arg(long)]
    pub component: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RoucheArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0])]
    pub alpha: Vec<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub r0: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EvenOddArgs {
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = (0..=12).map(f64::from))]
    pub alpha: Vec<f64>,
    #[arg(long, default_value = "geometric:40:1e-5")]
    pub grid: String,
    /// Emit the per-β counts instead of the summary.
    #[arg(long)]
    pub scan: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AlphaListArgs {
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = (0..=9).map(f64::from))]
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Number of sample points in the disk.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}
