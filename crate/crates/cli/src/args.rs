use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "polycoreset",
    version,
    about = "Polytope-distance coresets: solve, stream, stress"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximate the point of conv(P) nearest the origin.
    Distance(DistanceArgs),
    /// Build and verify a merge-hardness instance.
    Adversarial(AdversarialArgs),
    /// Run a merge-and-reduce stream and report ε̂ per batch.
    Stream(StreamArgs),
    /// Homogeneous max-margin separator of labeled data.
    Margin(MarginArgs),
    /// Write a random instance.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    MinNorm,
    Rerun,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InstanceKind {
    /// Hull avoids the origin.
    Separable,
    /// Angular diameter at most π/2.
    Narrow,
    /// Homogeneously separable labeled data.
    Labeled,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct AdversarialArgs {
    /// 2: equal norms; 3: nested projections.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub theorem: u8,
    /// Radians in (0, π/2]; also accepts `pi/N`.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: f64,
    /// Path for the instance points CSV; a JSON sidecar is written next to it.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct StreamArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub batch_size: usize,
    #[arg(long, value_enum, default_value = "rerun")]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// A-priori angular-diameter bound for min-norm merges.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Take the batches from an adversarial sidecar's partition (P1, then P2)
    /// instead of consecutive chunks.
    #[arg(long)]
    pub batches_from: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct MarginArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Append a constant coordinate ρ to fit an affine separator.
    #[arg(long, allow_hyphen_values = true)]
    pub lift: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "separable")]
    pub kind: InstanceKind,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A float, `pi`, `pi/N` or `K*pi/N`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let lower = s.trim().to_ascii_lowercase();
    let (numerator, denominator) = match lower.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (lower.as_str(), None),
    };
    let factor = match numerator.strip_suffix("pi") {
        Some("") => 1.0,
        Some(k) => k
            .trim_end_matches('*')
            .parse::<f64>()
            .map_err(|_| format!("cannot parse angle '{s}'"))?,
        None => return Err(format!("cannot parse angle '{s}'")),
    };
    let divisor = match denominator {
        Some(d) => d
            .parse::<f64>()
            .map_err(|_| format!("cannot parse angle '{s}'"))?,
        None => 1.0,
    };
    Ok(factor * std::f64::consts::PI / divisor)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5"), Ok(0.5));
        assert_eq!(parse_angle("pi"), Ok(PI));
        assert_eq!(parse_angle("pi/3"), Ok(PI / 3.0));
        assert_eq!(parse_angle("PI/2"), Ok(FRAC_PI_2));
        assert_eq!(parse_angle("2*pi/6"), Ok(2.0 * PI / 6.0));
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("pi/x").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
