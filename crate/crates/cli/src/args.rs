use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "cpainleve", version, about = "Gaussian weights with jumps, coupled Painlevé systems and their edge limits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recurrence coefficients and log Hankel determinants up to degree n
    Recurrence(Params),
    /// ln D_n, its ratio to the GUE value and the diagonal derivative
    Hankel(Params),
    /// Finite-degree identity suite
    VerifyThm1(Params),
    /// Finite-difference residuals of the coupled Painlevé IV system
    CpivResiduals(Params),
    /// Distance of the finite-n system from its edge limit
    CpivScaling(Params),
    /// Solve the coupled Painlevé II system and dump the trajectory
    CpiiSolve(Params),
    /// Limiting probability of no eigenvalue in (t1, t2)
    GapLimit(Params),
    /// Limiting law of the largest eigenvalue given the thinned maximum
    ConditionalLimit(Params),
    /// Tracy-Widom distribution curve
    Tw(Params),
    /// ln(D_n / D_n^GUE) against its edge-scaling prediction
    HankelAsymptotics(Params),
    /// Recurrence data at the edge against leading-order predictions
    OpAsymptotics(Params),
    /// Monte Carlo gap probability
    McGap(Params),
    /// Monte Carlo conditional distribution of the largest eigenvalue
    McConditional(Params),
    /// Airy-kernel Fredholm determinant with a two-step symbol
    FredholmOracle(Params),
}

impl Command {
    pub fn split(self) -> (&'static str, Params) {
        match self {
            Command::Recurrence(p) => ("recurrence", p),
            Command::Hankel(p) => ("hankel", p),
            Command::VerifyThm1(p) => ("verify-thm1", p),
            Command::CpivResiduals(p) => ("cpiv-residuals", p),
            Command::CpivScaling(p) => ("cpiv-scaling", p),
            Command::CpiiSolve(p) => ("cpii-solve", p),
            Command::GapLimit(p) => ("gap-limit", p),
            Command::ConditionalLimit(p) => ("conditional-limit", p),
            Command::Tw(p) => ("tw", p),
            Command::HankelAsymptotics(p) => ("hankel-asymptotics", p),
            Command::OpAsymptotics(p) => ("op-asymptotics", p),
            Command::McGap(p) => ("mc-gap", p),
            Command::McConditional(p) => ("mc-conditional", p),
            Command::FredholmOracle(p) => ("fredholm-oracle", p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Oracle {
    None,
    Fredholm,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every parameter a subcommand may read. The same keys are accepted in
/// the TOML config file, with `-` or `_` separators.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// First jump location
    #[arg(long, allow_negative_numbers = true)]
    pub s1: Option<f64>,
    /// Second jump location
    #[arg(long, allow_negative_numbers = true)]
    pub s2: Option<f64>,
    /// Weight factor between the jumps
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "omega1")]
    pub w1: Option<f64>,
    /// Weight factor beyond the second jump
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "omega2")]
    pub w2: Option<f64>,
    /// Separation of the two channels of the limit system
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Degree or matrix size
    #[arg(long)]
    pub n: Option<usize>,
    /// First edge coordinate
    #[arg(long, allow_negative_numbers = true)]
    pub t1: Option<f64>,
    /// Second edge coordinate
    #[arg(long, allow_negative_numbers = true)]
    pub t2: Option<f64>,
    /// Thinning probability
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Threshold for the largest eigenvalue (mc-conditional)
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Conditioning level for the thinned maximum (mc-conditional)
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count
    #[arg(long)]
    pub samples: Option<u64>,
    /// ODE tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "x-min")]
    pub x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "x-max")]
    pub x_max: Option<f64>,
    /// Finite-difference step
    #[arg(long)]
    pub h: Option<f64>,
    /// Quadrature nodes per segment for Fredholm determinants
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Number of curve points (tw)
    #[arg(long)]
    pub points: Option<usize>,
    /// Independent cross-check
    #[arg(long, value_enum)]
    pub oracle: Option<Oracle>,
    /// Output file; stdout when absent. Relative paths resolve against
    /// $CPAINLEVE_OUT_DIR when set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML file with default parameter values
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Params {
    /// Fills every unset field from `other`.
    pub fn or(self, other: Params) -> Params {
        macro_rules! pick {
            ($($f:ident),*) => { Params { $($f: self.$f.or(other.$f)),* } };
        }
        pick!(
            s1, s2, w1, w2, s, n, t1, t2, p, x, y, seed, samples, tol, x_min, x_max, h, nodes,
            points, oracle, out, format, config
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_config() {
        let flags = Params { n: Some(12), ..Params::default() };
        let file: Params = toml::from_str("n = 10\nomega1 = 0.4\nx-min = -3.0\noracle = \"mc\"").unwrap();
        let merged = flags.or(file);
        assert_eq!(merged.n, Some(12));
        assert_eq!(merged.w1, Some(0.4));
        assert_eq!(merged.x_min, Some(-3.0));
        assert_eq!(merged.oracle, Some(Oracle::Mc));
        assert_eq!(merged.s1, None);
    }

    #[test]
    fn negative_values_parse_as_numbers() {
        let cli = Cli::try_parse_from(["cpainleve", "gap-limit", "--t1", "-2", "--t2", "-0.5"]).unwrap();
        let (name, p) = cli.command.split();
        assert_eq!(name, "gap-limit");
        assert_eq!((p.t1, p.t2), (Some(-2.0), Some(-0.5)));
    }
}
