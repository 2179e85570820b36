use rand::Rng;
use rayon::prelude::*;

use super::{check_size, stream_rng, GueSampler, Tridiagonal};
use crate::error::{Error, Result};
use crate::table::Table;

pub const MIN_SAMPLES: u64 = 10_000;
pub const MIN_ACCEPTED: u64 = 100;
/// Samples per RNG stream. Streams are the unit of parallel work, so the
/// result does not depend on the number of worker threads.
const CHUNK: u64 = 2048;

/// Binomial frequency estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// Samples the frequency is taken over (accepted samples for
    /// conditional estimates).
    pub n_samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    fn from_counts(hits: u64, n_samples: u64, seed: u64) -> Self {
        let p = hits as f64 / n_samples as f64;
        MCEstimate {
            estimate: p,
            stderr: (p * (1.0 - p) / n_samples as f64).sqrt(),
            n_samples,
            seed,
        }
    }
}

enum Outcome {
    Rejected,
    Miss,
    Hit,
}

/// Runs `trial` on `n_samples` independent matrices and returns
/// `(accepted, hits)`.
fn run<F>(n: usize, n_samples: u64, seed: u64, trial: F) -> (u64, u64)
where
    F: Fn(&Tridiagonal, &mut rand_chacha::ChaCha8Rng) -> Outcome + Sync,
{
    let sampler = GueSampler::new(n);
    let chunks = n_samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let mut matrix = Tridiagonal::zeros(n);
            let count = CHUNK.min(n_samples - c * CHUNK);
            let (mut accepted, mut hits) = (0u64, 0u64);
            for _ in 0..count {
                sampler.sample(&mut rng, &mut matrix);
                match trial(&matrix, &mut rng) {
                    Outcome::Rejected => {}
                    Outcome::Miss => accepted += 1,
                    Outcome::Hit => {
                        accepted += 1;
                        hits += 1;
                    }
                }
            }
            (accepted, hits)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

fn check_samples(n_samples: u64) -> Result<()> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::invalid(format!(
            "at least {MIN_SAMPLES} samples are required (got {n_samples})"
        )));
    }
    Ok(())
}

/// Frequency of samples with no eigenvalue in `(s1, s2)`.
pub fn mc_gap_probability(n: usize, s1: f64, s2: f64, n_samples: u64, seed: u64) -> Result<MCEstimate> {
    check_size(n)?;
    check_samples(n_samples)?;
    if !(s1 < s2) {
        return Err(Error::invalid(format!("need s1 < s2 (got {s1}, {s2})")));
    }
    let (_, hits) = run(n, n_samples, seed, |m, _| {
        if m.count_below(s2) == m.count_below(s1) { Outcome::Hit } else { Outcome::Miss }
    });
    Ok(MCEstimate::from_counts(hits, n_samples, seed))
}

/// Frequency of `λmax < x` among samples whose thinned spectrum, each
/// eigenvalue removed independently with probability `p`, lies below `y`.
pub fn mc_conditional_distribution(
    n: usize,
    x: f64,
    y: f64,
    p: f64,
    n_samples: u64,
    seed: u64,
) -> Result<MCEstimate> {
    check_size(n)?;
    check_samples(n_samples)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("p must lie in (0, 1) (got {p})")));
    }
    if x.is_nan() || y.is_nan() {
        return Err(Error::invalid("x and y must be numbers"));
    }
    let (accepted, hits) = run(n, n_samples, seed, |m, rng| {
        // Only eigenvalues at or above y can violate the condition.
        let above = n - m.count_below(y);
        if (0..above).any(|_| !rng.random_bool(p)) {
            return Outcome::Rejected;
        }
        if m.count_below(x) == n { Outcome::Hit } else { Outcome::Miss }
    });
    if accepted < MIN_ACCEPTED {
        return Err(Error::InsufficientConditioning { accepted, required: MIN_ACCEPTED });
    }
    Ok(MCEstimate::from_counts(hits, accepted, seed))
}

/// One-row report with columns `n, s1, s2, p, estimate, stderr, n_samples, seed`.
/// `p` is `NaN` for unthinned estimates.
pub fn mc_report_table(n: usize, s1: f64, s2: f64, p: Option<f64>, est: &MCEstimate) -> Table {
    let mut table =
        Table::new(&["n", "s1", "s2", "p", "estimate", "stderr", "n_samples", "seed"]);
    table.push_row(vec![
        n.into(),
        s1.into(),
        s2.into(),
        p.unwrap_or(f64::NAN).into(),
        est.estimate.into(),
        est.stderr.into(),
        est.n_samples.into(),
        est.seed.into(),
    ]);
    table
}
