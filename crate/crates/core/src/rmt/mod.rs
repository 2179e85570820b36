//! Independent oracles: sampled GUE spectra and Airy-kernel Fredholm
//! determinants.
//!
//! Spectra follow the `e^{-λ²}` convention of the orthogonal-polynomial
//! side: the tridiagonal model has diagonal entries `N(0, 1/2)` and
//! off-diagonal entries `χ_{2k}/2`, so that `E[Σλ²] = n²/2`.

mod fredholm;
mod monte_carlo;

pub use fredholm::{
    airy_kernel, fredholm_airy_discontinuous, fredholm_estimate, FredholmEstimate,
    DEFAULT_FREDHOLM_NODES, TRUNCATION,
};
pub use monte_carlo::{
    mc_conditional_distribution, mc_gap_probability, mc_report_table, MCEstimate, MIN_ACCEPTED,
    MIN_SAMPLES,
};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::error::{Error, Result};

pub const MAX_SIZE: usize = 2000;

/// Eigenvalues of one sampled matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub seed: u64,
    pub n: usize,
}

fn check_size(n: usize) -> Result<()> {
    if !(2..=MAX_SIZE).contains(&n) {
        return Err(Error::invalid(format!("matrix size must lie in 2..={MAX_SIZE} (got {n})")));
    }
    Ok(())
}

/// Random symmetric tridiagonal matrix with GUE eigenvalue statistics.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    diag: Vec<f64>,
    /// Squared off-diagonal entries.
    off2: Vec<f64>,
}

/// Reusable sampler for a fixed size.
pub(crate) struct GueSampler {
    normal: Normal<f64>,
    gammas: Vec<Gamma<f64>>,
}

impl GueSampler {
    pub(crate) fn new(n: usize) -> Self {
        GueSampler {
            normal: Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).unwrap(),
            // χ²_{2k}/4 is Gamma(k, 1/2).
            gammas: (1..n).rev().map(|k| Gamma::new(k as f64, 0.5).unwrap()).collect(),
        }
    }

    pub(crate) fn sample(&self, rng: &mut impl Rng, out: &mut Tridiagonal) {
        for d in out.diag.iter_mut() {
            *d = self.normal.sample(rng);
        }
        for (b, g) in out.off2.iter_mut().zip(&self.gammas) {
            *b = g.sample(rng);
        }
    }
}

impl Tridiagonal {
    pub(crate) fn zeros(n: usize) -> Self {
        Tridiagonal { diag: vec![0.0; n], off2: vec![0.0; n - 1] }
    }

    pub(crate) fn len(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub(crate) fn count_below(&self, x: f64) -> usize {
        const PIVMIN: f64 = 1e-300;
        let mut count = 0;
        let mut d = self.diag[0] - x;
        for i in 0..self.diag.len() {
            if i > 0 {
                d = self.diag[i] - x - self.off2[i - 1] / d;
            }
            if d.abs() < PIVMIN {
                d = -PIVMIN;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off2[i - 1].sqrt() } else { 0.0 };
            let right = if i + 1 < n { self.off2[i].sqrt() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// All eigenvalues by bisection, ascending.
    pub(crate) fn eigenvalues(&self) -> Vec<f64> {
        let (lo, hi) = self.gershgorin();
        (0..self.len())
            .map(|k| {
                let (mut a, mut b) = (lo, hi);
                // Invariant: count_below(a) <= k < count_below(b).
                while b - a > 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    if self.count_below(mid) > k {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }
}

/// Deterministic RNG for stream `stream` of a run seeded with `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Samples an `n × n` GUE spectrum.
pub fn sample_gue_spectrum(n: usize, seed: u64) -> Result<SpectrumSample> {
    check_size(n)?;
    let mut matrix = Tridiagonal::zeros(n);
    GueSampler::new(n).sample(&mut stream_rng(seed, 0), &mut matrix);
    Ok(SpectrumSample { eigenvalues: matrix.eigenvalues(), seed, n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_reference(t: &Tridiagonal) -> Vec<f64> {
        // Jacobi rotations on the dense matrix, independent of bisection.
        let n = t.len();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = t.diag[i];
            if i + 1 < n {
                a[i][i + 1] = t.off2[i].sqrt();
                a[i + 1][i] = a[i][i + 1];
            }
        }
        for _ in 0..100 {
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let tt = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let tt = if theta == 0.0 { 1.0 } else { tt };
                    let c = 1.0 / (tt * tt + 1.0).sqrt();
                    let s = tt * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn bisection_matches_jacobi() {
        let mut t = Tridiagonal::zeros(12);
        GueSampler::new(12).sample(&mut stream_rng(3, 0), &mut t);
        let bis = t.eigenvalues();
        let jac = dense_reference(&t);
        for (a, b) in bis.iter().zip(&jac) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert_eq!(t.count_below(bis[4] + 1e-9), 5);
    }

    #[test]
    fn deterministic_and_sorted() {
        let a = sample_gue_spectrum(50, 11).unwrap();
        let b = sample_gue_spectrum(50, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert_ne!(a.eigenvalues, sample_gue_spectrum(50, 12).unwrap().eigenvalues);
        assert!(sample_gue_spectrum(1, 0).is_err());
        assert!(sample_gue_spectrum(2001, 0).is_err());
    }

    /// `n = 2`: `E[λ1 + λ2] = 0` and `E[λ1² + λ2²]` against 2-d quadrature of
    /// `(λ1 - λ2)² e^{-λ1² - λ2²}`, which gives exactly 2.
    #[test]
    fn two_by_two_moments() {
        let samples = 200_000u64;
        let sampler = GueSampler::new(2);
        let mut t = Tridiagonal::zeros(2);
        let mut rng = stream_rng(5, 0);
        let (mut sum, mut sum_sq, mut sq, mut sq_sq) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..samples {
            sampler.sample(&mut rng, &mut t);
            let trace = t.diag[0] + t.diag[1];
            let frob = t.diag[0].powi(2) + t.diag[1].powi(2) + 2.0 * t.off2[0];
            sum += trace;
            sum_sq += trace * trace;
            sq += frob;
            sq_sq += frob * frob;
        }
        let nf = samples as f64;
        let se_mean = ((sum_sq / nf - (sum / nf).powi(2)) / nf).sqrt();
        assert!((sum / nf).abs() < 3.0 * se_mean);

        let grid = crate::quadrature::GaussLegendre::new(80);
        let (mut num, mut den) = (0.0, 0.0);
        for (x, wx) in grid.on_interval(-8.0, 8.0) {
            for (y, wy) in grid.on_interval(-8.0, 8.0) {
                let d = (x - y).powi(2) * (-x * x - y * y).exp() * wx * wy;
                num += (x * x + y * y) * d;
                den += d;
            }
        }
        let exact = num / den;
        assert!((exact - 2.0).abs() < 1e-12);
        let se = ((sq_sq / nf - (sq / nf).powi(2)) / nf).sqrt();
        assert!((sq / nf - exact).abs() < 3.0 * se, "{} vs {exact}", sq / nf);
    }
}
