use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::airy::{ai_squared_tail_moments, airy_ai, AiryValue};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Length of the truncated half-line beyond `t2`.
pub const TRUNCATION: f64 = 14.0;
pub const DEFAULT_FREDHOLM_NODES: usize = 60;
const CONVERGENCE: f64 = 1e-8;

/// Airy kernel `(Ai(x)Ai'(y) - Ai'(x)Ai(y)) / (x - y)`, with the confluent
/// value `Ai'(x)² - x Ai(x)²` on the diagonal.
pub fn airy_kernel(x: f64, y: f64) -> f64 {
    kernel(&airy_ai(x), &airy_ai(y))
}

fn kernel(a: &AiryValue, b: &AiryValue) -> f64 {
    if a.x == b.x {
        a.aip * a.aip - a.x * a.ai * a.ai
    } else {
        (a.ai * b.aip - a.aip * b.ai) / (a.x - b.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FredholmEstimate {
    /// Determinant with doubled node count.
    pub value: f64,
    /// Change from `m` to `2m` nodes per segment.
    pub change: f64,
    /// Bound on the truncated symbol mass, `∫_{t2+L}^∞ K(x, x) dx` times
    /// the largest symbol value.
    pub tail_bound: f64,
}

/// Nodes and symbol-weighted quadrature weights with `m` nodes per segment.
fn discretize(t1: f64, t2: f64, symbol: [f64; 2], m: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::new(m);
    let mut nodes = Vec::with_capacity(2 * m);
    let mut weights = Vec::with_capacity(2 * m);
    if symbol[0] != 0.0 {
        for (x, w) in rule.on_interval(t1, t2) {
            nodes.push(x);
            weights.push(w * symbol[0]);
        }
    }
    if symbol[1] != 0.0 {
        // x = t2 + u² clusters nodes near the jump.
        for (u, w) in rule.on_interval(0.0, TRUNCATION.sqrt()) {
            nodes.push(t2 + u * u);
            weights.push(2.0 * u * w * symbol[1]);
        }
    }
    (nodes, weights)
}

fn determinant(t1: f64, t2: f64, symbol: [f64; 2], m: usize) -> f64 {
    let (nodes, weights) = discretize(t1, t2, symbol, m);
    let size = nodes.len();
    if size == 0 {
        return 1.0;
    }
    let airy: Vec<AiryValue> = nodes.iter().map(|&x| airy_ai(x)).collect();
    let entries: Vec<f64> = (0..size)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (airy, weights) = (&airy, &weights);
            (0..size).map(move |j| {
                let delta = if i == j { 1.0 } else { 0.0 };
                delta - kernel(&airy[i], &airy[j]) * weights[j]
            })
        })
        .collect();
    DMatrix::from_row_slice(size, size, &entries).determinant()
}

/// `det(I - K σ)` on `(t1, ∞)` with symbol `σ = 1 - ω1` on `(t1, t2)` and
/// `1 - ω2` beyond `t2`, evaluated at `m` and `2m` nodes per segment.
pub fn fredholm_estimate(
    t1: f64,
    t2: f64,
    omega1: f64,
    omega2: f64,
    m_nodes: usize,
) -> Result<FredholmEstimate> {
    if !(t1.is_finite() && t2.is_finite() && t1 < t2) {
        return Err(Error::invalid(format!("need finite t1 < t2 (got {t1}, {t2})")));
    }
    if !(omega1.is_finite() && omega2.is_finite()) {
        return Err(Error::invalid("omega1 and omega2 must be finite"));
    }
    if !(20..=200).contains(&m_nodes) {
        return Err(Error::invalid(format!("m_nodes must lie in [20, 200] (got {m_nodes})")));
    }
    let symbol = [1.0 - omega1, 1.0 - omega2];
    let coarse = determinant(t1, t2, symbol, m_nodes);
    let fine = determinant(t1, t2, symbol, 2 * m_nodes);
    let change = (fine - coarse).abs();
    if !(change <= CONVERGENCE) {
        return Err(Error::NonConvergence { change });
    }
    let far = t2 + TRUNCATION;
    let (m0, m1) = ai_squared_tail_moments(far);
    let tail_bound = symbol[1].abs() * (m1 - far * m0).abs();
    Ok(FredholmEstimate { value: fine, change, tail_bound })
}

pub fn fredholm_airy_discontinuous(
    t1: f64,
    t2: f64,
    omega1: f64,
    omega2: f64,
    m_nodes: usize,
) -> Result<f64> {
    Ok(fredholm_estimate(t1, t2, omega1, omega2, m_nodes)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_continuous_on_the_diagonal() {
        for x in [-4.0, -0.3, 0.0, 2.5] {
            let diag = airy_kernel(x, x);
            for d in [1e-4, -1e-4, 1e-6] {
                let off = airy_kernel(x, x + d);
                assert!((off - diag).abs() < 2.0 * d.abs(), "x = {x}: {off} vs {diag}");
            }
        }
    }

    #[test]
    fn zero_symbol_gives_one() {
        assert_eq!(fredholm_airy_discontinuous(-2.0, 0.0, 1.0, 1.0, 40).unwrap(), 1.0);
    }

    #[test]
    fn tracy_widom_independent_of_split() {
        // Airy-kernel determinant evaluated in 30-digit arithmetic.
        let expected = 0.413_224_142_505_135_1;
        for t2 in [-1.5, 0.0, 3.0] {
            let est = fredholm_estimate(-2.0, t2, 0.0, 0.0, 40).unwrap();
            assert!((est.value - expected).abs() < 1e-12, "t2 = {t2}: {est:?}");
            assert!(est.tail_bound < 1e-20);
        }
    }

    #[test]
    fn convergence_is_geometric() {
        let d: Vec<f64> =
            [4, 6, 8, 24].iter().map(|&m| determinant(-3.0, -1.0, [1.0, 0.0], m)).collect();
        let errors: Vec<f64> = d[..3].iter().map(|v| (v - d[3]).abs()).collect();
        assert!(errors[1] < 0.05 * errors[0] && errors[2] < 0.05 * errors[1], "{errors:?}");
    }

    #[test]
    fn gap_probability_lies_in_unit_interval() {
        let g = fredholm_airy_discontinuous(-2.0, 0.0, 0.0, 1.0, 40).unwrap();
        assert!(g > 0.0 && g < 1.0);
        assert!(fredholm_estimate(-2.0, 0.0, 0.0, 1.0, 10).is_err());
    }
}
