//! Gauss–Legendre rules.

use std::f64::consts::PI;

/// An `m`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes via Newton iteration on P_m, seeded with the Tricomi estimate.
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        let mf = m as f64;
        for i in 0..m.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(m, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        if m % 2 == 1 {
            nodes[m / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_integrate_polynomials() {
        for m in [1, 2, 5, 40, 80, 200] {
            let gl = GaussLegendre::new(m);
            let total: f64 = gl.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "m = {m}");
            for k in 0..(2 * m).min(60) {
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                let q: f64 = gl
                    .nodes
                    .iter()
                    .zip(&gl.weights)
                    .map(|(x, w)| w * x.powi(k as i32))
                    .sum();
                assert!((q - exact).abs() < 1e-13, "m = {m}, k = {k}");
            }
        }
    }

    #[test]
    fn nodes_ascending_inside_interval() {
        let gl = GaussLegendre::new(41);
        assert!(gl.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(gl.nodes.iter().all(|x| x.abs() < 1.0));
        assert!(gl.weights.iter().all(|w| *w > 0.0));
    }

    #[test]
    fn gaussian_integral_on_mapped_interval() {
        let gl = GaussLegendre::new(60);
        let q: f64 = gl.on_interval(-9.0, 9.0).map(|(x, w)| w * (-x * x).exp()).sum();
        // a single panel of width 18 is not enough for machine precision; loose check
        assert!((q - PI.sqrt()).abs() < 1e-6);
    }
}
