use super::JumpWeightSpec;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

pub const MAX_DEGREE: usize = 500;
pub const DEFAULT_NODES_PER_PANEL: usize = 40;

/// Composite Gauss–Legendre discretization of the jump weight.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub nodes: Vec<f64>,
    /// Quadrature weights with the full weight function folded in.
    pub weights: Vec<f64>,
    /// Square roots of `weights`, computed without squaring the Gaussian
    /// factor so they stay representable further into the tails.
    pub sqrt_weights: Vec<f64>,
    pub panel_boundaries: Vec<f64>,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ f(x) w(x) dx` on the grid, summed in node order.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }

    /// Moment `∫ x^k w(x) dx`.
    pub fn moment(&self, k: u32) -> f64 {
        self.integrate(|x| x.powi(k as i32))
    }
}

/// Half-width of the truncated real line for a given spec and degree.
pub fn truncation_radius(spec: &JumpWeightSpec, n_max: usize) -> f64 {
    let jump_reach = spec.s1.abs().max(spec.s2.abs());
    jump_reach + 9f64.max((2.0 * n_max as f64).sqrt() + 6.0)
}

/// Grid adequate for recurrence coefficients up to degree `n_max`.
pub fn build_quadrature(spec: &JumpWeightSpec, n_max: usize) -> Result<QuadratureGrid> {
    build_quadrature_with(spec, n_max, DEFAULT_NODES_PER_PANEL)
}

/// As [`build_quadrature`] with an explicit node count per unit-width panel.
pub fn build_quadrature_with(
    spec: &JumpWeightSpec,
    n_max: usize,
    nodes_per_panel: usize,
) -> Result<QuadratureGrid> {
    if n_max == 0 || n_max > MAX_DEGREE {
        return Err(Error::invalid(format!(
            "n_max must lie in 1..={MAX_DEGREE} (got {n_max})"
        )));
    }
    if nodes_per_panel < DEFAULT_NODES_PER_PANEL {
        return Err(Error::invalid(format!(
            "at least {DEFAULT_NODES_PER_PANEL} nodes per panel are required"
        )));
    }
    let radius = truncation_radius(spec, n_max);
    let mut breaks = vec![-radius];
    for s in [spec.s1, spec.s2] {
        if s > -radius && s < radius && s > *breaks.last().unwrap() {
            breaks.push(s);
        }
    }
    breaks.push(radius);

    let mut panel_boundaries = vec![breaks[0]];
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let count = (b - a).ceil().max(1.0) as usize;
        let width = (b - a) / count as f64;
        for i in 1..count {
            panel_boundaries.push(a + i as f64 * width);
        }
        panel_boundaries.push(b);
    }

    let rule = GaussLegendre::new(nodes_per_panel);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut sqrt_weights = Vec::new();
    for pair in panel_boundaries.windows(2) {
        let step = spec.step(0.5 * (pair[0] + pair[1]));
        if step == 0.0 {
            continue;
        }
        for (x, w) in rule.on_interval(pair[0], pair[1]) {
            let root = (w * step).sqrt() * (-0.5 * x * x).exp();
            if root == 0.0 {
                continue;
            }
            nodes.push(x);
            weights.push(root * root);
            sqrt_weights.push(root);
        }
    }
    Ok(QuadratureGrid { nodes, weights, sqrt_weights, panel_boundaries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Adaptive Simpson on a smooth integrand, used as an independent oracle.
    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    #[test]
    fn gaussian_mass() {
        for (s1, s2) in [(0.0, 1.0), (-3.0, 2.5), (5.0, 7.0)] {
            let spec = JumpWeightSpec::new(s1, s2, 1.0, 1.0).unwrap();
            let grid = build_quadrature(&spec, 1).unwrap();
            assert!((grid.moment(0) - PI.sqrt()).abs() < 1e-13);
            assert!(grid.moment(1).abs() < 1e-14);
        }
    }

    #[test]
    fn gap_mass_against_adaptive_oracle() {
        let spec = JumpWeightSpec::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let grid = build_quadrature(&spec, 1).unwrap();
        let hole = adaptive_simpson(&|x: f64| (-x * x).exp(), 0.0, 1.0, 1e-16);
        assert!((hole - 0.746_824_132_812_427_0).abs() < 1e-14);
        assert!((grid.moment(0) - (PI.sqrt() - hole)).abs() < 1e-13);
    }

    #[test]
    fn jumps_are_panel_boundaries() {
        let spec = JumpWeightSpec::new(-0.37, 1.234, 0.3, 0.6).unwrap();
        let grid = build_quadrature(&spec, 30).unwrap();
        assert!(grid.panel_boundaries.contains(&-0.37));
        assert!(grid.panel_boundaries.contains(&1.234));
        assert!(grid.panel_boundaries.windows(2).all(|p| p[1] > p[0] && p[1] - p[0] <= 1.0 + 1e-12));
        assert!(grid.weights.iter().all(|w| *w > 0.0));
    }

    #[test]
    fn moments_stable_under_doubling() {
        let spec = JumpWeightSpec::new(0.3, 1.1, 0.4, 0.7).unwrap();
        let n = 20;
        let coarse = build_quadrature(&spec, n).unwrap();
        let fine = build_quadrature_with(&spec, n, 2 * DEFAULT_NODES_PER_PANEL).unwrap();
        for k in 0..=(2 * n as u32) {
            let (a, b) = (coarse.moment(k), fine.moment(k));
            let scale = fine.integrate(|x| x.abs().powi(k as i32));
            assert!((a - b).abs() <= 1e-13 * scale, "k = {k}: {a} vs {b}");
        }
    }

    #[test]
    fn rejects_degree_out_of_range() {
        let spec = JumpWeightSpec::gaussian();
        assert!(build_quadrature(&spec, 0).is_err());
        assert!(build_quadrature(&spec, 501).is_err());
    }
}
