use super::grid::{build_quadrature_with, QuadratureGrid, DEFAULT_NODES_PER_PANEL};
use super::JumpWeightSpec;
use crate::error::{Error, Result};
use crate::table::Table;

/// Recurrence data of the monic orthogonal polynomials
/// `x π_k = π_{k+1} + α_k π_k + β_k² π_{k-1}`.
#[derive(Debug, Clone)]
pub struct RecurrenceTable {
    pub spec: JumpWeightSpec,
    pub n_max: usize,
    /// α_0 .. α_{n_max-1}
    pub alpha: Vec<f64>,
    /// `beta2[k]` is β_k² for 1 ≤ k < n_max; entry 0 is unused and zero.
    pub beta2: Vec<f64>,
    /// Leading coefficients γ_0 .. γ_{n_max-1} of the orthonormal
    /// polynomials. They underflow to zero beyond degree ~400; use
    /// `log_gamma` there.
    pub gamma: Vec<f64>,
    pub log_gamma: Vec<f64>,
    /// `log_hankel[n-1]` is ln D_n for 1 ≤ n ≤ n_max.
    pub log_hankel: Vec<f64>,
    /// Total mass ∫ w.
    pub mu0: f64,
}

/// Orthonormal polynomials times `e^{-x^2/2}`, with their derivatives
/// (the derivative acts on the polynomial only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedValues {
    /// γ_n π_n(x) e^{-x²/2}
    pub q: f64,
    /// γ_n π_n'(x) e^{-x²/2}
    pub dq: f64,
    /// γ_{n-1} π_{n-1}(x) e^{-x²/2}
    pub q_prev: f64,
    /// γ_{n-1} π_{n-1}'(x) e^{-x²/2}
    pub dq_prev: f64,
}

pub fn compute_recurrence(spec: &JumpWeightSpec, n_max: usize) -> Result<RecurrenceTable> {
    compute_recurrence_with(spec, n_max, DEFAULT_NODES_PER_PANEL)
}

pub fn compute_recurrence_with(
    spec: &JumpWeightSpec,
    n_max: usize,
    nodes_per_panel: usize,
) -> Result<RecurrenceTable> {
    let grid = build_quadrature_with(spec, n_max, nodes_per_panel)?;
    let (alpha, beta2) = lanczos(&grid, n_max)?;
    let mu0: f64 = grid.weights.iter().sum();

    let mut log_gamma = Vec::with_capacity(n_max);
    log_gamma.push(-0.5 * mu0.ln());
    for k in 1..n_max {
        log_gamma.push(log_gamma[k - 1] - 0.5 * beta2[k].ln());
    }
    let mut log_hankel = Vec::with_capacity(n_max);
    let mut acc = 0.0;
    for lg in &log_gamma {
        acc -= 2.0 * lg;
        log_hankel.push(acc);
    }
    let gamma = log_gamma.iter().map(|l| l.exp()).collect();
    Ok(RecurrenceTable {
        spec: *spec,
        n_max,
        alpha,
        beta2,
        gamma,
        log_gamma,
        log_hankel,
        mu0,
    })
}

/// Lanczos on `diag(nodes)` started from the square-root weights, with full
/// reorthogonalization (classical Gram–Schmidt applied twice).
fn lanczos(grid: &QuadratureGrid, n_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let size = grid.len();
    if size < n_max + 1 {
        return Err(Error::LossOfPositivity { degree: size, beta2: 0.0 });
    }
    let x = &grid.nodes;
    let norm = dot(&grid.sqrt_weights, &grid.sqrt_weights).sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::LossOfPositivity { degree: 0, beta2: norm * norm });
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n_max);
    basis.push(grid.sqrt_weights.iter().map(|v| v / norm).collect());

    let mut alpha = Vec::with_capacity(n_max);
    let mut beta2 = vec![0.0];
    let mut coeffs = vec![0.0; n_max];
    let mut u = vec![0.0; size];
    for k in 0..n_max {
        let q = &basis[k];
        for i in 0..size {
            u[i] = x[i] * q[i];
        }
        alpha.push(dot(q, &u));
        if k + 1 == n_max {
            break;
        }
        for _ in 0..2 {
            for (j, qj) in basis.iter().enumerate() {
                coeffs[j] = dot(qj, &u);
            }
            for (j, qj) in basis.iter().enumerate() {
                let c = coeffs[j];
                for i in 0..size {
                    u[i] -= c * qj[i];
                }
            }
        }
        let b2 = dot(&u, &u);
        if !(b2 > 0.0 && b2.is_finite()) {
            return Err(Error::LossOfPositivity { degree: k + 1, beta2: b2 });
        }
        let b = b2.sqrt();
        beta2.push(b2);
        basis.push(u.iter().map(|v| v / b).collect());
    }
    Ok((alpha, beta2))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RecurrenceTable {
    pub fn beta(&self, k: usize) -> f64 {
        self.beta2[k].sqrt()
    }

    /// ln D_n.
    pub fn log_hankel(&self, n: usize) -> f64 {
        self.log_hankel[n - 1]
    }

    /// ln(D_n / D_n^GUE) assembled from ratios close to one, so that it keeps
    /// full relative accuracy when the weight is a small perturbation of the
    /// Gaussian.
    pub fn log_hankel_ratio_gue(&self, n: usize) -> f64 {
        let nf = n as f64;
        let mut acc = nf * (self.mu0 / std::f64::consts::PI.sqrt()).ln();
        for j in 1..n {
            let jf = j as f64;
            acc += (nf - jf) * (2.0 * self.beta2[j] / jf).ln();
        }
        acc
    }

    fn check_degree(&self, n: usize, limit: usize) -> Result<()> {
        if n > limit {
            return Err(Error::invalid(format!(
                "degree {n} exceeds what a table with n_max = {} supports ({limit})",
                self.n_max
            )));
        }
        Ok(())
    }

    /// Monic π_n(x) and π_n'(x) by the forward recurrence. Requires `n ≤ n_max`.
    pub fn eval_monic(&self, n: usize, x: f64) -> Result<(f64, f64)> {
        self.check_degree(n, self.n_max)?;
        let (mut p_prev, mut p) = (0.0, 1.0);
        let (mut d_prev, mut d) = (0.0, 0.0);
        for k in 0..n {
            let b2 = self.beta2[k];
            let next = (x - self.alpha[k]) * p - b2 * p_prev;
            let dnext = (x - self.alpha[k]) * d + p - b2 * d_prev;
            p_prev = p;
            p = next;
            d_prev = d;
            d = dnext;
        }
        Ok((p, d))
    }

    /// Weighted orthonormal values at degrees `n` and `n - 1`. These stay
    /// bounded where the monic values overflow. Requires `1 ≤ n < n_max`.
    pub fn eval_weighted(&self, n: usize, x: f64) -> Result<WeightedValues> {
        if n == 0 {
            return Err(Error::invalid("weighted evaluation needs n >= 1"));
        }
        self.check_degree(n, self.n_max - 1)?;
        // p_k = γ_k π_k, kept as (mantissa, log scale) to avoid overflow
        let mut log_scale = self.log_gamma[0] - 0.5 * x * x;
        let (mut p_prev, mut p) = (0.0, 1.0);
        let (mut d_prev, mut d) = (0.0, 0.0);
        for k in 0..n {
            let b_next = self.beta(k + 1);
            let b = if k == 0 { 0.0 } else { self.beta(k) };
            let shift = x - self.alpha[k];
            let next = (shift * p - b * p_prev) / b_next;
            let dnext = (shift * d + p - b * d_prev) / b_next;
            p_prev = p;
            p = next;
            d_prev = d;
            d = dnext;
            let size = p.abs().max(d.abs());
            if size > 1e100 {
                let inv = 1.0 / size;
                p *= inv;
                d *= inv;
                p_prev *= inv;
                d_prev *= inv;
                log_scale += size.ln();
            }
        }
        let factor = log_scale.exp();
        Ok(WeightedValues {
            q: p * factor,
            dq: d * factor,
            q_prev: p_prev * factor,
            dq_prev: d_prev * factor,
        })
    }

    /// Table dump with columns `n, alpha, beta2, gamma, log_hankel, log_gamma`.
    /// Row `n` holds α_n, β_n², γ_n and ln D_{n+1}.
    pub fn to_table(&self) -> Table {
        let mut table = Table::new(&["n", "alpha", "beta2", "gamma", "log_hankel", "log_gamma"]);
        for n in 0..self.n_max {
            table.push_row(vec![
                (n as i64).into(),
                self.alpha[n].into(),
                self.beta2[n].into(),
                self.gamma[n].into(),
                self.log_hankel[n].into(),
                self.log_gamma[n].into(),
            ]);
        }
        table
            .meta("s1", self.spec.s1)
            .meta("s2", self.spec.s2)
            .meta("omega1", self.spec.omega1)
            .meta("omega2", self.spec.omega2)
            .meta("n_max", self.n_max);
        table
    }
}

/// Free-function form of [`RecurrenceTable::eval_monic`].
pub fn eval_monic_op(table: &RecurrenceTable, n: usize, x: f64) -> Result<(f64, f64)> {
    table.eval_monic(n, x)
}

/// ln D_n for the pure Gaussian weight, from the closed form
/// `(n/2) ln 2π − (n²/2) ln 2 + Σ_{k<n} ln k!`.
pub fn gue_log_hankel(n: usize) -> f64 {
    let nf = n as f64;
    let mut log_factorials = 0.0;
    // Σ_{k=1}^{n-1} ln k! = Σ_{j=1}^{n-1} (n - j) ln j
    for j in 1..n {
        log_factorials += (nf - j as f64) * (j as f64).ln();
    }
    0.5 * nf * (2.0 * std::f64::consts::PI).ln() - 0.5 * nf * nf * 2f64.ln() + log_factorials
}

/// `∂_{s1} ln D_n + ∂_{s2} ln D_n` through the Christoffel–Darboux form.
/// Requires `1 ≤ n < n_max`.
pub fn hankel_f_cd(table: &RecurrenceTable, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("the Christoffel-Darboux route needs n >= 1"));
    }
    table.check_degree(n, table.n_max - 1)?;
    let beta = table.beta(n);
    let mut total = 0.0;
    for (s, drop) in table.spec.jumps() {
        if drop == 0.0 {
            continue;
        }
        let v = table.eval_weighted(n, s)?;
        total += drop * beta * (v.dq * v.q_prev - v.q * v.dq_prev);
    }
    Ok(total)
}

/// The same quantity as `-2 Σ_{j<n} α_j`. Requires `n ≤ n_max`.
pub fn hankel_f_subleading(table: &RecurrenceTable, n: usize) -> Result<f64> {
    table.check_degree(n, table.n_max)?;
    Ok(-2.0 * table.alpha[..n].iter().sum::<f64>())
}

/// Central difference of ln D_n along the diagonal `(s1 + h, s2 + h)`.
pub fn hankel_f_finite_difference(spec: &JumpWeightSpec, n: usize, h: f64) -> Result<f64> {
    let plus = compute_recurrence(&spec.shifted(h), n)?;
    let minus = compute_recurrence(&spec.shifted(-h), n)?;
    Ok((plus.log_hankel_ratio_gue(n) - minus.log_hankel_ratio_gue(n)) / (2.0 * h))
}
