use std::f64::consts::{LN_2, PI};

use super::{
    solve_cpii, tw_exponent, CpiiParams, CpiiTrajectory, DEFAULT_TOL, DEFAULT_X_MAX, MIN_X,
};
use crate::error::{Error, Result};
use crate::op_engine::gue_log_hankel;
use crate::table::Table;

/// Tail anchor that leaves at least one unit of integration above `t`.
fn anchor(t: f64) -> f64 {
    DEFAULT_X_MAX.max(t + 1.0)
}

fn check_window(t1: f64, t2: f64) -> Result<()> {
    if !(t1.is_finite() && t2.is_finite() && t1 < t2) {
        return Err(Error::invalid(format!("need finite t1 < t2 (got {t1}, {t2})")));
    }
    Ok(())
}

/// `E(t1)` for the given parameters, solving only the range it needs.
fn exponent(params: &CpiiParams, t1: f64) -> Result<f64> {
    if params.coefficients() == [0.0, 0.0] {
        return Ok(0.0);
    }
    if !(t1 >= MIN_X) {
        return Err(Error::invalid(format!("t1 must be >= {MIN_X} (got {t1})")));
    }
    let x_max = anchor(t1);
    let traj = solve_cpii(params, t1, x_max, DEFAULT_TOL)?;
    tw_exponent(&traj, t1)
}

/// Single-channel reduction `q'' = 2q³ + xq` with `q ~ √(1-ω) Ai(x)`;
/// `ω = 0` is the Hastings–McLeod solution. Channel 0 of the returned
/// trajectory carries `q²`.
pub fn solve_as_pii(omega: f64, x_min: f64, x_max: f64, tol: f64) -> Result<CpiiTrajectory> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::invalid(format!("omega must lie in [0, 1] (got {omega})")));
    }
    solve_cpii(&CpiiParams::single_channel(omega)?, x_min, x_max, tol)
}

/// `F2(t) = exp(-∫_t^∞ (τ - t) q(τ; 0)² dτ)`.
pub fn tracy_widom(t: f64) -> Result<f64> {
    Ok((-exponent(&CpiiParams::single_channel(0.0)?, t)?).exp())
}

/// `F2` at many points from one solve.
pub fn tracy_widom_curve(ts: &[f64]) -> Result<Vec<f64>> {
    if ts.is_empty() {
        return Ok(Vec::new());
    }
    let lo = ts.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo >= MIN_X && hi.is_finite()) {
        return Err(Error::invalid(format!("points must be finite and >= {MIN_X}")));
    }
    let traj = solve_as_pii(0.0, lo, anchor(hi), DEFAULT_TOL)?;
    ts.iter().map(|&t| Ok((-tw_exponent(&traj, t)?).exp())).collect()
}

/// Limiting probability of no eigenvalue in `(t1, t2)` on the edge scale.
pub fn gap_probability_limit(t1: f64, t2: f64) -> Result<f64> {
    if t1 == t2 && t1.is_finite() {
        return Ok(1.0);
    }
    check_window(t1, t2)?;
    let params = CpiiParams::new(0.0, 1.0, t2 - t1)?;
    Ok((-exponent(&params, t1)?).exp())
}

/// Limiting `P(λmax < t2 | thinned λmax < t1)` with removal probability `p`.
pub fn conditional_distribution_limit(t1: f64, t2: f64, p: f64) -> Result<f64> {
    check_window(t1, t2)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("p must lie in (0, 1) (got {p})")));
    }
    let coupled = exponent(&CpiiParams::new(p, 0.0, t2 - t1)?, t1)?;
    let single = exponent(&CpiiParams::single_channel(p)?, t1)?;
    Ok((single - coupled).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelPrediction {
    /// Predicted `ln(D_n / D_n^GUE) = -E(t1)`.
    pub log_ratio: f64,
    /// Exact `ln D_n^GUE`.
    pub log_gue: f64,
}

pub fn hankel_asymptotic_prediction(
    n: usize,
    t1: f64,
    t2: f64,
    omega1: f64,
    omega2: f64,
) -> Result<HankelPrediction> {
    if n < 16 {
        return Err(Error::invalid(format!("n must be >= 16 (got {n})")));
    }
    check_window(t1, t2)?;
    let params = CpiiParams::new(omega1, omega2, t2 - t1)?;
    Ok(HankelPrediction { log_ratio: -exponent(&params, t1)?, log_gue: gue_log_hankel(n) })
}

/// Leading-order predictions for degree `n`. Polynomial values are kept as
/// logarithm and sign since they overflow quickly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpPrediction {
    pub alpha: f64,
    pub beta: f64,
    pub log_gamma_prev: f64,
    pub log_abs_pi: [f64; 2],
    pub pi_sign: [f64; 2],
}

/// Predictions at `(t1, t2)` using a trajectory solved for
/// `(ω1, ω2, s = t2 - t1)`.
///
/// The factor `(2π/c_k)^{1/2} u_k` with `u_k² = v_k = c_k φ_k²` is
/// `√(2π) φ_k`, which is real for either sign of `c_k`.
pub fn op_asymptotic_predictions(
    n: usize,
    t1: f64,
    t2: f64,
    omega1: f64,
    omega2: f64,
    traj: &CpiiTrajectory,
) -> Result<OpPrediction> {
    if n < 1 {
        return Err(Error::invalid("n must be positive"));
    }
    check_window(t1, t2)?;
    let p = traj.params;
    let matches = (p.omega1 - omega1).abs() <= 1e-12
        && (p.omega2 - omega2).abs() <= 1e-12
        && (p.s - (t2 - t1)).abs() <= 1e-12 * (1.0 + p.s.abs());
    if !matches {
        return Err(Error::invalid("trajectory was solved for different parameters"));
    }
    let point = traj.state_at(t1)?;
    let nf = n as f64;
    let v = point.v[0] + point.v[1];
    let scale = nf.powf(-1.0 / 6.0);
    let third = nf.powf(1.0 / 3.0);
    let log_gamma_prev = (0.5 * nf - 0.75) * LN_2 + (0.25 - 0.5 * nf) * nf.ln() + 0.5 * nf
        - 0.5 * PI.ln()
        + (1.0 + 0.5 * point.h / third).ln();
    let common = 0.5 * (2.0 * PI).ln() + 0.5 * nf * (0.5 * nf * std::f64::consts::E).ln()
        + nf.ln() / 6.0;
    let t = [t1, t2];
    let mut log_abs_pi = [0.0; 2];
    let mut pi_sign = [0.0; 2];
    for k in 0..2 {
        log_abs_pi[k] = common + point.phi[k].abs().ln() + t[k] * third;
        pi_sign[k] = point.phi[k].signum();
    }
    Ok(OpPrediction {
        alpha: -v * scale / 2f64.sqrt(),
        beta: (0.5 * nf).sqrt() - v * scale / 2f64.powf(1.5),
        log_gamma_prev,
        log_abs_pi,
        pi_sign,
    })
}

/// Distribution curve with columns `t, value, method`.
pub fn distribution_table(ts: &[f64], values: &[f64], method: &str) -> Table {
    let mut table = Table::new(&["t", "value", "method"]);
    for (&t, &v) in ts.iter().zip(values) {
        table.push_row(vec![t.into(), v.into(), method.into()]);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpii::second_order_residual;

    #[test]
    fn empty_interval_has_no_gap_cost() {
        assert_eq!(gap_probability_limit(-1.0, -1.0).unwrap(), 1.0);
        assert!(gap_probability_limit(0.0, -1.0).is_err());
    }

    #[test]
    fn gap_probability_decreases_with_interval() {
        let mut previous = 1.0;
        for t2 in [-1.5, -1.0, 0.0, 1.0] {
            let g = gap_probability_limit(-2.0, t2).unwrap();
            assert!(g > 0.0 && g < previous, "t2 = {t2}: {g}");
            previous = g;
        }
    }

    #[test]
    fn unit_omega_is_trivial() {
        let traj = solve_as_pii(1.0, -5.0, 12.0, 1e-11).unwrap();
        assert!(traj.v1.iter().all(|&v| v == 0.0));
        let pred = hankel_asymptotic_prediction(64, -0.5, 0.5, 1.0, 1.0).unwrap();
        assert_eq!(pred.log_ratio, 0.0);
    }

    #[test]
    fn tracy_widom_reference_values() {
        // Airy-kernel determinant evaluated in 30-digit arithmetic.
        for (t, expected) in [
            (-3.0, 0.080_319_552_939_336_8),
            (-2.0, 0.413_224_142_505_135_1),
            (0.0, 0.969_372_828_355_265_0),
        ] {
            let f = tracy_widom(t).unwrap();
            assert!((f - expected).abs() < 1e-9, "t = {t}: {f}");
        }
        let curve = tracy_widom_curve(&[-3.0, 0.0]).unwrap();
        assert!((curve[0] - tracy_widom(-3.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn hastings_mcleod_residual() {
        let traj = solve_as_pii(0.0, -8.0, 12.0, 1e-11).unwrap();
        for x in [-7.5, -4.0, 0.0, 3.0] {
            let r = second_order_residual(&traj, x).unwrap();
            assert!(r[0] < 1e-5, "x = {x}: {r:?}");
        }
    }

    #[test]
    fn conditional_law_is_a_distribution() {
        let mut previous = 0.0;
        for t2 in [-0.5, 0.5, 2.0] {
            let c = conditional_distribution_limit(-1.0, t2, 0.5).unwrap();
            assert!(c > previous && c <= 1.0, "t2 = {t2}: {c}");
            previous = c;
        }
        let far = conditional_distribution_limit(-1.0, 5.0, 0.5).unwrap();
        assert!((far - 1.0).abs() < 2e-3, "{far}");
    }

    #[test]
    fn op_predictions_need_matching_trajectory() {
        let traj = solve_cpii(&CpiiParams::new(0.4, 0.7, 1.0).unwrap(), -1.0, 12.0, 1e-11).unwrap();
        assert!(op_asymptotic_predictions(64, -0.5, 0.5, 0.4, 0.7, &traj).is_ok());
        assert!(op_asymptotic_predictions(64, -0.5, 0.7, 0.4, 0.7, &traj).is_err());
    }
}
