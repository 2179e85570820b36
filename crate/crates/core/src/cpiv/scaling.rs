use std::f64::consts::LN_2;

use super::reconstruct_at;
use crate::cpii::CpiiTrajectory;
use crate::error::{Error, Result};
use crate::op_engine::JumpWeightSpec;

/// Jump location `√(2n) + t / (√2 n^{1/6})` on the soft-edge scale.
pub fn edge_jumps(n: usize, t: f64) -> f64 {
    let nf = n as f64;
    (2.0 * nf).sqrt() + t / (2f64.sqrt() * nf.powf(1.0 / 6.0))
}

/// Distance of the finite-`n` system from its edge limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingDeviation {
    pub n: usize,
    /// `|a_k √2 n^{1/6} + v_k(t1)|`
    pub a: [f64; 2],
    /// `|b_k / √(2n) - 1|`
    pub b: [f64; 2],
    /// `|y_im / (2 (2/n)^{n-1/2} e^{-n-(t1+t2) n^{1/3}}) - 1|`
    pub y: f64,
}

impl ScalingDeviation {
    pub fn max(&self) -> f64 {
        self.a.iter().chain(&self.b).copied().fold(self.y, f64::max)
    }
}

pub fn cpiv_scaling_check(
    n: usize,
    t1: f64,
    t2: f64,
    omega1: f64,
    omega2: f64,
    traj: &CpiiTrajectory,
) -> Result<ScalingDeviation> {
    if !(t1 < t2) {
        return Err(Error::invalid(format!("need t1 < t2 (got {t1}, {t2})")));
    }
    let p = traj.params;
    if (p.omega1 - omega1).abs() > 1e-12
        || (p.omega2 - omega2).abs() > 1e-12
        || (p.s - (t2 - t1)).abs() > 1e-12 * (1.0 + p.s)
    {
        return Err(Error::invalid("trajectory was solved for different parameters"));
    }
    let spec = JumpWeightSpec::new(edge_jumps(n, t1), edge_jumps(n, t2), omega1, omega2)?;
    let state = reconstruct_at(&spec, n)?;
    let limit = traj.state_at(t1)?;

    let nf = n as f64;
    let a_scale = 2f64.sqrt() * nf.powf(1.0 / 6.0);
    let b_scale = (2.0 * nf).sqrt();
    let log_y_lead =
        LN_2 + (nf - 0.5) * (2.0 / nf).ln() - nf - (t1 + t2) * nf.powf(1.0 / 3.0);
    Ok(ScalingDeviation {
        n,
        a: [
            (state.a1 * a_scale + limit.v[0]).abs(),
            (state.a2 * a_scale + limit.v[1]).abs(),
        ],
        b: [(state.b1 / b_scale - 1.0).abs(), (state.b2 / b_scale - 1.0).abs()],
        y: (state.log_y_im - log_y_lead).exp_m1().abs(),
    })
}
