//! Coupled Painlevé II system with Airy-tail data at `+∞`.
//!
//! Each channel is integrated through an amplitude `φ_k` with `v_k = c_k φ_k²`
//! and `w_k = φ_k'/φ_k`, where
//!
//! ```text
//! φ_1'' = x φ_1 + 2Vφ_1,   φ_2'' = (x + s) φ_2 + 2Vφ_2,   V = c_1φ_1² + c_2φ_2²
//! φ_1 ~ Ai(x),   φ_2 ~ Ai(x + s)   as x → +∞
//! c_1 = 1 - ω1,  c_2 = ω1 - ω2
//! ```
//!
//! This keeps every quantity real for either sign of `c_k`, and `v_k` can
//! never change sign. The integrals `∫V`, `∫τV` and `∫H` are carried along
//! as extra components so the exponent is available by two routes.

pub(crate) mod integrator;
mod limits;

pub use limits::{
    conditional_distribution_limit, distribution_table, gap_probability_limit,
    hankel_asymptotic_prediction, op_asymptotic_predictions, solve_as_pii, tracy_widom,
    tracy_widom_curve, HankelPrediction, OpPrediction,
};

use crate::airy::{airy_ai, ai_squared_tail_moments};
use crate::error::{Error, Result};
use crate::table::Table;
use integrator::{advance, StepFailure, System};

pub const DEFAULT_X_MAX: f64 = 12.0;
pub const DEFAULT_TOL: f64 = 1e-11;
pub const MIN_X: f64 = -10.0;
/// Target macro step of the stored grid.
pub const GRID_STEP: f64 = 1.0 / 32.0;
/// Largest allowed difference between the two exponent routes.
pub const ROUTE_TOLERANCE: f64 = 1e-6;
const BLOW_UP: f64 = 1e4;

const PHI1: usize = 0;
const DPHI1: usize = 1;
const PHI2: usize = 2;
const DPHI2: usize = 3;
const MASS: usize = 4;
const MOMENT: usize = 5;
const H_INTEGRAL: usize = 6;

type State = [f64; 7];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpiiParams {
    pub omega1: f64,
    pub omega2: f64,
    pub s: f64,
}

impl CpiiParams {
    pub fn new(omega1: f64, omega2: f64, s: f64) -> Result<Self> {
        if !(omega1.is_finite() && omega2.is_finite() && omega1 >= 0.0 && omega2 >= 0.0) {
            return Err(Error::invalid(format!(
                "omega1 and omega2 must be finite and nonnegative (got {omega1}, {omega2})"
            )));
        }
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::invalid(format!("separation s must be finite and >= 0 (got {s})")));
        }
        let params = CpiiParams { omega1, omega2, s };
        if params.is_coupled() && s == 0.0 {
            return Err(Error::invalid("coupled system requires s > 0"));
        }
        Ok(params)
    }

    /// Parameters of the single-channel (Ablowitz–Segur) reduction with
    /// tail `√(1-ω) Ai(x)`.
    pub fn single_channel(omega: f64) -> Result<Self> {
        Self::new(omega, omega, 0.0)
    }

    /// Tail coefficients `[1 - ω1, ω1 - ω2]`.
    pub fn coefficients(&self) -> [f64; 2] {
        [1.0 - self.omega1, self.omega1 - self.omega2]
    }

    pub fn shifts(&self) -> [f64; 2] {
        [0.0, self.s]
    }

    pub fn is_coupled(&self) -> bool {
        let [c1, c2] = self.coefficients();
        c1 != 0.0 && c2 != 0.0
    }
}

/// `-(v1+v2)² - (v1+v2)x + v1w1² + v2w2² - s v2`
pub fn hamiltonian_ii(v1: f64, v2: f64, w1: f64, w2: f64, x: f64, s: f64) -> f64 {
    let v = v1 + v2;
    -v * v - v * x + v1 * w1 * w1 + v2 * w2 * w2 - s * v2
}

struct CoupledSystem {
    c: [f64; 2],
    shift: [f64; 2],
}

impl CoupledSystem {
    fn potential(&self, y: &State) -> f64 {
        self.c[0] * y[PHI1] * y[PHI1] + self.c[1] * y[PHI2] * y[PHI2]
    }

    fn hamiltonian(&self, x: f64, y: &State) -> f64 {
        let v = self.potential(y);
        -v * v - v * x + self.c[0] * y[DPHI1] * y[DPHI1] + self.c[1] * y[DPHI2] * y[DPHI2]
            - self.shift[1] * self.c[1] * y[PHI2] * y[PHI2]
    }
}

impl System<7> for CoupledSystem {
    fn rhs(&self, x: f64, y: &State) -> State {
        let v = self.potential(y);
        [
            y[DPHI1],
            (x + self.shift[0] + 2.0 * v) * y[PHI1],
            y[DPHI2],
            (x + self.shift[1] + 2.0 * v) * y[PHI2],
            -v,
            -x * v,
            -self.hamiltonian(x, y),
        ]
    }

    fn groups(&self) -> &[&[usize]] {
        &[&[PHI1, DPHI1], &[PHI2, DPHI2], &[MASS, MOMENT, H_INTEGRAL]]
    }

    fn blow_up(&self, y: &State) -> bool {
        let amp1 = self.c[0].abs().sqrt() * y[PHI1].abs();
        let amp2 = self.c[1].abs().sqrt() * y[PHI2].abs();
        !(amp1 < BLOW_UP && amp2 < BLOW_UP)
    }
}

/// Solution values at a single point, with integrals taken to `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpiiPoint {
    pub x: f64,
    pub phi: [f64; 2],
    pub dphi: [f64; 2],
    pub v: [f64; 2],
    pub w: [f64; 2],
    pub h: f64,
    /// `∫_x^∞ (v1 + v2)`
    pub mass: f64,
    /// `∫_x^∞ τ (v1 + v2) dτ`
    pub first_moment: f64,
    /// `∫_x^∞ H`
    pub h_integral: f64,
}

#[derive(Debug, Clone)]
pub struct CpiiTrajectory {
    pub params: CpiiParams,
    pub tol: f64,
    /// Descending, from `x_max` to `x_min`.
    pub x_grid: Vec<f64>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    pub h: Vec<f64>,
    states: Vec<State>,
    /// `[∫, ∫τ]` of `v1 + v2` beyond `x_max`, from the Airy tail.
    tail: [f64; 2],
}

/// Integrates the system backward from `x_max` to `x_min`.
pub fn solve_cpii(params: &CpiiParams, x_min: f64, x_max: f64, tol: f64) -> Result<CpiiTrajectory> {
    if !(x_max >= 8.0 && x_max.is_finite()) {
        return Err(Error::invalid(format!("x_max must be >= 8 (got {x_max})")));
    }
    if !(x_min >= MIN_X && x_min < x_max) {
        return Err(Error::invalid(format!(
            "x_min must lie in [{MIN_X}, x_max) (got {x_min})"
        )));
    }
    if !(1e-13..=1e-8).contains(&tol) {
        return Err(Error::invalid(format!("tol must lie in [1e-13, 1e-8] (got {tol})")));
    }
    let sys = system(params);
    let steps = ((x_max - x_min) / GRID_STEP).ceil().max(1.0) as usize;
    let dx = (x_max - x_min) / steps as f64;

    let a1 = airy_ai(x_max + sys.shift[0]);
    let a2 = airy_ai(x_max + sys.shift[1]);
    let mut y: State = [a1.ai, a1.aip, a2.ai, a2.aip, 0.0, 0.0, 0.0];
    let mut x_grid = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    x_grid.push(x_max);
    states.push(y);
    for i in 1..=steps {
        let x = x_grid[i - 1];
        let next_x = if i == steps { x_min } else { x_max - i as f64 * dx };
        y = advance(&sys, x, &y, next_x - x, tol).map_err(|f| step_error(params, f))?;
        x_grid.push(next_x);
        states.push(y);
    }

    let mut tail = [0.0; 2];
    for k in 0..2 {
        if sys.c[k] == 0.0 {
            continue;
        }
        let arg = x_max + sys.shift[k];
        let (m0, m1) = ai_squared_tail_moments(arg);
        tail[0] += sys.c[k] * m0;
        tail[1] += sys.c[k] * (m1 - sys.shift[k] * m0);
    }

    let mut traj = CpiiTrajectory {
        params: *params,
        tol,
        x_grid,
        v1: Vec::new(),
        v2: Vec::new(),
        w1: Vec::new(),
        w2: Vec::new(),
        h: Vec::new(),
        states,
        tail,
    };
    let points: Vec<CpiiPoint> =
        traj.x_grid.iter().zip(&traj.states).map(|(&x, st)| traj.point(x, st)).collect();
    for p in points {
        traj.v1.push(p.v[0]);
        traj.v2.push(p.v[1]);
        traj.w1.push(p.w[0]);
        traj.w2.push(p.w[1]);
        traj.h.push(p.h);
    }
    Ok(traj)
}

fn system(params: &CpiiParams) -> CoupledSystem {
    CoupledSystem { c: params.coefficients(), shift: params.shifts() }
}

fn step_error(params: &CpiiParams, failure: StepFailure) -> Error {
    match failure {
        StepFailure::BlowUp { x } if params.is_coupled() => Error::PoleOrSignChange {
            x,
            reason: "solution left the pole-free regime".into(),
        },
        StepFailure::BlowUp { x } => Error::BlowUp { x },
        StepFailure::Underflow { x, h } => Error::StepSizeUnderflow { x, h },
    }
}

impl CpiiTrajectory {
    pub fn x_max(&self) -> f64 {
        self.x_grid[0]
    }

    pub fn x_min(&self) -> f64 {
        *self.x_grid.last().unwrap()
    }

    fn point(&self, x: f64, st: &State) -> CpiiPoint {
        let sys = system(&self.params);
        let phi = [st[PHI1], st[PHI2]];
        let dphi = [st[DPHI1], st[DPHI2]];
        let v = [sys.c[0] * phi[0] * phi[0], sys.c[1] * phi[1] * phi[1]];
        let x_max = self.x_max();
        CpiiPoint {
            x,
            phi,
            dphi,
            v,
            w: [dphi[0] / phi[0], dphi[1] / phi[1]],
            h: sys.hamiltonian(x, st),
            mass: st[MASS] + self.tail[0],
            first_moment: st[MOMENT] + self.tail[1],
            h_integral: st[H_INTEGRAL] + self.tail[1] - x_max * self.tail[0],
        }
    }

    /// Stored point `i` of the grid.
    pub fn point_at_index(&self, i: usize) -> CpiiPoint {
        self.point(self.x_grid[i], &self.states[i])
    }

    /// Solution at an arbitrary `x` in `[x_min, x_max]`, integrated from the
    /// nearest grid point above it.
    pub fn state_at(&self, x: f64) -> Result<CpiiPoint> {
        let (lo, hi) = (self.x_min(), self.x_max());
        if !(x >= lo && x <= hi) {
            return Err(Error::invalid(format!("x = {x} outside the solved range [{lo}, {hi}]")));
        }
        let last = self.x_grid.len() - 1;
        let dx = (hi - lo) / last as f64;
        let mut i = (((hi - x) / dx).floor() as usize).min(last);
        while i > 0 && self.x_grid[i] < x {
            i -= 1;
        }
        while i < last && self.x_grid[i + 1] >= x {
            i += 1;
        }
        if self.x_grid[i] == x {
            return Ok(self.point_at_index(i));
        }
        let st = advance(&system(&self.params), self.x_grid[i], &self.states[i], x - self.x_grid[i], self.tol)
            .map_err(|f| step_error(&self.params, f))?;
        Ok(self.point(x, &st))
    }

    /// Largest `|H(x) - ∫_x^∞ (v1+v2)|` on the grid: the integrated form of
    /// `dH/dx = -(v1 + v2)`.
    pub fn hamiltonian_drift(&self) -> f64 {
        (0..self.x_grid.len())
            .map(|i| {
                let p = self.point_at_index(i);
                (p.h - p.mass).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Whether each `v_k` has kept the sign of its tail coefficient.
    pub fn channel_signs_preserved(&self) -> bool {
        let [c1, c2] = self.params.coefficients();
        let ok = |c: f64, v: &[f64]| v.iter().all(|&v| v == 0.0 || v.signum() == c.signum());
        ok(c1, &self.v1) && ok(c2, &self.v2)
    }

    /// `u_k` up to the factor `√sign(c_k)`: `√|c_k| φ_k` on the grid.
    pub fn amplitude(&self, channel: usize) -> Vec<f64> {
        let c = self.params.coefficients()[channel].abs().sqrt();
        let idx = if channel == 0 { PHI1 } else { PHI2 };
        self.states.iter().map(|st| c * st[idx]).collect()
    }

    /// Trajectory report with columns `x, v1, v2, w1, w2, H`.
    pub fn to_table(&self) -> Table {
        let mut table = Table::new(&["x", "v1", "v2", "w1", "w2", "H"]);
        table
            .meta("omega1", self.params.omega1)
            .meta("omega2", self.params.omega2)
            .meta("s", self.params.s)
            .meta("tol", self.tol)
            .meta("x_min", self.x_min())
            .meta("x_max", self.x_max());
        for i in 0..self.x_grid.len() {
            table.push_row(vec![
                self.x_grid[i].into(),
                self.v1[i].into(),
                self.v2[i].into(),
                self.w1[i].into(),
                self.w2[i].into(),
                self.h[i].into(),
            ]);
        }
        table
    }
}

/// The exponent `∫_t^∞ (τ - t)(v1 + v2) dτ` by both routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentRoutes {
    /// `∫τV - t∫V`
    pub direct: f64,
    /// `∫H`
    pub hamiltonian: f64,
}

impl ExponentRoutes {
    pub fn difference(&self) -> f64 {
        (self.direct - self.hamiltonian).abs()
    }
}

pub fn tw_exponent_routes(traj: &CpiiTrajectory, t1: f64) -> Result<ExponentRoutes> {
    if t1 > traj.x_max() {
        // Only the Airy tail contributes past the anchor.
        let sys = system(&traj.params);
        let mut e = 0.0;
        for k in 0..2 {
            if sys.c[k] != 0.0 {
                let (m0, m1) = ai_squared_tail_moments(t1 + sys.shift[k]);
                e += sys.c[k] * (m1 - (sys.shift[k] + t1) * m0);
            }
        }
        return Ok(ExponentRoutes { direct: e, hamiltonian: e });
    }
    let p = traj.state_at(t1)?;
    Ok(ExponentRoutes { direct: p.first_moment - t1 * p.mass, hamiltonian: p.h_integral })
}

/// `E(t1) = ∫_{t1}^∞ (τ - t1)(v1 + v2) dτ`, returned from the Hamiltonian
/// route after checking it against the direct integral.
pub fn tw_exponent(traj: &CpiiTrajectory, t1: f64) -> Result<f64> {
    let routes = tw_exponent_routes(traj, t1)?;
    if !(routes.difference() <= ROUTE_TOLERANCE) {
        return Err(Error::RouteDisagreement {
            first: routes.direct,
            second: routes.hamiltonian,
            diff: routes.difference(),
        });
    }
    Ok(routes.hamiltonian)
}

/// Relative residuals of `v_k'' - v_k'²/(2v_k) - 4v_k(v1 + v2 + (x + shift_k)/2)`
/// with `v_k''` from a central difference of the exact `v_k' = 2c_kφ_kφ_k'`.
/// A channel with `v_k ≡ 0` reports 0.
pub fn second_order_residual(traj: &CpiiTrajectory, x: f64) -> Result<[f64; 2]> {
    let step = traj.tol.powf(0.25);
    let lo = traj.state_at(x - step)?;
    let mid = traj.state_at(x)?;
    let hi = traj.state_at(x + step)?;
    let c = traj.params.coefficients();
    let shift = traj.params.shifts();
    let dv = |p: &CpiiPoint, k: usize| 2.0 * c[k] * p.phi[k] * p.dphi[k];
    let mut out = [0.0; 2];
    for k in 0..2 {
        let v = mid.v[k];
        if v == 0.0 {
            continue;
        }
        let d2 = (dv(&hi, k) - dv(&lo, k)) / (2.0 * step);
        let d1 = dv(&mid, k);
        let rhs = d1 * d1 / (2.0 * v) + 4.0 * v * (mid.v[0] + mid.v[1] + 0.5 * (x + shift[k]));
        out[k] = crate::cpiv::relative_residual(d2, rhs);
    }
    Ok(out)
}
