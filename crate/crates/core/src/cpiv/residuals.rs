use super::{reconstruct_at, relative_residual, CpivState};
use crate::error::{Error, Result};
use crate::op_engine::JumpWeightSpec;
use crate::table::Table;

pub const DEFAULT_STEP: f64 = 1e-3;

/// Reconstructed states at centers `x - h`, `x`, `x + h` with the jump
/// half-gap held fixed.
#[derive(Debug, Clone)]
pub struct Stencil {
    pub spec: JumpWeightSpec,
    pub states: [CpivState; 3],
    pub h: f64,
}

impl Stencil {
    pub fn build(spec: &JumpWeightSpec, n: usize, h: f64) -> Result<Self> {
        if !(1e-4..=1e-2).contains(&h) {
            return Err(Error::invalid(format!("step h = {h} outside [1e-4, 1e-2]")));
        }
        let states = [
            reconstruct_at(&spec.shifted(-h), n)?,
            reconstruct_at(spec, n)?,
            reconstruct_at(&spec.shifted(h), n)?,
        ];
        Ok(Stencil { spec: *spec, states, h })
    }

    fn center(&self) -> &CpivState {
        &self.states[1]
    }

    fn first(&self, f: impl Fn(&CpivState) -> f64) -> f64 {
        (f(&self.states[2]) - f(&self.states[0])) / (2.0 * self.h)
    }

    /// Derivative of `f/g` from central differences of `f` and `g`. Used
    /// for `b_k = (a_k b_k) / a_k`, whose numerator and denominator are
    /// smooth while `b_k` itself has poles where `π_{n-1}(s_k) = 0`.
    fn quotient(&self, f: impl Fn(&CpivState) -> f64, g: impl Fn(&CpivState) -> f64) -> f64 {
        let (fc, gc) = (f(self.center()), g(self.center()));
        (self.first(&f) * gc - fc * self.first(&g)) / (gc * gc)
    }

    fn second(&self, f: impl Fn(&CpivState) -> f64) -> f64 {
        (f(&self.states[2]) - 2.0 * f(&self.states[1]) + f(&self.states[0])) / (self.h * self.h)
    }
}

/// A differential equation checked by finite differences.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeResidual {
    pub quantity: &'static str,
    pub finite_difference: f64,
    pub right_hand_side: f64,
    /// `|fd - rhs| / max(1, |rhs|)`
    pub residual: f64,
}

impl OdeResidual {
    fn new(quantity: &'static str, finite_difference: f64, right_hand_side: f64) -> Self {
        OdeResidual {
            quantity,
            finite_difference,
            right_hand_side,
            residual: relative_residual(finite_difference, right_hand_side),
        }
    }
}

/// Residuals of the first-order system
///
/// ```text
/// (ln y)' = 2(a1 + a2 - x)
/// a1' = -2a1(a1 + a2 + b1 - x + s)
/// a2' = -2a2(a1 + a2 + b2 - x - s)
/// b1' = b1² + 2b1(2a1 + a2 - x + s) + 2(a2b2 + n)
/// b2' = b2² + 2b2(a1 + 2a2 - x - s) + 2(a1b1 + n)
/// ```
///
/// `y` is checked through its logarithm since it underflows at large n.
pub fn cpiv_ode_residual(stencil: &Stencil) -> [OdeResidual; 5] {
    let CpivState { x, s, a1, a2, b1, b2, n, .. } = *stencil.center();
    let nf = n as f64;
    [
        OdeResidual::new("log_y", stencil.first(|st| st.log_y_im), 2.0 * (a1 + a2 - x)),
        OdeResidual::new("a1", stencil.first(|st| st.a1), -2.0 * a1 * (a1 + a2 + b1 - x + s)),
        OdeResidual::new("a2", stencil.first(|st| st.a2), -2.0 * a2 * (a1 + a2 + b2 - x - s)),
        OdeResidual::new(
            "b1",
            stencil.quotient(|st| st.a1 * st.b1, |st| st.a1),
            b1 * b1 + 2.0 * b1 * (2.0 * a1 + a2 - x + s) + 2.0 * (a2 * b2 + nf),
        ),
        OdeResidual::new(
            "b2",
            stencil.quotient(|st| st.a2 * st.b2, |st| st.a2),
            b2 * b2 + 2.0 * b2 * (a1 + 2.0 * a2 - x - s) + 2.0 * (a1 * b1 + nf),
        ),
    ]
}

/// Residuals of the second-order equations obtained by eliminating `b1, b2`:
///
/// ```text
/// a1'' = a1'²/(2a1) + 6a1(a1+a2)² - 8a1(a1+a2)x + 8a1²s - 2(2n-1)a1 + 2a1(x-s)²
/// a2'' = a2'²/(2a2) + 6a2(a1+a2)² - 8a2(a1+a2)x - 8a2²s - 2(2n-1)a2 + 2a2(x+s)²
/// ```
pub fn cpiv_second_order_residual(stencil: &Stencil) -> [OdeResidual; 2] {
    let CpivState { x, s, a1, a2, n, .. } = *stencil.center();
    let m = 2.0 * (2.0 * n as f64 - 1.0);
    let sum = a1 + a2;
    let rhs = |a: f64, da: f64, sign: f64| {
        da * da / (2.0 * a) + 6.0 * a * sum * sum - 8.0 * a * sum * x + sign * 8.0 * a * a * s
            - m * a
            + 2.0 * a * (x - sign * s).powi(2)
    };
    let (d1, d2) = (stencil.first(|st| st.a1), stencil.first(|st| st.a2));
    [
        OdeResidual::new("a1_second_order", stencil.second(|st| st.a1), rhs(a1, d1, 1.0)),
        OdeResidual::new("a2_second_order", stencil.second(|st| st.a2), rhs(a2, d2, -1.0)),
    ]
}

/// Residual of classical Painlevé IV for `y(ξ) = -2 a1(ξ + s)`,
/// `y'' = y'²/(2y) + (3/2)y³ + 4ξy² + 2(ξ² + 1 - 2n)y`, which holds in the
/// limit `a2 → 0`.
pub fn piv_reduction_residual(stencil: &Stencil) -> OdeResidual {
    let CpivState { x, s, a1, n, .. } = *stencil.center();
    let xi = x - s;
    let y = -2.0 * a1;
    let dy = -2.0 * stencil.first(|st| st.a1);
    let d2y = -2.0 * stencil.second(|st| st.a1);
    let rhs = dy * dy / (2.0 * y)
        + 1.5 * y * y * y
        + 4.0 * xi * y * y
        + 2.0 * (xi * xi + 1.0 - 2.0 * n as f64) * y;
    OdeResidual::new("piv", d2y, rhs)
}

/// Residual report with columns `quantity, residual, h, n, s1, s2, omega1, omega2`.
pub fn residual_table(stencil: &Stencil, residuals: &[OdeResidual]) -> Table {
    let mut table =
        Table::new(&["quantity", "residual", "h", "n", "s1", "s2", "omega1", "omega2"]);
    let spec = stencil.spec;
    for r in residuals {
        table.push_row(vec![
            r.quantity.into(),
            r.residual.into(),
            stencil.h.into(),
            stencil.states[1].n.into(),
            spec.s1.into(),
            spec.s2.into(),
            spec.omega1.into(),
            spec.omega2.into(),
        ]);
    }
    table
}
