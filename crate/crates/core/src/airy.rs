//! Airy function Ai and its derivative on the real line.
//!
//! Evaluation regimes:
//!
//! * `-2.5 <= x <= 1.5`: Maclaurin series.
//! * `x >= 9`: asymptotic expansion of the exponentially decaying branch.
//! * `x <= -9`: oscillatory asymptotic expansion.
//! * everything in between: Taylor continuation of the Airy ODE `y'' = x y`
//!   from an anchor where one of the above is accurate. On the positive
//!   side the continuation runs towards smaller `x`, which is the growing
//!   direction of Ai, so rounding errors do not amplify.
//!
//! The asymptotic series only reach 1e-12 relative accuracy once
//! `(2/3)|x|^{3/2}` exceeds about 14, which is why they are not used
//! closer to the origin.

use std::f64::consts::PI;

/// Ai(0)
pub const AI0: f64 = 0.355_028_053_887_817_2;
/// -Ai'(0)
pub const AIP0: f64 = 0.258_819_403_792_806_8;

const SERIES_POS: f64 = 1.5;
const SERIES_NEG: f64 = -2.5;
const ASYMPTOTIC: f64 = 9.0;
const TAYLOR_STEP: f64 = 0.75;

/// Value and derivative of Ai at a real point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub x: f64,
    pub ai: f64,
    pub aip: f64,
}

/// Evaluates Ai(x) and Ai'(x).
pub fn airy_ai(x: f64) -> AiryValue {
    let (ai, aip) = if (SERIES_NEG..=SERIES_POS).contains(&x) {
        maclaurin(x)
    } else if x >= ASYMPTOTIC {
        asymptotic_positive(x)
    } else if x <= -ASYMPTOTIC {
        asymptotic_negative(-x)
    } else if x > 0.0 {
        let (y, dy) = asymptotic_positive(ASYMPTOTIC);
        continue_taylor(ASYMPTOTIC, y, dy, x)
    } else {
        continue_taylor(0.0, AI0, -AIP0, x)
    };
    AiryValue { x, ai, aip }
}

/// Shorthand for `airy_ai(x).ai`.
pub fn ai(x: f64) -> f64 {
    airy_ai(x).ai
}

fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = sum 1*4*...*(3k-2) x^{3k}/(3k)!, g = sum 2*5*...*(3k-1) x^{3k+1}/(3k+1)!
    let (mut f, mut g) = (1.0, x);
    let (mut df, mut dg) = (0.0, 1.0);
    let (mut tf, mut tg) = (1.0, x);
    let mut tdf = 0.0;
    let mut tdg = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        tdf = if k == 1 {
            0.5 * x * x
        } else {
            tdf * x3 / ((3.0 * kf - 1.0) * (3.0 * kf - 3.0))
        };
        tdg *= x3 / ((3.0 * kf) * (3.0 * kf - 2.0));
        f += tf;
        g += tg;
        df += tdf;
        dg += tdg;
        let scale = f.abs() + g.abs() + df.abs() + dg.abs();
        if tf.abs() + tg.abs() + tdf.abs() + tdg.abs() <= 1e-18 * scale {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * df - AIP0 * dg)
}

/// Coefficients u_k of the Airy asymptotic series, u_0 = 1.
fn u_coefficients(count: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(count);
    u.push(1.0);
    for k in 1..count {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(
            prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf),
        );
    }
    u
}

fn v_from_u(u: &[f64]) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(k, uk)| {
            let kf = k as f64;
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk
        })
        .collect()
}

/// Sums `sum_k sign_k c_k / zeta^k` until the terms stop decreasing.
fn truncated_series(coeffs: &[f64], zeta: f64, alternate: bool) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut last = f64::INFINITY;
    for (k, c) in coeffs.iter().enumerate() {
        let term = c * power;
        if term.abs() >= last {
            break;
        }
        sum += if alternate && k % 2 == 1 { -term } else { term };
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        last = term.abs();
        power /= zeta;
    }
    sum
}

fn asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let u = u_coefficients(40);
    let v = v_from_u(&u);
    let su = truncated_series(&u, zeta, true);
    let sv = truncated_series(&v, zeta, true);
    let decay = (-zeta).exp();
    let x4 = x.sqrt().sqrt();
    let norm = 0.5 / PI.sqrt();
    (norm * decay / x4 * su, -norm * decay * x4 * sv)
}

fn asymptotic_negative(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let u = u_coefficients(60);
    let v = v_from_u(&u);
    // even / odd parts with alternating signs
    let split = |c: &[f64]| {
        let even: Vec<f64> = c.iter().step_by(2).copied().collect();
        let odd: Vec<f64> = c.iter().skip(1).step_by(2).copied().collect();
        let z2 = zeta * zeta;
        (
            truncated_series(&even, z2, true),
            truncated_series(&odd, z2, true) / zeta,
        )
    };
    let (ue, uo) = split(&u);
    let (ve, vo) = split(&v);
    let phase = zeta - 0.25 * PI;
    let (sin, cos) = phase.sin_cos();
    let z4 = z.sqrt().sqrt();
    let norm = 1.0 / PI.sqrt();
    let ai = norm / z4 * (cos * ue + sin * uo);
    let aip = norm * z4 * (sin * ve - cos * vo);
    (ai, aip)
}

/// Advances (y, y') of `y'' = x y` from `x0` by `h` using the local Taylor series.
fn taylor_step(x0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    // b_k = a_k h^k with (k+2)(k+1) a_{k+2} = x0 a_k + a_{k-1}
    let h2 = h * h;
    let h3 = h2 * h;
    let mut b = [y, dy * h, 0.5 * x0 * y * h2];
    let mut value = b[0] + b[1] + b[2];
    let mut deriv = b[1] + 2.0 * b[2];
    let mut small = 0;
    let mut k = 1usize;
    loop {
        // b_{k+2} from b_k and b_{k-1}
        let next = (x0 * h2 * b[1] + h3 * b[0]) / (((k + 2) * (k + 1)) as f64);
        value += next;
        deriv += (k + 2) as f64 * next;
        b = [b[1], b[2], next];
        k += 1;
        if next.abs() <= 1e-18 * (value.abs() + deriv.abs()) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        if k > 400 {
            break;
        }
    }
    (value, deriv / h)
}

fn continue_taylor(x0: f64, y0: f64, dy0: f64, x: f64) -> (f64, f64) {
    let steps = ((x - x0).abs() / TAYLOR_STEP).ceil().max(1.0) as usize;
    let h = (x - x0) / steps as f64;
    let (mut y, mut dy) = (y0, dy0);
    for i in 0..steps {
        let xi = x0 + i as f64 * h;
        (y, dy) = taylor_step(xi, y, dy, h);
    }
    (y, dy)
}

/// Antiderivative data for the Ai² tail integrals used to close
/// integrals over `[X, ∞)` analytically.
///
/// Returns `(∫_X^∞ Ai², ∫_X^∞ τ Ai²)`.
pub fn ai_squared_tail_moments(x: f64) -> (f64, f64) {
    let AiryValue { ai, aip, .. } = airy_ai(x);
    let m0 = aip * aip - x * ai * ai;
    let m1 = -(x * x * ai * ai - x * aip * aip + ai * aip) / 3.0;
    (m0, m1)
}
