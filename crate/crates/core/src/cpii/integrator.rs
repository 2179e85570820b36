//! Gragg–Bulirsch–Stoer extrapolation for smooth first-order systems.

/// Substep counts of the modified midpoint rule (Deuflhard's sequence).
const SUBSTEPS: [usize; 10] = [2, 4, 6, 8, 10, 12, 14, 16, 18, 20];
const MAX_SPLITS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum StepFailure {
    /// Step halving went below a representable size.
    Underflow { x: f64, h: f64 },
    /// A component exceeded the blow-up bound.
    BlowUp { x: f64 },
}

/// Per-component error scales. Components in the same group share the
/// largest magnitude of the group, so a value passing through zero is
/// measured against its partner (e.g. a function against its derivative).
pub(crate) trait System<const N: usize> {
    fn rhs(&self, x: f64, y: &[f64; N]) -> [f64; N];
    fn groups(&self) -> &[&[usize]];
    fn blow_up(&self, y: &[f64; N]) -> bool;
}

fn modified_midpoint<const N: usize>(
    sys: &impl System<N>,
    x: f64,
    y: &[f64; N],
    big: f64,
    steps: usize,
) -> [f64; N] {
    let h = big / steps as f64;
    let mut prev = *y;
    let f0 = sys.rhs(x, y);
    let mut cur = [0.0; N];
    for i in 0..N {
        cur[i] = y[i] + h * f0[i];
    }
    for m in 1..steps {
        let f = sys.rhs(x + m as f64 * h, &cur);
        let mut next = [0.0; N];
        for i in 0..N {
            next[i] = prev[i] + 2.0 * h * f[i];
        }
        prev = cur;
        cur = next;
    }
    let f = sys.rhs(x + big, &cur);
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = 0.5 * (prev[i] + cur[i] + h * f[i]);
    }
    out
}

fn scaled_error<const N: usize>(
    sys: &impl System<N>,
    start: &[f64; N],
    best: &[f64; N],
    diff: &[f64; N],
) -> f64 {
    let mut worst: f64 = 0.0;
    for group in sys.groups() {
        let mut scale: f64 = 1e-300;
        for &i in group.iter() {
            scale = scale.max(start[i].abs()).max(best[i].abs());
        }
        for &i in group.iter() {
            worst = worst.max(diff[i].abs() / scale);
        }
    }
    worst
}

/// One extrapolated step; `None` if the tableau did not converge.
fn extrapolated_step<const N: usize>(
    sys: &impl System<N>,
    x: f64,
    y: &[f64; N],
    big: f64,
    tol: f64,
) -> Option<[f64; N]> {
    let mut tableau: Vec<[f64; N]> = Vec::with_capacity(SUBSTEPS.len());
    for (j, &nj) in SUBSTEPS.iter().enumerate() {
        let mut row = vec![modified_midpoint(sys, x, y, big, nj)];
        for k in 1..=j {
            let ratio = (nj as f64 / SUBSTEPS[j - k] as f64).powi(2) - 1.0;
            let mut next = [0.0; N];
            for i in 0..N {
                next[i] = row[k - 1][i] + (row[k - 1][i] - tableau[k - 1][i]) / ratio;
            }
            row.push(next);
        }
        let best = row[j];
        if j >= 2 {
            let mut diff = [0.0; N];
            for i in 0..N {
                diff[i] = best[i] - row[j - 1][i];
            }
            if !best.iter().all(|v| v.is_finite()) {
                return None;
            }
            if scaled_error(sys, y, &best, &diff) <= tol {
                return Some(best);
            }
        }
        tableau = row;
    }
    None
}

/// Advances `y` from `x` to `x + big`, halving recursively until every
/// piece meets `tol`.
pub(crate) fn advance<const N: usize>(
    sys: &impl System<N>,
    x: f64,
    y: &[f64; N],
    big: f64,
    tol: f64,
) -> Result<[f64; N], StepFailure> {
    advance_rec(sys, x, y, big, tol, 0)
}

fn advance_rec<const N: usize>(
    sys: &impl System<N>,
    x: f64,
    y: &[f64; N],
    big: f64,
    tol: f64,
    depth: u32,
) -> Result<[f64; N], StepFailure> {
    if let Some(out) = extrapolated_step(sys, x, y, big, tol) {
        if sys.blow_up(&out) {
            return Err(StepFailure::BlowUp { x: x + big });
        }
        return Ok(out);
    }
    if depth >= MAX_SPLITS || big.abs() < 1e-12 {
        return Err(StepFailure::Underflow { x, h: big });
    }
    let half = 0.5 * big;
    let mid = advance_rec(sys, x, y, half, tol, depth + 1)?;
    advance_rec(sys, x + half, &mid, half, tol, depth + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Oscillator;

    impl System<2> for Oscillator {
        fn rhs(&self, _x: f64, y: &[f64; 2]) -> [f64; 2] {
            [y[1], -y[0]]
        }
        fn groups(&self) -> &[&[usize]] {
            &[&[0, 1]]
        }
        fn blow_up(&self, y: &[f64; 2]) -> bool {
            y[0].abs() > 1e6
        }
    }

    struct Riccati;

    impl System<1> for Riccati {
        fn rhs(&self, _x: f64, y: &[f64; 1]) -> [f64; 1] {
            [y[0] * y[0]]
        }
        fn groups(&self) -> &[&[usize]] {
            &[&[0]]
        }
        fn blow_up(&self, y: &[f64; 1]) -> bool {
            y[0].abs() > 1e8
        }
    }

    #[test]
    fn harmonic_oscillator_to_high_accuracy() {
        let mut y = [1.0, 0.0];
        let mut x = 0.0;
        for _ in 0..100 {
            y = advance(&Oscillator, x, &y, 0.1, 1e-13).unwrap();
            x += 0.1;
        }
        assert!((y[0] - 10f64.cos()).abs() < 1e-11);
        assert!((y[1] + 10f64.sin()).abs() < 1e-11);
    }

    #[test]
    fn backward_direction() {
        let y = advance(&Oscillator, 1.0, &[1f64.cos(), -1f64.sin()], -1.0, 1e-13).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-13 && y[1].abs() < 1e-13);
    }

    #[test]
    fn blow_up_detected() {
        // y' = y², y(0) = 1 has a pole at x = 1
        let mut y = [1.0];
        let mut x = 0.0;
        let mut failed = false;
        for _ in 0..40 {
            match advance(&Riccati, x, &y, 0.05, 1e-12) {
                Ok(next) => y = next,
                Err(_) => {
                    failed = true;
                    break;
                }
            }
            x += 0.05;
        }
        assert!(failed && x < 1.0 + 1e-9);
    }
}
