use cpainleve_core::cpii::{
    conditional_distribution_limit, distribution_table, gap_probability_limit,
    hankel_asymptotic_prediction, op_asymptotic_predictions, solve_cpii, tracy_widom_curve,
    CpiiParams, CpiiTrajectory, DEFAULT_TOL, DEFAULT_X_MAX, MIN_X,
};
use cpainleve_core::cpiv::{
    cpiv_ode_residual, cpiv_scaling_check, cpiv_second_order_residual, edge_jumps, identity_table,
    residual_table, verify_identities, Stencil, DEFAULT_STEP,
};
use cpainleve_core::op_engine::{
    compute_recurrence, gue_log_hankel, hankel_f_cd, hankel_f_finite_difference,
    hankel_f_subleading, FD_STEP,
};
use cpainleve_core::rmt::{
    fredholm_estimate, mc_conditional_distribution, mc_gap_probability, mc_report_table,
    DEFAULT_FREDHOLM_NODES,
};
use cpainleve_core::table::Cell;
use cpainleve_core::{JumpWeightSpec, Table};

use crate::args::{Oracle, Params};
use crate::Failure;

pub const DEFAULT_SAMPLES: u64 = 200_000;
pub const IDENTITY_THRESHOLD: f64 = 1e-7;
/// Right end of the `mc` oracle's gap when it estimates a distribution
/// function, far beyond any eigenvalue.
const FAR: f64 = 1e3;

pub struct Report {
    pub table: Table,
    /// Set when the report was produced but fails its own check.
    pub verdict: Option<Failure>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Report { table, verdict: None }
    }
}

/// Records every parameter a command reads, with defaults filled in, so the
/// effective configuration can be echoed into the output header.
#[derive(Default)]
struct Echo(Vec<(&'static str, Cell)>);

impl Echo {
    fn req<T: Into<Cell> + Copy>(&mut self, key: &'static str, value: Option<T>) -> Result<T, Failure> {
        let v = value.ok_or_else(|| Failure::Usage(format!("missing required parameter --{key}")))?;
        self.0.push((key, v.into()));
        Ok(v)
    }

    fn or<T: Into<Cell> + Copy>(&mut self, key: &'static str, value: Option<T>, default: T) -> T {
        let v = value.unwrap_or(default);
        self.0.push((key, v.into()));
        v
    }

    fn text(&mut self, key: &'static str, value: &str) {
        self.0.push((key, value.into()));
    }

    fn spec(&mut self, p: &Params) -> Result<JumpWeightSpec, Failure> {
        let s1 = self.req("s1", p.s1)?;
        let s2 = self.req("s2", p.s2)?;
        let w1 = self.req("w1", p.w1)?;
        let w2 = self.req("w2", p.w2)?;
        Ok(JumpWeightSpec::new(s1, s2, w1, w2)?)
    }

    fn edge(&mut self, p: &Params) -> Result<(f64, f64, f64, f64), Failure> {
        Ok((
            self.req("t1", p.t1)?,
            self.req("t2", p.t2)?,
            self.req("w1", p.w1)?,
            self.req("w2", p.w2)?,
        ))
    }

    fn oracle(&mut self, p: &Params) -> Oracle {
        let oracle = p.oracle.unwrap_or(Oracle::None);
        self.text("oracle", match oracle {
            Oracle::None => "none",
            Oracle::Fredholm => "fredholm",
            Oracle::Mc => "mc",
        });
        oracle
    }

    fn mc_run(&mut self, p: &Params, default_n: usize) -> (usize, u64, u64) {
        (
            self.or("n", p.n, default_n),
            self.or("samples", p.samples, DEFAULT_SAMPLES),
            self.or("seed", p.seed, 0),
        )
    }
}

pub fn dispatch(name: &'static str, p: &Params) -> Result<Report, Failure> {
    let mut echo = Echo::default();
    let mut report = match name {
        "recurrence" => recurrence(&mut echo, p)?,
        "hankel" => hankel(&mut echo, p)?,
        "verify-thm1" => verify_thm1(&mut echo, p)?,
        "cpiv-residuals" => cpiv_residuals(&mut echo, p)?,
        "cpiv-scaling" => cpiv_scaling(&mut echo, p)?,
        "cpii-solve" => cpii_solve(&mut echo, p)?,
        "gap-limit" => gap_limit(&mut echo, p)?,
        "conditional-limit" => conditional_limit(&mut echo, p)?,
        "tw" => tw(&mut echo, p)?,
        "hankel-asymptotics" => hankel_asymptotics(&mut echo, p)?,
        "op-asymptotics" => op_asymptotics(&mut echo, p)?,
        "mc-gap" => mc_gap(&mut echo, p)?,
        "mc-conditional" => mc_conditional(&mut echo, p)?,
        "fredholm-oracle" => fredholm_oracle(&mut echo, p)?,
        other => unreachable!("unknown command {other}"),
    };
    // Effective configuration first, then whatever the report adds.
    let own = std::mem::take(&mut report.table.meta);
    report.table.meta("command", name);
    for (key, value) in echo.0 {
        report.table.meta(key, value);
    }
    for (key, value) in own {
        if !report.table.meta.iter().any(|(k, _)| *k == key) {
            report.table.meta.push((key, value));
        }
    }
    Ok(report)
}

fn recurrence(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let spec = e.spec(p)?;
    let n = e.req("n", p.n)?;
    Ok(compute_recurrence(&spec, n)?.to_table().into())
}

fn hankel(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let spec = e.spec(p)?;
    let n = e.req("n", p.n)?;
    let h = e.or("h", p.h, FD_STEP);
    let table = compute_recurrence(&spec, n + 1)?;
    let mut out = Table::new(&[
        "n", "log_hankel", "log_hankel_gue", "log_ratio_gue", "f_cd", "f_subleading", "f_fd",
    ]);
    out.push_row(vec![
        n.into(),
        table.log_hankel(n).into(),
        gue_log_hankel(n).into(),
        table.log_hankel_ratio_gue(n).into(),
        hankel_f_cd(&table, n)?.into(),
        hankel_f_subleading(&table, n)?.into(),
        hankel_f_finite_difference(&spec, n, h)?.into(),
    ]);
    Ok(out.into())
}

fn verify_thm1(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let spec = e.spec(p)?;
    let n = e.req("n", p.n)?;
    let h = e.or("h", p.h, DEFAULT_STEP);
    let checks = verify_identities(&spec, n, h)?;
    let mut table = identity_table(&spec, n, &checks);
    table.meta("threshold", IDENTITY_THRESHOLD);
    let failed: Vec<&str> =
        checks.iter().filter(|c| !(c.residual < IDENTITY_THRESHOLD)).map(|c| c.name).collect();
    let verdict = (!failed.is_empty()).then(|| {
        Failure::Check(format!("residuals at or above {IDENTITY_THRESHOLD:e}: {}", failed.join(", ")))
    });
    Ok(Report { table, verdict })
}

fn cpiv_residuals(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let spec = e.spec(p)?;
    let n = e.req("n", p.n)?;
    let h = e.or("h", p.h, DEFAULT_STEP);
    let stencil = Stencil::build(&spec, n, h)?;
    let mut residuals = cpiv_ode_residual(&stencil).to_vec();
    residuals.extend(cpiv_second_order_residual(&stencil));
    Ok(residual_table(&stencil, &residuals).into())
}

/// Solves the limit system for `(ω1, ω2, s = t2 - t1)` on a window
/// reaching below `t1`.
fn edge_trajectory(e: &mut Echo, p: &Params, t1: f64, t2: f64, w1: f64, w2: f64) -> Result<CpiiTrajectory, Failure> {
    let x_min = e.or("x_min", p.x_min, (t1 - 0.5).max(MIN_X));
    let x_max = e.or("x_max", p.x_max, DEFAULT_X_MAX);
    let tol = e.or("tol", p.tol, DEFAULT_TOL);
    Ok(solve_cpii(&CpiiParams::new(w1, w2, t2 - t1)?, x_min, x_max, tol)?)
}

fn cpiv_scaling(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let n = e.req("n", p.n)?;
    let (t1, t2, w1, w2) = e.edge(p)?;
    let traj = edge_trajectory(e, p, t1, t2, w1, w2)?;
    let d = cpiv_scaling_check(n, t1, t2, w1, w2, &traj)?;
    let mut table = Table::new(&["quantity", "deviation"]);
    for (name, value) in [
        ("a1", d.a[0]),
        ("a2", d.a[1]),
        ("b1", d.b[0]),
        ("b2", d.b[1]),
        ("y", d.y),
        ("max", d.max()),
    ] {
        table.push_row(vec![name.into(), value.into()]);
    }
    Ok(table.into())
}

fn cpii_solve(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let w1 = e.req("w1", p.w1)?;
    let w2 = e.req("w2", p.w2)?;
    let s = e.req("s", p.s)?;
    let x_min = e.or("x_min", p.x_min, -8.0);
    let x_max = e.or("x_max", p.x_max, DEFAULT_X_MAX);
    let tol = e.or("tol", p.tol, DEFAULT_TOL);
    let traj = solve_cpii(&CpiiParams::new(w1, w2, s)?, x_min, x_max, tol)?;
    Ok(traj.to_table().into())
}

/// One-row comparison of a limit value with an independent route.
fn comparison(t1: f64, t2: f64, ode: f64, oracle: Option<(f64, f64)>) -> Table {
    let mut table = Table::new(&["t1", "t2", "ode", "oracle", "oracle_error", "difference"]);
    let (value, error) = oracle.unwrap_or((f64::NAN, f64::NAN));
    table.push_row(vec![
        t1.into(),
        t2.into(),
        ode.into(),
        value.into(),
        error.into(),
        (ode - value).into(),
    ]);
    table
}

fn gap_limit(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let t1 = e.req("t1", p.t1)?;
    let t2 = e.req("t2", p.t2)?;
    let ode = gap_probability_limit(t1, t2)?;
    let oracle = match e.oracle(p) {
        Oracle::None => None,
        Oracle::Fredholm => {
            let nodes = e.or("nodes", p.nodes, DEFAULT_FREDHOLM_NODES);
            let est = fredholm_estimate(t1, t2, 0.0, 1.0, nodes)?;
            Some((est.value, est.change))
        }
        Oracle::Mc => {
            let (n, samples, seed) = e.mc_run(p, 400);
            let est = mc_gap_probability(n, edge_jumps(n, t1), edge_jumps(n, t2), samples, seed)?;
            Some((est.estimate, est.stderr))
        }
    };
    Ok(comparison(t1, t2, ode, oracle).into())
}

fn conditional_limit(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let t1 = e.req("t1", p.t1)?;
    let t2 = e.req("t2", p.t2)?;
    let prob = e.req("p", p.p)?;
    let ode = conditional_distribution_limit(t1, t2, prob)?;
    let oracle = match e.oracle(p) {
        Oracle::None => None,
        Oracle::Fredholm => {
            let nodes = e.or("nodes", p.nodes, DEFAULT_FREDHOLM_NODES);
            let num = fredholm_estimate(t1, t2, prob, 0.0, nodes)?;
            let den = fredholm_estimate(t1, t2, prob, prob, nodes)?;
            let value = num.value / den.value;
            Some((value, (num.change + value * den.change) / den.value))
        }
        Oracle::Mc => {
            let (n, samples, seed) = e.mc_run(p, 100);
            let (x, y) = (edge_jumps(n, t2), edge_jumps(n, t1));
            let est = mc_conditional_distribution(n, x, y, prob, samples, seed)?;
            Some((est.estimate, est.stderr))
        }
    };
    Ok(comparison(t1, t2, ode, oracle).into())
}

fn tw(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let lo = e.or("t1", p.t1, -5.0);
    let hi = e.or("t2", p.t2, 2.0);
    let points = e.or("points", p.points, 36);
    if points < 2 || !(lo < hi) {
        return Err(Failure::Numerical(cpainleve_core::Error::InvalidInput(format!(
            "need t1 < t2 and at least 2 points (got [{lo}, {hi}], {points})"
        ))));
    }
    let ts: Vec<f64> =
        (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect();
    let mut table = distribution_table(&ts, &tracy_widom_curve(&ts)?, "ode");
    let (method, values) = match e.oracle(p) {
        Oracle::None => return Ok(table.into()),
        Oracle::Fredholm => {
            let nodes = e.or("nodes", p.nodes, DEFAULT_FREDHOLM_NODES);
            let values = ts
                .iter()
                .map(|&t| Ok(fredholm_estimate(t, t + 1.0, 0.0, 0.0, nodes)?.value))
                .collect::<Result<Vec<f64>, Failure>>()?;
            ("fredholm", values)
        }
        Oracle::Mc => {
            // Same seed at every point, so the sampled curve is monotone.
            let (n, samples, seed) = e.mc_run(p, 400);
            let values = ts
                .iter()
                .map(|&t| Ok(mc_gap_probability(n, edge_jumps(n, t), FAR, samples, seed)?.estimate))
                .collect::<Result<Vec<f64>, Failure>>()?;
            ("mc", values)
        }
    };
    table.rows.extend(distribution_table(&ts, &values, method).rows);
    Ok(table.into())
}

fn hankel_asymptotics(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let n = e.req("n", p.n)?;
    let (t1, t2, w1, w2) = e.edge(p)?;
    let pred = hankel_asymptotic_prediction(n, t1, t2, w1, w2)?;
    let spec = JumpWeightSpec::new(edge_jumps(n, t1), edge_jumps(n, t2), w1, w2)?;
    let exact = compute_recurrence(&spec, n)?.log_hankel_ratio_gue(n);
    let mut table =
        Table::new(&["n", "t1", "t2", "exact_log_ratio", "predicted_log_ratio", "deviation", "log_hankel_gue"]);
    table.push_row(vec![
        n.into(),
        t1.into(),
        t2.into(),
        exact.into(),
        pred.log_ratio.into(),
        (exact - pred.log_ratio).abs().into(),
        pred.log_gue.into(),
    ]);
    Ok(table.into())
}

fn op_asymptotics(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let n = e.req("n", p.n)?;
    let (t1, t2, w1, w2) = e.edge(p)?;
    let traj = edge_trajectory(e, p, t1, t2, w1, w2)?;
    let pred = op_asymptotic_predictions(n, t1, t2, w1, w2, &traj)?;
    let spec = JumpWeightSpec::new(edge_jumps(n, t1), edge_jumps(n, t2), w1, w2)?;
    let table = compute_recurrence(&spec, n + 1)?;

    let mut rows = vec![
        ("alpha", table.alpha[n], pred.alpha),
        ("beta", table.beta(n), pred.beta),
        ("log_gamma_prev", table.log_gamma[n - 1], pred.log_gamma_prev),
    ];
    for (k, (s, name)) in [(spec.s1, "log_abs_pi_s1"), (spec.s2, "log_abs_pi_s2")].into_iter().enumerate() {
        let v = table.eval_weighted(n, s)?;
        rows.push((name, v.q.abs().ln() - table.log_gamma[n] + 0.5 * s * s, pred.log_abs_pi[k]));
    }
    let mut out = Table::new(&["quantity", "exact", "predicted", "deviation"]);
    for (name, exact, predicted) in rows {
        out.push_row(vec![name.into(), exact.into(), predicted.into(), (exact - predicted).abs().into()]);
    }
    Ok(out.into())
}

fn mc_gap(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let n = e.req("n", p.n)?;
    let s1 = e.req("s1", p.s1)?;
    let s2 = e.req("s2", p.s2)?;
    let samples = e.or("samples", p.samples, DEFAULT_SAMPLES);
    let seed = e.or("seed", p.seed, 0);
    let est = mc_gap_probability(n, s1, s2, samples, seed)?;
    Ok(mc_report_table(n, s1, s2, None, &est).into())
}

/// Reported with `s1 = y` (conditioning level) and `s2 = x` (threshold).
fn mc_conditional(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let n = e.req("n", p.n)?;
    let x = e.req("x", p.x)?;
    let y = e.req("y", p.y)?;
    let prob = e.req("p", p.p)?;
    let samples = e.or("samples", p.samples, DEFAULT_SAMPLES);
    let seed = e.or("seed", p.seed, 0);
    let est = mc_conditional_distribution(n, x, y, prob, samples, seed)?;
    Ok(mc_report_table(n, y, x, Some(prob), &est).into())
}

fn fredholm_oracle(e: &mut Echo, p: &Params) -> Result<Report, Failure> {
    let (t1, t2, w1, w2) = e.edge(p)?;
    let nodes = e.or("nodes", p.nodes, DEFAULT_FREDHOLM_NODES);
    let est = fredholm_estimate(t1, t2, w1, w2, nodes)?;
    let mut table =
        Table::new(&["t1", "t2", "omega1", "omega2", "value", "change", "tail_bound"]);
    table.push_row(vec![
        t1.into(),
        t2.into(),
        w1.into(),
        w2.into(),
        est.value.into(),
        est.change.into(),
        est.tail_bound.into(),
    ]);
    Ok(table.into())
}
