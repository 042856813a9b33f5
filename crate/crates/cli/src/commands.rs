//! The five verbs. Each writes its files under the configured output
//! directory and returns what it wrote plus the process exit code.

use std::fmt::Write as _;
use std::path::PathBuf;

use echelon_core::conditions::{
    check_ce_condition, check_proposition, check_theorem1, check_theorem2, check_theorem3, lemma1_check,
};
use echelon_core::search::{ce_gradient_profile, ne_residual_profile, run_restarts, ScanRow};
use echelon_core::{ConditionReport, Error, IntervalSpec, SearchKind, SearchResult, UpdateMode};

use crate::config::{BenefitKind, Resolved};
use crate::error::{CliError, CliResult};
use crate::output::{header, interval, num, opt_num, write_file};
use crate::svg;

/// Upper limit on rows of a single curve.
const MAX_CURVE_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Quantity {
    /// Benefit `f(x, y)`.
    F,
    /// Longitudinal derivative `f_x(x, y)`.
    Fx,
}

impl Quantity {
    fn as_str(self) -> &'static str {
        match self {
            Quantity::F => "f",
            Quantity::Fx => "fx",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckWhich {
    Thm1,
    Thm2,
    Thm3,
    Prop1,
    Prop2,
    Prop3,
    Ce,
    Lemma1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EquilibriumKind {
    /// Selfish (Nash) equilibrium.
    Ne,
    /// Cooperative (group-optimal) equilibrium.
    Ce,
}

impl EquilibriumKind {
    fn core(self) -> SearchKind {
        match self {
            EquilibriumKind::Ne => SearchKind::Ne,
            EquilibriumKind::Ce => SearchKind::Ce,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Cyclic,
    Simultaneous,
}

impl Mode {
    fn core(self) -> UpdateMode {
        match self {
            Mode::Cyclic => UpdateMode::Cyclic,
            Mode::Simultaneous => UpdateMode::Simultaneous,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub exit: i32,
    /// One-line description for the terminal.
    pub summary: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSpec {
    pub quantity: Quantity,
    pub y_multiple: u8,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub step: Option<f64>,
    pub svg: bool,
}

impl CurveSpec {
    pub fn new(quantity: Quantity, y_multiple: u8) -> Self {
        CurveSpec {
            quantity,
            y_multiple,
            x_min: None,
            x_max: None,
            step: None,
            svg: false,
        }
    }
}

pub fn curve(r: &Resolved, spec: &CurveSpec) -> CliResult<Outcome> {
    let b = r.half_span();
    let x_min = spec.x_min.unwrap_or(-20.0 * b);
    let x_max = spec.x_max.unwrap_or(20.0 * b);
    let step = spec.step.unwrap_or(0.01 * b);
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Config(format!("curve step must be positive, got {step}")));
    }
    if !(x_min.is_finite() && x_max.is_finite()) {
        return Err(CliError::Config("curve range must be finite".into()));
    }
    if !matches!(spec.y_multiple, 1 | 2) {
        return Err(CliError::Config(format!(
            "y multiple must be 1 or 2, got {}",
            spec.y_multiple
        )));
    }
    let count = if x_max < x_min {
        0
    } else {
        ((x_max - x_min) / step * (1.0 + 1e-12)).floor() as usize + 1
    };
    if count > MAX_CURVE_POINTS {
        return Err(CliError::Config(format!(
            "curve would have {count} rows; widen the step"
        )));
    }
    let y = -(spec.y_multiple as f64) * r.beta;
    let f = &r.benefit;
    let mut points = Vec::with_capacity(count);
    for k in 0..count {
        let mut x = x_min + k as f64 * step;
        if x.abs() < 1e-9 * step {
            x = 0.0;
        }
        let v = match spec.quantity {
            Quantity::F => Some(f.value(x, y)),
            Quantity::Fx if !f.deriv_defined(x, y) => None,
            Quantity::Fx => match f.deriv_x(x, y) {
                Ok(d) => Some(d),
                Err(Error::DerivativeDomain { .. }) => None,
                Err(e) => return Err(e.into()),
            },
        };
        points.push((x, v));
    }

    let q = spec.quantity.as_str();
    let mut text = header(
        r,
        "curve",
        &[
            ("quantity", q.to_string()),
            ("y", num(y)),
            ("x_min", num(x_min)),
            ("x_max", num(x_max)),
            ("step", num(step)),
            ("rows", count.to_string()),
        ],
    )?;
    let _ = writeln!(text, "x,{q}");
    for &(x, v) in &points {
        let _ = writeln!(text, "{},{}", num(x), v.map(num).unwrap_or_default());
    }
    let stem = format!("curve_{q}_y{}", spec.y_multiple);
    let dir = &r.config.output_dir;
    let mut files = vec![write_file(dir, &format!("{stem}.csv"), &text)?];
    if spec.svg {
        let title = format!("{q}(x, {})", if spec.y_multiple == 1 { "-beta" } else { "-2 beta" });
        files.push(write_file(
            dir,
            &format!("{stem}.svg"),
            &svg::line_plot(&title, &points),
        )?);
    }
    let mut summary = format!("{count} rows");
    if spec.quantity == Quantity::F {
        if let Some((x, v)) = points
            .iter()
            .filter_map(|&(x, v)| v.map(|v| (x, v)))
            .fold(None::<(f64, f64)>, |m, p| match m {
                Some(m) if m.1 >= p.1 => Some(m),
                _ => Some(p),
            })
        {
            let _ = write!(summary, ", largest value {} at x = {}", num(v), num(x));
        }
    }
    Ok(Outcome {
        files,
        exit: 0,
        summary,
    })
}

/// Runs one condition check over `p` and writes `{stem}.txt`.
pub fn check_with(
    r: &Resolved,
    which: CheckWhich,
    p: &IntervalSpec,
    stem: &str,
) -> CliResult<(Outcome, ConditionReport)> {
    let s = r.check_settings();
    let f = &r.benefit;
    let report = match which {
        CheckWhich::Thm1 => check_theorem1(f, p, r.beta, &s)?,
        CheckWhich::Thm2 => check_theorem2(f, p, r.beta, &s)?,
        CheckWhich::Thm3 => check_theorem3(f, p, r.beta, &s)?,
        CheckWhich::Prop1 => check_proposition(f, p, r.beta, 1, &s)?,
        CheckWhich::Prop2 => check_proposition(f, p, r.beta, 2, &s)?,
        CheckWhich::Prop3 => check_proposition(f, p, r.beta, 3, &s)?,
        CheckWhich::Ce => check_ce_condition(f, p, r.beta, r.beta_lower, &s)?,
        CheckWhich::Lemma1 => {
            if r.config.benefit != BenefitKind::Wake {
                return Err(CliError::Config("lemma1 applies to the wake benefit only".into()));
            }
            lemma1_check(&r.params, p.alpha_l(), r.beta_lower, &s)?
        }
    };
    let mut text = header(r, "check", &[("check", report.kind.label().to_string())])?;
    text.push_str(&render_report(&report));
    let path = write_file(&r.config.output_dir, &format!("{stem}.txt"), &text)?;
    let outcome = Outcome {
        files: vec![path],
        exit: report.verdict.exit_code(),
        summary: format!(
            "{}: {} (margin {})",
            report.kind.label(),
            report.verdict.as_str(),
            num(report.margin)
        ),
    };
    Ok((outcome, report))
}

pub fn check(r: &Resolved, which: CheckWhich) -> CliResult<Outcome> {
    let p = r.config.interval()?;
    let (mut outcome, report) = check_with(r, which, &p, &format!("check_{which:?}").to_lowercase())?;
    for note in &report.notes {
        let _ = write!(outcome.summary, "\n  note: {note}");
    }
    Ok(outcome)
}

/// Stable key = value rendering, then `[assumptions]`, `[quantities]` and
/// `[notes]` sections. Absent values read `none`.
pub fn render_report(r: &ConditionReport) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("kind", r.kind.label().into());
    kv("verdict", r.verdict.as_str().into());
    kv("exit_code", r.verdict.exit_code().to_string());
    kv("margin", num(r.margin));
    kv("tolerance", num(r.tolerance));
    kv("grid_step", num(r.grid_step));
    kv("beta", num(r.beta));
    kv("p", r.interval.map_or("none".into(), |p| interval(p.p())));
    kv("delta1", opt_num(r.delta1));
    kv("delta2", opt_num(r.delta2));
    kv("delta3", opt_num(r.delta3));
    kv("epsilon", opt_num(r.epsilon));
    kv("epsilon_interval", r.epsilon_interval.map_or("none".into(), interval));
    kv(
        "q_set",
        match &r.q_set {
            None => "none".into(),
            Some(q) if q.is_empty() => "empty".into(),
            Some(q) => q.parts().iter().map(|&p| interval(p)).collect::<Vec<_>>().join(" u "),
        },
    );
    kv("peak_x", opt_num(r.peak.map(|p| p.x)));
    kv("peak_value", opt_num(r.peak.map(|p| p.value)));
    kv(
        "peak_reliable",
        r.peak.map_or("none".into(), |p| p.reliable.to_string()),
    );
    s.push_str("[assumptions]\n");
    for a in &r.assumptions {
        let _ = writeln!(
            s,
            "{} = {}{}; {}",
            a.name,
            if a.passed { "pass" } else { "fail" },
            if a.gating { "" } else { " (informational)" },
            a.detail
        );
    }
    s.push_str("[quantities]\n");
    for (k, v) in &r.quantities {
        let _ = writeln!(s, "{k} = {}", num(*v));
    }
    s.push_str("[notes]\n");
    for n in &r.notes {
        let _ = writeln!(s, "{n}");
    }
    s
}

pub fn search(r: &Resolved, kind: EquilibriumKind, mode: Mode, trajectories: bool) -> CliResult<Outcome> {
    let p = r.config.interval()?;
    let mut s = r.search_settings();
    s.record_trajectory = trajectories;
    let cfg = &r.config;
    let results = run_restarts(
        &r.benefit,
        kind.core(),
        cfg.n,
        r.beta,
        &p,
        cfg.restarts,
        cfg.seed,
        mode.core(),
        &s,
    )?;
    let k = kind.core().as_str();
    let count = |pred: &dyn Fn(&SearchResult) -> bool| results.iter().filter(|r| pred(r)).count();
    let converged = count(&|r| r.converged);
    let of_interest = count(&|r| r.of_interest());
    let cycles = count(&|r| r.diagnostic.as_deref().is_some_and(|d| d.contains("cycle")));
    let drift = count(&|r| {
        r.diagnostic
            .as_deref()
            .is_some_and(|d| d.starts_with("cohesion/dispersion drift"))
    });

    let mut text = header(
        r,
        "search",
        &[
            ("kind", k.to_string()),
            ("mode", format!("{mode:?}").to_lowercase()),
            ("max_iters", s.max_iters.to_string()),
            ("residual_tol", num(s.residual_tol)),
        ],
    )?;
    let _ = writeln!(text, "kind = {k}");
    let _ = writeln!(text, "restarts = {}", results.len());
    let _ = writeln!(text, "converged = {converged}");
    let _ = writeln!(text, "of_interest = {of_interest}");
    let _ = writeln!(text, "best_response_cycles = {cycles}");
    let _ = writeln!(text, "drift_guard = {drift}");
    text.push_str("[restarts]\n");
    let list = |v: &[f64]| v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ");
    for (i, res) in results.iter().enumerate() {
        let _ = writeln!(
            text,
            "{i:03}: converged = {}; of_interest = {}; iterations = {}; residual = {}; second_order = {}; gaps = [{}]; in_p = [{}]; diagnostic = {}",
            res.converged,
            res.of_interest(),
            res.iterations,
            num(res.residual),
            res.second_order.map_or("none".into(), |b| b.to_string()),
            list(&res.gaps),
            res.in_p.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" "),
            res.diagnostic.as_deref().unwrap_or("none"),
        );
    }
    let dir = &cfg.output_dir;
    let mut files = vec![write_file(dir, &format!("search_{k}.txt"), &text)?];
    if trajectories {
        for (i, res) in results.iter().enumerate() {
            let mut csv = header(r, "search", &[("kind", k.to_string()), ("restart", i.to_string())])?;
            let cols: Vec<String> = (1..=cfg.n).map(|j| format!("x{j}")).collect();
            let _ = writeln!(csv, "step,{}", cols.join(","));
            for (t, xs) in res.trajectory.iter().enumerate() {
                let row: Vec<String> = xs.iter().map(|&x| num(x)).collect();
                let _ = writeln!(csv, "{t},{}", row.join(","));
            }
            files.push(write_file(dir, &format!("search_{k}_trajectory_{i:03}.csv"), &csv)?);
        }
    }
    Ok(Outcome {
        files,
        exit: 0,
        summary: format!(
            "{k}: {} restarts, {converged} converged, {of_interest} with all gaps in P, {cycles} cycles, {drift} drift-guard stops",
            results.len()
        ),
    })
}

/// Brute-force residual scan over `P²`, written to `{stem}.txt` and
/// `{stem}_rows.csv`. Exit 0 when the minimum exceeds the tolerance, else 2.
pub fn scan_with(
    r: &Resolved,
    kind: EquilibriumKind,
    p: &IntervalSpec,
    step: f64,
    n: usize,
    stem: &str,
) -> CliResult<(Outcome, f64)> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Config(format!("scan step must be positive, got {step}")));
    }
    let (rows, h) = match kind {
        EquilibriumKind::Ne => ne_residual_profile(&r.benefit, r.beta, p, step)?,
        EquilibriumKind::Ce => {
            if n < 2 {
                return Err(CliError::Config("the cooperative scan needs n >= 2".into()));
            }
            ce_gradient_profile(&r.benefit, r.beta, p, step, n)?
        }
    };
    let best = rows
        .iter()
        .fold(None::<&ScanRow>, |m, row| match m {
            Some(m) if m.min <= row.min => Some(m),
            _ => Some(row),
        })
        .expect("scan grid is never empty");
    let tol = r.config.tolerance;
    let positive = best.min > tol;
    let k = kind.core().as_str();
    let (what, axes) = match kind {
        EquilibriumKind::Ne => ("two-follower first-order residual", "x10,x21"),
        EquilibriumKind::Ce => ("last-agent group-benefit gradient", "x(n-1)(n-2),xn(n-1)"),
    };
    let extra = [
        ("kind", k.to_string()),
        ("quantity", what.to_string()),
        (
            "n",
            if kind == EquilibriumKind::Ne {
                "2".into()
            } else {
                n.to_string()
            },
        ),
        ("p", interval(p.p())),
        ("requested_step", num(step)),
        ("grid_step", num(h)),
    ];
    let mut report = header(r, "scan", &extra)?;
    let _ = writeln!(report, "kind = {k}");
    let _ = writeln!(report, "minimum = {}", num(best.min));
    let _ = writeln!(report, "at = [{}, {}]", num(best.x), num(best.argmin));
    let _ = writeln!(report, "axes = {axes}");
    let _ = writeln!(report, "grid_step = {}", num(h));
    let _ = writeln!(report, "samples = {}", rows.len() * rows.len());
    let _ = writeln!(report, "tolerance = {}", num(tol));
    let _ = writeln!(report, "strictly_positive = {positive}");
    if kind == EquilibriumKind::Ne && r.config.n != 2 {
        let _ = writeln!(
            report,
            "[notes]\nscan covers two followers; configured n = {} ignored",
            r.config.n
        );
    }
    let mut csv = header(r, "scan", &extra)?;
    csv.push_str("row,row_min,argmin\n");
    for row in &rows {
        let _ = writeln!(csv, "{},{},{}", num(row.x), num(row.min), num(row.argmin));
    }
    let dir = &r.config.output_dir;
    let files = vec![
        write_file(dir, &format!("{stem}.txt"), &report)?,
        write_file(dir, &format!("{stem}_rows.csv"), &csv)?,
    ];
    let outcome = Outcome {
        files,
        exit: if positive { 0 } else { 2 },
        summary: format!(
            "{k} scan: minimum {} at ({}, {}){}",
            num(best.min),
            num(best.x),
            num(best.argmin),
            if positive { "" } else { ", not above tolerance" }
        ),
    };
    Ok((outcome, best.min))
}

pub fn scan(r: &Resolved, kind: EquilibriumKind, step: Option<f64>) -> CliResult<Outcome> {
    let p = r.config.interval()?;
    let k = kind.core().as_str();
    let step = step.unwrap_or(r.config.scan_step);
    Ok(scan_with(r, kind, &p, step, r.config.n, &format!("scan_{k}"))?.0)
}

/// One entry of the fixed reproduction batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Job {
    Curve(Quantity, u8),
    Check(CheckWhich, f64, f64),
    Scan(EquilibriumKind, f64, f64, usize),
}

impl Job {
    pub fn label(&self) -> String {
        let p = |s: f64, l: f64| format!("P = [-{l}, -{s}]");
        match *self {
            Job::Curve(q, m) => {
                let y = if m == 1 { "-beta" } else { "-2 beta" };
                match q {
                    Quantity::F => format!("benefit f(x, {y})"),
                    Quantity::Fx => format!("derivative f_x(x, {y})"),
                }
            }
            Job::Check(w, s, l) => {
                let what = match w {
                    CheckWhich::Thm1 => "two followers, selfish: derivative bounds",
                    CheckWhich::Thm2 => "two followers, selfish: peak-restricted set on 2P",
                    CheckWhich::Thm3 => "two followers, selfish: peak-restricted set on refined interval",
                    CheckWhich::Prop1 => "three or more followers, selfish: derivative bounds",
                    CheckWhich::Prop2 => "three or more followers, selfish: peak-restricted set on 2P",
                    CheckWhich::Prop3 => "three or more followers, selfish: peak-restricted set on refined interval",
                    CheckWhich::Ce => "cooperative: paired-derivative sign",
                    CheckWhich::Lemma1 => "cooperative: wake bound on alpha_l",
                };
                format!("{what}, {}", p(s, l))
            }
            Job::Scan(EquilibriumKind::Ne, s, l, _) => format!("selfish residual scan, n = 2, {}", p(s, l)),
            Job::Scan(EquilibriumKind::Ce, s, l, n) => format!("cooperative gradient scan, n = {n}, {}", p(s, l)),
        }
    }
}

/// The fixed batch run by `reproduce`. Intervals are given as `(alpha_s, alpha_l)`.
pub fn reproduction_list() -> Vec<Job> {
    use CheckWhich::*;
    vec![
        Job::Curve(Quantity::F, 1),
        Job::Curve(Quantity::F, 2),
        Job::Curve(Quantity::Fx, 1),
        Job::Curve(Quantity::Fx, 2),
        Job::Check(Thm1, 0.5, 3.5),
        Job::Check(Thm1, 0.5, 3.6),
        Job::Check(Thm2, 2.5, 7.0),
        Job::Check(Thm3, 0.5, 14.0),
        Job::Check(Prop1, 0.5, 3.5),
        Job::Check(Prop2, 2.5, 7.0),
        Job::Check(Prop3, 0.5, 14.0),
        Job::Check(Ce, 0.5, 14.0),
        Job::Check(Lemma1, 0.5, 14.0),
        Job::Scan(EquilibriumKind::Ne, 0.5, 3.5, 2),
        Job::Scan(EquilibriumKind::Ne, 0.5, 14.0, 2),
        Job::Scan(EquilibriumKind::Ce, 0.5, 14.0, 3),
    ]
}

fn run_job(r: &Resolved, job: Job, svg: bool) -> CliResult<(Vec<PathBuf>, String)> {
    let span = |s: f64, l: f64| IntervalSpec::new(s, l).map_err(CliError::from);
    match job {
        Job::Curve(q, m) => {
            let spec = CurveSpec {
                svg,
                ..CurveSpec::new(q, m)
            };
            Ok((curve(r, &spec)?.files, "ok".into()))
        }
        Job::Check(w, s, l) => {
            let stem = format!("check_{}_p{s}_{l}", format!("{w:?}").to_lowercase());
            let (o, rep) = check_with(r, w, &span(s, l)?, &stem)?;
            Ok((o.files, rep.verdict.as_str().into()))
        }
        Job::Scan(k, s, l, n) => {
            let stem = format!("scan_{}_n{n}_p{s}_{l}", k.core().as_str());
            let (o, min) = scan_with(r, k, &span(s, l)?, r.config.scan_step, n, &stem)?;
            let sign = if o.exit == 0 {
                "strictly positive"
            } else {
                "not above tolerance"
            };
            Ok((o.files, format!("minimum {} ({sign})", num(min))))
        }
    }
}

/// Runs every entry of [`reproduction_list`]; a failing entry is recorded in
/// the manifest and the batch continues. Exit 4 if any entry failed.
pub fn reproduce(r: &Resolved, svg: bool) -> CliResult<Outcome> {
    let jobs = reproduction_list();
    let mut files = Vec::new();
    let mut lines = Vec::new();
    let mut failed = 0;
    for (i, job) in jobs.iter().enumerate() {
        let (status, names) = match run_job(r, *job, svg) {
            Ok((paths, status)) => {
                let names: Vec<String> = paths
                    .iter()
                    .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
                    .collect();
                files.extend(paths);
                (status, names.join(" "))
            }
            Err(e) => {
                failed += 1;
                log::error!("{}: {e}", job.label());
                (format!("error: {e}"), "none".into())
            }
        };
        lines.push(format!("{:02} | {} | {status} | {names}", i + 1, job.label()));
    }
    let mut text = header(r, "reproduce", &[])?;
    let _ = writeln!(text, "entries = {}", jobs.len());
    let _ = writeln!(text, "failed = {failed}");
    text.push_str("[entries]\n");
    for l in &lines {
        let _ = writeln!(text, "{l}");
    }
    files.push(write_file(&r.config.output_dir, "manifest.txt", &text)?);
    Ok(Outcome {
        files,
        exit: if failed == 0 { 0 } else { 4 },
        summary: format!("{} entries, {failed} failed", jobs.len()),
    })
}
