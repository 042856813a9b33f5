//! Interval conditions under which no equilibrium of interest can exist.
//!
//! Notation follows the rest of the crate: `P = [−α_l, −α_s]` is the
//! admissible range of every neighbor gap `x_i − x_{i−1}`, `f_x` is the
//! x-derivative of the benefit and `β` the lateral spacing.
//!
//! | quantity | definition |
//! |----------|------------|
//! | `δ1` | `max_{x∈P} f_x(x, −β)` |
//! | `δ2` | `max_{x∈−P} f_x(x, −β)` |
//! | `ε_I` | `max_{x∈I} |f_x(x, −2β)|` |
//! | `Q(I)` | `{x ∈ P : |f_x(x, −β)| ≤ ε_I}` |
//! | `δ3` | `max_{x∈−Q(I)} f_x(x, −β)` |
//!
//! Maxima come from a grid scan refined by golden-section search. Every strict
//! inequality `lhs < rhs` is decided against a tolerance band `τ` on the
//! margin `rhs − lhs`: above `τ` it holds, below `−τ` it fails, otherwise the
//! verdict is inconclusive.

use rayon::prelude::*;

use crate::benefit::BenefitFunction;
use crate::error::{invalid, Error, Result};
use crate::numeric::{bisect_root, maximize_on_interval, uniform_grid};
use crate::wake::{find_benefit_peak, g_of_r, BenefitPeak, WakeParams};

/// Echelon gap interval `P = [−alpha_l, −alpha_s]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSpec {
    alpha_s: f64,
    alpha_l: f64,
}

impl IntervalSpec {
    pub fn new(alpha_s: f64, alpha_l: f64) -> Result<Self> {
        if !(alpha_s > 0.0) || !(alpha_l >= alpha_s) || !alpha_l.is_finite() {
            return Err(Error::InvalidInterval {
                lo: -alpha_l,
                hi: -alpha_s,
                reason: "need 0 < alpha_s <= alpha_l",
            });
        }
        Ok(IntervalSpec { alpha_s, alpha_l })
    }

    pub fn alpha_s(&self) -> f64 {
        self.alpha_s
    }
    pub fn alpha_l(&self) -> f64 {
        self.alpha_l
    }

    /// `P` as `(lo, hi)`.
    pub fn p(&self) -> (f64, f64) {
        (-self.alpha_l, -self.alpha_s)
    }

    /// `−P`.
    pub fn mirrored(&self) -> (f64, f64) {
        (self.alpha_s, self.alpha_l)
    }

    /// `2P`, the range of two-hop gaps.
    pub fn doubled(&self) -> (f64, f64) {
        (-2.0 * self.alpha_l, -2.0 * self.alpha_s)
    }

    pub fn contains(&self, x: f64) -> bool {
        -self.alpha_l <= x && x <= -self.alpha_s
    }
}

/// Finite union of disjoint closed intervals, sorted ascending.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet(Vec<(f64, f64)>);

impl IntervalSet {
    pub fn new(mut parts: Vec<(f64, f64)>) -> Self {
        parts.sort_by(|a, b| a.0.total_cmp(&b.0));
        IntervalSet(parts)
    }
    pub fn empty() -> Self {
        IntervalSet(Vec::new())
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn parts(&self) -> &[(f64, f64)] {
        &self.0
    }
    pub fn contains(&self, x: f64) -> bool {
        self.0.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }
    /// Smallest enclosing interval.
    pub fn hull(&self) -> Option<(f64, f64)> {
        Some((self.0.first()?.0, self.0.last()?.1))
    }
    pub fn is_subset_of(&self, lo: f64, hi: f64) -> bool {
        self.0.iter().all(|&(a, b)| lo <= a && b <= hi)
    }
    pub fn mirrored(&self) -> IntervalSet {
        IntervalSet::new(self.0.iter().map(|&(a, b)| (-b, -a)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn from_margin(margin: f64, tolerance: f64) -> Verdict {
        if margin > tolerance {
            Verdict::Holds
        } else if margin < -tolerance {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    }

    /// Process exit status: 0 holds, 1 fails, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Which nonexistence condition a report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionKind {
    /// Two followers: `δ2 < −δ1`.
    Theorem1,
    /// Two followers: `δ3 < −δ1` with `I = 2P`.
    Theorem2,
    /// Two followers: `δ3 < −δ1` with `I = [−2α_l, −2α]`.
    Theorem3,
    /// Three or more followers: `δ2 < −δ1 − ε_{2P}`.
    Proposition1,
    /// Three or more followers: `δ3 < −δ1 − ε_{2P}` with `I = 2P`.
    Proposition2,
    /// Three or more followers: `δ3 < −δ1` with `I = [−2α_l, −2α]`.
    Proposition3,
    /// Cooperative case: the paired benefit derivative never vanishes.
    Cooperative,
    /// Wake model: `α_l ≤ (U/D_f)(2ab − r0²)`.
    CooperativeBound,
}

impl ConditionKind {
    pub fn label(self) -> &'static str {
        match self {
            ConditionKind::Theorem1 => "thm1",
            ConditionKind::Theorem2 => "thm2",
            ConditionKind::Theorem3 => "thm3",
            ConditionKind::Proposition1 => "prop1",
            ConditionKind::Proposition2 => "prop2",
            ConditionKind::Proposition3 => "prop3",
            ConditionKind::Cooperative => "ce",
            ConditionKind::CooperativeBound => "lemma1",
        }
    }
}

/// Outcome of one numerical assumption check.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub passed: bool,
    /// A failing gating check withholds the verdict.
    pub gating: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub kind: ConditionKind,
    pub verdict: Verdict,
    /// `rhs − lhs` of the strict inequality (positive when it holds).
    pub margin: f64,
    pub tolerance: f64,
    pub grid_step: f64,
    pub beta: f64,
    pub interval: Option<IntervalSpec>,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub delta3: Option<f64>,
    pub epsilon: Option<f64>,
    /// The interval `I` over which `epsilon` was taken.
    pub epsilon_interval: Option<(f64, f64)>,
    pub q_set: Option<IntervalSet>,
    pub peak: Option<BenefitPeak>,
    pub assumptions: Vec<AssumptionCheck>,
    /// Further named values, in a stable order.
    pub quantities: Vec<(&'static str, f64)>,
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn new(kind: ConditionKind, settings: &CheckSettings, beta: f64, interval: Option<IntervalSpec>) -> Self {
        ConditionReport {
            kind,
            verdict: Verdict::Inconclusive,
            margin: f64::NAN,
            tolerance: settings.tolerance,
            grid_step: settings.grid_step,
            beta,
            interval,
            delta1: None,
            delta2: None,
            delta3: None,
            epsilon: None,
            epsilon_interval: None,
            q_set: None,
            peak: None,
            assumptions: Vec::new(),
            quantities: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn decide(&mut self, margin: f64) {
        self.margin = margin;
        self.verdict = Verdict::from_margin(margin, self.tolerance);
        let failed: Vec<_> = self
            .assumptions
            .iter()
            .filter(|a| a.gating && !a.passed)
            .map(|a| a.name)
            .collect();
        if !failed.is_empty() {
            self.verdict = Verdict::Inconclusive;
            self.notes.push(format!(
                "verdict withheld: assumption check failed ({})",
                failed.join(", ")
            ));
        }
    }

    pub fn assumptions_pass(&self) -> bool {
        self.assumptions.iter().filter(|a| a.gating).all(|a| a.passed)
    }

    pub fn quantity(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }
}

/// Numerical resolution and windows used by the checks. Lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckSettings {
    /// Coarse grid spacing for interval maxima and set boundaries.
    pub grid_step: f64,
    /// Half-width of the inconclusive band around a zero margin.
    pub tolerance: f64,
    /// Window searched for the peak of `f(·, −β)` and for its global maximality.
    pub peak_window: (f64, f64),
    /// Window over which monotonicity of `f(·, −β)` and `f(·, −2β)` is verified.
    pub monotone_window: (f64, f64),
    /// `x` within this distance of 0 is skipped in monotonicity scans
    /// (the derivative kink of the benefit).
    pub kink_exclusion: f64,
    /// The unbounded `|y|` range of the cooperative condition is truncated
    /// at `y_max_factor · β`.
    pub y_max_factor: f64,
    /// Sample counts `(x, y)` for the cooperative condition.
    pub ce_samples: (usize, usize),
    /// Sample counts `(R, y)` for the wake quadratic sign check.
    pub lemma_samples: (usize, usize),
}

impl CheckSettings {
    /// Defaults scaled to a half-span `b`.
    pub fn for_half_span(b: f64) -> Self {
        CheckSettings {
            grid_step: 1e-3 * b,
            tolerance: 1e-8,
            peak_window: (-100.0 * b, -0.01 * b),
            monotone_window: (-20.0 * b, 20.0 * b),
            kink_exclusion: 0.01 * b,
            y_max_factor: 10.0,
            ce_samples: (2000, 200),
            lemma_samples: (100, 100),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grid_step > 0.0) {
            return Err(invalid("grid_step", "must be positive"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(invalid("tolerance", "must be non-negative"));
        }
        if !(self.peak_window.0 < self.peak_window.1) || self.peak_window.1 > 0.0 {
            return Err(invalid("peak_window", "must be an ordered window of non-positive x"));
        }
        if self.ce_samples.0 == 0 || self.ce_samples.1 < 2 || self.lemma_samples.0 == 0 || self.lemma_samples.1 < 2 {
            return Err(invalid("samples", "need at least one x/R sample and two y samples"));
        }
        Ok(())
    }
}

impl Default for CheckSettings {
    fn default() -> Self {
        Self::for_half_span(WakeParams::goose().half_span())
    }
}

fn max_deriv<B: BenefitFunction + ?Sized>(f: &B, y: f64, (lo, hi): (f64, f64), s: &CheckSettings) -> Result<f64> {
    Ok(maximize_on_interval(|x| f.deriv_x(x, y), lo, hi, s.grid_step)?.value)
}

/// `ε_I = max_{x∈I} |f_x(x, −2β)|`.
pub fn compute_epsilon<B: BenefitFunction + ?Sized>(
    f: &B,
    interval: (f64, f64),
    beta: f64,
    s: &CheckSettings,
) -> Result<f64> {
    let (lo, hi) = interval;
    if !(lo <= hi) {
        return Err(Error::InvalidInterval {
            lo,
            hi,
            reason: "empty interval",
        });
    }
    Ok(maximize_on_interval(|x| Ok(f.deriv_x(x, -2.0 * beta)?.abs()), lo, hi, s.grid_step)?.value)
}

/// `{x ∈ P : |f_x(x, −β)| ≤ epsilon}`, with each boundary refined by bisection.
pub fn q_set_for_epsilon<B: BenefitFunction + ?Sized>(
    f: &B,
    epsilon: f64,
    p: &IntervalSpec,
    beta: f64,
    s: &CheckSettings,
) -> Result<IntervalSet> {
    let (lo, hi) = p.p();
    let excess = |x: f64| Ok(f.deriv_x(x, -beta)?.abs() - epsilon);
    let grid = uniform_grid(lo, hi, s.grid_step);
    let inside = grid
        .iter()
        .map(|&x| Ok(excess(x)? <= 0.0))
        .collect::<Result<Vec<bool>>>()?;
    let xtol = 1e-13 * (1.0 + hi.abs().max(lo.abs()));

    let mut parts = Vec::new();
    let mut k = 0;
    while k < grid.len() {
        if !inside[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k + 1 < grid.len() && inside[k + 1] {
            k += 1;
        }
        let left = if start == 0 {
            grid[0]
        } else {
            bisect_root(excess, grid[start - 1], grid[start], xtol)?
        };
        let right = if k + 1 == grid.len() {
            grid[k]
        } else {
            bisect_root(excess, grid[k], grid[k + 1], xtol)?
        };
        parts.push((left, right));
        k += 1;
    }
    Ok(IntervalSet::new(parts))
}

/// `ε_I` and `Q(I)` together.
pub fn compute_q<B: BenefitFunction + ?Sized>(
    f: &B,
    interval: (f64, f64),
    p: &IntervalSpec,
    beta: f64,
    s: &CheckSettings,
) -> Result<(f64, IntervalSet)> {
    let eps = compute_epsilon(f, interval, beta, s)?;
    Ok((eps, q_set_for_epsilon(f, eps, p, beta, s)?))
}

/// `δ3 = max_{x∈−Q} f_x(x, −β)`; `None` for an empty `Q`.
pub fn delta3_over<B: BenefitFunction + ?Sized>(
    f: &B,
    q: &IntervalSet,
    beta: f64,
    s: &CheckSettings,
) -> Result<Option<f64>> {
    let mut best: Option<f64> = None;
    for &(lo, hi) in q.mirrored().parts() {
        let v = max_deriv(f, -beta, (lo, hi), s)?;
        best = Some(best.map_or(v, |b| b.max(v)));
    }
    Ok(best)
}

fn sign_scan<B: BenefitFunction + ?Sized>(
    f: &B,
    y: f64,
    grid: impl Iterator<Item = f64>,
    want_positive: bool,
    exclusion: f64,
) -> Result<Option<f64>> {
    for x in grid {
        if x.abs() < exclusion {
            continue;
        }
        let d = f.deriv_x(x, y)?;
        if (want_positive && !(d > 0.0)) || (!want_positive && !(d < 0.0)) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Locate the peak `−α` of `f(·, −β)` and verify the shape assumptions the
/// two-follower arguments rely on: a unique peak, inside `P`, with `f`
/// increasing before it and decreasing after it.
pub fn verify_peak_assumptions<B: BenefitFunction + ?Sized>(
    f: &B,
    p: &IntervalSpec,
    beta: f64,
    s: &CheckSettings,
) -> Result<(BenefitPeak, Vec<AssumptionCheck>)> {
    let peak = find_benefit_peak(f, beta, s.peak_window, s.grid_step)?;
    let mut checks = vec![AssumptionCheck {
        name: "peak located",
        passed: peak.reliable,
        gating: true,
        detail: format!(
            "argmax of f(x,-beta) on [{}, {}] is x = {:.9} (f = {:.12e}){}",
            s.peak_window.0,
            s.peak_window.1,
            peak.x,
            peak.value,
            if peak.reliable { "" } else { ", on the window boundary" }
        ),
    }];

    // global maximality over the symmetric window
    let (wlo, _) = s.peak_window;
    let grid = uniform_grid(wlo, -wlo, s.grid_step);
    let worst = grid.par_iter().map(|&x| (x, f.value(x, -beta))).reduce(
        || (f64::NAN, f64::NEG_INFINITY),
        |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a },
    );
    let global = worst.1 <= peak.value + 1e-12 * peak.value.abs().max(1.0);
    checks.push(AssumptionCheck {
        name: "peak is global maximum",
        passed: global,
        gating: true,
        detail: format!(
            "largest sampled f(x,-beta) on [{wlo}, {}] is {:.12e} at x = {:.6}",
            -wlo, worst.1, worst.0
        ),
    });

    let alpha = -peak.x;
    checks.push(AssumptionCheck {
        name: "peak inside P",
        passed: p.contains(peak.x),
        gating: true,
        detail: format!("-alpha = {:.9}, P = [{}, {}]", peak.x, -p.alpha_l(), -p.alpha_s()),
    });

    // monotonicity where the arguments need it: [-α_l, -α) rising, (-α, -α_s] ∪ -P falling
    let margin = 2.0 * s.grid_step;
    let (plo, phi) = p.p();
    let rising = uniform_grid(plo, phi, s.grid_step)
        .into_iter()
        .filter(|&x| x < -alpha - margin);
    let falling = uniform_grid(plo, phi, s.grid_step)
        .into_iter()
        .filter(|&x| x > -alpha + margin)
        .chain(uniform_grid(p.alpha_s(), p.alpha_l(), s.grid_step));
    let bad_rise = sign_scan(f, -beta, rising, true, 0.0)?;
    let bad_fall = sign_scan(f, -beta, falling, false, 0.0)?;
    checks.push(AssumptionCheck {
        name: "monotone around peak on P and -P",
        passed: bad_rise.is_none() && bad_fall.is_none(),
        gating: true,
        detail: match (bad_rise, bad_fall) {
            (None, None) => "f_x(x,-beta) > 0 before the peak and < 0 after it on P, and < 0 on -P".to_string(),
            (Some(x), _) => format!("f_x(x,-beta) <= 0 at x = {x} before the peak"),
            (None, Some(x)) => format!("f_x(x,-beta) >= 0 at x = {x} after the peak"),
        },
    });

    let (mlo, mhi) = s.monotone_window;
    let rising = uniform_grid(mlo, (-alpha - margin).max(mlo), s.grid_step).into_iter();
    let falling = uniform_grid((-alpha + margin).min(mhi), mhi, s.grid_step).into_iter();
    let bad_rise = sign_scan(f, -beta, rising, true, s.kink_exclusion)?;
    let bad_fall = sign_scan(f, -beta, falling, false, s.kink_exclusion)?;
    checks.push(AssumptionCheck {
        name: "monotone around peak on window",
        passed: bad_rise.is_none() && bad_fall.is_none(),
        gating: false,
        detail: match (bad_rise, bad_fall) {
            (None, None) => format!("strictly monotone on [{mlo}, {mhi}] outside |x| < {}", s.kink_exclusion),
            (Some(x), _) => format!("f_x(x,-beta) <= 0 at x = {x} before the peak"),
            (None, Some(x)) => format!("f_x(x,-beta) >= 0 at x = {x} after the peak"),
        },
    });
    Ok((peak, checks))
}

/// `f(·, −2β)` strictly decreasing from `−2α` to the end of the monotonicity
/// window (kink band excluded).
pub fn verify_decreasing_at_double_spacing<B: BenefitFunction + ?Sized>(
    f: &B,
    alpha: f64,
    beta: f64,
    s: &CheckSettings,
) -> Result<AssumptionCheck> {
    let hi = s.monotone_window.1.max(-2.0 * alpha);
    let bad = sign_scan(
        f,
        -2.0 * beta,
        uniform_grid(-2.0 * alpha, hi, s.grid_step).into_iter(),
        false,
        s.kink_exclusion,
    )?;
    Ok(AssumptionCheck {
        name: "decreasing at double spacing",
        passed: bad.is_none(),
        gating: true,
        detail: match bad {
            None => format!(
                "f_x(x,-2beta) < 0 on [{:.6}, {hi}] outside |x| < {}",
                -2.0 * alpha,
                s.kink_exclusion
            ),
            Some(x) => format!("f_x(x,-2beta) >= 0 at x = {x}"),
        },
    })
}

/// `δ2 < −δ1` (two followers).
pub fn check_theorem1<B: BenefitFunction + ?Sized>(
    f: &B,
    p: &IntervalSpec,
    beta: f64,
    s: &CheckSettings,
) -> Result<ConditionReport> {
    s.validate()?;
    let mut r = ConditionReport::new(ConditionKind::Theorem1, s, beta, Some(*p));
    let d1 = max_deriv(f, -beta, p.p(), s)?;
    let d2 = max_deriv(f, -beta, p.mirrored(), s)?;
    r.delta1 = Some(d1);
    r.delta2 = Some(d2);
    r.decide(-d1 - d2);
    Ok(r)
}

struct QParts {
    epsilon: f64,
    interval: (f64, f64),
    q: IntervalSet,
    delta3: Option<f64>,
}

fn q_parts<B: BenefitFunction + ?Sized>(
    f: &B,
    interval: (f64, f64),
    p: &IntervalSpec,
    beta: f64,
    s: &CheckSettings,
) -> Result<QParts> {
    let (epsilon, q) = compute_q(f, interval, p, beta, s)?;
    let delta3 = delta3_over(f, &q, beta, s)?;
    Ok(QParts {
        epsilon,
        interval,
        q,
        delta3,
    })
}

fn record_q(r: &mut ConditionReport, parts: QParts) -> Option<f64> {
    r.epsilon = Some(parts.epsilon);
    r.epsilon_interval = Some(parts.interval);
    if parts.q.is_empty() {
        r.notes
            .push("Q is empty: no admissible gap balances the two-hop term, the condition holds trivially".into());
    }
    r.q_set = Some(parts.q);
    r.delta3 = parts.delta3;
    parts.delta3
}

/// `δ3 < −δ1` with `I = 2P` (two followers; peak inside `P`).
pub fn check_theorem2<B: BenefitFunction + ?Sized>(
    f: &B,
    p: &IntervalSpec,
    beta: f64,
    s: &CheckSettings,
) -> Result<ConditionReport> {
    s.validate()?;
    let mut r = ConditionReport::new(ConditionKind::Theorem2, s, beta, Some(*p));
    let (peak, checks) = verify_peak_assumptions(f, p, beta, s)?;
    r.peak = Some(peak);
    r.assumptions = checks;
    let d1 = max_deriv(f, -beta, p.p(), s)?;
    r.delta1 = Some(d1);
    let d3 = record_q(&mut r, q_parts(f, p.doubled(), p, beta, s)?);
    r.decide(d3.map_or(f64::INFINITY, |d3| -d1 - d3));
    Ok(r)
}

/// Interval `[−2α_l, −2α]` used by the refined two-hop bound.
fn refined_interval(p: &IntervalSpec, alpha: f64) -> (f64, f64) {
    (-2.0 * p.alpha_l(), (-2.0 * alpha).max(-2.0 * p.alpha_l()))
}

fn theorem3_like<B: BenefitFunction + ?Sized>(
    kind: ConditionKind,
    f: &B,
    p: &IntervalSpec,
    beta: f64,
    s: &CheckSettings,
) -> Result<ConditionReport> {
    s.validate()?;
    let mut r = ConditionReport::new(kind, s, beta, Some(*p));
    let (peak, mut checks) = verify_peak_assumptions(f, p, beta, s)?;
    let alpha = -peak.x;
    checks.push(verify_decreasing_at_double_spacing(f, alpha, beta, s)?);
    r.peak = Some(peak);
    r.assumptions = checks;
    let d1 = max_deriv(f, -beta, p.p(), s)?;
    r.delta1 = Some(d1);
    let d3 = record_q(&mut r, q_parts(f, refined_interval(p, alpha), p, beta, s)?);
    r.decide(d3.map_or(f64::INFINITY, |d3| -d1 - d3));
    Ok(r)
}

/// `δ3 < −δ1` with `I = [−2α_l, −2α]` (two followers; additionally needs
/// `f(·, −2β)` decreasing beyond `−2α`).
pub fn check_theorem3<B: BenefitFunction + ?Sized>(
    f: &B,
    p: &IntervalSpec,
    beta: f64,
    s: &CheckSettings,
) -> Result<ConditionReport> {
    theorem3_like(ConditionKind::Theorem3, f, p, beta, s)
}

/// The three-or-more-follower variants. `which` is 1, 2 or 3.
pub fn check_proposition<B: BenefitFunction + ?Sized>(
    f: &B,
    p: &IntervalSpec,
    beta: f64,
    which: u8,
    s: &CheckSettings,
) -> Result<ConditionReport> {
    s.validate()?;
    match which {
        1 => {
            let mut r = ConditionReport::new(ConditionKind::Proposition1, s, beta, Some(*p));
            let d1 = max_deriv(f, -beta, p.p(), s)?;
            let d2 = max_deriv(f, -beta, p.mirrored(), s)?;
            let eps = compute_epsilon(f, p.doubled(), beta, s)?;
            r.delta1 = Some(d1);
            r.delta2 = Some(d2);
            r.epsilon = Some(eps);
            r.epsilon_interval = Some(p.doubled());
            r.decide(-d1 - eps - d2);
            Ok(r)
        }
        2 => {
            let mut r = ConditionReport::new(ConditionKind::Proposition2, s, beta, Some(*p));
            let (peak, checks) = verify_peak_assumptions(f, p, beta, s)?;
            r.peak = Some(peak);
            r.assumptions = checks;
            let d1 = max_deriv(f, -beta, p.p(), s)?;
            r.delta1 = Some(d1);
            let parts = q_parts(f, p.doubled(), p, beta, s)?;
            let eps = parts.epsilon;
            let d3 = record_q(&mut r, parts);
            r.decide(d3.map_or(f64::INFINITY, |d3| -d1 - eps - d3));
            Ok(r)
        }
        3 => theorem3_like(ConditionKind::Proposition3, f, p, beta, s),
        _ => Err(invalid("which", format!("proposition must be 1, 2 or 3, got {which}"))),
    }
}

/// Cooperative-case condition: `f_x(x, y) − f_x(−x, −y)`, the x-derivative
/// of the paired benefit `f(x, y) + f(−x, −y)`, keeps a strict sign for
/// `x ∈ (0, α_l]` and `|y| ≥ beta_lower`.
///
/// The wake benefit is decided exactly by [`lemma1_check`]; any other
/// benefit is sampled on a grid with `|y|` truncated at `y_max_factor · β`.
pub fn check_ce_condition<B: BenefitFunction + ?Sized>(
    f: &B,
    p: &IntervalSpec,
    beta: f64,
    beta_lower: f64,
    s: &CheckSettings,
) -> Result<ConditionReport> {
    s.validate()?;
    if !(beta_lower > 0.0 && beta_lower <= beta) {
        return Err(Error::OutOfRange {
            name: "beta_lower",
            value: beta_lower,
            lo: 0.0,
            hi: beta,
        });
    }
    let sampled = sample_paired_derivative(f, p.alpha_l(), beta_lower, s.y_max_factor * beta, s.ce_samples)?;

    if let Some(params) = f.wake_params() {
        let mut r = lemma1_check(params, p.alpha_l(), beta_lower, s)?;
        r.kind = ConditionKind::Cooperative;
        r.interval = Some(*p);
        r.beta = beta;
        r.notes
            .push("wake benefit: decided by the sign of the closed-form quadratic g(R)".into());
        sampled.record(&mut r);
        return Ok(r);
    }

    let mut r = ConditionReport::new(ConditionKind::Cooperative, s, beta, Some(*p));
    sampled.record(&mut r);
    let sign_change = sampled.max > s.tolerance && sampled.min < -s.tolerance;
    let vanishing = sampled.max.abs().max(sampled.min.abs()) <= s.tolerance;
    if sign_change {
        r.margin = -(sampled.max.min(-sampled.min));
        r.verdict = Verdict::Fails;
        r.notes
            .push("paired derivative changes sign on the sampled domain".into());
    } else if vanishing {
        r.margin = sampled.min_abs;
        r.verdict = Verdict::Fails;
        r.notes.push("paired derivative vanishes at every sample".into());
    } else {
        r.margin = sampled.min_abs;
        r.verdict = Verdict::from_margin(sampled.min_abs, s.tolerance);
    }
    r.notes.push(format!(
        "sampled on x in (0, {}], |y| in [{beta_lower}, {}] (truncated)",
        p.alpha_l(),
        s.y_max_factor * beta
    ));
    Ok(r)
}

struct PairedSamples {
    min_abs: f64,
    min: f64,
    max: f64,
    literal_min_abs: f64,
    count: usize,
}

impl PairedSamples {
    fn record(&self, r: &mut ConditionReport) {
        r.quantities.push(("paired_deriv_min_abs", self.min_abs));
        r.quantities.push(("paired_deriv_min", self.min));
        r.quantities.push(("paired_deriv_max", self.max));
        r.quantities.push(("literal_sum_min_abs", self.literal_min_abs));
        r.quantities.push(("samples", self.count as f64));
    }
}

fn sample_paired_derivative<B: BenefitFunction + ?Sized>(
    f: &B,
    alpha_l: f64,
    y_lo: f64,
    y_hi: f64,
    (nx, ny): (usize, usize),
) -> Result<PairedSamples> {
    let rows = (0..ny)
        .into_par_iter()
        .map(|j| {
            let y = y_lo + (y_hi - y_lo) * j as f64 / (ny - 1) as f64;
            let mut acc = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
            for k in 1..=nx {
                let x = alpha_l * k as f64 / nx as f64;
                let (fwd, back) = (f.deriv_x(x, y)?, f.deriv_x(-x, -y)?);
                let d = fwd - back;
                acc.0 = acc.0.min(d.abs());
                acc.1 = acc.1.min(d);
                acc.2 = acc.2.max(d);
                acc.3 = acc.3.min((fwd + back).abs());
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = PairedSamples {
        min_abs: f64::INFINITY,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        literal_min_abs: f64::INFINITY,
        count: nx * ny,
    };
    for r in rows {
        out.min_abs = out.min_abs.min(r.0);
        out.min = out.min.min(r.1);
        out.max = out.max.max(r.2);
        out.literal_min_abs = out.literal_min_abs.min(r.3);
    }
    Ok(out)
}

/// Exact cooperative-case argument for the wake benefit: the paired benefit
/// derivative has the sign of `g(R)`, which is negative on
/// `(0, 2ab]` whenever `|y| > √(a²+b²)`. Holds iff
/// `alpha_l ≤ (U/D_f)(2ab − r0²)`; `g(R) < 0` is also confirmed on a sample grid
/// of `R ∈ (r0², r0² + D_f α_l / U]`, `|y| ∈ [beta_lower, y_max_factor · β]`.
pub fn lemma1_check(params: &WakeParams, alpha_l: f64, beta_lower: f64, s: &CheckSettings) -> Result<ConditionReport> {
    s.validate()?;
    let (a, b) = (params.vortex_half_span(), params.half_span());
    let critical = (a * a + b * b).sqrt();
    let beta = params.lateral_spacing();
    if !(beta_lower > critical && beta_lower < beta) {
        return Err(Error::OutOfRange {
            name: "beta_lower",
            value: beta_lower,
            lo: critical,
            hi: beta,
        });
    }
    if !(alpha_l > 0.0) || !alpha_l.is_finite() {
        return Err(invalid("alpha_l", "must be positive"));
    }
    let mut r = ConditionReport::new(ConditionKind::CooperativeBound, s, beta, None);
    let bound = params.cooperative_alpha_bound();
    let r0sq = params.core_radius().powi(2);
    let r_hi = r0sq + params.diffusion() * alpha_l / params.airspeed();
    let (nr, ny) = s.lemma_samples;
    let y_hi = s.y_max_factor * beta;
    let mut g_max = f64::NEG_INFINITY;
    for j in 0..ny {
        let y = beta_lower + (y_hi - beta_lower) * j as f64 / (ny - 1) as f64;
        for k in 1..=nr {
            let rr = r0sq + (r_hi - r0sq) * k as f64 / nr as f64;
            g_max = g_max.max(g_of_r(rr, y, params));
        }
    }
    r.quantities.push(("alpha_l", alpha_l));
    r.quantities.push(("alpha_bound", bound));
    r.quantities.push(("alpha_bound_half_spans", bound / b));
    r.quantities.push(("critical_offset", critical));
    r.quantities.push(("critical_root", 2.0 * a * b));
    r.quantities.push(("g_max_sampled", g_max));
    r.quantities.push(("g_samples", (nr * ny) as f64));
    r.assumptions.push(AssumptionCheck {
        name: "g(R) < 0 on sampled domain",
        passed: g_max < 0.0,
        gating: true,
        detail: format!(
            "{} samples, R in ({r0sq:.6e}, {r_hi:.6e}], |y| in [{beta_lower}, {y_hi}], max g = {g_max:.6e}",
            nr * ny
        ),
    });
    r.decide(bound - alpha_l);
    Ok(r)
}
