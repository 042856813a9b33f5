//! Numerical equilibrium searches.
//!
//! Selfish case: best-response iteration (cyclic or simultaneous), with the
//! first-order residual reported alongside. Cooperative case: backtracking
//! gradient ascent on the group benefit `J`. Neither can prove that no
//! equilibrium exists; the exhaustive two-follower scans at the bottom of the
//! module are the stronger evidence.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::benefit::{
    ce_gradient, ne_stationarity_residual, neighbors, total_benefit, BenefitFunction, FormationState,
};
use crate::conditions::IntervalSpec;
use crate::error::{invalid, Error, Result};
use crate::numeric::{bisect_root, maximize_on_interval, uniform_grid};
use crate::wake::WakeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchKind {
    Ne,
    Ce,
}

impl SearchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchKind::Ne => "ne",
            SearchKind::Ce => "ce",
        }
    }
}

/// Best-response update order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateMode {
    /// Gauss–Seidel: each agent sees the updates made earlier in the sweep.
    #[default]
    Cyclic,
    /// Jacobi: all agents respond to the previous sweep.
    Simultaneous,
}

/// Solver tolerances and windows. Lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSettings {
    pub max_iters: usize,
    /// Position change below which best-response iteration stops.
    pub x_tol: f64,
    /// Max-norm bound on the first-order condition for a converged result.
    pub residual_tol: f64,
    /// Best-response window is the front neighbor's position ± this.
    pub window_half_width: f64,
    /// Coarse grid spacing of the best-response maximizer.
    pub br_grid_step: f64,
    /// Gaps closer to 0 than this sit on the derivative kink.
    pub kink_margin: f64,
    /// A neighbor gap beyond this in magnitude is treated as dispersion.
    pub divergence_gap: f64,
    /// Finite-difference step for the second-order check.
    pub hessian_step: f64,
    /// Largest Hessian eigenvalue still accepted as negative semidefinite.
    pub hessian_tol: f64,
    pub record_trajectory: bool,
}

impl SearchSettings {
    pub fn for_half_span(b: f64) -> Self {
        SearchSettings {
            max_iters: 500,
            x_tol: 1e-9,
            residual_tol: 1e-7,
            window_half_width: 50.0 * b,
            br_grid_step: 0.05 * b,
            kink_margin: 0.01 * b,
            divergence_gap: 100.0 * b,
            hessian_step: 1e-4 * b,
            hessian_tol: 1e-6,
            record_trajectory: false,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            ("x_tol", self.x_tol),
            ("residual_tol", self.residual_tol),
            ("window_half_width", self.window_half_width),
            ("br_grid_step", self.br_grid_step),
            ("kink_margin", self.kink_margin),
            ("divergence_gap", self.divergence_gap),
            ("hessian_step", self.hessian_step),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(name, "must be positive and finite"));
            }
        }
        Ok(())
    }
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self::for_half_span(WakeParams::goose().half_span())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub kind: SearchKind,
    pub converged: bool,
    /// Final follower positions `x_1..x_n` (leader at 0).
    pub positions: Vec<f64>,
    /// Max-norm of the NE residual or of the CE gradient at `positions`.
    pub residual: f64,
    /// Neighbor gaps `x_i − x_{i−1}`.
    pub gaps: Vec<f64>,
    pub in_p: Vec<bool>,
    pub iterations: usize,
    pub trajectory: Vec<Vec<f64>>,
    /// CE only: whether the finite-difference Hessian is negative semidefinite.
    pub second_order: Option<bool>,
    pub diagnostic: Option<String>,
}

impl SearchResult {
    /// Converged with every neighbor gap inside `P`.
    pub fn of_interest(&self) -> bool {
        self.converged && !self.in_p.is_empty() && self.in_p.iter().all(|&b| b)
    }

    fn finish<B: BenefitFunction + ?Sized>(
        kind: SearchKind,
        f: &B,
        state: &FormationState,
        p: &IntervalSpec,
    ) -> Result<Self> {
        let residual = match kind {
            SearchKind::Ne => max_abs(&ne_stationarity_residual(state, f)?),
            SearchKind::Ce => max_abs(&ce_gradient(state, f)?),
        };
        let gaps = state.gaps();
        Ok(SearchResult {
            kind,
            converged: false,
            positions: state.positions().to_vec(),
            residual,
            in_p: gaps.iter().map(|&g| p.contains(g)).collect(),
            gaps,
            iterations: 0,
            trajectory: Vec::new(),
            second_order: None,
            diagnostic: None,
        })
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Agent `i`'s benefit as a function of its own position.
fn own_benefit<B: BenefitFunction + ?Sized>(f: &B, state: &FormationState, i: usize, x: f64) -> f64 {
    let n = state.followers();
    let yi = state.y(i);
    neighbors(i, n).map(|j| f.value(x - state.x(j), yi - state.y(j))).sum()
}

fn own_benefit_deriv<B: BenefitFunction + ?Sized>(f: &B, state: &FormationState, i: usize, x: f64) -> Result<f64> {
    let n = state.followers();
    let yi = state.y(i);
    neighbors(i, n)
        .map(|j| f.deriv_x(x - state.x(j), yi - state.y(j)))
        .sum()
}

/// Outcome of a single best response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestResponse {
    pub x: f64,
    pub value: f64,
    /// The maximizer sits on the search window boundary.
    pub on_boundary: bool,
    /// The maximizer was moved off a derivative kink.
    pub perturbed: bool,
}

/// Maximize agent `i`'s benefit over its own position within `window`
/// (default: the front neighbor's position ± `window_half_width`).
pub fn best_response<B: BenefitFunction + ?Sized>(
    f: &B,
    state: &FormationState,
    i: usize,
    window: Option<(f64, f64)>,
    s: &SearchSettings,
) -> Result<BestResponse> {
    s.validate()?;
    if i == 0 || i > state.followers() {
        return Err(Error::AgentIndex {
            index: i,
            followers: state.followers(),
        });
    }
    let front = state.x(i - 1);
    let (lo, hi) = window.unwrap_or((front - s.window_half_width, front + s.window_half_width));
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInterval {
            lo,
            hi,
            reason: "best-response window must be bounded and non-empty",
        });
    }
    let m = maximize_on_interval(|x| Ok(own_benefit(f, state, i, x)), lo, hi, s.br_grid_step)?;
    let mut x = m.x;

    let near_kink = |x: f64| neighbors(i, state.followers()).any(|j| (x - state.x(j)).abs() < s.kink_margin);
    let mut perturbed = false;
    if near_kink(x) {
        log::warn!(
            "best response of agent {i} at x = {x} sits on a derivative kink; perturbing by {}",
            s.kink_margin
        );
        x += s.kink_margin;
        perturbed = true;
    } else if !m.on_boundary {
        // polish the value-based maximizer on the derivative
        let h = 1e-3 * s.br_grid_step;
        let (a, b) = (x - h, x + h);
        if !near_kink(a) && !near_kink(b) {
            let d = |t: f64| own_benefit_deriv(f, state, i, t);
            if let (Ok(da), Ok(db)) = (d(a), d(b)) {
                if da > 0.0 && db < 0.0 {
                    x = bisect_root(d, a, b, 1e-15 * (1.0 + x.abs()))?;
                }
            }
        }
    }
    Ok(BestResponse {
        x,
        value: own_benefit(f, state, i, x),
        on_boundary: m.on_boundary,
        perturbed,
    })
}

/// Positions within `tol` of each other in max-norm.
fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Best-response iteration from `init` (follower positions).
pub fn find_ne<B: BenefitFunction + ?Sized>(
    f: &B,
    beta: f64,
    init: &[f64],
    p: &IntervalSpec,
    mode: UpdateMode,
    s: &SearchSettings,
) -> Result<SearchResult> {
    s.validate()?;
    if init.iter().any(|x| !x.is_finite()) {
        return Err(invalid("init", "positions must be finite"));
    }
    let mut state = FormationState::new(init.to_vec(), beta)?;
    let n = state.followers();
    let mut history: Vec<Vec<f64>> = vec![state.positions().to_vec()];
    let mut trajectory = Vec::new();
    if s.record_trajectory {
        trajectory.push(state.positions().to_vec());
    }
    let mut moved_sweeps = 0;
    let mut settled = false;
    let mut diagnostic = None;
    let mut boundary_hit = false;

    for _ in 0..s.max_iters {
        let before = state.positions().to_vec();
        match mode {
            UpdateMode::Cyclic => {
                for i in 1..=n {
                    let br = best_response(f, &state, i, None, s)?;
                    boundary_hit |= br.on_boundary;
                    state = state.with_position(i, br.x);
                }
            }
            UpdateMode::Simultaneous => {
                let responses = (1..=n)
                    .map(|i| best_response(f, &state, i, None, s))
                    .collect::<Result<Vec<_>>>()?;
                for (k, br) in responses.into_iter().enumerate() {
                    boundary_hit |= br.on_boundary;
                    state = state.with_position(k + 1, br.x);
                }
            }
        }
        if s.record_trajectory {
            trajectory.push(state.positions().to_vec());
        }
        let after = state.positions();
        if close(&before, after, s.x_tol) {
            settled = true;
            break;
        }
        moved_sweeps += 1;
        if let Some(k) = history[..history.len() - 1]
            .iter()
            .rposition(|h| close(h, after, s.x_tol))
        {
            let period = history.len() - k;
            diagnostic = Some(format!(
                "best-response cycle of period {period} detected after {moved_sweeps} sweeps"
            ));
            break;
        }
        history.push(after.to_vec());
    }

    let mut r = SearchResult::finish(SearchKind::Ne, f, &state, p)?;
    r.iterations = moved_sweeps;
    r.trajectory = trajectory;
    r.converged = settled && r.residual <= s.residual_tol;
    if settled && !r.converged {
        diagnostic = Some(format!(
            "positions settled but first-order residual {:.3e} exceeds {:.1e}{}",
            r.residual,
            s.residual_tol,
            if boundary_hit {
                " (best response on window boundary)"
            } else {
                ""
            }
        ));
    } else if !settled && diagnostic.is_none() {
        diagnostic = Some(format!("no convergence within {} sweeps", s.max_iters));
    }
    r.diagnostic = diagnostic;
    Ok(r)
}

/// Any neighbor pair closer than `margin`, or any neighbor gap beyond `far`.
fn drift<B: ?Sized>(state: &FormationState, s: &SearchSettings, _f: &B) -> Option<String> {
    let n = state.followers();
    for i in 1..=n {
        for j in neighbors(i, n) {
            if j < i {
                let d = state.x(i) - state.x(j);
                if d.abs() < s.kink_margin {
                    return Some(format!(
                        "cohesion/dispersion drift: agents {j} and {i} collapsed to the same longitudinal position"
                    ));
                }
            }
        }
    }
    let widest = max_abs(&state.gaps());
    (widest > s.divergence_gap)
        .then(|| format!("cohesion/dispersion drift: neighbor gap {widest:.3} m exceeds the divergence guard"))
}

/// Largest eigenvalue of the symmetrized finite-difference Hessian of `J`.
pub fn hessian_max_eigenvalue<B: BenefitFunction + ?Sized>(f: &B, state: &FormationState, h: f64) -> Result<f64> {
    let n = state.followers();
    let mut hess = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let xj = state.x(j + 1);
        let gp = ce_gradient(&state.with_position(j + 1, xj + h), f)?;
        let gm = ce_gradient(&state.with_position(j + 1, xj - h), f)?;
        for i in 0..n {
            hess[(i, j)] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    let sym = (&hess + hess.transpose()) * 0.5;
    Ok(SymmetricEigen::new(sym).eigenvalues.max())
}

/// Backtracking gradient ascent on the group benefit from `init`.
pub fn find_ce<B: BenefitFunction + ?Sized>(
    f: &B,
    beta: f64,
    init: &[f64],
    p: &IntervalSpec,
    s: &SearchSettings,
) -> Result<SearchResult> {
    const ARMIJO: f64 = 1e-4;
    s.validate()?;
    if init.iter().any(|x| !x.is_finite()) {
        return Err(invalid("init", "positions must be finite"));
    }
    let mut state = FormationState::new(init.to_vec(), beta)?;
    let n = state.followers();
    let mut trajectory = Vec::new();
    if s.record_trajectory {
        trajectory.push(state.positions().to_vec());
    }
    let mut step = 1.0;
    let mut iterations = 0;
    let mut diagnostic = None;
    let mut converged = false;

    let mut j_cur = total_benefit(&state, f);
    for _ in 0..s.max_iters {
        if let Some(d) = drift(&state, s, f) {
            diagnostic = Some(d);
            break;
        }
        let grad = ce_gradient(&state, f)?;
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if max_abs(&grad) < s.residual_tol {
            converged = true;
            break;
        }
        let mut accepted = None;
        while step > 1e-14 {
            let trial: Vec<f64> = (0..n).map(|k| state.x(k + 1) + step * grad[k]).collect();
            let next = FormationState::new(trial, beta)?;
            let j_new = total_benefit(&next, f);
            if j_new >= j_cur + ARMIJO * step * gnorm2 {
                accepted = Some((next, j_new));
                break;
            }
            step *= 0.5;
        }
        let Some((next, j_new)) = accepted else {
            diagnostic = Some("line search failed to increase J".into());
            break;
        };
        state = next;
        j_cur = j_new;
        iterations += 1;
        step *= 2.0;
        if s.record_trajectory {
            trajectory.push(state.positions().to_vec());
        }
    }
    if !converged && diagnostic.is_none() {
        if let Some(d) = drift(&state, s, f) {
            diagnostic = Some(d);
        } else {
            diagnostic = Some(format!("no convergence within {} iterations", s.max_iters));
        }
    }

    let mut r = SearchResult::finish(SearchKind::Ce, f, &state, p)?;
    r.iterations = iterations;
    r.trajectory = trajectory;
    r.converged = converged && r.residual < s.residual_tol;
    if r.converged {
        let lam = hessian_max_eigenvalue(f, &state, s.hessian_step)?;
        r.second_order = Some(lam <= s.hessian_tol);
        if lam > s.hessian_tol {
            diagnostic = Some(format!(
                "stationary point is not a local maximum (Hessian eigenvalue {lam:.3e})"
            ));
        }
    }
    r.diagnostic = diagnostic;
    Ok(r)
}

/// Initial follower positions with every neighbor gap drawn uniformly from `P`.
pub fn random_inits(n: usize, p: &IntervalSpec, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = p.p();
    (0..count)
        .map(|_| {
            let mut x = 0.0;
            (0..n)
                .map(|_| {
                    x += if hi > lo { rng.gen_range(lo..=hi) } else { lo };
                    x
                })
                .collect()
        })
        .collect()
}

/// Seeded restart protocol: `count` searches from [`random_inits`], run in
/// parallel, returned in init order. `mode` applies to best-response runs.
#[allow(clippy::too_many_arguments)]
pub fn run_restarts<B: BenefitFunction + ?Sized>(
    f: &B,
    kind: SearchKind,
    n: usize,
    beta: f64,
    p: &IntervalSpec,
    count: usize,
    seed: u64,
    mode: UpdateMode,
    s: &SearchSettings,
) -> Result<Vec<SearchResult>> {
    if n == 0 {
        return Err(invalid("n", "need at least one follower"));
    }
    random_inits(n, p, count, seed)
        .par_iter()
        .map(|init| match kind {
            SearchKind::Ne => find_ne(f, beta, init, p, mode, s),
            SearchKind::Ce => find_ce(f, beta, init, p, s),
        })
        .collect()
}

/// Minimum over a gap grid together with where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanMinimum {
    pub value: f64,
    /// `(x_{10}, x_{21})` for the NE scan; `(x_{(n−1)(n−2)}, x_{n(n−1)})` for the CE scan.
    pub at: (f64, f64),
    pub grid_step: f64,
    pub samples: usize,
}

fn scan_grid(p: &IntervalSpec, step: f64) -> Result<(Vec<f64>, f64)> {
    if !(step > 0.0) {
        return Err(invalid("grid_step", "must be positive"));
    }
    let (lo, hi) = p.p();
    let g = uniform_grid(lo, hi, step);
    let h = if g.len() > 1 {
        (hi - lo) / (g.len() - 1) as f64
    } else {
        0.0
    };
    Ok((g, h))
}

/// Per-row minimum of a gap-grid scan: for each first coordinate, the
/// smallest value over the second one and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub x: f64,
    pub min: f64,
    pub argmin: f64,
}

fn row_minima(g: &[f64], cell: impl Fn(usize, usize) -> f64 + Sync) -> Vec<ScanRow> {
    let m = g.len();
    (0..m)
        .into_par_iter()
        .map(|i| {
            let (mut best, mut at) = (f64::INFINITY, 0);
            for j in 0..m {
                let r = cell(i, j);
                if r < best {
                    best = r;
                    at = j;
                }
            }
            ScanRow {
                x: g[i],
                min: best,
                argmin: g[at],
            }
        })
        .collect()
}

fn reduce_rows(rows: &[ScanRow], h: f64) -> ScanMinimum {
    // first row attaining the minimum: ties resolve to the smallest indices
    let best = rows
        .iter()
        .fold(None::<&ScanRow>, |acc, r| match acc {
            Some(a) if a.min <= r.min => Some(a),
            _ => Some(r),
        })
        .expect("grid is never empty");
    ScanMinimum {
        value: best.min,
        at: (best.x, best.argmin),
        grid_step: h,
        samples: rows.len() * rows.len(),
    }
}

/// Row minima of the two-follower first-order residual
/// `max(|f_x(x_{10},−β) + f_x(−x_{21},β)|, |f_x(x_{10}+x_{21},−2β) + f_x(x_{21},−β)|)`
/// over `(x_{10}, x_{21}) ∈ P²`; rows are indexed by `x_{10}`.
pub fn ne_residual_profile<B: BenefitFunction + ?Sized>(
    f: &B,
    beta: f64,
    p: &IntervalSpec,
    step: f64,
) -> Result<(Vec<ScanRow>, f64)> {
    let (g, h) = scan_grid(p, step)?;
    let m = g.len();
    let lo = g[0];
    let a = g.par_iter().map(|&x| f.deriv_x(x, -beta)).collect::<Result<Vec<_>>>()?;
    let b = g.par_iter().map(|&x| f.deriv_x(-x, beta)).collect::<Result<Vec<_>>>()?;
    let c = (0..2 * m - 1)
        .into_par_iter()
        .map(|k| f.deriv_x(2.0 * lo + k as f64 * h, -2.0 * beta))
        .collect::<Result<Vec<_>>>()?;
    let rows = row_minima(&g, |i, j| (a[i] + b[j]).abs().max((c[i + j] + a[j]).abs()));
    Ok((rows, h))
}

/// Two followers: minimum of the joint first-order residual over `P²`
/// (see [`ne_residual_profile`]). A strictly positive value means neither
/// follower pair of gaps on the grid satisfies both conditions.
pub fn scan_ne_residual<B: BenefitFunction + ?Sized>(
    f: &B,
    beta: f64,
    p: &IntervalSpec,
    step: f64,
) -> Result<ScanMinimum> {
    let (rows, h) = ne_residual_profile(f, beta, p, step)?;
    Ok(reduce_rows(&rows, h))
}

/// Row minima of the last agent's group-benefit gradient component
/// `|[f_x(x_{n(n−1)},−β) − f_x(−x_{n(n−1)},β)] + [f_x(x_{n(n−2)},−2β) − f_x(−x_{n(n−2)},2β)]|`
/// over `(x_{(n−1)(n−2)}, x_{n(n−1)}) ∈ P²`; rows are indexed by `x_{(n−1)(n−2)}`.
pub fn ce_gradient_profile<B: BenefitFunction + ?Sized>(
    f: &B,
    beta: f64,
    p: &IntervalSpec,
    step: f64,
    n: usize,
) -> Result<(Vec<ScanRow>, f64)> {
    if n < 2 {
        return Err(invalid("n", "the last agent needs two front neighbors (n >= 2)"));
    }
    let (g, h) = scan_grid(p, step)?;
    let m = g.len();
    let lo = g[0];
    let one_hop = g
        .par_iter()
        .map(|&x| Ok(f.deriv_x(x, -beta)? - f.deriv_x(-x, beta)?))
        .collect::<Result<Vec<_>>>()?;
    let two_hop = (0..2 * m - 1)
        .into_par_iter()
        .map(|k| {
            let x = 2.0 * lo + k as f64 * h;
            Ok(f.deriv_x(x, -2.0 * beta)? - f.deriv_x(-x, 2.0 * beta)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = row_minima(&g, |i, j| (one_hop[j] + two_hop[i + j]).abs());
    Ok((rows, h))
}

/// Minimum of [`ce_gradient_profile`] over the whole grid.
pub fn scan_ce_gradient_n<B: BenefitFunction + ?Sized>(
    f: &B,
    beta: f64,
    p: &IntervalSpec,
    step: f64,
    n: usize,
) -> Result<ScanMinimum> {
    let (rows, h) = ce_gradient_profile(f, beta, p, step, n)?;
    Ok(reduce_rows(&rows, h))
}
