//! One-dimensional numerical building blocks.
//!
//! Everything here is deterministic: grids are laid out by index, ties are
//! broken by the lower index, and no routine depends on thread scheduling.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// 1/φ, the golden-section contraction factor.
pub const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Best point found by a maximization routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    /// The maximizer sits on an end of the search interval.
    pub on_boundary: bool,
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Returns the best point evaluated, which for a unimodal `f` is within
/// `xtol` of the true maximizer.
pub fn golden_section_max<E, F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> std::result::Result<(f64, f64), E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let (mut best_x, mut best_v) = if fd > fc { (d, fd) } else { (c, fc) };
    let xtol = xtol.max(f64::EPSILON * (a.abs() + b.abs()));
    for _ in 0..300 {
        if b - a <= xtol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
            if fc > best_v {
                best_x = c;
                best_v = fc;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
            if fd > best_v {
                best_x = d;
                best_v = fd;
            }
        }
    }
    Ok((best_x, best_v))
}

/// Uniform grid over `[lo, hi]` with spacing at most `step`, both ends included.
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let cells = ((hi - lo) / step).ceil().max(1.0) as usize;
    (0..=cells)
        .map(|k| {
            if k == cells {
                hi
            } else {
                lo + (hi - lo) * (k as f64) / (cells as f64)
            }
        })
        .collect()
}

/// Maximize `f` over `[lo, hi]`: coarse grid scan, then golden-section
/// refinement inside the cells around the best few grid nodes.
pub fn maximize_on_interval<F>(f: F, lo: f64, hi: f64, step: f64) -> Result<Maximum>
where
    F: Fn(f64) -> Result<f64>,
{
    const REFINED_NODES: usize = 3;
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInterval {
            lo,
            hi,
            reason: "bounds must be finite and ordered",
        });
    }
    let grid = uniform_grid(lo, hi, step);
    let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;

    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&i, &j| {
        values[j]
            .partial_cmp(&values[i])
            .unwrap_or(Ordering::Equal)
            .then(i.cmp(&j))
    });

    let xtol = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    let mut best = (grid[order[0]], values[order[0]]);
    for &k in order.iter().take(REFINED_NODES) {
        let a = grid[k.saturating_sub(1)];
        let b = grid[(k + 1).min(grid.len() - 1)];
        if b > a {
            let (x, v) = golden_section_max(&f, a, b, xtol)?;
            if v > best.1 {
                best = (x, v);
            }
        }
    }
    let edge = 1e-9 * (1.0 + (hi - lo).abs());
    Ok(Maximum {
        x: best.0,
        value: best.1,
        on_boundary: (best.0 - lo).abs() <= edge || (hi - best.0).abs() <= edge,
    })
}

/// Bisection for a sign change of `f` on `[lo, hi]`. `f(lo)` and `f(hi)`
/// must have opposite signs (or one of them be zero).
pub fn bisect_root<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    let fhi = f(hi)?;
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidInterval {
            lo,
            hi,
            reason: "no sign change",
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= xtol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// 21-point Gauss-Kronrod rule: Kronrod abscissae (positive half, descending),
// Kronrod weights, and the 10-point Gauss weights for the odd-indexed abscissae.
// Digits kept as tabulated.
#[allow(clippy::excessive_precision)]
const GK21_NODES: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const GK21_KRONROD_WEIGHTS: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_685_382,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const GK21_GAUSS_WEIGHTS: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Apply the 21-point Gauss-Kronrod pair on `[a, b]`; returns the Kronrod
/// estimate and |Kronrod - Gauss| as the error estimate.
fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = GK21_KRONROD_WEIGHTS[10] * fc;
    let mut gauss = 0.0;
    for k in 0..10 {
        let dx = half * GK21_NODES[k];
        let pair = f(center - dx) + f(center + dx);
        kronrod += GK21_KRONROD_WEIGHTS[k] * pair;
        if k % 2 == 1 {
            gauss += GK21_GAUSS_WEIGHTS[k / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Tolerances for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subintervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_subintervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// `breakpoints` strictly inside `(a, b)` seed the initial partition; use
/// them for known near-singular features of the integrand.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    opts: QuadratureOptions,
) -> Result<f64> {
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > a.min(b) && p < a.max(b))
        .collect();
    inner.sort_by(f64::total_cmp);
    if b < a {
        inner.reverse();
    }
    cuts.extend(inner);
    cuts.push(b);

    let mut heap = BinaryHeap::new();
    let (mut total, mut total_err) = (0.0, 0.0);
    for w in cuts.windows(2) {
        let (value, error) = gauss_kronrod_21(&f, w[0], w[1]);
        total += value;
        total_err += error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    let target = |total: f64| opts.abs_tol.max(opts.rel_tol * total.abs());
    // `!(a <= b)` so that a NaN estimate (singular node) keeps refining
    while !(total_err <= target(total)) {
        if heap.len() >= opts.max_subintervals {
            return Err(Error::QuadratureNotConverged {
                achieved: total_err,
                requested: target(total),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gauss_kronrod_21(&f, worst.a, mid);
        let (rv, re) = gauss_kronrod_21(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }
    // Re-sum to shed the drift of the running update.
    Ok(heap.iter().map(|s| s.value).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kronrod_weights_sum_to_interval_length() {
        let k: f64 = GK21_KRONROD_WEIGHTS[10] + 2.0 * GK21_KRONROD_WEIGHTS[..10].iter().sum::<f64>();
        let g: f64 = 2.0 * GK21_GAUSS_WEIGHTS.iter().sum::<f64>();
        assert_relative_eq!(k, 2.0, epsilon = 1e-14);
        assert_relative_eq!(g, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn kronrod_rule_is_exact_for_high_degree_polynomials() {
        // Kronrod 21 is exact through degree 31, Gauss 10 through degree 19.
        let (v, e) = gauss_kronrod_21(&|x: f64| x.powi(18) + 3.0 * x.powi(5), -1.0, 1.0);
        assert_relative_eq!(v, 2.0 / 19.0, epsilon = 1e-14);
        assert!(e < 1e-14);
        let (v, _) = gauss_kronrod_21(&|x: f64| x.powi(30), 0.0, 1.0);
        assert_relative_eq!(v, 1.0 / 31.0, epsilon = 1e-14);
    }

    #[test]
    fn adaptive_quadrature_handles_sharp_peak() {
        let w = 1e-3_f64;
        let f = |x: f64| w / (x * x + w * w);
        let exact = 2.0 * (1.0 / w).atan();
        let got = integrate_adaptive(f, -1.0, 1.0, &[], QuadratureOptions::default()).unwrap();
        assert_relative_eq!(got, exact, epsilon = 1e-10);
        let got = integrate_adaptive(f, -1.0, 1.0, &[0.0], QuadratureOptions::default()).unwrap();
        assert_relative_eq!(got, exact, epsilon = 1e-10);
    }

    #[test]
    fn quadrature_reports_non_convergence() {
        let opts = QuadratureOptions {
            abs_tol: 1e-14,
            rel_tol: 0.0,
            max_subintervals: 4,
        };
        let err = integrate_adaptive(|x: f64| 1.0 / x.abs().sqrt(), -1.0, 1.0, &[], opts).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, v) = golden_section_max(|x: f64| Ok::<_, ()>(-(x - 0.3).powi(2) + 2.0), -1.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(x, 0.3, epsilon = 1e-6);
        assert_relative_eq!(v, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn grid_maximization_picks_global_peak_and_flags_boundary() {
        let f = |x: f64| Ok((3.0 * x).sin() + 0.1 * x);
        let m = maximize_on_interval(f, 0.0, 10.0, 0.05).unwrap();
        // brute force on a much finer grid
        let crest = (0..=1_000_000)
            .map(|k| k as f64 * 1e-5)
            .max_by(|a, b| ((3.0 * a).sin() + 0.1 * a).total_cmp(&((3.0 * b).sin() + 0.1 * b)))
            .unwrap();
        assert!((m.x - crest).abs() < 2e-5, "{} vs {}", m.x, crest);
        assert!(!m.on_boundary);
        let m = maximize_on_interval(Ok, -2.0, 3.0, 0.1).unwrap();
        assert_eq!(m.x, 3.0);
        assert!(m.on_boundary);
    }

    #[test]
    fn bisection_locates_root() {
        let r = bisect_root(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert_relative_eq!(r, 2f64.sqrt(), epsilon = 1e-13);
        assert!(bisect_root(|x| Ok(x * x + 1.0), 0.0, 2.0, 1e-14).is_err());
    }

    #[test]
    fn uniform_grid_covers_both_ends() {
        let g = uniform_grid(-3.5, -0.5, 0.7);
        assert_eq!(g.first(), Some(&-3.5));
        assert_eq!(g.last(), Some(&-0.5));
        assert!(g.windows(2).all(|w| w[1] - w[0] <= 0.7 + 1e-12));
    }
}
