//! Fixed-wing horseshoe-vortex wake and the wake benefit it induces.
//!
//! A bird of weight `W` and wingspan `2b` flying at speed `U` is modelled as
//! a bound vortex of half-span `a = (π/4) b` plus two trailing tip vortices
//! whose squared core radius grows downstream as
//! `R(x) = r0² + D_f |x| / U`. The benefit a second bird receives is the
//! upwash averaged over its own span,
//!
//! ```text
//! f(x, y) = 1/(2b) ∫_{y-b}^{y+b} v(x, η) dη
//! ```
//!
//! which has the closed form implemented by [`benefit_closed_form`]:
//!
//! ```text
//! f = C · x/(x²+r0²) · [√(c3+x²+r0²) − √(c2+x²+r0²) − √(c1+x²+r0²) + √(c4+x²+r0²)]
//!   + C · f_t1 + (C/2) · f_t2,            C = Γ / (8πb)
//! f_t1 = ½ ln[(c1+R)(c2+R) / ((c3+R)(c4+R))]
//! f_t2 = L(c3) + L(c4) − L(c1) − L(c2),   L(c) = ln[(s−x)/(s+x)] = −2 asinh(x/√(c+R))
//! ```
//!
//! with `s = √(c+x²+R)` and the `c_k` of [`ClosedFormTerms`]. The closed form
//! is the production path; [`benefit_quadrature`] integrates the upwash
//! numerically and exists to cross-check it.

use std::f64::consts::PI;

use crate::benefit::BenefitFunction;
use crate::error::{invalid, Error, Result};
use crate::numeric::{integrate_adaptive, maximize_on_interval, QuadratureOptions};

/// Longitudinal range, in half-spans, over which the wake model is trusted.
pub const MODEL_VALIDITY_HALF_SPANS: f64 = 100.0;

/// Physical parameters of the fixed-wing wake model. Derived quantities are
/// computed on demand from the stored inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WakeParams {
    weight: f64,
    half_span: f64,
    airspeed: f64,
    air_density: f64,
    core_radius_coeff: f64,
    diffusion_coeff: f64,
}

impl WakeParams {
    pub const DEFAULT_CORE_RADIUS_COEFF: f64 = 0.04;
    pub const DEFAULT_DIFFUSION_COEFF: f64 = 1.05e-4;

    /// `wingspan` is the full span `2b`.
    pub fn new(weight: f64, wingspan: f64, airspeed: f64, air_density: f64) -> Result<Self> {
        Self::with_coefficients(
            weight,
            wingspan,
            airspeed,
            air_density,
            Self::DEFAULT_CORE_RADIUS_COEFF,
            Self::DEFAULT_DIFFUSION_COEFF,
        )
    }

    /// Like [`WakeParams::new`] with explicit `r0 / b` and `D_f / (U b)`.
    pub fn with_coefficients(
        weight: f64,
        wingspan: f64,
        airspeed: f64,
        air_density: f64,
        core_radius_coeff: f64,
        diffusion_coeff: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("weight", weight),
            ("wingspan", wingspan),
            ("airspeed", airspeed),
            ("air_density", air_density),
            ("core_radius_coeff", core_radius_coeff),
            ("diffusion_coeff", diffusion_coeff),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(name, format!("must be positive and finite, got {v}")));
            }
        }
        Ok(WakeParams {
            weight,
            half_span: 0.5 * wingspan,
            airspeed,
            air_density,
            core_radius_coeff,
            diffusion_coeff,
        })
    }

    /// Canada goose in migration: 36.75 N, 1.5 m span, 18 m/s, ρ = 1.112 kg/m³.
    pub fn goose() -> Self {
        Self::new(36.75, 1.5, 18.0, 1.112).expect("valid constants")
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
    /// `b`.
    pub fn half_span(&self) -> f64 {
        self.half_span
    }
    pub fn wingspan(&self) -> f64 {
        2.0 * self.half_span
    }
    pub fn airspeed(&self) -> f64 {
        self.airspeed
    }
    pub fn air_density(&self) -> f64 {
        self.air_density
    }
    pub fn core_radius_coeff(&self) -> f64 {
        self.core_radius_coeff
    }
    pub fn diffusion_coeff(&self) -> f64 {
        self.diffusion_coeff
    }

    /// Half-distance between the trailing vortices, `a = (π/4) b`.
    pub fn vortex_half_span(&self) -> f64 {
        0.25 * PI * self.half_span
    }

    /// `Γ = W / (2 ρ a U)`.
    pub fn circulation(&self) -> f64 {
        self.weight / (2.0 * self.air_density * self.vortex_half_span() * self.airspeed)
    }

    /// Initial vortex core radius `r0`.
    pub fn core_radius(&self) -> f64 {
        self.core_radius_coeff * self.half_span
    }

    /// Diffusion term `D_f`.
    pub fn diffusion(&self) -> f64 {
        self.diffusion_coeff * self.airspeed * self.half_span
    }

    /// Squared effective core radius `R(x) = r0² + D_f |x| / U`.
    pub fn core_radius_sq(&self, x: f64) -> f64 {
        self.core_radius().powi(2) + self.diffusion() * x.abs() / self.airspeed
    }

    /// `dR/dx`, undefined at `x = 0`.
    pub fn core_radius_sq_slope(&self, x: f64) -> Option<f64> {
        (x != 0.0).then(|| x.signum() * self.diffusion() / self.airspeed)
    }

    /// Lateral spacing at which the benefit peaks, `β = a + b`.
    pub fn lateral_spacing(&self) -> f64 {
        self.vortex_half_span() + self.half_span
    }

    /// `Γ / (8πb)`, the common prefactor of the closed form.
    pub fn benefit_scale(&self) -> f64 {
        self.circulation() / (8.0 * PI * self.half_span)
    }

    pub fn within_validity(&self, x: f64) -> bool {
        x.abs() <= MODEL_VALIDITY_HALF_SPANS * self.half_span
    }

    /// Largest `α_l` for which `g(R) < 0` on `(r0², r0² + D_f α_l / U]`
    /// for every `|y| > √(a²+b²)`: `(U / D_f)(2ab − r0²)`.
    pub fn cooperative_alpha_bound(&self) -> f64 {
        let a = self.vortex_half_span();
        self.airspeed / self.diffusion() * (2.0 * a * self.half_span - self.core_radius().powi(2))
    }
}

impl Default for WakeParams {
    fn default() -> Self {
        Self::goose()
    }
}

/// Lateral offsets of the four span-end/vortex combinations at receiver
/// offset `y`, plus the coefficients of the quadratic `g(R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormTerms {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c6: f64,
    pub c7: f64,
}

impl ClosedFormTerms {
    pub fn at(y: f64, p: &WakeParams) -> Self {
        let (a, b) = (p.vortex_half_span(), p.half_span());
        let (a2, b2, y2) = (a * a, b * b, y * y);
        ClosedFormTerms {
            c1: (y + b - a).powi(2),
            c2: (y - b + a).powi(2),
            c3: (y + b + a).powi(2),
            c4: (y - b - a).powi(2),
            c6: 2.0 * (a2 + b2 - y2),
            c7: -3.0 * y2 * y2 + 2.0 * (a2 + b2) * y2 + (a2 - b2).powi(2),
        }
    }
}

/// Bound-vortex part of the vertical air velocity at `(x, y)`.
pub fn bound_upwash(x: f64, y: f64, p: &WakeParams) -> f64 {
    let a = p.vortex_half_span();
    let k = x * x + p.core_radius().powi(2);
    p.circulation() / (4.0 * PI) * x / k
        * ((y + a) / ((y + a).powi(2) + k).sqrt() - (y - a) / ((y - a).powi(2) + k).sqrt())
}

/// One trailing vortex at lateral offset `u` from the receiver:
/// `u/(u²+R) · (1 − x/√(u²+x²+R))`.
fn trailing_vortex(u: f64, x: f64, r: f64) -> f64 {
    let s = (u * u + x * x + r).sqrt();
    if x > 0.0 {
        // 1 - x/s = (u²+R) / (s (s + x)), avoids cancellation far ahead
        u / (s * (s + x))
    } else {
        u / (u * u + r) * (1.0 - x / s)
    }
}

/// Trailing-vortex part of the vertical air velocity at `(x, y)`.
pub fn trailing_upwash(x: f64, y: f64, p: &WakeParams) -> f64 {
    let a = p.vortex_half_span();
    let r = p.core_radius_sq(x);
    p.circulation() / (4.0 * PI) * (trailing_vortex(y - a, x, r) - trailing_vortex(y + a, x, r))
}

/// Vertical air velocity induced at `(x, y)` by a bird at the origin;
/// positive is upward.
pub fn upwash(x: f64, y: f64, p: &WakeParams) -> f64 {
    bound_upwash(x, y, p) + trailing_upwash(x, y, p)
}

/// Span average of [`bound_upwash`], in closed form.
pub fn bound_integral(x: f64, y: f64, p: &WakeParams) -> f64 {
    let (a, b) = (p.vortex_half_span(), p.half_span());
    let t = ClosedFormTerms::at(y, p);
    let k = x * x + p.core_radius().powi(2);
    let s = [t.c1, t.c2, t.c3, t.c4].map(|c| (c + k).sqrt());
    // (S3 - S1) + (S4 - S2) written without cancellation
    let sum = 4.0 * a * (y + b) / (s[2] + s[0]) - 4.0 * a * (y - b) / (s[3] + s[1]);
    p.benefit_scale() * x / k * sum
}

/// `∂/∂x` of [`bound_integral`]; smooth everywhere.
pub fn bound_integral_deriv_x(x: f64, y: f64, p: &WakeParams) -> f64 {
    let (a, b) = (p.vortex_half_span(), p.half_span());
    let t = ClosedFormTerms::at(y, p);
    let r0sq = p.core_radius().powi(2);
    let k = x * x + r0sq;
    let s = [t.c1, t.c2, t.c3, t.c4].map(|c| (c + k).sqrt());
    let sum = 4.0 * a * (y + b) / (s[2] + s[0]) - 4.0 * a * (y - b) / (s[3] + s[1]);
    let dsum =
        -x * (4.0 * a * (y + b) / ((s[0] + s[2]) * s[0] * s[2]) - 4.0 * a * (y - b) / ((s[1] + s[3]) * s[1] * s[3]));
    p.benefit_scale() * ((r0sq - x * x) / (k * k) * sum + x / k * dsum)
}

/// `f_t1(x, y) = ½ ln[(c1+R)(c2+R) / ((c3+R)(c4+R))]`.
pub fn trailing_log_term(x: f64, y: f64, p: &WakeParams) -> f64 {
    let t = ClosedFormTerms::at(y, p);
    let r = p.core_radius_sq(x);
    0.5 * ((t.c1 + r).ln() + (t.c2 + r).ln() - (t.c3 + r).ln() - (t.c4 + r).ln())
}

pub fn trailing_log_term_deriv_x(x: f64, y: f64, p: &WakeParams) -> Result<f64> {
    let slope = p.core_radius_sq_slope(x).ok_or(Error::DerivativeDomain { x, y })?;
    let t = ClosedFormTerms::at(y, p);
    let r = p.core_radius_sq(x);
    Ok(0.5 * slope * (1.0 / (t.c1 + r) + 1.0 / (t.c2 + r) - 1.0 / (t.c3 + r) - 1.0 / (t.c4 + r)))
}

/// `ln[(s−x)/(s+x)]` with `s = √(c+x²+R)`.
fn log_ratio(c: f64, x: f64, r: f64) -> f64 {
    -2.0 * (x / (c + r).sqrt()).asinh()
}

fn log_ratio_deriv(c: f64, x: f64, r: f64, slope: f64) -> f64 {
    let cr = c + r;
    let s = (cr + x * x).sqrt();
    (x * slope / cr - 2.0) / s
}

/// `f_t2(x, y) = L(c3) + L(c4) − L(c1) − L(c2)`, odd under `(x, y) → (−x, −y)`.
pub fn trailing_asinh_term(x: f64, y: f64, p: &WakeParams) -> f64 {
    let t = ClosedFormTerms::at(y, p);
    let r = p.core_radius_sq(x);
    log_ratio(t.c3, x, r) + log_ratio(t.c4, x, r) - log_ratio(t.c1, x, r) - log_ratio(t.c2, x, r)
}

pub fn trailing_asinh_term_deriv_x(x: f64, y: f64, p: &WakeParams) -> Result<f64> {
    let slope = p.core_radius_sq_slope(x).ok_or(Error::DerivativeDomain { x, y })?;
    let t = ClosedFormTerms::at(y, p);
    let r = p.core_radius_sq(x);
    Ok(log_ratio_deriv(t.c3, x, r, slope) + log_ratio_deriv(t.c4, x, r, slope)
        - log_ratio_deriv(t.c1, x, r, slope)
        - log_ratio_deriv(t.c2, x, r, slope))
}

/// Wake benefit `f(x, y)` from the closed-form span integral.
pub fn benefit_closed_form(x: f64, y: f64, p: &WakeParams) -> f64 {
    let scale = p.benefit_scale();
    bound_integral(x, y, p) + scale * trailing_log_term(x, y, p) + 0.5 * scale * trailing_asinh_term(x, y, p)
}

/// `∂f/∂x` of the wake benefit. Undefined at `x = 0`, where `R(x)` has a kink.
pub fn benefit_deriv_x(x: f64, y: f64, p: &WakeParams) -> Result<f64> {
    let scale = p.benefit_scale();
    Ok(bound_integral_deriv_x(x, y, p)
        + scale * trailing_log_term_deriv_x(x, y, p)?
        + 0.5 * scale * trailing_asinh_term_deriv_x(x, y, p)?)
}

/// Wake benefit by adaptive quadrature of [`upwash`] over the receiver span.
pub fn benefit_quadrature(x: f64, y: f64, p: &WakeParams) -> Result<f64> {
    benefit_quadrature_with(x, y, p, QuadratureOptions::default())
}

/// [`benefit_quadrature`] with explicit tolerances; the tolerances apply to
/// the span-averaged benefit.
pub fn benefit_quadrature_with(x: f64, y: f64, p: &WakeParams, opts: QuadratureOptions) -> Result<f64> {
    let (a, b) = (p.vortex_half_span(), p.half_span());
    let span = 2.0 * b;
    let scaled = QuadratureOptions {
        abs_tol: opts.abs_tol * span,
        ..opts
    };
    // the tip-vortex cores sit at η = ±a
    let integral = integrate_adaptive(|eta| upwash(x, eta, p), y - b, y + b, &[-a, a], scaled)?;
    Ok(integral / span)
}

/// `f(x, y) + f(−x, −y) = (Γ/8πb) ln[(c1+R)(c2+R) / ((c3+R)(c4+R))]`:
/// the bound-vortex and `f_t2` parts cancel pairwise.
pub fn paired_benefit(x: f64, y: f64, p: &WakeParams) -> f64 {
    2.0 * p.benefit_scale() * trailing_log_term(x, y, p)
}

/// `g(R) = 8ab (R² + c6 R + c7)`; for `x > 0` its sign is the sign of
/// `∂/∂x [f(x, y) + f(−x, −y)]` at `R = R(x)`.
pub fn g_of_r(r: f64, y: f64, p: &WakeParams) -> f64 {
    let t = ClosedFormTerms::at(y, p);
    8.0 * p.vortex_half_span() * p.half_span() * (r * r + t.c6 * r + t.c7)
}

/// Positive root of `R² + c6 R + c7`, if the quadratic has one.
pub fn g_positive_root(y: f64, p: &WakeParams) -> Option<f64> {
    let t = ClosedFormTerms::at(y, p);
    let disc = t.c6 * t.c6 - 4.0 * t.c7;
    if disc < 0.0 {
        return None;
    }
    let root = 0.5 * (-t.c6 + disc.sqrt());
    (root > 0.0).then_some(root)
}

/// Maximum of `f(·, −beta)` over a window of negative `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenefitPeak {
    pub x: f64,
    pub value: f64,
    /// False when the maximizer sits on the window boundary.
    pub reliable: bool,
}

/// Locate the peak of `f(·, −beta)` on `window` by a grid scan of spacing
/// `step` followed by golden-section refinement.
pub fn find_benefit_peak<B: BenefitFunction + ?Sized>(
    f: &B,
    beta: f64,
    window: (f64, f64),
    step: f64,
) -> Result<BenefitPeak> {
    let (lo, hi) = window;
    if !(lo < hi) || hi > 0.0 {
        return Err(Error::InvalidInterval {
            lo,
            hi,
            reason: "peak window must be an ordered interval of non-positive x",
        });
    }
    if let Some(p) = f.wake_params() {
        if !p.within_validity(lo) {
            log::warn!("peak window starts at {lo} m, beyond the wake model's validity range");
        }
    }
    let m = maximize_on_interval(|x| Ok(f.value(x, -beta)), lo, hi, step)?;
    Ok(BenefitPeak {
        x: m.x,
        value: m.value,
        reliable: !m.on_boundary,
    })
}

impl BenefitFunction for WakeParams {
    fn value(&self, x: f64, y: f64) -> f64 {
        benefit_closed_form(x, y, self)
    }

    fn deriv_x(&self, x: f64, y: f64) -> Result<f64> {
        benefit_deriv_x(x, y, self)
    }

    fn deriv_defined(&self, x: f64, _y: f64) -> bool {
        x != 0.0
    }

    fn wake_params(&self) -> Option<&WakeParams> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Richardson-extrapolated central difference.
    fn richardson<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
        let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
        (4.0 * d(h / 2.0) - d(h)) / 3.0
    }

    /// Bound plus trailing upwash typed in directly, no stabilisation.
    fn upwash_transcribed(x: f64, y: f64, p: &WakeParams) -> f64 {
        let a = PI / 4.0 * p.half_span();
        let gamma = p.weight() / (2.0 * p.air_density() * a * p.airspeed());
        let r0 = 0.04 * p.half_span();
        let df = 1.05e-4 * p.airspeed() * p.half_span();
        let rr = r0 * r0 + df * x.abs() / p.airspeed();
        let g = gamma / (4.0 * PI);
        let vb = g * x / (x * x + r0 * r0)
            * ((y + a) / ((y + a).powi(2) + x * x + r0 * r0).sqrt()
                - (y - a) / ((y - a).powi(2) + x * x + r0 * r0).sqrt());
        let vt = g * (y - a) / ((y - a).powi(2) + rr) * (1.0 - x / ((y - a).powi(2) + x * x + rr).sqrt())
            - g * (y + a) / ((y + a).powi(2) + rr) * (1.0 - x / ((y + a).powi(2) + x * x + rr).sqrt());
        vb + vt
    }

    #[test]
    fn derived_quantities() {
        let p = WakeParams::goose();
        let b = 0.75;
        assert_relative_eq!(p.vortex_half_span(), PI / 4.0 * b);
        assert_relative_eq!(p.circulation(), 36.75 / (2.0 * 1.112 * PI / 4.0 * b * 18.0));
        assert_relative_eq!(p.core_radius(), 0.03);
        assert_relative_eq!(p.diffusion(), 1.05e-4 * 18.0 * b);
        assert_relative_eq!(p.lateral_spacing(), (1.0 + PI / 4.0) * b);
        // core grows from 0.04 b to 0.1 b over 80 half-spans
        assert_relative_eq!(p.core_radius_sq(0.0).sqrt(), 0.04 * b, epsilon = 1e-15);
        assert_relative_eq!(p.core_radius_sq(-80.0 * b).sqrt(), 0.1 * b, epsilon = 1e-12);
    }

    #[test]
    fn rejects_non_positive_inputs() {
        assert!(WakeParams::new(0.0, 1.5, 18.0, 1.1).is_err());
        assert!(WakeParams::new(36.0, -1.5, 18.0, 1.1).is_err());
        assert!(WakeParams::with_coefficients(36.0, 1.5, 18.0, 1.1, 0.04, f64::NAN).is_err());
    }

    #[test]
    fn upwash_matches_direct_transcription() {
        let p = WakeParams::goose();
        let beta = p.lateral_spacing();
        for &(x, y) in &[
            (-2.601, -beta),
            (3.0, 0.4),
            (-40.0, 2.0),
            (0.2, -0.6),
            (-0.01, 0.59),
            (12.0, -beta),
        ] {
            assert_relative_eq!(upwash(x, y, &p), upwash_transcribed(x, y, &p), max_relative = 1e-9);
        }
    }

    #[test]
    fn upwash_is_even_in_y_and_decays_ahead() {
        let p = WakeParams::goose();
        for &(x, y) in &[(-2.0, 0.7), (1.0, 1.9), (-30.0, 0.2)] {
            assert_relative_eq!(upwash(x, y, &p), upwash(x, -y, &p), epsilon = 1e-15);
        }
        let far = upwash(1e6, 1.3, &p).abs();
        assert!(far < 1e-9, "{far}");
    }

    #[test]
    fn closed_form_matches_quadrature_at_spot_points() {
        let p = WakeParams::goose();
        for &(x, y) in &[(-2.6, -1.339), (3.0, 1.0), (-10.0, 2.0), (0.05, 0.3), (-22.0, -5.1)] {
            let q = benefit_quadrature(x, y, &p).unwrap();
            assert_relative_eq!(benefit_closed_form(x, y, &p), q, max_relative = 1e-9);
        }
    }

    #[test]
    fn termwise_derivatives_match_finite_differences() {
        let p = WakeParams::goose();
        let h = 1e-4;
        for &(x, y) in &[(-2.6, -1.339), (1.7, 1.339), (-9.0, -2.68), (0.3, 0.5), (-0.2, 3.0)] {
            let fd = richardson(|x| bound_integral(x, y, &p), x, h);
            assert_relative_eq!(
                bound_integral_deriv_x(x, y, &p),
                fd,
                max_relative = 1e-7,
                epsilon = 1e-12
            );
            // tiny slope on an O(1) term: needs a wider stencil against roundoff
            let fd = richardson(|x| trailing_log_term(x, y, &p), x, 1e-2);
            assert_relative_eq!(
                trailing_log_term_deriv_x(x, y, &p).unwrap(),
                fd,
                max_relative = 1e-7,
                epsilon = 1e-12
            );
            let fd = richardson(|x| trailing_asinh_term(x, y, &p), x, h);
            assert_relative_eq!(
                trailing_asinh_term_deriv_x(x, y, &p).unwrap(),
                fd,
                max_relative = 1e-7,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn derivative_undefined_at_zero() {
        let p = WakeParams::goose();
        assert_eq!(
            benefit_deriv_x(0.0, -1.0, &p),
            Err(Error::DerivativeDomain { x: 0.0, y: -1.0 })
        );
        assert!(benefit_deriv_x(1e-9, -1.0, &p).is_ok());
    }

    #[test]
    fn g_quadratic_matches_product_form() {
        let p = WakeParams::goose();
        for &y in &[0.3, 1.0, 1.339, 2.5, 7.0] {
            let t = ClosedFormTerms::at(y, &p);
            for &r in &[1e-4, 0.01, 0.3, 1.2] {
                let product = (2.0 * r + t.c1 + t.c2) * (t.c3 + r) * (t.c4 + r)
                    - (2.0 * r + t.c3 + t.c4) * (t.c1 + r) * (t.c2 + r);
                assert_relative_eq!(g_of_r(r, y, &p), product, max_relative = 1e-10, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn g_root_at_critical_offset() {
        let p = WakeParams::goose();
        let (a, b) = (p.vortex_half_span(), p.half_span());
        let y = (a * a + b * b).sqrt();
        assert_relative_eq!(g_positive_root(y, &p).unwrap(), 2.0 * a * b, max_relative = 1e-12);
        assert!(g_of_r(2.0 * a * b, y, &p).abs() < 1e-12);
    }

    #[test]
    fn cooperative_bound_in_half_spans() {
        let p = WakeParams::goose();
        let ratio = p.cooperative_alpha_bound() / p.half_span();
        assert!((ratio - 14945.0).abs() < 1.0, "{ratio}");
    }

    #[test]
    fn peak_window_must_be_negative() {
        let p = WakeParams::goose();
        assert!(find_benefit_peak(&p, 1.0, (-5.0, 1.0), 0.01).is_err());
        assert!(find_benefit_peak(&p, 1.0, (-1.0, -5.0), 0.01).is_err());
    }
}
