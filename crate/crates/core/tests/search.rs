use echelon_core::search::{
    find_ce, find_ne, random_inits, run_restarts, scan_ce_gradient_n, scan_ne_residual, UpdateMode,
};
use echelon_core::{
    ce_gradient, ne_stationarity_residual, BenefitFunction, FormationState, IntervalSpec, SearchKind, SearchSettings,
    WakeParams,
};
use proptest::prelude::*;

/// Concave in every relative position: `f(x, y) = −(x − 0.5 − 3y)²`.
struct TiltedParabola;

impl BenefitFunction for TiltedParabola {
    fn value(&self, x: f64, y: f64) -> f64 {
        -(x - 0.5 - 3.0 * y).powi(2)
    }
    fn deriv_x(&self, x: f64, y: f64) -> echelon_core::Result<f64> {
        Ok(-2.0 * (x - 0.5 - 3.0 * y))
    }
}

/// Rear agents only, peaked 2 m behind the front neighbor.
struct TrailingBump;

impl BenefitFunction for TrailingBump {
    fn value(&self, x: f64, y: f64) -> f64 {
        if y < 0.0 {
            (-(x + 2.0).powi(2) - (y + 1.0).powi(2) / 0.0025).exp()
        } else {
            0.0
        }
    }
    fn deriv_x(&self, x: f64, y: f64) -> echelon_core::Result<f64> {
        Ok(-2.0 * (x + 2.0) * self.value(x, y))
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

#[test]
fn concave_group_benefit_reaches_a_confirmed_maximum() {
    let s = SearchSettings::for_half_span(1.0);
    let p = IntervalSpec::new(0.5, 20.0).unwrap();
    let r = find_ce(&TiltedParabola, 1.0, &[-1.0, -2.0, -3.0], &p, &s).unwrap();
    assert!(r.converged, "{r:?}");
    assert_eq!(r.second_order, Some(true));
    let st = FormationState::new(r.positions.clone(), 1.0).unwrap();
    assert!(max_abs(&ce_gradient(&st, &TiltedParabola).unwrap()) <= s.residual_tol);
}

#[test]
fn goose_restarts_are_deterministic() {
    let f = WakeParams::goose();
    let p = IntervalSpec::new(0.5, 14.0).unwrap();
    let s = SearchSettings::default();
    for kind in [SearchKind::Ne, SearchKind::Ce] {
        let a = run_restarts(&f, kind, 2, f.lateral_spacing(), &p, 3, 99, UpdateMode::Cyclic, &s).unwrap();
        let b = run_restarts(&f, kind, 2, f.lateral_spacing(), &p, 3, 99, UpdateMode::Cyclic, &s).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|r| !r.of_interest()));
    }
}

#[test]
fn goose_leapfrogging_is_reported() {
    let f = WakeParams::goose();
    let p = IntervalSpec::new(0.5, 14.0).unwrap();
    let s = SearchSettings::default();
    let init = &random_inits(2, &p, 1, 42)[0];
    let r = find_ne(&f, f.lateral_spacing(), init, &p, UpdateMode::Cyclic, &s).unwrap();
    assert!(!r.converged);
    assert!(r.diagnostic.unwrap().contains("cycle"));
}

#[test]
fn goose_ascent_collapses_longitudinally() {
    let f = WakeParams::goose();
    let p = IntervalSpec::new(0.5, 14.0).unwrap();
    let s = SearchSettings::default();
    let r = find_ce(&f, f.lateral_spacing(), &[-2.6, -5.2, -7.8], &p, &s).unwrap();
    assert!(!r.converged);
    assert!(r.diagnostic.unwrap().starts_with("cohesion/dispersion drift"));
}

#[test]
fn ne_scan_refinement_is_consistent() {
    let f = WakeParams::goose();
    let beta = f.lateral_spacing();
    let p = IntervalSpec::new(0.5, 3.5).unwrap();
    let coarse = scan_ne_residual(&f, beta, &p, 4e-3).unwrap();
    let fine = scan_ne_residual(&f, beta, &p, 1e-3).unwrap();
    // Lipschitz bound of the residual map, from neighboring samples
    let (x, y) = coarse.at;
    let r = |a: f64, b: f64| {
        let st = FormationState::from_gaps(&[a, b], beta).unwrap();
        max_abs(&ne_stationarity_residual(&st, &f).unwrap())
    };
    let h = coarse.grid_step;
    let lip = [(h, 0.0), (0.0, h)]
        .iter()
        .map(|&(dx, dy)| {
            let (xa, ya) = ((x + dx).min(-0.5), (y + dy).min(-0.5));
            (r(xa, ya) - r(x, y)).abs() / h
        })
        .fold(0.0, f64::max);
    assert!(fine.value <= coarse.value + 1e-15);
    assert!(coarse.value - fine.value <= 2.0 * lip * h + 1e-12);
    assert!(fine.value > 0.0);
}

#[test]
fn ne_scan_matches_residual_at_reported_point() {
    let f = WakeParams::goose();
    let beta = f.lateral_spacing();
    let p = IntervalSpec::new(0.5, 3.5).unwrap();
    let m = scan_ne_residual(&f, beta, &p, 1e-2).unwrap();
    let st = FormationState::from_gaps(&[m.at.0, m.at.1], beta).unwrap();
    let res = ne_stationarity_residual(&st, &f).unwrap();
    assert!((max_abs(&res) - m.value).abs() <= 1e-15);
}

#[test]
fn ce_scan_rejects_single_follower() {
    let f = WakeParams::goose();
    let p = IntervalSpec::new(0.5, 3.5).unwrap();
    assert!(scan_ce_gradient_n(&f, f.lateral_spacing(), &p, 1e-2, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn converged_results_meet_tolerance(gaps in prop::collection::vec(-3.5f64..-0.5, 1..=4), cyclic in any::<bool>()) {
        let s = SearchSettings::for_half_span(1.0);
        let p = IntervalSpec::new(0.5, 3.5).unwrap();
        let init = FormationState::from_gaps(&gaps, 1.0).unwrap().positions().to_vec();
        let mode = if cyclic { UpdateMode::Cyclic } else { UpdateMode::Simultaneous };
        let r = find_ne(&TrailingBump, 1.0, &init, &p, mode, &s).unwrap();
        if r.converged {
            let st = FormationState::new(r.positions.clone(), 1.0).unwrap();
            prop_assert!(max_abs(&ne_stationarity_residual(&st, &TrailingBump).unwrap()) <= s.residual_tol);
        }
        let c = find_ce(&TiltedParabola, 1.0, &init, &p, &s).unwrap();
        if c.converged {
            let st = FormationState::new(c.positions.clone(), 1.0).unwrap();
            prop_assert!(max_abs(&ce_gradient(&st, &TiltedParabola).unwrap()) <= s.residual_tol);
        }
        prop_assert_eq!(&r, &find_ne(&TrailingBump, 1.0, &init, &p, mode, &s).unwrap());
    }
}
