use std::path::Path;

use echelon_cli::config::{BenefitKind, RunConfig};
use echelon_cli::output::csv_body;
use echelon_cli::run;
use echelon_core::WakeParams;
use proptest::prelude::*;

fn echelon(out: &Path, args: &[&str]) -> i32 {
    let mut v = vec!["echelon", "--out", out.to_str().unwrap()];
    v.extend_from_slice(args);
    run(v)
}

fn rows(path: &Path) -> Vec<(f64, Option<f64>)> {
    let text = std::fs::read_to_string(path).unwrap();
    csv_body(&text)
        .skip(1)
        .map(|l| {
            let (x, v) = l.split_once(',').unwrap();
            (x.parse().unwrap(), (!v.is_empty()).then(|| v.parse().unwrap()))
        })
        .collect()
}

fn report_value(path: &Path, key: &str) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")).map(str::to_string))
        .unwrap_or_else(|| panic!("{key} missing from {}", path.display()))
}

#[test]
fn benefit_curve_peaks_near_the_exact_maximizer() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(echelon(d.path(), &["curve", "--quantity", "f", "--y-multiple", "1"]), 0);
    let r = rows(&d.path().join("curve_f_y1.csv"));
    let (x, _) = r
        .iter()
        .map(|&(x, v)| (x, v.unwrap()))
        .fold((0.0, f64::NEG_INFINITY), |m, p| if p.1 > m.1 { p } else { m });
    let b = WakeParams::goose().half_span();
    // grid spacing 0.01 b around the exact peak at -3.450 b
    assert!((x / b + 3.450).abs() <= 0.011, "{}", x / b);
    assert_eq!(r.len(), 4001);
}

#[test]
fn derivative_curve_has_gap_at_origin_and_one_crossing() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(echelon(d.path(), &["curve", "--quantity", "fx"]), 0);
    let r = rows(&d.path().join("curve_fx_y1.csv"));
    let gaps: Vec<f64> = r.iter().filter(|(_, v)| v.is_none()).map(|&(x, _)| x).collect();
    assert_eq!(gaps, [0.0]);
    let b = WakeParams::goose().half_span();
    let neg: Vec<f64> = r
        .iter()
        .filter(|&&(x, _)| x >= -20.0 * b && x <= -0.01 * b)
        .map(|&(_, v)| v.unwrap())
        .collect();
    let crossings = neg.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    assert_eq!(crossings, 1);
}

#[test]
fn curve_header_echoes_parameters_with_full_precision_body() {
    let d = tempfile::tempdir().unwrap();
    let code = echelon(
        d.path(),
        &[
            "curve",
            "--y-multiple",
            "2",
            "--x-min",
            "-1",
            "--x-max",
            "1",
            "--step",
            "0.25",
            "--svg",
        ],
    );
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(d.path().join("curve_f_y2.csv")).unwrap();
    for key in [
        "# weight = 36.75",
        "# wingspan = 1.5",
        "# quantity = f",
        "# beta_resolved = ",
    ] {
        assert!(text.contains(key), "{key}");
    }
    let body: Vec<&str> = csv_body(&text).collect();
    assert_eq!(body[0], "x,f");
    assert_eq!(body.len(), 10);
    let digits = body[1]
        .split(',')
        .nth(1)
        .unwrap()
        .split('e')
        .next()
        .unwrap()
        .replace(['-', '.'], "");
    assert!(digits.len() >= 12);
    assert!(d.path().join("curve_f_y2.svg").exists());
}

#[test]
fn reversed_range_gives_header_only() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(echelon(d.path(), &["curve", "--x-min", "2", "--x-max", "1"]), 0);
    let text = std::fs::read_to_string(d.path().join("curve_f_y1.csv")).unwrap();
    assert_eq!(csv_body(&text).collect::<Vec<_>>(), ["x,f"]);
    assert!(text.contains("# rows = 0"));
}

#[test]
fn check_exit_codes_follow_verdicts() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(
        echelon(d.path(), &["--alpha-s", "2.5", "--alpha-l", "7", "check", "thm2"]),
        0
    );
    let path = d.path().join("check_thm2.txt");
    assert_eq!(report_value(&path, "verdict"), "holds");
    assert_eq!(report_value(&path, "exit_code"), "0");
    assert!(report_value(&path, "q_set").starts_with('['));

    // peak outside P: verdict withheld
    assert_eq!(
        echelon(d.path(), &["--alpha-s", "2.7", "--alpha-l", "7", "check", "thm2"]),
        2
    );
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("peak inside P = fail"));
    assert!(text.contains("verdict withheld"));

    assert_eq!(
        echelon(d.path(), &["--alpha-s", "0.5", "--alpha-l", "7", "check", "thm2"]),
        1
    );
    assert_eq!(report_value(&path, "verdict"), "fails");
}

#[test]
fn lemma_report_carries_the_bound() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(echelon(d.path(), &["check", "lemma1"]), 0);
    let path = d.path().join("check_lemma1.txt");
    let b = WakeParams::goose().half_span();
    let bound: f64 = report_value(&path, "alpha_bound").parse().unwrap();
    assert!((bound / b - 14945.0).abs() < 1.0);
    assert_eq!(report_value(&path, "p"), "none");
    // the exact wake bound is not available for the analytic family
    assert_eq!(echelon(d.path(), &["--benefit", "quadratic", "check", "lemma1"]), 3);
}

#[test]
fn configuration_errors_exit_before_computing() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(
        echelon(d.path(), &["--alpha-s", "3", "--alpha-l", "1", "check", "thm1"]),
        3
    );
    assert_eq!(echelon(d.path(), &["--n", "0", "scan", "ce"]), 3);
    assert_eq!(echelon(d.path(), &["--tol", "-1", "check", "thm1"]), 3);
    assert_eq!(echelon(d.path(), &["check", "thm9"]), 3);
    assert_eq!(echelon(d.path(), &["curve", "--y-multiple", "3"]), 3);
    let cfg = d.path().join("bad.toml");
    std::fs::write(&cfg, "weight = 36.75\nwingspn = 1.5\n").unwrap();
    assert_eq!(
        echelon(d.path(), &["--config", cfg.to_str().unwrap(), "check", "thm1"]),
        3
    );
    assert_eq!(
        echelon(d.path(), &["--config", "/nonexistent/x.toml", "check", "thm1"]),
        3
    );
    assert!(!d.path().join("check_thm1.txt").exists());
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let d = tempfile::tempdir().unwrap();
    let file = d.path().join("occupied");
    std::fs::write(&file, "").unwrap();
    assert_eq!(echelon(&file, &["curve", "--x-min", "0", "--x-max", "0"]), 4);
}

#[test]
fn config_file_values_are_used() {
    let d = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        alpha_s: 2.5,
        alpha_l: 7.0,
        output_dir: d.path().join("from_config"),
        ..RunConfig::default()
    };
    let path = d.path().join("run.toml");
    cfg.save(&path).unwrap();
    assert_eq!(run(["echelon", "--config", path.to_str().unwrap(), "check", "thm2"]), 0);
    assert!(d.path().join("from_config/check_thm2.txt").exists());
}

#[test]
fn selfish_search_finds_nothing_in_p() {
    let d = tempfile::tempdir().unwrap();
    let code = echelon(d.path(), &["--seed", "3", "search", "ne", "--trajectories"]);
    assert_eq!(code, 0);
    let summary = d.path().join("search_ne.txt");
    assert_eq!(report_value(&summary, "restarts"), "100");
    assert_eq!(report_value(&summary, "of_interest"), "0");
    let traj = std::fs::read_to_string(d.path().join("search_ne_trajectory_000.csv")).unwrap();
    assert_eq!(csv_body(&traj).next(), Some("step,x1,x2"));
}

#[test]
fn cooperative_search_on_quadratic_hits_the_drift_guard() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("q.toml");
    std::fs::write(&cfg, "benefit = \"quadratic\"\nrestarts = 5\nn = 3\nseed = 1\n").unwrap();
    assert_eq!(
        echelon(d.path(), &["--config", cfg.to_str().unwrap(), "search", "ce"]),
        0
    );
    let summary = d.path().join("search_ce.txt");
    assert_eq!(report_value(&summary, "drift_guard"), "5");
    assert_eq!(report_value(&summary, "converged"), "0");
}

#[test]
fn zero_restarts_give_an_empty_summary() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("z.toml");
    std::fs::write(&cfg, "restarts = 0\n").unwrap();
    assert_eq!(
        echelon(d.path(), &["--config", cfg.to_str().unwrap(), "search", "ce"]),
        0
    );
    let summary = d.path().join("search_ce.txt");
    assert_eq!(report_value(&summary, "restarts"), "0");
    let text = std::fs::read_to_string(&summary).unwrap();
    assert!(text.trim_end().ends_with("[restarts]"));
}

#[test]
fn scan_exit_code_reflects_positivity() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(
        echelon(d.path(), &["--alpha-l", "3.5", "scan", "ne", "--step", "0.01"]),
        0
    );
    let report = d.path().join("scan_ne.txt");
    assert_eq!(report_value(&report, "strictly_positive"), "true");
    let text = std::fs::read_to_string(d.path().join("scan_ne_rows.csv")).unwrap();
    assert_eq!(csv_body(&text).count(), 302);
    // with a tolerance above the minimum the scan no longer certifies anything
    assert_eq!(
        echelon(
            d.path(),
            &["--alpha-l", "3.5", "--tol", "1", "scan", "ne", "--step", "0.01"]
        ),
        2
    );
}

#[test]
fn reproduce_manifest_lists_every_entry() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(echelon(d.path(), &["reproduce"]), 0);
    let text = std::fs::read_to_string(d.path().join("manifest.txt")).unwrap();
    assert_eq!(report_value(&d.path().join("manifest.txt"), "entries"), "16");
    assert_eq!(report_value(&d.path().join("manifest.txt"), "failed"), "0");
    let entries: Vec<&str> = text.lines().filter(|l| l.contains(" | ")).collect();
    assert_eq!(entries.len(), echelon_cli::commands::reproduction_list().len());
    assert!(entries.iter().any(|l| l.contains("P = [-7, -2.5] | holds")));
    assert!(!text.contains("error"));
}

#[test]
fn reproduce_continues_past_failing_entries() {
    let d = tempfile::tempdir().unwrap();
    // the exact cooperative bound exists only for the wake benefit
    assert_eq!(echelon(d.path(), &["--benefit", "quadratic", "reproduce"]), 4);
    let text = std::fs::read_to_string(d.path().join("manifest.txt")).unwrap();
    assert_eq!(report_value(&d.path().join("manifest.txt"), "entries"), "16");
    assert!(text.contains("| error: "));
    assert!(d.path().join("scan_ce_n3_p0.5_14.txt").exists());
}

fn config_strategy() -> impl Strategy<Value = RunConfig> {
    (
        (
            0.1f64..100.0,
            0.1f64..5.0,
            1.0f64..50.0,
            0.5f64..2.0,
            0.01f64..0.1,
            1e-5f64..1e-3,
        ),
        (prop::option::of(0.5f64..5.0), 0.1f64..5.0, 0.0f64..20.0, 1usize..8),
        (
            prop::option::of(1e-5f64..1e-2),
            1e-5f64..1e-2,
            1e-12f64..1e-3,
            0usize..1000,
            0u64..=i64::MAX as u64,
        ),
        any::<bool>(),
    )
        .prop_map(|(phys, geo, num, quad)| {
            let (weight, wingspan, airspeed, air_density, core_radius_coeff, diffusion_coeff) = phys;
            let (beta, alpha_s, extra, n) = geo;
            let (grid_step, scan_step, tolerance, restarts, seed) = num;
            RunConfig {
                weight,
                wingspan,
                airspeed,
                air_density,
                core_radius_coeff,
                diffusion_coeff,
                beta,
                beta_lower: beta.map(|b| 0.9 * b),
                alpha_s,
                alpha_l: alpha_s + extra,
                n,
                grid_step,
                scan_step,
                tolerance,
                restarts,
                seed,
                output_dir: "results/run 1".into(),
                benefit: if quad {
                    BenefitKind::Quadratic
                } else {
                    BenefitKind::Wake
                },
            }
        })
}

proptest! {
    #[test]
    fn config_round_trips(c in config_strategy()) {
        prop_assert!(c.validate().is_ok());
        let text = c.to_toml().unwrap();
        prop_assert_eq!(RunConfig::from_toml(&text).unwrap(), c);
    }

    #[test]
    fn exit_code_is_a_function_of_verdict(a_s in 0.3f64..3.0, width in 0.5f64..10.0) {
        let d = tempfile::tempdir().unwrap();
        let (s, l) = (a_s.to_string(), (a_s + width).to_string());
        let code = echelon(d.path(), &["--grid-step", "0.005", "--alpha-s", &s, "--alpha-l", &l, "check", "thm1"]);
        let verdict = report_value(&d.path().join("check_thm1.txt"), "verdict");
        let expected = match verdict.as_str() { "holds" => 0, "fails" => 1, _ => 2 };
        prop_assert_eq!(code, expected);
    }
}
