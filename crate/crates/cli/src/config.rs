//! Run configuration: a flat TOML file with SI units.

use std::path::{Path, PathBuf};

use echelon_core::{BenefitFunction, CheckSettings, IntervalSpec, SearchSettings, SeparableBenefit, WakeParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Which inter-agent benefit the commands evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BenefitKind {
    /// Fixed-wing horseshoe-vortex wake.
    Wake,
    /// `f(x, y) = x²`, a separable analytic test family.
    Quadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Weight `W` (N).
    pub weight: f64,
    /// Wingspan `2b` (m).
    pub wingspan: f64,
    /// Airspeed `U` (m/s).
    pub airspeed: f64,
    /// Air density `ρ` (kg/m³).
    pub air_density: f64,
    /// Vortex core radius as a multiple of `b`.
    pub core_radius_coeff: f64,
    /// Diffusion `D_f` as a multiple of `U b`.
    pub diffusion_coeff: f64,
    /// Lateral spacing `β` (m); defaults to `a + b`.
    pub beta: Option<f64>,
    /// Lower lateral bound for the cooperative check (m); defaults to the
    /// midpoint of `√(a² + b²)` and `β`.
    pub beta_lower: Option<f64>,
    /// `P = [−alpha_l, −alpha_s]` (m).
    pub alpha_s: f64,
    pub alpha_l: f64,
    /// Follower count.
    pub n: usize,
    /// Condition-check grid spacing (m); defaults to `0.001 b`.
    pub grid_step: Option<f64>,
    /// Residual-scan grid spacing (m).
    pub scan_step: f64,
    /// Verdict tolerance `τ`.
    pub tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub benefit: BenefitKind,
}

impl Default for RunConfig {
    fn default() -> Self {
        let goose = WakeParams::goose();
        RunConfig {
            weight: goose.weight(),
            wingspan: goose.wingspan(),
            airspeed: goose.airspeed(),
            air_density: goose.air_density(),
            core_radius_coeff: goose.core_radius_coeff(),
            diffusion_coeff: goose.diffusion_coeff(),
            beta: None,
            beta_lower: None,
            alpha_s: 0.5,
            alpha_l: 14.0,
            n: 2,
            grid_step: None,
            scan_step: 1e-3,
            tolerance: 1e-8,
            restarts: 100,
            seed: 0,
            output_dir: PathBuf::from("out"),
            benefit: BenefitKind::Wake,
        }
    }
}

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let text = self.to_toml()?;
        std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Every inconsistency is reported here, before any computation.
    pub fn validate(&self) -> CliResult<()> {
        for (name, v) in [
            ("weight", self.weight),
            ("wingspan", self.wingspan),
            ("airspeed", self.airspeed),
            ("air_density", self.air_density),
            ("core_radius_coeff", self.core_radius_coeff),
            ("diffusion_coeff", self.diffusion_coeff),
            ("alpha_s", self.alpha_s),
            ("alpha_l", self.alpha_l),
            ("scan_step", self.scan_step),
            ("tolerance", self.tolerance),
        ] {
            positive(name, v)?;
        }
        for (name, v) in [
            ("beta", self.beta),
            ("beta_lower", self.beta_lower),
            ("grid_step", self.grid_step),
        ] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if self.alpha_s > self.alpha_l {
            return Err(CliError::Config(format!(
                "alpha_s ({}) must not exceed alpha_l ({})",
                self.alpha_s, self.alpha_l
            )));
        }
        if self.n == 0 {
            return Err(CliError::Config("n must be at least 1".into()));
        }
        if self.seed > i64::MAX as u64 {
            return Err(CliError::Config(format!("seed must not exceed {}", i64::MAX)));
        }
        let params = self.wake_params()?;
        let beta = self.beta_or_default(&params);
        if let Some(lower) = self.beta_lower {
            if lower > beta {
                return Err(CliError::Config(format!(
                    "beta_lower ({lower}) must not exceed beta ({beta})"
                )));
            }
        }
        Ok(())
    }

    pub fn wake_params(&self) -> CliResult<WakeParams> {
        WakeParams::with_coefficients(
            self.weight,
            self.wingspan,
            self.airspeed,
            self.air_density,
            self.core_radius_coeff,
            self.diffusion_coeff,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    fn beta_or_default(&self, params: &WakeParams) -> f64 {
        self.beta.unwrap_or_else(|| params.lateral_spacing())
    }

    pub fn interval(&self) -> CliResult<IntervalSpec> {
        IntervalSpec::new(self.alpha_s, self.alpha_l).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// A validated configuration with everything derived from it.
pub struct Resolved {
    pub config: RunConfig,
    pub params: WakeParams,
    pub beta: f64,
    pub beta_lower: f64,
    pub benefit: Box<dyn BenefitFunction>,
}

impl Resolved {
    pub fn new(config: RunConfig) -> CliResult<Self> {
        config.validate()?;
        let params = config.wake_params()?;
        let beta = config.beta_or_default(&params);
        let (a, b) = (params.vortex_half_span(), params.half_span());
        let beta_lower = config.beta_lower.unwrap_or(0.5 * ((a * a + b * b).sqrt() + beta));
        let benefit: Box<dyn BenefitFunction> = match config.benefit {
            BenefitKind::Wake => Box::new(params),
            BenefitKind::Quadratic => Box::new(SeparableBenefit::quadratic()),
        };
        Ok(Resolved {
            config,
            params,
            beta,
            beta_lower,
            benefit,
        })
    }

    pub fn half_span(&self) -> f64 {
        self.params.half_span()
    }

    pub fn check_settings(&self) -> CheckSettings {
        let mut s = CheckSettings::for_half_span(self.half_span());
        if let Some(h) = self.config.grid_step {
            s.grid_step = h;
        }
        s.tolerance = self.config.tolerance;
        s
    }

    pub fn search_settings(&self) -> SearchSettings {
        SearchSettings::for_half_span(self.half_span())
    }
}
