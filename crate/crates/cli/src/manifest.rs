//! Run manifests: the serializable description of one optimizer run.
//!
//! A manifest comes from a named preset file, an explicit TOML file, or bare
//! command-line flags, with flag overrides applied last. Every numeric knob
//! of the surrogate, the ascent loop, the recovery rule, and the hillclimber
//! lives here, so a manifest pins a run completely; together with the seed
//! this makes file output byte-reproducible.

use serde::Deserialize;
use std::fmt;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemName {
    /// Objective-space triangle `{F in [0,1]^2 : F1 + F2 <= 1}`.
    Triangle,
    /// Summed quadratic decision-space problem on the unit box.
    Quadratic,
    /// Simplex-constrained supersphere problem.
    Supersphere,
    /// Box-constrained supersphere stress variant on `[-2, 2]^3`.
    SupersphereBox,
    /// Supersphere on the enlarged box `[-0.4, 1.4]^3` with random
    /// layered starts.
    LayeredBox,
    /// Static eight-point integer-grid example; evaluation only.
    Fig1,
}

impl FromStr for ProblemName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "triangle" => Ok(Self::Triangle),
            "quadratic" => Ok(Self::Quadratic),
            "supersphere" => Ok(Self::Supersphere),
            "supersphere-box" => Ok(Self::SupersphereBox),
            "layered-box" => Ok(Self::LayeredBox),
            "fig1" => Ok(Self::Fig1),
            other => Err(CliError::Usage(format!("unknown problem `{other}`"))),
        }
    }
}

impl fmt::Display for ProblemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Triangle => "triangle",
            Self::Quadratic => "quadratic",
            Self::Supersphere => "supersphere",
            Self::SupersphereBox => "supersphere-box",
            Self::LayeredBox => "layered-box",
            Self::Fig1 => "fig1",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndicatorName {
    Mag,
    Hv,
}

impl FromStr for IndicatorName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "mag" => Ok(Self::Mag),
            "hv" => Ok(Self::Hv),
            other => Err(CliError::Usage(format!("unknown indicator `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerName {
    Gradient,
    Hillclimb,
}

impl FromStr for OptimizerName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "gradient" => Ok(Self::Gradient),
            "hillclimb" => Ok(Self::Hillclimb),
            other => Err(CliError::Usage(format!("unknown optimizer `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitName {
    /// Ten interior points on the line `F1 + F2 = 0.7`.
    TriangleLine,
    /// Dominated `4+3+2+1` lattice in the lower-left subtriangle.
    TriangleNested,
    /// The ten listed perturbed decision points of the quadratic example.
    QuadraticPerturbed,
    /// Perturbed simplex-lattice initialization.
    DasDennis,
    /// Uniform samples from `[-0.25, 1.25]^3`, projected onto the run box.
    LayeredBox,
    /// The static eight-point integer grid.
    Fig1,
}

impl FromStr for InitName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "triangle-line" => Ok(Self::TriangleLine),
            "triangle-nested" => Ok(Self::TriangleNested),
            "quadratic-perturbed" => Ok(Self::QuadraticPerturbed),
            "das-dennis" => Ok(Self::DasDennis),
            "layered-box" => Ok(Self::LayeredBox),
            "fig1" => Ok(Self::Fig1),
            other => Err(CliError::Usage(format!("unknown initializer `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::Usage(format!("unknown format `{other}`"))),
        }
    }
}

/// Complete description of one run. Serialized form of the preset files.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub name: Option<String>,
    pub problem: ProblemName,
    #[serde(default = "defaults::indicator")]
    pub indicator: IndicatorName,
    #[serde(default = "defaults::optimizer")]
    pub optimizer: OptimizerName,
    /// Initial configuration; defaults to the problem's canonical start.
    pub init: Option<InitName>,
    #[serde(default = "defaults::gamma")]
    pub gamma: f64,
    /// Simplex-lattice resolution; for random layered starts it fixes the
    /// point budget `(H+1)(H+2)/2`.
    #[serde(default = "defaults::lattice_h")]
    pub lattice_h: usize,
    pub mu: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default = "defaults::iters")]
    pub iters: usize,
    #[serde(default = "defaults::episodes")]
    pub episodes: usize,
    #[serde(default = "defaults::alpha")]
    pub alpha: f64,
    #[serde(default = "defaults::fd_radius")]
    pub fd_radius: f64,
    #[serde(default = "defaults::epsilon")]
    pub epsilon: f64,
    #[serde(default = "defaults::tau")]
    pub tau: f64,
    #[serde(default = "defaults::sigma")]
    pub sigma: f64,
    #[serde(default = "defaults::normalize")]
    pub normalize: bool,
    #[serde(default = "defaults::exact_front_threshold")]
    pub exact_front_threshold: usize,
    #[serde(default)]
    pub recovery: bool,
    #[serde(default = "defaults::recovery_window")]
    pub recovery_window: usize,
    #[serde(default = "defaults::recovery_min_growth")]
    pub recovery_min_growth: f64,
    #[serde(default = "defaults::recovery_step")]
    pub recovery_step: f64,
    #[serde(default = "defaults::recovery_perturb_count")]
    pub recovery_perturb_count: usize,
    #[serde(default = "defaults::freeze_tail")]
    pub freeze_tail: usize,
    #[serde(default = "defaults::hc_alpha0")]
    pub hc_alpha0: f64,
    #[serde(default = "defaults::hc_rho")]
    pub hc_rho: f64,
    #[serde(default = "defaults::hc_alpha_min")]
    pub hc_alpha_min: f64,
    #[serde(default = "defaults::hc_retries")]
    pub hc_retries: usize,
    #[serde(default = "defaults::sample_stride")]
    pub sample_stride: usize,
    #[serde(default = "defaults::format")]
    pub format: OutputFormat,
    /// Gaussian scale of the simplex-lattice perturbation.
    #[serde(default = "defaults::dd_sigma")]
    pub dd_sigma: f64,
}

mod defaults {
    use super::{IndicatorName, OptimizerName, OutputFormat};

    pub fn indicator() -> IndicatorName {
        IndicatorName::Mag
    }
    pub fn optimizer() -> OptimizerName {
        OptimizerName::Gradient
    }
    pub fn gamma() -> f64 {
        1.0
    }
    pub fn lattice_h() -> usize {
        3
    }
    pub fn iters() -> usize {
        200
    }
    pub fn episodes() -> usize {
        500
    }
    pub fn alpha() -> f64 {
        0.005
    }
    pub fn fd_radius() -> f64 {
        1e-6
    }
    pub fn epsilon() -> f64 {
        1e-3
    }
    pub fn tau() -> f64 {
        2e-4
    }
    pub fn sigma() -> f64 {
        0.03
    }
    pub fn normalize() -> bool {
        true
    }
    pub fn exact_front_threshold() -> usize {
        6
    }
    pub fn recovery_window() -> usize {
        10
    }
    pub fn recovery_min_growth() -> f64 {
        5e-3
    }
    pub fn recovery_step() -> f64 {
        0.16
    }
    pub fn recovery_perturb_count() -> usize {
        3
    }
    pub fn freeze_tail() -> usize {
        10
    }
    pub fn hc_alpha0() -> f64 {
        0.05
    }
    pub fn hc_rho() -> f64 {
        0.5
    }
    pub fn hc_alpha_min() -> f64 {
        2e-3
    }
    pub fn hc_retries() -> usize {
        10
    }
    pub fn sample_stride() -> usize {
        20
    }
    pub fn format() -> OutputFormat {
        OutputFormat::Csv
    }
    pub fn dd_sigma() -> f64 {
        0.01
    }
}

impl RunManifest {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("invalid manifest: {e}")))
    }

    /// Effective seed: explicit value, else the environment fallback, else 8.
    pub fn effective_seed(&self) -> Result<u64, CliError> {
        if let Some(seed) = self.seed {
            return Ok(seed);
        }
        if let Ok(text) = std::env::var("LAYERED_ASCENT_SEED") {
            return text.trim().parse().map_err(|_| {
                CliError::Usage(format!("LAYERED_ASCENT_SEED is not an integer: `{text}`"))
            });
        }
        Ok(8)
    }

    pub fn label(&self) -> String {
        match &self.name {
            Some(name) => name.clone(),
            None => format!("{}/{}", self.problem, indicator_label(self.indicator)),
        }
    }
}

pub fn indicator_label(indicator: IndicatorName) -> &'static str {
    match indicator {
        IndicatorName::Mag => "mag",
        IndicatorName::Hv => "hv",
    }
}
