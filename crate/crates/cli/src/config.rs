//! Run configuration files (schema v1).

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use spencer_core::geometry::CurveParams;
use spencer_core::lie_core::DEFAULT_Q_MAX;
use spencer_core::spectral_verify::{MirrorConfig, HARMONIC_TOL, PAPER_LAMBDAS};
use spencer_core::spencer_assembly::{LaplacianMode, MetricKind};

use crate::CliError;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_OUTPUT_DIR: &str = "spencer-mirror-out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    Constraint,
    Curvature,
}

impl From<MetricName> for MetricKind {
    fn from(m: MetricName) -> Self {
        match m {
            MetricName::Constraint => MetricKind::ConstraintStrength,
            MetricName::Curvature => MetricKind::CurvatureGeometric,
        }
    }
}

fn schema_version() -> u32 {
    CONFIG_SCHEMA_VERSION
}

fn default_algebra() -> String {
    "su2_epsilon".into()
}

fn default_mode() -> LaplacianMode {
    LaplacianMode::Simplified
}

fn default_metric() -> MetricName {
    MetricName::Constraint
}

fn default_q_max() -> usize {
    DEFAULT_Q_MAX
}

fn default_tol() -> f64 {
    HARMONIC_TOL
}

fn default_lambda() -> [f64; 3] {
    PAPER_LAMBDAS[0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default)]
    pub curve: CurveParams,
    #[serde(default = "default_algebra")]
    pub algebra: String,
    #[serde(default = "default_lambda")]
    pub lambda: [f64; 3],
    #[serde(default = "default_mode")]
    pub mode: LaplacianMode,
    #[serde(default = "default_metric")]
    pub metric: MetricName,
    #[serde(default = "default_q_max")]
    pub q_max: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: CONFIG_SCHEMA_VERSION,
            id: None,
            curve: CurveParams::default(),
            algebra: default_algebra(),
            lambda: default_lambda(),
            mode: default_mode(),
            metric: default_metric(),
            q_max: DEFAULT_Q_MAX,
            tol: HARMONIC_TOL,
            output_dir: None,
        }
    }
}

fn mode_tag(mode: LaplacianMode) -> &'static str {
    match mode {
        LaplacianMode::Faithful => "faithful",
        LaplacianMode::Simplified => "simplified",
    }
}

impl RunConfig {
    /// Field-level checks beyond what deserialization enforces.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, msg: String| Err(CliError::Config(format!("{field}: {msg}")));
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return bad("schema_version", format!("unsupported value {}", self.schema_version));
        }
        if self.algebra != "su2_epsilon" {
            return bad("algebra", format!("unknown algebra {:?} (expected \"su2_epsilon\")", self.algebra));
        }
        if self.curve.nodes < 3 {
            return bad("curve.N", format!("must be at least 3 (got {})", self.curve.nodes));
        }
        if !(self.curve.radius > 0.0 && self.curve.radius.is_finite()) {
            return bad("curve.R", format!("must be positive (got {})", self.curve.radius));
        }
        if !(self.curve.a.is_finite() && self.curve.b.is_finite()) {
            return bad("curve", "a and b must be finite".into());
        }
        if let Some(i) = self.lambda.iter().position(|v| !v.is_finite()) {
            return bad(&format!("lambda[{i}]"), "must be finite".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("tol", format!("must be positive (got {})", self.tol));
        }
        if self.q_max < 2 {
            return bad("q_max", format!("must be at least 2 (got {})", self.q_max));
        }
        Ok(())
    }

    pub fn config_id(&self) -> String {
        self.id.clone().unwrap_or_else(|| {
            let l = self.lambda;
            format!("{}:({},{},{})", mode_tag(self.mode), l[0], l[1], l[2])
        })
    }

    pub fn mirror_config(&self) -> MirrorConfig {
        MirrorConfig {
            id: self.config_id(),
            curve: self.curve,
            lambda: self.lambda,
            mode: self.mode,
            metric: self.metric.into(),
            q_max: self.q_max,
            tol: self.tol,
        }
    }

    /// The seven reference vectors with this config's curve and solver settings.
    pub fn reference_sweep(&self, mode: LaplacianMode) -> Vec<RunConfig> {
        PAPER_LAMBDAS
            .iter()
            .map(|l| RunConfig {
                id: None,
                lambda: *l,
                mode,
                output_dir: None,
                ..self.clone()
            })
            .collect()
    }
}

/// A list of runs sharing one output directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub configs: Vec<RunConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl SweepFile {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version: unsupported value {}",
                self.schema_version
            )));
        }
        for (i, c) in self.configs.iter().enumerate() {
            c.validate().map_err(|e| match e {
                CliError::Config(msg) => CliError::Config(format!("configs[{i}].{msg}")),
                other => other,
            })?;
        }
        Ok(())
    }
}

/// Parses JSON, naming the offending field path on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "document".to_string() } else { path };
        CliError::Config(format!("{origin}: field {field}: {}", e.inner()))
    })
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    parse_json(&read_file(path)?, &path.display().to_string())
}
