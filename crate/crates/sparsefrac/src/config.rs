//! Experiment configuration (TOML). Unknown keys are rejected and parse
//! errors carry the line and column of the offending key.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sparsefrac_core::dyadic::MAX_DIM;
use sparsefrac_core::functions::{BmoSpec, FunctionSpec};
use sparsefrac_core::verify::Theorem;
use sparsefrac_core::weights::{ExponentTriple, WeightSpec};
use sparsefrac_core::YoungFunction;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub depth: Option<u32>,
    /// Finest battery level for characteristics; defaults to `depth − 4`.
    pub k_char: Option<u32>,
    pub jobs: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub exponents: Option<ExponentsConfig>,
    pub weight: Option<WeightConfig>,
    pub function: Option<FunctionConfig>,
    pub bmo: Option<BmoConfig>,
    pub operator: Option<OperatorConfig>,
    pub verify: Option<VerifyConfig>,
    pub sweep: Option<SweepConfig>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentsConfig {
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
}

impl ExponentsConfig {
    pub fn triple(&self) -> Result<ExponentTriple, ConfigError> {
        ExponentTriple::new(self.n, self.alpha, self.p).map_err(|e| ConfigError::Invalid(format!("exponents: {e}")))
    }

    /// Triple for the maximal operator (allows `α = 0`).
    pub fn maximal_triple(&self) -> Result<ExponentTriple, ConfigError> {
        ExponentTriple::maximal(self.n, self.alpha, self.p).map_err(|e| ConfigError::Invalid(format!("exponents: {e}")))
    }
}

fn point(v: &[f64], n: usize, what: &str) -> Result<[f64; MAX_DIM], ConfigError> {
    if v.len() != n {
        return Err(ConfigError::Invalid(format!("{what} needs {n} coordinates, got {}", v.len())));
    }
    let mut out = [0.0; MAX_DIM];
    out[..n].copy_from_slice(v);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightConfig {
    Constant { value: f64 },
    Power { gamma: f64, x0: Vec<f64> },
    Step { low: f64, high: f64 },
}

impl WeightConfig {
    pub fn spec(&self, n: usize) -> Result<WeightSpec, ConfigError> {
        Ok(match self {
            WeightConfig::Constant { value } => WeightSpec::Constant(*value),
            WeightConfig::Power { gamma, x0 } => WeightSpec::Power { x0: point(x0, n, "weight.x0")?, gamma: *gamma },
            WeightConfig::Step { low, high } => WeightSpec::Step { low: *low, high: *high },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionConfig {
    Zero,
    Constant { value: f64 },
    Indicator { lo: Vec<f64>, hi: Vec<f64> },
    Spike { at: Vec<f64>, level: u32 },
    DualWeight { lo: Vec<f64>, hi: Vec<f64> },
    /// Piecewise constant on the depth-`depth` mesh.
    Coarse { depth: u32, values: Vec<f64> },
    /// Random coarse function drawn from stream 0 of the seed.
    Random,
}

impl FunctionConfig {
    pub fn spec(&self, n: usize, seed: u64) -> Result<FunctionSpec, ConfigError> {
        Ok(match self {
            FunctionConfig::Zero => FunctionSpec::Zero,
            FunctionConfig::Constant { value } => FunctionSpec::Constant(*value),
            FunctionConfig::Indicator { lo, hi } => {
                FunctionSpec::Indicator { lo: point(lo, n, "function.lo")?, hi: point(hi, n, "function.hi")? }
            }
            FunctionConfig::Spike { at, level } => FunctionSpec::Spike { at: point(at, n, "function.at")?, level: *level },
            FunctionConfig::DualWeight { lo, hi } => {
                FunctionSpec::DualWeight { lo: point(lo, n, "function.lo")?, hi: point(hi, n, "function.hi")? }
            }
            FunctionConfig::Coarse { depth, values } => FunctionSpec::Coarse { depth: *depth, values: values.clone() },
            FunctionConfig::Random => crate::random::random_function(&mut crate::random::case_rng(seed, 0), n),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BmoConfig {
    Constant { value: f64 },
    Step { at: f64 },
    LogDistance { x0: Vec<f64> },
}

impl BmoConfig {
    pub fn spec(&self, n: usize) -> Result<BmoSpec, ConfigError> {
        Ok(match self {
            BmoConfig::Constant { value } => BmoSpec::Constant(*value),
            BmoConfig::Step { at } => BmoSpec::Step { at: *at },
            BmoConfig::LogDistance { x0 } => BmoSpec::LogDistance { x0: point(x0, n, "bmo.x0")? },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorName {
    /// `I^D_α` on grid 0.
    FractionalIntegral,
    /// `I^S_α` with the family selected from `f`.
    SparseFractionalIntegral,
    /// `M_α` (maximum over all shifted grids).
    FractionalMaximal,
    /// `M^D_{Φ,σ,α}` with `σ = w^{−p′}`.
    OrliczMaximal,
    /// `C^D_b` on grid 0.
    Commutator,
    /// `I_α` (1D only).
    Riesz,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum YoungName {
    Llog,
    Expm1,
    Power,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    pub name: OperatorName,
    pub young: Option<YoungName>,
    /// Exponent of the power Young function.
    pub young_p: Option<f64>,
}

pub fn young(name: Option<YoungName>, p: Option<f64>) -> Result<YoungFunction, ConfigError> {
    match name.unwrap_or(YoungName::Llog) {
        YoungName::Llog => Ok(YoungFunction::LLog),
        YoungName::Expm1 => Ok(YoungFunction::Expm1),
        YoungName::Power => match p {
            Some(p) if p >= 1.0 => Ok(YoungFunction::Power(p)),
            _ => Err(ConfigError::Invalid("young = \"power\" needs young_p >= 1".into())),
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BatteryKind {
    /// Deterministic standard battery.
    Standard,
    /// Random coarse functions and power weights.
    Random,
    /// The single case described by `exponents`, `weight`, `function`, `bmo`.
    Single,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub theorems: Option<Vec<String>>,
    pub battery: Option<BatteryKind>,
    pub n: Option<usize>,
    pub random_cases: Option<usize>,
    pub threshold_factor: Option<f64>,
    pub young: Option<YoungName>,
    pub young_p: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub theorems: Option<Vec<String>>,
    pub n: Option<usize>,
    pub steps: Option<usize>,
    /// Fraction of the admissible `γ` range covered on each side.
    pub fraction: Option<f64>,
    pub x0: Option<Vec<f64>>,
    /// Depths for the refinement-stability comparison.
    pub depths: Option<Vec<u32>>,
}

pub fn parse_theorems(ids: Option<&Vec<String>>) -> Result<Vec<Theorem>, ConfigError> {
    match ids {
        None => Ok(Theorem::ALL.to_vec()),
        Some(ids) => ids
            .iter()
            .map(|s| Theorem::from_id(s).ok_or_else(|| ConfigError::Invalid(format!("unknown theorem `{s}`"))))
            .collect(),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        Self::from_toml(&text)
    }

    pub fn require<'a, T>(&self, field: &'a Option<T>, name: &str) -> Result<&'a T, ConfigError> {
        field.as_ref().ok_or_else(|| ConfigError::Invalid(format!("missing key `{name}`")))
    }

    pub fn depth_or(&self, default: u32) -> u32 {
        self.depth.unwrap_or(default)
    }

    pub fn k_char_for(&self, depth: u32) -> u32 {
        self.k_char.unwrap_or_else(|| crate::harness::default_k_char(depth))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_alpha_is_named() {
        let e = ExperimentConfig::from_toml("[exponents]\nn = 1\np = 2.0\n").unwrap_err();
        assert!(e.to_string().contains("alpha"), "{e}");
    }

    #[test]
    fn unknown_key_rejected() {
        let e = ExperimentConfig::from_toml("depth = 4\ncolour = 1\n").unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
        let e = ExperimentConfig::from_toml("[weight]\nkind = \"power\"\ngamma = 0.1\nx0 = [0.5]\nbeta = 2\n").unwrap_err();
        assert!(e.to_string().contains("beta"), "{e}");
    }

    #[test]
    fn tagged_sections() {
        let c = ExperimentConfig::from_toml(
            "[weight]\nkind = \"power\"\ngamma = -0.2\nx0 = [0.5]\n[function]\nkind = \"spike\"\nat = [0.3]\nlevel = 4\n",
        )
        .unwrap();
        assert_eq!(c.weight.unwrap().spec(1).unwrap(), WeightSpec::Power { x0: [0.5, 0.0], gamma: -0.2 });
    }
}
