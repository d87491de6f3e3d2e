//! Experiment configuration.
//!
//! Configs are TOML documents whose keys mirror [`ExperimentConfig`]:
//!
//! ```toml
//! function = "rastrigin"
//! n = 5
//! d = 5
//! variant = "canonical"          # or "paper_literal"
//! seeds = { count = 100, base = 0 }  # or an explicit list: [1, 2, 3]
//! output_path = "rastrigin.csv"
//! trace = false
//! parallel_starts = 4
//! baseline = "random_search"     # optional
//!
//! [tuning]                       # any subset of the tuning parameters
//! rho2 = 1.05
//! ```
//!
//! Unknown keys are rejected. Command-line overrides are merged into the
//! document before it is deserialized, so they are checked by the same rules.

use std::path::{Path, PathBuf};

use gcdvsms::benchmarks::{BenchmarkFunction, Variant};
use gcdvsms::{BlockShape, TuningParams};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    List(Vec<u64>),
    Range(SeedRange),
}

/// `count` consecutive seeds starting at `base`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedRange {
    pub count: u64,
    #[serde(default)]
    pub base: u64,
}

impl SeedSpec {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedSpec::List(list) => list.clone(),
            SeedSpec::Range(r) => (r.base..r.base + r.count).collect(),
        }
    }
}

impl Default for SeedSpec {
    fn default() -> Self {
        SeedSpec::Range(SeedRange { count: 100, base: 0 })
    }
}

/// Partial [`TuningParams`]; missing fields keep their defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuningOverrides {
    pub s_initial: Option<f64>,
    pub rho1: Option<f64>,
    pub rho2: Option<f64>,
    pub phi: Option<f64>,
    pub lambda: Option<f64>,
    pub tol_fun_1: Option<f64>,
    pub tol_fun_2: Option<f64>,
    pub max_iter: Option<usize>,
    pub max_runs: Option<usize>,
}

impl TuningOverrides {
    pub fn apply(&self, base: TuningParams) -> TuningParams {
        TuningParams {
            s_initial: self.s_initial.unwrap_or(base.s_initial),
            rho1: self.rho1.unwrap_or(base.rho1),
            rho2: self.rho2.unwrap_or(base.rho2),
            phi: self.phi.unwrap_or(base.phi),
            lambda: self.lambda.unwrap_or(base.lambda),
            tol_fun_1: self.tol_fun_1.unwrap_or(base.tol_fun_1),
            tol_fun_2: self.tol_fun_2.unwrap_or(base.tol_fun_2),
            max_iter: self.max_iter.unwrap_or(base.max_iter),
            max_runs: self.max_runs.unwrap_or(base.max_runs),
        }
    }
}

/// Comparison algorithm run alongside the optimizer with a matched budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    RandomSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(with = "crate::display_fromstr")]
    pub function: BenchmarkFunction,
    pub n: usize,
    pub d: usize,
    #[serde(default, with = "crate::display_fromstr")]
    pub variant: Variant,
    #[serde(default)]
    pub seeds: SeedSpec,
    #[serde(default)]
    pub tuning: TuningOverrides,
    #[serde(default)]
    pub baseline: Option<Baseline>,
    #[serde(default = "default_output_path")]
    pub output_path: PathBuf,
    #[serde(default)]
    pub trace: bool,
    #[serde(default = "default_parallel_starts")]
    pub parallel_starts: usize,
}

fn default_output_path() -> PathBuf {
    PathBuf::from("results.csv")
}

fn default_parallel_starts() -> usize {
    1
}

impl ExperimentConfig {
    /// A config with defaults for everything but the problem.
    pub fn new(function: BenchmarkFunction, n: usize, d: usize) -> Self {
        Self {
            function,
            n,
            d,
            variant: Variant::Canonical,
            seeds: SeedSpec::default(),
            tuning: TuningOverrides::default(),
            baseline: None,
            output_path: default_output_path(),
            trace: false,
            parallel_starts: default_parallel_starts(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e| HarnessError::Config(format!("{e}")))?;
        Self::from_table(table)
    }

    pub fn from_table(table: toml::Table) -> Result<Self> {
        let config: Self = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| HarnessError::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<toml::Table> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse().map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    pub fn tuning_params(&self) -> TuningParams {
        self.tuning.apply(TuningParams::default())
    }

    pub fn shape(&self) -> Result<BlockShape> {
        BlockShape::uniform(self.n, self.d + 1).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.n == 0 || self.d == 0 {
            return fail(format!("n and d must be positive, got n={} d={}", self.n, self.d));
        }
        if self.seeds.seeds().is_empty() {
            return fail("at least one seed is required".into());
        }
        if self.parallel_starts == 0 {
            return fail("parallel_starts must be positive".into());
        }
        self.tuning_params().validate(Some(&self.shape()?)).map_err(|e| HarnessError::Config(e.to_string()))
    }
}

/// Parses a `--seeds` value: `3,5,8` for a list or `0..100` for a half-open range.
pub fn parse_seeds(text: &str) -> Result<SeedSpec> {
    let bad = || HarnessError::Config(format!("cannot parse seeds `{text}`"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        return Ok(SeedSpec::Range(SeedRange { count: hi - lo, base: lo }));
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect::<Result<Vec<u64>>>()
        .map(SeedSpec::List)
}

impl SeedSpec {
    pub fn to_toml(&self) -> toml::Value {
        match self {
            SeedSpec::List(list) => {
                toml::Value::Array(list.iter().map(|&s| toml::Value::Integer(s as i64)).collect())
            }
            SeedSpec::Range(r) => {
                let mut t = toml::Table::new();
                t.insert("count".into(), toml::Value::Integer(r.count as i64));
                t.insert("base".into(), toml::Value::Integer(r.base as i64));
                toml::Value::Table(t)
            }
        }
    }
}
