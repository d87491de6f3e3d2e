//! Experiment harness for the `gcdvsms` optimizer: seeded multistart runs over
//! the lifted benchmark functions, a budget-matched random-search baseline,
//! CSV result files and summary tables.

pub mod config;
mod error;
pub mod experiment;
pub mod results;
pub mod summary;

pub use gcdvsms;

pub use config::{parse_seeds, Baseline, ExperimentConfig, SeedRange, SeedSpec, TuningOverrides};
pub use error::{HarnessError, Result};
pub use experiment::{random_search, run_experiment, run_rows, trace_path};
pub use results::{read_results, write_results, Algorithm, ResultRow};
pub use summary::{render_table, summarize, SummaryRow};

/// Serde adapter for types that round-trip through `Display`/`FromStr`.
pub(crate) mod display_fromstr {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(value)
    }

    pub fn deserialize<'de, T, D>(deserializer: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}
