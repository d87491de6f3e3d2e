//! Result rows and their CSV persistence.
//!
//! Columns appear exactly in [`ResultRow`] field order. Floats are written in
//! shortest round-trip form, so reading a file back reproduces every value bit
//! for bit.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use gcdvsms::benchmarks::{BenchmarkFunction, Variant};
use gcdvsms::TraceRecord;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Gcdvsms,
    RandomSearch,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gcdvsms => "gcdvsms",
            Algorithm::RandomSearch => "random_search",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gcdvsms" => Ok(Algorithm::Gcdvsms),
            "random_search" => Ok(Algorithm::RandomSearch),
            other => Err(HarnessError::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Outcome of one algorithm from one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    #[serde(with = "crate::display_fromstr")]
    pub function: BenchmarkFunction,
    pub n: usize,
    pub d: usize,
    #[serde(with = "crate::display_fromstr")]
    pub variant: Variant,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub best_value: f64,
    pub runs_used: usize,
    pub iterations: usize,
    pub evaluations: usize,
    pub wall_time_seconds: f64,
}

pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| HarnessError::csv(path, e))?;
    for row in rows {
        writer.serialize(row).map_err(|e| HarnessError::csv(path, e))?;
    }
    writer.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| HarnessError::csv(path, e))?;
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<ResultRow>, _>>()
        .map_err(|e| HarnessError::csv(path, e))
}

#[derive(Serialize)]
struct TraceLine<'a> {
    run: usize,
    iteration: usize,
    best_value: f64,
    gs: f64,
    block: Option<usize>,
    coordinate: Option<usize>,
    direction: Option<&'a str>,
    evaluations: usize,
}

/// Writes a per-iteration trace. Block and coordinate are 1-based; they and
/// the direction are empty for iterations that accepted no move.
pub fn write_trace(path: &Path, records: &[TraceRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| HarnessError::csv(path, e))?;
    for r in records {
        let line = TraceLine {
            run: r.run,
            iteration: r.iteration,
            best_value: r.best_value,
            gs: r.gs,
            block: r.accepted.map(|m| m.block + 1),
            coordinate: r.accepted.map(|m| m.coordinate + 1),
            direction: r.accepted.map(|m| match m.direction {
                gcdvsms::Direction::Positive => "+",
                gcdvsms::Direction::Negative => "-",
            }),
            evaluations: r.evaluations,
        };
        writer.serialize(line).map_err(|e| HarnessError::csv(path, e))?;
    }
    writer.flush().map_err(|e| HarnessError::io(path, e))
}
