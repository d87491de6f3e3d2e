//! Per-group aggregates over result rows.

use std::collections::BTreeMap;
use std::fmt::Write;

use gcdvsms::benchmarks::{BenchmarkFunction, Variant};

use crate::error::{HarnessError, Result};
use crate::results::{Algorithm, ResultRow};

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub function: BenchmarkFunction,
    pub n: usize,
    pub d: usize,
    pub variant: Variant,
    pub algorithm: Algorithm,
    pub min_value: f64,
    pub mean_value: f64,
    pub mean_time: f64,
    pub mean_evaluations: f64,
    pub seed_count: usize,
}

type GroupKey = (BenchmarkFunction, usize, usize, u8, Algorithm);

fn variant_rank(v: Variant) -> u8 {
    match v {
        Variant::Canonical => 0,
        Variant::PaperLiteral => 1,
    }
}

/// Groups rows by problem (function, n, d, variant) and algorithm, in key order.
pub fn summarize(rows: &[ResultRow]) -> Result<Vec<SummaryRow>> {
    if rows.is_empty() {
        return Err(HarnessError::Config("nothing to summarize: no result rows".into()));
    }
    let mut groups: BTreeMap<GroupKey, Vec<&ResultRow>> = BTreeMap::new();
    for row in rows {
        let key = (row.function, row.n, row.d, variant_rank(row.variant), row.algorithm);
        groups.entry(key).or_default().push(row);
    }
    Ok(groups
        .into_values()
        .map(|group| {
            let count = group.len() as f64;
            let first = group[0];
            SummaryRow {
                function: first.function,
                n: first.n,
                d: first.d,
                variant: first.variant,
                algorithm: first.algorithm,
                min_value: group.iter().map(|r| r.best_value).fold(f64::INFINITY, f64::min),
                mean_value: group.iter().map(|r| r.best_value).sum::<f64>() / count,
                mean_time: group.iter().map(|r| r.wall_time_seconds).sum::<f64>() / count,
                mean_evaluations: group.iter().map(|r| r.evaluations as f64).sum::<f64>() / count,
                seed_count: group.len(),
            }
        })
        .collect())
}

pub fn render_table(summaries: &[SummaryRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>4} {:>4} {:<14} {:<14} {:>12} {:>12} {:>10} {:>14} {:>6}",
        "function", "n", "d", "variant", "algorithm", "min", "mean", "avg time", "avg evals", "seeds"
    );
    for s in summaries {
        let _ = writeln!(
            out,
            "{:<10} {:>4} {:>4} {:<14} {:<14} {:>12.3e} {:>12.3e} {:>10.3} {:>14.1} {:>6}",
            s.function.name(),
            s.n,
            s.d,
            s.variant.name(),
            s.algorithm.name(),
            s.min_value,
            s.mean_value,
            s.mean_time,
            s.mean_evaluations,
            s.seed_count
        );
    }
    out
}
