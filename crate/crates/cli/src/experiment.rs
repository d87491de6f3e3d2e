//! Seeded multistart experiments.

use std::path::{Path, PathBuf};
use std::time::Instant;

use gcdvsms::benchmarks::{lift_to_simplex, multi_block, HypercubeBenchmark, MultiBlockObjective};
use gcdvsms::{sample_uniform, sample_uniform_with, BlockPoint, Gcdvsms, SimplexObjective, TraceRecord};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Baseline, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::results::{write_results, write_trace, Algorithm, ResultRow};

/// Best of `budget` independent uniform samples.
pub fn random_search<O: SimplexObjective + ?Sized>(
    objective: &O,
    budget: usize,
    seed: u64,
) -> gcdvsms::Result<(BlockPoint, f64)> {
    if budget == 0 {
        return Err(gcdvsms::Error::InvalidInput("random search needs a budget of at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(BlockPoint, f64)> = None;
    for _ in 0..budget {
        let point = sample_uniform_with(objective.shape(), &mut rng);
        let value = objective.evaluate(&point);
        if !value.is_finite() {
            return Err(gcdvsms::Error::NonFiniteObjective { value, point: point.to_nested() });
        }
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((point, value));
        }
    }
    Ok(best.expect("budget is positive"))
}

pub fn build_objective(config: &ExperimentConfig) -> Result<MultiBlockObjective> {
    let base = HypercubeBenchmark::new(config.function, config.d, config.variant)
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    multi_block(lift_to_simplex(base), config.n).map_err(|e| HarnessError::Config(e.to_string()))
}

/// Runs every seed and returns the rows in seed order without touching the disk
/// (trace files excepted, when enabled).
pub fn run_rows(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let objective = build_objective(config)?;
    let engine = Gcdvsms::new(config.tuning_params()).record_trace(config.trace);
    let seeds = config.seeds.seeds();

    let per_seed = |&seed: &u64| run_seed(config, &objective, &engine, seed);
    let results: Vec<Result<Vec<ResultRow>>> = if config.parallel_starts > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallel_starts)
            .build()
            .map_err(|e| HarnessError::Config(format!("cannot start worker pool: {e}")))?;
        pool.install(|| seeds.par_iter().map(per_seed).collect())
    } else {
        seeds.iter().map(per_seed).collect()
    };

    let mut rows = Vec::with_capacity(seeds.len() * 2);
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

/// [`run_rows`], then writes the rows to `config.output_path`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let rows = run_rows(config)?;
    write_results(&config.output_path, &rows)?;
    Ok(rows)
}

fn run_seed(
    config: &ExperimentConfig,
    objective: &MultiBlockObjective,
    engine: &Gcdvsms,
    seed: u64,
) -> Result<Vec<ResultRow>> {
    let row = |algorithm, best_value, runs_used, iterations, evaluations, wall_time_seconds| ResultRow {
        function: config.function,
        n: config.n,
        d: config.d,
        variant: config.variant,
        seed,
        algorithm,
        best_value,
        runs_used,
        iterations,
        evaluations,
        wall_time_seconds,
    };

    let start = sample_uniform(objective.shape(), seed);
    let clock = Instant::now();
    let mut iterations = 0;
    let result = engine.optimize_with_sink(objective, &start, &mut |_: &TraceRecord| iterations += 1)?;
    let elapsed = clock.elapsed().as_secs_f64();
    if let Some(trace) = &result.trace {
        write_trace(&trace_path(&config.output_path, seed), trace)?;
    }
    let mut rows = vec![row(
        Algorithm::Gcdvsms,
        result.value,
        result.runs,
        iterations,
        result.total_evaluations,
        elapsed,
    )];

    if let Some(Baseline::RandomSearch) = config.baseline {
        let clock = Instant::now();
        let (_, value) = random_search(objective, result.total_evaluations, seed)?;
        rows.push(row(
            Algorithm::RandomSearch,
            value,
            0,
            0,
            result.total_evaluations,
            clock.elapsed().as_secs_f64(),
        ));
    }
    Ok(rows)
}

/// `results.csv` + seed 7 → `results.seed7.trace.csv`, next to the results file.
pub fn trace_path(output_path: &Path, seed: u64) -> PathBuf {
    let stem =
        output_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "results".into());
    output_path.with_file_name(format!("{stem}.seed{seed}.trace.csv"))
}
