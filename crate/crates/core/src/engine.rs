//! Greedy coordinate descent with varying step sizes over multiple simplex blocks.
//!
//! One *iteration* looks at up to `2M` neighbours of the current point: for
//! every block `j` and coordinate `i`, a positive move (raise `p[j][i]`) and a
//! negative move (lower it), each trading mass with the other significant
//! coordinates of block `j`. A move's local step starts at the global step
//! `gs` and is divided by `rho` until the moved block is feasible, or given up
//! once it falls to `rho * phi`. The best strictly improving move, if any, is
//! accepted and its block sparsified.
//!
//! A *run* repeats iterations from `gs = s_initial`. When an iteration improves
//! by no more than `tol_fun_1`, `gs` is divided by `rho`; once that happens
//! with `gs <= rho * phi` the run ends. Runs are chained, each starting from the
//! previous run's output (the first with `rho1`, later ones with `rho2`), until
//! two consecutive runs differ by less than `tol_fun_2`.
//!
//! Selection is fully deterministic: within a block the lowest coordinate wins
//! ties, a tie between the best positive and the best negative move goes to
//! the negative one, and across blocks the lowest block index wins. Candidate
//! evaluation order therefore never affects the result, which is what makes
//! [`Gcdvsms::parallel_candidates`] safe.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::objective::SimplexObjective;
use crate::point::{BlockPoint, BlockShape};
use crate::simplex::{
    clamp_roundoff, feasible_unchecked, significant_indices, sparsify_in_place, write_move, Direction,
    FEASIBILITY_TOL,
};

/// User-facing controls of the optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuningParams {
    /// Global step size at the start of every run.
    pub s_initial: f64,
    /// Step decay rate of the first run.
    pub rho1: f64,
    /// Step decay rate of every later run.
    pub rho2: f64,
    /// Step size threshold.
    pub phi: f64,
    /// Sparsity threshold: coordinates at or below it are treated as zero.
    pub lambda: f64,
    /// Per-iteration improvement below which the global step decays.
    pub tol_fun_1: f64,
    /// Per-run improvement below which no further run is started.
    pub tol_fun_2: f64,
    pub max_iter: usize,
    pub max_runs: usize,
}

impl Default for TuningParams {
    fn default() -> Self {
        Self {
            s_initial: 1.0,
            rho1: 1.01,
            rho2: 1.01,
            phi: 1e-4,
            lambda: 1e-6,
            tol_fun_1: 1e-6,
            tol_fun_2: 1e-6,
            max_iter: 5000,
            max_runs: 200,
        }
    }
}

impl TuningParams {
    /// Checks the parameter invariants. With a shape, also requires
    /// `lambda < 1 / max_j n_j` so sparsifying a feasible block always keeps
    /// at least one coordinate.
    pub fn validate(&self, shape: Option<&BlockShape>) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        let finite =
            [self.s_initial, self.rho1, self.rho2, self.phi, self.lambda, self.tol_fun_1, self.tol_fun_2];
        if finite.iter().any(|x| !x.is_finite()) {
            return fail("all parameters must be finite".into());
        }
        if !(self.phi > 0.0) {
            return fail(format!("phi must be positive, got {}", self.phi));
        }
        if !(self.s_initial > self.phi) {
            return fail(format!("s_initial ({}) must exceed phi ({})", self.s_initial, self.phi));
        }
        if !(self.rho1 > 1.0) || !(self.rho2 > 1.0) {
            return fail(format!("rho1 and rho2 must exceed 1, got {} and {}", self.rho1, self.rho2));
        }
        if self.lambda < 0.0 || self.tol_fun_1 < 0.0 || self.tol_fun_2 < 0.0 {
            return fail("lambda, tol_fun_1 and tol_fun_2 must be nonnegative".into());
        }
        if self.max_iter == 0 || self.max_runs == 0 {
            return fail("max_iter and max_runs must be positive".into());
        }
        if let Some(shape) = shape {
            let bound = 1.0 / shape.max_block_len() as f64;
            if !(self.lambda < bound) {
                return fail(format!("lambda ({}) must be below 1/max block size ({bound})", self.lambda));
            }
        }
        Ok(())
    }
}

/// Outcome of [`shrink_until_feasible`]: the feasible candidate, if one was
/// found, and the local step it was built with (or the step at which the
/// search gave up).
#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkResult {
    pub candidate: Option<Vec<f64>>,
    pub step: f64,
}

/// Builds the move of size `step` at `index` and divides the step by `rho`
/// until the candidate is feasible. Gives up (returns no candidate) once the
/// step is `<= rho * phi`, or immediately if the move has no significant
/// coordinate to trade with.
pub fn shrink_until_feasible(
    v: &[f64],
    index: usize,
    direction: Direction,
    step: f64,
    rho: f64,
    phi: f64,
    lambda: f64,
) -> Result<ShrinkResult> {
    let significant = significant_indices(v, index, lambda)?;
    if significant.is_empty() {
        return Ok(ShrinkResult { candidate: None, step });
    }
    let mut buf = vec![0.0; v.len()];
    let (found, step) = shrink_into(v, index, direction, step, rho, phi, &significant, &mut buf);
    Ok(ShrinkResult { candidate: found.then_some(buf), step })
}

#[allow(clippy::too_many_arguments)]
fn shrink_into(
    v: &[f64],
    index: usize,
    direction: Direction,
    mut step: f64,
    rho: f64,
    phi: f64,
    significant: &[usize],
    buf: &mut [f64],
) -> (bool, f64) {
    let floor = rho * phi;
    while step > floor {
        write_move(v, index, direction, step, significant, buf);
        if feasible_unchecked(buf, FEASIBILITY_TOL) {
            clamp_roundoff(buf);
            return (true, step);
        }
        step /= rho;
    }
    (false, step)
}

/// A coordinate move. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Move {
    pub block: usize,
    pub coordinate: usize,
    pub direction: Direction,
    /// Local step size the move was built with.
    pub step: f64,
}

/// Global and final local step sizes of one iteration.
///
/// `plus` and `minus` are flat over all `M` coordinates, block after block.
/// Each starts the iteration at `gs` and ends at the step its move was
/// evaluated with (or abandoned at).
#[derive(Debug, Clone, PartialEq)]
pub struct StepState {
    pub gs: f64,
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

/// Result of one iteration.
#[derive(Debug, Clone)]
pub struct Iteration {
    pub point: BlockPoint,
    pub value: f64,
    /// Global step size for the next iteration.
    pub gs: f64,
    /// The run's termination criterion fired.
    pub stop: bool,
    /// The strictly improving move that was accepted, if any.
    pub accepted: Option<Move>,
    /// Number of candidate evaluations, excluding the re-evaluation of `point`.
    pub candidate_evaluations: usize,
    pub steps: StepState,
}

impl Iteration {
    /// All objective evaluations performed by the iteration.
    pub fn evaluations(&self) -> usize {
        self.candidate_evaluations + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStop {
    /// No sufficient improvement with the global step at its floor.
    Converged,
    MaxIter,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub point: BlockPoint,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub stop_reason: RunStop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizeStop {
    /// Two consecutive runs improved by less than `tol_fun_2`.
    Converged,
    MaxRuns,
}

/// One record per iteration. `run` and `iteration` are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub run: usize,
    pub iteration: usize,
    /// Objective value after the iteration.
    pub best_value: f64,
    /// Global step size the iteration was carried out with.
    pub gs: f64,
    pub accepted: Option<Move>,
    /// Evaluations so far in the whole optimization.
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub point: BlockPoint,
    pub value: f64,
    pub runs: usize,
    pub total_evaluations: usize,
    pub stop_reason: OptimizeStop,
    /// Final value of each run, in order.
    pub run_values: Vec<f64>,
    pub trace: Option<Vec<TraceRecord>>,
}

struct Candidate {
    block: usize,
    coordinate: usize,
    direction: Direction,
    step: f64,
    values: Vec<f64>,
}

/// The optimizer.
///
/// ```
/// use gcdvsms::{BlockShape, FnObjective, Gcdvsms, BlockPoint, TuningParams};
///
/// let shape = BlockShape::new([2]).unwrap();
/// let objective = FnObjective::new(shape, |p: &BlockPoint| (p.block(0)[0] - 0.25).powi(2));
/// let start = BlockPoint::from_blocks(&[[0.5, 0.5]]).unwrap();
/// let result = Gcdvsms::new(TuningParams::default()).optimize(&objective, &start).unwrap();
/// assert!((result.point.block(0)[0] - 0.25).abs() < 5e-4);
/// ```
#[derive(Debug, Clone)]
pub struct Gcdvsms {
    params: TuningParams,
    parallel: bool,
    record_trace: bool,
}

impl Gcdvsms {
    pub fn new(params: TuningParams) -> Self {
        Self { params, parallel: false, record_trace: false }
    }

    /// Evaluate the candidates of each iteration on the rayon thread pool.
    /// Results are identical to sequential evaluation.
    pub fn parallel_candidates(mut self, enabled: bool) -> Self {
        self.parallel = enabled;
        self
    }

    /// Collect a [`TraceRecord`] per iteration into [`OptimizeResult::trace`].
    pub fn record_trace(mut self, enabled: bool) -> Self {
        self.record_trace = enabled;
        self
    }

    pub fn params(&self) -> &TuningParams {
        &self.params
    }

    /// One greedy sweep from `point` (whose objective value is `value`) with
    /// global step `gs` and decay rate `rho`.
    pub fn iterate<O: SimplexObjective + ?Sized>(
        &self,
        objective: &O,
        point: &BlockPoint,
        value: f64,
        gs: f64,
        rho: f64,
    ) -> Result<Iteration> {
        check_shape(objective, point)?;
        let TuningParams { phi, lambda, tol_fun_1, .. } = self.params;
        let shape = point.shape();
        let m = shape.total_len();
        let mut steps = StepState { gs, plus: vec![gs; m], minus: vec![gs; m] };

        let mut candidates = Vec::with_capacity(2 * m);
        let mut offset = 0;
        for j in 0..shape.num_blocks() {
            let v = point.block(j);
            for i in 0..v.len() {
                // Identical for both directions.
                let significant = significant_indices(v, i, lambda)?;
                if significant.is_empty() {
                    continue;
                }
                for direction in [Direction::Positive, Direction::Negative] {
                    let mut buf = vec![0.0; v.len()];
                    let (found, step) = shrink_into(v, i, direction, gs, rho, phi, &significant, &mut buf);
                    match direction {
                        Direction::Positive => steps.plus[offset + i] = step,
                        Direction::Negative => steps.minus[offset + i] = step,
                    }
                    if found {
                        candidates.push(Candidate { block: j, coordinate: i, direction, step, values: buf });
                    }
                }
            }
            offset += v.len();
        }

        let scores = self.evaluate_candidates(objective, point, &candidates)?;

        // Skipped moves keep the sentinel `value` and so can never win.
        let mut best_plus: Vec<Option<usize>> = vec![None; m];
        let mut best_minus: Vec<Option<usize>> = vec![None; m];
        let offsets: Vec<usize> = {
            let mut acc = 0;
            shape
                .sizes()
                .into_iter()
                .map(|n| {
                    let o = acc;
                    acc += n;
                    o
                })
                .collect()
        };
        for (c, cand) in candidates.iter().enumerate() {
            let slot = offsets[cand.block] + cand.coordinate;
            match cand.direction {
                Direction::Positive => best_plus[slot] = Some(c),
                Direction::Negative => best_minus[slot] = Some(c),
            }
        }
        let score_of = |slot: Option<usize>| slot.map_or(value, |c| scores[c]);

        // Per-block winners, then the best block.
        let mut winner: Option<(usize, f64, Option<usize>)> = None;
        for (j, &start) in offsets.iter().enumerate() {
            let range = start..start + shape.block_len(j);
            let k_plus = argmin(range.clone().map(|s| score_of(best_plus[s])));
            let k_minus = argmin(range.clone().map(|s| score_of(best_minus[s])));
            let f_plus = score_of(best_plus[range.start + k_plus]);
            let f_minus = score_of(best_minus[range.start + k_minus]);
            let (f_temp, chosen) = if f_plus.min(f_minus) < value {
                if f_plus < f_minus {
                    (f_plus, best_plus[range.start + k_plus])
                } else {
                    (f_minus, best_minus[range.start + k_minus])
                }
            } else {
                (value, None)
            };
            if winner.is_none_or(|(_, best, _)| f_temp < best) {
                winner = Some((j, f_temp, chosen));
            }
        }
        let (w, _, chosen) = winner.expect("shape has at least one block");

        let mut updated = match chosen {
            Some(c) => candidates[c].values.clone(),
            None => point.block(w).to_vec(),
        };
        sparsify_in_place(&mut updated, lambda)?;
        let next = point.with_block(w, &updated);
        let next_value = evaluate(objective, &next)?;

        let (next_gs, stop) = if value - next_value > tol_fun_1 {
            (gs, false)
        } else if gs > rho * phi {
            (gs / rho, false)
        } else {
            (gs, true)
        };

        Ok(Iteration {
            point: next,
            value: next_value,
            gs: next_gs,
            stop,
            accepted: chosen.map(|c| {
                let cand = &candidates[c];
                Move {
                    block: cand.block,
                    coordinate: cand.coordinate,
                    direction: cand.direction,
                    step: cand.step,
                }
            }),
            candidate_evaluations: candidates.len(),
            steps,
        })
    }

    fn evaluate_candidates<O: SimplexObjective + ?Sized>(
        &self,
        objective: &O,
        point: &BlockPoint,
        candidates: &[Candidate],
    ) -> Result<Vec<f64>> {
        if self.parallel {
            let results: Vec<Result<f64>> = candidates
                .par_iter()
                .map(|c| evaluate(objective, &point.with_block(c.block, &c.values)))
                .collect();
            results.into_iter().collect()
        } else {
            let mut scratch = point.clone();
            let mut scores = Vec::with_capacity(candidates.len());
            for c in candidates {
                scratch.set_block(c.block, &c.values);
                scores.push(evaluate(objective, &scratch)?);
                scratch.set_block(c.block, point.block(c.block));
            }
            Ok(scores)
        }
    }

    /// A single run from `start` with decay rate `rho`.
    pub fn run_stage1<O: SimplexObjective + ?Sized>(
        &self,
        objective: &O,
        start: &BlockPoint,
        rho: f64,
    ) -> Result<RunResult> {
        self.params.validate(Some(start.shape()))?;
        if !(rho > 1.0) {
            return Err(Error::InvalidParams(format!("rho must exceed 1, got {rho}")));
        }
        self.run(objective, start, rho, 1, 0, &mut |_| {})
    }

    fn run<O: SimplexObjective + ?Sized>(
        &self,
        objective: &O,
        start: &BlockPoint,
        rho: f64,
        run_index: usize,
        evaluations_before: usize,
        sink: &mut dyn FnMut(&TraceRecord),
    ) -> Result<RunResult> {
        check_shape(objective, start)?;
        let mut point = start.clone();
        let mut value = evaluate(objective, &point)?;
        let mut evaluations = 1;
        let mut gs = self.params.s_initial;
        let mut h = 1;
        let stop_reason = loop {
            let it = self.iterate(objective, &point, value, gs, rho)?;
            evaluations += it.evaluations();
            sink(&TraceRecord {
                run: run_index,
                iteration: h,
                best_value: it.value,
                gs,
                accepted: it.accepted,
                evaluations: evaluations_before + evaluations,
            });
            point = it.point;
            value = it.value;
            if it.stop {
                break RunStop::Converged;
            }
            gs = it.gs;
            if h + 1 > self.params.max_iter {
                break RunStop::MaxIter;
            }
            h += 1;
        };
        Ok(RunResult { point, value, iterations: h, evaluations, stop_reason })
    }

    /// Chained runs from `start` until consecutive runs stop improving.
    pub fn optimize<O: SimplexObjective + ?Sized>(
        &self,
        objective: &O,
        start: &BlockPoint,
    ) -> Result<OptimizeResult> {
        self.optimize_with_sink(objective, start, &mut |_| {})
    }

    /// Like [`optimize`](Self::optimize), streaming one record per iteration to `sink`.
    pub fn optimize_with_sink<O: SimplexObjective + ?Sized>(
        &self,
        objective: &O,
        start: &BlockPoint,
        sink: &mut dyn FnMut(&TraceRecord),
    ) -> Result<OptimizeResult> {
        self.params.validate(Some(start.shape()))?;
        check_shape(objective, start)?;

        let mut trace = self.record_trace.then(Vec::new);
        let mut forward = |record: &TraceRecord| {
            if let Some(trace) = trace.as_mut() {
                trace.push(record.clone());
            }
            sink(record);
        };

        let mut total_evaluations = 0;
        let first = self.run(objective, start, self.params.rho1, 1, 0, &mut forward)?;
        total_evaluations += first.evaluations;
        let mut run_values = vec![first.value];
        let mut best = (first.point.clone(), first.value);
        let mut previous = first;

        let stop_reason = loop {
            if run_values.len() >= self.params.max_runs {
                break OptimizeStop::MaxRuns;
            }
            let run_index = run_values.len() + 1;
            let current = self.run(
                objective,
                &previous.point,
                self.params.rho2,
                run_index,
                total_evaluations,
                &mut forward,
            )?;
            total_evaluations += current.evaluations;
            run_values.push(current.value);
            if current.value < best.1 {
                best = (current.point.clone(), current.value);
            }
            let improvement = previous.value - current.value;
            previous = current;
            if improvement < self.params.tol_fun_2 {
                break OptimizeStop::Converged;
            }
        };

        Ok(OptimizeResult {
            point: best.0,
            value: best.1,
            runs: run_values.len(),
            total_evaluations,
            stop_reason,
            run_values,
            trace,
        })
    }
}

/// Index of the first minimum.
fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (k, x) in values.enumerate() {
        if k == 0 || x < best.1 {
            best = (k, x);
        }
    }
    best.0
}

fn check_shape<O: SimplexObjective + ?Sized>(objective: &O, point: &BlockPoint) -> Result<()> {
    if objective.shape() != point.shape() {
        return Err(Error::ShapeMismatch {
            expected: objective.shape().to_string(),
            found: point.shape().to_string(),
        });
    }
    Ok(())
}

fn evaluate<O: SimplexObjective + ?Sized>(objective: &O, point: &BlockPoint) -> Result<f64> {
    let value = objective.evaluate(point);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteObjective { value, point: point.to_nested() })
    }
}
