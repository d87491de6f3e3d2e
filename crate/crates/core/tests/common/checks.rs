use std::sync::Mutex;

use gcdvsms::benchmarks::{lift_to_simplex, BenchmarkFunction, HypercubeBenchmark, Variant};
use gcdvsms::simplex::{is_feasible, negative_move, positive_move, sparsify};
use gcdvsms::{
    BlockPoint, BlockShape, Counted, Direction, FnObjective, Gcdvsms, Move, SimplexObjective, TuningParams,
    FEASIBILITY_TOL,
};

use super::oracle::{random_quadratic, Quadratic};
use super::{rng, uniform};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Remembers the first infeasible point it is asked to evaluate.
struct Watched<'a, O: ?Sized> {
    inner: &'a O,
    violation: Mutex<Option<Vec<Vec<f64>>>>,
}

impl<O: SimplexObjective + ?Sized> SimplexObjective for Watched<'_, O> {
    fn shape(&self) -> &BlockShape {
        self.inner.shape()
    }

    fn evaluate(&self, point: &BlockPoint) -> f64 {
        let ok = point.blocks().all(|b| is_feasible(b, FEASIBILITY_TOL).unwrap());
        if !ok {
            self.violation.lock().unwrap().get_or_insert_with(|| point.to_nested());
        }
        self.inner.evaluate(point)
    }
}

pub fn feasible_evaluations<O: SimplexObjective + ?Sized>(
    objective: &O,
    start: &BlockPoint,
    params: TuningParams,
) -> Check {
    let watched = Watched { inner: objective, violation: Mutex::new(None) };
    Gcdvsms::new(params).optimize(&watched, start).map_err(|e| e.to_string())?;
    match watched.violation.into_inner().unwrap() {
        Some(p) => Err(format!("evaluated infeasible point {p:?}")),
        None => Ok(()),
    }
}

/// Within each run the values never increase, starting from the run's
/// starting value; across runs the run values never increase.
pub fn monotone<O: SimplexObjective + ?Sized>(
    objective: &O,
    start: &BlockPoint,
    params: TuningParams,
) -> Check {
    let result =
        Gcdvsms::new(params).record_trace(true).optimize(objective, start).map_err(|e| e.to_string())?;
    let trace = result.trace.unwrap();
    let mut previous = objective.evaluate(start);
    for r in &trace {
        ensure!(
            r.best_value <= previous,
            "run {} iteration {}: value rose from {previous:e} to {:e}",
            r.run,
            r.iteration,
            r.best_value
        );
        previous = r.best_value;
    }
    for w in result.run_values.windows(2) {
        ensure!(w[1] <= w[0], "run values increased: {:?}", result.run_values);
    }
    ensure!(
        result.run_values.iter().all(|&v| result.value <= v),
        "final value {} above a run value",
        result.value
    );
    Ok(())
}

/// Drives single iterations by hand and checks how many blocks change, the
/// candidate budget and the evaluation accounting.
pub fn iteration_contract<O: SimplexObjective + ?Sized>(
    objective: &O,
    start: &BlockPoint,
    params: TuningParams,
    iterations: usize,
) -> Check {
    let engine = Gcdvsms::new(params);
    let counted = Counted::new(objective);
    let m = start.shape().total_len();
    let mut point = start.clone();
    let mut value = objective.evaluate(&point);
    let mut gs = params.s_initial;
    for h in 0..iterations {
        let before = counted.evaluations();
        let it = engine.iterate(&counted, &point, value, gs, params.rho1).map_err(|e| e.to_string())?;
        let spent = counted.evaluations() - before;
        ensure!(
            it.candidate_evaluations <= 2 * m,
            "iteration {h}: {} candidates for M = {m}",
            it.candidate_evaluations
        );
        ensure!(
            spent == it.evaluations() && spent == it.candidate_evaluations + 1,
            "iteration {h}: counted {spent} evaluations, reported {}",
            it.evaluations()
        );
        let changed = (0..point.num_blocks()).filter(|&j| point.block(j) != it.point.block(j)).count();
        ensure!(changed <= 1, "iteration {h}: {changed} blocks changed");
        if let Some(Move { block, .. }) = it.accepted {
            ensure!(
                (0..point.num_blocks()).all(|j| j == block || point.block(j) == it.point.block(j)),
                "iteration {h}: a block other than the accepted one changed"
            );
        }
        ensure!(it.gs >= params.phi, "iteration {h}: gs {} fell below phi", it.gs);
        point = it.point;
        value = it.value;
        gs = it.gs;
        if it.stop {
            break;
        }
    }
    Ok(())
}

/// Two identical calls agree bit for bit, including evaluation counts.
pub fn deterministic<O: SimplexObjective + ?Sized>(
    objective: &O,
    start: &BlockPoint,
    params: TuningParams,
) -> Check {
    let engine = Gcdvsms::new(params).record_trace(true);
    let run = || {
        let counted = Counted::new(objective);
        let result = engine.optimize(&counted, start).map_err(|e| e.to_string())?;
        Ok::<_, String>((result, counted.evaluations()))
    };
    let (a, ca) = run()?;
    let (b, cb) = run()?;
    ensure!(ca == cb, "evaluation counts differ: {ca} vs {cb}");
    ensure!(ca == a.total_evaluations, "counted {ca}, reported {}", a.total_evaluations);
    ensure!(same_bits(a.point.values(), b.point.values()), "points differ");
    ensure!(a.value.to_bits() == b.value.to_bits(), "values differ: {} vs {}", a.value, b.value);
    ensure!(same_bits(&a.run_values, &b.run_values), "run values differ");
    ensure!(a.trace == b.trace, "traces differ");
    Ok(())
}

/// Parallel candidate evaluation produces the same trajectory as sequential.
pub fn parallel_equivalent<O: SimplexObjective + ?Sized>(
    objective: &O,
    start: &BlockPoint,
    params: TuningParams,
) -> Check {
    let sequential = Gcdvsms::new(params).record_trace(true).parallel_candidates(false);
    let parallel = Gcdvsms::new(params).record_trace(true).parallel_candidates(true);
    let a = sequential.optimize(objective, start).map_err(|e| e.to_string())?;
    let b = parallel.optimize(objective, start).map_err(|e| e.to_string())?;
    ensure!(same_bits(a.point.values(), b.point.values()), "points differ");
    ensure!(a.value.to_bits() == b.value.to_bits(), "values differ");
    ensure!(a.total_evaluations == b.total_evaluations, "evaluation counts differ");
    ensure!(a.trace == b.trace, "accepted moves differ");
    Ok(())
}

/// Both moves keep the sum to within 1e-12 whenever they are defined.
pub fn move_sum_preserved(v: &[f64], index: usize, step: f64, lambda: f64) -> Check {
    let total: f64 = v.iter().sum();
    for (name, result) in [
        ("positive", positive_move(v, index, step, lambda)),
        ("negative", negative_move(v, index, step, lambda)),
    ] {
        if let Ok(moved) = result {
            let drift = (moved.iter().sum::<f64>() - total).abs();
            ensure!(drift <= 1e-12, "{name} move at {index} changed the sum by {drift:e}");
        }
    }
    Ok(())
}

/// Sparsify zeroes exactly the entries ≤ λ, spreads their mass equally,
/// keeps the sum and is idempotent.
pub fn sparsify_exact(v: &[f64], lambda: f64) -> Check {
    let Ok(out) = sparsify(v, lambda) else {
        ensure!(v.iter().all(|&x| x <= lambda), "sparsify failed on {v:?}");
        return Ok(());
    };
    let small: Vec<usize> = (0..v.len()).filter(|&i| v[i] <= lambda).collect();
    let kept = v.len() - small.len();
    let share = small.iter().map(|&i| v[i]).sum::<f64>() / kept as f64;
    for i in 0..v.len() {
        let expected = if v[i] <= lambda { 0.0 } else { v[i] + share };
        ensure!((out[i] - expected).abs() <= 1e-15, "entry {i}: {} vs {expected}", out[i]);
    }
    ensure!((out.iter().sum::<f64>() - v.iter().sum::<f64>()).abs() <= 1e-12, "sum changed");
    let again = sparsify(&out, lambda).map_err(|e| e.to_string())?;
    ensure!(same_bits(&again, &out), "not idempotent on {v:?}");
    Ok(())
}

/// Lifting a box point and evaluating on the simplex matches the box
/// function to 1e-10, and the slack coordinate has no effect.
pub fn lift_correct(function: BenchmarkFunction, dim: usize, seed: u64, samples: usize) -> Check {
    let base = HypercubeBenchmark::new(function, dim, Variant::Canonical).map_err(|e| e.to_string())?;
    let lifted = lift_to_simplex(base);
    let (lo, hi) = function.default_bounds();
    let mut r = rng(seed);
    for _ in 0..samples {
        let x: Vec<f64> = (0..dim).map(|_| uniform(&mut r, lo, hi)).collect();
        let y = base.lift_point(&x);
        ensure!(is_feasible(&y, FEASIBILITY_TOL).unwrap(), "lift of {x:?} is infeasible");
        let on_simplex = lifted.eval(&y).map_err(|e| e.to_string())?;
        let direct = base.eval(&x);
        ensure!((on_simplex - direct).abs() <= 1e-10, "{function} at {x:?}: {on_simplex} vs {direct}");
        let mut shifted = y.clone();
        shifted[dim] += 0.25;
        ensure!(
            lifted.eval(&shifted).unwrap() == on_simplex,
            "{function}: slack coordinate changed the value"
        );
    }
    Ok(())
}

/// Default-parameter optimization of a random quadratic agrees with the
/// projected-gradient oracle.
pub fn convex_certificate(quadratic: &Quadratic, start: &BlockPoint) -> Check {
    let (oracle_point, oracle_value) = quadratic.oracle();
    let result =
        Gcdvsms::new(TuningParams::default()).optimize(quadratic, start).map_err(|e| e.to_string())?;
    let value_gap = (result.value - oracle_value).abs();
    let point_gap = result.point.max_abs_diff(&oracle_point);
    ensure!(
        value_gap <= 1e-6 && point_gap <= 1e-3,
        "shape {}: value gap {value_gap:e}, point gap {point_gap:e}",
        quadratic.shape()
    );
    Ok(())
}

/// The ten quadratics used by the oracle-equivalence criterion.
pub fn convex_cases() -> Vec<(Quadratic, BlockPoint)> {
    let shapes = [vec![3], vec![3, 4], vec![2, 2, 2]];
    (0..10u64)
        .map(|k| {
            let shape = BlockShape::new(shapes[k as usize % 3].clone()).unwrap();
            let mut r = rng(1000 + k);
            let quadratic = random_quadratic(&shape, &mut r);
            let blocks: Vec<Vec<f64>> =
                shape.sizes().into_iter().map(|n| super::simplex_point(&mut r, n)).collect();
            (quadratic, BlockPoint::from_blocks(&blocks).unwrap())
        })
        .collect()
}

/// f(p) = p_1 on Δ², P = (0.5, 0.5), gs = 0.25: the candidates in evaluation
/// order are (0.75, 0.25), (0.25, 0.75), (0.25, 0.75), (0.75, 0.25), the
/// negative move at the first coordinate wins the +/− tie, and the accepted
/// point is re-evaluated once.
pub fn hand_traced_iteration() -> Check {
    let seen = Mutex::new(Vec::new());
    let shape = BlockShape::new([2]).unwrap();
    let objective = FnObjective::new(shape, |p: &BlockPoint| {
        seen.lock().unwrap().push(p.values().to_vec());
        p.block(0)[0]
    });
    let start = BlockPoint::from_blocks(&[[0.5, 0.5]]).unwrap();
    let it = Gcdvsms::new(TuningParams::default())
        .iterate(&objective, &start, 0.5, 0.25, 1.01)
        .map_err(|e| e.to_string())?;
    let expected_move = Move { block: 0, coordinate: 0, direction: Direction::Negative, step: 0.25 };
    ensure!(it.accepted == Some(expected_move), "accepted {:?}", it.accepted);
    ensure!(it.point.values() == [0.25, 0.75], "new point {:?}", it.point.values());
    ensure!(
        it.value == 0.25 && it.gs == 0.25 && !it.stop,
        "value {} gs {} stop {}",
        it.value,
        it.gs,
        it.stop
    );
    ensure!(it.candidate_evaluations == 4, "{} candidates", it.candidate_evaluations);
    let seen = seen.into_inner().unwrap();
    let expected: [[f64; 2]; 5] = [[0.75, 0.25], [0.25, 0.75], [0.25, 0.75], [0.75, 0.25], [0.25, 0.75]];
    ensure!(
        seen.len() == 5 && seen.iter().zip(&expected).all(|(a, b)| a.as_slice() == b),
        "evaluation sequence {seen:?}"
    );
    Ok(())
}

fn same_bits(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}
