//! Geometric primitives on the unit simplex.
//!
//! A simplex vector is a plain `&[f64]` whose entries are nonnegative and sum
//! to one. Coordinates are 0-based here; user-facing output (traces, error
//! messages) reports them 1-based.
//!
//! Coordinate moves shift mass between one coordinate and the *significant*
//! coordinates of the same vector, i.e. those strictly above the sparsity
//! threshold `lambda`. Insignificant coordinates never donate or receive mass.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::point::{BlockPoint, BlockShape};

/// Tolerance used by every internal feasibility check.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Direction of a coordinate move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Add mass to the coordinate, taking it from the significant others.
    Positive,
    /// Remove mass from the coordinate, handing it to the significant others.
    Negative,
}

impl Direction {
    pub fn symbol(self) -> char {
        match self {
            Direction::Positive => '+',
            Direction::Negative => '-',
        }
    }
}

/// `true` iff every entry is `>= -tol` and the entries sum to one within `tol`.
pub fn is_feasible(v: &[f64], tol: f64) -> Result<bool> {
    if v.is_empty() {
        return Err(Error::InvalidInput("empty simplex vector".into()));
    }
    Ok(feasible_unchecked(v, tol))
}

#[inline]
pub(crate) fn feasible_unchecked(v: &[f64], tol: f64) -> bool {
    let mut sum = 0.0;
    for &x in v {
        // `!(x >= -tol)` also rejects NaN
        if !(x >= -tol) {
            return false;
        }
        sum += x;
    }
    (sum - 1.0).abs() <= tol
}

/// Indices `l != exclude` with `v[l] > lambda`. Its length is the move's `K`;
/// an empty set means the move at `exclude` must be skipped.
pub fn significant_indices(v: &[f64], exclude: usize, lambda: f64) -> Result<Vec<usize>> {
    check_index(v, exclude)?;
    Ok(significant_unchecked(v, exclude, lambda))
}

fn significant_unchecked(v: &[f64], exclude: usize, lambda: f64) -> Vec<usize> {
    v.iter().enumerate().filter(|&(l, &x)| l != exclude && x > lambda).map(|(l, _)| l).collect()
}

fn check_index(v: &[f64], index: usize) -> Result<()> {
    if index >= v.len() {
        return Err(Error::InvalidInput(format!(
            "coordinate {} out of range for a vector of length {}",
            index + 1,
            v.len()
        )));
    }
    Ok(())
}

/// Writes the move of size `step` at `index` into `out` (which must have `v`'s length).
#[inline]
pub(crate) fn write_move(
    v: &[f64],
    index: usize,
    direction: Direction,
    step: f64,
    significant: &[usize],
    out: &mut [f64],
) {
    out.copy_from_slice(v);
    let share = step / significant.len() as f64;
    match direction {
        Direction::Positive => {
            out[index] = v[index] + step;
            for &l in significant {
                out[l] = v[l] - share;
            }
        }
        Direction::Negative => {
            out[index] = v[index] - step;
            for &l in significant {
                out[l] = v[l] + share;
            }
        }
    }
}

fn coordinate_move(
    v: &[f64],
    index: usize,
    direction: Direction,
    step: f64,
    lambda: f64,
) -> Result<Vec<f64>> {
    let significant = significant_indices(v, index, lambda)?;
    if significant.is_empty() {
        return Err(Error::MoveUndefined { index: index + 1 });
    }
    let mut out = vec![0.0; v.len()];
    write_move(v, index, direction, step, &significant, &mut out);
    Ok(out)
}

/// Raises `v[index]` by `step` and lowers each other significant entry by
/// `step / K`. The result may be infeasible; checking is the caller's job.
pub fn positive_move(v: &[f64], index: usize, step: f64, lambda: f64) -> Result<Vec<f64>> {
    coordinate_move(v, index, Direction::Positive, step, lambda)
}

/// Lowers `v[index]` by `step` and raises each other significant entry by `step / K`.
pub fn negative_move(v: &[f64], index: usize, step: f64, lambda: f64) -> Result<Vec<f64>> {
    coordinate_move(v, index, Direction::Negative, step, lambda)
}

/// Zeroes every entry `<= lambda` and spreads their total mass equally over
/// the remaining entries.
pub fn sparsify(v: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let mut out = v.to_vec();
    sparsify_in_place(&mut out, lambda)?;
    Ok(out)
}

pub(crate) fn sparsify_in_place(v: &mut [f64], lambda: f64) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidInput("empty simplex vector".into()));
    }
    let kept = v.iter().filter(|&&x| x > lambda).count();
    if kept == 0 {
        return Err(Error::DegenerateVector { lambda });
    }
    if kept == v.len() {
        return Ok(());
    }
    let garbage: f64 = v.iter().filter(|&&x| x <= lambda).sum();
    let share = garbage / kept as f64;
    for x in v.iter_mut() {
        if *x > lambda {
            *x += share;
        } else {
            *x = 0.0;
        }
    }
    Ok(())
}

/// Snaps entries in `[-FEASIBILITY_TOL, 0)` to zero and takes the added mass
/// back from the largest entry, so boundary moves land exactly on a face.
pub(crate) fn clamp_roundoff(v: &mut [f64]) {
    let mut deficit = 0.0;
    for x in v.iter_mut() {
        if *x < 0.0 {
            deficit += *x;
            *x = 0.0;
        }
    }
    if deficit != 0.0 {
        let largest = v.iter().enumerate().fold(0, |best, (l, &x)| if x > v[best] { l } else { best });
        v[largest] += deficit;
    }
}

/// Draws one point uniformly from each block's simplex (flat Dirichlet).
pub fn sample_uniform(shape: &BlockShape, seed: u64) -> BlockPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_uniform_with(shape, &mut rng)
}

/// Like [`sample_uniform`], drawing from a caller-owned generator.
pub fn sample_uniform_with<R: Rng + ?Sized>(shape: &BlockShape, rng: &mut R) -> BlockPoint {
    let mut values = Vec::with_capacity(shape.total_len());
    for j in 0..shape.num_blocks() {
        let start = values.len();
        for _ in 0..shape.block_len(j) {
            let e: f64 = Exp1.sample(rng);
            values.push(e);
        }
        let block = &mut values[start..];
        let total: f64 = block.iter().sum();
        for x in block.iter_mut() {
            *x /= total;
        }
    }
    BlockPoint::from_parts_unchecked(shape.clone(), values)
}
