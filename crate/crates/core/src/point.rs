//! Block shapes and block points: the product-of-simplices search space.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::simplex::{is_feasible, FEASIBILITY_TOL};

/// Sizes `(n_1, …, n_B)` of the simplex blocks.
///
/// Stored as prefix offsets so block slices are cheap to compute; cloning
/// only bumps a reference count.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockShape {
    offsets: Arc<[usize]>,
}

impl BlockShape {
    pub fn new(sizes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut offsets = vec![0];
        let mut total = 0;
        for n in sizes {
            if n == 0 {
                return Err(Error::InvalidInput("simplex blocks must have at least one entry".into()));
            }
            total += n;
            offsets.push(total);
        }
        if offsets.len() == 1 {
            return Err(Error::InvalidInput("a block shape needs at least one block".into()));
        }
        Ok(Self { offsets: offsets.into() })
    }

    /// `n` blocks of identical size.
    pub fn uniform(blocks: usize, size: usize) -> Result<Self> {
        Self::new(std::iter::repeat_n(size, blocks))
    }

    /// Number of blocks, B.
    pub fn num_blocks(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn block_len(&self, block: usize) -> usize {
        self.offsets[block + 1] - self.offsets[block]
    }

    /// Total number of coordinates, M.
    pub fn total_len(&self) -> usize {
        self.offsets[self.offsets.len() - 1]
    }

    pub fn max_block_len(&self) -> usize {
        (0..self.num_blocks()).map(|j| self.block_len(j)).max().unwrap_or(0)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub(crate) fn range(&self, block: usize) -> std::ops::Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }
}

impl fmt::Debug for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("BlockShape").field(&self.sizes()).finish()
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.sizes())
    }
}

/// A candidate solution: one simplex vector per block, stored contiguously.
#[derive(Clone, PartialEq)]
pub struct BlockPoint {
    shape: BlockShape,
    values: Vec<f64>,
}

impl BlockPoint {
    /// Builds a point from flat values, checking length and per-block feasibility.
    pub fn new(shape: BlockShape, values: Vec<f64>) -> Result<Self> {
        if values.len() != shape.total_len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} values for shape {shape}", shape.total_len()),
                found: format!("{} values", values.len()),
            });
        }
        let point = Self { shape, values };
        for (j, block) in point.blocks().enumerate() {
            if !is_feasible(block, FEASIBILITY_TOL)? {
                return Err(Error::InvalidInput(format!(
                    "block {} is not on the unit simplex: {block:?}",
                    j + 1
                )));
            }
        }
        Ok(point)
    }

    pub fn from_blocks<B: AsRef<[f64]>>(blocks: &[B]) -> Result<Self> {
        let shape = BlockShape::new(blocks.iter().map(|b| b.as_ref().len()))?;
        let values = blocks.iter().flat_map(|b| b.as_ref().iter().copied()).collect();
        Self::new(shape, values)
    }

    pub(crate) fn from_parts_unchecked(shape: BlockShape, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), shape.total_len());
        Self { shape, values }
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn num_blocks(&self) -> usize {
        self.shape.num_blocks()
    }

    pub fn block(&self, block: usize) -> &[f64] {
        &self.values[self.shape.range(block)]
    }

    pub fn blocks(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        (0..self.num_blocks()).map(move |j| self.block(j))
    }

    /// All coordinates, block after block.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        self.blocks().map(<[f64]>::to_vec).collect()
    }

    /// Overwrites one block. The caller guarantees `values` lies on the simplex.
    pub(crate) fn set_block(&mut self, block: usize, values: &[f64]) {
        let range = self.shape.range(block);
        self.values[range].copy_from_slice(values);
    }

    /// Copy of `self` with `block` replaced.
    pub(crate) fn with_block(&self, block: usize, values: &[f64]) -> Self {
        let mut out = self.clone();
        out.set_block(block, values);
        out
    }

    /// Largest absolute coordinate difference to `other`.
    pub fn max_abs_diff(&self, other: &BlockPoint) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for BlockPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.blocks()).finish()
    }
}
