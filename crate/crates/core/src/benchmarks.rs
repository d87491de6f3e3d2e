//! Hypercube test functions lifted onto simplex blocks.
//!
//! A box `[l, u]^d` is mapped onto the first `d` coordinates of the simplex
//! `Δ^d` by `y_i = (x_i - l) / (d (u - l))`; the last coordinate is a slack
//! that completes the unit sum and never enters the objective. Feasible
//! simplex points whose image lies outside the box are evaluated with the
//! same formula (no clamping).

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::objective::SimplexObjective;
use crate::point::{BlockPoint, BlockShape};

/// Formula family.
///
/// `Canonical` is the textbook definition of each function. `PaperLiteral`
/// keeps an alternative transcription: Rastrigin without the factor 10 on the
/// cosine, Ackley with `0.5` in place of `1/d`, and Griewank without the
/// leading `+1`. Sphere is the same in both.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Variant {
    #[default]
    Canonical,
    PaperLiteral,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Canonical => "canonical",
            Variant::PaperLiteral => "paper_literal",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Variant::Canonical),
            "paper_literal" => Ok(Variant::PaperLiteral),
            other => Err(Error::UnsupportedVariant(other.to_string())),
        }
    }
}

pub fn rastrigin(x: &[f64], variant: Variant) -> f64 {
    let d = x.len() as f64;
    let amplitude = match variant {
        Variant::Canonical => 10.0,
        Variant::PaperLiteral => 1.0,
    };
    10.0 * d + x.iter().map(|&xi| xi * xi - amplitude * (2.0 * PI * xi).cos()).sum::<f64>()
}

pub fn ackley(x: &[f64], variant: Variant) -> f64 {
    let scale = match variant {
        Variant::Canonical => 1.0 / x.len() as f64,
        Variant::PaperLiteral => 0.5,
    };
    let squares: f64 = x.iter().map(|&xi| xi * xi).sum();
    let cosines: f64 = x.iter().map(|&xi| (2.0 * PI * xi).cos()).sum();
    -20.0 * (-0.2 * (scale * squares).sqrt()).exp() - (scale * cosines).exp() + E + 20.0
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|&xi| xi * xi).sum()
}

pub fn griewank(x: &[f64], variant: Variant) -> f64 {
    let offset = match variant {
        Variant::Canonical => 1.0,
        Variant::PaperLiteral => 0.0,
    };
    let squares: f64 = x.iter().map(|&xi| xi * xi).sum::<f64>() / 4000.0;
    let product: f64 = x.iter().enumerate().map(|(i, &xi)| (xi / ((i + 1) as f64).sqrt()).cos()).product();
    offset + squares - product
}

/// The benchmark families in the registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkFunction {
    Rastrigin,
    Ackley,
    Sphere,
    Griewank,
}

impl BenchmarkFunction {
    pub const ALL: [BenchmarkFunction; 4] = [
        BenchmarkFunction::Rastrigin,
        BenchmarkFunction::Ackley,
        BenchmarkFunction::Sphere,
        BenchmarkFunction::Griewank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkFunction::Rastrigin => "rastrigin",
            BenchmarkFunction::Ackley => "ackley",
            BenchmarkFunction::Sphere => "sphere",
            BenchmarkFunction::Griewank => "griewank",
        }
    }

    /// Default box `(l, u)` applied to every coordinate.
    pub fn default_bounds(self) -> (f64, f64) {
        match self {
            BenchmarkFunction::Rastrigin | BenchmarkFunction::Sphere => (-5.12, 5.12),
            BenchmarkFunction::Ackley => (-5.0, 5.0),
            BenchmarkFunction::Griewank => (-500.0, 500.0),
        }
    }

    pub fn eval(self, x: &[f64], variant: Variant) -> f64 {
        match self {
            BenchmarkFunction::Rastrigin => rastrigin(x, variant),
            BenchmarkFunction::Ackley => ackley(x, variant),
            BenchmarkFunction::Sphere => sphere(x),
            BenchmarkFunction::Griewank => griewank(x, variant),
        }
    }
}

impl fmt::Display for BenchmarkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

/// A test function on the box `[lower, upper]^dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypercubeBenchmark {
    pub function: BenchmarkFunction,
    pub dim: usize,
    pub lower: f64,
    pub upper: f64,
    pub variant: Variant,
}

impl HypercubeBenchmark {
    /// The function on its default box.
    pub fn new(function: BenchmarkFunction, dim: usize, variant: Variant) -> Result<Self> {
        let (lower, upper) = function.default_bounds();
        Self::with_bounds(function, dim, lower, upper, variant)
    }

    pub fn with_bounds(
        function: BenchmarkFunction,
        dim: usize,
        lower: f64,
        upper: f64,
        variant: Variant,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("benchmark dimension must be positive".into()));
        }
        if !(lower < upper) {
            return Err(Error::InvalidInput(format!("empty box [{lower}, {upper}]")));
        }
        Ok(Self { function, dim, lower, upper, variant })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.function.eval(x, self.variant)
    }

    /// Maps a box point to the simplex, appending the slack coordinate.
    pub fn lift_point(&self, x: &[f64]) -> Vec<f64> {
        let scale = self.dim as f64 * (self.upper - self.lower);
        let mut y: Vec<f64> = x.iter().map(|&xi| (xi - self.lower) / scale).collect();
        let slack = 1.0 - y.iter().sum::<f64>();
        y.push(slack);
        y
    }

    /// Inverse map on the first `dim` simplex coordinates.
    pub fn to_hypercube(&self, y: &[f64]) -> Vec<f64> {
        let scale = self.dim as f64 * (self.upper - self.lower);
        y[..self.dim].iter().map(|&yi| scale * yi + self.lower).collect()
    }
}

/// Wraps a benchmark as a function on `Δ^dim` (blocks of length `dim + 1`).
pub fn lift_to_simplex(base: HypercubeBenchmark) -> LiftedObjective {
    LiftedObjective { base }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedObjective {
    base: HypercubeBenchmark,
}

impl LiftedObjective {
    pub fn base(&self) -> &HypercubeBenchmark {
        &self.base
    }

    pub fn block_len(&self) -> usize {
        self.base.dim + 1
    }

    /// Value at one simplex block. The slack coordinate is ignored.
    pub fn eval(&self, block: &[f64]) -> Result<f64> {
        if block.len() != self.block_len() {
            return Err(Error::ShapeMismatch {
                expected: format!("block of length {}", self.block_len()),
                found: format!("length {}", block.len()),
            });
        }
        Ok(self.eval_unchecked(block))
    }

    fn eval_unchecked(&self, block: &[f64]) -> f64 {
        const STACK: usize = 64;
        let dim = self.base.dim;
        if dim > STACK {
            return self.base.eval(&self.base.to_hypercube(block));
        }
        // Hot path: avoid a heap allocation per block.
        let scale = dim as f64 * (self.base.upper - self.base.lower);
        let mut x = [0.0; STACK];
        for (xi, &yi) in x.iter_mut().zip(&block[..dim]) {
            *xi = scale * yi + self.base.lower;
        }
        self.base.eval(&x[..dim])
    }
}

/// Sum of a lifted benchmark over `n` independent blocks.
#[derive(Debug, Clone)]
pub struct MultiBlockObjective {
    lifted: LiftedObjective,
    shape: BlockShape,
}

pub fn multi_block(lifted: LiftedObjective, n: usize) -> Result<MultiBlockObjective> {
    let shape = BlockShape::uniform(n, lifted.block_len())?;
    Ok(MultiBlockObjective { lifted, shape })
}

impl MultiBlockObjective {
    pub fn lifted(&self) -> &LiftedObjective {
        &self.lifted
    }

    pub fn num_blocks(&self) -> usize {
        self.shape.num_blocks()
    }
}

impl SimplexObjective for MultiBlockObjective {
    fn shape(&self) -> &BlockShape {
        &self.shape
    }

    fn evaluate(&self, point: &BlockPoint) -> f64 {
        point.blocks().map(|b| self.lifted.eval_unchecked(b)).sum()
    }
}

/// Global minimizer and minimum of the `n`-block sum. The canonical
/// functions all attain 0 at the box origin.
pub fn known_optimum(base: &HypercubeBenchmark, n: usize) -> Result<(BlockPoint, f64)> {
    if base.variant != Variant::Canonical {
        return Err(Error::UnsupportedVariant(format!(
            "no known optimum for the {} variant of {}",
            base.variant, base.function
        )));
    }
    if !(base.lower <= 0.0 && 0.0 <= base.upper) {
        return Err(Error::InvalidInput(format!(
            "box [{}, {}] does not contain the origin",
            base.lower, base.upper
        )));
    }
    let block = base.lift_point(&vec![0.0; base.dim]);
    let shape = BlockShape::uniform(n, base.dim + 1)?;
    let values = std::iter::repeat_n(block, n).flatten().collect();
    Ok((BlockPoint::new(shape, values)?, 0.0))
}
