//! The black-box objective contract.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::point::{BlockPoint, BlockShape};

/// A deterministic, side-effect-free function over a product of simplices.
///
/// `Sync` is required because the engine may evaluate the candidates of one
/// iteration concurrently.
pub trait SimplexObjective: Sync {
    fn shape(&self) -> &BlockShape;

    fn evaluate(&self, point: &BlockPoint) -> f64;
}

impl<O: SimplexObjective + ?Sized> SimplexObjective for &O {
    fn shape(&self) -> &BlockShape {
        (**self).shape()
    }

    fn evaluate(&self, point: &BlockPoint) -> f64 {
        (**self).evaluate(point)
    }
}

/// Adapts a closure into a [`SimplexObjective`].
pub struct FnObjective<F> {
    shape: BlockShape,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&BlockPoint) -> f64 + Sync,
{
    pub fn new(shape: BlockShape, f: F) -> Self {
        Self { shape, f }
    }
}

impl<F> SimplexObjective for FnObjective<F>
where
    F: Fn(&BlockPoint) -> f64 + Sync,
{
    fn shape(&self) -> &BlockShape {
        &self.shape
    }

    fn evaluate(&self, point: &BlockPoint) -> f64 {
        (self.f)(point)
    }
}

/// Wraps an objective and counts how often it is evaluated.
pub struct Counted<O> {
    inner: O,
    count: AtomicUsize,
}

impl<O> Counted<O> {
    pub fn new(inner: O) -> Self {
        Self { inner, count: AtomicUsize::new(0) }
    }

    pub fn evaluations(&self) -> usize {
        self.count.load(Ordering::Relaxed)
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: SimplexObjective> SimplexObjective for Counted<O> {
    fn shape(&self) -> &BlockShape {
        self.inner.shape()
    }

    fn evaluate(&self, point: &BlockPoint) -> f64 {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.evaluate(point)
    }
}
