//! Separable positive-definite quadratics on products of simplices, solved
//! independently by projected gradient descent.

use gcdvsms::{BlockPoint, BlockShape, SimplexObjective};
use rand_chacha::rand_core::RngCore;

use super::{simplex_point, uniform};

/// `Σ_j (p_j − c_j)ᵀ A_j (p_j − c_j)`.
pub struct Quadratic {
    shape: BlockShape,
    blocks: Vec<Block>,
}

struct Block {
    a: Vec<f64>,
    c: Vec<f64>,
}

impl Block {
    fn n(&self) -> usize {
        self.c.len()
    }

    fn value(&self, p: &[f64]) -> f64 {
        let n = self.n();
        let r: Vec<f64> = p.iter().zip(&self.c).map(|(p, c)| p - c).collect();
        (0..n).map(|i| r[i] * (0..n).map(|k| self.a[i * n + k] * r[k]).sum::<f64>()).sum()
    }

    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n).map(|i| 2.0 * (0..n).map(|k| self.a[i * n + k] * (p[k] - self.c[k])).sum::<f64>()).collect()
    }

    fn frobenius(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn minimize(&self) -> Vec<f64> {
        let n = self.n();
        let step = 1.0 / (2.0 * self.frobenius());
        let mut p = vec![1.0 / n as f64; n];
        for _ in 0..200_000 {
            let g = self.gradient(&p);
            let next = project_simplex(&p.iter().zip(&g).map(|(p, g)| p - step * g).collect::<Vec<_>>());
            let change = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            p = next;
            if change < 1e-16 {
                break;
            }
        }
        p
    }
}

impl Quadratic {
    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    /// Global minimizer and minimum over the product of simplices.
    pub fn oracle(&self) -> (BlockPoint, f64) {
        let blocks: Vec<Vec<f64>> = self.blocks.iter().map(Block::minimize).collect();
        let value = self.blocks.iter().zip(&blocks).map(|(b, p)| b.value(p)).sum();
        (BlockPoint::from_blocks(&blocks).unwrap(), value)
    }
}

impl SimplexObjective for Quadratic {
    fn shape(&self) -> &BlockShape {
        &self.shape
    }

    fn evaluate(&self, point: &BlockPoint) -> f64 {
        self.blocks.iter().zip(point.blocks()).map(|(b, p)| b.value(p)).sum()
    }
}

/// Euclidean projection onto the unit simplex (sort-and-threshold).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// A random instance whose minimizer has every coordinate ≥ 0.05.
/// `A_j = I + BᵀB / n_j` with `B` uniform on [−1, 1], and `c_j` is an interior
/// simplex point pushed off the simplex by a uniform perturbation.
pub fn random_quadratic(shape: &BlockShape, rng: &mut impl RngCore) -> Quadratic {
    let blocks = shape
        .sizes()
        .into_iter()
        .map(|n| loop {
            let b: Vec<f64> = (0..n * n).map(|_| uniform(rng, -1.0, 1.0)).collect();
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for k in 0..n {
                    let btb: f64 = (0..n).map(|r| b[r * n + i] * b[r * n + k]).sum();
                    a[i * n + k] = btb / n as f64 + if i == k { 1.0 } else { 0.0 };
                }
            }
            let c = simplex_point(rng, n).into_iter().map(|q| q + uniform(rng, -0.3, 0.3)).collect();
            let block = Block { a, c };
            if block.minimize().iter().all(|&p| p >= 0.05) {
                break block;
            }
        })
        .collect();
    Quadratic { shape: shape.clone(), blocks }
}
