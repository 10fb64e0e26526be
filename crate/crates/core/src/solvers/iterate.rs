use super::Decomposition;
use crate::error::{Error, Result};

/// Dense block vectors `(a_1, .., a_r)`, each of length `n`.
pub type BlockVectors = Vec<Vec<f64>>;

/// A dual point `y = (y_1, .., y_r)` with `y_i ∈ B(F_i)` stored on the block
/// supports, plus the cached dense sum `Σ_i y_i`.
///
/// `g(y) = ‖Σ_i y_i‖²` and `∇_i g(y) = 2 Σ_j y_j` (restricted to block `i`),
/// so the cached sum is all the solvers need to take a block step.
#[derive(Debug, Clone, PartialEq)]
pub struct DualIterate {
    blocks: Vec<Vec<f64>>,
    sum: Vec<f64>,
    updates: usize,
}

impl DualIterate {
    /// Block `i` of `local` is indexed by the support of `d.blocks()[i]`.
    pub fn new(d: &Decomposition, local: Vec<Vec<f64>>) -> Result<Self> {
        if local.len() != d.r() {
            return Err(Error::DimensionMismatch {
                expected: d.r(),
                found: local.len(),
            });
        }
        for (b, y) in d.blocks().iter().zip(&local) {
            if b.support().len() != y.len() {
                return Err(Error::DimensionMismatch {
                    expected: b.support().len(),
                    found: y.len(),
                });
            }
        }
        let mut it = DualIterate {
            blocks: local,
            sum: vec![0.0; d.n()],
            updates: 0,
        };
        it.refresh(d);
        Ok(it)
    }

    /// Restricts dense blocks to the block supports.
    pub fn from_dense(d: &Decomposition, dense: &[Vec<f64>]) -> Result<Self> {
        if dense.len() != d.r() {
            return Err(Error::DimensionMismatch {
                expected: d.r(),
                found: dense.len(),
            });
        }
        let local = d
            .blocks()
            .iter()
            .zip(dense)
            .map(|(b, y)| {
                if y.len() != d.n() {
                    Err(Error::DimensionMismatch {
                        expected: d.n(),
                        found: y.len(),
                    })
                } else {
                    Ok(b.gather(y))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        DualIterate::new(d, local)
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize) -> &[f64] {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[Vec<f64>] {
        &self.blocks
    }

    /// Cached `Σ_i y_i`.
    pub fn sum(&self) -> &[f64] {
        &self.sum
    }

    /// `Σ_i y_i` recomputed from the blocks.
    pub fn exact_sum(&self, d: &Decomposition) -> Vec<f64> {
        let mut s = vec![0.0; d.n()];
        for (b, y) in d.blocks().iter().zip(&self.blocks) {
            b.scatter_add(y, 1.0, &mut s);
        }
        s
    }

    pub fn refresh(&mut self, d: &Decomposition) {
        self.sum = self.exact_sum(d);
        self.updates = 0;
    }

    /// `g(y) = ‖Σ_i y_i‖²` from the cached sum.
    pub fn g(&self) -> f64 {
        self.sum.iter().map(|v| v * v).sum()
    }

    /// Primal point `x = −Σ_i y_i`.
    pub fn primal(&self, d: &Decomposition) -> Vec<f64> {
        self.exact_sum(d).into_iter().map(|v| -v).collect()
    }

    /// Overwrites block `i`, updating the cached sum on the block support.
    /// The sum is rebuilt from scratch every `n·r` updates.
    pub fn set_block(&mut self, d: &Decomposition, i: usize, value: &[f64]) {
        let b = &d.blocks()[i];
        for ((&v, old), &new) in b.support().iter().zip(self.blocks[i].iter_mut()).zip(value) {
            self.sum[v] += new - *old;
            *old = new;
        }
        self.updates += 1;
        if self.updates >= d.n() * d.r() {
            self.refresh(d);
        }
    }

    pub fn to_dense(&self, d: &Decomposition) -> BlockVectors {
        d.blocks()
            .iter()
            .zip(&self.blocks)
            .map(|(b, y)| b.to_dense(y))
            .collect()
    }

    /// Euclidean distance in `ℝ^{nr}`.
    pub fn distance(&self, other: &DualIterate) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest block membership violation, or `None` if some block cannot be
    /// checked.
    pub fn membership_violation(&self, d: &Decomposition) -> Option<f64> {
        d.blocks()
            .iter()
            .zip(&self.blocks)
            .map(|(b, y)| b.membership_violation(y))
            .try_fold(0.0, |acc: f64, v| v.map(|v| acc.max(v)))
    }
}

/// Projection onto `{a : Σ_i a_i = 0}`: subtracts the block mean from every
/// block.
pub fn project_zero_sum(y: &[Vec<f64>]) -> BlockVectors {
    let r = y.len();
    if r == 0 {
        return Vec::new();
    }
    let n = y[0].len();
    let mut mean = vec![0.0; n];
    for block in y {
        for (m, v) in mean.iter_mut().zip(block) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= r as f64);
    y.iter()
        .map(|block| block.iter().zip(&mean).map(|(v, m)| v - m).collect())
        .collect()
}
