//! Euclidean projection onto `B(F)` for an arbitrary submodular oracle, by
//! away-step conditional gradient with exact line search. The linear
//! subproblems are solved by Edmonds' greedy algorithm.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::submodular::{edmonds_greedy, Memoized, SubmodularOracle, MAX_ENUMERATION};

pub const DEFAULT_TOL: f64 = 1e-8;

/// A block given only by its set-function oracle.
#[derive(Clone)]
pub struct GenericBlock {
    oracle: Arc<dyn SubmodularOracle>,
    tol: f64,
    max_iter: u64,
}

impl std::fmt::Debug for GenericBlock {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GenericBlock")
            .field("n", &self.oracle.ground_size())
            .field("tol", &self.tol)
            .field("max_iter", &self.max_iter)
            .finish()
    }
}

impl GenericBlock {
    /// Small ground sets get a bitmask evaluation cache.
    pub fn new<O: SubmodularOracle + 'static>(oracle: O, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput(format!("projection tolerance {tol} must be > 0")));
        }
        let n = oracle.ground_size();
        let oracle: Arc<dyn SubmodularOracle> = if n <= MAX_ENUMERATION {
            Arc::new(Memoized::new(oracle))
        } else {
            Arc::new(oracle)
        };
        let max_iter = (10.0 * n as f64 / tol).min(u64::MAX as f64) as u64;
        Ok(GenericBlock {
            oracle,
            tol,
            max_iter: max_iter.max(1),
        })
    }

    pub fn with_max_iter(mut self, max_iter: u64) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn oracle(&self) -> &dyn SubmodularOracle {
        self.oracle.as_ref()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_iter(&self) -> u64 {
        self.max_iter
    }

    pub fn project(&self, a: &[f64]) -> Result<Vec<f64>> {
        project_conditional_gradient(self.oracle.as_ref(), a, self.tol, self.max_iter)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Projects `a` onto `B(F)`.
///
/// Stops when the Frank-Wolfe gap is at most `tol²/2`, which bounds the
/// distance to the exact projection by `tol` (the objective is 1-strongly
/// convex). The gap is a difference of inner products, so it cannot be
/// resolved below a few ulps of `‖y − a‖·‖y − s‖`; that rounding floor is
/// also accepted.
pub fn project_conditional_gradient(
    oracle: &dyn SubmodularOracle,
    a: &[f64],
    tol: f64,
    max_iter: u64,
) -> Result<Vec<f64>> {
    let m = a.len();
    let first = edmonds_greedy(oracle, a)?.w;
    let mut active: Vec<(Vec<f64>, f64)> = vec![(first.clone(), 1.0)];
    let mut y = first;
    let target = 0.5 * tol * tol;

    let mut best = y.clone();
    let mut best_gap = f64::INFINITY;
    let mut grad = vec![0.0; m];
    let mut neg_grad = vec![0.0; m];
    let mut dir = vec![0.0; m];

    for _ in 0..max_iter {
        for i in 0..m {
            grad[i] = y[i] - a[i];
            neg_grad[i] = -grad[i];
        }
        let s = edmonds_greedy(oracle, &neg_grad)?.w;
        let ys: Vec<f64> = y.iter().zip(&s).map(|(p, q)| p - q).collect();
        let gap = dot(&grad, &ys);
        if gap < best_gap {
            best_gap = gap;
            best.copy_from_slice(&y);
        }
        let floor = 64.0 * f64::EPSILON * norm(&grad) * (norm(&y) + norm(&s) + norm(&ys));
        if gap <= target.max(floor) {
            return Ok(y);
        }

        // away vertex: worst active vertex along the gradient
        let (away, away_score) = active
            .iter()
            .enumerate()
            .map(|(k, (v, _))| (k, dot(&grad, v)))
            .max_by(|p, q| p.1.total_cmp(&q.1))
            .expect("active set is never empty");
        let away_gap = away_score - dot(&grad, &y);
        let away_weight = active[away].1;

        let fw_step = gap >= away_gap || away_weight >= 1.0;
        let max_step = if fw_step {
            for i in 0..m {
                dir[i] = s[i] - y[i];
            }
            1.0
        } else {
            for i in 0..m {
                dir[i] = y[i] - active[away].0[i];
            }
            away_weight / (1.0 - away_weight)
        };
        let dd = dot(&dir, &dir);
        if dd == 0.0 {
            return Ok(y);
        }
        let step = (-dot(&grad, &dir) / dd).clamp(0.0, max_step);
        if step == 0.0 {
            // no progress is possible in floating point
            return Ok(y);
        }

        if fw_step {
            for (_, w) in active.iter_mut() {
                *w *= 1.0 - step;
            }
            match active.iter_mut().find(|(v, _)| *v == s) {
                Some((_, w)) => *w += step,
                None => active.push((s, step)),
            }
        } else {
            for (_, w) in active.iter_mut() {
                *w *= 1.0 + step;
            }
            active[away].1 -= step;
            if step >= max_step {
                active.remove(away);
            }
        }
        active.retain(|(_, w)| *w > 0.0);
        let total: f64 = active.iter().map(|(_, w)| w).sum();
        y.iter_mut().for_each(|v| *v = 0.0);
        for (v, w) in &active {
            let w = w / total;
            for i in 0..m {
                y[i] += w * v[i];
            }
        }
        for (_, w) in active.iter_mut() {
            *w /= total;
        }
    }

    Err(Error::ConvergenceFailure {
        best,
        gap: best_gap,
        iterations: max_iter,
    })
}
