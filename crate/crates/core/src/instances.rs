//! Seeded instance generators.
//!
//! Synthetic instances are `r − 1` random matching-cut blocks plus one
//! modular block. Each matching pairs up a fresh random shuffle of the
//! ground set (`⌊n/2⌋` edges) with weights uniform in `[0, 2]`; the modular
//! weights are uniform in `[−3, 3]`. Everything is drawn from a ChaCha8
//! generator seeded with `seed`, in that order, so an instance is reproduced
//! by `(n, r, seed)` alone.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::{Block, EdgeCutBlock, MatchingCutBlock};
use crate::error::{Error, Result};
use crate::solvers::{Decomposition, DualIterate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub r: usize,
    pub seed: u64,
}

impl fmt::Display for SyntheticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},r={},seed={}", self.n, self.r, self.seed)
    }
}

/// Parses `n=6,r=3,seed=1`; `seed` is optional and defaults to 0.
impl FromStr for SyntheticSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut r = None;
        let mut seed = 0;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected key=value, got '{part}'")))?;
            let bad = |_| Error::InvalidInput(format!("bad value for '{key}': '{value}'"));
            match key.trim() {
                "n" => n = Some(value.trim().parse::<usize>().map_err(bad)?),
                "r" => r = Some(value.trim().parse::<usize>().map_err(bad)?),
                "seed" => seed = value.trim().parse::<u64>().map_err(bad)?,
                other => return Err(Error::InvalidInput(format!("unknown key '{other}'"))),
            }
        }
        let spec = SyntheticSpec {
            n: n.ok_or_else(|| Error::InvalidInput("missing n".into()))?,
            r: r.ok_or_else(|| Error::InvalidInput("missing r".into()))?,
            seed,
        };
        if spec.n < 1 || spec.r < 1 {
            return Err(Error::InvalidInput("n and r must be at least 1".into()));
        }
        Ok(spec)
    }
}

pub fn synthetic(spec: SyntheticSpec) -> Result<Decomposition> {
    let SyntheticSpec { n, r, seed } = spec;
    if n == 0 || r == 0 {
        return Err(Error::InvalidInput("n and r must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::with_capacity(r);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 1..r {
        order.shuffle(&mut rng);
        let edges = order
            .chunks_exact(2)
            .map(|p| EdgeCutBlock::new(p[0].min(p[1]), p[0].max(p[1]), rng.gen_range(0.0..=2.0)))
            .collect::<Result<Vec<_>>>()?;
        blocks.push(Block::matching(n, MatchingCutBlock::new(edges)?)?);
    }
    let w = (0..n).map(|_| rng.gen_range(-3.0..=3.0)).collect();
    blocks.push(Block::modular(w)?);
    Decomposition::new(n, blocks)
}

/// `n = 2`, `r = 2`: one unit edge plus the modular block `(0.5, −0.5)`.
/// The optimum `y* = ((−0.5, 0.5), (0.5, −0.5))` is unique, with `g(y*) = 0`.
pub fn unique_pair() -> Decomposition {
    let edge = EdgeCutBlock::new(0, 1, 1.0).expect("valid edge");
    Decomposition::new(
        2,
        vec![
            Block::edge(2, edge).expect("valid edge"),
            Block::modular(vec![0.5, -0.5]).expect("finite weights"),
        ],
    )
    .expect("valid decomposition")
}

/// `n = 4`, `r = 3`: the path `0 − 1 − 2 − 3` split into the matchings
/// `{01, 23}` and `{12}`, plus a modular block. Edge flows on a forest are
/// determined by the block sum, so the optimum is unique.
pub fn unique_path() -> Decomposition {
    let e = |u, v, w| EdgeCutBlock::new(u, v, w).expect("valid edge");
    let m1 = MatchingCutBlock::new(vec![e(0, 1, 1.0), e(2, 3, 0.8)]).expect("disjoint");
    let m2 = MatchingCutBlock::new(vec![e(1, 2, 0.6)]).expect("disjoint");
    Decomposition::new(
        4,
        vec![
            Block::matching(4, m1).expect("valid matching"),
            Block::matching(4, m2).expect("valid matching"),
            Block::modular(vec![1.5, -0.5, 0.25, -2.0]).expect("finite weights"),
        ],
    )
    .expect("valid decomposition")
}

/// A random feasible dual point: each block is a convex combination of
/// one to three greedy vertices at Gaussian-like random directions.
pub fn random_feasible<R: Rng + ?Sized>(d: &Decomposition, rng: &mut R) -> Result<DualIterate> {
    let mut local = Vec::with_capacity(d.r());
    for b in d.blocks() {
        let k = rng.gen_range(1..=3);
        let weights: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        let mut y = vec![0.0; b.support().len()];
        for w in weights {
            let x: Vec<f64> = (0..y.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v = b.greedy_local(&x)?;
            for (yi, vi) in y.iter_mut().zip(&v.w) {
                *yi += w / total * vi;
            }
        }
        local.push(y);
    }
    DualIterate::new(d, local)
}
