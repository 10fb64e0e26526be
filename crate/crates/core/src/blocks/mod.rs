//! Simple submodular functions with fast projection oracles onto their base
//! polytopes.
//!
//! A [`Block`] only touches the elements in its support. Block-level vectors
//! (projections, greedy vertices, dual blocks) are stored locally, indexed by
//! position in the sorted support; all other coordinates are implicitly zero.

mod cut;
mod generic;

pub use cut::{EdgeCutBlock, MatchingCutBlock};
pub use generic::{project_conditional_gradient, GenericBlock, DEFAULT_TOL};

use crate::error::{ensure_finite, Error, Result};
use crate::submodular::{edmonds_greedy, GreedyVertex, Subset, SubmodularOracle};

/// `B(F) = {w}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularBlock {
    pub w: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum BlockKind {
    Edge(EdgeCutBlock),
    Matching(MatchingCutBlock),
    Modular(ModularBlock),
    Generic(GenericBlock),
}

#[derive(Debug, Clone, Copy)]
struct CutSlot {
    pu: usize,
    pv: usize,
    edge: EdgeCutBlock,
}

/// One term `F_i` of a decomposition, on a ground set of size `n`.
#[derive(Debug, Clone)]
pub struct Block {
    n: usize,
    support: Vec<usize>,
    kind: BlockKind,
    slots: Vec<CutSlot>,
    // local position -> slot, for cut blocks
    slot_of: Vec<usize>,
}

impl Block {
    pub fn edge(n: usize, edge: EdgeCutBlock) -> Result<Self> {
        Self::cut(n, vec![edge], BlockKind::Edge(edge))
    }

    pub fn matching(n: usize, matching: MatchingCutBlock) -> Result<Self> {
        let edges = matching.edges().to_vec();
        Self::cut(n, edges, BlockKind::Matching(matching))
    }

    fn cut(n: usize, edges: Vec<EdgeCutBlock>, kind: BlockKind) -> Result<Self> {
        let mut support: Vec<usize> = Vec::with_capacity(2 * edges.len());
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidBlock(format!(
                    "edge ({}, {}) outside ground set of size {n}",
                    e.u, e.v
                )));
            }
            support.push(e.u);
            support.push(e.v);
        }
        support.sort_unstable();
        if support.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBlock("cut block edges share an endpoint".into()));
        }
        let local = |x: usize| support.binary_search(&x).expect("endpoint is in support");
        let slots: Vec<CutSlot> = edges
            .iter()
            .map(|&edge| CutSlot {
                pu: local(edge.u),
                pv: local(edge.v),
                edge,
            })
            .collect();
        let mut slot_of = vec![0; support.len()];
        for (k, s) in slots.iter().enumerate() {
            slot_of[s.pu] = k;
            slot_of[s.pv] = k;
        }
        Ok(Block {
            n,
            support,
            kind,
            slots,
            slot_of,
        })
    }

    pub fn modular(w: Vec<f64>) -> Result<Self> {
        ensure_finite(&w)?;
        if w.is_empty() {
            return Err(Error::InvalidBlock("modular block on an empty ground set".into()));
        }
        Ok(Block {
            n: w.len(),
            support: (0..w.len()).collect(),
            kind: BlockKind::Modular(ModularBlock { w }),
            slots: Vec::new(),
            slot_of: Vec::new(),
        })
    }

    /// `support` lists the elements the oracle acts on; its ground set is
    /// identified with `support` in sorted order.
    pub fn generic(n: usize, mut support: Vec<usize>, block: GenericBlock) -> Result<Self> {
        support.sort_unstable();
        support.dedup();
        if support.len() != block.oracle().ground_size() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                found: block.oracle().ground_size(),
            });
        }
        if support.last().is_some_and(|&m| m >= n) {
            return Err(Error::InvalidBlock(format!("support exceeds ground set of size {n}")));
        }
        let empty = block.oracle().eval(&Subset::empty(support.len()));
        if empty.abs() > 1e-12 {
            return Err(Error::InvalidBlock(format!("oracle is not normalized: F(∅) = {empty}")));
        }
        Ok(Block {
            n,
            support,
            kind: BlockKind::Generic(block),
            slots: Vec::new(),
            slot_of: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &BlockKind {
        &self.kind
    }

    /// Sorted global indices of the elements this block acts on.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn gather(&self, dense: &[f64]) -> Vec<f64> {
        self.support.iter().map(|&i| dense[i]).collect()
    }

    /// Adds `scale · local` into the dense vector.
    pub fn scatter_add(&self, local: &[f64], scale: f64, dense: &mut [f64]) {
        for (&i, &v) in self.support.iter().zip(local) {
            dense[i] += scale * v;
        }
    }

    pub fn to_dense(&self, local: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.scatter_add(local, 1.0, &mut out);
        out
    }

    /// Euclidean projection of the local vector `a` onto `B(F)`.
    pub fn project_local(&self, a: &[f64], out: &mut [f64]) -> Result<()> {
        match &self.kind {
            BlockKind::Edge(_) | BlockKind::Matching(_) => {
                for s in &self.slots {
                    let t = s.edge.project_coefficient(a[s.pu], a[s.pv]);
                    out[s.pu] = t;
                    out[s.pv] = -t;
                }
            }
            BlockKind::Modular(m) => out.copy_from_slice(&m.w),
            BlockKind::Generic(g) => out.copy_from_slice(&g.project(a)?),
        }
        Ok(())
    }

    /// `argmin_{y ∈ B(F)} ⟨y, a⟩ + ‖y‖²`, i.e. the projection of `−a/2`.
    pub fn prox_local(&self, a: &[f64], out: &mut [f64]) -> Result<()> {
        let shifted: Vec<f64> = a.iter().map(|v| -0.5 * v).collect();
        self.project_local(&shifted, out)
    }

    /// Greedy vertex of `B(F)` for the local direction `x`.
    pub fn greedy_local(&self, x: &[f64]) -> Result<GreedyVertex> {
        match &self.kind {
            BlockKind::Edge(_) | BlockKind::Matching(_) => {
                ensure_finite(x)?;
                let mut w = vec![0.0; self.support.len()];
                let mut value = 0.0;
                for s in &self.slots {
                    let t = s.edge.greedy_coefficient(x[s.pu], x[s.pv]);
                    w[s.pu] = t;
                    w[s.pv] = -t;
                    value += t * (x[s.pu] - x[s.pv]);
                }
                Ok(GreedyVertex { w, value })
            }
            BlockKind::Modular(m) => {
                ensure_finite(x)?;
                let value = m.w.iter().zip(x).map(|(a, b)| a * b).sum();
                Ok(GreedyVertex { w: m.w.clone(), value })
            }
            BlockKind::Generic(g) => edmonds_greedy(g.oracle(), x),
        }
    }

    /// Lovász extension of this block at the local point `x`.
    pub fn lovasz_local(&self, x: &[f64]) -> Result<f64> {
        match &self.kind {
            BlockKind::Edge(_) | BlockKind::Matching(_) => {
                ensure_finite(x)?;
                Ok(self
                    .slots
                    .iter()
                    .map(|s| s.edge.weight * (x[s.pu] - x[s.pv]).abs())
                    .sum())
            }
            _ => self.greedy_local(x).map(|g| g.value),
        }
    }

    /// Feasible starting point: the greedy vertex for `x = 0`.
    pub fn initial_local(&self) -> Vec<f64> {
        self.greedy_local(&vec![0.0; self.support.len()])
            .expect("zero direction is finite")
            .w
    }

    /// Evaluates `F` on a mask over the support.
    pub fn eval_local(&self, mask: &[bool]) -> f64 {
        match &self.kind {
            BlockKind::Edge(_) | BlockKind::Matching(_) => self
                .slots
                .iter()
                .filter(|s| mask[s.pu] != mask[s.pv])
                .map(|s| s.edge.weight)
                .sum(),
            BlockKind::Modular(m) => m
                .w
                .iter()
                .zip(mask)
                .filter(|(_, &b)| b)
                .map(|(w, _)| w)
                .sum(),
            BlockKind::Generic(g) => g.oracle().eval(&Subset::from_mask(mask.to_vec())),
        }
    }

    /// Largest violation of the base-polytope constraints by the local vector
    /// `y`: for cut and modular blocks exactly, for generic blocks by
    /// enumerating subsets of the support. `None` when the support is too
    /// large to enumerate.
    pub fn membership_violation(&self, y: &[f64]) -> Option<f64> {
        match &self.kind {
            BlockKind::Edge(_) | BlockKind::Matching(_) => Some(
                self.slots
                    .iter()
                    .map(|s| (y[s.pu] + y[s.pv]).abs().max(y[s.pu].abs() - s.edge.weight))
                    .fold(0.0, f64::max),
            ),
            BlockKind::Modular(m) => Some(
                m.w.iter()
                    .zip(y)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max),
            ),
            BlockKind::Generic(g) => {
                let k = self.support.len();
                if k > 16 {
                    return None;
                }
                let mut worst: f64 = 0.0;
                for bits in 1..1u64 << k {
                    let set = Subset::from_bits(k, bits);
                    let ys: f64 = set.indices().iter().map(|&p| y[p]).sum();
                    let fv = g.oracle().eval(&set);
                    worst = worst.max(ys - fv);
                    if bits == (1 << k) - 1 {
                        worst = worst.max((ys - fv).abs());
                    }
                }
                Some(worst)
            }
        }
    }

    /// Projection of a dense vector; the result is dense as well.
    pub fn project(&self, a: &[f64]) -> Result<Vec<f64>> {
        self.check_len(a)?;
        let mut out = vec![0.0; self.support.len()];
        self.project_local(&self.gather(a), &mut out)?;
        Ok(self.to_dense(&out))
    }

    fn check_len(&self, a: &[f64]) -> Result<()> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: a.len(),
            });
        }
        ensure_finite(a)
    }

    fn local_position(&self, v: usize) -> Option<usize> {
        self.support.binary_search(&v).ok()
    }
}

impl SubmodularOracle for Block {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, set: &Subset) -> f64 {
        let mask: Vec<bool> = self.support.iter().map(|&i| set.contains(i)).collect();
        self.eval_local(&mask)
    }

    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        let mut out = Vec::with_capacity(order.len() + 1);
        out.push(0.0);
        match &self.kind {
            BlockKind::Edge(_) | BlockKind::Matching(_) => {
                let mut inside = vec![false; self.support.len()];
                let mut acc = 0.0;
                for &v in order {
                    if let Some(p) = self.local_position(v) {
                        let s = &self.slots[self.slot_of[p]];
                        let other = if s.pu == p { s.pv } else { s.pu };
                        if inside[other] {
                            acc -= s.edge.weight;
                        } else {
                            acc += s.edge.weight;
                        }
                        inside[p] = true;
                    }
                    out.push(acc);
                }
            }
            BlockKind::Modular(m) => {
                let mut acc = 0.0;
                for &v in order {
                    acc += m.w[v];
                    out.push(acc);
                }
            }
            BlockKind::Generic(g) => {
                let local: Vec<usize> = order.iter().filter_map(|&v| self.local_position(v)).collect();
                let values = g.oracle().prefix_values(&local);
                let mut j = 0;
                for &v in order {
                    if self.local_position(v).is_some() {
                        j += 1;
                    }
                    out.push(values[j]);
                }
            }
        }
        out
    }
}

/// Projection onto the segment of a single edge. `a` and the result are dense.
pub fn project_edge(edge: &EdgeCutBlock, a: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    let t = edge.project_coefficient(a[edge.u], a[edge.v]);
    out[edge.u] = t;
    out[edge.v] = -t;
    out
}

/// Edge-wise projection; coordinates not covered by the matching are zero.
pub fn project_matching(matching: &MatchingCutBlock, a: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    for e in matching.edges() {
        let t = e.project_coefficient(a[e.u], a[e.v]);
        out[e.u] = t;
        out[e.v] = -t;
    }
    out
}

pub fn project_modular(block: &ModularBlock, _a: &[f64]) -> Vec<f64> {
    block.w.clone()
}

pub fn project_generic(block: &GenericBlock, a: &[f64]) -> Result<Vec<f64>> {
    block.project(a)
}

/// `argmin_{y ∈ B(F)} ⟨y, a⟩ + ‖y‖²` for a dense `a`.
pub fn prox_block(block: &Block, a: &[f64]) -> Result<Vec<f64>> {
    block.check_len(a)?;
    let shifted: Vec<f64> = a.iter().map(|v| -0.5 * v).collect();
    block.project(&shifted)
}

#[cfg(test)]
mod tests;
