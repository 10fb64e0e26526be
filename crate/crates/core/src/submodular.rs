//! Set functions on a finite ground set `{0, .., n-1}`: oracles, Edmonds'
//! greedy algorithm, the Lovász extension, exhaustive minimization and
//! recovery of a discrete solution from a fractional point.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{ensure_finite, Error, Result};

/// Largest ground set for which subsets are enumerated or cached by bitmask.
pub const MAX_ENUMERATION: usize = 25;

/// Size of the ground set. Elements are the dense indices `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("ground set must be nonempty".into()));
        }
        Ok(GroundSet { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A subset of the ground set, stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    mask: Vec<bool>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset {
            mask: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        Subset { mask: vec![true; n] }
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Subset { mask }
    }

    /// Panics if an index is out of range.
    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mut mask = vec![false; n];
        for &i in indices {
            mask[i] = true;
        }
        Subset { mask }
    }

    /// Bit `i` of `bits` selects element `i`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Subset {
            mask: (0..n).map(|i| bits >> i & 1 == 1).collect(),
        }
    }

    pub fn to_bits(&self) -> u64 {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn ground_size(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn insert(&mut self, i: usize) {
        self.mask[i] = true;
    }

    pub fn remove(&mut self, i: usize) {
        self.mask[i] = false;
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }
}

/// Black-box access to a normalized set function `F` with `F(∅) = 0`.
///
/// Implementations must be safe to evaluate concurrently.
pub trait SubmodularOracle: Send + Sync {
    fn ground_size(&self) -> usize;

    fn eval(&self, set: &Subset) -> f64;

    /// Values of all prefixes of `order`: `out[j] = F({order[0], .., order[j-1]})`.
    ///
    /// The default makes `order.len() + 1` full evaluations. Oracles with a
    /// cheap marginal-gain rule should override it; Edmonds' greedy and the
    /// level-set sweep only go through this method.
    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        let mut set = Subset::empty(self.ground_size());
        let mut out = Vec::with_capacity(order.len() + 1);
        out.push(self.eval(&set));
        for &v in order {
            set.insert(v);
            out.push(self.eval(&set));
        }
        out
    }
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        (**self).eval(set)
    }
    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        (**self).prefix_values(order)
    }
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for Box<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        (**self).eval(set)
    }
    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        (**self).prefix_values(order)
    }
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for Arc<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        (**self).eval(set)
    }
    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        (**self).prefix_values(order)
    }
}

/// `w(A) = Σ_{i ∈ A} w_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Modular {
    pub weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Self {
        Modular { weights }
    }
}

impl SubmodularOracle for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn eval(&self, set: &Subset) -> f64 {
        self.weights
            .iter()
            .zip(set.mask())
            .filter(|(_, &b)| b)
            .map(|(w, _)| w)
            .sum()
    }

    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = vec![0.0];
        for &v in order {
            acc += self.weights[v];
            out.push(acc);
        }
        out
    }
}

/// Cut function of an undirected graph with nonnegative edge weights.
#[derive(Debug, Clone)]
pub struct CutFunction {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl CutFunction {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInput(format!("bad edge ({u}, {v}) for n = {n}")));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidInput(format!("edge weight {w} must be finite and >= 0")));
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        Ok(CutFunction {
            n,
            edges,
            adjacency,
        })
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }
}

impl SubmodularOracle for CutFunction {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, set: &Subset) -> f64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| set.contains(u) != set.contains(v))
            .map(|&(_, _, w)| w)
            .sum()
    }

    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        let mut inside = vec![false; self.n];
        let mut acc = 0.0;
        let mut out = vec![0.0];
        for &v in order {
            for &(u, w) in &self.adjacency[v] {
                if inside[u] {
                    acc -= w;
                } else {
                    acc += w;
                }
            }
            inside[v] = true;
            out.push(acc);
        }
        out
    }
}

/// `F(A) = scale · sqrt(Σ_{i ∈ A} c_i)` with `c ≥ 0`, `scale ≥ 0`: a concave
/// function of a nonnegative modular function, hence submodular.
#[derive(Debug, Clone)]
pub struct ConcaveOfModular {
    pub coefficients: Vec<f64>,
    pub scale: f64,
}

impl SubmodularOracle for ConcaveOfModular {
    fn ground_size(&self) -> usize {
        self.coefficients.len()
    }

    fn eval(&self, set: &Subset) -> f64 {
        let s: f64 = self
            .coefficients
            .iter()
            .zip(set.mask())
            .filter(|(_, &b)| b)
            .map(|(c, _)| c)
            .sum();
        self.scale * s.sqrt()
    }
}

/// Wraps a closure as an oracle. The closure receives the membership mask.
pub struct FnOracle<F> {
    n: usize,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&[bool]) -> f64 + Send + Sync,
{
    pub fn new(n: usize, f: F) -> Self {
        FnOracle { n, f }
    }
}

impl<F> SubmodularOracle for FnOracle<F>
where
    F: Fn(&[bool]) -> f64 + Send + Sync,
{
    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, set: &Subset) -> f64 {
        (self.f)(set.mask())
    }
}

/// Pointwise sum of oracles on a common ground set.
pub struct SumOracle {
    n: usize,
    terms: Vec<Arc<dyn SubmodularOracle>>,
}

impl SumOracle {
    pub fn new(n: usize, terms: Vec<Arc<dyn SubmodularOracle>>) -> Result<Self> {
        for t in &terms {
            if t.ground_size() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t.ground_size(),
                });
            }
        }
        Ok(SumOracle { n, terms })
    }
}

impl SubmodularOracle for SumOracle {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, set: &Subset) -> f64 {
        self.terms.iter().map(|t| t.eval(set)).sum()
    }

    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; order.len() + 1];
        for t in &self.terms {
            for (o, v) in out.iter_mut().zip(t.prefix_values(order)) {
                *o += v;
            }
        }
        out
    }
}

/// Caches evaluations keyed by bitmask. Ground sets above
/// [`MAX_ENUMERATION`] pass straight through to the inner oracle.
pub struct Memoized<O> {
    inner: O,
    cache: Mutex<HashMap<u32, f64>>,
}

impl<O: SubmodularOracle> Memoized<O> {
    pub fn new(inner: O) -> Self {
        Memoized {
            inner,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn cached_entries(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}

impl<O: SubmodularOracle> SubmodularOracle for Memoized<O> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn eval(&self, set: &Subset) -> f64 {
        if self.inner.ground_size() > MAX_ENUMERATION {
            return self.inner.eval(set);
        }
        let key = set.to_bits() as u32;
        if let Some(&v) = self.cache.lock().unwrap().get(&key) {
            return v;
        }
        let v = self.inner.eval(set);
        self.cache.lock().unwrap().insert(key, v);
        v
    }
}

/// A vertex of `B(F)` produced by the greedy algorithm, together with the
/// Lovász extension value `⟨w, x⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyVertex {
    pub w: Vec<f64>,
    pub value: f64,
}

/// Indices sorted by decreasing `x`, ties broken by increasing index.
pub fn descending_order(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));
    order
}

/// Edmonds' greedy algorithm: the maximizer of `⟨w, x⟩` over `B(F)`.
///
/// One sort plus a single [`SubmodularOracle::prefix_values`] call.
pub fn edmonds_greedy<O: SubmodularOracle + ?Sized>(f: &O, x: &[f64]) -> Result<GreedyVertex> {
    let n = f.ground_size();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    ensure_finite(x)?;
    let order = descending_order(x);
    let prefix = f.prefix_values(&order);
    let mut w = vec![0.0; n];
    let mut value = 0.0;
    for (j, &v) in order.iter().enumerate() {
        w[v] = prefix[j + 1] - prefix[j];
        value += w[v] * x[v];
    }
    Ok(GreedyVertex { w, value })
}

pub fn lovasz_extension<O: SubmodularOracle + ?Sized>(f: &O, x: &[f64]) -> Result<f64> {
    edmonds_greedy(f, x).map(|g| g.value)
}

/// Exhaustive minimization over all `2^n` subsets. Ties go to the smallest
/// bitmask.
pub fn brute_force_min<O: SubmodularOracle + ?Sized>(f: &O) -> Result<(Subset, f64)> {
    let n = f.ground_size();
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge {
            n,
            max: MAX_ENUMERATION,
        });
    }
    let mut best_bits = 0u64;
    let mut best = f.eval(&Subset::empty(n));
    for bits in 1..(1u64 << n) {
        let v = f.eval(&Subset::from_bits(n, bits));
        if v < best {
            best = v;
            best_bits = bits;
        }
    }
    Ok((Subset::from_bits(n, best_bits), best))
}

/// `{v : x(v) ≥ 0}`.
pub fn recover_discrete(x: &[f64]) -> Result<Subset> {
    ensure_finite(x)?;
    Ok(Subset::from_mask(x.iter().map(|&v| v >= 0.0).collect()))
}

/// Best of the nested level sets `{v : x(v) ≥ θ}`, including `∅`.
///
/// Ties go to the smaller set.
pub fn best_level_set<O: SubmodularOracle + ?Sized>(f: &O, x: &[f64]) -> Result<(Subset, f64)> {
    let n = f.ground_size();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    ensure_finite(x)?;
    let order = descending_order(x);
    let prefix = f.prefix_values(&order);
    let mut best_len = 0;
    let mut best = prefix[0];
    for j in 1..=n {
        // only cut between distinct values
        if j < n && x[order[j]] == x[order[j - 1]] {
            continue;
        }
        if prefix[j] < best {
            best = prefix[j];
            best_len = j;
        }
    }
    Ok((Subset::from_indices(n, &order[..best_len]), best))
}

/// Largest violation of `F(A+i) + F(A+j) ≥ F(A+i+j) + F(A)` over all `A` and
/// `i, j ∉ A`, together with `|F(∅)|`. Zero (up to rounding) for normalized
/// submodular functions.
pub fn submodularity_violation<O: SubmodularOracle + ?Sized>(f: &O) -> Result<f64> {
    let n = f.ground_size();
    if n > 16 {
        return Err(Error::TooLarge { n, max: 16 });
    }
    let values: Vec<f64> = (0..1u64 << n)
        .map(|bits| f.eval(&Subset::from_bits(n, bits)))
        .collect();
    let mut worst = values[0].abs();
    for a in 0..1usize << n {
        for i in 0..n {
            if a >> i & 1 == 1 {
                continue;
            }
            for j in i + 1..n {
                if a >> j & 1 == 1 {
                    continue;
                }
                let lhs = values[a | 1 << i] + values[a | 1 << j];
                let rhs = values[a | 1 << i | 1 << j] + values[a];
                worst = worst.max(rhs - lhs);
            }
        }
    }
    Ok(worst)
}
