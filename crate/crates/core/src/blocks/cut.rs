use crate::error::{Error, Result};

/// Cut function of a single weighted edge. Its base polytope is the segment
/// `{t·e_u − t·e_v : |t| ≤ weight}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCutBlock {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl EdgeCutBlock {
    pub fn new(u: usize, v: usize, weight: f64) -> Result<Self> {
        if u == v {
            return Err(Error::InvalidBlock(format!("self-loop on element {u}")));
        }
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::InvalidBlock(format!(
                "edge ({u}, {v}) has weight {weight}; must be finite and >= 0"
            )));
        }
        Ok(EdgeCutBlock { u, v, weight })
    }

    /// Coefficient `t*` of the projection of `(a_u, a_v)` onto the segment.
    #[inline]
    pub fn project_coefficient(&self, a_u: f64, a_v: f64) -> f64 {
        (0.5 * (a_u - a_v)).clamp(-self.weight, self.weight)
    }

    /// Greedy vertex coefficient for `(x_u, x_v)`; ties go to the smaller
    /// element index.
    #[inline]
    pub fn greedy_coefficient(&self, x_u: f64, x_v: f64) -> f64 {
        let u_first = x_u > x_v || (x_u == x_v && self.u < self.v);
        if u_first {
            self.weight
        } else {
            -self.weight
        }
    }
}

/// Cut function of a matching: vertex-disjoint weighted edges. `B(F)` is the
/// product of the per-edge segments.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingCutBlock {
    edges: Vec<EdgeCutBlock>,
}

impl MatchingCutBlock {
    pub fn new(edges: Vec<EdgeCutBlock>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            for x in [e.u, e.v] {
                if !seen.insert(x) {
                    return Err(Error::InvalidBlock(format!(
                        "element {x} is covered by two edges of a matching"
                    )));
                }
            }
        }
        Ok(MatchingCutBlock { edges })
    }

    pub fn edges(&self) -> &[EdgeCutBlock] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }
}
