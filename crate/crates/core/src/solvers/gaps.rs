use super::{Decomposition, DualIterate};
use crate::error::Result;
use crate::submodular::{best_level_set, Subset, SubmodularOracle};

/// Optimality certificates of a feasible dual point.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaps {
    /// Smooth gap between `f(x) + ½‖x‖²` and `−½‖Σ_i y_i‖²`.
    pub nu_s: f64,
    /// Discrete gap `F(S_x) − Σ_v min(z_v, 0)` with `z = Σ_i y_i`.
    pub nu_d: f64,
    /// `g(y) = ‖Σ_i y_i‖²`.
    pub g: f64,
    /// Best level set `S_x` of `x = −Σ_i y_i` and its value `F(S_x)`.
    pub set: Subset,
    pub value: f64,
}

/// Primal value `f(x) + ½‖x‖²` at `x = −Σ_i y_i` and dual value
/// `−½‖Σ_i y_i‖²`.
pub fn primal_dual_values(d: &Decomposition, y: &DualIterate) -> Result<(f64, f64)> {
    let z = y.exact_sum(d);
    let x: Vec<f64> = z.iter().map(|v| -v).collect();
    let norm2: f64 = z.iter().map(|v| v * v).sum();
    let primal = d.lovasz(&x)? + 0.5 * norm2;
    Ok((primal, -0.5 * norm2))
}

/// `ν_s`, equal to `f(x) + ‖x‖²` at `x = −Σ_i y_i`.
pub fn smooth_gap(d: &Decomposition, y: &DualIterate) -> Result<f64> {
    let (primal, dual) = primal_dual_values(d, y)?;
    Ok(primal - dual)
}

pub fn discrete_gap(d: &Decomposition, y: &DualIterate) -> Result<f64> {
    gaps(d, y).map(|g| g.nu_d)
}

pub fn gaps(d: &Decomposition, y: &DualIterate) -> Result<Gaps> {
    let z = y.exact_sum(d);
    let x: Vec<f64> = z.iter().map(|v| -v).collect();
    let norm2: f64 = z.iter().map(|v| v * v).sum();
    let nu_s = d.lovasz(&x)? + norm2;
    let (set, _) = best_level_set(d, &x)?;
    // re-evaluated directly so the value does not depend on the prefix order
    // `+ 0.0` turns a negative zero into a positive one
    let value = d.eval(&set) + 0.0;
    let negative_part: f64 = z.iter().map(|&v| v.min(0.0)).sum();
    Ok(Gaps {
        nu_s,
        nu_d: value - negative_part + 0.0,
        g: norm2,
        set,
        value,
    })
}
