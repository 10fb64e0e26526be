use rand::Rng;

use super::{solver_rng, Decomposition, DualIterate, SolveResult, SolverConfig, Tracer, BLOCK_LIPSCHITZ};
use crate::error::{Error, Result};

/// One RCDM block update with step constant `L = 2`:
/// `y_i ← Π_{B(F_i)}(y_i − Σ_j y_j) = Π_{B(F_i)}(−Σ_{j≠i} y_j)`.
pub fn rcdm_step(d: &Decomposition, y: &mut DualIterate, i: usize) -> Result<()> {
    rcdm_step_with(d, y, i, BLOCK_LIPSCHITZ)
}

/// Block update `argmin_{v ∈ B(F_i)} ⟨∇_i g(y), v − y_i⟩ + (L/2)‖v − y_i‖²`,
/// i.e. the projection of `y_i − ∇_i g(y)/L`.
pub fn rcdm_step_with(d: &Decomposition, y: &mut DualIterate, i: usize, lipschitz: f64) -> Result<()> {
    if i >= d.r() {
        return Err(Error::InvalidInput(format!("block index {i} out of range (r = {})", d.r())));
    }
    let b = &d.blocks()[i];
    let step = 2.0 / lipschitz;
    let target: Vec<f64> = b
        .support()
        .iter()
        .zip(y.block(i))
        .map(|(&v, &yi)| yi - step * y.sum()[v])
        .collect();
    let mut next = vec![0.0; target.len()];
    b.project_local(&target, &mut next)?;
    y.set_block(d, i, &next);
    Ok(())
}

/// Random block coordinate descent: one uniformly random block per
/// iteration, one projection per iteration.
pub fn rcdm_run(d: &Decomposition, cfg: &SolverConfig, y0: DualIterate) -> Result<SolveResult> {
    cfg.validate()?;
    let mut rng = solver_rng(cfg.seed, 0);
    let mut tracer = Tracer::new(cfg);
    let mut y = y0;
    let mut done = 0u64;
    let (mut gaps, mut stop) = tracer.record(d, 0, &y)?;
    while !stop && !tracer.exhausted(done) {
        let i = rng.gen_range(0..d.r());
        rcdm_step_with(d, &mut y, i, cfg.lipschitz)?;
        done += 1;
        if tracer.due(done) {
            y.refresh(d);
            (gaps, stop) = tracer.record(d, done, &y)?;
        }
    }
    Ok(tracer.finish(y, gaps, stop, done))
}
