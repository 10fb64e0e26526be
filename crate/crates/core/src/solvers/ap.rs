use super::{project_zero_sum, BlockVectors, Decomposition, DualIterate, SolveResult, SolverConfig, Tracer};
use crate::error::{Error, Result};

/// Alternating projections between `𝒴 = Π_i B(F_i)` and
/// `𝒜 = {a : Σ_i a_i = 0}`: `y_k = Π_𝒴(a_k)`, `a_{k+1} = Π_𝒜(y_k)`.
///
/// `a0` defaults to zero. `y0` is only used for the trace record at zero
/// projections so that all solvers share the same starting gap.
pub fn ap_run(
    d: &Decomposition,
    cfg: &SolverConfig,
    y0: DualIterate,
    a0: Option<BlockVectors>,
) -> Result<SolveResult> {
    cfg.validate()?;
    let r = d.r() as u64;
    let mut a = match a0 {
        Some(a) => {
            check_zero_sum(d, &a)?;
            a
        }
        None => vec![vec![0.0; d.n()]; d.r()],
    };
    let mut tracer = Tracer::new(cfg);
    let mut y = y0;
    let mut done = 0u64;
    let (mut gaps, mut stop) = tracer.record(d, 0, &y)?;
    while !stop && !tracer.exhausted(done) {
        for (i, b) in d.blocks().iter().enumerate() {
            let mut next = vec![0.0; b.support().len()];
            b.project_local(&b.gather(&a[i]), &mut next)?;
            y.set_block(d, i, &next);
        }
        done += r;
        a = project_zero_sum(&y.to_dense(d));
        if tracer.due(done) {
            y.refresh(d);
            (gaps, stop) = tracer.record(d, done, &y)?;
        }
    }
    Ok(tracer.finish(y, gaps, stop, done))
}

fn check_zero_sum(d: &Decomposition, a: &[Vec<f64>]) -> Result<()> {
    if a.len() != d.r() || a.iter().any(|b| b.len() != d.n()) {
        return Err(Error::DimensionMismatch {
            expected: d.r() * d.n(),
            found: a.iter().map(Vec::len).sum(),
        });
    }
    for v in 0..d.n() {
        let s: f64 = a.iter().map(|b| b[v]).sum();
        let scale: f64 = a.iter().map(|b| b[v].abs()).sum::<f64>().max(1.0);
        if s.abs() > 1e-9 * scale {
            return Err(Error::InvalidInput(format!(
                "starting point is not in the zero-sum subspace (coordinate {v} sums to {s})"
            )));
        }
    }
    Ok(())
}
