//! APPROX (accelerated parallel proximal coordinate descent) specialised to
//! the dual proximal problem, and the epoch-restarted ACDM built on it.
//!
//! The iterate is kept in the `(u, z)` form: the point of interest is
//! `θ² u + z`, and `∇_i g(θ² u + z) = 2(θ² Σ_j u_j + Σ_j z_j)`, so two cached
//! sums suffice for each block update.

use rand::Rng;

use super::{solver_rng, Decomposition, DualIterate, SolveResult, SolverConfig, Tracer};
use crate::error::{Error, Result};

/// `θ_{k+1} = (√(θ_k⁴ + 4θ_k²) − θ_k²) / 2`.
pub fn next_theta(theta: f64) -> f64 {
    let t2 = theta * theta;
    0.5 * ((t2 * t2 + 4.0 * t2).sqrt() - t2)
}

/// Epoch length `⌈4 n r^{3/2}⌉ + 1`.
pub fn acdm_epoch_len(n: usize, r: usize) -> u64 {
    (4.0 * n as f64 * (r as f64).powf(1.5)).ceil() as u64 + 1
}

#[derive(Debug, Clone)]
pub struct ApproxState {
    z: DualIterate,
    u: Vec<Vec<f64>>,
    u_sum: Vec<f64>,
    theta: f64,
    // θ of the most recent iteration; the returned point uses it
    last_theta: f64,
    iterations: u64,
    updates: usize,
}

impl ApproxState {
    /// Starts at `z_0` with `θ_0 = 1/r` and `u_0 = 0`.
    pub fn new(d: &Decomposition, z0: DualIterate) -> Self {
        let theta = 1.0 / d.r() as f64;
        ApproxState {
            u: d.blocks().iter().map(|b| vec![0.0; b.support().len()]).collect(),
            u_sum: vec![0.0; d.n()],
            z: z0,
            theta,
            last_theta: theta,
            iterations: 0,
            updates: 0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// One APPROX iteration. Returns the number of projections (`|R_k|`).
    pub fn step<R: Rng + ?Sized>(&mut self, d: &Decomposition, rng: &mut R) -> Result<u64> {
        let r = d.r();
        let p = 1.0 / r as f64;
        let sampled: Vec<usize> = (0..r).filter(|_| rng.gen::<f64>() < p).collect();

        let theta = self.theta;
        let t2 = theta * theta;
        let scale = 1.0 / (4.0 * r as f64 * theta);
        let u_coef = (1.0 - r as f64 * theta) / t2;

        // every block in R_k sees the gradient at the start of the iteration
        let mut moves = Vec::with_capacity(sampled.len());
        for &i in &sampled {
            let b = &d.blocks()[i];
            let target: Vec<f64> = b
                .support()
                .iter()
                .zip(self.z.block(i))
                .map(|(&v, &zi)| {
                    let grad = 2.0 * (t2 * self.u_sum[v] + self.z.sum()[v]);
                    zi - scale * grad
                })
                .collect();
            let mut next = vec![0.0; target.len()];
            b.project_local(&target, &mut next)?;
            moves.push((i, next));
        }
        for (i, next) in moves {
            let b = &d.blocks()[i];
            for ((&v, ui), (&zn, &zo)) in b
                .support()
                .iter()
                .zip(self.u[i].iter_mut())
                .zip(next.iter().zip(self.z.block(i)))
            {
                let t = zn - zo;
                *ui -= u_coef * t;
                self.u_sum[v] -= u_coef * t;
            }
            self.z.set_block(d, i, &next);
            self.updates += 1;
        }
        if self.updates >= d.n() * r {
            self.refresh_u_sum(d);
        }

        self.last_theta = theta;
        self.theta = next_theta(theta);
        self.iterations += 1;
        Ok(sampled.len() as u64)
    }

    fn refresh_u_sum(&mut self, d: &Decomposition) {
        self.u_sum.iter_mut().for_each(|v| *v = 0.0);
        for (b, u) in d.blocks().iter().zip(&self.u) {
            b.scatter_add(u, 1.0, &mut self.u_sum);
        }
        self.updates = 0;
    }

    /// `θ_k² u_{k+1} + z_{k+1}`, with `θ_k` the θ used by the latest
    /// iteration.
    pub fn point(&self, d: &Decomposition) -> DualIterate {
        let t2 = self.last_theta * self.last_theta;
        let local = self
            .u
            .iter()
            .zip(self.z.blocks())
            .map(|(u, z)| u.iter().zip(z).map(|(a, b)| t2 * a + b).collect())
            .collect();
        DualIterate::new(d, local).expect("block shapes match")
    }
}

#[derive(Debug, Clone)]
pub struct ApproxRun {
    pub point: DualIterate,
    /// `θ_k` used in each iteration.
    pub thetas: Vec<f64>,
    pub projections: u64,
}

pub fn approx_run<R: Rng + ?Sized>(
    d: &Decomposition,
    z0: DualIterate,
    iters: u64,
    rng: &mut R,
) -> Result<ApproxRun> {
    if iters == 0 {
        return Err(Error::InvalidInput("APPROX needs at least one iteration".into()));
    }
    let mut state = ApproxState::new(d, z0);
    let mut thetas = Vec::with_capacity(iters as usize);
    let mut projections = 0;
    for _ in 0..iters {
        thetas.push(state.theta());
        projections += state.step(d, rng)?;
    }
    Ok(ApproxRun {
        point: state.point(d),
        thetas,
        projections,
    })
}

/// Accelerated coordinate descent: APPROX restarted every epoch from the
/// previous epoch's output. Gaps at intermediate trace points are those of
/// the current APPROX point `θ_k² u_{k+1} + z_{k+1}`.
pub fn acdm_run(d: &Decomposition, cfg: &SolverConfig, y0: DualIterate) -> Result<SolveResult> {
    cfg.validate()?;
    let epoch_len = cfg.epoch_len.unwrap_or_else(|| acdm_epoch_len(d.n(), d.r()));
    let mut tracer = Tracer::new(cfg);
    let mut done = 0u64;
    let (mut gaps, mut stop) = tracer.record(d, 0, &y0)?;
    let mut y = y0;
    let mut epoch = 0u64;
    while !stop && !tracer.exhausted(done) {
        let mut rng = solver_rng(cfg.seed, epoch + 1);
        let mut state = ApproxState::new(d, y);
        let mut current = None;
        for _ in 0..epoch_len {
            let before = done;
            done += state.step(d, &mut rng)?;
            if done > before && tracer.due(done) {
                let p = state.point(d);
                (gaps, stop) = tracer.record(d, done, &p)?;
                current = Some(p);
                if stop || tracer.exhausted(done) {
                    break;
                }
            } else {
                current = None;
            }
        }
        y = current.unwrap_or_else(|| state.point(d));
        epoch += 1;
    }
    Ok(tracer.finish(y, gaps, stop, done))
}
