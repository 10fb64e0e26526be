//! Solvers for `min ‖Σ_i y_i‖²` over `y_i ∈ B(F_i)`, duality gaps and
//! convergence traces.
//!
//! All solvers count work in base-polytope projections. RCDM makes one per
//! iteration, APPROX/ACDM one in expectation, AP makes `r`.

mod ap;
mod approx;
mod gaps;
mod iterate;
mod rcdm;
mod trace;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use ap::ap_run;
pub use approx::{acdm_epoch_len, acdm_run, approx_run, next_theta, ApproxRun, ApproxState};
pub use gaps::{discrete_gap, gaps, primal_dual_values, smooth_gap, Gaps};
pub use iterate::{project_zero_sum, BlockVectors, DualIterate};
pub use rcdm::{rcdm_run, rcdm_step, rcdm_step_with};
pub use trace::{GapTrace, TraceRecord};

use crate::blocks::Block;
use crate::error::{Error, Result};
use crate::submodular::{Subset, SubmodularOracle};

/// Coordinate-wise Lipschitz constant of `∇_i g` for `g(y) = ‖Σ_i y_i‖²`.
pub const BLOCK_LIPSCHITZ: f64 = 2.0;

/// `F = Σ_i F_i` on a ground set of size `n`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    n: usize,
    blocks: Vec<Block>,
}

impl Decomposition {
    pub fn new(n: usize, blocks: Vec<Block>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("ground set must be nonempty".into()));
        }
        if blocks.is_empty() {
            return Err(Error::InvalidInput("decomposition needs at least one block".into()));
        }
        for b in &blocks {
            if b.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: b.n(),
                });
            }
        }
        Ok(Decomposition { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Every block starts at its greedy vertex for `x = 0`.
    pub fn initial_point(&self) -> DualIterate {
        let local = self.blocks.iter().map(Block::initial_local).collect();
        DualIterate::new(self, local).expect("block shapes match")
    }

    /// `Σ_i f_i(x)` for a dense `x`.
    pub fn lovasz(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        self.blocks.iter().map(|b| b.lovasz_local(&b.gather(x))).sum()
    }
}

impl SubmodularOracle for Decomposition {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, set: &Subset) -> f64 {
        self.blocks.iter().map(|b| b.eval(set)).sum()
    }

    fn prefix_values(&self, order: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; order.len() + 1];
        for b in &self.blocks {
            for (o, v) in out.iter_mut().zip(b.prefix_values(order)) {
                *o += v;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Rcdm,
    Acdm,
    Ap,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::Rcdm, SolverKind::Acdm, SolverKind::Ap];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Rcdm => "rcdm",
            SolverKind::Acdm => "acdm",
            SolverKind::Ap => "ap",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rcdm" => Ok(SolverKind::Rcdm),
            "acdm" => Ok(SolverKind::Acdm),
            "ap" => Ok(SolverKind::Ap),
            other => Err(Error::InvalidInput(format!("unknown solver '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub seed: u64,
    pub max_projections: u64,
    /// Stop once `ν_s` is at most this value.
    pub gap_tol: f64,
    /// Gaps are evaluated (and recorded) every this many projections.
    pub trace_every: u64,
    /// If set, convergence additionally requires `ν_d ≤ discrete_tol`.
    pub discrete_tol: Option<f64>,
    /// Stop as soon as `ν_d ≤ discrete_tol`, whatever `ν_s` is.
    pub discrete_early_exit: bool,
    /// Overrides the ACDM epoch length `⌈4 n r^{3/2}⌉ + 1`.
    pub epoch_len: Option<u64>,
    /// Step constant of the RCDM block update.
    pub lipschitz: f64,
    /// Record wall-clock seconds in traces. Off by default so that traces
    /// are reproducible byte for byte.
    pub record_time: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            max_projections: 1_000_000,
            gap_tol: 1e-6,
            trace_every: 100,
            discrete_tol: None,
            discrete_early_exit: false,
            epoch_len: None,
            lipschitz: BLOCK_LIPSCHITZ,
            record_time: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_projections == 0 || self.trace_every == 0 {
            return Err(Error::InvalidInput(
                "max_projections and trace_every must be positive".into(),
            ));
        }
        if !(self.gap_tol >= 0.0) {
            return Err(Error::InvalidInput(format!("gap_tol {} must be >= 0", self.gap_tol)));
        }
        if let Some(t) = self.discrete_tol {
            if !(t >= 0.0) {
                return Err(Error::InvalidInput(format!("discrete_tol {t} must be >= 0")));
            }
        }
        if self.epoch_len == Some(0) {
            return Err(Error::InvalidInput("epoch length must be positive".into()));
        }
        if !(self.lipschitz > 0.0) {
            return Err(Error::InvalidInput("lipschitz constant must be positive".into()));
        }
        Ok(())
    }

    fn converged(&self, g: &Gaps) -> bool {
        let smooth = g.nu_s <= self.gap_tol;
        match self.discrete_tol {
            None => smooth,
            Some(t) => {
                let discrete = g.nu_d <= t;
                (smooth && discrete) || (self.discrete_early_exit && discrete)
            }
        }
    }
}

/// Outcome of a solver run. Running out of budget is not an error; it shows
/// up as `converged == false`.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub iterate: DualIterate,
    pub trace: GapTrace,
    pub converged: bool,
    pub projections: u64,
    pub gaps: Gaps,
}

impl SolveResult {
    pub fn primal(&self, d: &Decomposition) -> Vec<f64> {
        self.iterate.primal(d)
    }
}

pub fn run_solver(
    kind: SolverKind,
    d: &Decomposition,
    cfg: &SolverConfig,
    y0: DualIterate,
) -> Result<SolveResult> {
    match kind {
        SolverKind::Rcdm => rcdm_run(d, cfg, y0),
        SolverKind::Acdm => acdm_run(d, cfg, y0),
        SolverKind::Ap => ap_run(d, cfg, y0, None),
    }
}

/// ChaCha8 stream `stream` of `seed`. RCDM draws from stream 0, ACDM epoch
/// `ℓ` from stream `ℓ + 1`, so every epoch can be replayed on its own.
pub fn solver_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Evaluates gaps at trace points and decides when to stop.
pub(crate) struct Tracer<'a> {
    cfg: &'a SolverConfig,
    start: Instant,
    trace: GapTrace,
    next: u64,
}

impl<'a> Tracer<'a> {
    pub(crate) fn new(cfg: &'a SolverConfig) -> Self {
        Tracer {
            cfg,
            start: Instant::now(),
            trace: GapTrace::default(),
            next: 0,
        }
    }

    /// True when a record is due at `done` projections.
    pub(crate) fn due(&self, done: u64) -> bool {
        done >= self.next || done >= self.cfg.max_projections
    }

    pub(crate) fn exhausted(&self, done: u64) -> bool {
        done >= self.cfg.max_projections
    }

    /// Records the gaps of `y`; returns them and whether the run may stop.
    pub(crate) fn record(&mut self, d: &Decomposition, done: u64, y: &DualIterate) -> Result<(Gaps, bool)> {
        let g = gaps(d, y)?;
        let seconds = if self.cfg.record_time {
            self.start.elapsed().as_secs_f64()
        } else {
            0.0
        };
        self.trace.push(TraceRecord {
            projections: done,
            nu_s: g.nu_s,
            nu_d: g.nu_d,
            g: g.g,
            seconds,
        });
        while self.next <= done {
            self.next += self.cfg.trace_every;
        }
        let stop = self.cfg.converged(&g);
        Ok((g, stop))
    }

    pub(crate) fn finish(self, iterate: DualIterate, gaps: Gaps, converged: bool, projections: u64) -> SolveResult {
        SolveResult {
            iterate,
            trace: self.trace,
            converged,
            projections,
            gaps,
        }
    }
}
