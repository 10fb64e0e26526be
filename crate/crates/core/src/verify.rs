//! Empirical checks of the analytical guarantees behind the solvers: the
//! expected separable overapproximation used by APPROX, the conditioning
//! bound `‖S(y − y*)‖ ≥ ‖y − y*‖/(nr)`, weak and strong duality, identities
//! of the zero-sum subspace, and the RCDM/ACDM rate envelopes.
//!
//! Every check is deterministic given its inputs and RNG. Claims that need a
//! unique optimum are reported as skipped when uniqueness cannot be
//! certified.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instances::{self, random_feasible, SyntheticSpec};
use crate::solvers::{
    approx_run, acdm_epoch_len, gaps, primal_dual_values, project_zero_sum, rcdm_run, rcdm_step_with, solver_rng,
    BlockVectors, Decomposition, DualIterate, SolverConfig, SolverKind, BLOCK_LIPSCHITZ,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

/// Outcome of one claim. `worst_margin` is the smallest observed slack
/// (`bound − value`); a violation is a margin below `−tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub claim: String,
    pub status: Status,
    pub trials: u64,
    pub violations: u64,
    pub worst_margin: f64,
    pub tolerance: f64,
}

impl VerificationReport {
    fn new(claim: impl Into<String>, tolerance: f64) -> Self {
        VerificationReport {
            claim: claim.into(),
            status: Status::Pass,
            trials: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            tolerance,
        }
    }

    fn skipped(claim: impl Into<String>, tolerance: f64) -> Self {
        VerificationReport {
            status: Status::Skipped,
            worst_margin: f64::NAN,
            ..Self::new(claim, tolerance)
        }
    }

    /// Counts one trial with the given margin.
    fn observe(&mut self, margin: f64) {
        self.trials += 1;
        self.observe_extra(margin);
    }

    /// Folds in a margin without counting a trial.
    fn observe_extra(&mut self, margin: f64) {
        if !(margin >= -self.tolerance) {
            self.violations += 1;
            self.status = Status::Fail;
        }
        self.worst_margin = self.worst_margin.min(margin);
        if margin.is_nan() {
            self.worst_margin = f64::NAN;
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// `claim_id status trials violations worst_margin tolerance`
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {:.6e} {:.1e}",
            self.claim, self.status, self.trials, self.violations, self.worst_margin, self.tolerance
        )
    }
}

/// Compensated summation, so aggregates do not depend on accumulation noise.
#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

fn block_sum(y: &[Vec<f64>]) -> Vec<f64> {
    let mut s = vec![0.0; y.first().map_or(0, Vec::len)];
    for b in y {
        for (a, v) in s.iter_mut().zip(b) {
            *a += v;
        }
    }
    s
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_shape(x: &[Vec<f64>], h: &[Vec<f64>]) -> Result<()> {
    let n = x.first().map_or(0, Vec::len);
    if x.is_empty() || n == 0 {
        return Err(Error::InvalidInput("block vectors must be nonempty".into()));
    }
    if h.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: h.len(),
        });
    }
    for b in x.iter().chain(h) {
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        crate::error::ensure_finite(b)?;
    }
    Ok(())
}

/// Exact `E[g(x + h_R)]` when each block joins `R` independently with
/// probability `1/r`.
pub fn eso_expectation(x: &[Vec<f64>], h: &[Vec<f64>]) -> f64 {
    let r = x.len() as f64;
    let s = block_sum(x);
    let hs = block_sum(h);
    let own: f64 = h.iter().map(|b| norm2(b)).sum();
    // Σ_{i≠j} ⟨h_i, h_j⟩ = ‖Σ h_i‖² − Σ ‖h_i‖²
    let cross = norm2(&hs) - own;
    norm2(&s) + 2.0 * dot(&s, &hs) / r + own / r + cross / (r * r)
}

/// `g(x) + (1/r)⟨∇g(x), h⟩ + (2/r)‖h‖²`.
pub fn eso_bound(x: &[Vec<f64>], h: &[Vec<f64>]) -> f64 {
    let r = x.len() as f64;
    let s = block_sum(x);
    let hs = block_sum(h);
    let own: f64 = h.iter().map(|b| norm2(b)).sum();
    norm2(&s) + 2.0 * dot(&s, &hs) / r + 2.0 * own / r
}

const ESO_TOL: f64 = 1e-9;

/// Expected-overapproximation check on one `(x, h)` pair: the closed-form
/// expectation must not exceed the bound, and a Monte-Carlo estimate from
/// `samples` draws of `R` must stay below the bound plus three standard
/// errors and within three standard errors of the closed form.
pub fn eso_check<R: Rng + ?Sized>(
    claim: &str,
    x: &[Vec<f64>],
    h: &[Vec<f64>],
    samples: u64,
    rng: &mut R,
) -> Result<VerificationReport> {
    check_shape(x, h)?;
    if samples < 2 {
        return Err(Error::InvalidInput("need at least two Monte-Carlo samples".into()));
    }
    let r = x.len();
    let p = 1.0 / r as f64;
    let bound = eso_bound(x, h);
    let exact = eso_expectation(x, h);
    let scale = 1.0 + bound.abs();
    let mut rep = VerificationReport::new(claim, ESO_TOL);
    rep.observe_extra((bound - exact) / scale);

    let s = block_sum(x);
    let mut sum = KahanSum::default();
    let mut sum_sq = KahanSum::default();
    let mut point = s.clone();
    for _ in 0..samples {
        point.copy_from_slice(&s);
        for b in h {
            if rng.gen::<f64>() < p {
                for (a, v) in point.iter_mut().zip(b) {
                    *a += v;
                }
            }
        }
        let g = norm2(&point);
        sum.add(g);
        sum_sq.add(g * g);
        rep.trials += 1;
    }
    let m = samples as f64;
    let mean = sum.value() / m;
    let var = ((sum_sq.value() - m * mean * mean) / (m - 1.0)).max(0.0);
    let se = (var / m).sqrt();
    rep.observe_extra((bound + 3.0 * se - mean) / scale);
    rep.observe_extra((3.0 * se - (mean - exact).abs()) / scale);
    Ok(rep)
}

/// Deterministic closed-form inequality on `pairs` random `(x, h)` pairs
/// with `n`-dimensional blocks and `r` blocks.
pub fn eso_closed_form_sweep<R: Rng + ?Sized>(n: usize, r: usize, pairs: u64, rng: &mut R) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("eso.closed_form.n{n}r{r}"), ESO_TOL);
    for _ in 0..pairs {
        let (x, h) = random_pair(n, r, rng);
        let bound = eso_bound(&x, &h);
        rep.observe((bound - eso_expectation(&x, &h)) / (1.0 + bound.abs()));
    }
    rep
}

fn random_blocks<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> BlockVectors {
    let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
    (0..r)
        .map(|_| (0..n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

fn random_pair<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> (BlockVectors, BlockVectors) {
    (random_blocks(n, r, rng), random_blocks(n, r, rng))
}

/// Reference optimum of an instance certified to have a unique one.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub y_star: DualIterate,
    pub g_star: f64,
}

/// Solves from `starts` random feasible points to `ν_s ≤ 1e−12` and
/// returns the common optimum if all runs agree within `1e−6`. `None`
/// means uniqueness could not be certified.
pub fn certify_unique(d: &Decomposition, starts: usize, seed: u64) -> Result<Option<Certificate>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SolverConfig {
        seed,
        max_projections: 2_000_000,
        gap_tol: 1e-12,
        trace_every: 10 * d.r() as u64,
        ..SolverConfig::default()
    };
    let mut solutions: Vec<DualIterate> = Vec::with_capacity(starts.max(1));
    for k in 0..starts.max(1) {
        let y0 = if k == 0 { d.initial_point() } else { random_feasible(d, &mut rng)? };
        let run = rcdm_run(d, &SolverConfig { seed: seed.wrapping_add(k as u64), ..cfg.clone() }, y0)?;
        if !run.converged {
            return Ok(None);
        }
        solutions.push(run.iterate);
    }
    let first = &solutions[0];
    if solutions.iter().any(|y| y.distance(first) > 1e-6) {
        return Ok(None);
    }
    let y_star = first.clone();
    let g_star = norm2(&y_star.exact_sum(d));
    Ok(Some(Certificate { y_star, g_star }))
}

const CONDITIONING_TOL: f64 = 1e-9;

/// `‖S(y − y*)‖ ≥ ‖y − y*‖/(nr)` with `‖S v‖ = ‖Σ_i v_i‖/√r`, over random
/// feasible `y`.
pub fn conditioning_check<R: Rng + ?Sized>(
    claim: &str,
    d: &Decomposition,
    cert: Option<&Certificate>,
    trials: u64,
    rng: &mut R,
) -> Result<VerificationReport> {
    let Some(cert) = cert else {
        return Ok(VerificationReport::skipped(claim, CONDITIONING_TOL));
    };
    let (n, r) = (d.n() as f64, d.r() as f64);
    let star_sum = cert.y_star.exact_sum(d);
    let mut rep = VerificationReport::new(claim, CONDITIONING_TOL);
    for _ in 0..trials {
        let y = random_feasible(d, rng)?;
        let diff: Vec<f64> = y.exact_sum(d).iter().zip(&star_sum).map(|(a, b)| a - b).collect();
        let lhs = norm2(&diff).sqrt() / r.sqrt();
        let rhs = y.distance(&cert.y_star) / (n * r);
        rep.observe(lhs - rhs);
    }
    Ok(rep)
}

const WEAK_DUALITY_TOL: f64 = 1e-12;
const STRONG_DUALITY_TOL: f64 = 1e-6;

/// Weak duality at `y` (`ν_s ≥ 0` and `ν_d ≥ 0`), and, when `ν_s ≤ 1e−8`,
/// equality of the primal proximal value and the negated dual value.
pub fn duality_check(claim: &str, d: &Decomposition, y: &DualIterate) -> Result<VerificationReport> {
    let g = gaps(d, y)?;
    let mut rep = VerificationReport::new(claim, WEAK_DUALITY_TOL);
    rep.observe(g.nu_s);
    rep.observe_extra(g.nu_d);
    if g.nu_s <= 1e-8 {
        let (primal, dual) = primal_dual_values(d, y)?;
        // equality holds up to the looser strong-duality tolerance
        rep.observe_extra(STRONG_DUALITY_TOL - (primal - dual).abs());
    }
    Ok(rep)
}

const SUBSPACE_TOL: f64 = 1e-10;

/// Distance from `y` to `{v : Σ_i v_i = Σ_i p_i}` by solving the KKT system
/// of the least-squares problem with a dense LU factorization.
pub fn affine_distance_reference(y: &[Vec<f64>], p: &[Vec<f64>]) -> Result<f64> {
    check_shape(y, p)?;
    let (r, n) = (y.len(), y[0].len());
    let m = n * r;
    let mut kkt = DMatrix::<f64>::zeros(m + n, m + n);
    let mut rhs = DVector::<f64>::zeros(m + n);
    for i in 0..r {
        for v in 0..n {
            let k = i * n + v;
            kkt[(k, k)] = 1.0;
            kkt[(k, m + v)] = 1.0;
            kkt[(m + v, k)] = 1.0;
            rhs[k] = y[i][v];
        }
    }
    let c = block_sum(p);
    for v in 0..n {
        rhs[m + v] = c[v];
    }
    let sol = kkt
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidInput("singular KKT system".into()))?;
    Ok((0..m).map(|k| (sol[k] - rhs[k]).powi(2)).sum::<f64>().sqrt())
}

/// Identities of the zero-sum subspace `𝒜 = {a : Σ_i a_i = 0}` at `y`:
/// idempotence of the projection, residual with equal blocks, `S Sᵀ = I`,
/// and the distance `‖Σ_i (y − p)_i‖/√r` to the shifted subspace through
/// `p` compared against a least-squares solve.
pub fn subspace_check(claim: &str, y: &[Vec<f64>], p: &[Vec<f64>], w: &[f64]) -> Result<VerificationReport> {
    check_shape(y, p)?;
    let (r, n) = (y.len(), y[0].len());
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: w.len() });
    }
    let scale = 1.0 + y.iter().flatten().chain(p.iter().flatten()).fold(0.0f64, |m, v| m.max(v.abs()));
    let mut rep = VerificationReport::new(claim, SUBSPACE_TOL);

    let a = project_zero_sum(y);
    let aa = project_zero_sum(&a);
    let idem = a.iter().flatten().zip(aa.iter().flatten()).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
    rep.observe(-idem / scale);
    let in_subspace = block_sum(&a).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    rep.observe(-in_subspace / scale);
    let residual: BlockVectors = y
        .iter()
        .zip(&a)
        .map(|(yb, ab)| yb.iter().zip(ab).map(|(u, v)| u - v).collect())
        .collect();
    let spread = residual
        .iter()
        .flat_map(|b| b.iter().zip(&residual[0]).map(|(u, v)| (u - v).abs()))
        .fold(0.0f64, f64::max);
    rep.observe(-spread / scale);

    // S Sᵀ w: replicate w/√r into every block, then sum blocks and scale by 1/√r
    let rs = (r as f64).sqrt();
    let lifted: BlockVectors = (0..r).map(|_| w.iter().map(|v| v / rs).collect()).collect();
    let back: Vec<f64> = block_sum(&lifted).iter().map(|v| v / rs).collect();
    let wscale = 1.0 + w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sst = back.iter().zip(w).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
    rep.observe(-sst / wscale);

    let diff: Vec<f64> = block_sum(y).iter().zip(block_sum(p)).map(|(u, v)| u - v).collect();
    let formula = norm2(&diff).sqrt() / rs;
    let reference = affine_distance_reference(y, p)?;
    rep.observe(-(formula - reference).abs() / scale);
    Ok(rep)
}

const RATE_SLACK: f64 = 1.1;
/// Absolute allowance for the accuracy of the reference optimum.
const RATE_FLOOR: f64 = 1e-9;

/// Rate envelope on a certified instance, averaged over `seeds` runs from
/// the default starting point.
///
/// RCDM: the mean of `‖y_k − y*‖² + g(y_k) − g(y*)` must stay below
/// `(1 − 2/(n²r² + r))^k` times its initial value (times 1.1) for
/// `k = 1..=iters`. ACDM: the mean of `g(y_ℓ) − g(y*)` after `ℓ` epochs must
/// stay below `2^{−ℓ}` times its initial value (times 1.1) for
/// `ℓ = 1..=iters`. `lipschitz` is the RCDM step constant.
pub fn rate_check(
    d: &Decomposition,
    cert: Option<&Certificate>,
    kind: SolverKind,
    seeds: u64,
    iters: u64,
    lipschitz: f64,
) -> Result<VerificationReport> {
    let claim = format!("rate.{kind}");
    let Some(cert) = cert else {
        return Ok(VerificationReport::skipped(claim, RATE_FLOOR));
    };
    if seeds == 0 || iters == 0 {
        return Err(Error::InvalidInput("rate check needs seeds and iterations".into()));
    }
    let y0 = d.initial_point();
    let sub = |y: &DualIterate| norm2(&y.exact_sum(d)) - cert.g_star;
    let mut totals = vec![KahanSum::default(); iters as usize];
    let (initial, ratio) = match kind {
        SolverKind::Rcdm => {
            for seed in 0..seeds {
                let mut rng = solver_rng(seed, 0);
                let mut y = y0.clone();
                for t in totals.iter_mut() {
                    let i = rng.gen_range(0..d.r());
                    rcdm_step_with(d, &mut y, i, lipschitz)?;
                    let dist = y.distance(&cert.y_star);
                    t.add(dist * dist + sub(&y));
                }
            }
            let dist = y0.distance(&cert.y_star);
            let (n, r) = (d.n() as f64, d.r() as f64);
            (dist * dist + sub(&y0), 1.0 - 2.0 / (n * n * r * r + r))
        }
        SolverKind::Acdm => {
            let epoch = acdm_epoch_len(d.n(), d.r());
            for seed in 0..seeds {
                let mut y = y0.clone();
                for (l, t) in totals.iter_mut().enumerate() {
                    let mut rng = solver_rng(seed, l as u64 + 1);
                    y = approx_run(d, y, epoch, &mut rng)?.point;
                    t.add(sub(&y));
                }
            }
            (sub(&y0), 0.5)
        }
        SolverKind::Ap => {
            return Err(Error::InvalidInput("no rate envelope is checked for ap".into()));
        }
    };
    let mut rep = VerificationReport::new(claim, RATE_FLOOR);
    let mut envelope = initial * RATE_SLACK;
    for t in &totals {
        envelope *= ratio;
        rep.observe(envelope - t.value() / seeds as f64);
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Eso,
    Conditioning,
    Duality,
    Subspace,
    Rate,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eso" => Ok(Suite::Eso),
            "theorem1" | "conditioning" => Ok(Suite::Conditioning),
            "duality" => Ok(Suite::Duality),
            "appendixb" | "subspace" => Ok(Suite::Subspace),
            "rate" => Ok(Suite::Rate),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidInput(format!("unknown suite '{other}'"))),
        }
    }
}

/// Knobs of the built-in suites.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Monte-Carlo samples per ESO instance.
    pub eso_samples: u64,
    /// Random `(x, h)` pairs of the closed-form ESO sweep.
    pub eso_pairs: u64,
    pub conditioning_trials: u64,
    pub duality_points: u64,
    pub subspace_trials: u64,
    pub rate_seeds: u64,
    pub rcdm_iters: u64,
    pub acdm_epochs: u64,
    pub lipschitz: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            eso_samples: 100_000,
            eso_pairs: 1_000,
            conditioning_trials: 1_000,
            duality_points: 10_000,
            subspace_trials: 100,
            rate_seeds: 200,
            rcdm_iters: 200,
            acdm_epochs: 5,
            lipschitz: BLOCK_LIPSCHITZ,
        }
    }
}

/// Two unit edges on the same pair: the optimal block split is not unique.
pub fn parallel_edges() -> Decomposition {
    use crate::blocks::{Block, EdgeCutBlock};
    let e = EdgeCutBlock::new(0, 1, 1.0).expect("valid edge");
    Decomposition::new(2, vec![Block::edge(2, e).expect("n = 2"), Block::edge(2, e).expect("n = 2")])
        .expect("valid decomposition")
}

fn certified_instances(seed: u64) -> Result<Vec<(&'static str, Decomposition, Option<Certificate>)>> {
    let mut out = Vec::new();
    for (name, d) in [
        ("pair", instances::unique_pair()),
        ("path", instances::unique_path()),
        ("parallel", parallel_edges()),
    ] {
        let cert = certify_unique(&d, 10, seed)?;
        out.push((name, d, cert));
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Eso {
        out.extend(eso_suite(opts)?);
    }
    let need_certs = all || matches!(suite, Suite::Conditioning | Suite::Rate);
    let certs = if need_certs { certified_instances(opts.seed)? } else { Vec::new() };
    if all || suite == Suite::Conditioning {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for (name, d, cert) in &certs {
            out.push(conditioning_check(
                &format!("conditioning.{name}"),
                d,
                cert.as_ref(),
                opts.conditioning_trials,
                &mut rng,
            )?);
        }
    }
    if all || suite == Suite::Duality {
        out.extend(duality_suite(opts)?);
    }
    if all || suite == Suite::Subspace {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut rep = VerificationReport::new("subspace.identities", SUBSPACE_TOL);
        for t in 0..opts.subspace_trials {
            let n = 1 + (t as usize % 6);
            let r = 1 + (t as usize / 6 % 5);
            let y = random_blocks(n, r, &mut rng);
            let p = random_blocks(n, r, &mut rng);
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let one = subspace_check("", &y, &p, &w)?;
            rep.observe(one.worst_margin);
        }
        out.push(rep);
    }
    if all || suite == Suite::Rate {
        for (name, d, cert) in &certs {
            for (kind, iters) in [(SolverKind::Rcdm, opts.rcdm_iters), (SolverKind::Acdm, opts.acdm_epochs)] {
                let mut rep = rate_check(d, cert.as_ref(), kind, opts.rate_seeds, iters, opts.lipschitz)?;
                rep.claim = format!("{}.{name}", rep.claim);
                out.push(rep);
            }
        }
    }
    Ok(out)
}

fn eso_suite(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    let (x, _) = random_pair(4, 3, &mut rng);
    let zero = vec![vec![0.0; 4]; 3];
    out.push(eso_check("eso.zero_step", &x, &zero, opts.eso_samples, &mut rng)?);
    let (x, h) = random_pair(4, 1, &mut rng);
    out.push(eso_check("eso.single_block", &x, &h, opts.eso_samples, &mut rng)?);
    for k in 0..3 {
        let (x, h) = random_pair(4, 3, &mut rng);
        out.push(eso_check(&format!("eso.random{k}"), &x, &h, opts.eso_samples, &mut rng)?);
    }
    out.push(eso_closed_form_sweep(4, 3, opts.eso_pairs, &mut rng));
    out.push(eso_closed_form_sweep(8, 6, opts.eso_pairs, &mut rng));
    Ok(out)
}

fn duality_suite(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut weak = VerificationReport::new("duality.weak", WEAK_DUALITY_TOL);
    let shapes = [(4, 2), (5, 3), (6, 3), (8, 4)];
    let decomps = shapes
        .iter()
        .enumerate()
        .map(|(k, &(n, r))| instances::synthetic(SyntheticSpec { n, r, seed: opts.seed.wrapping_add(k as u64) }))
        .collect::<Result<Vec<_>>>()?;
    for t in 0..opts.duality_points {
        let d = &decomps[t as usize % decomps.len()];
        let y = random_feasible(d, &mut rng)?;
        let rep = duality_check("", d, &y)?;
        weak.trials += 1;
        weak.observe_extra(rep.worst_margin);
    }
    let mut strong = VerificationReport::new("duality.strong", STRONG_DUALITY_TOL);
    for d in &decomps {
        let cfg = SolverConfig {
            seed: opts.seed,
            gap_tol: 1e-10,
            max_projections: 1_000_000,
            trace_every: 10,
            ..SolverConfig::default()
        };
        let run = rcdm_run(d, &cfg, d.initial_point())?;
        let (primal, dual) = primal_dual_values(d, &run.iterate)?;
        strong.observe(if run.gaps.nu_s <= 1e-8 {
            STRONG_DUALITY_TOL - (primal - dual).abs()
        } else {
            f64::NEG_INFINITY
        });
    }
    Ok(vec![weak, strong])
}
