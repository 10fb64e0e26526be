//! `subcd`: decomposable submodular minimization from the command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subcd_core::instances::{self, SyntheticSpec};
use subcd_core::segmentation::{self, emit_mask, load_image, load_unary, ThresholdUnary};
use subcd_core::solvers::{gaps, run_solver, Decomposition, SolveResult, SolverConfig, SolverKind};
use subcd_core::submodular::{brute_force_min, MAX_ENUMERATION};
use subcd_core::verify::{run_suite, Suite, SuiteOptions};
use subcd_core::Error;

/// Relative smooth-gap thresholds reported by `compare`.
const THRESHOLDS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

#[derive(Parser)]
#[command(name = "subcd", version, about = "Decomposable submodular minimization by block coordinate descent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver and write its trace, primal point and (for images) mask.
    Solve(SolveArgs),
    /// Run several solvers on the same instance and summarize projection counts.
    Compare(CompareArgs),
    /// Run the built-in verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Synthetic instance: `n=6,r=3,seed=1` (random matchings plus a modular
    /// block) or `grid=32x32[,seed=0]` (synthetic segmentation image).
    #[arg(long, conflicts_with = "image")]
    synthetic: Option<String>,
    /// Binary PPM (P6) or PGM (P5) image to segment.
    #[arg(long)]
    image: Option<PathBuf>,
    /// Unary potentials, one float per pixel in row-major order. Defaults to
    /// grayscale thresholding of the image.
    #[arg(long, requires = "image")]
    unary: Option<PathBuf>,
    /// Edge weight scale.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Colour sensitivity of the edge kernel.
    #[arg(long, default_value_t = 5.0)]
    sigma: f64,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_projections: u64,
    /// Stop once the smooth gap is at most this value.
    #[arg(long, default_value_t = 1e-6)]
    gap_tol: f64,
    /// Also require the discrete gap to be at most this value.
    #[arg(long, default_value_t = 1e-9)]
    discrete_tol: f64,
    /// Stop as soon as the discrete gap is within tolerance.
    #[arg(long)]
    discrete_exit: bool,
    /// Record gaps every this many projections.
    #[arg(long, default_value_t = 100)]
    trace_every: u64,
    /// Override the ACDM epoch length.
    #[arg(long)]
    epoch_len: Option<u64>,
    /// Record wall-clock seconds in traces (otherwise written as 0).
    #[arg(long)]
    wall_time: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl RunArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            seed: self.seed,
            max_projections: self.max_projections,
            gap_tol: self.gap_tol,
            trace_every: self.trace_every,
            discrete_tol: Some(self.discrete_tol),
            discrete_early_exit: self.discrete_exit,
            epoch_len: self.epoch_len,
            record_time: self.wall_time,
            ..SolverConfig::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value = "rcdm")]
    solver: SolverKind,
    /// Check the returned set against exhaustive minimization (small n only).
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated solvers to compare.
    #[arg(long, value_delimiter = ',', default_value = "rcdm,acdm,ap")]
    solvers: Vec<SolverKind>,
}

#[derive(Args)]
struct VerifyArgs {
    /// eso, conditioning (or theorem1), duality, subspace (or appendixb), rate or all.
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo samples for eso, random points for conditioning, duality and
    /// subspace, seeds for rate.
    #[arg(long)]
    trials: Option<u64>,
    /// Step constant of the RCDM update used by the rate suite.
    #[arg(long, default_value_t = 2.0)]
    lipschitz: f64,
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Format(_) => 3,
            Error::ConvergenceFailure { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 3,
        message: format!("{}: {e}", path.display()),
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

struct Loaded {
    decomposition: Decomposition,
    /// Pixel grid and metadata JSON for image instances.
    image: Option<(usize, usize, String)>,
}

fn load_instance(args: &InstanceArgs) -> Result<Loaded, Failure> {
    match (&args.synthetic, &args.image) {
        (Some(spec), None) => {
            if let Some(rest) = spec.strip_prefix("grid=") {
                let (w, h, seed) = parse_grid(rest)?;
                let inst = segmentation::synthetic_instance(w, h, seed, args.lambda, args.sigma)?;
                Ok(Loaded {
                    image: Some((inst.width, inst.height, inst.metadata_json())),
                    decomposition: inst.decomposition,
                })
            } else {
                let spec: SyntheticSpec = spec.parse()?;
                Ok(Loaded {
                    decomposition: instances::synthetic(spec)?,
                    image: None,
                })
            }
        }
        (None, Some(path)) => {
            let img = load_image(path).map_err(|e| match e {
                Error::Io(io) => io_failure(path, io),
                other => other.into(),
            })?;
            let unary = match &args.unary {
                Some(u) => load_unary(u, img.len()).map_err(|e| match e {
                    Error::Io(io) => io_failure(u, io),
                    other => other.into(),
                })?,
                None => ThresholdUnary::default().unary(&img)?,
            };
            let inst = segmentation::segmentation_instance(&img, unary, args.lambda, args.sigma, &path.display().to_string())?;
            Ok(Loaded {
                image: Some((inst.width, inst.height, inst.metadata_json())),
                decomposition: inst.decomposition,
            })
        }
        _ => Err(Failure {
            code: 2,
            message: "exactly one of --synthetic or --image is required".into(),
        }),
    }
}

/// `WxH` optionally followed by `,seed=S`.
fn parse_grid(s: &str) -> Result<(usize, usize, u64), Failure> {
    let bad = || Failure {
        code: 2,
        message: format!("bad grid spec '{s}', expected e.g. grid=32x32,seed=0"),
    };
    let (dims, rest) = s.split_once(',').unwrap_or((s, ""));
    let (w, h) = dims.split_once('x').ok_or_else(bad)?;
    let w: usize = w.trim().parse().map_err(|_| bad())?;
    let h: usize = h.trim().parse().map_err(|_| bad())?;
    let seed = match rest.trim() {
        "" => 0,
        r => r.strip_prefix("seed=").ok_or_else(bad)?.trim().parse().map_err(|_| bad())?,
    };
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h, seed))
}

fn prepare_out(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let loaded = load_instance(&args.instance)?;
    let d = &loaded.decomposition;
    let cfg = args.run.config();
    cfg.validate()?;
    prepare_out(&args.run.out)?;
    let res = run_solver(args.solver, d, &cfg, d.initial_point())?;
    write_outputs(&args.run.out, d, &res, &loaded)?;
    println!("nu_s={:e} nu_d={:e} F={}", res.gaps.nu_s, res.gaps.nu_d, res.gaps.value);
    println!(
        "solver={} projections={} converged={}",
        args.solver, res.projections, res.converged
    );
    if args.verify {
        if d.n() > MAX_ENUMERATION {
            println!("verify=skipped (n = {} is too large to enumerate)", d.n());
        } else {
            let (_, best) = brute_force_min(d)?;
            if res.gaps.value == best {
                println!("verify=ok brute_force_F={best}");
            } else {
                println!("verify=mismatch brute_force_F={best}");
                return Err(Failure {
                    code: 1,
                    message: format!("returned set has F = {} but the minimum is {best}", res.gaps.value),
                });
            }
        }
    }
    Ok(())
}

fn write_outputs(out: &Path, d: &Decomposition, res: &SolveResult, loaded: &Loaded) -> Result<(), Failure> {
    write_file(&out.join("trace.csv"), res.trace.to_csv())?;
    let mut text = String::new();
    for v in res.primal(d) {
        writeln!(text, "{v:.17e}").expect("writing to a string");
    }
    write_file(&out.join("solution.txt"), text)?;
    if let Some((w, h, meta)) = &loaded.image {
        let path = out.join("mask.pgm");
        emit_mask(&res.gaps.set, *w, *h, &path).map_err(|e| match e {
            Error::Io(io) => io_failure(&path, io),
            other => other.into(),
        })?;
        write_file(&out.join("instance.json"), meta)?;
    }
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), Failure> {
    if args.solvers.len() < 2 {
        return Err(Failure {
            code: 2,
            message: "compare needs at least two solvers".into(),
        });
    }
    let loaded = load_instance(&args.instance)?;
    let d = &loaded.decomposition;
    let cfg = args.run.config();
    cfg.validate()?;
    prepare_out(&args.run.out)?;
    let start_gap = gaps(d, &d.initial_point())?.nu_s;
    let mut summary = String::from("solver,threshold,projections\n");
    for &kind in &args.solvers {
        let res = run_solver(kind, d, &cfg, d.initial_point())?;
        write_file(&args.run.out.join(format!("trace_{kind}.csv")), res.trace.to_csv())?;
        for t in THRESHOLDS {
            let reached = res
                .trace
                .projections_to_reach(t * start_gap)
                .map_or_else(String::new, |p| p.to_string());
            writeln!(summary, "{kind},{t:e},{reached}").expect("writing to a string");
        }
        println!(
            "{kind}: nu_s={:e} nu_d={:e} F={} projections={} converged={}",
            res.gaps.nu_s, res.gaps.nu_d, res.gaps.value, res.projections, res.converged
        );
    }
    write_file(&args.run.out.join("summary.csv"), summary)?;
    if let Some((_, _, meta)) = &loaded.image {
        write_file(&args.run.out.join("instance.json"), meta)?;
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let mut opts = SuiteOptions {
        seed: args.seed,
        lipschitz: args.lipschitz,
        ..SuiteOptions::default()
    };
    if !(args.lipschitz > 0.0) {
        return Err(Failure {
            code: 2,
            message: "--lipschitz must be positive".into(),
        });
    }
    if let Some(t) = args.trials {
        if t < 2 {
            return Err(Failure {
                code: 2,
                message: "--trials must be at least 2".into(),
            });
        }
        opts.eso_samples = t;
        opts.conditioning_trials = t;
        opts.duality_points = t;
        opts.subspace_trials = t;
        opts.rate_seeds = t;
    }
    let reports = run_suite(args.suite, &opts)?;
    println!("claim_id status trials violations worst_margin tolerance");
    let mut failed = 0;
    for r in &reports {
        println!("{r}");
        if !r.passed() {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(Failure {
            code: 1,
            message: format!("{failed} claim(s) violated"),
        });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Compare(a) => compare(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
