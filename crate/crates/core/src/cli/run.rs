use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::args::{BlurArg, Cli, Command, CommonArgs, DeblurArgs, Method, RandomSpec};
use crate::baseline::{from_real_block, gl_fom_real, gl_gmres_real, RealBlockProblem};
use crate::error::{Error, Result};
use crate::qblock::MatrixOperator;
use crate::qcore::{CsrMatrix, Parallelism, QCoeff, QMatrix, QSparse, Quaternion};
use crate::qsolve::{
    gl_qfom, gl_qgmres, sylvester_solve, BreakdownInfo, Projection, SolveReport, SolveStatus, SolverConfig,
    SylvesterOperator,
};
use crate::problems::{
    self, image_read, image_write, metrics, multichannel_blur, parse_matrix_market, stack, unstack, BlurKind,
    BlurSpec, Metrics, QuatImage, StackedOperator, RNG_ALGORITHM,
};

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "QKRYLOV_THREADS";

/// A linear problem `A X (+ X B) = rhs` ready for any method.
#[derive(Clone, Debug)]
pub struct Problem {
    pub a: QCoeff,
    /// Right coefficient of a Sylvester equation.
    pub right: Option<QMatrix>,
    pub rhs: QMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProblemInfo {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub rng: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageReport {
    pub height: usize,
    pub width: usize,
    pub blur: BlurArg,
    pub restored: Metrics,
    pub blurred: Metrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restored_png: Option<PathBuf>,
}

/// One solver run, as written to the JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub command: &'static str,
    pub method: Method,
    pub problem: ProblemInfo,
    pub tol: f64,
    pub maxit: usize,
    /// `[n, m]` for structure-preserving methods, `[4n, 4m]` for the real
    /// baselines, `[nm, 1]` for the stacked ones.
    pub dimensions: [usize; 2],
    pub iterations: usize,
    /// Field of the Krylov coefficients.
    pub coefficient_field: String,
    pub converged: bool,
    pub status: SolveStatus,
    pub cpu_seconds: f64,
    /// Final relative residual, computed directly.
    pub rr: f64,
    /// Final relative residual as estimated by the solver.
    pub estimated_rr: f64,
    pub rr_history: Vec<f64>,
    pub breakdown: Option<BreakdownInfo>,
    pub flops: u64,
    pub apply_flops: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<ImageReport>,
}

/// Reads `QKRYLOV_THREADS`, sizes the global pool, and picks the kernel.
pub fn configure_threads() -> Parallelism {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t >= 1);
    match threads {
        Some(t) => {
            // the pool can only be built once per process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            if t > 1 {
                Parallelism::Rayon
            } else {
                Parallelism::Sequential
            }
        }
        None => Parallelism::Sequential,
    }
}

/// Runs one method; returns the solution in quaternion form, the report and
/// the reported dimensions.
pub fn run_method(
    method: Method,
    problem: &Problem,
    cfg: &SolverConfig,
    par: Parallelism,
) -> Result<(QMatrix, SolveReport, [usize; 2])> {
    let (n, m) = problem.rhs.shape();
    match method {
        Method::Glqfom | Method::Glqgmres => {
            let x0 = QMatrix::zeros(n, m);
            let fom = method == Method::Glqfom;
            let (x, rep) = match &problem.right {
                None => {
                    let op = MatrixOperator::new(problem.a.clone()).with_parallelism(par);
                    if fom {
                        gl_qfom(&op, &problem.rhs, &x0, cfg)?
                    } else {
                        gl_qgmres(&op, &problem.rhs, &x0, cfg)?
                    }
                }
                Some(b) => {
                    let op = SylvesterOperator::new(problem.a.clone(), b.clone())?.with_parallelism(par);
                    let projection = if fom { Projection::Orthogonal } else { Projection::MinimalResidual };
                    sylvester_solve(&op, &problem.rhs, &x0, cfg, projection)?
                }
            };
            Ok((x, rep, [n, m]))
        }
        Method::GlfomReal | Method::GlgmresReal => {
            let p = match &problem.right {
                None => RealBlockProblem::from_quaternion(&problem.a, &problem.rhs)?,
                Some(b) => RealBlockProblem::sylvester_from_quaternion(&problem.a, b, &problem.rhs)?,
            };
            let x0 = nalgebra::DMatrix::zeros(4 * n, 4 * m);
            let (x, rep) = if method == Method::GlfomReal {
                gl_fom_real(&p, &x0, cfg)?
            } else {
                gl_gmres_real(&p, &x0, cfg)?
            };
            Ok((from_real_block(&x)?, rep, [4 * n, 4 * m]))
        }
        Method::QfomStacked | Method::QgmresStacked => {
            if problem.right.is_some() {
                return Err(Error::InvalidArgument(format!(
                    "{} does not support Sylvester problems",
                    method.name()
                )));
            }
            let op = StackedOperator::new(problem.a.clone(), m)?.with_parallelism(par);
            let b = stack(&problem.rhs);
            let x0 = QMatrix::zeros(n * m, 1);
            let (x, rep) = if method == Method::QfomStacked {
                gl_qfom(&op, &b, &x0, cfg)?
            } else {
                gl_qgmres(&op, &b, &x0, cfg)?
            };
            Ok((unstack(&x, n, m)?, rep, [n * m, 1]))
        }
    }
}

fn record(
    command: &'static str,
    method: Method,
    problem: ProblemInfo,
    cfg: &SolverConfig,
    rep: &SolveReport,
    dimensions: [usize; 2],
) -> RunRecord {
    RunRecord {
        command,
        method,
        problem,
        tol: cfg.tol,
        maxit: cfg.maxit,
        dimensions,
        iterations: rep.iterations,
        coefficient_field: rep.coefficient_field.clone(),
        converged: rep.converged,
        status: rep.status,
        cpu_seconds: rep.wall_seconds,
        rr: rep.final_true_rr,
        estimated_rr: rep.final_estimated_rr,
        rr_history: rep.rr_history.clone(),
        breakdown: rep.breakdown,
        flops: rep.flops,
        apply_flops: rep.apply_flops,
        solution_error: None,
        image: None,
    }
}

fn solver_config(tol: f64, maxit: usize) -> Result<SolverConfig> {
    let cfg = SolverConfig::default().with_tol(tol).with_maxit(maxit);
    cfg.validate()?;
    Ok(cfg)
}

fn single_method(methods: &[Method]) -> Result<Method> {
    match methods {
        [m] => Ok(*m),
        _ => Err(Error::InvalidArgument("exactly one --method is expected here".into())),
    }
}

fn random_spec(args: &CommonArgs) -> Result<Option<RandomSpec>> {
    args.random.as_deref().map(RandomSpec::parse).transpose()
}

fn no_source() -> Error {
    Error::InvalidArgument("one of --matrix or --random is required".into())
}

/// Assembles the `A X = B` problem named by `--matrix` or `--random`.
pub fn linear_problem(args: &CommonArgs) -> Result<(Problem, ProblemInfo)> {
    if let Some(path) = &args.matrix {
        let a0 = parse_matrix_market(path)?;
        let (a, b) = problems::build_test_problem(&a0, problems::EXAMPLE_A_COEFFS, args.m, args.seed)?;
        let info = ProblemInfo {
            source: "matrixmarket".into(),
            path: Some(path.clone()),
            n: a0.nrows(),
            m: args.m,
            seed: Some(args.seed),
            rng: RNG_ALGORITHM,
        };
        return Ok((Problem { a, right: None, rhs: b }, info));
    }
    let spec = random_spec(args)?.ok_or_else(no_source)?;
    let m = spec.m.unwrap_or(args.m);
    let (a, b) = problems::random_dense_problem(spec.n, m, args.seed);
    let info = ProblemInfo {
        source: "random".into(),
        path: None,
        n: spec.n,
        m,
        seed: Some(args.seed),
        rng: RNG_ALGORITHM,
    };
    Ok((
        Problem {
            a: QCoeff::Dense(a),
            right: None,
            rhs: b,
        },
        info,
    ))
}

/// Assembles the Sylvester problem; random problems carry a planted solution.
pub fn sylvester_problem(args: &CommonArgs) -> Result<(Problem, ProblemInfo, Option<QMatrix>)> {
    if let Some(path) = &args.matrix {
        let a0 = parse_matrix_market(path)?;
        let (a, b, c) = problems::sylvester_problem(&a0, args.m, args.seed)?;
        let info = ProblemInfo {
            source: "sylvester-matrixmarket".into(),
            path: Some(path.clone()),
            n: a0.nrows(),
            m: args.m,
            seed: Some(args.seed),
            rng: RNG_ALGORITHM,
        };
        return Ok((Problem { a, right: Some(b), rhs: c }, info, None));
    }
    let spec = random_spec(args)?.ok_or_else(no_source)?;
    let m = spec.m.unwrap_or(args.m);
    let p = problems::planted_sylvester(spec.n, m, args.seed)?;
    let info = ProblemInfo {
        source: "sylvester-planted".into(),
        path: None,
        n: spec.n,
        m,
        seed: Some(args.seed),
        rng: RNG_ALGORITHM,
    };
    Ok((
        Problem {
            a: QCoeff::Dense(p.a),
            right: Some(p.b),
            rhs: p.c,
        },
        info,
        Some(p.x),
    ))
}

pub fn cmd_solve(args: &CommonArgs, par: Parallelism) -> Result<RunRecord> {
    let method = single_method(&args.method)?;
    let cfg = solver_config(args.tol, args.maxit)?;
    let (problem, info) = linear_problem(args)?;
    let (_, rep, dims) = run_method(method, &problem, &cfg, par)?;
    Ok(record("solve", method, info, &cfg, &rep, dims))
}

pub fn cmd_sylvester(args: &CommonArgs, par: Parallelism) -> Result<RunRecord> {
    let method = single_method(&args.method)?;
    let cfg = solver_config(args.tol, args.maxit)?;
    let (problem, info, planted) = sylvester_problem(args)?;
    let (x, rep, dims) = run_method(method, &problem, &cfg, par)?;
    let mut rec = record("sylvester", method, info, &cfg, &rep, dims);
    if let Some(xs) = planted {
        rec.solution_error = Some(x.sub(&xs)?.fro_norm() / xs.fro_norm());
    }
    Ok(rec)
}

/// Blur operator for an image with `n` rows.
pub fn blur_operator(blur: BlurArg, n: usize) -> Result<QCoeff> {
    let real = |kind| -> Result<QCoeff> {
        let a0 = BlurSpec { kind, n }.matrix()?;
        Ok(QCoeff::Sparse(QSparse::real_times_scalar(&CsrMatrix::from_dense(&a0), Quaternion::ONE)))
    };
    match blur {
        BlurArg::Uniform { s } => real(BlurKind::Uniform { s }),
        BlurArg::Gaussian { r, sigma } => real(BlurKind::Gaussian { r, sigma }),
        BlurArg::Multichannel => {
            if n % 8 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "multichannel blur needs an image height divisible by 8, got {n}"
                )));
            }
            let a1 = problems::kronecker(&problems::toeplitz_gaussian(n / 8, 3, 3.0), &problems::toeplitz_uniform(8, 5));
            let a = multichannel_blur(&a1)?;
            let parts = std::array::from_fn(|s| CsrMatrix::from_dense(a.part(s)));
            Ok(QCoeff::Sparse(QSparse::from_parts(parts)?))
        }
    }
}

pub fn cmd_deblur(args: &DeblurArgs, par: Parallelism) -> Result<RunRecord> {
    let cfg = solver_config(args.tol, args.maxit)?;
    let (original, info) = match &args.image {
        Some(path) => {
            let img = image_read(path)?;
            let info = ProblemInfo {
                source: "image".into(),
                path: Some(path.clone()),
                n: img.height(),
                m: img.width(),
                seed: None,
                rng: RNG_ALGORITHM,
            };
            (img, info)
        }
        None => {
            if args.size == 0 {
                return Err(Error::InvalidArgument("--size must be positive".into()));
            }
            let img = problems::synthetic_image(args.size, args.size);
            let info = ProblemInfo {
                source: "synthetic-image".into(),
                path: None,
                n: args.size,
                m: args.size,
                seed: None,
                rng: RNG_ALGORITHM,
            };
            (img, info)
        }
    };
    let a = blur_operator(args.blur, original.height())?;
    let blurred = a.mul(original.as_qmatrix())?;
    let problem = Problem {
        a,
        right: None,
        rhs: blurred.clone(),
    };
    let (x, rep, dims) = run_method(args.method, &problem, &cfg, par)?;
    let restored = QuatImage::from_qmatrix(&x);
    let blurred_img = QuatImage::from_qmatrix(&blurred);

    let restored_png = match &args.out {
        Some(out) => {
            let p = out.with_extension("png");
            image_write(&p, &restored)?;
            image_write(sibling(out, "blurred.png"), &blurred_img)?;
            Some(p)
        }
        None => None,
    };
    let mut rec = record("deblur", args.method, info, &cfg, &rep, dims);
    rec.image = Some(ImageReport {
        height: original.height(),
        width: original.width(),
        blur: args.blur,
        restored: metrics(&original, &restored)?,
        blurred: metrics(&original, &blurred_img)?,
        restored_png,
    });
    Ok(rec)
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

pub fn cmd_bench(args: &CommonArgs, par: Parallelism) -> Result<Vec<RunRecord>> {
    let cfg = solver_config(args.tol, args.maxit)?;
    let (problem, info) = linear_problem(args)?;
    let run = |&method: &Method| -> Result<RunRecord> {
        let (_, rep, dims) = run_method(method, &problem, &cfg, par)?;
        Ok(record("bench", method, info.clone(), &cfg, &rep, dims))
    };
    if args.parallel {
        args.method.par_iter().map(run).collect()
    } else {
        args.method.iter().map(run).collect()
    }
}

pub fn bench_csv(records: &[RunRecord], comparable: bool) -> String {
    let mut out = String::from("method,dimension,it,cpu,rr,converged,timing_comparable\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},\"[{},{}]\",{},{:.6},{:.4e},{},{}",
            r.method.name(),
            r.dimensions[0],
            r.dimensions[1],
            r.iterations,
            r.cpu_seconds,
            r.rr,
            r.converged,
            comparable
        );
    }
    out
}

pub fn history_csv(records: &[RunRecord]) -> String {
    let mut out = String::new();
    if records.len() == 1 {
        out.push_str("iteration,rr\n");
        for (i, v) in records[0].rr_history.iter().enumerate() {
            let _ = writeln!(out, "{i},{v:e}");
        }
    } else {
        out.push_str("method,iteration,rr\n");
        for r in records {
            for (i, v) in r.rr_history.iter().enumerate() {
                let _ = writeln!(out, "{},{i},{v:e}", r.method.name());
            }
        }
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn emit_json(rec: &RunRecord, out: Option<&Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(rec).expect("records serialize");
    match out {
        Some(p) => {
            write_file(p, &(json + "\n"))?;
            println!(
                "{} [{},{}] IT={} CPU={:.4} RR={:.4e} {}",
                rec.method.name(),
                rec.dimensions[0],
                rec.dimensions[1],
                rec.iterations,
                rec.cpu_seconds,
                rec.rr,
                if rec.converged { "converged" } else { "not converged" }
            );
        }
        None => println!("{json}"),
    }
    Ok(())
}

/// Runs a parsed command line. `Ok(true)` when every solve converged.
pub fn run(cli: Cli) -> Result<bool> {
    let par = configure_threads();
    match cli.command {
        Command::Solve(args) => {
            let rec = cmd_solve(&args, par)?;
            finish_single(&rec, args.out.as_deref(), args.history.as_deref())
        }
        Command::Sylvester(args) => {
            let rec = cmd_sylvester(&args, par)?;
            finish_single(&rec, args.out.as_deref(), args.history.as_deref())
        }
        Command::Deblur(args) => {
            let rec = cmd_deblur(&args, par)?;
            if let (Some(img), Some(_)) = (&rec.image, &args.out) {
                println!("PSNR SSIM CPU RR");
                println!(
                    "{:.4} {:.4} {:.4} {:.4e}",
                    img.restored.psnr, img.restored.ssim, rec.cpu_seconds, img.restored.rr
                );
            }
            finish_single(&rec, args.out.as_deref(), args.history.as_deref())
        }
        Command::Bench(args) => {
            let recs = cmd_bench(&args, par)?;
            let csv = bench_csv(&recs, !args.parallel);
            match &args.out {
                Some(p) => write_file(p, &csv)?,
                None => print!("{csv}"),
            }
            if let Some(h) = &args.history {
                write_file(h, &history_csv(&recs))?;
            }
            Ok(recs.iter().all(|r| r.converged))
        }
    }
}

fn finish_single(rec: &RunRecord, out: Option<&Path>, history: Option<&Path>) -> Result<bool> {
    if let Some(h) = history {
        write_file(h, &history_csv(std::slice::from_ref(rec)))?;
    }
    emit_json(rec, out)?;
    Ok(rec.converged)
}
