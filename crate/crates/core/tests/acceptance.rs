//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the criteria execute in order on a
//! quiet machine and the report is always printed.

mod common;

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use qkrylov::baseline::{apply_flop_ratio, gl_fom_real, gl_gmres_real, RealBlockProblem};
use qkrylov::problems::{
    build_test_problem, metrics, parse_matrix_market, planted_sylvester, random_dense_operator, random_dense_problem,
    random_quaternion, rng, stack_columns, synthetic_image, toeplitz_uniform, uniform_qmatrix, QuatImage,
    EXAMPLE_A_COEFFS,
};
use qkrylov::qblock::{global_arnoldi_mgs, star_vec};
use qkrylov::qcore::{is_upper_hessenberg_quaternion, jrs_violation, BlockSpace, QCoeff, QMatrix, Quaternion};
use qkrylov::qsolve::{gl_qfom, gl_qfom_sylvester, gl_qgmres, gl_qgmres_sylvester, SolverConfig};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit_secs: u64, start: Instant, outcome: Outcome) -> Outcome {
    let elapsed = start.elapsed();
    let detail = |d: String| format!("{d}; {:.2}s (limit {limit_secs}s)", elapsed.as_secs_f64());
    match outcome {
        Ok(d) if elapsed < Duration::from_secs(limit_secs) => Ok(detail(d)),
        Ok(d) | Err(d) => Err(detail(d)),
    }
}

fn centered(rows: usize, cols: usize, r: &mut impl rand::Rng) -> QMatrix {
    let mut w = uniform_qmatrix(rows, cols, r);
    for p in 0..4 {
        w.part_mut(p).add_scalar_mut(-0.5);
    }
    w
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1001);
    let (mut worst_mul, mut worst_adj) = (0.0f64, 0.0f64);
    for t in 0..100 {
        let n = 1 + t % 8;
        let k = 1 + (t / 8) % 8;
        let m = 1 + (t * 5) % 8;
        let a = centered(n, k, &mut r);
        let b = centered(k, m, &mut r);
        let lhs = a.mul(&b).unwrap().real_counterpart();
        let rhs = a.real_counterpart() * b.real_counterpart();
        worst_mul = worst_mul.max(common::rel_diff_real(&lhs, &rhs));
        let adj = a.conj_transpose().real_counterpart();
        worst_adj = worst_adj.max(common::rel_diff_real(&adj, &a.real_counterpart().transpose()));
    }
    within(
        5,
        start,
        check(
            worst_mul <= 1e-12 && worst_adj <= 1e-12,
            format!("max rel err product {worst_mul:.2e}, adjoint {worst_adj:.2e}"),
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1002);
    let a = random_dense_operator(30, &mut r);
    let mut v1 = uniform_qmatrix(30, 4, &mut r);
    v1.scale_mut(1.0 / v1.fro_norm());
    let res = global_arnoldi_mgs(&a, v1, 15, None).unwrap();
    let norm_a = a.real_counterpart().singular_values().max();
    let orth = res.basis.orthonormality_error();
    let relation = res.relation_residual(&a).unwrap() / norm_a;
    let mut iso = 0.0f64;
    for _ in 0..20 {
        let alpha: Vec<Quaternion> = (0..res.basis.len()).map(|_| random_quaternion(&mut r)).collect();
        let combo = star_vec(&res.basis, &alpha).unwrap().fro_norm();
        let coeff = alpha.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        iso = iso.max((combo - coeff).abs() / coeff);
    }
    within(
        5,
        start,
        check(
            res.breakdown.is_none() && orth <= 1e-10 && relation <= 1e-10 && iso <= 1e-12,
            format!("orthonormality {orth:.2e}, relation {relation:.2e}·‖A‖, isometry {iso:.2e}"),
        ),
    )
}

fn criterion_3() -> Outcome {
    // probes stop at the default tolerance; far below it the gap sits at
    // the rounding floor (about 1e-17 in RR units) and no longer scales
    let start = Instant::now();
    let cfg = SolverConfig::default().with_probes(5);
    let (mut worst_rel, mut worst_abs, mut probes) = (0.0f64, 0.0f64, 0usize);
    for seed in 0..5 {
        let (a, b) = random_dense_problem(20, 3, 1003 + seed);
        let x0 = QMatrix::zeros(20, 3);
        for (_, rep) in [gl_qfom(&a, &b, &x0, &cfg).unwrap(), gl_qgmres(&a, &b, &x0, &cfg).unwrap()] {
            for p in &rep.probes {
                let gap = (p.estimated_rr - p.true_rr).abs();
                worst_rel = worst_rel.max(gap / p.true_rr);
                worst_abs = worst_abs.max(gap);
                probes += 1;
            }
        }
    }
    within(
        10,
        start,
        check(
            probes > 0 && worst_rel <= 1e-8,
            format!("{probes} probes, max gap {worst_rel:.2e} relative, {worst_abs:.2e} in RR units"),
        ),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let (a, b) = random_dense_problem(8, 2, 1004);
    let x_ref = common::dense_lu_solve(&a, &b);
    let cfg = SolverConfig::default().with_tol(1e-12);
    let x0 = QMatrix::zeros(8, 2);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, (x, rep)) in [
        ("glqfom", gl_qfom(&a, &b, &x0, &cfg).unwrap()),
        ("glqgmres", gl_qgmres(&a, &b, &x0, &cfg).unwrap()),
    ] {
        let err = common::rel_diff(&x, &x_ref);
        ok &= rep.converged && rep.iterations <= 64 && err <= 1e-8;
        parts.push(format!("{name} IT={} err={err:.2e}", rep.iterations));
    }
    within(2, start, check(ok, parts.join(", ")))
}

fn criterion_5() -> Outcome {
    let cfg = SolverConfig::default().with_tol(1e-10);
    let mut worst_rise = f64::NEG_INFINITY;
    for seed in 0..20u64 {
        let n = 6 + (seed as usize * 7) % 25;
        let m = 1 + seed as usize % 4;
        let (a, b) = random_dense_problem(n, m, 1005 + seed);
        let (_, rep) = gl_qgmres(&a, &b, &QMatrix::zeros(n, m), &cfg).unwrap();
        for w in rep.rr_history.windows(2) {
            worst_rise = worst_rise.max(w[1] - w[0]);
        }
    }
    check(worst_rise <= 1e-12, format!("20 problems, largest step increase {worst_rise:.2e}"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let p = planted_sylvester(12, 6, 1006).unwrap();
    let cfg = SolverConfig::default().with_tol(1e-10);
    let x0 = QMatrix::zeros(12, 6);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, (x, rep)) in [
        ("glqfom", gl_qfom_sylvester(p.a.clone(), &p.b, &p.c, &x0, &cfg).unwrap()),
        ("glqgmres", gl_qgmres_sylvester(p.a.clone(), &p.b, &p.c, &x0, &cfg).unwrap()),
    ] {
        let err = common::rel_diff(&x, &p.x);
        ok &= rep.final_true_rr <= 1e-8;
        parts.push(format!("{name} RR={:.2e} err={err:.2e}", rep.final_true_rr));
    }
    within(5, start, check(ok, parts.join(", ")))
}

fn criterion_7() -> Outcome {
    let (a, b) = random_dense_problem(16, 2, 1007);
    let mut v1 = b.clone();
    v1.scale_mut(1.0 / b.fro_norm());
    let res = global_arnoldi_mgs(&a, v1, 8, None).unwrap();
    let h = res.hess.square_qmatrix();
    let structured = is_upper_hessenberg_quaternion(&h, 0.0) && jrs_violation(&h.real_counterpart()) == Some(0.0);
    let (a64, _) = random_dense_problem(64, 1, 1017);
    let ratio = apply_flop_ratio(&QCoeff::Dense(a64), 4);
    check(
        structured && (3.5..=4.5).contains(&ratio),
        format!("JRS-Hessenberg {structured}, dense n=64 flop ratio {ratio:.3}"),
    )
}

fn median_seconds(mut f: impl FnMut() -> f64) -> f64 {
    f();
    common::median((0..5).map(|_| f()).collect())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let a0 = parse_matrix_market(common::data_path("west0067_substitute.mtx")).unwrap();
    let (a, b) = build_test_problem(&a0, EXAMPLE_A_COEFFS, 3, 0).unwrap();
    let p = RealBlockProblem::from_quaternion(&a, &b).unwrap();
    let cfg = SolverConfig::default();
    let x0 = QMatrix::zeros(67, 3);
    let xr = DMatrix::zeros(268, 12);

    let (_, g) = gl_qgmres(&a, &b, &x0, &cfg).unwrap();
    let (_, f) = gl_qfom(&a, &b, &x0, &cfg).unwrap();
    let converged = [&g, &f].iter().all(|r| r.converged && r.final_true_rr < 1e-6 && r.iterations <= 3000);
    let dims_ok = p.dims() == (268, 12) && b.shape() == (67, 3);

    let t_qg = median_seconds(|| gl_qgmres(&a, &b, &x0, &cfg).unwrap().1.wall_seconds);
    let t_rg = median_seconds(|| gl_gmres_real(&p, &xr, &cfg).unwrap().1.wall_seconds);
    let t_qf = median_seconds(|| gl_qfom(&a, &b, &x0, &cfg).unwrap().1.wall_seconds);
    let t_rf = median_seconds(|| gl_fom_real(&p, &xr, &cfg).unwrap().1.wall_seconds);
    within(
        60,
        start,
        check(
            converged && dims_ok && t_qg < t_rg && t_qf < t_rf,
            format!(
                "west0067 stand-in, seed 0: glqgmres IT={} RR={:.2e} {:.4}s vs glgmres-real {:.4}s; \
                 glqfom IT={} RR={:.2e} {:.4}s vs glfom-real {:.4}s; dims [67,3] vs [{},{}]",
                g.iterations,
                g.final_true_rr,
                t_qg,
                t_rg,
                f.iterations,
                f.final_true_rr,
                t_qf,
                t_rf,
                p.dims().0,
                p.dims().1
            ),
        ),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let original = synthetic_image(32, 32);
    let a = QMatrix::from_real(toeplitz_uniform(32, 4));
    let blurred = a.mul(original.as_qmatrix()).unwrap();
    let blurred_img = QuatImage::from_qmatrix(&blurred);
    let before = metrics(&original, &blurred_img).unwrap();
    let cfg = SolverConfig::default().with_tol(1e-2);
    let x0 = QMatrix::zeros(32, 32);
    let mut ok = true;
    let mut parts = vec![format!("blurred PSNR {:.2} SSIM {:.4}", before.psnr, before.ssim)];
    for (name, (x, rep)) in [
        ("glqgmres", gl_qgmres(&a, &blurred, &x0, &cfg).unwrap()),
        ("glqfom", gl_qfom(&a, &blurred, &x0, &cfg).unwrap()),
    ] {
        let after = metrics(&original, &QuatImage::from_qmatrix(&x)).unwrap();
        ok &= rep.converged && after.psnr - before.psnr >= 3.0 && after.ssim > before.ssim;
        parts.push(format!("{name} IT={} PSNR {:.2} SSIM {:.4}", rep.iterations, after.psnr, after.ssim));
    }
    within(30, start, check(ok, parts.join(", ")))
}

fn criterion_10() -> Outcome {
    let (a, b) = random_dense_problem(8, 2, 1010);
    let (op, rhs) = stack_columns(a.clone(), &b).unwrap();
    let cfg = SolverConfig::default().with_tol(1e-15).with_maxit(10);
    let (_, rep) = gl_qgmres(&op, &rhs, &QMatrix::zeros(16, 1), &cfg).unwrap();
    let oracle = common::vector_gmres_history(&common::block_diagonal(&a, 2), &rhs, 10);
    let est = rep.step_estimates();
    let worst = est.iter().zip(&oracle).map(|(e, o)| (e - o).abs()).fold(0.0f64, f64::max);
    check(
        est.len() == 10 && worst <= 1e-10,
        format!("{} steps compared, max gap {worst:.2e}", est.len().min(oracle.len())),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("ring homomorphism", criterion_1),
        ("global Arnoldi", criterion_2),
        ("residual identities", criterion_3),
        ("dense oracle", criterion_4),
        ("GMRES monotonicity", criterion_5),
        ("planted Sylvester", criterion_6),
        ("structure and flops", criterion_7),
        ("sparse test problem", criterion_8),
        ("deblurring", criterion_9),
        ("m=1 reduction", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name}: {detail}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
