#![allow(dead_code)]

use nalgebra::DMatrix;
use qkrylov::qcore::{QMatrix, Quaternion};

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn rel_diff(a: &QMatrix, b: &QMatrix) -> f64 {
    a.sub(b).unwrap().fro_norm() / b.fro_norm().max(f64::MIN_POSITIVE)
}

pub fn rel_diff_real(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Solves `A X = B` by LU on `R(A)` against the first block column of `R(B)`.
pub fn dense_lu_solve(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let ra = a.real_counterpart();
    let rb = b.real_counterpart_column();
    let x = ra.lu().solve(&rb).expect("nonsingular counterpart");
    QMatrix::from_real_counterpart_column(&x).unwrap()
}

/// Relative minimal residuals `min ‖b − A x‖ / ‖b‖` over `x` in the first
/// `k` quaternion Krylov spaces of a vector problem, `k = 1..=steps`.
///
/// Works purely in real arithmetic: the quaternion span of `v` is the
/// column space of `R(v)`, so each Krylov block is four real columns.
pub fn vector_gmres_history(a: &QMatrix, b: &QMatrix, steps: usize) -> Vec<f64> {
    assert_eq!(b.ncols(), 1);
    let ra = a.real_counterpart();
    let r0 = b.real_counterpart_column();
    let beta = r0.norm();
    let rows = ra.nrows();

    let mut basis = DMatrix::<f64>::zeros(rows, 0);
    let mut next = b.real_counterpart() / beta;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        for _ in 0..2 {
            let proj = &basis * (basis.transpose() * &next);
            next -= proj;
        }
        let q = next.clone().qr().q();
        let k = basis.ncols();
        basis = basis.insert_columns(k, 4, 0.0);
        basis.view_mut((0, k), (rows, 4)).copy_from(&q);

        let w = &ra * &basis;
        let qw = w.qr().q();
        let r = &r0 - &qw * (qw.transpose() * &r0);
        out.push(r.norm() / beta);

        next = &ra * q;
    }
    out
}

/// `diag(A, …, A)` with `m` copies.
pub fn block_diagonal(a: &QMatrix, m: usize) -> QMatrix {
    let n = a.nrows();
    QMatrix::from_fn(n * m, n * m, |i, j| {
        if i / n == j / n {
            a.get(i % n, j % n)
        } else {
            Quaternion::ZERO
        }
    })
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}
