use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::qcore::{CsrMatrix, QCoeff, QMatrix, QSparse, Quaternion};

/// Identifier of the generator behind every seeded problem, echoed in
/// reports so seeds can be reproduced elsewhere.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64, f64 via rand 0.9 StandardUniform)";

/// Component multipliers `(1, −1, 2, 1.5)`: `A = A0 − A0 i + 2 A0 j + 1.5 A0 k`.
pub const EXAMPLE_A_COEFFS: [f64; 4] = [1.0, -1.0, 2.0, 1.5];

/// Component multipliers `(1, 2, −1, 1.5)` of the tridiagonal Sylvester `B`.
pub const EXAMPLE_B_COEFFS: [f64; 4] = [1.0, 2.0, -1.0, 1.5];

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Entries uniform in `[0, 1)`, drawn in column-major order.
pub fn uniform_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.random::<f64>()).collect();
    DMatrix::from_vec(rows, cols, data)
}

/// Four uniform components, drawn component 0 first.
pub fn uniform_qmatrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> QMatrix {
    let parts = std::array::from_fn(|_| uniform_matrix(rows, cols, rng));
    QMatrix::from_parts(parts).expect("equal shapes")
}

/// `A = Σ c_s A0 e_s` with `e = (1, i, j, k)`, kept sparse.
pub fn scaled_components(a0: &CsrMatrix, coeffs: [f64; 4]) -> QSparse {
    let parts = std::array::from_fn(|s| {
        if coeffs[s] == 0.0 {
            CsrMatrix::zeros(a0.nrows(), a0.ncols())
        } else {
            a0.scale(coeffs[s])
        }
    });
    QSparse::from_parts(parts).expect("equal shapes")
}

/// `A` from scaled copies of `A0` and a uniform random `n × m` right-hand
/// side.
pub fn build_test_problem(a0: &CsrMatrix, coeffs: [f64; 4], m: usize, seed: u64) -> Result<(QCoeff, QMatrix)> {
    let (n, nc) = a0.shape();
    if n != nc {
        return Err(Error::mismatch("build_test_problem", (n, n), (n, nc)));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let b = uniform_qmatrix(n, m, &mut rng(seed));
    Ok((QCoeff::Sparse(scaled_components(a0, coeffs)), b))
}

/// Dense `A` with components uniform in `[−0.5, 0.5)` plus `√n · I`, and a
/// uniform `[0, 1)` right-hand side.
pub fn random_dense_problem(n: usize, m: usize, seed: u64) -> (QMatrix, QMatrix) {
    let mut r = rng(seed);
    let a = random_dense_operator(n, &mut r);
    let b = uniform_qmatrix(n, m, &mut r);
    (a, b)
}

pub fn random_dense_operator<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QMatrix {
    let mut a = uniform_qmatrix(n, n, rng);
    let shift = (n as f64).sqrt();
    for p in 0..4 {
        a.part_mut(p).add_scalar_mut(-0.5);
    }
    for i in 0..n {
        a.part_mut(0)[(i, i)] += shift;
    }
    a
}

/// Tridiagonal `B0` of order `m`: 2 on the diagonal, 1 above, −1 below.
pub fn tridiagonal_b0(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| match j as isize - i as isize {
        0 => 2.0,
        1 => 1.0,
        -1 => -1.0,
        _ => 0.0,
    })
}

/// `B = Σ c_s B0 e_s` for the tridiagonal `B0`.
pub fn sylvester_b(m: usize, coeffs: [f64; 4]) -> QMatrix {
    let b0 = tridiagonal_b0(m);
    QMatrix::from_parts(std::array::from_fn(|s| &b0 * coeffs[s])).expect("equal shapes")
}

/// `A` from `A0` with [`EXAMPLE_A_COEFFS`], `B` from [`sylvester_b`] with
/// [`EXAMPLE_B_COEFFS`], and a uniform random `C`.
pub fn sylvester_problem(a0: &CsrMatrix, m: usize, seed: u64) -> Result<(QCoeff, QMatrix, QMatrix)> {
    let (a, c) = build_test_problem(a0, EXAMPLE_A_COEFFS, m, seed)?;
    Ok((a, sylvester_b(m, EXAMPLE_B_COEFFS), c))
}

/// A Sylvester problem with known solution.
#[derive(Clone, Debug)]
pub struct PlantedSylvester {
    pub a: QMatrix,
    pub b: QMatrix,
    pub x: QMatrix,
    pub c: QMatrix,
}

/// Random dense `A` (n × n), tridiagonal `B` (m × m), uniform `X*`, and
/// `C = A X* + X* B`.
pub fn planted_sylvester(n: usize, m: usize, seed: u64) -> Result<PlantedSylvester> {
    let mut r = rng(seed);
    let a = random_dense_operator(n, &mut r);
    let b = sylvester_b(m, EXAMPLE_B_COEFFS);
    let x = uniform_qmatrix(n, m, &mut r);
    let c = a.mul(&x)?.add(&x.mul(&b)?)?;
    Ok(PlantedSylvester { a, b, x, c })
}

/// Uniform random quaternion with components in `[−0.5, 0.5)`.
pub fn random_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.random::<f64>() - 0.5,
        rng.random::<f64>() - 0.5,
        rng.random::<f64>() - 0.5,
        rng.random::<f64>() - 0.5,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_deterministic() {
        let a = uniform_qmatrix(3, 2, &mut rng(7));
        let b = uniform_qmatrix(3, 2, &mut rng(7));
        assert_eq!(a, b);
        assert_ne!(a, uniform_qmatrix(3, 2, &mut rng(8)));
        assert!(a.parts().iter().all(|p| p.iter().all(|&v| (0.0..1.0).contains(&v))));
    }

    #[test]
    fn example_coefficients() {
        let a0 = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 0, 3.0)]).unwrap();
        let (a, b) = build_test_problem(&a0, EXAMPLE_A_COEFFS, 2, 1).unwrap();
        let d = a.to_dense();
        assert_eq!(d.get(1, 0), Quaternion::new(3.0, -3.0, 6.0, 4.5));
        assert_eq!(b.shape(), (2, 2));
        let (real, _) = build_test_problem(&a0, [1.0, 0.0, 0.0, 0.0], 1, 1).unwrap();
        assert!(real.to_dense().parts()[1..].iter().all(|p| p.iter().all(|&v| v == 0.0)));
        let rect = CsrMatrix::zeros(2, 3);
        assert!(build_test_problem(&rect, EXAMPLE_A_COEFFS, 1, 1).is_err());
    }

    #[test]
    fn tridiagonal_pattern() {
        let b = tridiagonal_b0(3);
        assert_eq!(b, DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, -1.0, 2.0, 1.0, 0.0, -1.0, 2.0]));
        let q = sylvester_b(3, EXAMPLE_B_COEFFS);
        assert_eq!(q.get(1, 0), Quaternion::new(-1.0, -2.0, 1.0, -1.5));
    }

    #[test]
    fn planted_solution_is_consistent() {
        let p = planted_sylvester(5, 3, 2).unwrap();
        let r = p.a.mul(&p.x).unwrap().add(&p.x.mul(&p.b).unwrap()).unwrap().sub(&p.c).unwrap();
        assert_eq!(r.fro_norm(), 0.0);
    }
}
