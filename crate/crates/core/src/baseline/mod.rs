//! Real-counterpart Gl-FOM and Gl-GMRES: the same global Krylov machinery
//! run on the `4n × 4m` real system `R(A) R(X) = R(B)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qblock::LinearOperator;
use crate::qcore::{CsrMatrix, QCoeff, QMatrix};
use crate::qsolve::{krylov_solve, Projection, SolveReport, SolverConfig};

// (component, sign) of block (r, c) in the real counterpart
const PATTERN: [[(usize, f64); 4]; 4] = [
    [(0, 1.0), (1, -1.0), (2, -1.0), (3, -1.0)],
    [(1, 1.0), (0, 1.0), (3, -1.0), (2, 1.0)],
    [(2, 1.0), (3, 1.0), (0, 1.0), (1, -1.0)],
    [(3, 1.0), (2, -1.0), (1, 1.0), (0, 1.0)],
];

/// A real coefficient matrix in either storage kind.
#[derive(Clone, Debug, PartialEq)]
pub enum RealCoeff {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix),
}

impl RealCoeff {
    /// `R(A)`, keeping the storage kind of `A`.
    pub fn counterpart_of(a: &QCoeff) -> Self {
        match a {
            QCoeff::Dense(d) => RealCoeff::Dense(d.real_counterpart()),
            QCoeff::Sparse(s) => {
                let (n, m) = s.shape();
                let mut triplets = Vec::with_capacity(4 * s.nnz());
                for (r, row) in PATTERN.iter().enumerate() {
                    for (c, &(comp, sign)) in row.iter().enumerate() {
                        triplets.extend(
                            s.part(comp)
                                .triplets()
                                .map(|(i, j, v)| (r * n + i, c * m + j, sign * v)),
                        );
                    }
                }
                RealCoeff::Sparse(
                    CsrMatrix::from_triplets(4 * n, 4 * m, &triplets)
                        .expect("indices lie inside the counterpart"),
                )
            }
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            RealCoeff::Dense(d) => d.shape(),
            RealCoeff::Sparse(s) => s.shape(),
        }
    }

    pub fn mul(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        match self {
            RealCoeff::Dense(d) => {
                if d.ncols() != x.nrows() {
                    return Err(Error::mismatch("RealCoeff::mul", (d.ncols(), x.ncols()), x.shape()));
                }
                Ok(d * x)
            }
            RealCoeff::Sparse(s) => s.mul_dense(x),
        }
    }

    /// Real flops of one product with a block of `cols` columns.
    pub fn mul_flops(&self, cols: usize) -> u64 {
        let (rows, k) = self.shape();
        let cols = cols as u64;
        match self {
            RealCoeff::Dense(_) => rows as u64 * cols * (2 * k as u64 - 1),
            RealCoeff::Sparse(s) => 2 * s.nnz() as u64 * cols,
        }
    }
}

/// The real system `R(A) X + X R(B)_right = R(C)`; `right` is absent for
/// plain `A X = B` problems.
#[derive(Clone, Debug, PartialEq)]
pub struct RealBlockProblem {
    pub coefficient: RealCoeff,
    pub right: Option<DMatrix<f64>>,
    pub rhs: DMatrix<f64>,
}

impl RealBlockProblem {
    pub fn from_quaternion(a: &QCoeff, b: &QMatrix) -> Result<Self> {
        let (n, na) = a.shape();
        if n != na || b.nrows() != n {
            return Err(Error::mismatch("RealBlockProblem", (n, b.ncols()), b.shape()));
        }
        Ok(RealBlockProblem {
            coefficient: RealCoeff::counterpart_of(a),
            right: None,
            rhs: b.real_counterpart(),
        })
    }

    pub fn sylvester_from_quaternion(a: &QCoeff, b: &QMatrix, c: &QMatrix) -> Result<Self> {
        let mut p = Self::from_quaternion(a, c)?;
        if b.nrows() != b.ncols() || b.nrows() != c.ncols() {
            return Err(Error::mismatch(
                "RealBlockProblem (Sylvester B)",
                (c.ncols(), c.ncols()),
                b.shape(),
            ));
        }
        p.right = Some(b.real_counterpart());
        Ok(p)
    }

    /// `(4n, 4m)`.
    pub fn dims(&self) -> (usize, usize) {
        self.rhs.shape()
    }

    pub fn block_width(&self) -> usize {
        self.rhs.ncols()
    }
}

impl LinearOperator<DMatrix<f64>> for RealBlockProblem {
    fn apply(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.shape() != self.dims() {
            return Err(Error::mismatch("RealBlockProblem::apply", self.dims(), x.shape()));
        }
        let mut y = self.coefficient.mul(x)?;
        if let Some(r) = &self.right {
            y += x * r;
        }
        Ok(y)
    }

    fn apply_flops(&self, dims: (usize, usize)) -> u64 {
        let base = self.coefficient.mul_flops(dims.1);
        match &self.right {
            None => base,
            Some(r) => base + (dims.0 * dims.1) as u64 * (2 * r.nrows() as u64 - 1) + (dims.0 * dims.1) as u64,
        }
    }
}

/// Maps a quaternion block to the real block the baselines iterate on.
pub fn to_real_block(w: &QMatrix) -> DMatrix<f64> {
    w.real_counterpart()
}

pub fn from_real_block(x: &DMatrix<f64>) -> Result<QMatrix> {
    QMatrix::from_real_counterpart(x)
}

/// Global FOM on the real counterpart system.
pub fn gl_fom_real(
    p: &RealBlockProblem,
    x0: &DMatrix<f64>,
    cfg: &SolverConfig,
) -> Result<(DMatrix<f64>, SolveReport)> {
    krylov_solve(p, &p.rhs, x0, cfg, Projection::Orthogonal)
}

/// Global GMRES on the real counterpart system.
pub fn gl_gmres_real(
    p: &RealBlockProblem,
    x0: &DMatrix<f64>,
    cfg: &SolverConfig,
) -> Result<(DMatrix<f64>, SolveReport)> {
    krylov_solve(p, &p.rhs, x0, cfg, Projection::MinimalResidual)
}

/// Baseline flops over structure-preserving flops for one application of
/// `A` to an `n × m` block.
pub fn apply_flop_ratio(a: &QCoeff, m: usize) -> f64 {
    let real = RealCoeff::counterpart_of(a).mul_flops(4 * m);
    real as f64 / a.mul_flops(m) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{QSparse, Quaternion};

    fn sample(rows: usize, cols: usize, seed: u64) -> QMatrix {
        let mut s = seed;
        QMatrix::from_fn(rows, cols, |_, _| {
            let mut next = || {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            Quaternion::new(next(), next(), next(), next())
        })
    }

    #[test]
    fn sparse_counterpart_matches_dense() {
        let d = DMatrix::from_fn(4, 4, |i, j| if (i + j) % 2 == 0 { (i * 4 + j) as f64 } else { 0.0 });
        let s = QSparse::real_times_scalar(&CsrMatrix::from_dense(&d), Quaternion::new(1.0, -1.0, 2.0, 1.5));
        let sparse = RealCoeff::counterpart_of(&QCoeff::Sparse(s.clone()));
        let dense = RealCoeff::counterpart_of(&QCoeff::Dense(s.to_dense()));
        match (sparse, dense) {
            (RealCoeff::Sparse(a), RealCoeff::Dense(b)) => assert_eq!(a.to_dense(), b),
            _ => unreachable!(),
        }
    }

    #[test]
    fn problem_round_trip_and_dims() {
        let a = sample(3, 3, 1);
        let b = sample(3, 2, 2);
        let p = RealBlockProblem::from_quaternion(&QCoeff::Dense(a.clone()), &b).unwrap();
        assert_eq!(p.dims(), (12, 8));
        assert_eq!(from_real_block(&p.rhs).unwrap(), b);
        let x = sample(3, 2, 3);
        let y = p.apply(&to_real_block(&x)).unwrap();
        let expected = a.mul(&x).unwrap();
        assert!((from_real_block(&y).unwrap().sub(&expected).unwrap()).fro_norm() < 1e-13);
    }

    #[test]
    fn dense_flop_ratio_is_four() {
        let a = QCoeff::Dense(sample(64, 64, 4));
        assert_eq!(apply_flop_ratio(&a, 3), 4.0);
    }

    #[test]
    fn zero_residual_returns_immediately() {
        let a = sample(3, 3, 5);
        let x0 = sample(3, 1, 6);
        let mut p = RealBlockProblem::from_quaternion(&QCoeff::Dense(a), &x0).unwrap();
        p.rhs = p.apply(&to_real_block(&x0)).unwrap();
        let (x, rep) = gl_gmres_real(&p, &to_real_block(&x0), &SolverConfig::default()).unwrap();
        assert_eq!(rep.iterations, 0);
        assert_eq!(x, to_real_block(&x0));
    }
}
