use nalgebra::DMatrix;

use super::quaternion::Quaternion;
use crate::error::{Error, Result};

/// Dense quaternion matrix `W = W0 + W1 i + W2 j + W3 k`, stored as its four
/// real component matrices (each column-major).
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    parts: [DMatrix<f64>; 4],
}

/// Whether the component products of [`QMatrix::mul_with`] may run on the
/// rayon pool. The assembly order is fixed either way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    #[default]
    Sequential,
    Rayon,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            parts: std::array::from_fn(|_| DMatrix::zeros(rows, cols)),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        m.parts[0].fill_with_identity();
        m
    }

    /// Builds from four equal-shape components.
    pub fn from_parts(parts: [DMatrix<f64>; 4]) -> Result<Self> {
        let shape = parts[0].shape();
        for p in &parts[1..] {
            if p.shape() != shape {
                return Err(Error::mismatch("QMatrix::from_parts", shape, p.shape()));
            }
        }
        Ok(QMatrix { parts })
    }

    /// A quaternion matrix with zero imaginary parts.
    pub fn from_real(m: DMatrix<f64>) -> Self {
        let (r, c) = m.shape();
        QMatrix {
            parts: [
                m,
                DMatrix::zeros(r, c),
                DMatrix::zeros(r, c),
                DMatrix::zeros(r, c),
            ],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut m = QMatrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Real matrix `a` times the quaternion scalar `q` (entrywise `a_ij q`).
    pub fn real_times_scalar(a: &DMatrix<f64>, q: Quaternion) -> Self {
        QMatrix {
            parts: [a * q.q0, a * q.q1, a * q.q2, a * q.q3],
        }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.parts[0].nrows()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.parts[0].ncols()
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        self.parts[0].shape()
    }

    #[inline]
    pub fn part(&self, s: usize) -> &DMatrix<f64> {
        &self.parts[s]
    }

    #[inline]
    pub fn part_mut(&mut self, s: usize) -> &mut DMatrix<f64> {
        &mut self.parts[s]
    }

    pub fn parts(&self) -> &[DMatrix<f64>; 4] {
        &self.parts
    }

    pub fn into_parts(self) -> [DMatrix<f64>; 4] {
        self.parts
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        Quaternion::new(
            self.parts[0][(i, j)],
            self.parts[1][(i, j)],
            self.parts[2][(i, j)],
            self.parts[3][(i, j)],
        )
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.parts[0][(i, j)] = q.q0;
        self.parts[1][(i, j)] = q.q1;
        self.parts[2][(i, j)] = q.q2;
        self.parts[3][(i, j)] = q.q3;
    }

    pub fn is_finite(&self) -> bool {
        self.parts.iter().all(|p| p.iter().all(|x| x.is_finite()))
    }

    /// `X* = X0ᵀ − X1ᵀ i − X2ᵀ j − X3ᵀ k`.
    pub fn conj_transpose(&self) -> QMatrix {
        QMatrix {
            parts: [
                self.parts[0].transpose(),
                -self.parts[1].transpose(),
                -self.parts[2].transpose(),
                -self.parts[3].transpose(),
            ],
        }
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_same_shape("QMatrix::add", other)?;
        Ok(QMatrix {
            parts: std::array::from_fn(|s| &self.parts[s] + &other.parts[s]),
        })
    }

    pub fn sub(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_same_shape("QMatrix::sub", other)?;
        Ok(QMatrix {
            parts: std::array::from_fn(|s| &self.parts[s] - &other.parts[s]),
        })
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        QMatrix {
            parts: std::array::from_fn(|p| &self.parts[p] * s),
        }
    }

    /// `self · q`: every entry multiplied by `q` from the right.
    pub fn mul_scalar_right(&self, q: Quaternion) -> QMatrix {
        let mut out = QMatrix::zeros(self.nrows(), self.ncols());
        out.add_scaled_right(self, q);
        out
    }

    /// `self += v · q` with `q` on the right of every entry.
    pub fn add_scaled_right(&mut self, v: &QMatrix, q: Quaternion) {
        debug_assert_eq!(self.shape(), v.shape());
        let [v0, v1, v2, v3] = &v.parts;
        let [s0, s1, s2, s3] = q.to_array();
        let [w0, w1, w2, w3] = &mut self.parts;
        let w0 = w0.as_mut_slice();
        let w1 = w1.as_mut_slice();
        let w2 = w2.as_mut_slice();
        let w3 = w3.as_mut_slice();
        let (v0, v1, v2, v3) = (v0.as_slice(), v1.as_slice(), v2.as_slice(), v3.as_slice());
        for e in 0..w0.len() {
            let (a0, a1, a2, a3) = (v0[e], v1[e], v2[e], v3[e]);
            w0[e] += a0 * s0 - a1 * s1 - a2 * s2 - a3 * s3;
            w1[e] += a0 * s1 + a1 * s0 + a2 * s3 - a3 * s2;
            w2[e] += a0 * s2 - a1 * s3 + a2 * s0 + a3 * s1;
            w3[e] += a0 * s3 + a1 * s2 - a2 * s1 + a3 * s0;
        }
    }

    /// Quaternion matrix product through the first block column of the real
    /// counterpart: `R(A V)_c = R(A) R(V)_c`.
    pub fn mul(&self, v: &QMatrix) -> Result<QMatrix> {
        self.mul_with(v, Parallelism::Sequential)
    }

    pub fn mul_with(&self, v: &QMatrix, par: Parallelism) -> Result<QMatrix> {
        if self.ncols() != v.nrows() {
            return Err(Error::mismatch(
                "qmat_mul",
                (self.ncols(), v.ncols()),
                v.shape(),
            ));
        }
        let stacked = hstack4(&v.parts);
        let products: [DMatrix<f64>; 4] = match par {
            Parallelism::Sequential => std::array::from_fn(|s| &self.parts[s] * &stacked),
            Parallelism::Rayon => {
                let ((p0, p1), (p2, p3)) = rayon::join(
                    || {
                        rayon::join(
                            || &self.parts[0] * &stacked,
                            || &self.parts[1] * &stacked,
                        )
                    },
                    || {
                        rayon::join(
                            || &self.parts[2] * &stacked,
                            || &self.parts[3] * &stacked,
                        )
                    },
                );
                [p0, p1, p2, p3]
            }
        };
        Ok(assemble_products(&products, v.ncols()))
    }

    /// Quaternion trace inner product `⟨X, Y⟩ = tr(Y* X)`.
    pub fn inner_product(&self, y: &QMatrix) -> Result<Quaternion> {
        self.check_same_shape("inner_product", y)?;
        Ok(self.inner_unchecked(y))
    }

    pub(crate) fn inner_unchecked(&self, y: &QMatrix) -> Quaternion {
        let [x0, x1, x2, x3] = &self.parts;
        let [y0, y1, y2, y3] = &y.parts;
        let (x0, x1, x2, x3) = (x0.as_slice(), x1.as_slice(), x2.as_slice(), x3.as_slice());
        let (y0, y1, y2, y3) = (y0.as_slice(), y1.as_slice(), y2.as_slice(), y3.as_slice());
        let mut acc = [0.0f64; 4];
        for e in 0..x0.len() {
            // conj(y) * x
            let (a0, a1, a2, a3) = (y0[e], -y1[e], -y2[e], -y3[e]);
            let (b0, b1, b2, b3) = (x0[e], x1[e], x2[e], x3[e]);
            acc[0] += a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3;
            acc[1] += a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2;
            acc[2] += a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1;
            acc[3] += a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0;
        }
        Quaternion::from_array(acc)
    }

    /// Frobenius norm `sqrt(Re tr(X* X))`.
    pub fn fro_norm(&self) -> f64 {
        let sq: f64 = self.parts.iter().map(|p| p.norm_squared()).sum();
        sq.sqrt()
    }

    /// Full `4n × 4m` real counterpart.
    pub fn real_counterpart(&self) -> DMatrix<f64> {
        let (n, m) = self.shape();
        let [w0, w1, w2, w3] = &self.parts;
        // (block row, block col) -> (component, sign)
        const PATTERN: [[(usize, f64); 4]; 4] = [
            [(0, 1.0), (1, -1.0), (2, -1.0), (3, -1.0)],
            [(1, 1.0), (0, 1.0), (3, -1.0), (2, 1.0)],
            [(2, 1.0), (3, 1.0), (0, 1.0), (1, -1.0)],
            [(3, 1.0), (2, -1.0), (1, 1.0), (0, 1.0)],
        ];
        let comps = [w0, w1, w2, w3];
        let mut full = DMatrix::zeros(4 * n, 4 * m);
        for (br, row) in PATTERN.iter().enumerate() {
            for (bc, &(s, sign)) in row.iter().enumerate() {
                full.view_mut((br * n, bc * m), (n, m))
                    .copy_from(&(comps[s] * sign));
            }
        }
        full
    }

    /// First block column `[W0; W1; W2; W3]` of the real counterpart.
    pub fn real_counterpart_column(&self) -> DMatrix<f64> {
        let (n, m) = self.shape();
        let mut col = DMatrix::zeros(4 * n, m);
        for s in 0..4 {
            col.view_mut((s * n, 0), (n, m)).copy_from(&self.parts[s]);
        }
        col
    }

    /// Inverse of [`QMatrix::real_counterpart`]; reads the first block column.
    pub fn from_real_counterpart(full: &DMatrix<f64>) -> Result<QMatrix> {
        let (r, c) = full.shape();
        if r % 4 != 0 || c % 4 != 0 {
            return Err(Error::mismatch(
                "from_real_counterpart",
                (4 * (r / 4), 4 * (c / 4)),
                (r, c),
            ));
        }
        let (n, m) = (r / 4, c / 4);
        QMatrix::from_parts(std::array::from_fn(|s| {
            full.view((s * n, 0), (n, m)).into_owned()
        }))
    }

    /// Inverse of [`QMatrix::real_counterpart_column`].
    pub fn from_real_counterpart_column(col: &DMatrix<f64>) -> Result<QMatrix> {
        let (r, m) = col.shape();
        if r % 4 != 0 {
            return Err(Error::mismatch(
                "from_real_counterpart_column",
                (4 * (r / 4), m),
                (r, m),
            ));
        }
        let n = r / 4;
        QMatrix::from_parts(std::array::from_fn(|s| {
            col.view((s * n, 0), (n, m)).into_owned()
        }))
    }

    fn check_same_shape(&self, op: &'static str, other: &QMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::mismatch(op, self.shape(), other.shape()));
        }
        Ok(())
    }
}

/// `[V0 V1 V2 V3]`, an `n × 4m` real matrix.
pub(crate) fn hstack4(parts: &[DMatrix<f64>; 4]) -> DMatrix<f64> {
    let (n, m) = parts[0].shape();
    let mut out = DMatrix::zeros(n, 4 * m);
    for (t, p) in parts.iter().enumerate() {
        out.view_mut((0, t * m), (n, m)).copy_from(p);
    }
    out
}

/// Combines the four products `P_s = A_s [V0 V1 V2 V3]` into the components
/// of `A V` using the real-counterpart sign pattern.
pub(crate) fn assemble_products(products: &[DMatrix<f64>; 4], m: usize) -> QMatrix {
    let n = products[0].nrows();
    let blk = |s: usize, t: usize| products[s].view((0, t * m), (n, m));
    // (A_s V_t) terms for each output component, with signs
    const TERMS: [[(usize, usize, f64); 4]; 4] = [
        [(0, 0, 1.0), (1, 1, -1.0), (2, 2, -1.0), (3, 3, -1.0)],
        [(1, 0, 1.0), (0, 1, 1.0), (3, 2, -1.0), (2, 3, 1.0)],
        [(2, 0, 1.0), (3, 1, 1.0), (0, 2, 1.0), (1, 3, -1.0)],
        [(3, 0, 1.0), (2, 1, -1.0), (1, 2, 1.0), (0, 3, 1.0)],
    ];
    let parts = std::array::from_fn(|c| {
        let mut acc = blk(TERMS[c][0].0, TERMS[c][0].1).into_owned();
        for &(s, t, sign) in &TERMS[c][1..] {
            if sign > 0.0 {
                acc += blk(s, t);
            } else {
                acc -= blk(s, t);
            }
        }
        acc
    });
    QMatrix { parts }
}
