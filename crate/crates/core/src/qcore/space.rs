use nalgebra::DMatrix;

use super::matrix::QMatrix;
use super::quaternion::Quaternion;
use super::scalar::Scalar;

/// A space of equal-shape matrix blocks with a trace inner product, the
/// "vectors" of a global Krylov method.
pub trait BlockSpace: Clone + Send + Sync {
    type Scalar: Scalar;

    fn dims(&self) -> (usize, usize);
    fn zeros(rows: usize, cols: usize) -> Self;
    /// `⟨self, other⟩ = tr(other* self)`.
    fn inner(&self, other: &Self) -> Self::Scalar;
    fn norm(&self) -> f64;
    /// `self += v · s`, coefficient on the right.
    fn axpy_right(&mut self, v: &Self, s: Self::Scalar);
    fn scale_mut(&mut self, s: f64);
    fn all_finite(&self) -> bool;
    /// Real numbers held by one block.
    fn real_len(&self) -> usize;
    /// Flops of one inner product.
    fn inner_flops(&self) -> u64;
    /// Flops of one `axpy_right`.
    fn axpy_flops(&self) -> u64;
}

impl BlockSpace for QMatrix {
    type Scalar = Quaternion;

    fn dims(&self) -> (usize, usize) {
        self.shape()
    }
    fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix::zeros(rows, cols)
    }
    fn inner(&self, other: &Self) -> Quaternion {
        self.inner_unchecked(other)
    }
    fn norm(&self) -> f64 {
        self.fro_norm()
    }
    fn axpy_right(&mut self, v: &Self, s: Quaternion) {
        self.add_scaled_right(v, s);
    }
    fn scale_mut(&mut self, s: f64) {
        for p in 0..4 {
            *self.part_mut(p) *= s;
        }
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
    fn real_len(&self) -> usize {
        4 * self.nrows() * self.ncols()
    }
    fn inner_flops(&self) -> u64 {
        // 16 multiplies and 16 adds per quaternion entry
        32 * (self.nrows() * self.ncols()) as u64
    }
    fn axpy_flops(&self) -> u64 {
        32 * (self.nrows() * self.ncols()) as u64
    }
}

impl BlockSpace for DMatrix<f64> {
    type Scalar = f64;

    fn dims(&self) -> (usize, usize) {
        self.shape()
    }
    fn zeros(rows: usize, cols: usize) -> Self {
        DMatrix::zeros(rows, cols)
    }
    fn inner(&self, other: &Self) -> f64 {
        self.dot(other)
    }
    fn norm(&self) -> f64 {
        DMatrix::norm(self)
    }
    fn axpy_right(&mut self, v: &Self, s: f64) {
        self.zip_apply(v, |a, b| *a += s * b);
    }
    fn scale_mut(&mut self, s: f64) {
        *self *= s;
    }
    fn all_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
    fn real_len(&self) -> usize {
        self.len()
    }
    fn inner_flops(&self) -> u64 {
        2 * self.len() as u64
    }
    fn axpy_flops(&self) -> u64 {
        2 * self.len() as u64
    }
}
