use crate::error::Result;
use crate::qblock::LinearOperator;
use crate::qcore::{BlockSpace, QMatrix};

/// A quaternion matrix viewed as an element of a real vector space: inner
/// product `Re tr(Y* X)` and real coefficients only.
///
/// Operators that are linear over the reals but not right-linear over the
/// quaternions, such as `X ↦ A X + X B` with non-real `B`, are handled
/// correctly in this view.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSpan(pub QMatrix);

impl BlockSpace for RealSpan {
    type Scalar = f64;

    fn dims(&self) -> (usize, usize) {
        self.0.shape()
    }
    fn zeros(rows: usize, cols: usize) -> Self {
        RealSpan(QMatrix::zeros(rows, cols))
    }
    fn inner(&self, other: &Self) -> f64 {
        (0..4).map(|s| self.0.part(s).dot(other.0.part(s))).sum()
    }
    fn norm(&self) -> f64 {
        self.0.fro_norm()
    }
    fn axpy_right(&mut self, v: &Self, s: f64) {
        for p in 0..4 {
            self.0.part_mut(p).zip_apply(v.0.part(p), |a, b| *a += s * b);
        }
    }
    fn scale_mut(&mut self, s: f64) {
        for p in 0..4 {
            *self.0.part_mut(p) *= s;
        }
    }
    fn all_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn real_len(&self) -> usize {
        4 * self.0.nrows() * self.0.ncols()
    }
    fn inner_flops(&self) -> u64 {
        8 * (self.0.nrows() * self.0.ncols()) as u64
    }
    fn axpy_flops(&self) -> u64 {
        8 * (self.0.nrows() * self.0.ncols()) as u64
    }
}

/// Lifts a quaternion operator to [`RealSpan`].
pub struct RealSpanOperator<'a, Op: ?Sized>(pub &'a Op);

impl<Op> LinearOperator<RealSpan> for RealSpanOperator<'_, Op>
where
    Op: LinearOperator<QMatrix> + ?Sized,
{
    fn apply(&self, x: &RealSpan) -> Result<RealSpan> {
        Ok(RealSpan(self.0.apply(&x.0)?))
    }

    fn apply_flops(&self, dims: (usize, usize)) -> u64 {
        self.0.apply_flops(dims)
    }
}

/// True when `q` has no imaginary part anywhere.
pub(crate) fn is_real(q: &QMatrix) -> bool {
    (1..4).all(|s| q.part(s).iter().all(|&v| v == 0.0))
}
