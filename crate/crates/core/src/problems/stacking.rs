use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qblock::LinearOperator;
use crate::qcore::{Parallelism, QCoeff, QMatrix};

/// Column-stacks an `n × m` matrix into an `nm × 1` vector.
pub fn stack(x: &QMatrix) -> QMatrix {
    let len = x.nrows() * x.ncols();
    QMatrix::from_parts(std::array::from_fn(|s| DMatrix::from_column_slice(len, 1, x.part(s).as_slice())))
        .expect("equal shapes")
}

/// Inverse of [`stack`].
pub fn unstack(v: &QMatrix, n: usize, m: usize) -> Result<QMatrix> {
    if v.shape() != (n * m, 1) {
        return Err(Error::mismatch("unstack", (n * m, 1), v.shape()));
    }
    QMatrix::from_parts(std::array::from_fn(|s| DMatrix::from_column_slice(n, m, v.part(s).as_slice())))
}

/// `diag(A, …, A)` acting on column-stacked vectors, never materialized.
#[derive(Clone, Debug)]
pub struct StackedOperator {
    coeff: QCoeff,
    m: usize,
    parallelism: Parallelism,
}

impl StackedOperator {
    pub fn new(a: impl Into<QCoeff>, m: usize) -> Result<Self> {
        let coeff = a.into();
        let (n, k) = coeff.shape();
        if n != k {
            return Err(Error::mismatch("StackedOperator", (n, n), (n, k)));
        }
        Ok(StackedOperator {
            coeff,
            m,
            parallelism: Parallelism::Sequential,
        })
    }

    pub fn with_parallelism(mut self, parallelism: Parallelism) -> Self {
        self.parallelism = parallelism;
        self
    }

    /// Length `nm` of the stacked vectors.
    pub fn len(&self) -> usize {
        self.coeff.shape().0 * self.m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl LinearOperator<QMatrix> for StackedOperator {
    fn apply(&self, x: &QMatrix) -> Result<QMatrix> {
        let n = self.coeff.shape().0;
        let block = unstack(x, n, self.m)?;
        Ok(stack(&self.coeff.mul_with(&block, self.parallelism)?))
    }

    fn apply_flops(&self, _dims: (usize, usize)) -> u64 {
        self.coeff.mul_flops(1) * self.m as u64
    }
}

/// The stacked form of `A X = B`: the block-diagonal operator and `vec(X)`.
pub fn stack_columns(a: impl Into<QCoeff>, x: &QMatrix) -> Result<(StackedOperator, QMatrix)> {
    let op = StackedOperator::new(a, x.ncols())?;
    if op.coeff.shape().1 != x.nrows() {
        return Err(Error::mismatch("stack_columns", (op.coeff.shape().1, x.ncols()), x.shape()));
    }
    Ok((op, stack(x)))
}
