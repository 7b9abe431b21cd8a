use crate::error::Result;
use crate::qcore::{BlockSpace, Parallelism, QCoeff, QMatrix};

/// A linear map on blocks of one fixed shape.
///
/// Arnoldi and the solvers only ever see this trait, so a plain coefficient
/// matrix, a Sylvester pair or a block-diagonal stacking all plug in the same
/// way.
pub trait LinearOperator<M: BlockSpace>: Sync {
    fn apply(&self, x: &M) -> Result<M>;

    /// Analytic real flop count of one application to a block of `dims`.
    fn apply_flops(&self, _dims: (usize, usize)) -> u64 {
        0
    }
}

/// Wraps a closure as an operator (flop count reported as zero).
pub struct FnOperator<F>(pub F);

impl<M, F> LinearOperator<M> for FnOperator<F>
where
    M: BlockSpace,
    F: Fn(&M) -> Result<M> + Sync,
{
    fn apply(&self, x: &M) -> Result<M> {
        (self.0)(x)
    }
}

/// `X ↦ A X` for a dense or sparse quaternion coefficient.
#[derive(Clone, Debug)]
pub struct MatrixOperator {
    pub coeff: QCoeff,
    pub parallelism: Parallelism,
}

impl MatrixOperator {
    pub fn new(coeff: impl Into<QCoeff>) -> Self {
        MatrixOperator {
            coeff: coeff.into(),
            parallelism: Parallelism::Sequential,
        }
    }

    pub fn with_parallelism(mut self, parallelism: Parallelism) -> Self {
        self.parallelism = parallelism;
        self
    }
}

impl LinearOperator<QMatrix> for MatrixOperator {
    fn apply(&self, x: &QMatrix) -> Result<QMatrix> {
        self.coeff.mul_with(x, self.parallelism)
    }

    fn apply_flops(&self, dims: (usize, usize)) -> u64 {
        self.coeff.mul_flops(dims.1)
    }
}

impl LinearOperator<QMatrix> for QCoeff {
    fn apply(&self, x: &QMatrix) -> Result<QMatrix> {
        self.mul(x)
    }

    fn apply_flops(&self, dims: (usize, usize)) -> u64 {
        self.mul_flops(dims.1)
    }
}

impl LinearOperator<QMatrix> for QMatrix {
    fn apply(&self, x: &QMatrix) -> Result<QMatrix> {
        self.mul(x)
    }

    fn apply_flops(&self, dims: (usize, usize)) -> u64 {
        let n = self.nrows() as u64;
        let k = self.ncols() as u64;
        4 * n * dims.1 as u64 * (8 * k - 1)
    }
}
