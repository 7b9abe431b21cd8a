use nalgebra::DMatrix;

use super::basis::BlockBasis;
use super::operator::LinearOperator;
use crate::error::{Error, Result};
use crate::qcore::{BlockSpace, QMatrix, Quaternion, Scalar};

/// Relative factor of the default breakdown threshold, `1e-14 · ‖A V_1‖`.
pub const DEFAULT_BREAKDOWN_FACTOR: f64 = 1e-14;

/// Tolerance on `‖V_1‖ − 1` accepted by [`ArnoldiProcess::new`].
pub const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Orthogonalization {
    /// All coefficients from the unmodified image, then one subtraction.
    Classical,
    #[default]
    Modified,
}

#[derive(Clone, Debug, Default)]
pub struct ArnoldiOptions {
    pub orthogonalization: Orthogonalization,
    /// Run a second Gram-Schmidt sweep every step.
    pub reorthogonalize: bool,
    /// Absolute threshold on `h_{j+1,j}`; `None` uses `1e-14 · ‖A V_1‖`.
    pub breakdown_tol: Option<f64>,
    pub memory_budget_bytes: Option<usize>,
}

/// `(k+1) × k` upper Hessenberg matrix built one column at a time.
#[derive(Clone, Debug, PartialEq)]
pub struct Hessenberg<S> {
    // column j holds rows 0..=j+1
    columns: Vec<Vec<S>>,
}

/// The quaternion Hessenberg matrix `H̄_k` of the global Arnoldi process.
pub type QHessenberg = Hessenberg<Quaternion>;

impl<S: Scalar> Hessenberg<S> {
    pub fn new() -> Self {
        Hessenberg {
            columns: Vec::new(),
        }
    }

    /// Number of columns `k`.
    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.columns
            .get(j)
            .and_then(|c| c.get(i))
            .copied()
            .unwrap_or_else(S::zero)
    }

    /// Rows `0..=j+1` of column `j`.
    pub fn column(&self, j: usize) -> &[S] {
        &self.columns[j]
    }

    pub(crate) fn push_column(&mut self, col: Vec<S>) {
        debug_assert_eq!(col.len(), self.columns.len() + 2);
        self.columns.push(col);
    }

    /// Dense `(k+1) × k` form.
    pub fn to_dense(&self) -> DMatrix<S> {
        let k = self.ncols();
        DMatrix::from_fn(k + 1, k, |i, j| self.get(i, j))
    }

    /// The square `k × k` part `H_k`.
    pub fn square(&self) -> DMatrix<S> {
        let k = self.ncols();
        DMatrix::from_fn(k, k, |i, j| self.get(i, j))
    }
}

impl<S: Scalar> Default for Hessenberg<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl QHessenberg {
    /// `H̄_k` as a `(k+1) × k` quaternion matrix.
    pub fn to_qmatrix(&self) -> QMatrix {
        let k = self.ncols();
        QMatrix::from_fn(k + 1, k, |i, j| self.get(i, j))
    }

    pub fn square_qmatrix(&self) -> QMatrix {
        let k = self.ncols();
        QMatrix::from_fn(k, k, |i, j| self.get(i, j))
    }
}

/// Outcome of one Arnoldi step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArnoldiStep {
    /// 1-based index `j` of the column just computed.
    pub index: usize,
    /// `‖W_j‖` after orthogonalization, before any thresholding.
    pub raw_subdiagonal: f64,
    pub breakdown: bool,
}

/// Incremental global Arnoldi process over any [`BlockSpace`].
#[derive(Clone, Debug)]
pub struct ArnoldiProcess<M: BlockSpace> {
    basis: BlockBasis<M>,
    hess: Hessenberg<M::Scalar>,
    options: ArnoldiOptions,
    breakdown_tol: Option<f64>,
    breakdown: Option<usize>,
    flops: u64,
}

impl<M: BlockSpace> ArnoldiProcess<M> {
    pub fn new(v1: M, options: ArnoldiOptions) -> Result<Self> {
        let norm = v1.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        let mut basis = BlockBasis::new();
        basis.push(v1);
        let breakdown_tol = options.breakdown_tol;
        let process = ArnoldiProcess {
            basis,
            hess: Hessenberg::new(),
            options,
            breakdown_tol,
            breakdown: None,
            flops: 0,
        };
        process.check_memory(1)?;
        Ok(process)
    }

    pub fn basis(&self) -> &BlockBasis<M> {
        &self.basis
    }

    pub fn hessenberg(&self) -> &Hessenberg<M::Scalar> {
        &self.hess
    }

    /// Step index at which the process broke down, if it did.
    pub fn breakdown(&self) -> Option<usize> {
        self.breakdown
    }

    /// Breakdown threshold in effect (known after the first step).
    pub fn breakdown_tol(&self) -> Option<f64> {
        self.breakdown_tol
    }

    /// Flops spent so far, operator applications included.
    pub fn flops(&self) -> u64 {
        self.flops
    }

    pub fn steps(&self) -> usize {
        self.hess.ncols()
    }

    /// Computes column `j` of `H̄` and, unless the process breaks down, the
    /// next basis block `V_{j+1}`.
    pub fn step<Op: LinearOperator<M> + ?Sized>(&mut self, op: &Op) -> Result<ArnoldiStep> {
        if let Some(step) = self.breakdown {
            return Err(Error::ArnoldiExhausted { step });
        }
        let j = self.hess.ncols();
        let vj = self.basis.block(j);
        let dims = vj.dims();
        let mut w = op.apply(vj)?;
        if w.dims() != dims {
            return Err(Error::OperatorShapeMismatch {
                input: dims,
                output: w.dims(),
            });
        }
        self.flops += op.apply_flops(dims);
        if !w.all_finite() {
            return Err(Error::NonFinite("operator application"));
        }
        let tol = *self
            .breakdown_tol
            .get_or_insert_with(|| DEFAULT_BREAKDOWN_FACTOR * w.norm());

        let mut col = vec![M::Scalar::zero(); j + 2];
        let sweeps = if self.options.reorthogonalize { 2 } else { 1 };
        for _ in 0..sweeps {
            self.orthogonalize(&mut w, &mut col[..=j]);
        }

        let h_next = w.norm();
        let breakdown = h_next <= tol;
        if breakdown {
            self.breakdown = Some(j + 1);
        } else {
            col[j + 1] = M::Scalar::from_real(h_next);
            self.check_memory(self.basis.len() + 1)?;
            w.scale_mut(1.0 / h_next);
            self.basis.push(w);
        }
        self.hess.push_column(col);
        Ok(ArnoldiStep {
            index: j + 1,
            raw_subdiagonal: h_next,
            breakdown,
        })
    }

    fn orthogonalize(&mut self, w: &mut M, col: &mut [M::Scalar]) {
        let blocks = &self.basis.blocks()[..col.len()];
        match self.options.orthogonalization {
            Orthogonalization::Modified => {
                for (h, vi) in col.iter_mut().zip(blocks) {
                    let c = w.inner(vi);
                    w.axpy_right(vi, -c);
                    *h = *h + c;
                }
            }
            Orthogonalization::Classical => {
                let coeffs: Vec<M::Scalar> = blocks.iter().map(|vi| w.inner(vi)).collect();
                for ((h, vi), c) in col.iter_mut().zip(blocks).zip(coeffs) {
                    w.axpy_right(vi, -c);
                    *h = *h + c;
                }
            }
        }
        if let Some(v) = blocks.first() {
            self.flops += col.len() as u64 * (v.inner_flops() + v.axpy_flops());
        }
    }

    fn check_memory(&self, blocks: usize) -> Result<()> {
        if let Some(budget) = self.options.memory_budget_bytes {
            let per_block = self.basis.block(0).real_len() * std::mem::size_of::<f64>();
            let required = per_block * blocks;
            if required > budget {
                return Err(Error::MemoryBudget { required, budget });
            }
        }
        Ok(())
    }

    pub fn into_result(self) -> ArnoldiResult<M> {
        ArnoldiResult {
            basis: self.basis,
            hess: self.hess,
            breakdown: self.breakdown,
        }
    }
}

/// Basis, Hessenberg matrix and breakdown information of a finished run.
#[derive(Clone, Debug)]
pub struct ArnoldiResult<M: BlockSpace> {
    /// `V_1..V_{k+1}`, or `V_1..V_j` after a breakdown at step `j`.
    pub basis: BlockBasis<M>,
    pub hess: Hessenberg<M::Scalar>,
    pub breakdown: Option<usize>,
}

impl<M: BlockSpace> ArnoldiResult<M> {
    /// `‖A 𝒱_k − 𝒱_{k+1} * H̄_k‖`, the Frobenius norm over all `k` blocks.
    pub fn relation_residual<Op: LinearOperator<M> + ?Sized>(&self, op: &Op) -> Result<f64> {
        let k = self.hess.ncols();
        let mut total = 0.0;
        for j in 0..k {
            let mut r = op.apply(self.basis.block(j))?;
            let rows = (j + 2).min(self.basis.len());
            for i in 0..rows {
                r.axpy_right(self.basis.block(i), -self.hess.get(i, j));
            }
            total += r.norm().powi(2);
        }
        Ok(total.sqrt())
    }
}

fn run<M, Op>(
    op: &Op,
    v1: M,
    k: usize,
    breakdown_tol: Option<f64>,
    orthogonalization: Orthogonalization,
) -> Result<ArnoldiResult<M>>
where
    M: BlockSpace,
    Op: LinearOperator<M> + ?Sized,
{
    if k == 0 {
        return Err(Error::InvalidArgument("Arnoldi needs k >= 1".into()));
    }
    let mut process = ArnoldiProcess::new(
        v1,
        ArnoldiOptions {
            orthogonalization,
            breakdown_tol,
            ..ArnoldiOptions::default()
        },
    )?;
    for _ in 0..k {
        if process.step(op)?.breakdown {
            break;
        }
    }
    Ok(process.into_result())
}

/// `k` steps of the global Arnoldi process with modified Gram-Schmidt.
pub fn global_arnoldi_mgs<M, Op>(
    op: &Op,
    v1: M,
    k: usize,
    breakdown_tol: Option<f64>,
) -> Result<ArnoldiResult<M>>
where
    M: BlockSpace,
    Op: LinearOperator<M> + ?Sized,
{
    run(op, v1, k, breakdown_tol, Orthogonalization::Modified)
}

/// Classical Gram-Schmidt variant of [`global_arnoldi_mgs`].
pub fn global_arnoldi_cgs<M, Op>(
    op: &Op,
    v1: M,
    k: usize,
    breakdown_tol: Option<f64>,
) -> Result<ArnoldiResult<M>>
where
    M: BlockSpace,
    Op: LinearOperator<M> + ?Sized,
{
    run(op, v1, k, breakdown_tol, Orthogonalization::Classical)
}
