//! Block products over a basis of matrices and the global Arnoldi process.

mod arnoldi;
mod basis;
mod operator;

pub use arnoldi::{
    global_arnoldi_cgs, global_arnoldi_mgs, ArnoldiOptions, ArnoldiProcess, ArnoldiResult,
    ArnoldiStep, Hessenberg, Orthogonalization, QHessenberg, DEFAULT_BREAKDOWN_FACTOR,
    NORMALIZATION_TOL,
};
pub use basis::{boxtimes, star_mat, star_vec, BlockBasis};
pub use operator::{FnOperator, LinearOperator, MatrixOperator};
