//! Quaternion scalars, dense and sparse quaternion matrices, and the real
//! counterpart mapping.

mod counterpart;
mod matrix;
mod quaternion;
mod scalar;
mod space;
mod sparse;

pub use counterpart::{is_upper_hessenberg_quaternion, jrs_violation, RealCounterpart};
pub use matrix::{Parallelism, QMatrix};
pub use quaternion::{qinv, qmul, Quaternion, INVERSE_EPSILON};
pub use scalar::Scalar;
pub use space::BlockSpace;
pub use sparse::{CsrMatrix, QCoeff, QSparse};

/// Hamilton product of two quaternion matrices; see [`QMatrix::mul`].
pub fn qmat_mul(a: &QMatrix, v: &QMatrix) -> crate::Result<QMatrix> {
    a.mul(v)
}

/// `⟨X, Y⟩ = tr(Y* X)`.
pub fn inner_product(x: &QMatrix, y: &QMatrix) -> crate::Result<Quaternion> {
    x.inner_product(y)
}

pub fn fro_norm(x: &QMatrix) -> f64 {
    x.fro_norm()
}

pub fn conj_transpose(x: &QMatrix) -> QMatrix {
    x.conj_transpose()
}

pub fn real_counterpart(w: &QMatrix) -> RealCounterpart {
    RealCounterpart::full_of(w)
}
