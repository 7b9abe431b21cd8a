use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::Scalar;

/// Diagonal entries below this fraction of the largest diagonal magnitude are
/// treated as singular.
pub const SINGULAR_REL_TOL: f64 = 1e-14;

/// Solves `R y = u` for upper triangular `R`, bottom-up, inverting each
/// diagonal entry from the left: `y_i = R_ii⁻¹ (u_i − Σ_{k>i} R_ik y_k)`.
pub fn back_substitute<S: Scalar>(r: &DMatrix<S>, u: &[S]) -> Result<Vec<S>> {
    let k = r.nrows();
    if r.ncols() != k || u.len() != k {
        return Err(Error::mismatch("back_substitute", (k, k), (r.ncols(), u.len())));
    }
    let scale = (0..k).map(|i| r[(i, i)].modulus()).fold(0.0, f64::max);
    let mut y = vec![S::zero(); k];
    for i in (0..k).rev() {
        let d = r[(i, i)];
        if d.modulus() <= SINGULAR_REL_TOL * scale {
            return Err(Error::SingularDiagonal(i));
        }
        let mut acc = u[i];
        for c in i + 1..k {
            acc = acc - r[(i, c)] * y[c];
        }
        let inv = d.try_inv().map_err(|_| Error::SingularDiagonal(i))?;
        y[i] = inv * acc;
    }
    Ok(y)
}
