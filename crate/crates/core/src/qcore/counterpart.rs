use nalgebra::DMatrix;

use super::matrix::QMatrix;
use crate::error::Result;

/// A real representation of a quaternion matrix: either the full `4n × 4m`
/// counterpart or just its first block column `[W0; W1; W2; W3]`.
#[derive(Clone, Debug, PartialEq)]
pub enum RealCounterpart {
    Full(DMatrix<f64>),
    Column(DMatrix<f64>),
}

impl RealCounterpart {
    pub fn full_of(w: &QMatrix) -> Self {
        RealCounterpart::Full(w.real_counterpart())
    }

    pub fn column_of(w: &QMatrix) -> Self {
        RealCounterpart::Column(w.real_counterpart_column())
    }

    pub fn to_qmatrix(&self) -> Result<QMatrix> {
        match self {
            RealCounterpart::Full(m) => QMatrix::from_real_counterpart(m),
            RealCounterpart::Column(c) => QMatrix::from_real_counterpart_column(c),
        }
    }

    pub fn to_full(&self) -> Result<DMatrix<f64>> {
        match self {
            RealCounterpart::Full(m) => Ok(m.clone()),
            RealCounterpart::Column(_) => Ok(self.to_qmatrix()?.real_counterpart()),
        }
    }

    pub fn to_column(&self) -> Result<DMatrix<f64>> {
        match self {
            RealCounterpart::Column(c) => Ok(c.clone()),
            RealCounterpart::Full(m) => {
                let rows = m.nrows();
                let cols = m.ncols() / 4;
                Ok(m.view((0, 0), (rows, cols)).into_owned())
            }
        }
    }
}

/// Largest deviation of a real `4p × 4q` matrix from the JRS-symmetric
/// pattern of a real counterpart. Returns `None` if a dimension is not a
/// multiple of four.
pub fn jrs_violation(m: &DMatrix<f64>) -> Option<f64> {
    let (r, c) = m.shape();
    if r % 4 != 0 || c % 4 != 0 {
        return None;
    }
    let q = QMatrix::from_real_counterpart(m).ok()?;
    Some((m - q.real_counterpart()).amax())
}

/// True when `W0` is upper Hessenberg and `W1, W2, W3` upper triangular,
/// to within `tol` in absolute value.
pub fn is_upper_hessenberg_quaternion(w: &QMatrix, tol: f64) -> bool {
    let (n, m) = w.shape();
    for j in 0..m {
        for i in 0..n {
            if i > j + 1 && w.part(0)[(i, j)].abs() > tol {
                return false;
            }
            if i > j && (1..4).any(|s| w.part(s)[(i, j)].abs() > tol) {
                return false;
            }
        }
    }
    true
}
