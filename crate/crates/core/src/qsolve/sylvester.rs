use crate::error::{Error, Result};
use crate::qblock::LinearOperator;
use crate::qcore::{Parallelism, QCoeff, QMatrix};

/// `X ↦ A X + X B` for square `A` (n × n) and `B` (m × m).
///
/// The equation `A X + X B = C` has a unique solution when the right
/// eigenvalues of `A` and `−B` are disjoint; this is not checked.
#[derive(Clone, Debug)]
pub struct SylvesterOperator {
    a: QCoeff,
    b: QMatrix,
    parallelism: Parallelism,
}

impl SylvesterOperator {
    pub fn new(a: impl Into<QCoeff>, b: QMatrix) -> Result<Self> {
        let a = a.into();
        let (n, na) = a.shape();
        if n != na {
            return Err(Error::mismatch("sylvester_operator (A)", (n, n), (n, na)));
        }
        if b.nrows() != b.ncols() {
            return Err(Error::mismatch(
                "sylvester_operator (B)",
                (b.nrows(), b.nrows()),
                b.shape(),
            ));
        }
        Ok(SylvesterOperator {
            a,
            b,
            parallelism: Parallelism::Sequential,
        })
    }

    pub fn with_parallelism(mut self, parallelism: Parallelism) -> Self {
        self.parallelism = parallelism;
        self
    }

    /// Shape of the unknown, `(n, m)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.a.shape().0, self.b.nrows())
    }

    /// `X ↦ A X + X B` commutes with right scalar multiplication exactly
    /// when `B` is real.
    pub fn is_right_linear(&self) -> bool {
        super::real_span::is_real(&self.b)
    }

    pub fn a(&self) -> &QCoeff {
        &self.a
    }

    pub fn b(&self) -> &QMatrix {
        &self.b
    }
}

pub fn sylvester_operator(a: &QMatrix, b: &QMatrix) -> Result<SylvesterOperator> {
    SylvesterOperator::new(a.clone(), b.clone())
}

impl LinearOperator<QMatrix> for SylvesterOperator {
    fn apply(&self, x: &QMatrix) -> Result<QMatrix> {
        if x.shape() != self.dims() {
            return Err(Error::mismatch("sylvester_operator", self.dims(), x.shape()));
        }
        let ax = self.a.mul_with(x, self.parallelism)?;
        let xb = x.mul_with(&self.b, self.parallelism)?;
        ax.add(&xb)
    }

    fn apply_flops(&self, dims: (usize, usize)) -> u64 {
        let (n, m) = (dims.0 as u64, dims.1 as u64);
        self.a.mul_flops(dims.1) + 4 * n * m * (8 * m - 1) + 4 * n * m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Quaternion;

    fn sample(rows: usize, cols: usize, seed: u64) -> QMatrix {
        let mut s = seed;
        QMatrix::from_fn(rows, cols, |_, _| {
            let mut next = || {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            Quaternion::new(next(), next(), next(), next())
        })
    }

    #[test]
    fn zero_b_reduces_to_left_product() {
        let a = sample(4, 4, 1);
        let x = sample(4, 3, 2);
        let op = sylvester_operator(&a, &QMatrix::zeros(3, 3)).unwrap();
        assert_eq!(op.apply(&x).unwrap(), a.mul(&x).unwrap());
    }

    #[test]
    fn scalar_identities_add() {
        let a = QMatrix::identity(3).scale(2.0);
        let b = QMatrix::identity(2).scale(-0.5);
        let x = sample(3, 2, 3);
        let op = sylvester_operator(&a, &b).unwrap();
        assert!(op.apply(&x).unwrap().sub(&x.scale(1.5)).unwrap().fro_norm() < 1e-15);
    }

    #[test]
    fn matches_real_counterpart_expansion() {
        let a = sample(3, 3, 4);
        let b = sample(2, 2, 5);
        let x = sample(3, 2, 6);
        let op = sylvester_operator(&a, &b).unwrap();
        let expected = &a.real_counterpart() * x.real_counterpart() + x.real_counterpart() * b.real_counterpart();
        let got = op.apply(&x).unwrap().real_counterpart();
        assert!((got - expected).amax() < 1e-13);
    }

    #[test]
    fn shape_errors() {
        assert!(sylvester_operator(&sample(3, 2, 1), &sample(2, 2, 1)).is_err());
        assert!(sylvester_operator(&sample(3, 3, 1), &sample(2, 3, 1)).is_err());
        let op = sylvester_operator(&sample(3, 3, 1), &sample(2, 2, 1)).unwrap();
        assert!(op.apply(&sample(3, 3, 1)).is_err());
    }
}
