use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::{Quaternion, Scalar};

/// Generalized Givens rotation acting on rows `index, index + 1`.
///
/// The active block is `G = [g11 g12; g21 g22]`; rotations are applied as
/// `G*` from the left.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GivensRotation<S> {
    pub index: usize,
    pub g11: S,
    pub g12: S,
    pub g21: S,
    pub g22: S,
}

pub type GivensRotationQ = GivensRotation<Quaternion>;

/// Builds the rotation that maps `(h_ii, h_next)` to `(r, 0)` with
/// `r = ‖(h_ii, h_next)‖` real and positive. Returns the rotation and `r`.
pub fn make_givens<S: Scalar>(index: usize, h_ii: S, h_next: S) -> Result<(GivensRotation<S>, f64)> {
    let (a, b) = (h_ii.modulus(), h_next.modulus());
    let r = a.hypot(b);
    if r == 0.0 || !r.is_finite() {
        return Err(Error::ZeroPair { index });
    }
    let g11 = h_ii.scale(1.0 / r);
    let g21 = h_next.scale(1.0 / r);
    let (g12, g22) = if a <= b {
        let m21 = g21.modulus();
        (S::from_real(m21), -(g21.scale(1.0 / m21) * g11.conj()))
    } else {
        let m11 = g11.modulus();
        (-(g11.scale(1.0 / m11) * g21.conj()), S::from_real(m11))
    };
    Ok((
        GivensRotation {
            index,
            g11,
            g12,
            g21,
            g22,
        },
        r,
    ))
}

impl<S: Scalar> GivensRotation<S> {
    pub fn identity(index: usize) -> Self {
        GivensRotation {
            index,
            g11: S::one(),
            g12: S::zero(),
            g21: S::zero(),
            g22: S::one(),
        }
    }

    /// `G* (a, b)ᵀ`.
    #[inline]
    pub fn apply_adjoint(&self, a: S, b: S) -> (S, S) {
        (
            self.g11.conj() * a + self.g21.conj() * b,
            self.g12.conj() * a + self.g22.conj() * b,
        )
    }

    /// The rotation embedded in a `dim × dim` identity.
    pub fn to_dense(&self, dim: usize) -> DMatrix<S> {
        let mut g = DMatrix::from_fn(dim, dim, |i, j| if i == j { S::one() } else { S::zero() });
        let i = self.index;
        g[(i, i)] = self.g11;
        g[(i, i + 1)] = self.g12;
        g[(i + 1, i)] = self.g21;
        g[(i + 1, i + 1)] = self.g22;
        g
    }
}

/// Applies `G_i*` for each rotation, in order, to entries `(i, i+1)`.
pub fn apply_givens_in_place<S: Scalar>(rotations: &[GivensRotation<S>], column: &mut [S]) -> Result<()> {
    for g in rotations {
        let i = g.index;
        if i + 1 >= column.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: column.len(),
            });
        }
        let (a, b) = g.apply_adjoint(column[i], column[i + 1]);
        column[i] = a;
        column[i + 1] = b;
    }
    Ok(())
}

pub fn apply_givens_column<S: Scalar>(rotations: &[GivensRotation<S>], column: &[S]) -> Result<Vec<S>> {
    let mut out = column.to_vec();
    apply_givens_in_place(rotations, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unitary_defect(g: &GivensRotationQ) -> f64 {
        // columns of G must be orthonormal
        let c11 = g.g11.conj() * g.g11 + g.g21.conj() * g.g21;
        let c12 = g.g11.conj() * g.g12 + g.g21.conj() * g.g22;
        let c22 = g.g12.conj() * g.g12 + g.g22.conj() * g.g22;
        (c11 - Quaternion::ONE)
            .abs()
            .max(c12.abs())
            .max((c22 - Quaternion::ONE).abs())
    }

    #[test]
    fn unit_pair_gives_identity() {
        let (g, r) = make_givens(0, Quaternion::ONE, Quaternion::ZERO).unwrap();
        assert_eq!(r, 1.0);
        assert_eq!(g, GivensRotation::identity(0));
        assert_eq!(
            g.apply_adjoint(Quaternion::ONE, Quaternion::ZERO),
            (Quaternion::ONE, Quaternion::ZERO)
        );
    }

    #[test]
    fn pure_swap_case() {
        let (g, r) = make_givens(0, Quaternion::ZERO, Quaternion::I).unwrap();
        assert_eq!(r, 1.0);
        let (a, b) = g.apply_adjoint(Quaternion::ZERO, Quaternion::I);
        assert!((a - Quaternion::ONE).abs() < 1e-15);
        assert!(b.abs() < 1e-15);
    }

    #[test]
    fn random_pairs_are_annihilated() {
        let pairs = [
            (Quaternion::new(0.3, -1.2, 0.4, 2.0), Quaternion::new(-0.7, 0.1, 0.9, -0.5)),
            (Quaternion::new(1e-3, 0.0, -2e-3, 0.0), Quaternion::new(5.0, 1.0, 0.0, 3.0)),
            (Quaternion::new(-4.0, 2.0, 1.0, 0.5), Quaternion::real(0.25)),
            (Quaternion::new(1.0, 1.0, 0.0, 0.0), Quaternion::new(0.0, 0.0, 1.0, 1.0)),
        ];
        for (hi, hn) in pairs {
            let (g, r) = make_givens(3, hi, hn).unwrap();
            assert!((r - (hi.norm_sqr() + hn.norm_sqr()).sqrt()).abs() < 1e-14 * r);
            let (a, b) = g.apply_adjoint(hi, hn);
            assert!((a - Quaternion::real(r)).abs() < 1e-13 * r, "{a:?} vs {r}");
            assert!(b.abs() < 1e-13 * r);
            assert!(unitary_defect(&g) < 1e-13);
        }
    }

    #[test]
    fn negative_leading_entry_rotates_to_positive() {
        let (g, r) = make_givens(0, Quaternion::new(0.0, 0.0, -3.0, 0.0), Quaternion::ZERO).unwrap();
        let (a, b) = g.apply_adjoint(Quaternion::new(0.0, 0.0, -3.0, 0.0), Quaternion::ZERO);
        assert_eq!(r, 3.0);
        assert!((a - Quaternion::real(3.0)).abs() < 1e-15);
        assert_eq!(b, Quaternion::ZERO);
    }

    #[test]
    fn equal_magnitudes_take_first_branch() {
        let (g, _) = make_givens(0, Quaternion::J, Quaternion::K).unwrap();
        // first branch: g12 is real
        assert_eq!((g.g12.q1, g.g12.q2, g.g12.q3), (0.0, 0.0, 0.0));
        assert!(g.g12.q0 > 0.0);
    }

    #[test]
    fn real_scalars_reduce_to_classic_rotation() {
        let (g, r) = make_givens(0, 3.0f64, -4.0).unwrap();
        assert_eq!(r, 5.0);
        let (a, b) = g.apply_adjoint(3.0, -4.0);
        assert!((a - 5.0).abs() < 1e-15 && b.abs() < 1e-15);
    }

    #[test]
    fn zero_pair_is_rejected() {
        assert!(matches!(
            make_givens(2, Quaternion::ZERO, Quaternion::ZERO),
            Err(Error::ZeroPair { index: 2 })
        ));
    }

    #[test]
    fn column_application() {
        let col = [Quaternion::new(1.0, 2.0, 0.0, 0.0), Quaternion::real(2.0), Quaternion::K];
        assert_eq!(apply_givens_column::<Quaternion>(&[], &col).unwrap(), col.to_vec());
        let (g, r) = make_givens(0, col[0], col[1]).unwrap();
        let out = apply_givens_column(&[g], &col).unwrap();
        assert!((out[0] - Quaternion::real(r)).abs() < 1e-14);
        assert!(out[1].abs() < 1e-14);
        assert_eq!(out[2], Quaternion::K);
        let bad = GivensRotation::<Quaternion>::identity(2);
        assert!(matches!(
            apply_givens_column(&[bad], &col),
            Err(Error::IndexOutOfRange { index: 2, len: 3 })
        ));
    }
}
