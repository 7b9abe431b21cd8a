use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::QMatrix;

/// Symmetric banded Toeplitz matrix with `1/(2s−1)` on every diagonal
/// `|i − j| ≤ s`.
pub fn toeplitz_uniform(n: usize, s: usize) -> DMatrix<f64> {
    let v = 1.0 / (2.0 * s as f64 - 1.0);
    DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) <= s { v } else { 0.0 })
}

/// Banded Gaussian Toeplitz matrix,
/// `exp(−(i−j)²/(2σ²)) / (σ√(2π))` for `|i − j| ≤ r`.
pub fn toeplitz_gaussian(n: usize, r: usize, sigma: f64) -> DMatrix<f64> {
    let scale = 1.0 / (sigma * (2.0 * PI).sqrt());
    DMatrix::from_fn(n, n, |i, j| {
        let d = i.abs_diff(j);
        if d <= r {
            let d = d as f64;
            scale * (-(d * d) / (2.0 * sigma * sigma)).exp()
        } else {
            0.0
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BlurKind {
    Uniform { s: usize },
    Gaussian { r: usize, sigma: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlurSpec {
    pub kind: BlurKind,
    pub n: usize,
}

impl BlurSpec {
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            BlurKind::Uniform { s } if s < 1 => Err(Error::InvalidArgument("uniform blur needs s >= 1".into())),
            BlurKind::Gaussian { sigma, .. } if !(sigma > 0.0 && sigma.is_finite()) => {
                Err(Error::InvalidArgument(format!("gaussian blur needs sigma > 0, got {sigma}")))
            }
            _ if self.n == 0 => Err(Error::InvalidArgument("blur order must be at least 1".into())),
            _ => Ok(()),
        }
    }

    pub fn matrix(&self) -> Result<DMatrix<f64>> {
        self.validate()?;
        Ok(match self.kind {
            BlurKind::Uniform { s } => toeplitz_uniform(self.n, s),
            BlurKind::Gaussian { r, sigma } => toeplitz_gaussian(self.n, r, sigma),
        })
    }
}

pub fn kronecker(h0: &DMatrix<f64>, h1: &DMatrix<f64>) -> DMatrix<f64> {
    h0.kronecker(h1)
}

/// `A = A1 i − 0.5 A1 j − 0.5 A1 k`.
pub fn multichannel_blur(a1: &DMatrix<f64>) -> Result<QMatrix> {
    if a1.nrows() != a1.ncols() {
        return Err(Error::mismatch("multichannel_blur", (a1.nrows(), a1.nrows()), a1.shape()));
    }
    QMatrix::from_parts([
        DMatrix::zeros(a1.nrows(), a1.ncols()),
        a1.clone(),
        a1 * -0.5,
        a1 * -0.5,
    ])
}

/// `H0 ⊗ H1` with a 16 × 16 Gaussian `H0` (r = σ = 3) and an 8 × 8 uniform
/// `H1` (s = 5), giving a 128 × 128 `A1`.
pub fn standard_multichannel_a1() -> DMatrix<f64> {
    kronecker(&toeplitz_gaussian(16, 3, 3.0), &toeplitz_uniform(8, 5))
}
