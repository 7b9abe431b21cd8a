use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qblock::{ArnoldiOptions, Orthogonalization};

/// Stopping rule and Arnoldi knobs shared by every solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Target relative residual `‖B − A X_j‖ / ‖R_0‖`.
    pub tol: f64,
    pub maxit: usize,
    /// Absolute threshold on `h_{j+1,j}`; `None` uses `1e-14 · ‖A V_1‖`.
    pub breakdown_tol: Option<f64>,
    pub reorthogonalize: bool,
    /// Form `X_j` and record the true residual every `p` steps. Costs one
    /// extra operator application per probe.
    pub probe_every: Option<usize>,
    pub memory_budget_bytes: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-6,
            maxit: 3000,
            breakdown_tol: None,
            reorthogonalize: false,
            probe_every: None,
            memory_budget_bytes: None,
        }
    }
}

impl SolverConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_maxit(mut self, maxit: usize) -> Self {
        self.maxit = maxit;
        self
    }

    pub fn with_probes(mut self, every: usize) -> Self {
        self.probe_every = Some(every);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if self.maxit == 0 {
            return Err(Error::InvalidArgument("maxit must be at least 1".into()));
        }
        if self.probe_every == Some(0) {
            return Err(Error::InvalidArgument("probe_every must be at least 1".into()));
        }
        if let Some(t) = self.breakdown_tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument(format!("breakdown_tol must be >= 0, got {t}")));
            }
        }
        Ok(())
    }

    pub(crate) fn arnoldi_options(&self) -> ArnoldiOptions {
        ArnoldiOptions {
            orthogonalization: Orthogonalization::Modified,
            reorthogonalize: self.reorthogonalize,
            breakdown_tol: self.breakdown_tol,
            memory_budget_bytes: self.memory_budget_bytes,
        }
    }
}
