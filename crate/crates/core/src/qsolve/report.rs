use serde::{Deserialize, Serialize};

/// Which projection the Krylov solver imposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projection {
    /// Galerkin condition, the FOM family.
    Orthogonal,
    /// Residual minimization, the GMRES family.
    MinimalResidual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    /// `maxit` reached; the returned iterate is the last one formed.
    MaxIterExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BreakdownInfo {
    /// 1-based step at which `h_{j+1,j}` fell below the threshold.
    pub step: usize,
    /// The value of `h_{j+1,j}` before thresholding.
    pub subdiagonal: f64,
    pub threshold: f64,
}

/// Estimated and directly computed relative residual at one step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualProbe {
    pub iteration: usize,
    pub estimated_rr: f64,
    pub true_rr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub projection: Projection,
    /// Field of the Krylov coefficients, `"quaternion"` or `"real"`.
    pub coefficient_field: String,
    pub status: SolveStatus,
    pub converged: bool,
    pub iterations: usize,
    /// `‖R_0‖`.
    pub beta: f64,
    /// Entry 0 is the initial relative residual (1, or 0 when `X_0` is
    /// exact); entry `j` is the estimate after step `j`. FOM steps with a
    /// singular rotated diagonal carry `+∞` (serialized as `null`).
    pub rr_history: Vec<f64>,
    pub final_estimated_rr: f64,
    pub final_true_rr: f64,
    pub wall_seconds: f64,
    pub breakdown: Option<BreakdownInfo>,
    /// FOM steps whose rotated `h_jj` was numerically zero.
    pub singular_steps: Vec<usize>,
    /// The final FOM system was singular and the minimal-residual iterate
    /// was returned instead.
    pub fom_fallback: bool,
    pub probes: Vec<ResidualProbe>,
    /// Analytic flop total: Arnoldi, operator applications, final update.
    pub flops: u64,
    /// Analytic flops of one operator application.
    pub apply_flops: u64,
}

impl SolveReport {
    /// The history without the leading initial entry.
    pub fn step_estimates(&self) -> &[f64] {
        self.rr_history.get(1..).unwrap_or(&[])
    }
}
