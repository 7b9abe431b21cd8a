//! Gl-QFOM and Gl-QGMRES with incremental quaternion Givens QR, and their
//! Sylvester front ends.

mod config;
mod givens;
mod krylov;
mod real_span;
mod report;
mod sylvester;
mod triangular;

pub use config::SolverConfig;
pub use givens::{
    apply_givens_column, apply_givens_in_place, make_givens, GivensRotation, GivensRotationQ,
};
pub use krylov::krylov_solve;
pub use real_span::{RealSpan, RealSpanOperator};
pub use report::{BreakdownInfo, Projection, ResidualProbe, SolveReport, SolveStatus};
pub use sylvester::{sylvester_operator, SylvesterOperator};
pub use triangular::{back_substitute, SINGULAR_REL_TOL};

use crate::error::Result;
use crate::qblock::LinearOperator;
use crate::qcore::{QCoeff, QMatrix};

/// Global quaternion FOM for `A X = B`.
pub fn gl_qfom<Op>(a: &Op, b: &QMatrix, x0: &QMatrix, cfg: &SolverConfig) -> Result<(QMatrix, SolveReport)>
where
    Op: LinearOperator<QMatrix> + ?Sized,
{
    krylov_solve(a, b, x0, cfg, Projection::Orthogonal)
}

/// Global quaternion GMRES for `A X = B`.
pub fn gl_qgmres<Op>(a: &Op, b: &QMatrix, x0: &QMatrix, cfg: &SolverConfig) -> Result<(QMatrix, SolveReport)>
where
    Op: LinearOperator<QMatrix> + ?Sized,
{
    krylov_solve(a, b, x0, cfg, Projection::MinimalResidual)
}

/// Global Krylov solve of `A X + X B = C`.
///
/// With real `B` the operator is right-linear over the quaternions and the
/// quaternion-coefficient method runs unchanged. Otherwise `X q B ≠ X B q`,
/// so the Krylov space is built with real coefficients over the same
/// quaternion storage; [`SolveReport::coefficient_field`] tells which.
pub fn sylvester_solve(
    op: &SylvesterOperator,
    c: &QMatrix,
    x0: &QMatrix,
    cfg: &SolverConfig,
    projection: Projection,
) -> Result<(QMatrix, SolveReport)> {
    if op.is_right_linear() {
        krylov_solve(op, c, x0, cfg, projection)
    } else {
        let (x, rep) = krylov_solve(
            &RealSpanOperator(op),
            &RealSpan(c.clone()),
            &RealSpan(x0.clone()),
            cfg,
            projection,
        )?;
        Ok((x.0, rep))
    }
}

/// Gl-QFOM for `A X + X B = C`.
pub fn gl_qfom_sylvester(
    a: impl Into<QCoeff>,
    b: &QMatrix,
    c: &QMatrix,
    x0: &QMatrix,
    cfg: &SolverConfig,
) -> Result<(QMatrix, SolveReport)> {
    let op = SylvesterOperator::new(a, b.clone())?;
    sylvester_solve(&op, c, x0, cfg, Projection::Orthogonal)
}

/// Gl-QGMRES for `A X + X B = C`.
pub fn gl_qgmres_sylvester(
    a: impl Into<QCoeff>,
    b: &QMatrix,
    c: &QMatrix,
    x0: &QMatrix,
    cfg: &SolverConfig,
) -> Result<(QMatrix, SolveReport)> {
    let op = SylvesterOperator::new(a, b.clone())?;
    sylvester_solve(&op, c, x0, cfg, Projection::MinimalResidual)
}
