use std::time::Instant;

use nalgebra::DMatrix;

use super::config::SolverConfig;
use super::givens::{apply_givens_in_place, make_givens, GivensRotation};
use super::report::{BreakdownInfo, Projection, ResidualProbe, SolveReport, SolveStatus};
use super::triangular::{back_substitute, SINGULAR_REL_TOL};
use crate::error::{Error, Result};
use crate::qblock::{ArnoldiProcess, BlockBasis, LinearOperator};
use crate::qcore::{BlockSpace, Scalar};

/// Incrementally rotated Hessenberg factor: Givens rotations, the columns of
/// the triangular factor they produce, and the rotated right-hand side `u`.
struct RotatedSystem<S> {
    rotations: Vec<GivensRotation<S>>,
    // column c holds rows 0..=c
    tri: Vec<Vec<S>>,
    u: Vec<S>,
    diag_scale: f64,
}

impl<S: Scalar> RotatedSystem<S> {
    fn new(beta: f64) -> Self {
        RotatedSystem {
            rotations: Vec::new(),
            tri: Vec::new(),
            u: vec![S::from_real(beta)],
            diag_scale: 0.0,
        }
    }

    /// Applies `G_1 … G_{j−1}` to Hessenberg column `j` (length `j + 1`).
    fn rotate_previous(&self, col: &mut [S]) -> Result<()> {
        apply_givens_in_place(&self.rotations, col)
    }

    /// Appends the rotation annihilating `col[j]`, or none when that entry
    /// is already exactly zero, and records the reduced column.
    fn absorb(&mut self, mut col: Vec<S>) -> Result<()> {
        let j = col.len() - 1;
        if col[j] != S::zero() {
            let (g, r) = make_givens(j - 1, col[j - 1], col[j])?;
            col[j - 1] = S::from_real(r);
            col[j] = S::zero();
            let (a, b) = g.apply_adjoint(self.u[j - 1], S::zero());
            self.u[j - 1] = a;
            self.u.push(b);
            self.rotations.push(g);
        } else {
            self.u.push(S::zero());
        }
        self.diag_scale = self.diag_scale.max(col[j - 1].modulus());
        col.truncate(j);
        self.tri.push(col);
        Ok(())
    }

    /// Solves the leading `k × k` triangular system, optionally with an
    /// extra last column that has not been absorbed yet.
    fn solve(&self, extra: Option<&[S]>) -> Result<Vec<S>> {
        let k = self.tri.len() + extra.is_some() as usize;
        let r = DMatrix::from_fn(k, k, |i, c| {
            let col = if c < self.tri.len() { &self.tri[c][..] } else { extra.expect("k counts it") };
            if i <= c {
                col[i]
            } else {
                S::zero()
            }
        });
        back_substitute(&r, &self.u[..k])
    }
}

/// `X_0 + 𝒱 * y` over the leading `y.len()` blocks.
fn update<M: BlockSpace>(x0: &M, basis: &BlockBasis<M>, y: &[M::Scalar]) -> M {
    let mut x = x0.clone();
    for (v, &c) in basis.blocks().iter().zip(y) {
        x.axpy_right(v, c);
    }
    x
}

fn residual_norm<M, Op>(op: &Op, b: &M, x: &M) -> Result<f64>
where
    M: BlockSpace,
    Op: LinearOperator<M> + ?Sized,
{
    let mut r = b.clone();
    r.axpy_right(&op.apply(x)?, -M::Scalar::one());
    Ok(r.norm())
}

/// Unrestarted global FOM or GMRES on `op(X) = B` from `X_0`, over any block
/// space. Returns the final iterate and its report; hitting `maxit` is not an
/// error and is signalled through [`SolveReport::status`].
pub fn krylov_solve<M, Op>(
    op: &Op,
    b: &M,
    x0: &M,
    cfg: &SolverConfig,
    projection: Projection,
) -> Result<(M, SolveReport)>
where
    M: BlockSpace,
    Op: LinearOperator<M> + ?Sized,
{
    cfg.validate()?;
    if b.dims() != x0.dims() {
        return Err(Error::mismatch("krylov_solve", b.dims(), x0.dims()));
    }
    if !b.all_finite() || !x0.all_finite() {
        return Err(Error::NonFinite("right-hand side or initial guess"));
    }
    let start = Instant::now();
    let dims = b.dims();
    let apply_flops = op.apply_flops(dims);
    let axpy_flops = b.axpy_flops();

    let ax0 = op.apply(x0)?;
    if ax0.dims() != dims {
        return Err(Error::OperatorShapeMismatch {
            input: dims,
            output: ax0.dims(),
        });
    }
    let mut r0 = b.clone();
    r0.axpy_right(&ax0, -M::Scalar::one());
    let beta = r0.norm();
    if !beta.is_finite() {
        return Err(Error::NonFinite("initial residual"));
    }

    let mut report = SolveReport {
        projection,
        coefficient_field: M::Scalar::FIELD.to_string(),
        status: SolveStatus::Converged,
        converged: true,
        iterations: 0,
        beta,
        rr_history: vec![if beta == 0.0 { 0.0 } else { 1.0 }],
        final_estimated_rr: 0.0,
        final_true_rr: 0.0,
        wall_seconds: 0.0,
        breakdown: None,
        singular_steps: Vec::new(),
        fom_fallback: false,
        probes: Vec::new(),
        flops: apply_flops + axpy_flops,
        apply_flops,
    };
    if beta == 0.0 {
        report.wall_seconds = start.elapsed().as_secs_f64();
        return Ok((x0.clone(), report));
    }

    r0.scale_mut(1.0 / beta);
    let mut arnoldi = ArnoldiProcess::new(r0, cfg.arnoldi_options())?;
    let mut sys = RotatedSystem::<M::Scalar>::new(beta);

    let mut estimate = 1.0;
    let mut y: Vec<M::Scalar> = Vec::new();
    for j in 1..=cfg.maxit {
        let step = arnoldi.step(op)?;
        if step.breakdown {
            report.breakdown = Some(BreakdownInfo {
                step: step.index,
                subdiagonal: step.raw_subdiagonal,
                threshold: arnoldi.breakdown_tol().unwrap_or(0.0),
            });
        }
        let mut col = arnoldi.hessenberg().column(j - 1).to_vec();
        sys.rotate_previous(&mut col)?;
        let done_by_budget = step.breakdown || j == cfg.maxit;

        match projection {
            Projection::Orthogonal => {
                let d = col[j - 1].modulus();
                let h_sub = col[j].modulus();
                let scale = sys.diag_scale.max(d).max(h_sub);
                let singular = d <= SINGULAR_REL_TOL * scale;
                estimate = if singular {
                    report.singular_steps.push(j);
                    f64::INFINITY
                } else {
                    h_sub * sys.u[j - 1].modulus() / d / beta
                };
                report.rr_history.push(estimate);
                if !singular && is_probe_step(cfg, j) {
                    let yj = sys.solve(Some(&col))?;
                    let xj = update(x0, arnoldi.basis(), &yj);
                    report.probes.push(ResidualProbe {
                        iteration: j,
                        estimated_rr: estimate,
                        true_rr: residual_norm(op, b, &xj)? / beta,
                    });
                }
                if estimate < cfg.tol || done_by_budget {
                    report.iterations = j;
                    match sys.solve(Some(&col)) {
                        Ok(v) => y = v,
                        Err(Error::SingularDiagonal(_)) => {
                            sys.absorb(col)?;
                            y = sys.solve(None)?;
                            estimate = sys.u[j].modulus() / beta;
                            report.fom_fallback = true;
                        }
                        Err(e) => return Err(e),
                    }
                    break;
                }
                sys.absorb(col)?;
            }
            Projection::MinimalResidual => {
                sys.absorb(col)?;
                estimate = sys.u[j].modulus() / beta;
                report.rr_history.push(estimate);
                if is_probe_step(cfg, j) {
                    let yj = sys.solve(None)?;
                    let xj = update(x0, arnoldi.basis(), &yj);
                    report.probes.push(ResidualProbe {
                        iteration: j,
                        estimated_rr: estimate,
                        true_rr: residual_norm(op, b, &xj)? / beta,
                    });
                }
                if estimate < cfg.tol || done_by_budget {
                    report.iterations = j;
                    y = sys.solve(None)?;
                    break;
                }
            }
        }
    }


    let x = update(x0, arnoldi.basis(), &y);
    report.final_true_rr = residual_norm(op, b, &x)? / beta;
    report.final_estimated_rr = estimate;
    report.converged = estimate < cfg.tol;
    report.status = if report.converged {
        SolveStatus::Converged
    } else {
        SolveStatus::MaxIterExceeded
    };
    report.flops += arnoldi.flops() + y.len() as u64 * axpy_flops + apply_flops + axpy_flops;
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok((x, report))
}

fn is_probe_step(cfg: &SolverConfig, j: usize) -> bool {
    cfg.probe_every.is_some_and(|p| j % p == 0)
}
