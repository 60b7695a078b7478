use serde::Serialize;

use crate::error::{check_len, Result};
use crate::graph::VertexFunction;
use crate::linalg::{max_norm, Lu, Matrix};

use super::problem::ProblemInstance;

/// Damped Newton settings. Defaults follow the solver contract: Armijo
/// backtracking with factor ½ and slope 1e-4 on the merit `½‖F‖₂²`,
/// success at `‖F‖_∞ ≤ 1e-9` within 200 iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    pub residual_tol: f64,
    pub armijo_slope: f64,
    pub backtrack_factor: f64,
    pub min_step: f64,
    pub divergence_bound: f64,
    pub singular_shift: f64,
    pub det_rel_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iterations: 200,
            residual_tol: 1e-9,
            armijo_slope: 1e-4,
            backtrack_factor: 0.5,
            min_step: 1e-12,
            divergence_bound: 1e3,
            singular_shift: 1e-10,
            det_rel_tol: 1e-12,
        }
    }
}

/// Why a Newton run stopped without converging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    Diverged,
    SingularJacobian,
    LineSearchStalled,
    MaxIterations,
    NonFinite,
}

/// Outcome of [`newton_solve`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub u: VertexFunction,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Sign of `det DF(u)` at a converged point; 0 when numerically singular.
    pub jacobian_sign: i8,
    pub failure: Option<FailureReason>,
}

fn merit(f: &[f64]) -> f64 {
    0.5 * f.iter().map(|v| v * v).sum::<f64>()
}

/// Sign of `det J`, or 0 when `|det J| < rel_tol · ‖J‖_∞ⁿ`.
pub fn determinant_sign(j: &Matrix, rel_tol: f64) -> i8 {
    let det = Lu::new(j).determinant();
    let scale = j.inf_norm().powi(j.rows() as i32);
    if !det.is_finite() || det.abs() < rel_tol * scale || det == 0.0 {
        0
    } else if det > 0.0 {
        1
    } else {
        -1
    }
}

fn newton_direction(j: &Matrix, f: &[f64], shift: f64) -> Option<Vec<f64>> {
    let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
    let lu = Lu::new(j);
    if let Some(d) = lu.solve(&rhs) {
        return Some(d);
    }
    let mut shifted = j.clone();
    for i in 0..shifted.rows() {
        shifted[(i, i)] += shift;
    }
    Lu::new(&shifted).solve(&rhs)
}

/// Damped Newton iteration for `F(u) = 0` starting at `u0`.
pub fn newton_solve(
    inst: &ProblemInstance<'_>,
    u0: &VertexFunction,
    opts: &NewtonOptions,
) -> Result<SolveResult> {
    check_len(inst.n(), u0.len())?;
    Ok(newton_slice(inst, u0.values().to_vec(), opts))
}

pub(crate) fn newton_slice(
    inst: &ProblemInstance<'_>,
    mut u: Vec<f64>,
    opts: &NewtonOptions,
) -> SolveResult {
    let fail = |u: Vec<f64>, f: &[f64], iterations: usize, reason: FailureReason| SolveResult {
        residual_norm: if f.iter().all(|v| v.is_finite()) {
            max_norm(f)
        } else {
            f64::INFINITY
        },
        u: VertexFunction::new(u),
        iterations,
        converged: false,
        jacobian_sign: 0,
        failure: Some(reason),
    };

    if u.iter().any(|v| !v.is_finite()) {
        return fail(u, &[f64::INFINITY], 0, FailureReason::NonFinite);
    }
    let mut f = inst.residual_slice(&u);
    for iteration in 0..=opts.max_iterations {
        if f.iter().any(|v| !v.is_finite()) {
            return fail(u, &f, iteration, FailureReason::NonFinite);
        }
        let res = max_norm(&f);
        if res <= opts.residual_tol {
            let sign = determinant_sign(&inst.jacobian_matrix(&u), opts.det_rel_tol);
            return SolveResult {
                u: VertexFunction::new(u),
                residual_norm: res,
                iterations: iteration,
                converged: true,
                jacobian_sign: sign,
                failure: None,
            };
        }
        if iteration == opts.max_iterations {
            return fail(u, &f, iteration, FailureReason::MaxIterations);
        }

        let j = inst.jacobian_matrix(&u);
        let Some(direction) = newton_direction(&j, &f, opts.singular_shift) else {
            return fail(u, &f, iteration, FailureReason::SingularJacobian);
        };

        // For the Newton direction the merit slope is -‖F‖₂².
        let m0 = merit(&f);
        let slope = -2.0 * m0;
        let mut step = 1.0;
        let accepted = loop {
            let trial: Vec<f64> = u
                .iter()
                .zip(&direction)
                .map(|(a, d)| a + step * d)
                .collect();
            let ft = inst.residual_slice(&trial);
            let mt = merit(&ft);
            if mt.is_finite() && mt <= m0 + opts.armijo_slope * step * slope {
                break Some((trial, ft));
            }
            step *= opts.backtrack_factor;
            if step < opts.min_step {
                break None;
            }
        };
        let Some((next, f_next)) = accepted else {
            return fail(u, &f, iteration, FailureReason::LineSearchStalled);
        };
        u = next;
        f = f_next;
        if max_norm(&u) > opts.divergence_bound {
            return fail(u, &f, iteration + 1, FailureReason::Diverged);
        }
    }
    unreachable!("loop returns at the iteration cap")
}
