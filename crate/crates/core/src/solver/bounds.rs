//! A priori bounds on solutions and the barrier pair `-B < u < ψ` that
//! traps the local-minimum solution for small `λ > 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};
use crate::spectral::{bound_constants, BoundConstants, FractionalOperator};

use super::newton::{newton_solve, NewtonOptions, SolveResult};
use super::problem::ProblemInstance;

/// Which sign case of `h_λ` at the maximum point produced the upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundCase {
    /// `h_λ(x_1) > 0`: Young's inequality with `ε = 1/(2Λ_λ)`.
    Positive,
    /// `h_λ(x_1) < 0`: `Λ_λ^{-1} e^{2 max u} ≤ -c`.
    Negative,
    /// `h_λ(x_1) = 0`: `max u ≤ min u - c/C_m` with `min u` bounded.
    Zero,
}

/// Solution-independent box `lower ≤ u(x) ≤ upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AprioriBox {
    pub lower: f64,
    pub upper: f64,
    /// Case attaining `upper`.
    pub valid_when: BoundCase,
    /// Bound contributed by each case that can occur for this `h_λ`.
    pub case_bounds: Vec<(BoundCase, f64)>,
    pub constants: BoundConstants,
}

impl AprioriBox {
    pub fn contains(&self, u: &VertexFunction, slack: f64) -> bool {
        u.values()
            .iter()
            .all(|&v| v >= self.lower - slack && v <= self.upper + slack)
    }

    pub fn is_consistent(&self) -> bool {
        self.lower <= self.upper
    }
}

/// Lower bound `½ log(-c/Λ_λ)` and the largest applicable upper case bound.
pub fn apriori_box(inst: &ProblemInstance<'_>) -> Result<AprioriBox> {
    let coefficient = inst.coefficient();
    let k = coefficient.values();
    if k.iter().all(|v| *v == 0.0) {
        return Err(Error::DegenerateCoefficient);
    }
    if k.iter().all(|v| *v >= 0.0) {
        return Err(Error::NoNegativeCoefficient);
    }
    let constants = bound_constants(inst.op(), &coefficient)?;
    let lam = constants.lambda_bound;
    let c = inst.c();
    let lower = 0.5 * (-c / lam).ln();

    let mut case_bounds = Vec::new();
    if k.iter().any(|v| *v > 0.0) {
        // e^{2M} ≤ Λ²C_M² - 2ΛC_M·lower; a nonpositive right side rules the case out.
        let rhs =
            lam * lam * constants.c_max * constants.c_max - 2.0 * lam * constants.c_max * lower;
        let bound = if rhs > 0.0 {
            0.5 * rhs.ln()
        } else {
            f64::NEG_INFINITY
        };
        case_bounds.push((BoundCase::Positive, bound));
    }
    // k has a negative entry by the check above.
    case_bounds.push((BoundCase::Negative, 0.5 * (-c * lam).ln()));
    if k.contains(&0.0) {
        let bound = if constants.c_min > 0.0 {
            let ratio = constants.c_max / constants.c_min;
            let min_cap = (0.5 * (-c * lam * (1.0 + ratio)).ln()).max(0.0);
            min_cap - c / constants.c_min
        } else {
            f64::INFINITY
        };
        case_bounds.push((BoundCase::Zero, bound));
    }

    let (valid_when, upper) =
        case_bounds
            .iter()
            .copied()
            .fold((BoundCase::Negative, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });

    Ok(AprioriBox {
        lower,
        upper,
        valid_when,
        case_bounds,
        constants,
    })
}

/// Constant `B` of the lower barrier `-B`: `max(10, |lower| + 5)`.
pub fn lower_barrier_constant(apriori: &AprioriBox) -> f64 {
    (apriori.lower.abs() + 5.0).max(10.0)
}

/// Upper barrier `ψ` solving `(-Δ)^s ψ = h e^{2ψ} - (c - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperBarrier {
    pub psi: VertexFunction,
    /// `e^{-2 max ψ}`: every `0 < λ` below it has `ψ` as a strict supersolution.
    pub threshold: f64,
    pub solve: SolveResult,
}

/// Solves for the upper barrier `ψ` on the `λ = 0` problem with constant `c - 1`.
pub fn upper_barrier(
    graph: &WeightedGraph,
    op: &FractionalOperator,
    h: &VertexFunction,
    c: f64,
    opts: &NewtonOptions,
) -> Result<UpperBarrier> {
    let inst = ProblemInstance::new(graph, op, h.clone(), 0.0, c - 1.0)?;
    let start = apriori_box(&inst)?.lower;
    let solve = newton_solve(&inst, &VertexFunction::constant(graph.n(), start), opts)?;
    if !solve.converged {
        return Err(Error::SolveFailed(format!(
            "upper barrier did not converge (residual {:e}, {:?})",
            solve.residual_norm, solve.failure
        )));
    }
    let psi = solve.u.clone();
    Ok(UpperBarrier {
        threshold: (-2.0 * psi.max()).exp(),
        psi,
        solve,
    })
}
