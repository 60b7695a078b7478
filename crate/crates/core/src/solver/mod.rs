//! Residual, Jacobian and energy of the Kazdan-Warner map, the damped
//! Newton solver, multi-start enumeration with degree estimation, a priori
//! bounds and barriers.

mod bounds;
mod multistart;
mod newton;
mod problem;

pub use bounds::{
    apriori_box, lower_barrier_constant, upper_barrier, AprioriBox, BoundCase, UpperBarrier,
};
pub use multistart::{
    deduplicate, multi_start_solve, start_points, start_rng, SolutionSet, BOX_INFLATION,
    DEDUP_THRESHOLD,
};
pub use newton::{determinant_sign, newton_solve, FailureReason, NewtonOptions, SolveResult};
pub use problem::{
    energy, homotopy_coefficient, homotopy_target, homotopy_target_integral, jacobian, residual,
    ProblemInstance, MAX_H_TOL,
};

pub(crate) use newton::newton_slice;
