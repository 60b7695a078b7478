//! Critical parameter `Λ*_s`: the supremum of `λ > 0` for which the
//! equation is solvable.
//!
//! Solvability is monotone in `λ` (a solution at `λ*` yields one at every
//! smaller positive `λ`), so `Λ*_s` is located by ascending continuation
//! from `λ = 0` followed by bisection. `Λ*_s` decays roughly exponentially
//! as `c → -∞`, so after the absolute bracket is below `tol` the search
//! keeps bisecting geometrically until the bracket is also relatively
//! tight (`hi/lo - 1 ≤ rel_tol`).

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};
use crate::solver::{
    multi_start_solve, newton_slice, NewtonOptions, ProblemInstance, SolutionSet, SolveResult,
};
use crate::spectral::{fractional_operator, FractionalOperator};

/// Knobs for the solvability oracle and the `Λ*` search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalOptions {
    /// Absolute bracket width on `λ`.
    pub tol: f64,
    /// Relative bracket width `hi/lo - 1`.
    pub rel_tol: f64,
    /// Continuation step is `step_factor · tol`.
    pub step_factor: f64,
    /// Random starts used by the oracle's multi-start fallback.
    pub oracle_starts: usize,
    /// Cold multi-start probes above the bracket (non-monotonicity check).
    pub probe_points: usize,
    pub seed: u64,
    pub newton: NewtonOptions,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        CriticalOptions {
            tol: 1e-4,
            rel_tol: 1e-3,
            step_factor: 8.0,
            oracle_starts: 64,
            probe_points: 3,
            seed: 0,
            newton: NewtonOptions::default(),
        }
    }
}

impl CriticalOptions {
    pub fn with_tol(self, tol: f64) -> Self {
        CriticalOptions { tol, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::param(
                "tol",
                format!("tol must be positive, got {}", self.tol),
            ));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::param("rel_tol", "rel_tol must be positive"));
        }
        if !(self.step_factor >= 1.0) {
            return Err(Error::param(
                "step_factor",
                "continuation step factor must be at least 1",
            ));
        }
        Ok(())
    }
}

/// Geometric descent factor used when `Λ*` lies below the first step.
const DESCENT_FACTOR: f64 = 8.0;
/// Below this the descent gives up; `Λ*` is reported as uncertain.
const MIN_LAMBDA: f64 = 1e-250;

/// Whether the equation was found solvable at one `λ`.
#[derive(Debug, Clone, Serialize)]
pub struct SolvabilityVerdict {
    pub lambda: f64,
    pub solvable: bool,
    pub witness: Option<VertexFunction>,
    pub starts_used: usize,
    pub best_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Ok,
    OracleUncertain,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Ok => "ok",
            SearchStatus::OracleUncertain => "oracle-uncertain",
        })
    }
}

/// Estimate of `Λ*_s` with its bracket and the verdicts that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalValueResult {
    pub lambda_star: f64,
    pub bracket: (f64, f64),
    pub verdicts: Vec<SolvabilityVerdict>,
    pub tol: f64,
    pub status: SearchStatus,
}

impl CriticalValueResult {
    pub fn bracket_width(&self) -> f64 {
        self.bracket.1 - self.bracket.0
    }
}

/// A graph, prescribed `h` and constant `c` with the operator for one `s`.
#[derive(Debug, Clone)]
pub struct CriticalProblem<'a> {
    graph: &'a WeightedGraph,
    op: &'a FractionalOperator,
    h: VertexFunction,
    c: f64,
    opts: CriticalOptions,
}

impl<'a> CriticalProblem<'a> {
    pub fn new(
        graph: &'a WeightedGraph,
        op: &'a FractionalOperator,
        h: VertexFunction,
        c: f64,
        opts: CriticalOptions,
    ) -> Result<Self> {
        opts.validate()?;
        ProblemInstance::new(graph, op, h.clone(), 0.0, c)?;
        Ok(CriticalProblem {
            graph,
            op,
            h,
            c,
            opts,
        })
    }

    /// `-min h`, the a priori ceiling for `Λ*`.
    pub fn lambda_ceiling(&self) -> f64 {
        -self.h.min()
    }

    pub fn instance(&self, lambda: f64) -> ProblemInstance<'a> {
        ProblemInstance::new(self.graph, self.op, self.h.clone(), lambda, self.c)
            .expect("validated in CriticalProblem::new")
    }

    /// Newton from the warm start, then from `log √(-c)`, then multi-start.
    pub fn solvability_test(
        &self,
        lambda: f64,
        warm: Option<&VertexFunction>,
    ) -> SolvabilityVerdict {
        let inst = self.instance(lambda);
        let n = self.graph.n();
        let newton = &self.opts.newton;
        let mut best_residual = f64::INFINITY;
        let mut starts_used = 0;

        let mut try_start = |u0: Vec<f64>| -> Option<SolveResult> {
            starts_used += 1;
            let r = newton_slice(&inst, u0, newton);
            best_residual = best_residual.min(r.residual_norm);
            r.converged.then_some(r)
        };

        let mut found = warm.and_then(|w| try_start(w.values().to_vec()));
        if found.is_none() {
            found = try_start(vec![0.5 * (-self.c).ln(); n]);
        }
        if found.is_none() {
            if let Ok(set) =
                multi_start_solve(&inst, self.opts.oracle_starts, self.opts.seed, newton)
            {
                starts_used += set.starts_used;
                best_residual = best_residual.min(set.best_residual);
                found = pick_witness(set);
            }
        }

        SolvabilityVerdict {
            lambda,
            solvable: found.is_some(),
            witness: found.map(|r| r.u),
            starts_used,
            best_residual,
        }
    }

    /// Locates `Λ*_s` with bracket width at most `tol`.
    pub fn find_lambda_star(&self) -> Result<CriticalValueResult> {
        let opts = &self.opts;
        let ceiling = self.lambda_ceiling();
        let mut verdicts = Vec::new();
        let mut uncertain = false;

        let base = self.solvability_test(0.0, None);
        let Some(base_witness) = base.witness.clone() else {
            return Err(Error::SolveFailed(format!(
                "no solution found at lambda = 0 (best residual {:e})",
                base.best_residual
            )));
        };
        verdicts.push(base);

        let mut lo = 0.0;
        let mut witness = base_witness.clone();
        let record = |v: SolvabilityVerdict, verdicts: &mut Vec<SolvabilityVerdict>| {
            let out = (v.solvable, v.witness.clone());
            verdicts.push(v);
            out
        };

        // Ascending continuation.
        let step = opts.step_factor * opts.tol;
        let mut hi = loop {
            let next = (lo + step).min(ceiling);
            let (ok, w) = record(self.solvability_test(next, Some(&witness)), &mut verdicts);
            match (ok, w) {
                (true, Some(w)) if next < ceiling => {
                    lo = next;
                    witness = w;
                }
                (true, _) => {
                    // Solvable at -min h contradicts the a priori ceiling.
                    uncertain = true;
                    lo = next;
                    break next;
                }
                (false, _) => break next,
            }
        };

        // Absolute bisection.
        while hi - lo > opts.tol {
            let mid = 0.5 * (lo + hi);
            match record(self.solvability_test(mid, Some(&witness)), &mut verdicts) {
                (true, Some(w)) => {
                    lo = mid;
                    witness = w;
                }
                _ => hi = mid,
            }
        }

        // Geometric descent when nothing positive was solvable yet.
        if lo == 0.0 && !uncertain {
            loop {
                let mid = hi / DESCENT_FACTOR;
                if mid < MIN_LAMBDA {
                    uncertain = true;
                    break;
                }
                match record(
                    self.solvability_test(mid, Some(&base_witness)),
                    &mut verdicts,
                ) {
                    (true, Some(w)) => {
                        lo = mid;
                        witness = w;
                        break;
                    }
                    _ => hi = mid,
                }
            }
        }

        // Geometric bisection to relative precision.
        while lo > 0.0 && hi / lo - 1.0 > opts.rel_tol {
            let mid = (lo * hi).sqrt();
            match record(self.solvability_test(mid, Some(&witness)), &mut verdicts) {
                (true, Some(w)) => {
                    lo = mid;
                    witness = w;
                }
                _ => hi = mid,
            }
        }

        // Cold probes above the bracket: a solvable probe means the
        // continuation lost the branch.
        let probes = opts.probe_points;
        for k in 1..=probes {
            let lambda = hi + (ceiling - hi) * k as f64 / (probes + 1) as f64;
            if lambda <= hi || lambda >= ceiling {
                continue;
            }
            let inst = self.instance(lambda);
            let set = multi_start_solve(&inst, opts.oracle_starts, opts.seed, &opts.newton)?;
            let solvable = !set.is_empty();
            verdicts.push(SolvabilityVerdict {
                lambda,
                solvable,
                starts_used: set.starts_used,
                best_residual: set.best_residual,
                witness: pick_witness(set).map(|r| r.u),
            });
        }

        if !is_monotone(&verdicts) {
            uncertain = true;
        }

        Ok(CriticalValueResult {
            lambda_star: 0.5 * (lo + hi),
            bracket: (lo, hi),
            verdicts,
            tol: opts.tol,
            status: if uncertain {
                SearchStatus::OracleUncertain
            } else {
                SearchStatus::Ok
            },
        })
    }
}

/// Prefers a nondegenerate local minimum (`sign = +1`), then the
/// lexicographically smallest solution.
fn pick_witness(set: SolutionSet) -> Option<SolveResult> {
    let mut solutions = set.solutions;
    let pos = solutions
        .iter()
        .position(|s| s.jacobian_sign > 0)
        .unwrap_or(0);
    (!solutions.is_empty()).then(|| solutions.swap_remove(pos))
}

/// True unless some unsolvable verdict lies strictly below a solvable one.
pub fn is_monotone(verdicts: &[SolvabilityVerdict]) -> bool {
    let lowest_failure = verdicts
        .iter()
        .filter(|v| !v.solvable)
        .map(|v| v.lambda)
        .fold(f64::INFINITY, f64::min);
    verdicts
        .iter()
        .all(|v| !v.solvable || v.lambda < lowest_failure)
}

/// Single-shot oracle on `(graph, h, c, s)`.
pub fn solvability_test(
    graph: &WeightedGraph,
    h: &VertexFunction,
    c: f64,
    s: f64,
    lambda: f64,
    warm: Option<&VertexFunction>,
    opts: &CriticalOptions,
) -> Result<SolvabilityVerdict> {
    let op = fractional_operator(graph, s)?;
    let problem = CriticalProblem::new(graph, &op, h.clone(), c, *opts)?;
    Ok(problem.solvability_test(lambda, warm))
}

/// Builds the operator for `s` and locates `Λ*_s`.
pub fn find_lambda_star(
    graph: &WeightedGraph,
    h: &VertexFunction,
    c: f64,
    s: f64,
    opts: &CriticalOptions,
) -> Result<CriticalValueResult> {
    let op = fractional_operator(graph, s)?;
    CriticalProblem::new(graph, &op, h.clone(), c, *opts)?.find_lambda_star()
}

/// `(c, s)` grid for [`sweep`]; `c` runs from `c_min` to `c_max` in steps
/// of `c_step`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub c_min: f64,
    pub c_max: f64,
    pub c_step: f64,
    pub s_list: Vec<f64>,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_step > 0.0) {
            return Err(Error::param("c_step", "c step must be positive"));
        }
        if !(self.c_max <= -self.c_step * (1.0 - 1e-9)) {
            return Err(Error::param(
                "c_max",
                format!("c_max must be at most -c_step, got {}", self.c_max),
            ));
        }
        if !(self.c_min <= self.c_max) {
            return Err(Error::param("c_min", "c_min must not exceed c_max"));
        }
        for &s in &self.s_list {
            crate::spectral::check_exponent(s)?;
        }
        Ok(())
    }

    /// Grid values of `c`, ascending.
    pub fn c_values(&self) -> Vec<f64> {
        let count = ((self.c_max - self.c_min) / self.c_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.c_min + k as f64 * self.c_step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub c: f64,
    pub s: f64,
    pub lambda_star: f64,
    pub bracket_width: f64,
    pub status: SearchStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub grid: SweepGrid,
}

impl SweepResult {
    /// Rows for one value of `s`, in ascending `c`.
    pub fn series(&self, s: f64) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.s == s).collect()
    }

    pub fn uncertain_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        let bad = self
            .rows
            .iter()
            .filter(|r| r.status != SearchStatus::Ok)
            .count();
        bad as f64 / self.rows.len() as f64
    }
}

/// One `Λ*` search per grid point. Rows are ordered by `s` (in the order
/// given, normally ascending) and then ascending `c`; each row is computed
/// independently, so the result does not depend on scheduling.
pub fn sweep(
    graph: &WeightedGraph,
    h: &VertexFunction,
    grid: &SweepGrid,
    opts: &CriticalOptions,
    threads: Option<usize>,
) -> Result<SweepResult> {
    grid.validate()?;
    opts.validate()?;
    let ops = grid
        .s_list
        .iter()
        .map(|&s| fractional_operator(graph, s))
        .collect::<Result<Vec<_>>>()?;
    let cs = grid.c_values();
    let tasks: Vec<(usize, f64)> = (0..ops.len())
        .flat_map(|k| cs.iter().map(move |&c| (k, c)))
        .collect();

    let run = || -> Vec<SweepRow> {
        tasks
            .par_iter()
            .map(|&(k, c)| {
                let s = grid.s_list[k];
                let outcome = CriticalProblem::new(graph, &ops[k], h.clone(), c, *opts)
                    .and_then(|p| p.find_lambda_star());
                match outcome {
                    Ok(r) => SweepRow {
                        c,
                        s,
                        lambda_star: r.lambda_star,
                        bracket_width: r.bracket_width(),
                        status: r.status,
                    },
                    Err(e) => {
                        log::warn!("sweep row c = {c}, s = {s} failed: {e}");
                        SweepRow {
                            c,
                            s,
                            lambda_star: f64::NAN,
                            bracket_width: f64::NAN,
                            status: SearchStatus::OracleUncertain,
                        }
                    }
                }
            })
            .collect()
    };

    let rows = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::param("threads", e.to_string()))?
            .install(run),
        None => run(),
    };

    Ok(SweepResult {
        rows,
        grid: grid.clone(),
    })
}

/// Degree diagnostic along the homotopy `h_{λ,t}` of a problem instance.
#[derive(Debug, Clone, Serialize)]
pub struct HomotopyPoint {
    pub t: f64,
    pub set: SolutionSet,
}

/// Multi-start solve of `T(·, t) = 0` at each `t` of `t_grid`.
pub fn homotopy_trace(
    inst: &ProblemInstance<'_>,
    t_grid: &[f64],
    n_starts: usize,
    seed: u64,
    opts: &NewtonOptions,
) -> Result<Vec<HomotopyPoint>> {
    t_grid
        .iter()
        .map(|&t| {
            let stage = inst.homotopy_stage(t)?;
            Ok(HomotopyPoint {
                t,
                set: multi_start_solve(&stage, n_starts, seed, opts)?,
            })
        })
        .collect()
}
