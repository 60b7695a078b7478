use std::cmp::Ordering;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::max_norm;

use super::bounds::{apriori_box, lower_barrier_constant, upper_barrier, AprioriBox};
use super::newton::{newton_slice, NewtonOptions, SolveResult};
use super::problem::ProblemInstance;

/// Two converged solutions closer than this in max norm are the same.
pub const DEDUP_THRESHOLD: f64 = 1e-6;
/// Random starts are drawn from the a priori box widened by this margin.
pub const BOX_INFLATION: f64 = 2.0;

/// Distinct zeros found by [`multi_start_solve`].
#[derive(Debug, Clone, Serialize)]
pub struct SolutionSet {
    pub solutions: Vec<SolveResult>,
    /// Sum of the Jacobian signs; singular solutions contribute 0.
    pub degree_estimate: i32,
    pub starts_used: usize,
    pub singular_count: usize,
    /// Smallest residual seen over all starts, converged or not.
    pub best_residual: f64,
    pub apriori: Option<AprioriBox>,
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    fn empty(apriori: Option<AprioriBox>) -> Self {
        SolutionSet {
            solutions: Vec::new(),
            degree_estimate: 0,
            starts_used: 0,
            singular_count: 0,
            best_residual: f64::INFINITY,
            apriori,
        }
    }
}

/// Random generator for the `index`-th start: one ChaCha stream per start,
/// so each start is reproducible regardless of execution order.
pub fn start_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Starting points: the a priori floor, the barrier midpoint (when the
/// barrier applies), then uniform samples from the inflated box.
pub fn start_points(
    inst: &ProblemInstance<'_>,
    apriori: &AprioriBox,
    n_starts: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    let n = inst.n();
    let mut starts = vec![vec![apriori.lower; n]];

    if n_starts >= 2 && inst.lambda() > 0.0 {
        let barrier = upper_barrier(
            inst.graph(),
            inst.op(),
            inst.h(),
            inst.c(),
            &NewtonOptions::default(),
        );
        if let Ok(barrier) = barrier {
            if inst.lambda() < barrier.threshold {
                let b = lower_barrier_constant(apriori);
                starts.push(barrier.psi.values().iter().map(|p| 0.5 * (p - b)).collect());
            }
        }
    }

    let lo = apriori.lower - BOX_INFLATION;
    let hi = apriori.upper + BOX_INFLATION;
    let mut index = 0u64;
    while starts.len() < n_starts {
        let mut rng = start_rng(seed, index);
        starts.push((0..n).map(|_| rng.random_range(lo..=hi)).collect());
        index += 1;
    }
    starts.truncate(n_starts.max(1));
    starts
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Sorts converged results lexicographically and drops near-duplicates.
pub fn deduplicate(mut results: Vec<SolveResult>, threshold: f64) -> Vec<SolveResult> {
    results.retain(|r| r.converged);
    results.sort_by(|a, b| lexicographic(a.u.values(), b.u.values()));
    let mut kept: Vec<SolveResult> = Vec::new();
    for r in results {
        let duplicate = kept.iter().any(|k| {
            let d: Vec<f64> =
                k.u.values()
                    .iter()
                    .zip(r.u.values())
                    .map(|(a, b)| a - b)
                    .collect();
            max_norm(&d) <= threshold
        });
        if !duplicate {
            kept.push(r);
        }
    }
    kept
}

/// Runs Newton from many starts and collects the distinct solutions.
pub fn multi_start_solve(
    inst: &ProblemInstance<'_>,
    n_starts: usize,
    seed: u64,
    opts: &NewtonOptions,
) -> Result<SolutionSet> {
    let apriori = match apriori_box(inst) {
        Ok(b) => b,
        Err(crate::Error::NoNegativeCoefficient) => return Ok(SolutionSet::empty(None)),
        Err(e) => return Err(e),
    };
    let starts = start_points(inst, &apriori, n_starts.max(1), seed);
    Ok(solve_from_starts(inst, starts, Some(apriori), opts))
}

fn solve_from_starts(
    inst: &ProblemInstance<'_>,
    starts: Vec<Vec<f64>>,
    apriori: Option<AprioriBox>,
    opts: &NewtonOptions,
) -> SolutionSet {
    let starts_used = starts.len();
    let results: Vec<SolveResult> = starts
        .into_par_iter()
        .map(|u0| newton_slice(inst, u0, opts))
        .collect();
    let best_residual = results
        .iter()
        .map(|r| r.residual_norm)
        .fold(f64::INFINITY, f64::min);
    let solutions = deduplicate(results, DEDUP_THRESHOLD);
    let singular_count = solutions.iter().filter(|s| s.jacobian_sign == 0).count();
    if singular_count > 0 {
        warn!(
            "{singular_count} solution(s) with numerically singular Jacobian excluded from the degree (lambda = {})",
            inst.lambda()
        );
    }
    SolutionSet {
        degree_estimate: solutions.iter().map(|s| i32::from(s.jacobian_sign)).sum(),
        solutions,
        starts_used,
        singular_count,
        best_residual,
        apriori,
    }
}
