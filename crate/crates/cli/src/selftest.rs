//! Acceptance checks run by `frackw selftest` and by the `acceptance`
//! test target. Each check returns a [`CheckOutcome`] instead of panicking
//! so the full report is always printed.

use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use frackw_core::critical::{
    find_lambda_star, sweep, CriticalOptions, SearchStatus, SweepGrid, SweepResult,
};
use frackw_core::graph::{builtin_graph, inner, VertexFunction};
use frackw_core::linalg::{max_norm, Matrix};
use frackw_core::solver::{
    apriori_box, energy, multi_start_solve, newton_solve, residual, start_rng, NewtonOptions,
    ProblemInstance, SolveResult,
};
use frackw_core::spectral::{
    apply, dirichlet_energy, fractional_operator, fractional_power, standard_laplacian,
};
use frackw_core::Result;

use crate::output::sweep_csv;

pub const ENUMERATION_STARTS: usize = 256;
pub const BOX_SLACK: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {} ({:.2} s, limit {} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

/// Collected failures of one check; empty means pass.
#[derive(Default)]
struct Findings {
    failures: Vec<String>,
    cases: usize,
}

impl Findings {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.cases += 1;
        self.failures.push(what);
    }

    fn summary(&self) -> String {
        match self.failures.len() {
            0 => format!("{} cases", self.cases),
            k => format!(
                "{k}/{} cases failed; first: {}",
                self.cases, self.failures[0]
            ),
        }
    }
}

fn timed(
    id: u32,
    title: &'static str,
    budget_secs: u64,
    body: impl FnOnce() -> Findings,
) -> CheckOutcome {
    let start = Instant::now();
    let findings = body();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_secs);
    let mut detail = findings.summary();
    if elapsed > budget {
        detail.push_str("; over time limit");
    }
    CheckOutcome {
        id,
        title,
        passed: findings.failures.is_empty() && elapsed <= budget,
        detail,
        elapsed,
        budget,
    }
}

/// A converged solution with the a priori box of its instance.
struct BoxRecord {
    label: String,
    inside: bool,
}

/// Shared state across checks: a priori box records (for the box check)
/// and `Λ*` at `c = -1`, `s = 0.5` per builtin type.
pub struct Acceptance {
    pub seed: u64,
    boxes: Vec<BoxRecord>,
    lambda_star: Option<Vec<Result<f64>>>,
    sweep_csv: Option<String>,
}

impl Acceptance {
    pub fn new(seed: u64) -> Self {
        Acceptance {
            seed,
            boxes: Vec::new(),
            lambda_star: None,
            sweep_csv: None,
        }
    }

    fn record_box(&mut self, label: String, inst: &ProblemInstance<'_>, sol: &SolveResult) {
        let inside = match apriori_box(inst) {
            Ok(b) => b.contains(&sol.u, BOX_SLACK),
            Err(_) => false,
        };
        self.boxes.push(BoxRecord { label, inside });
    }

    /// Runs every check in order. `quick` skips the two sweep-based checks.
    pub fn run_all(&mut self, quick: bool) -> Vec<CheckOutcome> {
        let mut out = vec![
            spectral_exactness(),
            type1_closed_form(),
            variational_consistency(self.seed),
            self.constant_solution(),
            self.uniqueness_below_zero(),
            self.multiplicity_below_critical(),
            self.nonexistence_above_critical(),
            self.critical_bounds(),
        ];
        if !quick {
            out.push(self.figure_trends());
        }
        out.push(self.apriori_containment());
        if !quick {
            out.push(self.determinism());
        }
        out
    }

    fn newton_opts() -> NewtonOptions {
        NewtonOptions::default()
    }

    fn critical_opts(&self) -> CriticalOptions {
        CriticalOptions {
            seed: self.seed,
            ..CriticalOptions::default()
        }
    }

    /// Newton from `u ≡ 0` for `h_λ ≡ -1` reaches `log √(-c)`.
    pub fn constant_solution(&mut self) -> CheckOutcome {
        let mut records = Vec::new();
        let out = timed(4, "constant-solution oracle", 1, || {
            let mut f = Findings::default();
            for k in 1..=5 {
                let (g, _) = builtin_graph(k).expect("builtin");
                let op = fractional_operator(&g, 0.5).expect("operator");
                for c in [-1.0, -4.0, -9.0] {
                    let inst = ProblemInstance::from_coefficient(
                        &g,
                        &op,
                        VertexFunction::constant(g.n(), -1.0),
                        c,
                    )
                    .expect("instance");
                    let r = newton_solve(
                        &inst,
                        &VertexFunction::constant(g.n(), 0.0),
                        &Self::newton_opts(),
                    )
                    .expect("dimensions");
                    let target = 0.5 * (-c).ln();
                    let err =
                        r.u.values()
                            .iter()
                            .map(|v| (v - target).abs())
                            .fold(0.0, f64::max);
                    f.check(r.converged && err <= 1e-9, || {
                        format!(
                            "type {k}, c = {c}: converged {}, error {err:e}",
                            r.converged
                        )
                    });
                    if r.converged {
                        records.push((format!("constant type {k} c {c}"), k, c, r));
                    }
                }
            }
            f
        });
        for (label, k, c, r) in records {
            let (g, _) = builtin_graph(k).expect("builtin");
            let op = fractional_operator(&g, 0.5).expect("operator");
            let inst = ProblemInstance::from_coefficient(
                &g,
                &op,
                VertexFunction::constant(g.n(), -1.0),
                c,
            )
            .expect("instance");
            self.record_box(label, &inst, &r);
        }
        out
    }

    /// Exactly one solution, Jacobian sign +1, for `λ ≤ 0`.
    pub fn uniqueness_below_zero(&mut self) -> CheckOutcome {
        let seed = self.seed;
        let mut records = Vec::new();
        let out = timed(5, "uniqueness and degree for lambda <= 0", 10, || {
            let mut f = Findings::default();
            for k in [1, 3] {
                let (g, h) = builtin_graph(k).expect("builtin");
                for s in [0.3, 0.7] {
                    let op = fractional_operator(&g, s).expect("operator");
                    for lambda in [-1.0, -0.1, 0.0] {
                        let inst = ProblemInstance::new(&g, &op, h.clone(), lambda, -1.0)
                            .expect("instance");
                        match multi_start_solve(
                            &inst,
                            ENUMERATION_STARTS,
                            seed,
                            &Self::newton_opts(),
                        ) {
                            Ok(set) => {
                                let signs: Vec<i8> =
                                    set.solutions.iter().map(|r| r.jacobian_sign).collect();
                                f.check(set.len() == 1 && signs == [1] && set.degree_estimate == 1, || {
                                    format!(
                                        "type {k}, s = {s}, lambda = {lambda}: {} solutions, signs {signs:?}",
                                        set.len()
                                    )
                                });
                                for r in set.solutions {
                                    records.push((
                                        format!("unique type {k} s {s} lambda {lambda}"),
                                        k,
                                        s,
                                        lambda,
                                        r,
                                    ));
                                }
                            }
                            Err(e) => f.fail(format!("type {k}, s = {s}, lambda = {lambda}: {e}")),
                        }
                    }
                }
            }
            f
        });
        for (label, k, s, lambda, r) in records {
            self.record_regular(label, k, s, lambda, -1.0, &r);
        }
        out
    }

    fn record_regular(
        &mut self,
        label: String,
        k: u32,
        s: f64,
        lambda: f64,
        c: f64,
        r: &SolveResult,
    ) {
        let (g, h) = builtin_graph(k).expect("builtin");
        let op = fractional_operator(&g, s).expect("operator");
        let inst = ProblemInstance::new(&g, &op, h, lambda, c).expect("instance");
        self.record_box(label, &inst, r);
    }

    fn lambda_stars(&mut self) -> &[Result<f64>] {
        if self.lambda_star.is_none() {
            let opts = self.critical_opts();
            let stars = (1..=5u32)
                .into_par_iter()
                .map(|k| {
                    let (g, h) = builtin_graph(k)?;
                    Ok(find_lambda_star(&g, &h, -1.0, 0.5, &opts)?.lambda_star)
                })
                .collect();
            self.lambda_star = Some(stars);
        }
        self.lambda_star.as_deref().expect("just set")
    }

    /// At `λ = ½Λ*`: at least two solutions with signs summing to zero.
    pub fn multiplicity_below_critical(&mut self) -> CheckOutcome {
        let seed = self.seed;
        let mut records = Vec::new();
        let mut stars = Vec::new();
        let out = timed(
            6,
            "multiplicity and degree cancellation below the critical value",
            30,
            || {
                stars = self
                    .lambda_stars()
                    .iter()
                    .map(|r| r.as_ref().map(|v| *v).map_err(|e| e.to_string()))
                    .collect();
                let mut f = Findings::default();
                for (k, star) in (1..=5u32).zip(&stars) {
                    let star = match star {
                        Ok(v) => *v,
                        Err(e) => {
                            f.fail(format!("type {k}: critical value unavailable: {e}"));
                            continue;
                        }
                    };
                    let lambda = 0.5 * star;
                    let (g, h) = builtin_graph(k).expect("builtin");
                    let op = fractional_operator(&g, 0.5).expect("operator");
                    let inst = ProblemInstance::new(&g, &op, h, lambda, -1.0).expect("instance");
                    match multi_start_solve(&inst, ENUMERATION_STARTS, seed, &Self::newton_opts()) {
                        Ok(set) => {
                            let signs: Vec<i8> =
                                set.solutions.iter().map(|r| r.jacobian_sign).collect();
                            f.check(set.len() >= 2 && set.degree_estimate == 0 && set.singular_count == 0, || {
                            format!("type {k}, lambda = {lambda:e}: {} solutions, signs {signs:?}", set.len())
                        });
                            for r in set.solutions {
                                records.push((format!("pair type {k}"), k, lambda, r));
                            }
                        }
                        Err(e) => f.fail(format!("type {k}: {e}")),
                    }
                }
                f
            },
        );
        for (label, k, lambda, r) in records {
            self.record_regular(label, k, 0.5, lambda, -1.0, &r);
        }
        out
    }

    /// Above `Λ*` no start converges.
    pub fn nonexistence_above_critical(&mut self) -> CheckOutcome {
        let seed = self.seed;
        let tol = self.critical_opts().tol;
        let mut records = Vec::new();
        let out = timed(7, "nonexistence above the critical value", 30, || {
            let stars: Vec<std::result::Result<f64, String>> = self
                .lambda_stars()
                .iter()
                .map(|r| r.as_ref().map(|v| *v).map_err(|e| e.to_string()))
                .collect();
            let mut f = Findings::default();
            for (k, star) in (1..=5u32).zip(&stars) {
                let star = match star {
                    Ok(v) => *v,
                    Err(e) => {
                        f.fail(format!("type {k}: critical value unavailable: {e}"));
                        continue;
                    }
                };
                let (g, h) = builtin_graph(k).expect("builtin");
                let lambda = (1.2 * star).min(-h.min() - tol);
                let op = fractional_operator(&g, 0.5).expect("operator");
                let inst = ProblemInstance::new(&g, &op, h, lambda, -1.0).expect("instance");
                match multi_start_solve(&inst, ENUMERATION_STARTS, seed, &Self::newton_opts()) {
                    Ok(set) => {
                        f.check(set.is_empty(), || {
                            format!(
                                "type {k}, lambda = {lambda:e}: {} solutions found",
                                set.len()
                            )
                        });
                        for r in set.solutions {
                            records.push((format!("above type {k}"), k, lambda, r));
                        }
                    }
                    Err(e) => f.fail(format!("type {k}: {e}")),
                }
            }
            f
        });
        for (label, k, lambda, r) in records {
            self.record_regular(label, k, 0.5, lambda, -1.0, &r);
        }
        out
    }

    /// `Λ*` strictly inside `(0, -min h)` and stable under halving `tol`.
    pub fn critical_bounds(&mut self) -> CheckOutcome {
        let opts = self.critical_opts();
        timed(8, "critical value bound and stability", 120, || {
            let cases: Vec<(u32, f64, f64)> = (1..=5u32)
                .flat_map(|k| {
                    [-0.5, -1.0, -5.0]
                        .into_iter()
                        .flat_map(move |c| [0.3, 0.7].map(|s| (k, c, s)))
                })
                .collect();
            let results: Vec<_> = cases
                .par_iter()
                .map(|&(k, c, s)| {
                    let (g, h) = builtin_graph(k)?;
                    let full = find_lambda_star(&g, &h, c, s, &opts)?;
                    let half = find_lambda_star(&g, &h, c, s, &opts.with_tol(0.5 * opts.tol))?;
                    Ok((k, c, s, -h.min(), full, half))
                })
                .collect::<Vec<Result<_>>>();
            let mut f = Findings::default();
            for r in results {
                match r {
                    Ok((k, c, s, ceiling, full, half)) => {
                        let l = full.lambda_star;
                        f.check(
                            l > 0.0 && l < ceiling && full.status == SearchStatus::Ok,
                            || {
                                format!(
                                    "type {k}, c = {c}, s = {s}: lambda* = {l:e} ({})",
                                    full.status
                                )
                            },
                        );
                        let shift = (l - half.lambda_star).abs();
                        f.check(shift <= 2.0 * opts.tol, || {
                            format!("type {k}, c = {c}, s = {s}: halving tol moved lambda* by {shift:e}")
                        });
                    }
                    Err(e) => f.fail(e.to_string()),
                }
            }
            f
        })
    }

    fn figure_sweep(&self) -> Result<SweepResult> {
        let (g, h) = builtin_graph(1)?;
        let grid = SweepGrid {
            c_min: -5.0,
            c_max: -0.05,
            c_step: 0.05,
            s_list: vec![0.3, 0.5, 0.7],
        };
        sweep(&g, &h, &grid, &self.critical_opts(), None)
    }

    /// Ordering in `s`, non-crossing curves, decay in `|c|` and
    /// complete-graph dominance.
    pub fn figure_trends(&mut self) -> CheckOutcome {
        let opts = self.critical_opts();
        let mut csv = None;
        let out = timed(9, "sweep trends on the builtin graphs", 600, || {
            let mut f = Findings::default();
            let result = match self.figure_sweep() {
                Ok(r) => r,
                Err(e) => {
                    f.fail(e.to_string());
                    return f;
                }
            };
            csv = Some(sweep_csv(&result));
            f.check(
                result.rows.iter().all(|r| r.status == SearchStatus::Ok),
                || format!("{:.1}% rows uncertain", 100.0 * result.uncertain_fraction()),
            );
            let series: Vec<Vec<f64>> = result
                .grid
                .s_list
                .iter()
                .map(|&s| result.series(s).iter().map(|r| r.lambda_star).collect())
                .collect();
            let cs = result.grid.c_values();
            for (i, c) in cs.iter().enumerate() {
                let column: Vec<f64> = series.iter().map(|v| v[i]).collect();
                f.check(column.windows(2).all(|w| w[0] < w[1]), || {
                    format!("c = {c}: lambda* not increasing in s: {column:?}")
                });
            }
            for (a, b) in [(0, 1), (1, 2), (0, 2)] {
                let above = series[a]
                    .iter()
                    .zip(&series[b])
                    .filter(|(x, y)| x < y)
                    .count();
                f.check(above == 0 || above == cs.len(), || {
                    format!("curves for s index {a} and {b} cross")
                });
            }
            let at = |c: f64| {
                cs.iter()
                    .position(|v| (v - c).abs() < 1e-9)
                    .expect("grid point")
            };
            for (k, v) in series.iter().enumerate() {
                let (far, near) = (v[at(-5.0)], v[at(-0.5)]);
                f.check(far < near, || {
                    format!("s index {k}: lambda*(-5) = {far:e} not below lambda*(-0.5) = {near:e}")
                });
            }

            let pairs: Vec<_> = [(3u32, 2u32), (5, 4)]
                .into_iter()
                .flat_map(|p| [-1.0, -2.0].map(|c| (p, c)))
                .collect();
            type Comparison = (u32, u32, f64, f64, f64);
            let compared: Vec<Result<Comparison>> = pairs
                .par_iter()
                .map(|&((full, sparse), c)| {
                    let star = |k: u32| -> Result<f64> {
                        let (g, h) = builtin_graph(k)?;
                        Ok(find_lambda_star(&g, &h, c, 0.5, &opts)?.lambda_star)
                    };
                    Ok((full, sparse, c, star(full)?, star(sparse)?))
                })
                .collect();
            for r in compared {
                match r {
                    Ok((full, sparse, c, a, b)) => f.check(a > b, || {
                        format!("c = {c}: lambda*(type {full}) = {a:e} not above lambda*(type {sparse}) = {b:e}")
                    }),
                    Err(e) => f.fail(e.to_string()),
                }
            }
            f
        });
        self.sweep_csv = csv;
        out
    }

    /// Every converged solution from the enumeration checks lies in the box.
    pub fn apriori_containment(&mut self) -> CheckOutcome {
        let boxes = &self.boxes;
        timed(10, "a priori box containment", 1, || {
            let mut f = Findings::default();
            if boxes.is_empty() {
                f.fail("no solutions recorded; run the enumeration checks first".into());
            }
            for b in boxes {
                f.check(b.inside, || format!("{} outside the box", b.label));
            }
            f
        })
    }

    /// A second sweep gives a byte-identical CSV.
    pub fn determinism(&mut self) -> CheckOutcome {
        let first = self.sweep_csv.clone();
        timed(11, "sweep determinism", 600, || {
            let mut f = Findings::default();
            let first = match first
                .map(Ok)
                .unwrap_or_else(|| self.figure_sweep().map(|r| sweep_csv(&r)))
            {
                Ok(v) => v,
                Err(e) => {
                    f.fail(e.to_string());
                    return f;
                }
            };
            match self.figure_sweep() {
                Ok(r) => {
                    let second = sweep_csv(&r);
                    f.check(first.as_bytes() == second.as_bytes(), || {
                        "CSV differs between runs".into()
                    });
                }
                Err(e) => f.fail(e.to_string()),
            }
            f
        })
    }
}

/// `L_s φ_i = λ_i^s φ_i`, `L_1 = L`, symmetric positive kernel.
pub fn spectral_exactness() -> CheckOutcome {
    timed(1, "spectral exactness", 1, || {
        let mut f = Findings::default();
        for k in 1..=5 {
            let (g, _) = builtin_graph(k).expect("builtin");
            for s in [0.25, 0.5, 0.75, 1.0] {
                let op = match fractional_operator(&g, s) {
                    Ok(op) => op,
                    Err(e) => {
                        f.fail(format!("type {k}, s = {s}: {e}"));
                        continue;
                    }
                };
                let dec = op.decomposition();
                for (i, (lam, phi)) in dec.eigenvalues().iter().zip(dec.eigenvectors()).enumerate()
                {
                    let lhs = op.matrix().matvec(phi);
                    let p = fractional_power(*lam, s);
                    let err = lhs
                        .iter()
                        .zip(phi)
                        .map(|(a, b)| (a - p * b).abs())
                        .fold(0.0, f64::max);
                    f.check(err <= 1e-10, || {
                        format!("type {k}, s = {s}, i = {i}: eigen residual {err:e}")
                    });
                }
                f.check(op.kernel().is_symmetric(0.0), || {
                    format!("type {k}, s = {s}: kernel not symmetric")
                });
                let bad = op.kernel_positivity_violations();
                if s < 1.0 {
                    f.check(bad.is_empty(), || {
                        format!("type {k}, s = {s}: nonpositive kernel at {bad:?}")
                    });
                } else {
                    let err = op.matrix().max_abs_diff(&standard_laplacian(&g));
                    f.check(err <= 1e-10, || {
                        format!("type {k}: L_1 differs from L by {err:e}")
                    });
                    // At s = 1 the kernel is the adjacency: positive on edges, zero elsewhere.
                    let edges_ok = bad
                        .iter()
                        .all(|&(x, y, w)| g.weight(x, y) == 0.0 && w.abs() <= 1e-10);
                    f.check(edges_ok, || {
                        format!("type {k}: kernel at s = 1 is not the adjacency: {bad:?}")
                    });
                }
            }
        }
        f
    })
}

/// Type 1 eigenvalues `(0, 6)` and `L_{1/2} = 6^{-1/2} L`.
pub fn type1_closed_form() -> CheckOutcome {
    timed(2, "two-vertex closed form", 1, || {
        let mut f = Findings::default();
        let (g, _) = builtin_graph(1).expect("builtin");
        match fractional_operator(&g, 0.5) {
            Ok(op) => {
                let ev = op.decomposition().eigenvalues();
                f.check(ev[0].abs() <= 1e-12 && (ev[1] - 6.0).abs() <= 1e-12, || {
                    format!("eigenvalues {ev:?}")
                });
                let scale = 6f64.powf(-0.5);
                let expected = Matrix::from_rows(&[
                    vec![2.0 * scale, -2.0 * scale],
                    vec![-4.0 * scale, 4.0 * scale],
                ]);
                let err = op.matrix().max_abs_diff(&expected);
                f.check(err <= 1e-10, || format!("L_0.5 off by {err:e}"));
            }
            Err(e) => f.fail(e.to_string()),
        }
        f
    })
}

/// Finite-difference gradient of the energy, Dirichlet-form symmetry and
/// the sign inequality on random functions.
pub fn variational_consistency(seed: u64) -> CheckOutcome {
    const SAMPLES: usize = 100;
    const EPS: f64 = 1e-6;
    timed(3, "variational consistency", 5, || {
        let mut f = Findings::default();
        for k in 1..=5u32 {
            let (g, h) = builtin_graph(k).expect("builtin");
            let n = g.n();
            let mu = g.measure();
            let op = fractional_operator(&g, 0.5).expect("operator");
            let lambda = -0.25 * h.min();
            let inst = ProblemInstance::new(&g, &op, h.clone(), lambda, -1.0).expect("instance");
            for sample in 0..SAMPLES {
                let mut rng = start_rng(seed, (u64::from(k) << 32) | sample as u64);
                let mut draw =
                    || VertexFunction::new((0..n).map(|_| rng.random_range(-2.0..=2.0)).collect());
                let (u, v) = (draw(), draw());

                let grad: Vec<f64> = residual(&inst, &u)
                    .expect("dimensions")
                    .values()
                    .iter()
                    .zip(mu)
                    .map(|(r, m)| r * m)
                    .collect();
                let fd: Vec<f64> = (0..n)
                    .map(|i| {
                        let shifted = |d: f64| {
                            let mut w = u.values().to_vec();
                            w[i] += d;
                            energy(&inst, &VertexFunction::new(w)).expect("dimensions")
                        };
                        (shifted(EPS) - shifted(-EPS)) / (2.0 * EPS)
                    })
                    .collect();
                let diff: Vec<f64> = fd.iter().zip(&grad).map(|(a, b)| a - b).collect();
                let rel = max_norm(&diff) / max_norm(&grad).max(1.0);
                f.check(rel <= 1e-6, || {
                    format!("type {k}, sample {sample}: gradient mismatch {rel:e}")
                });

                let lu = apply(&op, &u).expect("dimensions");
                let lv = apply(&op, &v).expect("dimensions");
                let (a, b) = (
                    inner(v.values(), lu.values(), mu),
                    inner(u.values(), lv.values(), mu),
                );
                f.check((a - b).abs() <= 1e-9 * a.abs().max(1.0), || {
                    format!("type {k}, sample {sample}: <v, Lu> = {a} but <u, Lv> = {b}")
                });
                let d = dirichlet_energy(&op, &u).expect("dimensions");
                let q = inner(u.values(), lu.values(), mu);
                f.check((d - q).abs() <= 1e-9 * q.abs().max(1.0) && d >= 0.0, || {
                    format!("type {k}, sample {sample}: Dirichlet energy {d} vs <u, Lu> = {q}")
                });
                let weights: Vec<f64> = u.values().iter().map(|x| (-2.0 * x).exp()).collect();
                let sign = inner(&weights, lu.values(), mu);
                f.check(sign <= 1e-12, || {
                    format!("type {k}, sample {sample}: sign integral {sign:e}")
                });
            }
        }
        f
    })
}

/// Runs all checks with the default seed.
pub fn run_selftest(quick: bool) -> Vec<CheckOutcome> {
    Acceptance::new(0).run_all(quick)
}
