mod common;

use frackw_core::graph::{builtin_graph, integrate, VertexFunction};
use frackw_core::linalg::max_norm;
use frackw_core::solver::{
    apriori_box, energy, homotopy_target, homotopy_target_integral, jacobian,
    lower_barrier_constant, multi_start_solve, newton_solve, residual, start_rng, upper_barrier,
    NewtonOptions, ProblemInstance,
};
use frackw_core::spectral::fractional_operator;
use proptest::prelude::*;
use rand::Rng;

const EPS: f64 = 1e-6;

fn builtin_case() -> impl Strategy<Value = (u32, Vec<f64>, f64, f64)> {
    (1u32..=5).prop_flat_map(|k| {
        let n = builtin_graph(k).unwrap().0.n();
        (
            Just(k),
            prop::collection::vec(-2.0f64..2.0, n),
            -0.5f64..1.0,
            0.05f64..=1.0,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn jacobian_matches_finite_differences((k, u, lambda, s) in builtin_case()) {
        let (g, h) = builtin_graph(k).unwrap();
        let op = fractional_operator(&g, s).unwrap();
        let inst = ProblemInstance::new(&g, &op, h, lambda, -1.0).unwrap();
        let u = VertexFunction::new(u);
        let j = jacobian(&inst, &u).unwrap();
        for i in 0..g.n() {
            let eval = |d: f64| {
                let mut w = u.values().to_vec();
                w[i] += d;
                residual(&inst, &VertexFunction::new(w)).unwrap().into_values()
            };
            let (fp, fm) = (eval(EPS), eval(-EPS));
            let fd: Vec<f64> = fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * EPS)).collect();
            let col = j.column(i);
            let diff: Vec<f64> = fd.iter().zip(&col).map(|(a, b)| a - b).collect();
            prop_assert!(max_norm(&diff) <= 1e-6 * max_norm(&col).max(1.0));
        }
    }

    #[test]
    fn energy_gradient_is_weighted_residual((k, u, lambda, s) in builtin_case()) {
        let (g, h) = builtin_graph(k).unwrap();
        let op = fractional_operator(&g, s).unwrap();
        let inst = ProblemInstance::new(&g, &op, h, lambda, -1.0).unwrap();
        let u = VertexFunction::new(u);
        let f = residual(&inst, &u).unwrap();
        let grad: Vec<f64> = f.values().iter().zip(g.measure()).map(|(r, m)| r * m).collect();
        let fd: Vec<f64> = (0..g.n())
            .map(|i| {
                let eval = |d: f64| {
                    let mut w = u.values().to_vec();
                    w[i] += d;
                    energy(&inst, &VertexFunction::new(w)).unwrap()
                };
                (eval(EPS) - eval(-EPS)) / (2.0 * EPS)
            })
            .collect();
        let diff: Vec<f64> = fd.iter().zip(&grad).map(|(a, b)| a - b).collect();
        prop_assert!(max_norm(&diff) <= 1e-6 * max_norm(&grad).max(1.0));
    }

    #[test]
    fn weighted_jacobian_is_symmetric((k, u, lambda, s) in builtin_case()) {
        let (g, h) = builtin_graph(k).unwrap();
        let op = fractional_operator(&g, s).unwrap();
        let inst = ProblemInstance::new(&g, &op, h, lambda, -1.0).unwrap();
        let j = jacobian(&inst, &VertexFunction::new(u)).unwrap();
        let mu = g.measure();
        for a in 0..g.n() {
            for b in 0..g.n() {
                let (x, y) = (mu[a] * j[(a, b)], mu[b] * j[(b, a)]);
                prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
            }
        }
    }

    #[test]
    fn energy_shift_by_constant((k, u, lambda, s) in builtin_case(), t in -1.0f64..1.0) {
        let (g, h) = builtin_graph(k).unwrap();
        let op = fractional_operator(&g, s).unwrap();
        let c = -1.3;
        let inst = ProblemInstance::new(&g, &op, h.clone(), lambda, c).unwrap();
        let u = VertexFunction::new(u);
        let shifted = u.map(|x| x + t);
        let hl: Vec<f64> = h.values().iter().map(|v| v + lambda).collect();
        let delta: Vec<f64> = hl
            .iter()
            .zip(u.values())
            .map(|(k, x)| k * ((2.0 * (x + t)).exp() - (2.0 * x).exp()))
            .collect();
        let expected = -0.5 * integrate(&VertexFunction::new(delta), &g).unwrap() + c * t * g.volume();
        let got = energy(&inst, &shifted).unwrap() - energy(&inst, &u).unwrap();
        prop_assert!((got - expected).abs() <= 1e-9 * (1.0 + expected.abs()));
    }
}

#[test]
fn residual_and_jacobian_examples() {
    let (g, h) = builtin_graph(1).unwrap();
    let op = fractional_operator(&g, 0.5).unwrap();
    let inst = ProblemInstance::new(&g, &op, h, 0.0, -1.0).unwrap();
    let zero = VertexFunction::constant(2, 0.0);
    assert_eq!(residual(&inst, &zero).unwrap().values(), [-1.0, -0.5]);
    assert!((energy(&inst, &zero).unwrap() - 0.125).abs() < 1e-15);
    // h_λ(x1) = 0: no diagonal correction there.
    let j = jacobian(&inst, &zero).unwrap();
    assert_eq!(j[(0, 0)], op.matrix()[(0, 0)]);

    let k = ProblemInstance::from_coefficient(&g, &op, VertexFunction::constant(2, -1.0), -4.0)
        .unwrap();
    let u = VertexFunction::constant(2, 2f64.ln());
    assert!(max_norm(residual(&k, &u).unwrap().values()) < 1e-14);
    let j = jacobian(&k, &u).unwrap();
    for a in 0..2 {
        for b in 0..2 {
            let expected = op.matrix()[(a, b)] + if a == b { 8.0 } else { 0.0 };
            assert!((j[(a, b)] - expected).abs() < 1e-14);
        }
    }
}

#[test]
fn newton_examples() {
    let (g, h) = builtin_graph(1).unwrap();
    let op = fractional_operator(&g, 0.5).unwrap();
    let opts = NewtonOptions::default();

    let k = ProblemInstance::from_coefficient(&g, &op, VertexFunction::constant(2, -1.0), -4.0)
        .unwrap();
    let r = newton_solve(&k, &VertexFunction::constant(2, 0.0), &opts).unwrap();
    assert!(r.converged);
    assert!((r.u[0] - std::f64::consts::LN_2).abs() < 1e-9);

    let inst = ProblemInstance::new(&g, &op, h.clone(), -0.1, -1.0).unwrap();
    let b = apriori_box(&inst).unwrap();
    let mut reference: Option<VertexFunction> = None;
    for start in 0..64 {
        let mut rng = start_rng(0, start);
        let u0 = VertexFunction::new(
            (0..2)
                .map(|_| rng.random_range(b.lower - 2.0..=b.upper + 2.0))
                .collect(),
        );
        let r = newton_solve(&inst, &u0, &opts).unwrap();
        if !r.converged {
            continue;
        }
        match &reference {
            None => reference = Some(r.u),
            Some(u) => {
                let d: Vec<f64> = u
                    .values()
                    .iter()
                    .zip(r.u.values())
                    .map(|(a, b)| a - b)
                    .collect();
                assert!(max_norm(&d) <= 1e-7);
            }
        }
    }
    assert!(reference.is_some());

    let far = ProblemInstance::new(&g, &op, h.clone(), -h.min() + 1.0, -1.0).unwrap();
    for start in 0..16 {
        let mut rng = start_rng(1, start);
        let u0 = VertexFunction::new((0..2).map(|_| rng.random_range(-4.0..=4.0)).collect());
        assert!(!newton_solve(&far, &u0, &opts).unwrap().converged);
    }
}

#[test]
fn degree_by_regime() {
    let opts = NewtonOptions::default();
    for k in 1..=5 {
        let (g, h) = builtin_graph(k).unwrap();
        let op = fractional_operator(&g, 0.5).unwrap();
        for lambda in [-0.3, 0.0] {
            let inst = ProblemInstance::new(&g, &op, h.clone(), lambda, -1.0).unwrap();
            let small = multi_start_solve(&inst, 64, 0, &opts).unwrap();
            let large = multi_start_solve(&inst, 256, 0, &opts).unwrap();
            assert_eq!(small.len(), large.len());
            assert_eq!(large.degree_estimate, 1, "type {k}, lambda {lambda}");
            assert_eq!(large.solutions[0].jacobian_sign, 1);
            let b = apriori_box(&inst).unwrap();
            for sol in &large.solutions {
                assert!(sol.residual_norm <= 1e-9);
                assert!(b.contains(&sol.u, 1e-6));
            }
        }
    }
}

#[test]
fn barrier_ordering_for_small_lambda() {
    let opts = NewtonOptions::default();
    for k in 1..=5 {
        let (g, h) = builtin_graph(k).unwrap();
        let op = fractional_operator(&g, 0.5).unwrap();
        let barrier = upper_barrier(&g, &op, &h, -1.0, &opts).unwrap();
        let lambda = 0.5 * barrier.threshold.min(1e-3);
        let inst = ProblemInstance::new(&g, &op, h.clone(), lambda, -1.0).unwrap();
        let bound = lower_barrier_constant(&apriori_box(&inst).unwrap());
        let set = multi_start_solve(&inst, 64, 0, &opts).unwrap();
        let minimum = set
            .solutions
            .iter()
            .find(|s| s.jacobian_sign == 1)
            .expect("local minimum present");
        for (u, psi) in minimum.u.values().iter().zip(barrier.psi.values()) {
            assert!(
                -bound < *u && u < psi,
                "type {k}: {u} outside (-{bound}, {psi})"
            );
        }
    }
}

#[test]
fn homotopy_target_examples() {
    let (g, h) = builtin_graph(1).unwrap();
    let op = fractional_operator(&g, 0.5).unwrap();
    let inst = ProblemInstance::new(&g, &op, h.clone(), 0.2, -1.0).unwrap();
    assert_eq!(homotopy_target(&inst).values(), [6.0, -1.0]);
    assert!(homotopy_target_integral(&inst) > 0.0);
    let below = ProblemInstance::new(&g, &op, h, -0.1, -1.0).unwrap();
    assert_eq!(homotopy_target(&below).values(), [-1.0, -1.0]);
}
