#![allow(dead_code)]

use frackw_core::graph::WeightedGraph;
use frackw_core::linalg::Matrix;
use proptest::prelude::*;

/// Connected weighted graph on 2..=6 vertices: a random spanning path plus
/// random extra edges.
pub fn connected_graph() -> impl Strategy<Value = WeightedGraph> {
    (2usize..=6).prop_flat_map(|n| {
        (
            prop::collection::vec(0.05f64..2.0, n),
            prop::collection::vec(0.1f64..5.0, n - 1),
            prop::collection::vec(prop::option::of(0.1f64..5.0), n * (n - 1) / 2),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(|(mu, path, extra, order)| {
                let n = mu.len();
                let mut adj = Matrix::zeros(n, n);
                let mut k = 0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        if let Some(w) = extra[k] {
                            adj[(i, j)] = w;
                            adj[(j, i)] = w;
                        }
                        k += 1;
                    }
                }
                for (t, w) in path.iter().enumerate() {
                    let (i, j) = (order[t], order[t + 1]);
                    adj[(i, j)] = *w;
                    adj[(j, i)] = *w;
                }
                WeightedGraph::new(mu, adj, None).expect("connected by construction")
            })
    })
}

pub fn graph_and_function() -> impl Strategy<Value = (WeightedGraph, Vec<f64>, Vec<f64>)> {
    connected_graph().prop_flat_map(|g| {
        let n = g.n();
        (
            Just(g),
            prop::collection::vec(-2.0f64..2.0, n),
            prop::collection::vec(-2.0f64..2.0, n),
        )
    })
}

pub fn graph_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../graphs")
        .join(name)
}
