//! JSON graph files.
//!
//! ```json
//! {
//!   "labels": ["x1", "x2"],
//!   "measure": [1.0, 0.5],
//!   "edges": [[0, 1, 2.0]],
//!   "h": [0.0, -0.5]
//! }
//! ```
//!
//! `labels` is optional. Edges are listed once with `i < j` and `w > 0`;
//! a reversed pair `(j, i, w)` is accepted as the same edge, and repeating
//! an edge with a different weight is rejected as inconsistent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{validate_graph, ValidationReport, VertexFunction, Violation, WeightedGraph};
use crate::linalg::Matrix;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    measure: Vec<f64>,
    edges: Vec<(usize, usize, f64)>,
    h: Vec<f64>,
}

/// Parses and validates a graph file, returning the graph and `h`.
pub fn parse_graph_file(text: &str) -> Result<(WeightedGraph, VertexFunction)> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let n = file.measure.len();
    let mut violations = Vec::new();
    let mut adj = Matrix::zeros(n, n);
    for &(a, b, w) in &file.edges {
        if a >= n || b >= n {
            return Err(Error::param(
                "edges",
                format!("edge ({a}, {b}) references a vertex outside 0..{n}"),
            ));
        }
        if a == b {
            violations.push(Violation::NonZeroDiagonal {
                vertex: a,
                value: w,
            });
            continue;
        }
        if !(w > 0.0 && w.is_finite()) {
            violations.push(Violation::NegativeWeight {
                i: a,
                j: b,
                value: w,
            });
            continue;
        }
        let (i, j) = (a.min(b), a.max(b));
        let existing = adj[(i, j)];
        if existing != 0.0 && existing != w {
            violations.push(Violation::InconsistentWeight {
                i,
                j,
                wij: existing,
                wji: w,
            });
            continue;
        }
        adj[(i, j)] = w;
        adj[(j, i)] = w;
    }

    let g = WeightedGraph::from_raw(file.measure, adj, file.labels);
    let mut report = validate_graph(&g);
    violations.append(&mut report.violations);
    if file.h.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: file.h.len(),
        });
    }
    if !violations.is_empty() {
        return Err(Error::InvalidGraph(ValidationReport { violations }));
    }
    Ok((g, VertexFunction::new(file.h)))
}

/// Serialises a graph and `h` in the format read by [`parse_graph_file`].
pub fn serialize_graph(g: &WeightedGraph, h: &VertexFunction) -> String {
    let file = GraphFile {
        labels: Some(g.labels().to_vec()),
        measure: g.measure().to_vec(),
        edges: g.edges(),
        h: h.values().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("graph file serialisation cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin_graph;

    #[test]
    fn reads_type1() {
        let text = r#"{"measure": [1, 0.5], "edges": [[0, 1, 2]], "h": [0, -0.5]}"#;
        let (g, h) = parse_graph_file(text).unwrap();
        assert_eq!(g.measure(), [1.0, 0.5]);
        assert_eq!(g.weight(1, 0), 2.0);
        assert_eq!(h.values(), [0.0, -0.5]);
        assert_eq!(g.labels(), ["x1", "x2"]);
    }

    #[test]
    fn missing_measure_is_parse_error() {
        let err = parse_graph_file(r#"{"edges": [[0, 1, 2]], "h": [0, -0.5]}"#).unwrap_err();
        match err {
            Error::Parse { message, .. } => assert!(message.contains("measure")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_graph_file("{\n  \"measure\": [1, 0.5],\n  \"edges\": [[0, 1, 2]\n}")
            .unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        let err = parse_graph_file(
            r#"{"measure": [1, 1], "edges": [[0, 1, 1]], "h": [0, -1], "extra": 1}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn conflicting_duplicate_edges_rejected() {
        let text = r#"{"measure": [1, 1, 1], "edges": [[0, 1, 2], [1, 0, 3], [1, 2, 1]], "h": [0, -1, -1]}"#;
        match parse_graph_file(text).unwrap_err() {
            Error::InvalidGraph(report) => assert!(
                report.has(|v| matches!(v, Violation::InconsistentWeight { i: 0, j: 1, .. }))
            ),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn disconnected_file_rejected() {
        let text = r#"{"measure": [1, 1, 1], "edges": [[0, 1, 2]], "h": [0, -1, -1]}"#;
        assert!(matches!(
            parse_graph_file(text),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn nonpositive_edge_weight_rejected() {
        let text = r#"{"measure": [1, 1], "edges": [[0, 1, -2]], "h": [0, -1]}"#;
        assert!(matches!(
            parse_graph_file(text),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn builtins_round_trip() {
        for k in 1..=5 {
            let (g, h) = builtin_graph(k).unwrap();
            let (g2, h2) = parse_graph_file(&serialize_graph(&g, &h)).unwrap();
            assert_eq!(g, g2);
            assert_eq!(h, h2);
        }
    }
}
