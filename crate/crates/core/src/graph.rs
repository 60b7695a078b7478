//! Finite weighted graphs `G = (V, E, mu, w)` and functions on their vertices.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Index;

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::linalg::Matrix;

/// One violated graph invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    TooFewVertices {
        n: usize,
    },
    LabelCount {
        expected: usize,
        actual: usize,
    },
    AdjacencyShape {
        rows: usize,
        cols: usize,
        n: usize,
    },
    NonPositiveMeasure {
        vertex: usize,
        value: f64,
    },
    NonZeroDiagonal {
        vertex: usize,
        value: f64,
    },
    NegativeWeight {
        i: usize,
        j: usize,
        value: f64,
    },
    NonFiniteWeight {
        i: usize,
        j: usize,
    },
    InconsistentWeight {
        i: usize,
        j: usize,
        wij: f64,
        wji: f64,
    },
    Disconnected {
        components: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewVertices { n } => {
                write!(f, "graph needs at least 2 vertices, has {n}")
            }
            Violation::LabelCount { expected, actual } => {
                write!(f, "expected {expected} labels, got {actual}")
            }
            Violation::AdjacencyShape { rows, cols, n } => {
                write!(f, "adjacency is {rows}x{cols}, expected {n}x{n}")
            }
            Violation::NonPositiveMeasure { vertex, value } => {
                write!(f, "nonpositive measure {value} at vertex {vertex}")
            }
            Violation::NonZeroDiagonal { vertex, value } => {
                write!(f, "self-loop of weight {value} at vertex {vertex}")
            }
            Violation::NegativeWeight { i, j, value } => {
                write!(f, "negative weight {value} on edge ({i}, {j})")
            }
            Violation::NonFiniteWeight { i, j } => {
                write!(f, "non-finite weight on edge ({i}, {j})")
            }
            Violation::InconsistentWeight { i, j, wij, wji } => {
                write!(f, "inconsistent weight on edge ({i}, {j}): {wij} vs {wji}")
            }
            Violation::Disconnected { components } => {
                write!(f, "graph is disconnected ({components} components)")
            }
        }
    }
}

/// Every invariant violation found by [`validate_graph`]. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, pred: impl Fn(&Violation) -> bool) -> bool {
        self.violations.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Connected finite graph with vertex measure `mu` and symmetric weights.
///
/// Storage is dense; the adjacency matrix holds `w(x, y)` with zeros for
/// non-edges. A value may be constructed unchecked through
/// [`WeightedGraph::from_raw`] so that [`validate_graph`] can report on it,
/// but every numerical routine expects a graph built by
/// [`WeightedGraph::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    labels: Vec<String>,
    mu: Vec<f64>,
    adj: Matrix,
}

impl WeightedGraph {
    /// Builds and validates a graph. Labels default to `x1..xn`.
    pub fn new(mu: Vec<f64>, adj: Matrix, labels: Option<Vec<String>>) -> Result<Self> {
        let g = Self::from_raw(mu, adj, labels);
        let report = validate_graph(&g);
        if report.is_valid() {
            Ok(g)
        } else {
            Err(Error::InvalidGraph(report))
        }
    }

    /// Builds a graph without checking any invariant.
    pub fn from_raw(mu: Vec<f64>, adj: Matrix, labels: Option<Vec<String>>) -> Self {
        let labels = labels.unwrap_or_else(|| default_labels(mu.len()));
        WeightedGraph { labels, mu, adj }
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn measure(&self) -> &[f64] {
        &self.mu
    }

    pub fn adjacency(&self) -> &Matrix {
        &self.adj
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adj[(i, j)]
    }

    /// Total measure `|V| = sum mu(x)`.
    pub fn volume(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn min_measure(&self) -> f64 {
        self.mu.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Edges `(i, j, w)` with `i < j` and `w > 0`, in row order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.adj[(i, j)];
                if w > 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    /// Number of connected components of the positive-weight graph.
    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for y in 0..n {
                    if !seen[y] && self.adj[(x, y)] > 0.0 {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        components
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("x{k}")).collect()
}

/// Checks every [`WeightedGraph`] invariant and lists the violations.
pub fn validate_graph(g: &WeightedGraph) -> ValidationReport {
    let mut violations = Vec::new();
    let n = g.n();
    if n < 2 {
        violations.push(Violation::TooFewVertices { n });
    }
    if g.labels.len() != n {
        violations.push(Violation::LabelCount {
            expected: n,
            actual: g.labels.len(),
        });
    }
    for (vertex, &value) in g.mu.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            violations.push(Violation::NonPositiveMeasure { vertex, value });
        }
    }
    if g.adj.rows() != n || g.adj.cols() != n {
        violations.push(Violation::AdjacencyShape {
            rows: g.adj.rows(),
            cols: g.adj.cols(),
            n,
        });
        return ValidationReport { violations };
    }
    for i in 0..n {
        let d = g.adj[(i, i)];
        if d != 0.0 {
            violations.push(Violation::NonZeroDiagonal {
                vertex: i,
                value: d,
            });
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = g.adj[(i, j)];
            if !w.is_finite() {
                violations.push(Violation::NonFiniteWeight { i, j });
            } else if w < 0.0 {
                violations.push(Violation::NegativeWeight { i, j, value: w });
            }
            if j > i && g.adj[(j, i)] != w {
                violations.push(Violation::InconsistentWeight {
                    i,
                    j,
                    wij: w,
                    wji: g.adj[(j, i)],
                });
            }
        }
    }
    if n >= 1 {
        let components = g.component_count();
        if components > 1 {
            violations.push(Violation::Disconnected { components });
        }
    }
    ValidationReport { violations }
}

/// Real-valued function on the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct VertexFunction {
    values: Vec<f64>,
}

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Self {
        VertexFunction { values }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        VertexFunction {
            values: vec![value; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> VertexFunction {
        VertexFunction::new(self.values.iter().map(|&v| f(v)).collect())
    }

    /// Checks that this function lives on `g`.
    pub fn check_on(&self, g: &WeightedGraph) -> Result<()> {
        check_len(g.n(), self.len())
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(values: Vec<f64>) -> Self {
        VertexFunction::new(values)
    }
}

impl Index<usize> for VertexFunction {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// `sum_x f(x) mu(x)`.
pub fn integrate(f: &VertexFunction, g: &WeightedGraph) -> Result<f64> {
    f.check_on(g)?;
    Ok(f.values.iter().zip(&g.mu).map(|(v, m)| v * m).sum())
}

/// Measure-weighted inner product `sum_x u(x) v(x) mu(x)`.
pub fn inner(u: &[f64], v: &[f64], mu: &[f64]) -> f64 {
    u.iter().zip(v).zip(mu).map(|((a, b), m)| a * b * m).sum()
}

/// One of the five graphs used in the numerical experiments, with its
/// prescribed function `h`.
pub fn builtin_graph(type_id: u32) -> Result<(WeightedGraph, VertexFunction)> {
    let (mu, adj, h): (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) = match type_id {
        1 => (
            vec![1.0, 0.5],
            vec![vec![0.0, 2.0], vec![2.0, 0.0]],
            vec![0.0, -0.5],
        ),
        2 => (
            vec![1.0, 0.5, 0.25],
            vec![
                vec![0.0, 2.0, 1.0],
                vec![2.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
            ],
            vec![0.0, -0.5, -2.0],
        ),
        3 => (
            vec![1.0, 0.5, 0.25],
            vec![
                vec![0.0, 2.0, 1.0],
                vec![2.0, 0.0, 3.0],
                vec![1.0, 3.0, 0.0],
            ],
            vec![0.0, -0.5, -2.0],
        ),
        4 => (
            vec![1.0, 0.5, 0.25, 0.125, 0.0625],
            vec![
                vec![0.0, 0.0, 3.0, 4.0, 0.0],
                vec![0.0, 0.0, 0.0, 2.0, 1.0],
                vec![3.0, 0.0, 0.0, 0.0, 5.0],
                vec![4.0, 2.0, 0.0, 0.0, 0.0],
                vec![0.0, 1.0, 5.0, 0.0, 0.0],
            ],
            vec![0.0, -0.5, -2.0, -1.0, -1.0],
        ),
        5 => (
            vec![1.0, 0.5, 0.25, 0.125, 0.0625],
            vec![
                vec![0.0, 1.0, 3.0, 4.0, 1.0],
                vec![1.0, 0.0, 1.0, 2.0, 1.0],
                vec![3.0, 1.0, 0.0, 1.0, 5.0],
                vec![4.0, 2.0, 1.0, 0.0, 1.0],
                vec![1.0, 1.0, 5.0, 1.0, 0.0],
            ],
            vec![0.0, -0.5, -2.0, -1.0, -1.0],
        ),
        other => return Err(Error::UnknownBuiltin(other)),
    };
    let g = WeightedGraph::new(mu, Matrix::from_rows(&adj), None)?;
    Ok((g, VertexFunction::new(h)))
}
