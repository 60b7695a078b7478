//! Fractional Laplacian on finite weighted graphs and the negative-case
//! fractional Kazdan–Warner equation
//!
//! ```text
//! (-Δ)^s u = (h + λ) e^{2u} - c,   c < 0,  max h = 0,  h ≢ 0
//! ```
//!
//! Modules, bottom up:
//!
//! - [`graph`]: validated weighted graphs, vertex functions, builtin test graphs
//! - [`io`]: JSON graph files
//! - [`spectral`]: eigendecomposition, fractional kernel and operator
//! - [`solver`]: residual, Jacobian, energy, a priori bounds, damped Newton,
//!   multi-start degree estimates
//! - [`critical`]: solvability oracle, `Λ*_s` search and `(c, s)` sweeps

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod critical;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{builtin_graph, VertexFunction, WeightedGraph};
pub use spectral::{fractional_operator, FractionalOperator};
