//! Spectral decomposition of the graph Laplacian and the fractional
//! Laplacian `(-Δ)^s` built from it.
//!
//! With `U = diag(mu)` and `K = D - A` the (symmetric) weighted Laplacian,
//! the standard Laplacian matrix is `L = U^{-1} K`. It is similar to the
//! symmetric matrix `M = U^{-1/2} K U^{-1/2}`, so eigenpairs of `M` map to
//! mu-orthonormal eigenpairs of `-Δ` through `phi = U^{-1/2} v`. The
//! fractional kernel is then
//!
//! ```text
//! W_s(x, y) = -mu(x) mu(y) sum_i lambda_i^s phi_i(x) phi_i(y),   x != y
//! ```
//!
//! and `(-Δ)^s u(x) = (1/mu(x)) sum_{y != x} W_s(x, y) (u(x) - u(y))`.

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::graph::{inner, VertexFunction, WeightedGraph};
use crate::linalg::{jacobi_eigen, Matrix};

/// Jacobi stops once the off-diagonal norm is below this fraction of `||M||_F`.
pub const JACOBI_REL_TOL: f64 = 1e-14;
/// Sweep cap for the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative gap below which two eigenvalues are treated as one cluster.
const CLUSTER_REL_GAP: f64 = 1e-9;
/// Kernel values below this fraction of `max |W|` count as zero.
pub const KERNEL_ZERO_REL_TOL: f64 = 1e-12;

/// `L = U^{-1}(D - A)`: diagonal `(sum_j w_ij)/mu_i`, off-diagonal `-w_ij/mu_i`.
pub fn standard_laplacian(g: &WeightedGraph) -> Matrix {
    let n = g.n();
    let mu = g.measure();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        let mut degree = 0.0;
        for j in 0..n {
            if j != i {
                let w = g.weight(i, j);
                degree += w;
                l[(i, j)] = -w / mu[i];
            }
        }
        l[(i, i)] = degree / mu[i];
    }
    l
}

/// Eigenvalues of `-Δ` in ascending order and the matching mu-orthonormal
/// eigenvectors.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
    measure: Vec<f64>,
}

impl SpectralDecomposition {
    /// Wraps externally supplied eigenpairs without checking them.
    pub fn from_parts(
        eigenvalues: Vec<f64>,
        eigenvectors: Vec<Vec<f64>>,
        measure: Vec<f64>,
    ) -> Self {
        SpectralDecomposition {
            eigenvalues,
            eigenvectors,
            measure,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `phi_i` as stored vectors, `eigenvectors()[i][x] = phi_i(x)`.
    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.eigenvectors
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest deviation of the mu-Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let g = inner(&self.eigenvectors[i], &self.eigenvectors[j], &self.measure);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }
}

/// mu-orthonormal eigendecomposition of `-Δ` on a connected graph.
///
/// The zero eigenvalue is pinned to exactly `0` with eigenvector
/// `1/sqrt(|V|)`; eigenvectors of clustered eigenvalues are re-orthonormalised
/// under the mu-inner product, and each eigenvector has its first nonzero
/// component positive.
pub fn eigendecompose(g: &WeightedGraph) -> Result<SpectralDecomposition> {
    let n = g.n();
    let mu = g.measure();
    let inv_sqrt: Vec<f64> = mu.iter().map(|m| 1.0 / m.sqrt()).collect();

    let lap = standard_laplacian(g);
    // U^{-1/2} (U L) U^{-1/2}; U L = D - A is symmetric.
    let sym = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            lap[(i, i)] * mu[i] * inv_sqrt[i] * inv_sqrt[i]
        } else {
            -g.weight(i, j) * inv_sqrt[i] * inv_sqrt[j]
        }
    });

    let eig = jacobi_eigen(&sym, JACOBI_REL_TOL, JACOBI_MAX_SWEEPS).map_err(|e| {
        Error::EigenNonConvergence {
            sweeps: e.sweeps,
            off_norm: e.off_norm,
        }
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.values[a].total_cmp(&eig.values[b]));

    let mut eigenvalues: Vec<f64> = order.iter().map(|&k| eig.values[k]).collect();
    let mut eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| (0..n).map(|x| eig.vectors[(x, k)] * inv_sqrt[x]).collect())
        .collect();

    // Connected graph: the kernel of -Δ is exactly the constants.
    eigenvalues[0] = 0.0;
    eigenvectors[0] = vec![1.0 / g.volume().sqrt(); n];
    for v in eigenvalues.iter_mut().skip(1) {
        *v = v.max(0.0);
    }

    reorthonormalise(&eigenvalues, &mut eigenvectors, mu, sym.frobenius_norm());
    for phi in &mut eigenvectors {
        fix_sign(phi);
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        measure: mu.to_vec(),
    })
}

/// Modified Gram-Schmidt under the mu-inner product, applied within each
/// cluster of (numerically) repeated eigenvalues and against the constant mode.
fn reorthonormalise(eigenvalues: &[f64], vectors: &mut [Vec<f64>], mu: &[f64], scale: f64) {
    let n = eigenvalues.len();
    let gap = CLUSTER_REL_GAP * scale.max(1.0);
    let mut start = 1;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= gap {
            end += 1;
        }
        for k in start..end {
            let mut v = vectors[k].clone();
            for j in std::iter::once(0).chain(start..k) {
                let proj = inner(&v, &vectors[j], mu);
                for (a, b) in v.iter_mut().zip(&vectors[j]) {
                    *a -= proj * b;
                }
            }
            let norm = inner(&v, &v, mu).sqrt();
            for a in &mut v {
                *a /= norm;
            }
            vectors[k] = v;
        }
        start = end;
    }
}

fn fix_sign(phi: &mut [f64]) {
    let scale = phi.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if let Some(first) = phi.iter().find(|v| v.abs() > 1e-12 * scale) {
        if *first < 0.0 {
            for v in phi.iter_mut() {
                *v = -*v;
            }
        }
    }
}

/// `lambda^s` with `0^s := 0`.
pub fn fractional_power(lambda: f64, s: f64) -> f64 {
    if lambda <= 0.0 {
        0.0
    } else {
        lambda.powf(s)
    }
}

pub(crate) fn check_exponent(s: f64) -> Result<()> {
    if s > 0.0 && s <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(
            "s",
            format!("exponent must lie in (0, 1], got {s}"),
        ))
    }
}

/// Kernel table `W_s(x, y)` for `x != y`; the diagonal is left at zero.
pub fn fractional_kernel(dec: &SpectralDecomposition, g: &WeightedGraph, s: f64) -> Result<Matrix> {
    check_exponent(s)?;
    check_len(g.n(), dec.n())?;
    let n = g.n();
    let mu = g.measure();
    let powers: Vec<f64> = dec
        .eigenvalues
        .iter()
        .map(|&l| fractional_power(l, s))
        .collect();
    let mut w = Matrix::zeros(n, n);
    // Filled for x < y and mirrored, so W is exactly symmetric.
    for x in 0..n {
        for y in x + 1..n {
            let sum: f64 = powers
                .iter()
                .zip(&dec.eigenvectors)
                .map(|(p, phi)| p * phi[x] * phi[y])
                .sum();
            w[(x, y)] = -mu[x] * mu[y] * sum;
            w[(y, x)] = w[(x, y)];
        }
    }
    Ok(w)
}

/// Dense fractional Laplacian `L_s = U^{-1} W_s` together with its kernel
/// and the decomposition it was built from.
#[derive(Debug, Clone, Serialize)]
pub struct FractionalOperator {
    s: f64,
    kernel: Matrix,
    matrix: Matrix,
    decomposition: SpectralDecomposition,
}

impl FractionalOperator {
    /// Assembles `L_s` from a precomputed decomposition.
    pub fn from_decomposition(
        dec: SpectralDecomposition,
        g: &WeightedGraph,
        s: f64,
    ) -> Result<Self> {
        let kernel = fractional_kernel(&dec, g, s)?;
        let n = g.n();
        let mu = g.measure();
        let mut matrix = Matrix::zeros(n, n);
        for x in 0..n {
            let mut diag = 0.0;
            for y in 0..n {
                if y != x {
                    diag += kernel[(x, y)];
                    matrix[(x, y)] = -kernel[(x, y)] / mu[x];
                }
            }
            matrix[(x, x)] = diag / mu[x];
        }
        Ok(FractionalOperator {
            s,
            kernel,
            matrix,
            decomposition: dec,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn kernel(&self) -> &Matrix {
        &self.kernel
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    pub fn measure(&self) -> &[f64] {
        &self.decomposition.measure
    }

    /// `lambda_i^s` for each eigenvalue of `-Δ`.
    pub fn fractional_eigenvalues(&self) -> Vec<f64> {
        self.decomposition
            .eigenvalues
            .iter()
            .map(|&l| fractional_power(l, self.s))
            .collect()
    }

    /// Pairs `x < y` whose kernel value is not strictly positive, with
    /// values within `1e-12 · max |W|` of zero counted as zero.
    ///
    /// Empty for every connected graph when `s < 1`; at `s = 1` the kernel
    /// equals the edge weights, so non-adjacent pairs show up here.
    pub fn kernel_positivity_violations(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let floor = KERNEL_ZERO_REL_TOL * self.kernel.max_abs_diff(&Matrix::zeros(n, n));
        let mut out = Vec::new();
        for x in 0..n {
            for y in (x + 1)..n {
                let w = self.kernel[(x, y)];
                if !(w > floor) {
                    out.push((x, y, w));
                }
            }
        }
        out
    }

    pub(crate) fn apply_slice(&self, u: &[f64]) -> Vec<f64> {
        self.matrix.matvec(u)
    }
}

/// Assembles `(-Δ)^s` on `g`.
pub fn fractional_operator(g: &WeightedGraph, s: f64) -> Result<FractionalOperator> {
    check_exponent(s)?;
    let dec = eigendecompose(g)?;
    FractionalOperator::from_decomposition(dec, g, s)
}

/// `L_s u`.
pub fn apply(op: &FractionalOperator, u: &VertexFunction) -> Result<VertexFunction> {
    check_len(op.n(), u.len())?;
    Ok(VertexFunction::new(op.apply_slice(u.values())))
}

/// `∫ |∇^s u|^2 dmu = ½ sum_x sum_{y != x} W_s(x, y) (u(x) - u(y))^2`.
pub fn dirichlet_energy(op: &FractionalOperator, u: &VertexFunction) -> Result<f64> {
    check_len(op.n(), u.len())?;
    Ok(dirichlet_energy_slice(op, u.values()))
}

pub(crate) fn dirichlet_energy_slice(op: &FractionalOperator, u: &[f64]) -> f64 {
    let n = op.n();
    let mut total = 0.0;
    for x in 0..n {
        for y in 0..n {
            if x != y {
                let d = u[x] - u[y];
                total += op.kernel[(x, y)] * d * d;
            }
        }
    }
    0.5 * total
}

/// Constants entering the a priori bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    /// `max_x (sum_{y != x} W_s(x, y)) / mu(x)`
    pub c_max: f64,
    /// `min_{x != y} W_s(x, y) / mu(x)`
    pub c_min: f64,
    /// `max(max |h_λ|, 1 / min_{h_λ != 0} |h_λ|)`
    pub lambda_bound: f64,
}

/// `C_M`, `C_m` and `Λ_λ` for the coefficient `h_λ`.
pub fn bound_constants(
    op: &FractionalOperator,
    h_lambda: &VertexFunction,
) -> Result<BoundConstants> {
    check_len(op.n(), h_lambda.len())?;
    let n = op.n();
    let mu = op.measure();
    let mut c_max = f64::NEG_INFINITY;
    let mut c_min = f64::INFINITY;
    for x in 0..n {
        let mut row = 0.0;
        for y in 0..n {
            if y != x {
                row += op.kernel[(x, y)];
                c_min = c_min.min(op.kernel[(x, y)] / mu[x]);
            }
        }
        c_max = c_max.max(row / mu[x]);
    }

    let nonzero: Vec<f64> = h_lambda
        .values()
        .iter()
        .filter(|v| **v != 0.0)
        .map(|v| v.abs())
        .collect();
    if nonzero.is_empty() {
        return Err(Error::DegenerateCoefficient);
    }
    let largest = nonzero.iter().copied().fold(0.0, f64::max);
    let smallest = nonzero.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(BoundConstants {
        c_max,
        c_min,
        lambda_bound: largest.max(1.0 / smallest),
    })
}
