use crate::error::{check_len, Error, Result};
use crate::graph::{integrate, VertexFunction, WeightedGraph};
use crate::linalg::Matrix;
use crate::spectral::{dirichlet_energy_slice, FractionalOperator};

/// Tolerance for the `max h = 0` normalisation.
pub const MAX_H_TOL: f64 = 1e-12;

/// One equation `(-Δ)^s u = h_λ e^{2u} - c` on a fixed graph.
///
/// The coefficient multiplying `e^{2u}` is stored explicitly. For a regular
/// instance it is `h + λ`; homotopy stages and barrier problems replace it
/// (or `c`) while keeping the graph and operator.
#[derive(Debug, Clone)]
pub struct ProblemInstance<'a> {
    graph: &'a WeightedGraph,
    op: &'a FractionalOperator,
    h: VertexFunction,
    lambda: f64,
    c: f64,
    coefficient: Vec<f64>,
}

impl<'a> ProblemInstance<'a> {
    /// Checks `c < 0`, `max h = 0`, `h ≢ 0` and that `op` lives on `graph`.
    pub fn new(
        graph: &'a WeightedGraph,
        op: &'a FractionalOperator,
        h: VertexFunction,
        lambda: f64,
        c: f64,
    ) -> Result<Self> {
        h.check_on(graph)?;
        check_len(graph.n(), op.n())?;
        if op.measure() != graph.measure() {
            return Err(Error::param(
                "op",
                "operator was assembled on a different graph",
            ));
        }
        if !(c < 0.0) {
            return Err(Error::param("c", format!("c must be negative, got {c}")));
        }
        if !lambda.is_finite() {
            return Err(Error::param("lambda", "lambda must be finite"));
        }
        check_prescribed(&h)?;
        let coefficient = h.values().iter().map(|v| v + lambda).collect();
        Ok(ProblemInstance {
            graph,
            op,
            h,
            lambda,
            c,
            coefficient,
        })
    }

    /// Equation with an arbitrary coefficient `k` in place of `h + λ`.
    ///
    /// No sign normalisation is imposed on `k`; this is the form used by the
    /// constant-coefficient oracles and by auxiliary barrier problems. The
    /// instance reports `h = k` and `λ = 0`.
    pub fn from_coefficient(
        graph: &'a WeightedGraph,
        op: &'a FractionalOperator,
        coefficient: VertexFunction,
        c: f64,
    ) -> Result<Self> {
        coefficient.check_on(graph)?;
        check_len(graph.n(), op.n())?;
        if !(c < 0.0) {
            return Err(Error::param("c", format!("c must be negative, got {c}")));
        }
        if coefficient.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::param("h", "coefficient must be finite"));
        }
        Ok(ProblemInstance {
            graph,
            op,
            coefficient: coefficient.values().to_vec(),
            h: coefficient,
            lambda: 0.0,
            c,
        })
    }

    /// Same instance with a different `λ`.
    pub fn with_lambda(&self, lambda: f64) -> Self {
        ProblemInstance {
            lambda,
            coefficient: self.h.values().iter().map(|v| v + lambda).collect(),
            ..self.clone()
        }
    }

    /// Same instance with a different constant `c` (still required negative).
    pub fn with_c(&self, c: f64) -> Result<Self> {
        if !(c < 0.0) {
            return Err(Error::param("c", format!("c must be negative, got {c}")));
        }
        Ok(ProblemInstance { c, ..self.clone() })
    }

    /// Homotopy stage `T(·, t)`: coefficient `(1 - t) h_λ + t h̃_λ`.
    pub fn homotopy_stage(&self, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::param(
                "t",
                format!("homotopy parameter must lie in [0, 1], got {t}"),
            ));
        }
        Ok(ProblemInstance {
            coefficient: homotopy_coefficient(self, t),
            ..self.clone()
        })
    }

    pub fn graph(&self) -> &'a WeightedGraph {
        self.graph
    }

    pub fn op(&self) -> &'a FractionalOperator {
        self.op
    }

    pub fn h(&self) -> &VertexFunction {
        &self.h
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// The coefficient of `e^{2u}`, i.e. `h_λ` for a regular instance.
    pub fn coefficient(&self) -> VertexFunction {
        VertexFunction::new(self.coefficient.clone())
    }

    pub(crate) fn residual_slice(&self, u: &[f64]) -> Vec<f64> {
        let mut f = self.op.apply_slice(u);
        for ((fi, &ui), &ki) in f.iter_mut().zip(u).zip(&self.coefficient) {
            *fi += -ki * (2.0 * ui).exp() + self.c;
        }
        f
    }

    pub(crate) fn jacobian_matrix(&self, u: &[f64]) -> Matrix {
        let mut j = self.op.matrix().clone();
        for (i, (&ui, &ki)) in u.iter().zip(&self.coefficient).enumerate() {
            if ki != 0.0 {
                j[(i, i)] -= 2.0 * ki * (2.0 * ui).exp();
            }
        }
        j
    }

    pub(crate) fn energy_slice(&self, u: &[f64]) -> f64 {
        let mu = self.graph.measure();
        let mut lower = 0.0;
        for ((&ui, &ki), &m) in u.iter().zip(&self.coefficient).zip(mu) {
            lower += (-0.5 * ki * (2.0 * ui).exp() + self.c * ui) * m;
        }
        0.5 * dirichlet_energy_slice(self.op, u) + lower
    }
}

fn check_prescribed(h: &VertexFunction) -> Result<()> {
    if h.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::param("h", "h must be finite"));
    }
    if (h.max()).abs() > MAX_H_TOL {
        return Err(Error::param(
            "h",
            format!("max h must be 0, got {}", h.max()),
        ));
    }
    if h.values().iter().all(|v| *v == 0.0) {
        return Err(Error::param("h", "h must not vanish identically"));
    }
    Ok(())
}

/// `F(u) = (-Δ)^s u - h_λ e^{2u} + c`.
pub fn residual(inst: &ProblemInstance<'_>, u: &VertexFunction) -> Result<VertexFunction> {
    check_len(inst.n(), u.len())?;
    Ok(VertexFunction::new(inst.residual_slice(u.values())))
}

/// `DF(u) = L_s - diag(2 h_λ e^{2u})`.
pub fn jacobian(inst: &ProblemInstance<'_>, u: &VertexFunction) -> Result<Matrix> {
    check_len(inst.n(), u.len())?;
    Ok(inst.jacobian_matrix(u.values()))
}

/// `J_λ(u) = ½∫|∇^s u|² - ½∫h_λ e^{2u} + c∫u`.
///
/// Its gradient with respect to `u(x_i)` is `mu(x_i) F(u)(x_i)`.
pub fn energy(inst: &ProblemInstance<'_>, u: &VertexFunction) -> Result<f64> {
    check_len(inst.n(), u.len())?;
    Ok(inst.energy_slice(u.values()))
}

/// `h̃_λ`: `2|V| / min mu` where `h_λ > 0`, `-1` elsewhere.
pub fn homotopy_target(inst: &ProblemInstance<'_>) -> VertexFunction {
    let high = 2.0 * inst.graph.volume() / inst.graph.min_measure();
    let hl = inst.h.values().iter().map(|v| v + inst.lambda);
    VertexFunction::new(hl.map(|v| if v > 0.0 { high } else { -1.0 }).collect())
}

/// `h_{λ,t} = (1 - t) h_λ + t h̃_λ`.
pub fn homotopy_coefficient(inst: &ProblemInstance<'_>, t: f64) -> Vec<f64> {
    let target = homotopy_target(inst);
    inst.h
        .values()
        .iter()
        .zip(target.values())
        .map(|(h, ht)| (1.0 - t) * (h + inst.lambda) + t * ht)
        .collect()
}

/// `∫ h̃_λ dmu`; positive exactly when `h_λ > 0` somewhere.
pub fn homotopy_target_integral(inst: &ProblemInstance<'_>) -> f64 {
    integrate(&homotopy_target(inst), inst.graph).expect("target lives on the instance graph")
}
