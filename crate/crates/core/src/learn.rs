//! Adjacency learning from signal exemplars.
//!
//! Solves
//!
//! ```text
//! min ‖X − A X‖_F² + ρ‖A‖_F²   s.t.   diag(A) = 0,  A 1 = 1,  Aᵀ 1 = 1
//! ```
//!
//! The objective separates over rows of `A`. Row `i` only has the `n − 1`
//! off-diagonal unknowns `a_i`, with Hessian block `P_i = G_{−i,−i} + ρI`
//! (`G = X Xᵀ`) and linear term `g_i = G_{−i,i}`. Stationarity gives
//! `a_i = P_i⁻¹ (g_i − μ_i 1 − ν_{−i})`, and substituting into the sum
//! constraints leaves a symmetric `(2n − 1)`-square system in the
//! multipliers after fixing the redundant `ν_{n−1} = 0`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::spectral::AdjacencyMatrix;

/// Relative KKT residual above which the solve is declared singular.
pub const KKT_TOLERANCE: f64 = 1e-8;

/// Pivot ratio below which a Cholesky factor is treated as singular.
const PIVOT_FLOOR: f64 = 1e-13;

/// Columns are graph signals; rows are nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalMatrix(DMatrix<f64>);

impl SignalMatrix {
    pub fn new(x: DMatrix<f64>) -> Result<Self> {
        if x.ncols() == 0 || x.nrows() == 0 {
            return Err(Error::InvalidParameter(
                "signal matrix needs at least one node and one exemplar".into(),
            ));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "signal matrix".into(),
            });
        }
        Ok(Self(x))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn m(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

#[derive(Debug, Clone)]
pub struct LearnedAdjacency {
    pub adjacency: AdjacencyMatrix,
    /// Stationarity residual relative to the scale of `G`.
    pub kkt_residual: f64,
    /// Largest absolute violation of the diagonal and sum constraints.
    pub constraint_residual: f64,
}

pub fn learn_adjacency(x: &SignalMatrix, ridge: f64) -> Result<AdjacencyMatrix> {
    learn_adjacency_report(x, ridge).map(|r| r.adjacency)
}

fn checked_cholesky(p: DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    let chol = Cholesky::new(p).ok_or(Error::SingularSystem)?;
    let diag = chol.l_dirty().diagonal();
    let (lo, hi) = (diag.min(), diag.max());
    if lo <= 0.0 || (lo / hi).powi(2) < PIVOT_FLOOR {
        return Err(Error::SingularSystem);
    }
    Ok(chol)
}

pub fn learn_adjacency_report(x: &SignalMatrix, ridge: f64) -> Result<LearnedAdjacency> {
    let n = x.n();
    if n < 2 {
        return Err(Error::InfeasibleDimensions { n });
    }
    if ridge < 0.0 || !ridge.is_finite() {
        return Err(Error::InvalidParameter(format!("ridge must be a finite value ≥ 0, got {ridge}")));
    }
    if n == 2 {
        // the constraints alone pin A down
        let adjacency = AdjacencyMatrix::from_row_slice(2, &[0.0, 1.0, 1.0, 0.0])?;
        return Ok(LearnedAdjacency {
            adjacency,
            kkt_residual: 0.0,
            constraint_residual: 0.0,
        });
    }

    let g = x.matrix() * x.matrix().transpose();
    // per-row inverse Hessians and unconstrained minimizers, embedded in
    // n-space with a zero row/column at the diagonal position
    let mut inv = Vec::with_capacity(n);
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut p = g.clone().remove_row(i).remove_column(i);
        for k in 0..n - 1 {
            p[(k, k)] += ridge;
        }
        let chol = checked_cholesky(p)?;
        let gi = g.column(i).clone_owned().remove_row(i);
        let wi = chol.solve(&gi).insert_row(i, 0.0);
        w.set_row(i, &wi.transpose());
        inv.push(chol.inverse().insert_row(i, 0.0).insert_column(i, 0.0));
    }

    // S [μ; ν] = rhs, with ν_{n-1} and the last column constraint dropped
    let dim = 2 * n - 1;
    let mut s = DMatrix::zeros(dim, dim);
    let mut rhs = DVector::zeros(dim);
    let mut msum = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let r = inv[i].column_sum();
        s[(i, i)] = r.sum();
        for j in 0..n - 1 {
            s[(i, n + j)] = r[j];
            s[(n + j, i)] = r[j];
        }
        msum += &inv[i];
        rhs[i] = w.row(i).sum() - 1.0;
    }
    let colsum = w.row_sum();
    for j in 0..n - 1 {
        for k in 0..n - 1 {
            s[(n + j, n + k)] = msum[(j, k)];
        }
        rhs[n + j] = colsum[j] - 1.0;
    }
    let schur = checked_cholesky(s.clone())?;

    let assemble = |mult: &DVector<f64>| {
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            let mut shift = DVector::from_fn(n, |j, _| if j < n - 1 { mult[n + j] } else { 0.0 });
            shift.add_scalar_mut(mult[i]);
            let ai = w.row(i).transpose() - &inv[i] * shift;
            a.set_row(i, &ai.transpose());
        }
        a
    };
    let mut mult = schur.solve(&rhs);
    // one round of refinement on the multipliers tightens the constraints
    let residual = &rhs - &s * &mult;
    mult += schur.solve(&residual);
    let mut a = assemble(&mult);
    for i in 0..n {
        a[(i, i)] = 0.0;
    }

    let constraint_residual = constraint_violation(&a);
    let kkt_residual = stationarity_residual(&a, &g, ridge, &mult);
    log::debug!(
        "adjacency learner: n {n}, kkt residual {kkt_residual:.3e}, constraint residual {constraint_residual:.3e}"
    );
    if kkt_residual > KKT_TOLERANCE {
        return Err(Error::SingularSystem);
    }
    Ok(LearnedAdjacency {
        adjacency: AdjacencyMatrix::new(a)?,
        kkt_residual,
        constraint_residual,
    })
}

/// `max(|diag(A)|, |A1 − 1|, |Aᵀ1 − 1|)`.
pub fn constraint_violation(a: &DMatrix<f64>) -> f64 {
    let diag = a.diagonal().amax();
    let rows = a.column_sum().add_scalar(-1.0).amax();
    let cols = a.row_sum().add_scalar(-1.0).amax();
    diag.max(rows).max(cols)
}

fn stationarity_residual(a: &DMatrix<f64>, g: &DMatrix<f64>, ridge: f64, mult: &DVector<f64>) -> f64 {
    let n = a.nrows();
    let nu = |j: usize| if j < n - 1 { mult[n + j] } else { 0.0 };
    // (A (G + ρI) − G)_{ij} + μ_i + ν_j must vanish off the diagonal
    let grad = a * g + a * ridge - g;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max((grad[(i, j)] + mult[i] + nu(j)).abs());
            }
        }
    }
    worst / g.amax().max(ridge).max(f64::MIN_POSITIVE)
}

/// `‖X − AX‖_F² + ρ‖A‖_F²`.
pub fn objective(x: &SignalMatrix, a: &DMatrix<f64>, ridge: f64) -> f64 {
    (x.matrix() - a * x.matrix()).norm_squared() + ridge * a.norm_squared()
}
