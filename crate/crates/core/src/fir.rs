//! Polynomial (FIR) approximation of the graph Hilbert transform.
//!
//! A filter `h(A) = Σ_l h_l A^l` with real taps acts on the eigenvector
//! `v_i` as the scalar `h(λ_i)`. The design asks for `h(λ_i) = 0` on
//! `gamma1 ∪ gamma3`, `-j` on `gamma2` and `+j` on `gamma4`. For real taps
//! the `gamma4` equations are conjugates of the `gamma2` ones, so only the
//! real and imaginary parts of the `gamma2` rows are kept, each scaled by
//! `√2` so the real least-squares objective equals the complex one.

use nalgebra::{DMatrix, DVector};

use crate::eigen::C64;
use crate::error::{Error, Result};
use crate::spectral::{AdjacencyMatrix, Band, GraphSignal, SpectralDecomposition};

/// Largest accepted ratio of extreme singular values of the design matrix.
pub const DEFAULT_CONDITION_CAP: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct FirHilbertFilter {
    taps: Vec<f64>,
    design_residual: f64,
}

impl FirHilbertFilter {
    /// Wraps hand-chosen taps; `design_residual` is whatever the caller
    /// measured (zero when the taps are exact by construction).
    pub fn from_taps(taps: Vec<f64>, design_residual: f64) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidParameter("filter needs at least one tap".into()));
        }
        if taps.iter().any(|t| !t.is_finite()) || !design_residual.is_finite() || design_residual < 0.0 {
            return Err(Error::NonFinite {
                context: "filter taps".into(),
            });
        }
        Ok(Self {
            taps,
            design_residual,
        })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Polynomial degree `L`.
    pub fn order(&self) -> usize {
        self.taps.len() - 1
    }

    /// Complex 2-norm of the residual over all `n` design equations.
    pub fn design_residual(&self) -> f64 {
        self.design_residual
    }

    /// `h(λ)`.
    pub fn response(&self, lambda: C64) -> C64 {
        self.taps
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &h| acc * lambda + h)
    }
}

pub fn design_fir(d: &SpectralDecomposition, order: usize) -> Result<FirHilbertFilter> {
    design_fir_with(d, order, DEFAULT_CONDITION_CAP)
}

pub fn design_fir_with(
    d: &SpectralDecomposition,
    order: usize,
    condition_cap: f64,
) -> Result<FirHilbertFilter> {
    let n = d.n();
    if order == 0 || order > n {
        return Err(Error::InvalidParameter(format!(
            "filter order {order} must lie in 1..={n}"
        )));
    }
    let cols = order + 1;
    if d.gamma2().is_empty() {
        return FirHilbertFilter::from_taps(vec![0.0; cols], 0.0);
    }

    let rows = d.k() + 2 * d.gamma2().len();
    let mut m = DMatrix::zeros(rows, cols);
    let mut b = DVector::zeros(rows);
    let mut r = 0;
    for (i, band) in d.bands().iter().enumerate() {
        let lambda = d.eigenvalues()[i];
        match band {
            Band::PositiveReal | Band::NegativeReal => {
                let mut p = 1.0;
                for l in 0..cols {
                    m[(r, l)] = p;
                    p *= lambda.re;
                }
                r += 1;
            }
            Band::Upper => {
                let mut p = C64::new(std::f64::consts::SQRT_2, 0.0);
                for l in 0..cols {
                    m[(r, l)] = p.re;
                    m[(r + 1, l)] = p.im;
                    p *= lambda;
                }
                b[r + 1] = -std::f64::consts::SQRT_2;
                r += 2;
            }
            Band::Lower => {}
        }
    }
    debug_assert_eq!(r, rows);

    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::IllConditioned {
            condition: f64::INFINITY,
            cap: condition_cap,
        });
    }
    let svd = m.clone().svd(true, true);
    let sigma = &svd.singular_values;
    let (smax, smin) = (sigma.max(), sigma.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > condition_cap {
        return Err(Error::IllConditioned {
            condition,
            cap: condition_cap,
        });
    }
    // minimum-norm solution, which also covers the underdetermined L = n case
    let h = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let residual = (&m * &h - &b).norm();
    log::debug!("fir design: order {order}, condition {condition:.3e}, residual {residual:.3e}");
    FirHilbertFilter::from_taps(h.iter().copied().collect(), residual)
}

/// `Σ_l h_l A^l x`, evaluated by nested shifts.
pub fn apply_fir(a: &AdjacencyMatrix, f: &FirHilbertFilter, x: &GraphSignal) -> Result<GraphSignal> {
    if x.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: x.len(),
        });
    }
    let mut taps = f.taps().iter().rev();
    let mut y = x.values() * *taps.next().expect("filter has at least one tap");
    for &h in taps {
        y = a.shift(&y) + x.values() * h;
    }
    GraphSignal::from_vector(y)
}
