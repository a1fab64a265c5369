//! Graph analytic signal and graph Hilbert transform.
//!
//! The transform is the spectral multiplier
//!
//! ```text
//! J_h(i) = -j   on gamma2
//!           0   on gamma1 ∪ gamma3
//!          +j   on gamma4
//! ```
//!
//! so `x_h = V J_h V⁻¹ x` and `x_a = x + j x_h`, whose GFT is `2x̂` on
//! `gamma2`, `x̂` on `gamma1 ∪ gamma3` and zero on `gamma4`.

use nalgebra::DVector;

use crate::eigen::C64;
use crate::error::{Error, Result};
use crate::spectral::{Band, GraphSignal, SpectralDecomposition, SpectrumVector};

/// Relative bound on the imaginary residue tolerated before a Hilbert
/// transform output is truncated to its real part.
pub const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1e-9;

/// Diagonal of `J_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMask(DVector<C64>);

impl SpectralMask {
    pub fn new(d: &SpectralDecomposition) -> Self {
        Self(DVector::from_iterator(
            d.n(),
            d.bands().iter().map(|band| match band {
                Band::Upper => C64::new(0.0, -1.0),
                Band::Lower => C64::new(0.0, 1.0),
                Band::PositiveReal | Band::NegativeReal => C64::new(0.0, 0.0),
            }),
        ))
    }

    pub fn diagonal(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn apply(&self, s: &SpectrumVector) -> SpectrumVector {
        SpectrumVector::new(s.coefficients().component_mul(&self.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSignal {
    values: DVector<C64>,
    hilbert: DVector<f64>,
    source: DVector<f64>,
    imaginary_residue: f64,
}

impl AnalyticSignal {
    /// `x_a = x + j x_h`.
    pub fn values(&self) -> &DVector<C64> {
        &self.values
    }

    pub fn hilbert(&self) -> &DVector<f64> {
        &self.hilbert
    }

    pub fn source(&self) -> &DVector<f64> {
        &self.source
    }

    /// `‖Im(V J_h V⁻¹ x)‖_∞` before truncation.
    pub fn imaginary_residue(&self) -> f64 {
        self.imaginary_residue
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `V J_h V⁻¹ x` for an arbitrary complex vector.
pub fn hilbert_operator(d: &SpectralDecomposition, x: &DVector<C64>) -> Result<DVector<C64>> {
    let spectrum = d.gft_complex(x)?;
    d.igft(&SpectralMask::new(d).apply(&spectrum))
}

/// `(I + j H) x` for an arbitrary complex vector.
pub fn analytic_operator(d: &SpectralDecomposition, x: &DVector<C64>) -> Result<DVector<C64>> {
    let h = hilbert_operator(d, x)?;
    Ok(x + h * C64::new(0.0, 1.0))
}

fn real_hilbert(d: &SpectralDecomposition, x: &GraphSignal) -> Result<(DVector<f64>, f64)> {
    let spectrum = d.gft(x)?;
    let full = d.igft(&SpectralMask::new(d).apply(&spectrum))?;
    let residue = full.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let bound = IMAGINARY_RESIDUE_TOLERANCE * x.values().norm();
    if residue > bound {
        return Err(Error::NonRealResult { residue, bound });
    }
    Ok((full.map(|z| z.re), residue))
}

/// Graph Hilbert transform of a real signal.
pub fn hilbert_transform(d: &SpectralDecomposition, x: &GraphSignal) -> Result<GraphSignal> {
    let (h, _) = real_hilbert(d, x)?;
    GraphSignal::from_vector(h)
}

pub fn analytic_signal(d: &SpectralDecomposition, x: &GraphSignal) -> Result<AnalyticSignal> {
    let (hilbert, imaginary_residue) = real_hilbert(d, x)?;
    let values = DVector::from_iterator(
        x.len(),
        x.values()
            .iter()
            .zip(hilbert.iter())
            .map(|(&re, &im)| C64::new(re, im)),
    );
    Ok(AnalyticSignal {
        values,
        hilbert,
        source: x.values().clone(),
        imaginary_residue,
    })
}

/// Smoothness `‖u − A u‖² / ‖u‖²` of `u = Re(v_i)`, using `A v_i = λ_i v_i`.
pub fn eigenvector_smoothness(d: &SpectralDecomposition, i: usize) -> Result<f64> {
    if i >= d.n() {
        return Err(Error::IndexOutOfPartition { index: i });
    }
    let v = d.eigenvector(i);
    let lam = d.eigenvalues()[i];
    let re = v.map(|z| z.re);
    let energy = re.norm_squared();
    if energy == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let shifted = v.map(|z| (z * lam).re);
    Ok((re - shifted).norm_squared() / energy)
}

/// Relative failure of the product rule
/// `H{Re(v_i)·Re(v_j)} = Re(v_i)·Im(v_j)` for a smooth index `i` and a
/// rougher index `j`, both in `gamma2`.
pub fn bedrosian_gap(d: &SpectralDecomposition, i: usize, j: usize) -> Result<f64> {
    for &k in &[i, j] {
        if k >= d.n() || d.band(k) != Band::Upper {
            return Err(Error::IndexOutOfPartition { index: k });
        }
    }
    let low_smoothness = eigenvector_smoothness(d, i)?;
    let high_smoothness = eigenvector_smoothness(d, j)?;
    if low_smoothness >= high_smoothness {
        return Err(Error::FrequencyOrder {
            low: i,
            high: j,
            low_smoothness,
            high_smoothness,
        });
    }
    let (vi, vj) = (d.eigenvector(i), d.eigenvector(j));
    let product = DVector::from_fn(d.n(), |k, _| vi[k].re * vj[k].re);
    let target = DVector::from_fn(d.n(), |k, _| vi[k].re * vj[k].im);
    let target_norm = target.norm();
    if target_norm == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let h = hilbert_transform(d, &GraphSignal::from_vector(product)?)?;
    Ok((h.values() - target).norm() / target_norm)
}
