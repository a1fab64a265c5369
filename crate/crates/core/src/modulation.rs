//! Amplitude, phase and frequency modulation read off the analytic signal.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::analytic::analytic_signal;
use crate::error::{Error, Result};
use crate::spectral::{AdjacencyMatrix, GraphSignal, SpectralDecomposition};

/// Spectral radius deviation from one above which `demodulate` warns.
pub const RADIUS_WARN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ModulationProfile {
    /// `|x_a|`.
    pub am: DVector<f64>,
    /// `arg(x_a)` in `(-π, π]`, zero where `am` is zero.
    pub pm: DVector<f64>,
    pub unwrapped: DVector<f64>,
    /// `φᵘ - A φᵘ`.
    pub fm: DVector<f64>,
    /// Nodes whose row of `A` is empty, so `fm` there is just `φᵘ`.
    pub empty_rows: Vec<usize>,
}

impl ModulationProfile {
    pub fn len(&self) -> usize {
        self.am.len()
    }

    pub fn is_empty(&self) -> bool {
        self.am.is_empty()
    }
}

/// Four-quadrant angle mapped into `(-π, π]`, with `arg(0) = 0`.
fn wrapped_arg(re: f64, im: f64) -> f64 {
    if re == 0.0 && im == 0.0 {
        return 0.0;
    }
    let t = im.atan2(re);
    if t <= -PI {
        PI
    } else {
        t
    }
}

pub fn demodulate(
    a: &AdjacencyMatrix,
    d: &SpectralDecomposition,
    x: &GraphSignal,
) -> Result<ModulationProfile> {
    if a.n() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: a.n(),
        });
    }
    if (d.spectral_radius() - 1.0).abs() > RADIUS_WARN_TOLERANCE {
        log::warn!(
            "spectral radius is {:.9}, not 1; frequency modulation scale is not normalized",
            d.spectral_radius()
        );
    }
    let xa = analytic_signal(d, x)?;
    let am = xa.values().map(|z| z.norm());
    let pm = xa.values().map(|z| wrapped_arg(z.re, z.im));
    let unwrapped = DVector::from_vec(unwrap_phase(pm.as_slice()));
    let fm = &unwrapped - a.shift(&unwrapped);
    let empty_rows: Vec<usize> = (0..a.n())
        .filter(|&i| a.matrix().row(i).iter().all(|&w| w == 0.0))
        .collect();
    if !empty_rows.is_empty() {
        log::warn!(
            "{} node(s) have no neighbours under the shift; their frequency equals the unwrapped phase",
            empty_rows.len()
        );
    }
    Ok(ModulationProfile {
        am,
        pm,
        unwrapped,
        fm,
        empty_rows,
    })
}

/// One-dimensional unwrapping in index order: every successive difference
/// of the output lies in `(-π, π]` and differs from the input by a
/// multiple of `2π`.
pub fn unwrap_phase(pm: &[f64]) -> Vec<f64> {
    let tau = 2.0 * PI;
    let mut out = Vec::with_capacity(pm.len());
    let mut turns = 0.0;
    for (k, &p) in pm.iter().enumerate() {
        if k > 0 {
            let diff = p - pm[k - 1];
            let mut m = (-diff / tau).round();
            let w = diff + tau * m;
            if w <= -PI {
                m += 1.0;
            } else if w > PI {
                m -= 1.0;
            }
            turns += m;
        }
        out.push(p + tau * turns);
    }
    out
}

/// `|GFT(am)|` followed by `|GFT(fm)|`.
pub fn demod_features(profile: &ModulationProfile, d: &SpectralDecomposition) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * d.n());
    for v in [&profile.am, &profile.fm] {
        let s = d.gft(&GraphSignal::from_vector(v.clone())?)?;
        out.extend(s.coefficients().iter().map(|z| z.norm()));
    }
    Ok(out)
}
