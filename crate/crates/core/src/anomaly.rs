//! Node scoring by the magnitude of the graph Hilbert transform.

use crate::analytic::hilbert_transform;
use crate::error::{Error, Result};
use crate::spectral::{decompose, AdjacencyMatrix, GraphSignal, SpectralDecomposition};

pub const DEFAULT_THRESHOLD_SIGMA: f64 = 2.0;

/// Scores at or below this fraction of `‖x‖₂` are numerical noise and are
/// never flagged, whatever the spread.
pub const SCORE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyReport {
    /// `|x_h|` per node.
    pub scores: Vec<f64>,
    /// Nodes by descending score, ties broken by index.
    pub ranking: Vec<usize>,
    pub threshold: f64,
    /// The prefix of `ranking` scoring above `threshold`.
    pub flagged: Vec<usize>,
}

pub fn anomaly_scan(a: &AdjacencyMatrix, x: &GraphSignal, threshold_sigma: f64) -> Result<AnomalyReport> {
    if x.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: x.len(),
        });
    }
    anomaly_scan_with(&decompose(a)?, x, threshold_sigma)
}

pub fn anomaly_scan_with(
    d: &SpectralDecomposition,
    x: &GraphSignal,
    threshold_sigma: f64,
) -> Result<AnomalyReport> {
    if !threshold_sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "threshold sigma must be finite, got {threshold_sigma}"
        )));
    }
    let h = hilbert_transform(d, x)?;
    let scores: Vec<f64> = h.as_slice().iter().map(|v| v.abs()).collect();
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    let threshold = (mean + threshold_sigma * var.sqrt()).max(SCORE_FLOOR * x.values().norm());

    let mut ranking: Vec<usize> = (0..scores.len()).collect();
    ranking.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]).then(i.cmp(&j)));
    let flagged = ranking
        .iter()
        .copied()
        .take_while(|&i| scores[i] > threshold)
        .collect();
    Ok(AnomalyReport {
        scores,
        ranking,
        threshold,
        flagged,
    })
}
