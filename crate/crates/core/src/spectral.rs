//! Adjacency matrices, graph signals and the graph Fourier transform.
//!
//! The eigenbasis is ordered by ascending phase angle of the eigenvalues
//! in `[0, 2π)`, ties broken by descending magnitude and then by solver
//! order. This splits the indices into four contiguous blocks:
//!
//! | set      | eigenvalues                 |
//! |----------|-----------------------------|
//! | `gamma1` | real, `λ ≥ 0`               |
//! | `gamma2` | phase in `(0, π)`           |
//! | `gamma3` | real, `λ < 0`               |
//! | `gamma4` | phase in `(π, 2π)`          |
//!
//! Every `gamma4` column is built as the exact conjugate of its `gamma2`
//! partner, so the GFT of a real signal is conjugate symmetric up to the
//! error of a single linear solve.
//!
//! Indices are zero-based throughout.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::eigen::{self, C64};
use crate::error::{Error, Result};

/// Real `n x n` adjacency (graph shift) matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix(DMatrix<f64>);

impl AdjacencyMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NonSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::TooSmall { n: 0, min: 1 });
        }
        if let Some(pos) = m.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!(
                    "adjacency entry ({}, {})",
                    pos % m.nrows(),
                    pos / m.nrows()
                ),
            });
        }
        Ok(Self(m))
    }

    pub fn from_row_slice(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// One graph shift, `A x`.
    pub fn shift(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.0 * x
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(eigen::eigenvalues(&self.0)?
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max))
    }

    /// Relabel nodes: node `i` of the result is node `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n())?;
        let n = self.n();
        Ok(Self(DMatrix::from_fn(n, n, |i, j| {
            self.0[(perm[i], perm[j])]
        })))
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidParameter(format!(
                "not a permutation of 0..{n}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Scale `a` so its largest eigenvalue magnitude is one.
pub fn normalize_spectral_radius(a: &AdjacencyMatrix) -> Result<AdjacencyMatrix> {
    let radius = a.spectral_radius()?;
    if radius < 1e-12 {
        return Err(Error::NilpotentMatrix { radius });
    }
    Ok(AdjacencyMatrix(a.matrix() / radius))
}

/// Real signal, one finite value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSignal(DVector<f64>);

impl GraphSignal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(values))
    }

    pub fn from_vector(values: DVector<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("signal entry {i}"),
            });
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DVector::zeros(n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.len())?;
        Ok(Self(DVector::from_fn(self.len(), |i, _| self.0[perm[i]])))
    }
}

/// GFT coefficients `x̂ = V⁻¹ x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumVector(DVector<C64>);

impl SpectrumVector {
    pub fn new(coefficients: DVector<C64>) -> Self {
        Self(coefficients)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficients(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<C64> {
        self.0
    }
}

/// Which block of the partition an eigen-index belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    PositiveReal,
    Upper,
    NegativeReal,
    Lower,
}

#[derive(Debug, Clone, Copy)]
pub struct DecomposeOptions {
    /// `λ` counts as real iff `|Im λ| ≤ real_tolerance · max(1, |λ|)`.
    pub real_tolerance: f64,
    /// Largest accepted condition estimate of the eigenbasis.
    pub condition_cap: f64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            real_tolerance: 1e-9,
            condition_cap: 1e12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    basis: DMatrix<C64>,
    eigenvalues: DVector<C64>,
    lu: LU<C64, Dyn, Dyn>,
    bands: Vec<Band>,
    partner: Vec<Option<usize>>,
    gamma1: Vec<usize>,
    gamma2: Vec<usize>,
    gamma3: Vec<usize>,
    gamma4: Vec<usize>,
    condition_estimate: f64,
}

struct Entry {
    value: C64,
    vector: DVector<C64>,
    phase: f64,
    solver_index: usize,
}

/// Eigen-decompose `a` with the default options.
pub fn decompose(a: &AdjacencyMatrix) -> Result<SpectralDecomposition> {
    decompose_with(a, &DecomposeOptions::default())
}

pub fn decompose_with(
    a: &AdjacencyMatrix,
    opts: &DecomposeOptions,
) -> Result<SpectralDecomposition> {
    if opts.real_tolerance.is_nan() || opts.real_tolerance < 0.0 {
        return Err(Error::InvalidParameter(
            "real_tolerance must be nonnegative".into(),
        ));
    }
    let n = a.n();
    let raw = eigen::eigen(a.matrix())?;

    let mut positive = Vec::new();
    let mut negative = Vec::new();
    let mut upper = Vec::new();
    let mut lower_count = 0usize;

    for (idx, &lam) in raw.values.iter().enumerate() {
        let mut vector = raw.vectors.column(idx).into_owned();
        let is_real = lam.im.abs() <= opts.real_tolerance * lam.norm().max(1.0);
        if is_real {
            fix_phase(&mut vector);
            let value = C64::new(lam.re, 0.0);
            let entry = Entry {
                value,
                vector,
                phase: if lam.re >= 0.0 { 0.0 } else { PI },
                solver_index: idx,
            };
            if lam.re >= 0.0 {
                positive.push(entry);
            } else {
                negative.push(entry);
            }
        } else if lam.im > 0.0 {
            fix_phase(&mut vector);
            upper.push(Entry {
                value: lam,
                vector,
                phase: lam.im.atan2(lam.re),
                solver_index: idx,
            });
        } else {
            lower_count += 1;
        }
    }
    if upper.len() != lower_count {
        return Err(Error::UnpairedEigenvalues {
            upper: upper.len(),
            lower: lower_count,
        });
    }

    let by_magnitude = |x: &Entry, y: &Entry| {
        y.value
            .norm()
            .total_cmp(&x.value.norm())
            .then(x.solver_index.cmp(&y.solver_index))
    };
    positive.sort_by(by_magnitude);
    negative.sort_by(by_magnitude);
    upper.sort_by(|x, y| x.phase.total_cmp(&y.phase).then(by_magnitude(x, y)));

    // Conjugates sorted by phase 2π − φ ascending, i.e. φ descending.
    let mut lower_order: Vec<usize> = (0..upper.len()).collect();
    lower_order.sort_by(|&i, &j| {
        let (x, y) = (&upper[i], &upper[j]);
        y.phase.total_cmp(&x.phase).then(by_magnitude(x, y))
    });

    let k1 = positive.len();
    let p = upper.len();
    let k2 = negative.len();
    debug_assert_eq!(k1 + 2 * p + k2, n);

    let mut basis = DMatrix::<C64>::zeros(n, n);
    let mut eigenvalues = DVector::<C64>::zeros(n);
    let mut bands = Vec::with_capacity(n);
    let mut partner = vec![None; n];

    let mut col = 0;
    for e in &positive {
        basis.set_column(col, &e.vector);
        eigenvalues[col] = e.value;
        bands.push(Band::PositiveReal);
        col += 1;
    }
    for e in &upper {
        basis.set_column(col, &e.vector);
        eigenvalues[col] = e.value;
        bands.push(Band::Upper);
        col += 1;
    }
    for e in &negative {
        basis.set_column(col, &e.vector);
        eigenvalues[col] = e.value;
        bands.push(Band::NegativeReal);
        col += 1;
    }
    for &u in &lower_order {
        let e = &upper[u];
        basis.set_column(col, &e.vector.map(|z| z.conj()));
        eigenvalues[col] = e.value.conj();
        bands.push(Band::Lower);
        let upper_col = k1 + u;
        partner[upper_col] = Some(col);
        partner[col] = Some(upper_col);
        col += 1;
    }

    let gamma1: Vec<usize> = (0..k1).collect();
    let gamma2: Vec<usize> = (k1..k1 + p).collect();
    let gamma3: Vec<usize> = (k1 + p..k1 + p + k2).collect();
    let gamma4: Vec<usize> = (k1 + p + k2..n).collect();

    let lu = basis.clone().lu();
    let condition_estimate = condition_estimate(&basis, &lu);
    if condition_estimate.is_nan() || condition_estimate > opts.condition_cap {
        return Err(Error::DefectiveMatrix {
            estimate: condition_estimate,
            cap: opts.condition_cap,
        });
    }

    Ok(SpectralDecomposition {
        basis,
        eigenvalues,
        lu,
        bands,
        partner,
        gamma1,
        gamma2,
        gamma3,
        gamma4,
        condition_estimate,
    })
}

/// Unit 2-norm, with the first entry of (near-)maximal modulus rotated
/// onto the positive real axis.
fn fix_phase(v: &mut DVector<C64>) {
    let norm = v.norm();
    if norm == 0.0 {
        return;
    }
    *v /= C64::new(norm, 0.0);
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-9))
        .expect("nonzero vector has a maximal entry");
    let z = v[pivot];
    let rot = z.conj() / z.norm();
    v.apply(|x| *x *= rot);
    v[pivot] = C64::new(v[pivot].norm(), 0.0);
}

/// Power-iteration estimate of `σ_max(V) / σ_min(V)`.
fn condition_estimate(v: &DMatrix<C64>, lu: &LU<C64, Dyn, Dyn>) -> f64 {
    let n = v.nrows();
    if n == 0 {
        return 1.0;
    }
    let start = DVector::from_fn(n, |i, _| {
        let t = i as f64 + 1.0;
        C64::new(1.0 + 0.5 * (0.7 * t).sin(), 0.3 * (1.3 * t).cos())
    });

    let vh = v.adjoint();
    let mut z = start.normalize();
    let mut sigma_max: f64 = 0.0;
    for _ in 0..30 {
        let y = v * &z;
        sigma_max = sigma_max.max(y.norm());
        let w = &vh * y;
        let nw = w.norm();
        if nw == 0.0 {
            break;
        }
        z = w / C64::new(nw, 0.0);
    }

    let lu_h = vh.lu();
    let mut z = start.normalize();
    let mut inv_norm: f64 = 0.0;
    for _ in 0..30 {
        let Some(y) = lu.solve(&z) else {
            return f64::INFINITY;
        };
        inv_norm = inv_norm.max(y.norm());
        let Some(w) = lu_h.solve(&y) else {
            return f64::INFINITY;
        };
        let nw = w.norm();
        if !nw.is_finite() {
            return f64::INFINITY;
        }
        if nw == 0.0 {
            break;
        }
        z = w / C64::new(nw, 0.0);
    }
    let cond = sigma_max * inv_norm;
    if cond.is_finite() {
        cond
    } else {
        f64::INFINITY
    }
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Columns `v_i`, unit 2-norm.
    pub fn basis(&self) -> &DMatrix<C64> {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &DVector<C64> {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, i: usize) -> DVector<C64> {
        self.basis.column(i).into_owned()
    }

    pub fn band(&self, i: usize) -> Band {
        self.bands[i]
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    /// Conjugate partner of an index in `gamma2` or `gamma4`.
    pub fn partner(&self, i: usize) -> Option<usize> {
        self.partner.get(i).copied().flatten()
    }

    /// `(i, i')` for every `i` in `gamma2`.
    pub fn pairing(&self) -> Vec<(usize, usize)> {
        self.gamma2
            .iter()
            .map(|&i| (i, self.partner[i].expect("gamma2 index is paired")))
            .collect()
    }

    pub fn gamma1(&self) -> &[usize] {
        &self.gamma1
    }

    pub fn gamma2(&self) -> &[usize] {
        &self.gamma2
    }

    pub fn gamma3(&self) -> &[usize] {
        &self.gamma3
    }

    pub fn gamma4(&self) -> &[usize] {
        &self.gamma4
    }

    /// Number of nonnegative real eigenvalues.
    pub fn k1(&self) -> usize {
        self.gamma1.len()
    }

    /// Number of negative real eigenvalues.
    pub fn k2(&self) -> usize {
        self.gamma3.len()
    }

    /// Number of real eigenvalues.
    pub fn k(&self) -> usize {
        self.k1() + self.k2()
    }

    /// `(n + k) / 2`: coefficients needed to represent a real signal.
    pub fn theta(&self) -> usize {
        (self.n() + self.k()) / 2
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `x̂ = V⁻¹ x`, by solving against the stored LU factors.
    pub fn gft(&self, x: &GraphSignal) -> Result<SpectrumVector> {
        self.check_len(x.len())?;
        let xc = x.values().map(|v| C64::new(v, 0.0));
        self.solve(&xc).map(SpectrumVector)
    }

    /// GFT of an arbitrary complex vector.
    pub fn gft_complex(&self, x: &DVector<C64>) -> Result<SpectrumVector> {
        self.check_len(x.len())?;
        self.solve(x).map(SpectrumVector)
    }

    /// `V s`.
    pub fn igft(&self, s: &SpectrumVector) -> Result<DVector<C64>> {
        self.check_len(s.len())?;
        Ok(&self.basis * s.coefficients())
    }

    fn solve(&self, b: &DVector<C64>) -> Result<DVector<C64>> {
        self.lu.solve(b).ok_or(Error::DefectiveMatrix {
            estimate: f64::INFINITY,
            cap: f64::INFINITY,
        })
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: len,
            });
        }
        Ok(())
    }
}

/// Graph smoothness `‖x − A x‖² / ‖x‖²`.
pub fn smoothness(a: &AdjacencyMatrix, x: &GraphSignal) -> Result<f64> {
    if x.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: x.len(),
        });
    }
    let energy = x.values().norm_squared();
    if energy == 0.0 {
        return Err(Error::ZeroSignal);
    }
    Ok((x.values() - a.shift(x.values())).norm_squared() / energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cycle, gaussian_random, SeededRng};

    fn relative_residual(a: &AdjacencyMatrix, d: &SpectralDecomposition) -> f64 {
        let ac = a.matrix().map(|v| C64::new(v, 0.0));
        let lam = DMatrix::from_diagonal(d.eigenvalues());
        (&ac * d.basis() - d.basis() * lam).norm() / a.matrix().norm()
    }

    #[test]
    fn cycle_of_four() {
        let d = decompose(&cycle(4).unwrap()).unwrap();
        let expect = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ];
        for (got, want) in d.eigenvalues().iter().zip(expect) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
        assert_eq!(d.gamma1(), &[0]);
        assert_eq!(d.gamma2(), &[1]);
        assert_eq!(d.gamma3(), &[2]);
        assert_eq!(d.gamma4(), &[3]);
        assert_eq!(d.theta(), 3);
        assert_eq!(d.pairing(), vec![(1, 3)]);
    }

    #[test]
    fn scaled_identity_is_all_positive_real() {
        let a = AdjacencyMatrix::new(DMatrix::identity(3, 3) * 0.5).unwrap();
        let d = decompose(&a).unwrap();
        assert_eq!(d.gamma1().len(), 3);
        assert!(d.gamma2().is_empty() && d.gamma4().is_empty());
        assert_eq!(d.k(), 3);
        assert_eq!(d.theta(), 3);
    }

    #[test]
    fn zero_eigenvalue_goes_to_gamma1_last() {
        let a = AdjacencyMatrix::from_row_slice(3, &[2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0])
            .unwrap();
        let d = decompose(&a).unwrap();
        assert_eq!(d.gamma1(), &[0, 1]);
        assert_eq!(d.eigenvalues()[0].re, 2.0);
        assert_eq!(d.eigenvalues()[1].re, 0.0);
        assert_eq!(d.gamma3(), &[2]);
    }

    #[test]
    fn pairs_are_bitwise_conjugate_and_ordered() {
        let mut rng = SeededRng::new(3);
        let a = gaussian_random(40, &mut rng).unwrap();
        let d = decompose(&a).unwrap();
        assert!(relative_residual(&a, &d) < 1e-10);
        for (i, ip) in d.pairing() {
            assert_eq!(d.eigenvalues()[ip], d.eigenvalues()[i].conj());
            for r in 0..d.n() {
                assert_eq!(d.basis()[(r, ip)], d.basis()[(r, i)].conj());
            }
        }
        let phase = |z: C64| {
            let p = z.im.atan2(z.re);
            if z.im == 0.0 && z.re >= 0.0 {
                0.0
            } else if p < 0.0 {
                p + 2.0 * PI
            } else {
                p
            }
        };
        let ev = d.eigenvalues();
        for i in 1..d.n() {
            let (p0, p1) = (phase(ev[i - 1]), phase(ev[i]));
            assert!(p0 <= p1 + 1e-12, "phase order at {i}");
            if p0 == p1 {
                assert!(ev[i - 1].norm() >= ev[i].norm());
            }
        }
        for i in 0..d.n() {
            assert!((d.basis().column(i).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn defective_matrix_is_rejected() {
        let a = AdjacencyMatrix::from_row_slice(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(decompose(&a), Err(Error::DefectiveMatrix { .. })));
        // nilpotent shift: a single 3x3 Jordan block at zero
        let a = AdjacencyMatrix::from_row_slice(
            3,
            &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        )
        .unwrap();
        assert!(matches!(decompose(&a), Err(Error::DefectiveMatrix { .. })));
    }

    #[test]
    fn condition_estimate_tracks_svd() {
        let mut rng = SeededRng::new(11);
        for n in [5, 12, 30] {
            let a = gaussian_random(n, &mut rng).unwrap();
            let d = decompose(&a).unwrap();
            let sv = d.basis().clone().singular_values();
            let exact = sv.max() / sv.min();
            let est = d.condition_estimate();
            assert!(est <= exact * (1.0 + 1e-9) && est >= 0.5 * exact, "{est} vs {exact}");
        }
        let d = decompose(&cycle(16).unwrap()).unwrap();
        assert!((d.condition_estimate() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            AdjacencyMatrix::new(DMatrix::zeros(2, 3)),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        ));
        assert!(matches!(
            AdjacencyMatrix::from_row_slice(2, &[0.0, f64::NAN, 1.0, 0.0]),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            GraphSignal::new(vec![1.0, f64::INFINITY]),
            Err(Error::NonFinite { .. })
        ));
        let d = decompose(&cycle(4).unwrap()).unwrap();
        let x = GraphSignal::new(vec![1.0; 5]).unwrap();
        assert!(matches!(
            d.gft(&x),
            Err(Error::DimensionMismatch { expected: 4, found: 5 })
        ));
    }

    #[test]
    fn constant_signal_on_cycle_is_dc() {
        let d = decompose(&cycle(10).unwrap()).unwrap();
        let s = d.gft(&GraphSignal::new(vec![1.0; 10]).unwrap()).unwrap();
        let c = s.coefficients();
        assert!(c[0].norm() > 1.0);
        for i in 1..10 {
            assert!(c[i].norm() < 1e-12);
        }
    }

    #[test]
    fn real_combination_of_pair_stays_on_pair() {
        let mut rng = SeededRng::new(5);
        let a = gaussian_random(12, &mut rng).unwrap();
        let d = decompose(&a).unwrap();
        let (i, ip) = d.pairing()[1];
        let v = d.eigenvector(i);
        let x = GraphSignal::from_vector(v.map(|z| z.re + z.im)).unwrap();
        let s = d.gft(&x).unwrap();
        let scale = s.coefficients().norm();
        for k in 0..d.n() {
            if k != i && k != ip {
                assert!(s.coefficients()[k].norm() < 1e-10 * scale);
            }
        }
        assert!(s.coefficients()[i].norm() > 0.1 * scale);
    }

    #[test]
    fn cycle_gft_matches_dft() {
        // brute-force DFT oracle, X(k) = Σ x(n) e^{-j2πkn/N}
        let n = 8;
        let x: Vec<f64> = (0..n).map(|i| ((i * 7 + 3) % 11) as f64 - 4.5).collect();
        let dft = |k: usize| -> C64 {
            (0..n)
                .map(|m| C64::from_polar(x[m], -2.0 * PI * (k * m) as f64 / n as f64))
                .sum()
        };
        let d = decompose(&cycle(n).unwrap()).unwrap();
        let s = d.gft(&GraphSignal::new(x.clone()).unwrap()).unwrap();
        for i in 0..n {
            let lam = d.eigenvalues()[i];
            let mut w = lam.im.atan2(lam.re);
            if w < -1e-12 {
                w += 2.0 * PI;
            }
            let k = (w * n as f64 / (2.0 * PI)).round() as usize % n;
            // v_i = v_i(0) · e^{jω_k m}, so x̂_i · v_i(0) · N = X(k)
            let scaled = s.coefficients()[i] * d.basis()[(0, i)] * n as f64;
            assert!((scaled - dft(k)).norm() < 1e-10, "bin {k}");
        }
    }

    #[test]
    fn igft_of_indicator_is_column() {
        let mut rng = SeededRng::new(8);
        let a = gaussian_random(9, &mut rng).unwrap();
        let d = decompose(&a).unwrap();
        for i in [0, 4, 8] {
            let mut e = DVector::zeros(9);
            e[i] = C64::new(1.0, 0.0);
            let col = d.igft(&SpectrumVector::new(e)).unwrap();
            assert_eq!(col, d.eigenvector(i));
        }
    }

    #[test]
    fn one_sided_spectrum_symmetrizes() {
        // 2·Re(V s) for s supported on gamma2 equals V (s + conj-mirror(s))
        let mut rng = SeededRng::new(21);
        let a = gaussian_random(10, &mut rng).unwrap();
        let d = decompose(&a).unwrap();
        let mut s = DVector::zeros(10);
        for (t, &i) in d.gamma2().iter().enumerate() {
            s[i] = C64::new(1.0 + t as f64, 0.5 - t as f64);
        }
        let mut sym = s.clone();
        for (i, ip) in d.pairing() {
            sym[ip] = s[i].conj();
        }
        let half = d.igft(&SpectrumVector::new(s)).unwrap();
        let full = d.igft(&SpectrumVector::new(sym)).unwrap();
        for r in 0..10 {
            assert!((2.0 * half[r].re - full[r].re).abs() < 1e-12);
            assert!(full[r].im.abs() < 1e-12);
        }
    }

    #[test]
    fn smoothness_cases() {
        let c = cycle(6).unwrap();
        let alt = GraphSignal::new((0..6).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect())
            .unwrap();
        assert!((smoothness(&c, &alt).unwrap() - 4.0).abs() < 1e-15);
        let ones = GraphSignal::new(vec![1.0; 6]).unwrap();
        assert_eq!(smoothness(&c, &ones).unwrap(), 0.0);
        let diag = AdjacencyMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![
            0.25, 2.0, -1.0,
        ])))
        .unwrap();
        let e2 = GraphSignal::new(vec![0.0, 0.0, 3.0]).unwrap();
        assert!((smoothness(&diag, &e2).unwrap() - 4.0).abs() < 1e-15);
        let e0 = GraphSignal::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!((smoothness(&diag, &e0).unwrap() - 0.5625).abs() < 1e-15);
        assert!(matches!(
            smoothness(&c, &GraphSignal::zeros(6)),
            Err(Error::ZeroSignal)
        ));
    }

    #[test]
    fn spectral_radius_normalization() {
        let c = cycle(7).unwrap();
        let c2 = AdjacencyMatrix::new(c.matrix() * 2.0).unwrap();
        let back = normalize_spectral_radius(&c2).unwrap();
        assert!((back.matrix() - c.matrix()).norm() < 1e-12);
        let same = normalize_spectral_radius(&c).unwrap();
        assert!((same.matrix() - c.matrix()).norm() < 1e-12);

        let mut rng = SeededRng::new(50);
        let g = gaussian_random(50, &mut rng).unwrap();
        let gn = normalize_spectral_radius(&g).unwrap();
        assert!((gn.spectral_radius().unwrap() - 1.0).abs() < 1e-9);
        let (d0, d1) = (decompose(&g).unwrap(), decompose(&gn).unwrap());
        assert_eq!(d0.gamma1(), d1.gamma1());
        assert_eq!(d0.gamma2(), d1.gamma2());
        assert_eq!(d0.gamma3(), d1.gamma3());
        assert_eq!(d0.gamma4(), d1.gamma4());

        let nil = AdjacencyMatrix::from_row_slice(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            normalize_spectral_radius(&nil),
            Err(Error::NilpotentMatrix { .. })
        ));
    }
}
