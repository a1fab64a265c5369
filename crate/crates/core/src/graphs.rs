//! Seedable graph constructors for the experiment families.
//!
//! Every random draw comes from [`SeededRng`], a ChaCha20 stream cipher
//! generator (`rand_chacha::ChaCha20Rng`) keyed by a 64-bit seed. Independent
//! draws for the same seed (graph vs. signal, one Monte Carlo trial vs. the
//! next) use distinct 64-bit stream ids of the same key, so they never
//! overlap and do not depend on how many numbers another stream consumed.
//!
//! Matrix entries are drawn in row-major order.

use nalgebra::DMatrix;
use rand::{seq::index, Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal, StandardNormal, Uniform};

use crate::error::{Error, Result};
use crate::spectral::{normalize_spectral_radius, AdjacencyMatrix, SpectralDecomposition};

/// Largest node count accepted by the community generators.
pub const MAX_COMMUNITY_NODES: usize = 4096;

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    rng: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Fresh generator on another stream of the same seed.
    pub fn derive(&self, stream: u64) -> Self {
        Self::with_stream(self.seed, stream)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn require_at_least(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::TooSmall { n, min });
    }
    Ok(())
}

/// Directed cycle: `A[i][(i + 1) mod n] = 1`, so `(A x)(i) = x(i + 1)`.
pub fn cycle(n: usize) -> Result<AdjacencyMatrix> {
    require_at_least(n, 2)?;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, (i + 1) % n)] = 1.0;
    }
    AdjacencyMatrix::new(m)
}

/// Cycle with edge weights `w_i = 1 + d_i`, `d_i ~ N(0, sigma²)`.
pub fn jittered_cycle(n: usize, sigma: f64, rng: &mut SeededRng) -> Result<AdjacencyMatrix> {
    require_at_least(n, 2)?;
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sigma must be finite and nonnegative, got {sigma}"
        )));
    }
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, (i + 1) % n)] = 1.0 + normal.sample(rng);
    }
    AdjacencyMatrix::new(m)
}

/// `cycle(rows) ⊗ cycle(cols)`; pixel `(i, j)` is node `i * cols + j`.
pub fn grid2d(rows: usize, cols: usize) -> Result<AdjacencyMatrix> {
    require_at_least(rows, 2)?;
    require_at_least(cols, 2)?;
    let r = cycle(rows)?;
    let c = cycle(cols)?;
    AdjacencyMatrix::new(r.matrix().kronecker(c.matrix()))
}

fn community_size(communities: usize, members: usize) -> Result<usize> {
    require_at_least(communities, 1)?;
    require_at_least(members, 1)?;
    let n = communities
        .checked_mul(members)
        .filter(|&n| n <= MAX_COMMUNITY_NODES)
        .ok_or(Error::SizeOverflow {
            n: communities.saturating_mul(members),
            max: MAX_COMMUNITY_NODES,
        })?;
    Ok(n)
}

/// Ordered `(from, to)` pairs joining different communities, enumerated
/// row by row; returns the `q`-th one.
fn cross_pair(q: usize, n: usize, members: usize) -> (usize, usize) {
    let per_row = n - members;
    let i = q / per_row;
    let r = q % per_row;
    let start = (i / members) * members;
    let j = if r < start { r } else { r + members };
    (i, j)
}

fn place_inter_edges<F>(
    m: &mut DMatrix<f64>,
    members: usize,
    count: usize,
    rng: &mut SeededRng,
    mut weight: F,
) -> Result<()>
where
    F: FnMut(&mut SeededRng) -> f64,
{
    let n = m.nrows();
    let pool = n * (n - members);
    if count > pool {
        return Err(Error::InvalidParameter(format!(
            "{count} inter-community edges requested but only {pool} ordered pairs exist"
        )));
    }
    for q in index::sample(rng, pool, count).into_vec() {
        let (i, j) = cross_pair(q, n, members);
        m[(i, j)] = weight(rng);
    }
    Ok(())
}

/// Weighted community graph, normalized to unit spectral radius.
///
/// Intra-community blocks are dense with `U[0, 1)` weights and a zero
/// diagonal. A fraction `inter_density` of the ordered node pairs that
/// join different communities receive a directed edge with `U[0, 0.5)`
/// weight.
pub fn weighted_community(
    communities: usize,
    members: usize,
    inter_density: f64,
    rng: &mut SeededRng,
) -> Result<AdjacencyMatrix> {
    let n = community_size(communities, members)?;
    if !(0.0..=1.0).contains(&inter_density) {
        return Err(Error::InvalidParameter(format!(
            "inter_density must lie in [0, 1], got {inter_density}"
        )));
    }
    let intra = Uniform::new(0.0, 1.0).expect("valid range");
    let inter = Uniform::new(0.0, 0.5).expect("valid range");
    let mut m = DMatrix::zeros(n, n);
    for c in 0..communities {
        let base = c * members;
        for i in base..base + members {
            for j in base..base + members {
                if i != j {
                    m[(i, j)] = intra.sample(rng);
                }
            }
        }
    }
    let pool = n * (n - members);
    let count = (inter_density * pool as f64).round() as usize;
    place_inter_edges(&mut m, members, count, rng, |r| inter.sample(r))?;
    normalize_spectral_radius(&AdjacencyMatrix::new(m)?)
}

/// Unweighted community graph: each block is a directed Erdős–Rényi graph
/// with edge probability `p_intra` over ordered pairs, plus exactly
/// `inter_edges` distinct directed edges between communities.
pub fn er_community(
    communities: usize,
    members: usize,
    p_intra: f64,
    inter_edges: usize,
    rng: &mut SeededRng,
) -> Result<AdjacencyMatrix> {
    let n = community_size(communities, members)?;
    if !(0.0..=1.0).contains(&p_intra) {
        return Err(Error::InvalidParameter(format!(
            "p_intra must lie in [0, 1], got {p_intra}"
        )));
    }
    let mut m = DMatrix::zeros(n, n);
    for c in 0..communities {
        let base = c * members;
        for i in base..base + members {
            for j in base..base + members {
                if i != j && rng.random_bool(p_intra) {
                    m[(i, j)] = 1.0;
                }
            }
        }
    }
    place_inter_edges(&mut m, members, inter_edges, rng, |_| 1.0)?;
    AdjacencyMatrix::new(m)
}

/// I.i.d. standard normal entries.
pub fn gaussian_random(n: usize, rng: &mut SeededRng) -> Result<AdjacencyMatrix> {
    require_at_least(n, 2)?;
    let entries: Vec<f64> = (0..n * n).map(|_| StandardNormal.sample(rng)).collect();
    AdjacencyMatrix::from_row_slice(n, &entries)
}

/// `θ = (n + k) / 2`, cross-checked against `|Γ1| + |Γ2| + |Γ3|`.
pub fn theta_of(d: &SpectralDecomposition) -> Result<usize> {
    let (n, k) = (d.n(), d.k());
    if (n + k) % 2 != 0 {
        return Err(Error::ParityViolation { n, k });
    }
    let theta = (n + k) / 2;
    let counted = d.gamma1().len() + d.gamma2().len() + d.gamma3().len();
    if counted != theta {
        return Err(Error::ParityViolation { n, k });
    }
    Ok(theta)
}

/// Asymptotic expected number of real eigenvalues of an `n x n` matrix
/// with i.i.d. standard normal entries, `√(2n/π)`.
pub fn expected_real_eigenvalues(n: usize) -> f64 {
    (2.0 * n as f64 / std::f64::consts::PI).sqrt()
}

/// Matching `θ` prediction, `n/2 + √(n/(2π))`.
pub fn expected_theta(n: usize) -> f64 {
    n as f64 / 2.0 + (n as f64 / (2.0 * std::f64::consts::PI)).sqrt()
}
