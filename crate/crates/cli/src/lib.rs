//! Batch pipelines behind the `spectrograph` command.
//!
//! Each subcommand produces a [`Report`] that renders as CSV, JSON or
//! Matrix Market. All randomness flows from `--seed`, so identical
//! invocations produce byte-identical output.

pub mod io;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde_json::{json, Value};

use spectrograph::analytic::{analytic_signal, bedrosian_gap, eigenvector_smoothness, hilbert_transform};
use spectrograph::anomaly::{anomaly_scan_with, DEFAULT_THRESHOLD_SIGMA};
use spectrograph::fir::{apply_fir, design_fir};
use spectrograph::graphs::{
    cycle, er_community, expected_real_eigenvalues, expected_theta, gaussian_random, grid2d,
    jittered_cycle, theta_of, weighted_community, SeededRng,
};
use spectrograph::learn::{learn_adjacency_report, SignalMatrix};
use spectrograph::modulation::{demod_features, demodulate};
use spectrograph::spectral::{
    decompose_with, normalize_spectral_radius, AdjacencyMatrix, Band, DecomposeOptions, GraphSignal,
    SpectralDecomposition,
};
use spectrograph::{Error, Result, C64};

use crate::io::{read_adjacency, read_signal, read_to_string, Cell, Table};

#[derive(Parser, Debug, Clone)]
#[command(name = "spectrograph", version, about = "Graph Hilbert transform and demodulation pipelines")]
pub struct PipelineConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Relative tolerance for classifying an eigenvalue as real.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    /// Matrix Market, for matrix outputs only.
    Mtx,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GraphInput {
    /// Adjacency matrix (Matrix Market or dense CSV).
    #[arg(long, required_unless_present = "image")]
    pub input: Option<PathBuf>,

    /// Graph signal, one value per node.
    #[arg(long, required_unless_present = "image")]
    pub signal: Option<PathBuf>,

    /// Grayscale CSV image in [0, 1]; uses the torus grid graph and the
    /// row-major pixel values as the signal.
    #[arg(long, conflicts_with_all = ["input", "signal"])]
    pub image: Option<PathBuf>,

    /// Scale the adjacency to unit spectral radius first.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Eigenvalues and partition sets.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Graph Fourier transform of a signal.
    Gft(GraphInput),
    /// Graph Hilbert transform, spectral or polynomial.
    Hilbert {
        #[command(flatten)]
        graph: GraphInput,
        /// Use a polynomial filter of this order instead of the exact mask.
        #[arg(long)]
        fir: Option<usize>,
    },
    /// Analytic signal x + j x_h.
    Analytic(GraphInput),
    /// Amplitude, phase and frequency modulation.
    Demod(GraphInput),
    /// Node scores |x_h| with a mean + k·std threshold.
    Anomaly {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_SIGMA)]
        threshold_sigma: f64,
    },
    /// Product-rule gap over pairs of upper-band eigenvectors.
    Bedrosian {
        #[arg(long)]
        input: PathBuf,
        /// Stop after this many pairs, smoothest first.
        #[arg(long)]
        max_pairs: Option<usize>,
    },
    /// Monte Carlo count of real eigenvalues.
    Theta {
        #[arg(long, value_enum, default_value = "gaussian")]
        family: ThetaFamily,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        /// Weight jitter for the jittered cycle.
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
    },
    /// Generate a graph.
    Gen(GenArgs),
    /// Learn an adjacency matrix from exemplar signals (CSV, one column each).
    Learn {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        ridge: f64,
    },
    /// |GFT| of the AM and FM profiles.
    Features(GraphInput),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaFamily {
    Gaussian,
    Jittered,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenFamily {
    Cycle,
    Jittered,
    Grid,
    WeightedCommunity,
    ErCommunity,
    Gaussian,
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: GenFamily,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub rows: usize,
    #[arg(long, default_value_t = 8)]
    pub cols: usize,
    #[arg(long, default_value_t = 5)]
    pub communities: usize,
    #[arg(long, default_value_t = 10)]
    pub members: usize,
    /// Fraction of cross-community ordered pairs joined by an edge.
    #[arg(long, default_value_t = 0.01)]
    pub density: f64,
    #[arg(long, default_value_t = 0.5)]
    pub p_intra: f64,
    #[arg(long, default_value_t = 5)]
    pub inter_edges: usize,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
}

/// Result of one subcommand, renderable in the supported formats.
#[derive(Debug, Clone)]
pub enum Report {
    Structured { table: Table, json: Value, default: Format },
    Matrix { matrix: DMatrix<f64>, comments: Vec<String> },
}

impl Report {
    fn table(table: Table, json: Value) -> Self {
        Report::Structured { table, json, default: Format::Csv }
    }

    fn json(table: Table, json: Value) -> Self {
        Report::Structured { table, json, default: Format::Json }
    }

    pub fn render(&self, format: Option<Format>) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        match self {
            Report::Structured { table, json, default } => match format.unwrap_or(*default) {
                Format::Csv => table.write_csv(&mut out)?,
                Format::Json => {
                    serde_json::to_writer_pretty(&mut out, json).map_err(|e| Error::Io(e.to_string()))?;
                    out.push(b'\n');
                }
                Format::Mtx => {
                    return Err(Error::InvalidParameter("matrix market output needs a matrix result".into()))
                }
            },
            Report::Matrix { matrix, comments } => match format.unwrap_or(Format::Mtx) {
                Format::Mtx => io::write_matrix_market(&mut out, matrix, comments)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    for row in matrix.row_iter() {
                        w.write_record(row.iter().map(|&v| io::fmt_float(v)))
                            .map_err(|e| Error::Io(e.to_string()))?;
                    }
                    w.flush()?;
                }
                Format::Json => {
                    let rows: Vec<Vec<f64>> = matrix.row_iter().map(|r| r.iter().copied().collect()).collect();
                    serde_json::to_writer_pretty(&mut out, &json!({ "comments": comments, "rows": rows }))
                        .map_err(|e| Error::Io(e.to_string()))?;
                    out.push(b'\n');
                }
            },
        }
        Ok(out)
    }
}

/// 2 for bad input, 3 for numerical failure on valid input.
pub fn exit_code(e: &Error) -> u8 {
    if e.is_input_error() {
        2
    } else {
        3
    }
}

pub fn error_json(e: &Error) -> String {
    json!({ "error": e.kind(), "message": e.to_string(), "exit_code": exit_code(e) }).to_string()
}

/// Runs the configured subcommand and writes its artifact.
pub fn run_pipeline(config: &PipelineConfig) -> Result<()> {
    let bytes = execute(config)?.render(config.format)?;
    match &config.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?);
            w.write_all(&bytes)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(&bytes)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn options(config: &PipelineConfig) -> Result<DecomposeOptions> {
    let mut opts = DecomposeOptions::default();
    if let Some(t) = config.tolerance {
        if t <= 0.0 || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {t}")));
        }
        opts.real_tolerance = t;
    }
    Ok(opts)
}

fn read_image(path: &Path) -> Result<(AdjacencyMatrix, GraphSignal)> {
    let img = io::parse_dense_csv(&read_to_string(path)?)?;
    if let Some(v) = img.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidParameter(format!("image intensity {v} outside [0, 1]")));
    }
    let (rows, cols) = img.shape();
    let a = grid2d(rows, cols)?;
    let x = GraphSignal::new((0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|p| img[p]).collect())?;
    Ok((a, x))
}

fn load_graph(g: &GraphInput, config: &PipelineConfig) -> Result<(AdjacencyMatrix, GraphSignal, SpectralDecomposition)> {
    let (a, x) = match (&g.image, &g.input, &g.signal) {
        (Some(image), _, _) => read_image(image)?,
        (None, Some(input), Some(signal)) => (read_adjacency(input)?, read_signal(signal)?),
        _ => return Err(Error::InvalidParameter("need --input and --signal, or --image".into())),
    };
    if x.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: x.len() });
    }
    let a = if g.normalize { normalize_spectral_radius(&a)? } else { a };
    let d = decompose_with(&a, &options(config)?)?;
    Ok((a, x, d))
}

fn band_name(b: Band) -> &'static str {
    match b {
        Band::PositiveReal => "gamma1",
        Band::Upper => "gamma2",
        Band::NegativeReal => "gamma3",
        Band::Lower => "gamma4",
    }
}

fn pairs(values: impl Iterator<Item = C64>) -> Vec<[f64; 2]> {
    values.map(|z| [z.re, z.im]).collect()
}

fn spectrum_table(d: &SpectralDecomposition, coeffs: &[C64]) -> Table {
    let mut t = Table::new(&["index", "re", "im", "band"]);
    for (i, z) in coeffs.iter().enumerate() {
        t.push(vec![i.into(), z.re.into(), z.im.into(), band_name(d.band(i)).into()]);
    }
    t
}

fn vector_table(header: &str, values: &[f64]) -> Table {
    let mut t = Table::new(&["node", header]);
    for (i, &v) in values.iter().enumerate() {
        t.push(vec![i.into(), v.into()]);
    }
    t
}

/// Computes the report for a subcommand without writing it anywhere.
pub fn execute(config: &PipelineConfig) -> Result<Report> {
    match &config.command {
        Command::Decompose { input } => {
            let d = decompose_with(&read_adjacency(input)?, &options(config)?)?;
            let eig: Vec<C64> = d.eigenvalues().iter().copied().collect();
            let json = json!({
                "n": d.n(),
                "eigenvalues": pairs(eig.iter().copied()),
                "bands": d.bands().iter().map(|&b| band_name(b)).collect::<Vec<_>>(),
                "gamma1": d.gamma1(),
                "gamma2": d.gamma2(),
                "gamma3": d.gamma3(),
                "gamma4": d.gamma4(),
                "k": d.k(),
                "theta": theta_of(&d)?,
                "condition_estimate": d.condition_estimate(),
                "spectral_radius": d.spectral_radius(),
            });
            Ok(Report::json(spectrum_table(&d, &eig), json))
        }
        Command::Gft(g) => {
            let (_, x, d) = load_graph(g, config)?;
            let s: Vec<C64> = d.gft(&x)?.coefficients().iter().copied().collect();
            let json = json!({ "coefficients": pairs(s.iter().copied()) });
            Ok(Report::table(spectrum_table(&d, &s), json))
        }
        Command::Hilbert { graph, fir } => {
            let (a, x, d) = load_graph(graph, config)?;
            let (h, meta) = match fir {
                None => (hilbert_transform(&d, &x)?, json!({ "method": "spectral" })),
                Some(order) => {
                    let f = design_fir(&d, *order)?;
                    let meta = json!({
                        "method": "fir",
                        "order": f.order(),
                        "taps": f.taps(),
                        "design_residual": f.design_residual(),
                    });
                    (apply_fir(&a, &f, &x)?, meta)
                }
            };
            let mut json = json!({ "values": h.as_slice() });
            json.as_object_mut().expect("object").extend(meta.as_object().expect("object").clone());
            Ok(Report::table(vector_table("value", h.as_slice()), json))
        }
        Command::Analytic(g) => {
            let (_, x, d) = load_graph(g, config)?;
            let xa = analytic_signal(&d, &x)?;
            let mut t = Table::new(&["node", "re", "im"]);
            for (i, z) in xa.values().iter().enumerate() {
                t.push(vec![i.into(), z.re.into(), z.im.into()]);
            }
            let json = json!({
                "re": xa.source().as_slice(),
                "im": xa.hilbert().as_slice(),
                "imaginary_residue": xa.imaginary_residue(),
            });
            Ok(Report::table(t, json))
        }
        Command::Demod(g) => {
            let (a, x, d) = load_graph(g, config)?;
            let p = demodulate(&a, &d, &x)?;
            let mut t = Table::new(&["node", "am", "pm", "unwrapped", "fm"]);
            for i in 0..p.len() {
                t.push(vec![i.into(), p.am[i].into(), p.pm[i].into(), p.unwrapped[i].into(), p.fm[i].into()]);
            }
            let json = json!({
                "am": p.am.as_slice(),
                "pm": p.pm.as_slice(),
                "unwrapped": p.unwrapped.as_slice(),
                "fm": p.fm.as_slice(),
                "empty_rows": p.empty_rows,
            });
            Ok(Report::table(t, json))
        }
        Command::Anomaly { graph, threshold_sigma } => {
            let (_, x, d) = load_graph(graph, config)?;
            let r = anomaly_scan_with(&d, &x, *threshold_sigma)?;
            let mut t = Table::new(&["node", "score", "flagged"]);
            for (i, &s) in r.scores.iter().enumerate() {
                t.push(vec![i.into(), s.into(), usize::from(r.flagged.contains(&i)).into()]);
            }
            let json = json!({
                "scores": r.scores,
                "ranking": r.ranking,
                "threshold": r.threshold,
                "flagged": r.flagged,
            });
            Ok(Report::table(t, json))
        }
        Command::Bedrosian { input, max_pairs } => {
            let d = decompose_with(&read_adjacency(input)?, &options(config)?)?;
            let mut upper: Vec<(usize, f64)> = d
                .gamma2()
                .iter()
                .map(|&i| eigenvector_smoothness(&d, i).map(|s| (i, s)))
                .collect::<Result<_>>()?;
            upper.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            let mut todo = Vec::new();
            for (p, &(i, si)) in upper.iter().enumerate() {
                for &(j, sj) in &upper[p + 1..] {
                    if si < sj {
                        todo.push((i, j, si, sj));
                    }
                }
            }
            if let Some(cap) = max_pairs {
                todo.truncate(*cap);
            }
            let gaps: Vec<f64> = todo
                .par_iter()
                .map(|&(i, j, _, _)| bedrosian_gap(&d, i, j))
                .collect::<Result<_>>()?;
            let mut t = Table::new(&["i", "j", "low_smoothness", "high_smoothness", "gap"]);
            let mut rows = Vec::new();
            for (&(i, j, si, sj), &gap) in todo.iter().zip(&gaps) {
                t.push(vec![i.into(), j.into(), si.into(), sj.into(), gap.into()]);
                rows.push(json!({ "i": i, "j": j, "low_smoothness": si, "high_smoothness": sj, "gap": gap }));
            }
            Ok(Report::table(t, Value::Array(rows)))
        }
        Command::Theta { family, n, trials, sigma } => theta_report(*family, *n, *trials, *sigma, config),
        Command::Gen(args) => {
            let mut rng = SeededRng::new(config.seed);
            let (a, label) = match args.family {
                GenFamily::Cycle => (cycle(args.n)?, format!("cycle n={}", args.n)),
                GenFamily::Jittered => (
                    jittered_cycle(args.n, args.sigma, &mut rng)?,
                    format!("jittered cycle n={} sigma={}", args.n, args.sigma),
                ),
                GenFamily::Grid => (grid2d(args.rows, args.cols)?, format!("grid rows={} cols={}", args.rows, args.cols)),
                GenFamily::WeightedCommunity => (
                    weighted_community(args.communities, args.members, args.density, &mut rng)?,
                    format!(
                        "weighted community communities={} members={} density={}",
                        args.communities, args.members, args.density
                    ),
                ),
                GenFamily::ErCommunity => (
                    er_community(args.communities, args.members, args.p_intra, args.inter_edges, &mut rng)?,
                    format!(
                        "er community communities={} members={} p_intra={} inter_edges={}",
                        args.communities, args.members, args.p_intra, args.inter_edges
                    ),
                ),
                GenFamily::Gaussian => (gaussian_random(args.n, &mut rng)?, format!("gaussian n={}", args.n)),
            };
            Ok(Report::Matrix {
                matrix: a.into_inner(),
                comments: vec![format!("seed: {}", config.seed), format!("family: {label}")],
            })
        }
        Command::Learn { input, ridge } => {
            let x = SignalMatrix::new(io::parse_dense_csv(&read_to_string(input)?)?)?;
            let r = learn_adjacency_report(&x, *ridge)?;
            Ok(Report::Matrix {
                matrix: r.adjacency.into_inner(),
                comments: vec![
                    format!("ridge: {ridge}"),
                    format!("exemplars: {}", x.m()),
                    format!("kkt residual: {:.3e}", r.kkt_residual),
                    format!("constraint residual: {:.3e}", r.constraint_residual),
                ],
            })
        }
        Command::Features(g) => {
            let (a, x, d) = load_graph(g, config)?;
            let f = demod_features(&demodulate(&a, &d, &x)?, &d)?;
            let mut t = Table::new(&["index", "block", "value"]);
            for (k, &v) in f.iter().enumerate() {
                let block = if k < d.n() { "am" } else { "fm" };
                t.push(vec![k.into(), block.into(), v.into()]);
            }
            Ok(Report::table(t, json!({ "features": f })))
        }
    }
}

fn theta_report(family: ThetaFamily, n: usize, trials: u64, sigma: f64, config: &PipelineConfig) -> Result<Report> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let opts = options(config)?;
    // one independent stream per trial keeps results independent of scheduling
    let counts: Vec<(usize, Option<usize>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = SeededRng::with_stream(config.seed, t);
            let a = match family {
                ThetaFamily::Gaussian => gaussian_random(n, &mut rng)?,
                ThetaFamily::Jittered => jittered_cycle(n, sigma, &mut rng)?,
            };
            let d = decompose_with(&a, &opts)?;
            Ok((d.k(), theta_of(&d).ok()))
        })
        .collect::<Result<_>>()?;

    let m = trials as f64;
    let mean = counts.iter().map(|c| c.0 as f64).sum::<f64>() / m;
    let std = if trials > 1 {
        (counts.iter().map(|c| (c.0 as f64 - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
    } else {
        0.0
    };
    let parity_failures = counts.iter().filter(|c| c.1.is_none()).count();
    let thetas: Vec<usize> = counts.iter().filter_map(|c| c.1).collect();
    let mean_theta = thetas.iter().sum::<usize>() as f64 / thetas.len().max(1) as f64;
    let family_name = match family {
        ThetaFamily::Gaussian => "gaussian",
        ThetaFamily::Jittered => "jittered",
    };
    let mut json = json!({
        "family": family_name,
        "n": n,
        "trials": trials,
        "seed": config.seed,
        "mean_real_eigs": mean,
        "std_real_eigs": std,
        "mean_theta": mean_theta,
        "parity_failures": parity_failures,
    });
    if family == ThetaFamily::Gaussian {
        let predicted = expected_real_eigenvalues(n);
        let extra = json!({
            "predicted": predicted,
            "relative_error": (mean - predicted).abs() / predicted,
            "predicted_theta": expected_theta(n),
        });
        json.as_object_mut().expect("object").extend(extra.as_object().expect("object").clone());
    }
    let mut t = Table::new(&["trial", "real_eigs", "theta"]);
    for (k, &(real, theta)) in counts.iter().enumerate() {
        let theta = theta.map_or(Cell::Text("parity".into()), Cell::Int);
        t.push(vec![k.into(), real.into(), theta]);
    }
    Ok(Report::json(t, json))
}
