//! Latent space model: distances, edge probabilities, the dyad likelihood,
//! prediction diagnostics, and BIC-based dimension selection.
//!
//! Tie probability is a logistic function of an intercept minus the
//! Euclidean distance between the two actors' latent positions. Dyads are
//! conditionally independent given positions, so the log-likelihood is a
//! sum over the upper triangle.

use crate::error::{Error, Result};
use crate::net::AdjacencyMatrix;
use crate::sampler::{run_lsm_chain, ChainConfig, PriorSpec};

/// N x D matrix of actor positions, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentConfiguration {
    n: usize,
    dim: usize,
    positions: Vec<f64>,
}

impl LatentConfiguration {
    pub fn new(n: usize, dim: usize, positions: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::validation("latent dimension must be at least 1"));
        }
        if dim >= n {
            return Err(Error::validation(format!(
                "latent dimension {dim} must be smaller than the actor count {n}"
            )));
        }
        if positions.len() != n * dim {
            return Err(Error::validation(format!(
                "{} position entries for {n} actors x {dim} dims",
                positions.len()
            )));
        }
        if positions.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("non-finite latent position"));
        }
        Ok(LatentConfiguration { n, dim, positions })
    }

    pub fn zeros(n: usize, dim: usize) -> Result<Self> {
        Self::new(n, dim, vec![0.0; n * dim])
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::validation("ragged position rows"));
        }
        Self::new(n, dim, rows.concat())
    }

    pub fn n_actors(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn get(&self, i: usize, d: usize) -> f64 {
        self.positions[i * self.dim + d]
    }

    pub fn set_row(&mut self, i: usize, values: &[f64]) {
        self.positions[i * self.dim..(i + 1) * self.dim].copy_from_slice(values);
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.positions
    }

    /// Euclidean distance between actors `i` and `j`.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        distance_unchecked(self.row(i), self.row(j))
    }
}

#[inline]
pub(crate) fn distance_unchecked(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = x - y;
        s += d * d;
    }
    s.sqrt()
}

/// Euclidean distance between two equal-length position vectors.
pub fn euclidean_distance(z_i: &[f64], z_j: &[f64]) -> Result<f64> {
    if z_i.len() != z_j.len() {
        return Err(Error::validation(format!(
            "dimension mismatch: {} vs {}",
            z_i.len(),
            z_j.len()
        )));
    }
    Ok(distance_unchecked(z_i, z_j))
}

/// Numerically stable `log(1 + exp(t))`.
#[inline]
pub(crate) fn log1pexp(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// Tie probability `logit^-1(alpha - dist)`; saturates without overflow.
#[inline]
pub fn edge_probability(alpha: f64, dist: f64) -> f64 {
    let t = alpha - dist;
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Bernoulli log-pmf of one dyad with tie indicator `m` at linear predictor
/// `t = alpha - dist`.
#[inline]
pub(crate) fn dyad_log_likelihood(m: u8, t: f64) -> f64 {
    f64::from(m) * t - log1pexp(t)
}

/// Dyad log-likelihood of the network given positions and intercept; only
/// the upper triangle is summed (undirected, never double-counted).
pub fn network_log_likelihood(
    net: &AdjacencyMatrix,
    config: &LatentConfiguration,
    alpha: f64,
) -> Result<f64> {
    if net.n_actors() != config.n_actors() {
        return Err(Error::validation(format!(
            "network has {} actors but configuration has {}",
            net.n_actors(),
            config.n_actors()
        )));
    }
    let n = net.n_actors();
    let mut ll = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let t = alpha - config.distance(i, j);
            ll += dyad_log_likelihood(net.edge(i, j), t);
        }
    }
    Ok(ll)
}

/// In-sample edge-prediction diagnostics at a probability threshold.
///
/// Rates are `None` when undefined: `fpr` needs at least one non-edge,
/// `fnr` at least one edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionRates {
    pub fpr: Option<f64>,
    pub fnr: Option<f64>,
    pub correct: f64,
}

/// Classify each dyad as an edge iff `p_ij > threshold` and tabulate the
/// confusion against the observed network.
pub fn prediction_rates(
    net: &AdjacencyMatrix,
    config: &LatentConfiguration,
    alpha: f64,
    threshold: f64,
) -> Result<PredictionRates> {
    if net.n_actors() != config.n_actors() {
        return Err(Error::validation(
            "network and configuration actor counts differ",
        ));
    }
    let n = net.n_actors();
    let mut fp = 0usize;
    let mut fnr_misses = 0usize;
    let mut edges = 0usize;
    let mut non_edges = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let p = edge_probability(alpha, config.distance(i, j));
            let predicted = p > threshold;
            if net.has_edge(i, j) {
                edges += 1;
                if !predicted {
                    fnr_misses += 1;
                }
            } else {
                non_edges += 1;
                if predicted {
                    fp += 1;
                }
            }
        }
    }
    let dyads = (edges + non_edges) as f64;
    let correct = 1.0 - (fp + fnr_misses) as f64 / dyads;
    Ok(PredictionRates {
        fpr: (non_edges > 0).then(|| fp as f64 / non_edges as f64),
        fnr: (edges > 0).then(|| fnr_misses as f64 / edges as f64),
        correct,
    })
}

/// BIC of a fitted latent space model: `-2 logL + p log(n_dyads)` with
/// `p = N*D + 1` free quantities (positions plus the intercept) and the
/// dyad count as the sample size.
pub fn bic(log_likelihood: f64, n_actors: usize, dim: usize) -> f64 {
    let p = (n_actors * dim + 1) as f64;
    let n_dyads = (n_actors * (n_actors - 1) / 2) as f64;
    -2.0 * log_likelihood + p * n_dyads.ln()
}

/// A latent space model fit summary at posterior-mean quantities.
#[derive(Debug, Clone)]
pub struct LsmFit {
    pub config: LatentConfiguration,
    pub alpha: f64,
    pub log_likelihood: f64,
    pub bic: f64,
}

/// One row of the dimension-selection table.
#[derive(Debug, Clone)]
pub struct DimensionRow {
    pub dim: usize,
    pub fpr: Option<f64>,
    pub fnr: Option<f64>,
    pub correct: Option<f64>,
    pub bic: Option<f64>,
    /// Present when the fit for this candidate failed.
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct DimensionSelection {
    pub best_d: usize,
    pub table: Vec<DimensionRow>,
}

/// Fit the latent space model for each candidate dimension (mediation paths
/// disabled, positions under a standard-normal prior), evaluate prediction
/// rates and BIC at posterior-mean positions, and pick the argmin-BIC
/// dimension. Ties break toward the smaller dimension; per-candidate
/// failures are recorded without aborting the sweep.
pub fn select_dimension(
    net: &AdjacencyMatrix,
    d_candidates: &[usize],
    budget: &ChainConfig,
    priors: &PriorSpec,
) -> Result<DimensionSelection> {
    if d_candidates.is_empty() {
        return Err(Error::validation("no candidate dimensions"));
    }
    let mut table = Vec::with_capacity(d_candidates.len());
    for &d in d_candidates {
        // Each candidate gets its own deterministic seed.
        let mut cfg = budget.clone();
        cfg.seed = budget.seed.wrapping_add(d as u64);
        let row = match fit_single_dimension(net, d, &cfg, priors) {
            Ok(fit) => {
                let rates = prediction_rates(net, &fit.config, fit.alpha, 0.5)?;
                DimensionRow {
                    dim: d,
                    fpr: rates.fpr,
                    fnr: rates.fnr,
                    correct: Some(rates.correct),
                    bic: Some(fit.bic),
                    error: None,
                }
            }
            Err(e) => DimensionRow {
                dim: d,
                fpr: None,
                fnr: None,
                correct: None,
                bic: None,
                error: Some(e.to_string()),
            },
        };
        table.push(row);
    }
    let best = table
        .iter()
        .filter_map(|r| r.bic.map(|b| (r.dim, b)))
        .fold(None::<(usize, f64)>, |acc, (d, b)| match acc {
            None => Some((d, b)),
            Some((bd, bb)) => {
                if b < bb || (b == bb && d < bd) {
                    Some((d, b))
                } else {
                    Some((bd, bb))
                }
            }
        });
    match best {
        Some((best_d, _)) => Ok(DimensionSelection { best_d, table }),
        None => Err(Error::Numerical(
            "every candidate dimension failed to fit".into(),
        )),
    }
}

/// Fit the network-only model at one dimension and summarize at
/// posterior-mean positions and intercept.
pub fn fit_single_dimension(
    net: &AdjacencyMatrix,
    dim: usize,
    cfg: &ChainConfig,
    priors: &PriorSpec,
) -> Result<LsmFit> {
    let run = run_lsm_chain(net, dim, cfg, priors)?;
    let log_likelihood = network_log_likelihood(net, &run.mean_config, run.mean_alpha)?;
    Ok(LsmFit {
        bic: bic(log_likelihood, net.n_actors(), dim),
        config: run.mean_config,
        alpha: run.mean_alpha,
        log_likelihood,
    })
}
