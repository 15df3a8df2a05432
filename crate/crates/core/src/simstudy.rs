//! Monte Carlo harness: the data generator, the condition grid, and the
//! replication runner with relative-bias and coverage aggregation.
//!
//! Generated data follow the structural model with all intercepts at zero,
//! a standard-normal covariate, equal slopes `a_d = b_d = sqrt(med/D)`, and
//! residual variances chosen so positions and outcome have unit marginal
//! variance. With a zero network intercept the mean squared latent distance
//! is twice the latent dimension, so density falls as dimensions are added.

use crate::error::{Error, Result};
use crate::lsm::{edge_probability, LatentConfiguration};
use crate::mediation::{
    mediator_residual_variance, outcome_residual_variance, MediationParams, OutcomeModel,
};
use crate::net::{ActorData, AdjacencyMatrix};
use crate::rng::{stream, STREAM_DATA};
use crate::sampler::{run_chain, ChainConfig, ParamSummary, PriorSpec};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One cell of the simulation grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimCondition {
    pub dim: usize,
    pub n: usize,
    /// Population mediation effect; determines `a_d = b_d = sqrt(med/D)`.
    pub med_level: f64,
    pub c_prime: f64,
    pub n_reps: usize,
    pub base_seed: u64,
}

/// Generator coefficients implied by a condition.
#[derive(Debug, Clone)]
pub struct GeneratorTruth {
    pub params: MediationParams,
    pub med: f64,
    pub total: f64,
}

impl SimCondition {
    /// Resolve the implied coefficients and residual variances, failing on
    /// infeasible cells (nonpositive outcome residual variance).
    pub fn coefficients(&self) -> Result<GeneratorTruth> {
        if self.dim == 0 {
            return Err(Error::validation("latent dimension must be at least 1"));
        }
        if self.n <= self.dim {
            return Err(Error::validation(format!(
                "sample size {} must exceed the latent dimension {}",
                self.n, self.dim
            )));
        }
        if self.med_level < 0.0 {
            return Err(Error::Infeasible(format!(
                "mediation level {} cannot be negative with equal slopes",
                self.med_level
            )));
        }
        let slope = (self.med_level / self.dim as f64).sqrt();
        let a = vec![slope; self.dim];
        let b = vec![slope; self.dim];
        let sigma1_sq: Vec<f64> = a
            .iter()
            .map(|&ad| mediator_residual_variance(ad))
            .collect::<Result<_>>()?;
        let sigma2_sq = outcome_residual_variance(&a, &b, self.c_prime)?;
        let med = self.med_level;
        let total = med + self.c_prime;
        Ok(GeneratorTruth {
            params: MediationParams {
                i1: vec![0.0; self.dim],
                i2: 0.0,
                a,
                b,
                c_prime: self.c_prime,
                alpha: 0.0,
                sigma1_sq,
                sigma2_sq,
            },
            med,
            total,
        })
    }

    /// Compact label used in file names and reports.
    pub fn label(&self) -> String {
        format!(
            "D{}_n{}_med{}_cp{}",
            self.dim, self.n, self.med_level, self.c_prime
        )
    }
}

/// The full factorial grid of the simulation design: 2 dimensions x 6
/// sample sizes x 4 mediation levels x 2 direct effects = 96 cells, all
/// feasible by construction.
pub fn table3_grid(n_reps: usize, base_seed: u64) -> Vec<SimCondition> {
    let mut grid = Vec::with_capacity(96);
    for &dim in &[2usize, 3] {
        for &n in &[50usize, 100, 150, 200, 250, 300] {
            for &med in &[0.0, 0.0196, 0.1521, 0.3481] {
                for &c_prime in &[0.0, 0.14] {
                    let cond = SimCondition {
                        dim,
                        n,
                        med_level: med,
                        c_prime,
                        n_reps,
                        base_seed,
                    };
                    cond.coefficients()
                        .expect("every cell of the design grid is feasible");
                    grid.push(cond);
                }
            }
        }
    }
    grid
}

fn draw_actor_variables<R: Rng>(
    cond: &SimCondition,
    truth: &GeneratorTruth,
    rng: &mut R,
) -> Result<(Vec<f64>, LatentConfiguration, Vec<f64>)> {
    let n = cond.n;
    let d = cond.dim;
    let p = &truth.params;

    let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let mut positions = Vec::with_capacity(n * d);
    for &xi in &x {
        for k in 0..d {
            let noise: f64 = StandardNormal.sample(rng);
            positions.push(p.a[k] * xi + p.sigma1_sq[k].sqrt() * noise);
        }
    }
    let config = LatentConfiguration::new(n, d, positions)?;
    let sd2 = p.sigma2_sq.sqrt();
    let y: Vec<f64> = (0..n)
        .map(|i| {
            let noise: f64 = StandardNormal.sample(rng);
            let zi = config.row(i);
            let lin: f64 = p.b.iter().zip(zi.iter()).map(|(b, z)| b * z).sum();
            lin + p.c_prime * x[i] + sd2 * noise
        })
        .collect();
    Ok((x, config, y))
}

/// Draw the covariate, latent positions, and continuous outcome for one
/// replication (no network edges; see [`generate_dataset`]).
pub fn generate_actor_variables(
    cond: &SimCondition,
    seed: u64,
) -> Result<(Vec<f64>, LatentConfiguration, Vec<f64>, GeneratorTruth)> {
    let truth = cond.coefficients()?;
    let mut rng = stream(seed, STREAM_DATA);
    let (x, config, y) = draw_actor_variables(cond, &truth, &mut rng)?;
    Ok((x, config, y, truth))
}

/// Generate one synthetic dataset: covariate, network, and outcome, plus
/// the generating truth for evaluation.
pub fn generate_dataset(
    cond: &SimCondition,
    seed: u64,
) -> Result<(AdjacencyMatrix, ActorData, GeneratorTruth)> {
    let truth = cond.coefficients()?;
    let mut rng = stream(seed, STREAM_DATA);
    let (x, config, y) = draw_actor_variables(cond, &truth, &mut rng)?;
    let n = cond.n;
    let mut rows = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let p_ij = edge_probability(truth.params.alpha, config.distance(i, j));
            let tie = u8::from(rng.random::<f64>() < p_ij);
            rows[i][j] = tie;
            rows[j][i] = tie;
        }
    }
    let net = AdjacencyMatrix::from_rows(&rows, None)?;
    let ids = (1..=n).map(|i| i.to_string()).collect();
    let data = ActorData::new(ids, x, y)?;
    Ok((net, data, truth))
}

/// Synthetic stand-in for the empirical study layout: 162 actors, a binary
/// covariate, five latent dimensions, the network intercept tuned so the
/// expected density is 16.2%, and a binary (probit) outcome.
pub fn generate_empirical_replica(seed: u64) -> Result<(AdjacencyMatrix, ActorData)> {
    let n = 162;
    let d = 5;
    let mut rng = stream(seed, STREAM_DATA);

    // 72-of-162 split mirroring the covariate balance of the study data.
    let mut x = vec![0.0f64; n];
    for v in x.iter_mut().take(72) {
        *v = 1.0;
    }
    // Fisher-Yates shuffle.
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        x.swap(i, j);
    }

    let a = vec![0.25f64; d];
    let b = vec![-0.35f64; d];
    let c_prime = -0.4;
    let i2 = -0.3;
    let mut positions = Vec::with_capacity(n * d);
    for &xi in &x {
        for ak in &a {
            let noise: f64 = StandardNormal.sample(&mut rng);
            positions.push(ak * xi + noise);
        }
    }
    let config = LatentConfiguration::new(n, d, positions)?;

    // Tune the intercept by bisection until the expected density hits the
    // target, then draw the ties.
    let target = 0.162;
    let mean_p = |alpha: f64| {
        let mut acc = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                acc += edge_probability(alpha, config.distance(i, j));
            }
        }
        acc / (n * (n - 1) / 2) as f64
    };
    let mut lo = -20.0;
    let mut hi = 20.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mean_p(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);

    let mut rows = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let p_ij = edge_probability(alpha, config.distance(i, j));
            let tie = u8::from(rng.random::<f64>() < p_ij);
            rows[i][j] = tie;
            rows[j][i] = tie;
        }
    }
    let net = AdjacencyMatrix::from_rows(&rows, None)?;

    // Probit outcome.
    let y: Vec<f64> = (0..n)
        .map(|i| {
            let zi = config.row(i);
            let lin: f64 =
                i2 + c_prime * x[i] + b.iter().zip(zi.iter()).map(|(b, z)| b * z).sum::<f64>();
            let noise: f64 = StandardNormal.sample(&mut rng);
            f64::from(lin + noise >= 0.0)
        })
        .collect();
    let ids = (1..=n).map(|i| i.to_string()).collect();
    Ok((net, ActorData::new(ids, x, y)?))
}

/// Relative bias in percent: `(mean - truth)/|truth| * 100` for nonzero
/// truth, and the absolute difference times 100 at zero truth.
pub fn relative_bias(mean_estimate: f64, truth: f64) -> f64 {
    if truth != 0.0 {
        (mean_estimate - truth) / truth.abs() * 100.0
    } else {
        (mean_estimate - truth) * 100.0
    }
}

/// Percent of intervals containing the truth.
pub fn coverage_rate(intervals: &[(f64, f64)], truth: f64) -> f64 {
    assert!(!intervals.is_empty(), "coverage of an empty interval list");
    let hits = intervals
        .iter()
        .filter(|(lo, hi)| *lo <= truth && truth <= *hi)
        .count();
    100.0 * hits as f64 / intervals.len() as f64
}

/// Aggregate accuracy of one effect target across replications.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TargetStats {
    pub truth: f64,
    pub mean_estimate: f64,
    pub rel_bias_percent: f64,
    pub coverage_percent: f64,
    pub mean_ci_width: f64,
}

/// Posterior summary triple of one replication.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepEstimates {
    pub med: ParamSummary,
    pub c_prime: ParamSummary,
    pub tot: ParamSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepRecord {
    pub rep: usize,
    pub seed: u64,
    /// Error message when the replication failed.
    pub error: Option<String>,
    pub estimates: Option<RepEstimates>,
}

/// Results of one condition: per-replication records plus aggregates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimReport {
    pub condition: SimCondition,
    /// Set when the condition itself could not run (infeasible cell).
    pub condition_error: Option<String>,
    pub med: TargetStats,
    pub direct: TargetStats,
    pub total: TargetStats,
    pub n_failed: usize,
    pub replications: Vec<RepRecord>,
}

fn nan_stats(truth: f64) -> TargetStats {
    TargetStats {
        truth,
        mean_estimate: f64::NAN,
        rel_bias_percent: f64::NAN,
        coverage_percent: f64::NAN,
        mean_ci_width: f64::NAN,
    }
}

fn aggregate_target(
    records: &[RepRecord],
    truth: f64,
    pick: impl Fn(&RepEstimates) -> ParamSummary,
) -> TargetStats {
    let summaries: Vec<ParamSummary> = records
        .iter()
        .filter_map(|r| r.estimates.as_ref().map(&pick))
        .collect();
    if summaries.is_empty() {
        return nan_stats(truth);
    }
    let k = summaries.len() as f64;
    let mean_estimate = summaries.iter().map(|s| s.mean).sum::<f64>() / k;
    let intervals: Vec<(f64, f64)> = summaries.iter().map(|s| (s.ci_lower, s.ci_upper)).collect();
    TargetStats {
        truth,
        mean_estimate,
        rel_bias_percent: relative_bias(mean_estimate, truth),
        coverage_percent: coverage_rate(&intervals, truth),
        mean_ci_width: summaries.iter().map(|s| s.ci_upper - s.ci_lower).sum::<f64>() / k,
    }
}

/// Run every replication of one condition and aggregate. Replications run
/// in parallel; records and aggregates are reduced in replication order, so
/// the output is independent of scheduling.
pub fn run_condition(cond: &SimCondition, chain_cfg: &ChainConfig) -> SimReport {
    let truth = match cond.coefficients() {
        Ok(t) => t,
        Err(e) => {
            return SimReport {
                condition: cond.clone(),
                condition_error: Some(e.to_string()),
                med: nan_stats(cond.med_level),
                direct: nan_stats(cond.c_prime),
                total: nan_stats(cond.med_level + cond.c_prime),
                n_failed: 0,
                replications: Vec::new(),
            }
        }
    };
    let priors = PriorSpec::default();
    let records: Vec<RepRecord> = (0..cond.n_reps)
        .into_par_iter()
        .map(|rep| {
            let seed = cond.base_seed.wrapping_add(rep as u64);
            let outcome = run_replication(cond, seed, chain_cfg, &priors);
            match outcome {
                Ok(estimates) => RepRecord {
                    rep,
                    seed,
                    error: None,
                    estimates: Some(estimates),
                },
                Err(e) => RepRecord {
                    rep,
                    seed,
                    error: Some(e.to_string()),
                    estimates: None,
                },
            }
        })
        .collect();
    let n_failed = records.iter().filter(|r| r.error.is_some()).count();
    SimReport {
        condition: cond.clone(),
        condition_error: None,
        med: aggregate_target(&records, truth.med, |e| e.med),
        direct: aggregate_target(&records, truth.params.c_prime, |e| e.c_prime),
        total: aggregate_target(&records, truth.total, |e| e.tot),
        n_failed,
        replications: records,
    }
}

fn run_replication(
    cond: &SimCondition,
    seed: u64,
    chain_cfg: &ChainConfig,
    priors: &PriorSpec,
) -> Result<RepEstimates> {
    let (net, data, _) = generate_dataset(cond, seed)?;
    let cfg = ChainConfig {
        seed,
        init_positions: None,
        ..chain_cfg.clone()
    };
    let (_, summary) = run_chain(
        &net,
        &data,
        OutcomeModel::Continuous,
        cond.dim,
        &cfg,
        priors,
    )?;
    Ok(RepEstimates {
        med: summary.med,
        c_prime: summary.c_prime,
        tot: summary.tot,
    })
}

/// Run a list of conditions. Failures stay isolated inside each report.
pub fn run_grid(grid: &[SimCondition], chain_cfg: &ChainConfig) -> Vec<SimReport> {
    grid.iter().map(|c| run_condition(c, chain_cfg)).collect()
}

/// Long-format aggregate CSV, one row per condition and effect target.
pub fn aggregate_csv(reports: &[SimReport]) -> String {
    let mut out =
        String::from("D,n,med_true,c_prime,target,rel_bias,coverage,mean_ci_width,n_failed\n");
    for r in reports {
        for (target, stats) in [("med", &r.med), ("direct", &r.direct), ("total", &r.total)] {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.condition.dim,
                r.condition.n,
                r.condition.med_level,
                r.condition.c_prime,
                target,
                stats.rel_bias_percent,
                stats.coverage_percent,
                stats.mean_ci_width,
                r.n_failed
            ));
        }
    }
    out
}

/// Like [`aggregate_csv`] but with relative bias clipped to [-20, 20] for
/// plotting; the unclipped values stay in the aggregate CSV.
pub fn plot_data_csv(reports: &[SimReport]) -> String {
    let mut out =
        String::from("D,n,med_true,c_prime,target,rel_bias_clipped,coverage,mean_ci_width\n");
    for r in reports {
        for (target, stats) in [("med", &r.med), ("direct", &r.direct), ("total", &r.total)] {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.condition.dim,
                r.condition.n,
                r.condition.med_level,
                r.condition.c_prime,
                target,
                stats.rel_bias_percent.clamp(-20.0, 20.0),
                stats.coverage_percent,
                stats.mean_ci_width,
            ));
        }
    }
    out
}

/// Per-replication CSV for one condition.
pub fn replication_csv(report: &SimReport) -> String {
    let mut out = String::from(
        "rep,seed,status,med_mean,med_lo,med_hi,c_prime_mean,c_prime_lo,c_prime_hi,tot_mean,tot_lo,tot_hi\n",
    );
    for r in &report.replications {
        match (&r.estimates, &r.error) {
            (Some(e), _) => out.push_str(&format!(
                "{},{},ok,{},{},{},{},{},{},{},{},{}\n",
                r.rep,
                r.seed,
                e.med.mean,
                e.med.ci_lower,
                e.med.ci_upper,
                e.c_prime.mean,
                e.c_prime.ci_lower,
                e.c_prime.ci_upper,
                e.tot.mean,
                e.tot.ci_lower,
                e.tot.ci_upper
            )),
            (None, Some(err)) => {
                let clean = err.replace([',', '\n'], ";");
                out.push_str(&format!("{},{},{clean},,,,,,,,,\n", r.rep, r.seed));
            }
            (None, None) => unreachable!("replication without estimates or error"),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::density;

    fn cond(dim: usize, n: usize, med: f64, c_prime: f64, reps: usize, seed: u64) -> SimCondition {
        SimCondition {
            dim,
            n,
            med_level: med,
            c_prime,
            n_reps: reps,
            base_seed: seed,
        }
    }

    #[test]
    fn all_96_grid_cells_are_feasible() {
        let grid = table3_grid(1, 0);
        assert_eq!(grid.len(), 96);
        for c in &grid {
            let t = c.coefficients().unwrap();
            assert!(t.params.sigma2_sq > 0.0);
            for &s in &t.params.sigma1_sq {
                assert!(s > 0.0);
            }
        }
    }

    #[test]
    fn infeasible_condition_is_rejected() {
        let c = cond(2, 100, 0.5, 0.9, 1, 0);
        let err = c.coefficients().unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)));
    }

    #[test]
    fn generator_moments_match_unit_variances() {
        // Large-sample check of the unit-variance construction: the sample
        // variance of each position coordinate and of the outcome is 1.
        let c = cond(2, 100_000, 0.0, 0.0, 1, 0);
        let (x, config, y, _) = generate_actor_variables(&c, 7).unwrap();
        let var = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            v.iter().map(|u| (u - m) * (u - m)).sum::<f64>() / v.len() as f64
        };
        assert!((var(&x) - 1.0).abs() < 0.02);
        for k in 0..2 {
            let col: Vec<f64> = (0..c.n).map(|i| config.get(i, k)).collect();
            assert!((var(&col) - 1.0).abs() < 0.02, "var(z_{k}) = {}", var(&col));
        }
        assert!((var(&y) - 1.0).abs() < 0.02, "var(y) = {}", var(&y));

        // Nonzero effects keep unit variances by construction.
        let c = cond(3, 100_000, 0.3481, 0.14, 1, 0);
        let (_, config, y, _) = generate_actor_variables(&c, 11).unwrap();
        for k in 0..3 {
            let col: Vec<f64> = (0..c.n).map(|i| config.get(i, k)).collect();
            assert!((var(&col) - 1.0).abs() < 0.02);
        }
        assert!((var(&y) - 1.0).abs() < 0.02);
    }

    #[test]
    fn mean_squared_distance_is_twice_the_dimension() {
        for &dim in &[2usize, 3] {
            let c = cond(dim, 300, 0.1521, 0.14, 1, 0);
            let mut total = 0.0;
            let mut count = 0usize;
            for seed in 0..20u64 {
                let (_, config, _, _) = generate_actor_variables(&c, seed).unwrap();
                for i in 0..c.n {
                    for j in (i + 1)..c.n {
                        let d = config.distance(i, j);
                        total += d * d;
                        count += 1;
                    }
                }
            }
            let msd = total / count as f64;
            let expect = 2.0 * dim as f64;
            assert!(
                (msd - expect).abs() / expect < 0.05,
                "mean squared distance {msd} vs {expect}"
            );
        }
    }

    #[test]
    fn density_decreases_with_dimension() {
        let mut d2 = 0.0;
        let mut d3 = 0.0;
        for seed in 0..20u64 {
            let (net2, _, _) = generate_dataset(&cond(2, 120, 0.0, 0.0, 1, 0), seed).unwrap();
            let (net3, _, _) = generate_dataset(&cond(3, 120, 0.0, 0.0, 1, 0), seed).unwrap();
            d2 += density(&net2);
            d3 += density(&net3);
        }
        assert!(
            d3 / 20.0 < d2 / 20.0,
            "density should fall with dimension: D2 {} vs D3 {}",
            d2 / 20.0,
            d3 / 20.0
        );
    }

    #[test]
    fn relative_bias_cases() {
        // Hand arithmetic: (0.3655 - 0.3481)/0.3481 * 100 = 4.9985...
        let rb = relative_bias(0.3655, 0.3481);
        assert!((rb - 5.0).abs() < 0.01, "rel bias {rb}");
        assert!((relative_bias(0.002, 0.0) - 0.2).abs() < 1e-12);
        assert_eq!(relative_bias(0.1521, 0.1521), 0.0);
        // Negative truth uses |truth| in the denominator.
        assert!((relative_bias(-1.0, -2.0) - 50.0).abs() < 1e-12);
    }

    #[test]
    fn relative_bias_is_antisymmetric_around_truth() {
        let truth = 0.35;
        for delta in [0.01, 0.1, 0.2] {
            let up = relative_bias(truth + delta, truth);
            let down = relative_bias(truth - delta, truth);
            assert!((up + down).abs() < 1e-12);
        }
    }

    #[test]
    fn coverage_rate_cases() {
        let truth = 1.0;
        let all: Vec<(f64, f64)> = (0..10).map(|_| (0.5, 1.5)).collect();
        assert_eq!(coverage_rate(&all, truth), 100.0);
        let none: Vec<(f64, f64)> = (0..10).map(|_| (1.5, 2.5)).collect();
        assert_eq!(coverage_rate(&none, truth), 0.0);
        // Constructed fixture: 95 of 100 intervals contain the truth.
        let mut mixed = Vec::new();
        for i in 0..100 {
            if i < 95 {
                mixed.push((0.0, 2.0));
            } else {
                mixed.push((2.0, 3.0));
            }
        }
        assert_eq!(coverage_rate(&mixed, truth), 95.0);
        // Interval order does not matter.
        mixed.reverse();
        assert_eq!(coverage_rate(&mixed, truth), 95.0);
    }

    #[test]
    fn replica_network_matches_design_density() {
        let (net, data) = generate_empirical_replica(42).unwrap();
        assert_eq!(net.n_actors(), 162);
        let d = density(&net);
        assert!((d - 0.162).abs() < 0.015, "replica density {d}");
        assert!(data.y_is_binary());
        let ones = data.x.iter().filter(|&&v| v == 1.0).count();
        assert_eq!(ones, 72);
        // Both outcome classes should be present.
        assert!(data.y.iter().any(|&v| v == 0.0));
        assert!(data.y.iter().any(|&v| v == 1.0));
    }

    #[test]
    fn generated_dataset_is_reproducible() {
        let c = cond(2, 40, 0.1521, 0.14, 1, 0);
        let (net1, data1, _) = generate_dataset(&c, 5).unwrap();
        let (net2, data2, _) = generate_dataset(&c, 5).unwrap();
        assert_eq!(net1, net2);
        assert_eq!(data1, data2);
        let (net3, _, _) = generate_dataset(&c, 6).unwrap();
        assert_ne!(net1, net3);
    }

    #[test]
    fn failed_replications_are_recorded_not_dropped() {
        // A chain whose settings retain too few draws fails per-replication.
        let c = cond(2, 30, 0.0, 0.0, 3, 9);
        let bad_cfg = ChainConfig {
            n_iter: 50,
            burn_in: 10,
            ..ChainConfig::default()
        };
        let report = run_condition(&c, &bad_cfg);
        assert_eq!(report.n_failed, 3);
        assert_eq!(report.replications.len(), 3);
        assert!(report.med.mean_estimate.is_nan());
        let csv = replication_csv(&report);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.contains("retain"));
    }

    #[test]
    fn singleton_grid_equals_run_condition() {
        let c = cond(2, 25, 0.0, 0.0, 2, 3);
        let cfg = ChainConfig {
            n_iter: 400,
            burn_in: 100,
            seed: 0,
            ..ChainConfig::default()
        };
        let single = run_condition(&c, &cfg);
        let grid = run_grid(std::slice::from_ref(&c), &cfg);
        assert_eq!(grid.len(), 1);
        assert_eq!(aggregate_csv(&grid), aggregate_csv(std::slice::from_ref(&single)));
    }

    #[test]
    fn grid_output_is_deterministic() {
        let c = cond(2, 25, 0.0196, 0.14, 2, 17);
        let cfg = ChainConfig {
            n_iter: 400,
            burn_in: 100,
            seed: 0,
            ..ChainConfig::default()
        };
        let a = run_grid(std::slice::from_ref(&c), &cfg);
        let b = run_grid(std::slice::from_ref(&c), &cfg);
        assert_eq!(aggregate_csv(&a), aggregate_csv(&b));
        assert_eq!(replication_csv(&a[0]), replication_csv(&b[0]));
        assert_eq!(plot_data_csv(&a), plot_data_csv(&b));
    }

    #[test]
    fn plot_data_clips_extreme_bias() {
        let mut report = run_condition(
            &cond(2, 25, 0.0, 0.0, 1, 1),
            &ChainConfig {
                n_iter: 400,
                burn_in: 100,
                ..ChainConfig::default()
            },
        );
        report.med.rel_bias_percent = 55.0;
        report.direct.rel_bias_percent = -31.0;
        let plot = plot_data_csv(std::slice::from_ref(&report));
        assert!(plot.contains(",med,20,"));
        assert!(plot.contains(",direct,-20,"));
        let raw = aggregate_csv(std::slice::from_ref(&report));
        assert!(raw.contains(",med,55,"));
    }
}
