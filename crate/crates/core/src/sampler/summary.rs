//! Chain storage, posterior summaries, and convergence diagnostics.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Minimum number of retained draws a summary is allowed to use.
pub const MIN_RETAINED: usize = 100;

/// One row per iteration, one column per scalar parameter plus the derived
/// `med` and `tot` draws.
#[derive(Debug, Clone)]
pub struct ChainDraws {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ChainDraws {
    pub fn n_iterations(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column across the retained (post burn-in, thinned)
    /// iterations.
    pub fn retained_column(&self, name: &str, burn_in: usize, thin: usize) -> Result<Vec<f64>> {
        let idx = self
            .column_index(name)
            .ok_or_else(|| Error::validation(format!("no draw column named '{name}'")))?;
        Ok(self
            .rows
            .iter()
            .skip(burn_in)
            .step_by(thin.max(1))
            .map(|r| r[idx])
            .collect())
    }

    /// CSV with a header row; only retained iterations are written.
    pub fn to_csv(&self, burn_in: usize, thin: usize) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in self.rows.iter().skip(burn_in).step_by(thin.max(1)) {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                out.push_str(&format!("{v}"));
                first = false;
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<ChainDraws> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse(1, "empty draws file"))?;
        let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row: Vec<f64> = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::parse(lineno + 2, format!("bad value '{f}'")))
                })
                .collect::<Result<_>>()?;
            if row.len() != columns.len() {
                return Err(Error::parse(
                    lineno + 2,
                    format!("{} fields, expected {}", row.len(), columns.len()),
                ));
            }
            rows.push(row);
        }
        Ok(ChainDraws { columns, rows })
    }
}

/// Posterior mean and equal-tail credible interval of one scalar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub mean: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
}

/// Posterior summary of a mediation chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosteriorSummary {
    pub i1: Vec<ParamSummary>,
    pub i2: ParamSummary,
    pub alpha: ParamSummary,
    pub a: Vec<ParamSummary>,
    pub b: Vec<ParamSummary>,
    pub c_prime: ParamSummary,
    pub sigma1_sq: Vec<ParamSummary>,
    pub sigma2_sq: ParamSummary,
    pub med: ParamSummary,
    pub tot: ParamSummary,
    /// Credible level of the equal-tail intervals.
    pub level: f64,
    /// Retained draw count after burn-in and thinning.
    pub n_retained: usize,
    /// Post burn-in acceptance rates; absent when re-summarizing a draws
    /// file that carries no chain metadata.
    pub accept_positions: Option<f64>,
    pub accept_alpha: Option<f64>,
    /// Split-chain potential scale reduction of the derived med draws.
    pub rhat_med: f64,
    pub warnings: Vec<String>,
}

/// Empirical quantile with linear interpolation of order statistics.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let m = sorted.len();
    if m == 1 {
        return sorted[0];
    }
    let h = (m - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= m {
        sorted[m - 1]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Mean plus equal-tail interval of a set of draws.
pub fn summarize_scalar(values: &[f64], level: f64) -> ParamSummary {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tail = (1.0 - level) / 2.0;
    ParamSummary {
        mean,
        ci_lower: quantile(&sorted, tail),
        ci_upper: quantile(&sorted, 1.0 - tail),
    }
}

/// Split-chain potential scale reduction factor on one set of retained
/// draws: the chain is split in half and the usual between/within variance
/// ratio computed. Values near 1 indicate the halves agree.
pub fn split_rhat(values: &[f64]) -> f64 {
    let m = values.len() / 2;
    if m < 2 {
        return f64::NAN;
    }
    let halves = [&values[..m], &values[m..2 * m]];
    let means: Vec<f64> = halves
        .iter()
        .map(|h| h.iter().sum::<f64>() / m as f64)
        .collect();
    let vars: Vec<f64> = halves
        .iter()
        .zip(&means)
        .map(|(h, mu)| h.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / (m - 1) as f64)
        .collect();
    let w = 0.5 * (vars[0] + vars[1]);
    let grand = 0.5 * (means[0] + means[1]);
    let b = m as f64
        * ((means[0] - grand) * (means[0] - grand) + (means[1] - grand) * (means[1] - grand));
    if w <= 0.0 {
        return 1.0;
    }
    let var_plus = (m - 1) as f64 / m as f64 * w + b / m as f64;
    (var_plus / w).sqrt()
}

/// Monte Carlo standard error of the mean of a (possibly autocorrelated)
/// chain, by non-overlapping batch means.
pub fn mcse_batch_means(values: &[f64], n_batches: usize) -> f64 {
    let k = n_batches.max(2).min(values.len());
    let batch = values.len() / k;
    if batch == 0 {
        return f64::NAN;
    }
    let means: Vec<f64> = (0..k)
        .map(|b| values[b * batch..(b + 1) * batch].iter().sum::<f64>() / batch as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / k as f64;
    let var = means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>() / (k - 1) as f64;
    (var / k as f64).sqrt()
}

/// Summarize a chain at a credible level, discarding `burn_in` leading
/// iterations and keeping every `thin`-th of the rest.
pub fn summarize(
    draws: &ChainDraws,
    burn_in: usize,
    thin: usize,
    level: f64,
) -> Result<PosteriorSummary> {
    if !(0.0..1.0).contains(&level) || level <= 0.0 {
        return Err(Error::validation(format!(
            "credible level must be in (0,1), got {level}"
        )));
    }
    if draws.n_iterations() <= burn_in {
        return Err(Error::validation(format!(
            "chain of {} iterations cannot drop a burn-in of {burn_in}",
            draws.n_iterations()
        )));
    }
    let retained_med = draws.retained_column("med", burn_in, thin)?;
    let n_retained = retained_med.len();
    if n_retained < MIN_RETAINED {
        return Err(Error::validation(format!(
            "only {n_retained} retained draws; need at least {MIN_RETAINED}"
        )));
    }

    let dim = draws
        .columns
        .iter()
        .filter(|c| c.starts_with("a_"))
        .count();
    if dim == 0 {
        return Err(Error::validation("draws are missing the a_* columns"));
    }
    let summarize_col = |name: &str| -> Result<ParamSummary> {
        Ok(summarize_scalar(
            &draws.retained_column(name, burn_in, thin)?,
            level,
        ))
    };
    let summarize_vec = |prefix: &str| -> Result<Vec<ParamSummary>> {
        (1..=dim)
            .map(|k| summarize_col(&format!("{prefix}_{k}")))
            .collect()
    };

    Ok(PosteriorSummary {
        i1: summarize_vec("i1")?,
        i2: summarize_col("i2")?,
        alpha: summarize_col("alpha")?,
        a: summarize_vec("a")?,
        b: summarize_vec("b")?,
        c_prime: summarize_col("c_prime")?,
        sigma1_sq: summarize_vec("sigma1_sq")?,
        sigma2_sq: summarize_col("sigma2_sq")?,
        med: summarize_scalar(&retained_med, level),
        tot: summarize_col("tot")?,
        level,
        n_retained,
        accept_positions: None,
        accept_alpha: None,
        rhat_med: split_rhat(&retained_med),
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn constant_chain_is_degenerate() {
        let s = summarize_scalar(&[3.0; 500], 0.95);
        assert_eq!(s.mean, 3.0);
        assert_eq!(s.ci_lower, 3.0);
        assert_eq!(s.ci_upper, 3.0);
    }

    #[test]
    fn iid_normal_pseudo_chain_has_nominal_interval() {
        let mut rng = crate::rng::stream(157, 9);
        let values: Vec<f64> = (0..14_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let s = summarize_scalar(&values, 0.95);
        assert!((s.ci_lower + 1.96).abs() < 0.05, "lower {}", s.ci_lower);
        assert!((s.ci_upper - 1.96).abs() < 0.05, "upper {}", s.ci_upper);
        assert!(s.mean.abs() < 0.03);
    }

    #[test]
    fn retained_count_matches_the_chain_settings() {
        // 20000 iterations minus a 6000 burn-in leaves 14000 retained draws.
        let columns = vec!["a_1".into(), "med".into(), "tot".into()];
        let rows: Vec<Vec<f64>> = (0..20_000).map(|i| vec![i as f64, 0.0, 0.0]).collect();
        let draws = ChainDraws { columns, rows };
        assert_eq!(draws.retained_column("med", 6000, 1).unwrap().len(), 14_000);
    }

    #[test]
    fn insufficient_retained_draws_is_an_error() {
        let columns = vec!["a_1".into(), "med".into(), "tot".into()];
        let rows: Vec<Vec<f64>> = (0..120).map(|_| vec![0.0, 0.0, 0.0]).collect();
        let draws = ChainDraws { columns, rows };
        assert!(summarize(&draws, 100, 1, 0.95).is_err());
    }

    #[test]
    fn quantile_interpolates_linearly() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert!((quantile(&v, 0.25) - 1.75).abs() < 1e-15);
    }

    #[test]
    fn split_rhat_near_one_for_stationary_noise() {
        let mut rng = crate::rng::stream(163, 9);
        let values: Vec<f64> = (0..4000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let r = split_rhat(&values);
        assert!((r - 1.0).abs() < 0.05, "rhat {r}");
    }

    #[test]
    fn split_rhat_flags_a_drifting_chain() {
        let values: Vec<f64> = (0..4000).map(|i| i as f64 / 400.0).collect();
        assert!(split_rhat(&values) > 1.5);
    }

    #[test]
    fn csv_round_trip() {
        let draws = ChainDraws {
            columns: vec!["a_1".into(), "med".into()],
            rows: vec![vec![0.125, -3.5], vec![1.0, 0.0625]],
        };
        let text = draws.to_csv(0, 1);
        let back = ChainDraws::from_csv(&text).unwrap();
        assert_eq!(back.columns, draws.columns);
        assert_eq!(back.rows, draws.rows);
    }
}
