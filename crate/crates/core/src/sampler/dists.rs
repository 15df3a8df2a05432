//! Sampling primitives used by the Gibbs blocks.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// Draw from the conjugate normal posterior of a scalar coefficient.
///
/// For a likelihood `r_i ~ N(theta * g_i, sigma^2)` and prior
/// `theta ~ N(0, prior_sd^2)`, the full conditional is normal with
/// precision `sum(g^2)/sigma^2 + 1/prior_sd^2` and mean
/// `(sum(g r)/sigma^2) / precision`. Callers pass the two data sums already
/// divided by `sigma^2`; with no data both are zero and this reduces to a
/// prior draw.
pub fn conjugate_normal_draw<R: Rng>(
    data_precision: f64,
    data_weighted_sum: f64,
    prior_sd: f64,
    rng: &mut R,
) -> f64 {
    let precision = data_precision + 1.0 / (prior_sd * prior_sd);
    let mean = data_weighted_sum / precision;
    let noise: f64 = StandardNormal.sample(rng);
    mean + noise / precision.sqrt()
}

/// Draw from an inverse-Gamma with the given shape and rate: the
/// reciprocal of a Gamma(shape, rate) draw.
pub fn sample_inverse_gamma<R: Rng>(shape: f64, rate: f64, rng: &mut R) -> f64 {
    // rand_distr's Gamma is shape/scale; Gamma(shape, rate) has scale 1/rate.
    let g = Gamma::new(shape, 1.0 / rate).expect("inverse-gamma parameters must be positive");
    let draw: f64 = g.sample(rng);
    // Guard against a zero draw underflowing the reciprocal.
    1.0 / draw.max(f64::MIN_POSITIVE)
}

/// Draw from `N(mean, sd^2)` truncated to `[lower, inf)`.
///
/// Uses plain rejection when the bound is not far into the upper tail and
/// the shifted-exponential rejection of Robert (1995) otherwise, so draws
/// stay robust even when the bound is many standard deviations above the
/// mean.
pub fn truncated_normal_lower<R: Rng>(mean: f64, sd: f64, lower: f64, rng: &mut R) -> f64 {
    let alpha = (lower - mean) / sd;
    mean + sd * standard_truncated_lower(alpha, rng)
}

/// Draw from `N(mean, sd^2)` truncated to `(-inf, upper]`.
pub fn truncated_normal_upper<R: Rng>(mean: f64, sd: f64, upper: f64, rng: &mut R) -> f64 {
    let alpha = (mean - upper) / sd;
    mean - sd * standard_truncated_lower(alpha, rng)
}

/// Standard normal truncated to `[alpha, inf)`.
fn standard_truncated_lower<R: Rng>(alpha: f64, rng: &mut R) -> f64 {
    if alpha < 0.45 {
        // Acceptance probability is at least ~1/3 here.
        loop {
            let z: f64 = StandardNormal.sample(rng);
            if z >= alpha {
                return z;
            }
        }
    } else {
        let lambda = 0.5 * (alpha + (alpha * alpha + 4.0).sqrt());
        loop {
            let u: f64 = rng.random();
            let z = alpha - (1.0 - u).ln() / lambda;
            let d = z - lambda;
            let v: f64 = rng.random();
            if v <= (-0.5 * d * d).exp() {
                return z;
            }
        }
    }
}
