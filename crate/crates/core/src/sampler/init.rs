//! Chain initialization: classical multidimensional scaling of shortest-path
//! graph distances for the positions, plus ordinary least squares for the
//! regression blocks.

use crate::error::{Error, Result};
use crate::lsm::LatentConfiguration;
use crate::net::AdjacencyMatrix;
use nalgebra::{DMatrix, DVector};
use std::collections::VecDeque;

/// Breadth-first shortest-path hop distances between all actor pairs.
/// Disconnected pairs get the largest finite distance plus one.
pub fn shortest_path_distances(net: &AdjacencyMatrix) -> Vec<f64> {
    let n = net.n_actors();
    let mut dist = vec![-1.0f64; n * n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        dist[start * n + start] = 0.0;
        queue.clear();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let du = dist[start * n + u];
            for v in 0..n {
                if net.has_edge(u, v) && dist[start * n + v] < 0.0 {
                    dist[start * n + v] = du + 1.0;
                    queue.push_back(v);
                }
            }
        }
    }
    let max_finite = dist.iter().copied().fold(0.0f64, f64::max);
    for d in dist.iter_mut() {
        if *d < 0.0 {
            *d = max_finite + 1.0;
        }
    }
    dist
}

/// Classical (Torgerson) MDS of a symmetric distance matrix into `dim`
/// coordinates. Non-positive eigenvalues contribute zero columns.
pub fn classical_mds(dist: &[f64], n: usize, dim: usize) -> Result<LatentConfiguration> {
    let mut d2 = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = dist[i * n + j];
            d2[(i, j)] = d * d;
        }
    }
    // Double centering: B = -1/2 * J D2 J.
    let row_means: Vec<f64> = (0..n).map(|i| d2.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| {
        -0.5 * (d2[(i, j)] - row_means[i] - row_means[j] + grand)
    });
    let eig = b.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());

    let mut positions = vec![0.0; n * dim];
    for (k, &col) in order.iter().take(dim).enumerate() {
        let lambda = eig.eigenvalues[col];
        if lambda <= 0.0 {
            continue;
        }
        let scale = lambda.sqrt();
        for i in 0..n {
            positions[i * dim + k] = eig.eigenvectors[(i, col)] * scale;
        }
    }
    LatentConfiguration::new(n, dim, positions)
}

/// MDS initialization of the latent positions from graph distances.
pub fn mds_initial_positions(net: &AdjacencyMatrix, dim: usize) -> Result<LatentConfiguration> {
    let dist = shortest_path_distances(net);
    classical_mds(&dist, net.n_actors(), dim)
}

/// OLS estimates used to start the regression blocks.
pub struct OlsInit {
    pub i1: Vec<f64>,
    pub a: Vec<f64>,
    pub sigma1_sq: Vec<f64>,
    pub i2: f64,
    pub b: Vec<f64>,
    pub c_prime: f64,
    pub sigma2_sq: f64,
}

const VARIANCE_FLOOR: f64 = 1e-6;

/// Least-squares fits of the mediator and outcome regressions given a fixed
/// configuration, with residual variances floored away from zero. Falls
/// back to a null start when the outcome design is singular.
pub fn ols_init(config: &LatentConfiguration, x: &[f64], y_eff: &[f64]) -> Result<OlsInit> {
    let n = config.n_actors();
    let d = config.dim();
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mean_x) * (v - mean_x)).sum();
    if sxx < 1e-10 {
        return Err(Error::validation(
            "covariate x has (numerically) zero variance",
        ));
    }

    let mut i1 = Vec::with_capacity(d);
    let mut a = Vec::with_capacity(d);
    let mut sigma1_sq = Vec::with_capacity(d);
    for k in 0..d {
        let mean_z = (0..n).map(|i| config.get(i, k)).sum::<f64>() / nf;
        let sxz: f64 = (0..n)
            .map(|i| (x[i] - mean_x) * (config.get(i, k) - mean_z))
            .sum();
        let slope = sxz / sxx;
        let intercept = mean_z - slope * mean_x;
        let ssr: f64 = (0..n)
            .map(|i| {
                let r = config.get(i, k) - intercept - slope * x[i];
                r * r
            })
            .sum();
        i1.push(intercept);
        a.push(slope);
        sigma1_sq.push((ssr / nf).max(VARIANCE_FLOOR));
    }

    // Outcome regression y_eff on (1, z, x).
    let p = d + 2;
    let design = DMatrix::from_fn(n, p, |i, j| {
        if j == 0 {
            1.0
        } else if j <= d {
            config.get(i, j - 1)
        } else {
            x[i]
        }
    });
    let yv = DVector::from_column_slice(y_eff);
    let xtx = design.transpose() * &design;
    let xty = design.transpose() * &yv;
    let (i2, b, c_prime, sigma2_sq) = match xtx.cholesky() {
        Some(chol) => {
            let beta = chol.solve(&xty);
            let resid = &yv - design * &beta;
            let ssr: f64 = resid.iter().map(|r| r * r).sum();
            (
                beta[0],
                beta.as_slice()[1..=d].to_vec(),
                beta[d + 1],
                (ssr / nf).max(VARIANCE_FLOOR),
            )
        }
        // Singular design (e.g. an MDS column collapsed): null start.
        None => (0.0, vec![0.0; d], 0.0, 1.0),
    };

    Ok(OlsInit {
        i1,
        a,
        sigma1_sq,
        i2,
        b,
        c_prime,
        sigma2_sq,
    })
}
