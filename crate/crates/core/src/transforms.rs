//! Isometry operators on latent configurations and the deterministic OLS
//! refit used to verify that the mediation and direct effects are invariant
//! to translation, rotation, and reflection of the latent space.

use crate::error::{Error, Result};
use crate::lsm::LatentConfiguration;
use crate::mediation::mediation_effect;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

const ORTHOGONALITY_TOL: f64 = 1e-10;

/// A distance-preserving map `z -> R z + t` with `R` orthogonal
/// (determinant +1 or -1, covering rotations and reflections).
#[derive(Debug, Clone)]
pub struct Isometry {
    rotation: DMatrix<f64>,
    translation: DVector<f64>,
}

impl Isometry {
    /// Validates that `rotation` is square, orthogonal (to 1e-10), and
    /// matches the translation's length.
    pub fn new(rotation: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        let d = rotation.nrows();
        if rotation.ncols() != d || translation.len() != d {
            return Err(Error::validation(
                "isometry rotation and translation dimensions disagree",
            ));
        }
        let gram = rotation.transpose() * &rotation;
        for i in 0..d {
            for j in 0..d {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (gram[(i, j)] - expect).abs() > ORTHOGONALITY_TOL {
                    return Err(Error::validation(format!(
                        "rotation matrix is not orthogonal: (R'R)[{i},{j}] = {}",
                        gram[(i, j)]
                    )));
                }
            }
        }
        Ok(Isometry {
            rotation,
            translation,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Isometry {
            rotation: DMatrix::identity(dim, dim),
            translation: DVector::zeros(dim),
        }
    }

    pub fn translation(t: &[f64]) -> Self {
        Isometry {
            rotation: DMatrix::identity(t.len(), t.len()),
            translation: DVector::from_column_slice(t),
        }
    }

    /// Reflection about the hyperplane where the last coordinate is zero:
    /// the first `D-1` coordinates are unchanged, the last flips sign.
    pub fn reflection_last_coordinate(dim: usize) -> Self {
        let mut r = DMatrix::identity(dim, dim);
        r[(dim - 1, dim - 1)] = -1.0;
        Isometry {
            rotation: r,
            translation: DVector::zeros(dim),
        }
    }

    /// Planar rotation by `theta` radians (counterclockwise) in dimensions
    /// `(0, 1)`; identity elsewhere.
    pub fn planar_rotation(dim: usize, theta: f64) -> Self {
        let mut r = DMatrix::identity(dim, dim);
        r[(0, 0)] = theta.cos();
        r[(0, 1)] = -theta.sin();
        r[(1, 0)] = theta.sin();
        r[(1, 1)] = theta.cos();
        Isometry {
            rotation: r,
            translation: DVector::zeros(dim),
        }
    }

    /// Haar-distributed random orthogonal matrix (QR of a Gaussian matrix
    /// with sign-corrected diagonal) plus a Gaussian translation.
    pub fn random<R: Rng>(dim: usize, rng: &mut R) -> Self {
        let rotation = haar_orthogonal(dim, rng);
        let translation =
            DVector::from_iterator(dim, (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)));
        Isometry {
            rotation,
            translation,
        }
    }

    pub fn dim(&self) -> usize {
        self.rotation.nrows()
    }

    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.rotation
    }

    pub fn translation_vector(&self) -> &DVector<f64> {
        &self.translation
    }

    /// The isometry applying `self` after `first`:
    /// `x -> R_self (R_first x + t_first) + t_self`.
    pub fn after(&self, first: &Isometry) -> Isometry {
        Isometry {
            rotation: &self.rotation * &first.rotation,
            translation: &self.rotation * &first.translation + &self.translation,
        }
    }
}

/// Haar-distributed random orthogonal matrix via QR with the R-diagonal
/// sign correction.
pub fn haar_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        if r[(k, k)] < 0.0 {
            for i in 0..dim {
                q[(i, k)] = -q[(i, k)];
            }
        }
    }
    q
}

/// Apply `z_i -> R z_i + t` to every actor position.
pub fn apply_isometry(config: &LatentConfiguration, iso: &Isometry) -> Result<LatentConfiguration> {
    let d = config.dim();
    if iso.dim() != d {
        return Err(Error::validation(format!(
            "isometry dimension {} does not match configuration dimension {d}",
            iso.dim()
        )));
    }
    let n = config.n_actors();
    let mut out = Vec::with_capacity(n * d);
    for i in 0..n {
        let zi = DVector::from_column_slice(config.row(i));
        let moved = &iso.rotation * zi + &iso.translation;
        out.extend(moved.iter());
    }
    LatentConfiguration::new(n, d, out)
}

/// OLS path coefficients refit on a fixed configuration.
#[derive(Debug, Clone)]
pub struct PathFit {
    pub a_hat: Vec<f64>,
    pub b_hat: Vec<f64>,
    pub c_hat: f64,
}

impl PathFit {
    pub fn med(&self) -> f64 {
        // Lengths agree by construction.
        mediation_effect(&self.a_hat, &self.b_hat).unwrap()
    }
}

/// Deterministic closed-form least squares: `a_hat` from per-dimension
/// regressions of each position coordinate on `x` (with intercept), and
/// `(b_hat, c_hat)` from the regression of `y` on `(1, z, x)`.
pub fn refit_paths(config: &LatentConfiguration, x: &[f64], y: &[f64]) -> Result<PathFit> {
    let n = config.n_actors();
    let d = config.dim();
    if x.len() != n || y.len() != n {
        return Err(Error::validation(
            "covariate/outcome length does not match the configuration",
        ));
    }
    if n <= d + 2 {
        return Err(Error::validation(format!(
            "need more than D + 2 = {} actors for the refit, got {n}",
            d + 2
        )));
    }
    let mean_x = x.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mean_x) * (v - mean_x)).sum();
    if sxx < 1e-10 {
        return Err(Error::validation(
            "rank-deficient design: covariate x is (numerically) constant",
        ));
    }

    let mut a_hat = Vec::with_capacity(d);
    for k in 0..d {
        let mean_z = (0..n).map(|i| config.get(i, k)).sum::<f64>() / n as f64;
        let sxz: f64 = (0..n)
            .map(|i| (x[i] - mean_x) * (config.get(i, k) - mean_z))
            .sum();
        a_hat.push(sxz / sxx);
    }

    // Outcome regression on (1, z_1..z_D, x) via the normal equations.
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
    let yv = DVector::from_column_slice(y);
    let xtx = design.transpose() * &design;
    let xty = design.transpose() * yv;
    let chol = xtx.cholesky().ok_or_else(|| {
        Error::validation("rank-deficient design: collinear position columns or constant x")
    })?;
    let beta = chol.solve(&xty);

    Ok(PathFit {
        a_hat,
        b_hat: beta.as_slice()[1..=d].to_vec(),
        c_hat: beta[d + 1],
    })
}

/// Absolute change of the refit mediation and direct effects when the
/// configuration is moved by `iso`. Both should be at the solver's noise
/// floor for any isometry.
pub fn invariance_check(
    config: &LatentConfiguration,
    x: &[f64],
    y: &[f64],
    iso: &Isometry,
) -> Result<(f64, f64)> {
    let base = refit_paths(config, x, y)?;
    let moved = refit_paths(&apply_isometry(config, iso)?, x, y)?;
    let delta_med = (moved.med() - base.med()).abs();
    let delta_direct = (moved.c_hat - base.c_hat).abs();
    Ok((delta_med, delta_direct))
}
