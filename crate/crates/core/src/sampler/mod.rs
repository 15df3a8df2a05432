//! Metropolis-within-Gibbs sampler for the network mediation model.
//!
//! One iteration sweeps, in order: (1) every latent position by random-walk
//! Metropolis, (2) the mediator intercepts, (3) the outcome intercept,
//! (4) the network intercept by random-walk Metropolis, (5) the
//! covariate-to-position slopes, (6) the position-to-outcome slopes,
//! (7) the direct effect, (8) the mediator residual variances, and (9) the
//! outcome residual variance. The regression and variance blocks are exact
//! conjugate draws; only the two logistic blocks need Metropolis steps.
//! In probit mode a latent-outcome augmentation step runs first and step 9
//! is skipped (the residual variance is fixed at 1).
//!
//! Per-block proposal scales adapt toward target acceptance rates during
//! burn-in and freeze afterwards, so the retained chain is a
//! time-homogeneous Markov chain.

pub mod dists;
pub mod init;
pub mod summary;

use crate::error::{Error, Result};
use crate::lsm::{dyad_log_likelihood, LatentConfiguration};
use crate::mediation::{MediationParams, OutcomeModel};
use crate::net::{density, ActorData, AdjacencyMatrix};
use crate::rng::{stream, STREAM_CHAIN, STREAM_LSM};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use dists::{
    conjugate_normal_draw, sample_inverse_gamma, truncated_normal_lower, truncated_normal_upper,
};
pub use summary::{
    mcse_batch_means, split_rhat, summarize, summarize_scalar, ChainDraws, ParamSummary,
    PosteriorSummary, MIN_RETAINED,
};

/// Target acceptance rate for the vector position proposals.
pub const TARGET_ACCEPT_POSITIONS: f64 = 0.30;
/// Target acceptance rate for the scalar network-intercept proposal.
pub const TARGET_ACCEPT_ALPHA: f64 = 0.44;

/// Chain length, burn-in, seeding, and proposal settings.
#[derive(Debug, Clone)]
pub struct ChainConfig {
    pub n_iter: usize,
    pub burn_in: usize,
    pub seed: u64,
    /// Keep every `thin`-th retained draw.
    pub thin: usize,
    /// Adapt proposal scales during burn-in.
    pub adapt: bool,
    /// Iterations per adaptation window.
    pub adapt_window: usize,
    /// Initial standard deviation of the position random walk.
    pub position_step: f64,
    /// Initial standard deviation of the intercept random walk.
    pub alpha_step: f64,
    /// Clamp the positions at their initial values (step 1 disabled).
    pub fix_positions: bool,
    /// Starting configuration; defaults to classical MDS of graph distances.
    pub init_positions: Option<LatentConfiguration>,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            n_iter: 20_000,
            burn_in: 6_000,
            seed: 0,
            thin: 1,
            adapt: true,
            adapt_window: 50,
            position_step: 0.5,
            alpha_step: 0.3,
            fix_positions: false,
            init_positions: None,
        }
    }
}

impl ChainConfig {
    /// Short desk-scale chain matching the simulation defaults.
    pub fn desk_scale(seed: u64) -> Self {
        ChainConfig {
            n_iter: 5_000,
            burn_in: 2_000,
            seed,
            ..ChainConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_iter == 0 || self.burn_in >= self.n_iter {
            return Err(Error::validation(format!(
                "burn-in {} must be smaller than the chain length {}",
                self.burn_in, self.n_iter
            )));
        }
        if self.thin == 0 {
            return Err(Error::validation("thinning interval must be at least 1"));
        }
        if self.position_step <= 0.0 || self.alpha_step <= 0.0 {
            return Err(Error::validation("proposal step sizes must be positive"));
        }
        if self.adapt_window == 0 {
            return Err(Error::validation("adaptation window must be at least 1"));
        }
        Ok(())
    }
}

/// Priors: independent normals on every coefficient and intercept,
/// independent inverse-Gammas on every residual variance.
#[derive(Debug, Clone)]
pub struct PriorSpec {
    pub coef_sd: f64,
    pub ig_shape: f64,
    pub ig_rate: f64,
}

impl Default for PriorSpec {
    fn default() -> Self {
        PriorSpec {
            coef_sd: 1000.0,
            ig_shape: 0.001,
            ig_rate: 0.001,
        }
    }
}

impl PriorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.coef_sd <= 0.0 || self.ig_shape <= 0.0 || self.ig_rate <= 0.0 {
            return Err(Error::validation("prior hyperparameters must be positive"));
        }
        Ok(())
    }
}

/// Mutable chain state: parameters, positions, augmentation, counters.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub params: MediationParams,
    pub z: LatentConfiguration,
    /// Latent outcomes, present only in probit mode.
    pub y_star: Option<Vec<f64>>,
    pub iteration: usize,
    /// Per-actor proposal scales.
    pub position_scales: Vec<f64>,
    pub alpha_scale: f64,
    /// Post burn-in acceptance counts.
    pub accepted_positions: u64,
    pub attempted_positions: u64,
    pub accepted_alpha: u64,
    pub attempted_alpha: u64,
}

enum Model {
    /// Full mediation model with the given outcome family.
    Mediation(OutcomeModel),
    /// Network-only fit: standard-normal position prior, no regressions.
    NetworkOnly,
}

/// The Metropolis-within-Gibbs engine. Most callers use [`run_chain`];
/// the individual update steps are public so oracle tests can drive single
/// blocks against closed-form or grid posteriors.
pub struct Sampler<'a> {
    net: &'a AdjacencyMatrix,
    x: Vec<f64>,
    y: Vec<f64>,
    model: Model,
    dim: usize,
    n: usize,
    cfg: ChainConfig,
    priors: PriorSpec,
    rng: ChaCha8Rng,
    state: ChainState,
    /// Cached pairwise distances, full symmetric storage.
    dist: Vec<f64>,
    /// Cached per-dyad log-likelihood contributions at the current state.
    dyad_ll: Vec<f64>,
    // Scratch buffers for proposals.
    new_dist: Vec<f64>,
    new_ll: Vec<f64>,
    proposal: Vec<f64>,
    alpha_scratch: Vec<f64>,
    // Window acceptance counters for adaptation.
    window_accept_z: Vec<u32>,
    window_accept_alpha: u32,
}

impl<'a> Sampler<'a> {
    /// Sampler for the full mediation model.
    pub fn new(
        net: &'a AdjacencyMatrix,
        data: &ActorData,
        outcome: OutcomeModel,
        dim: usize,
        cfg: &ChainConfig,
        priors: &PriorSpec,
    ) -> Result<Self> {
        let n = net.n_actors();
        if data.len() != n {
            return Err(Error::validation(format!(
                "network has {n} actors but actor data has {} rows",
                data.len()
            )));
        }
        let mean_x = data.x.iter().sum::<f64>() / n as f64;
        if data
            .x
            .iter()
            .map(|v| (v - mean_x) * (v - mean_x))
            .sum::<f64>()
            < 1e-10
        {
            return Err(Error::validation(
                "covariate x has zero variance; the mediation paths are not identified",
            ));
        }
        if outcome == OutcomeModel::Binary && !data.y_is_binary() {
            return Err(Error::validation(
                "binary outcome requested but y has values outside {0,1}",
            ));
        }
        Self::build(
            net,
            data.x.clone(),
            data.y.clone(),
            Model::Mediation(outcome),
            dim,
            cfg,
            priors,
            stream(cfg.seed, STREAM_CHAIN),
        )
    }

    /// Sampler for the network-only model used by dimension selection:
    /// standard-normal prior on positions, regressions disabled.
    pub fn new_network_only(
        net: &'a AdjacencyMatrix,
        dim: usize,
        cfg: &ChainConfig,
        priors: &PriorSpec,
    ) -> Result<Self> {
        let n = net.n_actors();
        Self::build(
            net,
            vec![0.0; n],
            vec![0.0; n],
            Model::NetworkOnly,
            dim,
            cfg,
            priors,
            stream(cfg.seed, STREAM_LSM),
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        net: &'a AdjacencyMatrix,
        x: Vec<f64>,
        y: Vec<f64>,
        model: Model,
        dim: usize,
        cfg: &ChainConfig,
        priors: &PriorSpec,
        rng: ChaCha8Rng,
    ) -> Result<Self> {
        cfg.validate()?;
        priors.validate()?;
        let n = net.n_actors();
        if dim == 0 || dim >= n {
            return Err(Error::validation(format!(
                "latent dimension must satisfy 1 <= D < N; got D={dim}, N={n}"
            )));
        }

        let z = match &cfg.init_positions {
            Some(c) => {
                if c.n_actors() != n || c.dim() != dim {
                    return Err(Error::validation(
                        "initial positions do not match the network size or dimension",
                    ));
                }
                c.clone()
            }
            None => init::mds_initial_positions(net, dim)?,
        };

        let d = density(net).clamp(1e-4, 1.0 - 1e-4);
        let alpha0 = (d / (1.0 - d)).ln();

        let params = match &model {
            Model::Mediation(outcome) => {
                let y_eff: Vec<f64> = match outcome {
                    OutcomeModel::Continuous => y.clone(),
                    // Signed unit start for the latent outcomes.
                    OutcomeModel::Binary => y.iter().map(|&v| 2.0 * v - 1.0).collect(),
                };
                let ols = init::ols_init(&z, &x, &y_eff)?;
                MediationParams {
                    i1: ols.i1,
                    i2: ols.i2,
                    a: ols.a,
                    b: ols.b,
                    c_prime: ols.c_prime,
                    alpha: alpha0,
                    sigma1_sq: ols.sigma1_sq,
                    sigma2_sq: if matches!(outcome, OutcomeModel::Binary) {
                        1.0
                    } else {
                        ols.sigma2_sq
                    },
                }
            }
            Model::NetworkOnly => {
                let mut p = MediationParams::null(dim);
                p.alpha = alpha0;
                p
            }
        };

        let y_star = match &model {
            Model::Mediation(OutcomeModel::Binary) => {
                Some(y.iter().map(|&v| 2.0 * v - 1.0).collect())
            }
            _ => None,
        };

        let state = ChainState {
            params,
            z,
            y_star,
            iteration: 0,
            position_scales: vec![cfg.position_step; n],
            alpha_scale: cfg.alpha_step,
            accepted_positions: 0,
            attempted_positions: 0,
            accepted_alpha: 0,
            attempted_alpha: 0,
        };

        let mut sampler = Sampler {
            net,
            x,
            y,
            model,
            dim,
            n,
            cfg: cfg.clone(),
            priors: priors.clone(),
            rng,
            state,
            dist: vec![0.0; n * n],
            dyad_ll: vec![0.0; n * n],
            new_dist: vec![0.0; n],
            new_ll: vec![0.0; n],
            proposal: vec![0.0; dim],
            alpha_scratch: vec![0.0; n * n],
            window_accept_z: vec![0; n],
            window_accept_alpha: 0,
        };
        sampler.rebuild_dyad_caches();
        Ok(sampler)
    }

    pub fn state(&self) -> &ChainState {
        &self.state
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Replace the parameter vector (oracle tests clamp blocks this way).
    pub fn set_params(&mut self, params: MediationParams) -> Result<()> {
        params.validate()?;
        if params.dim() != self.dim {
            return Err(Error::validation("parameter dimension mismatch"));
        }
        self.state.params = params;
        self.rebuild_dyad_caches();
        Ok(())
    }

    /// Replace the latent configuration and refresh the dyad caches.
    pub fn set_positions(&mut self, config: LatentConfiguration) -> Result<()> {
        if config.n_actors() != self.n || config.dim() != self.dim {
            return Err(Error::validation("configuration shape mismatch"));
        }
        self.state.z = config;
        self.rebuild_dyad_caches();
        Ok(())
    }

    fn rebuild_dyad_caches(&mut self) {
        let alpha = self.state.params.alpha;
        for i in 0..self.n {
            self.dist[i * self.n + i] = 0.0;
            for j in (i + 1)..self.n {
                let d = self.state.z.distance(i, j);
                let ll = dyad_log_likelihood(self.net.edge(i, j), alpha - d);
                self.dist[i * self.n + j] = d;
                self.dist[j * self.n + i] = d;
                self.dyad_ll[i * self.n + j] = ll;
                self.dyad_ll[j * self.n + i] = ll;
            }
        }
    }

    #[inline]
    fn y_eff(&self, i: usize) -> f64 {
        match self.state.y_star {
            Some(ref ys) => ys[i],
            None => self.y[i],
        }
    }

    /// Log-density terms of actor `i`'s position beyond the network part:
    /// the mediator regression and the actor's outcome contribution.
    /// Constants cancel inside one Metropolis decision and are dropped.
    fn position_prior_outcome_term(&self, i: usize, zi: &[f64]) -> f64 {
        let p = &self.state.params;
        let mut t = 0.0;
        match self.model {
            Model::NetworkOnly => {
                // Standard-normal prior on each coordinate.
                for &v in zi {
                    t -= 0.5 * v * v;
                }
            }
            Model::Mediation(_) => {
                let xi = self.x[i];
                let mut mean_y = p.i2 + p.c_prime * xi;
                for k in 0..self.dim {
                    let r = zi[k] - p.i1[k] - p.a[k] * xi;
                    t -= 0.5 * r * r / p.sigma1_sq[k];
                    mean_y += p.b[k] * zi[k];
                }
                let ry = self.y_eff(i) - mean_y;
                t -= 0.5 * ry * ry / p.sigma2_sq;
            }
        }
        t
    }

    /// Step 1: random-walk Metropolis update of every actor's position.
    pub fn update_positions(&mut self) {
        if self.cfg.fix_positions {
            return;
        }
        let n = self.n;
        let alpha = self.state.params.alpha;
        for i in 0..n {
            let scale = self.state.position_scales[i];
            for k in 0..self.dim {
                let noise: f64 = StandardNormal.sample(&mut self.rng);
                self.proposal[k] = self.state.z.get(i, k) + scale * noise;
            }
            // Network part: all dyads incident to actor i.
            let mut delta = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let d_new = crate::lsm::distance_unchecked(&self.proposal, self.state.z.row(j));
                let ll_new = dyad_log_likelihood(self.net.edge(i, j), alpha - d_new);
                self.new_dist[j] = d_new;
                self.new_ll[j] = ll_new;
                delta += ll_new - self.dyad_ll[i * n + j];
            }
            // Structural part.
            delta += self.position_prior_outcome_term(i, &self.proposal);
            delta -= self.position_prior_outcome_term(i, self.state.z.row(i));

            // A non-finite delta rejects naturally (both comparisons false).
            let accept = delta >= 0.0 || self.rng.random::<f64>().ln() < delta;
            if accept {
                self.state.z.set_row(i, &self.proposal);
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    self.dist[i * n + j] = self.new_dist[j];
                    self.dist[j * n + i] = self.new_dist[j];
                    self.dyad_ll[i * n + j] = self.new_ll[j];
                    self.dyad_ll[j * n + i] = self.new_ll[j];
                }
                self.window_accept_z[i] += 1;
                if self.state.iteration > self.cfg.burn_in {
                    self.state.accepted_positions += 1;
                }
            }
            if self.state.iteration > self.cfg.burn_in {
                self.state.attempted_positions += 1;
            }
        }
    }

    /// Step 4: random-walk Metropolis update of the network intercept.
    pub fn update_alpha(&mut self) {
        let n = self.n;
        let alpha = self.state.params.alpha;
        let noise: f64 = StandardNormal.sample(&mut self.rng);
        let proposed = alpha + self.state.alpha_scale * noise;

        let mut current_ll = 0.0;
        let mut proposed_ll = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                current_ll += self.dyad_ll[i * n + j];
                let ll =
                    dyad_log_likelihood(self.net.edge(i, j), proposed - self.dist[i * n + j]);
                self.alpha_scratch[i * n + j] = ll;
                proposed_ll += ll;
            }
        }
        let tau_sq = self.priors.coef_sd * self.priors.coef_sd;
        let delta =
            proposed_ll - current_ll - 0.5 * (proposed * proposed - alpha * alpha) / tau_sq;
        let accept = delta >= 0.0 || self.rng.random::<f64>().ln() < delta;
        if accept {
            self.state.params.alpha = proposed;
            for i in 0..n {
                for j in (i + 1)..n {
                    let ll = self.alpha_scratch[i * n + j];
                    self.dyad_ll[i * n + j] = ll;
                    self.dyad_ll[j * n + i] = ll;
                }
            }
            self.window_accept_alpha += 1;
            if self.state.iteration > self.cfg.burn_in {
                self.state.accepted_alpha += 1;
            }
        }
        if self.state.iteration > self.cfg.burn_in {
            self.state.attempted_alpha += 1;
        }
    }

    /// Steps 2-3 and 5-7: exact conjugate draws for the intercepts, the
    /// slope vectors, and the direct effect.
    pub fn update_regression_blocks(&mut self) -> Result<()> {
        if matches!(self.model, Model::NetworkOnly) {
            return Ok(());
        }
        self.update_intercept_blocks();
        self.update_slope_blocks()
    }

    /// Steps 2-3: mediator intercepts (independent across dimensions) and
    /// the outcome intercept.
    fn update_intercept_blocks(&mut self) {
        let n = self.n;
        let nf = n as f64;
        let tau = self.priors.coef_sd;
        for k in 0..self.dim {
            let s1 = self.state.params.sigma1_sq[k];
            let a_k = self.state.params.a[k];
            let mut sum_r = 0.0;
            for i in 0..n {
                sum_r += self.state.z.get(i, k) - a_k * self.x[i];
            }
            self.state.params.i1[k] =
                conjugate_normal_draw(nf / s1, sum_r / s1, tau, &mut self.rng);
        }
        let s2 = self.state.params.sigma2_sq;
        let mut sum_r = 0.0;
        for i in 0..n {
            sum_r += self.y_eff(i) - self.outcome_linear_no_intercept(i);
        }
        self.state.params.i2 = conjugate_normal_draw(nf / s2, sum_r / s2, tau, &mut self.rng);
    }

    /// Steps 5-7: covariate-to-position slopes, the jointly drawn
    /// position-to-outcome slope vector, and the direct effect.
    fn update_slope_blocks(&mut self) -> Result<()> {
        let n = self.n;
        let tau = self.priors.coef_sd;
        for k in 0..self.dim {
            let s1 = self.state.params.sigma1_sq[k];
            let i1_k = self.state.params.i1[k];
            let mut sum_g2 = 0.0;
            let mut sum_gr = 0.0;
            for i in 0..n {
                let g = self.x[i];
                sum_g2 += g * g;
                sum_gr += g * (self.state.z.get(i, k) - i1_k);
            }
            self.state.params.a[k] =
                conjugate_normal_draw(sum_g2 / s1, sum_gr / s1, tau, &mut self.rng);
        }
        self.draw_b_block()?;
        let s2 = self.state.params.sigma2_sq;
        let mut sum_g2 = 0.0;
        let mut sum_gr = 0.0;
        for i in 0..n {
            let g = self.x[i];
            let r = self.y_eff(i) - self.state.params.i2 - self.b_dot_z(i);
            sum_g2 += g * g;
            sum_gr += g * r;
        }
        self.state.params.c_prime =
            conjugate_normal_draw(sum_g2 / s2, sum_gr / s2, tau, &mut self.rng);
        Ok(())
    }

    #[inline]
    fn b_dot_z(&self, i: usize) -> f64 {
        let zi = self.state.z.row(i);
        self.state
            .params
            .b
            .iter()
            .zip(zi.iter())
            .map(|(b, z)| b * z)
            .sum()
    }

    #[inline]
    fn outcome_linear_no_intercept(&self, i: usize) -> f64 {
        self.b_dot_z(i) + self.state.params.c_prime * self.x[i]
    }

    /// Joint multivariate-normal draw of the position-to-outcome slopes:
    /// precision `Z'Z / sigma2 + I / tau^2`, drawn as `mean + L^-T eps`.
    fn draw_b_block(&mut self) -> Result<()> {
        let d = self.dim;
        let n = self.n;
        let s2 = self.state.params.sigma2_sq;
        let tau_sq = self.priors.coef_sd * self.priors.coef_sd;

        let mut ztz = DMatrix::zeros(d, d);
        let mut ztu = DVector::zeros(d);
        for i in 0..n {
            let zi = self.state.z.row(i);
            let u = self.y_eff(i) - self.state.params.i2 - self.state.params.c_prime * self.x[i];
            for r in 0..d {
                ztu[r] += zi[r] * u;
                for c in r..d {
                    ztz[(r, c)] += zi[r] * zi[c];
                }
            }
        }
        for r in 0..d {
            for c in 0..r {
                ztz[(r, c)] = ztz[(c, r)];
            }
        }
        let mut precision = ztz / s2;
        for k in 0..d {
            precision[(k, k)] += 1.0 / tau_sq;
        }
        let rhs = ztu / s2;
        // The proper prior makes the precision strictly positive definite;
        // a failure here means the state degenerated numerically.
        let chol = precision.cholesky().ok_or_else(|| {
            Error::Numerical(format!(
                "singular slope-block precision at iteration {}",
                self.state.iteration
            ))
        })?;
        let mean = chol.solve(&rhs);

        let l = chol.l();
        let mut w = vec![0.0f64; d];
        for item in w.iter_mut() {
            *item = StandardNormal.sample(&mut self.rng);
        }
        // Back substitution: solve L^T v = eps.
        for row in (0..d).rev() {
            let mut acc = w[row];
            for k in (row + 1)..d {
                acc -= l[(k, row)] * w[k];
            }
            w[row] = acc / l[(row, row)];
        }
        for k in 0..d {
            self.state.params.b[k] = mean[k] + w[k];
        }
        Ok(())
    }

    /// Steps 8-9: inverse-Gamma draws for the residual variances. The
    /// outcome variance is skipped in probit mode (fixed at 1).
    pub fn update_variances(&mut self) -> Result<()> {
        if matches!(self.model, Model::NetworkOnly) {
            return Ok(());
        }
        let n = self.n;
        let shape = self.priors.ig_shape + n as f64 / 2.0;

        for k in 0..self.dim {
            let i1_k = self.state.params.i1[k];
            let a_k = self.state.params.a[k];
            let mut ssr = 0.0;
            for i in 0..n {
                let r = self.state.z.get(i, k) - i1_k - a_k * self.x[i];
                ssr += r * r;
            }
            if !ssr.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite mediator residual sum at iteration {}",
                    self.state.iteration
                )));
            }
            self.state.params.sigma1_sq[k] =
                sample_inverse_gamma(shape, self.priors.ig_rate + 0.5 * ssr, &mut self.rng);
        }

        if matches!(self.model, Model::Mediation(OutcomeModel::Binary)) {
            return Ok(());
        }
        let mut ssr = 0.0;
        for i in 0..n {
            let r = self.y_eff(i) - self.state.params.i2 - self.outcome_linear_no_intercept(i);
            ssr += r * r;
        }
        if !ssr.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite outcome residual sum at iteration {}",
                self.state.iteration
            )));
        }
        self.state.params.sigma2_sq =
            sample_inverse_gamma(shape, self.priors.ig_rate + 0.5 * ssr, &mut self.rng);
        Ok(())
    }

    /// Probit augmentation: draw each latent outcome from the normal around
    /// its linear predictor truncated to the side implied by the observed
    /// binary outcome.
    pub fn update_latent_outcomes(&mut self) -> Result<()> {
        if self.state.y_star.is_none() {
            return Ok(());
        }
        let mut y_star = self.state.y_star.take().unwrap();
        for i in 0..self.n {
            let mean = self.state.params.i2 + self.outcome_linear_no_intercept(i);
            if !mean.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite probit predictor at iteration {}",
                    self.state.iteration
                )));
            }
            y_star[i] = if self.y[i] == 1.0 {
                truncated_normal_lower(mean, 1.0, 0.0, &mut self.rng)
            } else {
                truncated_normal_upper(mean, 1.0, 0.0, &mut self.rng)
            };
        }
        self.state.y_star = Some(y_star);
        Ok(())
    }

    /// Multiplicative scale adaptation toward the target acceptance rates.
    /// Active only during burn-in; scales freeze afterwards.
    pub fn adapt_step_sizes(&mut self) {
        let it = self.state.iteration;
        if it == 0 || it % self.cfg.adapt_window != 0 {
            return;
        }
        let adapting = self.cfg.adapt && it <= self.cfg.burn_in;
        let window = self.cfg.adapt_window as f64;
        if adapting && !self.cfg.fix_positions {
            for i in 0..self.n {
                let rate = f64::from(self.window_accept_z[i]) / window;
                self.state.position_scales[i] =
                    adapted_scale(self.state.position_scales[i], rate, TARGET_ACCEPT_POSITIONS);
            }
        }
        if adapting {
            let rate = f64::from(self.window_accept_alpha) / window;
            self.state.alpha_scale =
                adapted_scale(self.state.alpha_scale, rate, TARGET_ACCEPT_ALPHA);
        }
        self.window_accept_z.iter_mut().for_each(|c| *c = 0);
        self.window_accept_alpha = 0;
    }

    /// One full iteration in the appendix order.
    pub fn step(&mut self) -> Result<()> {
        self.state.iteration += 1;
        self.update_latent_outcomes()?;
        self.update_positions();
        match self.model {
            Model::NetworkOnly => {
                self.update_alpha();
            }
            Model::Mediation(_) => {
                self.update_intercept_blocks();
                self.update_alpha();
                self.update_slope_blocks()?;
                self.update_variances()?;
            }
        }
        self.adapt_step_sizes();
        Ok(())
    }

    fn check_finite(&self) -> Result<()> {
        let p = &self.state.params;
        let finite = p.alpha.is_finite()
            && p.i2.is_finite()
            && p.c_prime.is_finite()
            && p.sigma2_sq.is_finite()
            && p.sigma2_sq > 0.0
            && p.i1.iter().all(|v| v.is_finite())
            && p.a.iter().all(|v| v.is_finite())
            && p.b.iter().all(|v| v.is_finite())
            && p.sigma1_sq.iter().all(|v| v.is_finite() && *v > 0.0)
            && self.state.z.as_slice().iter().all(|v| v.is_finite());
        if finite {
            Ok(())
        } else {
            Err(Error::Numerical(format!(
                "non-finite chain state at iteration {}",
                self.state.iteration
            )))
        }
    }

    fn draw_columns(dim: usize) -> Vec<String> {
        let mut cols = Vec::new();
        for k in 1..=dim {
            cols.push(format!("i1_{k}"));
        }
        cols.push("i2".into());
        for k in 1..=dim {
            cols.push(format!("a_{k}"));
        }
        for k in 1..=dim {
            cols.push(format!("b_{k}"));
        }
        cols.push("c_prime".into());
        cols.push("alpha".into());
        for k in 1..=dim {
            cols.push(format!("sigma1_sq_{k}"));
        }
        cols.push("sigma2_sq".into());
        cols.push("med".into());
        cols.push("tot".into());
        cols
    }

    fn record_row(&self) -> Vec<f64> {
        let p = &self.state.params;
        let mut row = Vec::with_capacity(4 * self.dim + 6);
        row.extend_from_slice(&p.i1);
        row.push(p.i2);
        row.extend_from_slice(&p.a);
        row.extend_from_slice(&p.b);
        row.push(p.c_prime);
        row.push(p.alpha);
        row.extend_from_slice(&p.sigma1_sq);
        row.push(p.sigma2_sq);
        // Derived draws are computed per iteration so the posterior
        // dependence between the two slope vectors is respected.
        let med: f64 = p.a.iter().zip(p.b.iter()).map(|(a, b)| a * b).sum();
        row.push(med);
        row.push(med + p.c_prime);
        row
    }

    /// Run the full chain, collect every iteration's parameter record, and
    /// summarize the retained part at the 95% level.
    pub fn run(&mut self) -> Result<(ChainDraws, PosteriorSummary)> {
        let retained = (self.cfg.n_iter - self.cfg.burn_in).div_ceil(self.cfg.thin);
        if retained < MIN_RETAINED {
            return Err(Error::validation(format!(
                "chain settings retain only {retained} draws; need at least {MIN_RETAINED}"
            )));
        }
        let mut rows = Vec::with_capacity(self.cfg.n_iter);
        for _ in 0..self.cfg.n_iter {
            self.step()?;
            self.check_finite()?;
            rows.push(self.record_row());
        }
        let draws = ChainDraws {
            columns: Self::draw_columns(self.dim),
            rows,
        };
        let mut summary = summarize(&draws, self.cfg.burn_in, self.cfg.thin, 0.95)?;
        summary.accept_positions = (self.state.attempted_positions > 0)
            .then(|| self.state.accepted_positions as f64 / self.state.attempted_positions as f64);
        summary.accept_alpha = (self.state.attempted_alpha > 0)
            .then(|| self.state.accepted_alpha as f64 / self.state.attempted_alpha as f64);
        if !self.cfg.fix_positions && summary.accept_positions == Some(0.0) {
            summary
                .warnings
                .push("position proposals were never accepted after burn-in".into());
        }
        if summary.accept_alpha == Some(0.0) {
            summary
                .warnings
                .push("network intercept proposals were never accepted after burn-in".into());
        }
        if summary.rhat_med.is_finite() && summary.rhat_med > 1.1 {
            summary.warnings.push(format!(
                "split R-hat of the mediation effect is {:.3} (> 1.1); consider a longer chain",
                summary.rhat_med
            ));
        }
        Ok((draws, summary))
    }
}

/// Monotone multiplicative adaptation rule: grow the scale when the
/// acceptance rate exceeds the target, shrink it otherwise.
pub fn adapted_scale(scale: f64, rate: f64, target: f64) -> f64 {
    (scale * (rate - target).exp()).clamp(1e-6, 1e3)
}

/// Run the full mediation chain on a network and aligned actor data.
pub fn run_chain(
    net: &AdjacencyMatrix,
    data: &ActorData,
    outcome: OutcomeModel,
    dim: usize,
    cfg: &ChainConfig,
    priors: &PriorSpec,
) -> Result<(ChainDraws, PosteriorSummary)> {
    Sampler::new(net, data, outcome, dim, cfg, priors)?.run()
}

/// Result of a network-only fit: posterior-mean positions and intercept.
#[derive(Debug, Clone)]
pub struct LsmChainRun {
    pub mean_config: LatentConfiguration,
    pub mean_alpha: f64,
    pub accept_positions: f64,
    pub accept_alpha: f64,
}

/// Fit the latent space model alone (standard-normal position prior, no
/// mediation paths) and return posterior means of positions and intercept.
pub fn run_lsm_chain(
    net: &AdjacencyMatrix,
    dim: usize,
    cfg: &ChainConfig,
    priors: &PriorSpec,
) -> Result<LsmChainRun> {
    let mut sampler = Sampler::new_network_only(net, dim, cfg, priors)?;
    let n = net.n_actors();
    let mut z_sum = vec![0.0; n * dim];
    let mut alpha_sum = 0.0;
    let mut kept = 0usize;
    for it in 1..=cfg.n_iter {
        sampler.step()?;
        sampler.check_finite()?;
        if it > cfg.burn_in && (it - cfg.burn_in - 1) % cfg.thin == 0 {
            for (acc, v) in z_sum.iter_mut().zip(sampler.state.z.as_slice()) {
                *acc += v;
            }
            alpha_sum += sampler.state.params.alpha;
            kept += 1;
        }
    }
    if kept == 0 {
        return Err(Error::validation("no retained iterations"));
    }
    for v in z_sum.iter_mut() {
        *v /= kept as f64;
    }
    let st = &sampler.state;
    Ok(LsmChainRun {
        mean_config: LatentConfiguration::new(n, dim, z_sum)?,
        mean_alpha: alpha_sum / kept as f64,
        accept_positions: if st.attempted_positions > 0 {
            st.accepted_positions as f64 / st.attempted_positions as f64
        } else {
            f64::NAN
        },
        accept_alpha: if st.attempted_alpha > 0 {
            st.accepted_alpha as f64 / st.attempted_alpha as f64
        } else {
            f64::NAN
        },
    })
}
