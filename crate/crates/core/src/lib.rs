//! Latent-space network mediation analysis.
//!
//! A binary undirected social network is embedded into a low-dimensional
//! Euclidean space; the actors' latent positions act as mediators between a
//! per-actor covariate `X` and an outcome `Y`. The library provides
//!
//! * network ingestion and descriptive statistics ([`net`]),
//! * the latent space model likelihood and dimension-selection diagnostics
//!   ([`lsm`]),
//! * the structural mediation model and its isometry-invariant effect
//!   definitions ([`mediation`], [`transforms`]),
//! * a Metropolis-within-Gibbs sampler producing posterior means and
//!   equal-tail credible intervals ([`sampler`]), and
//! * a Monte Carlo harness for bias/coverage studies ([`simstudy`]).

pub mod error;
pub mod lsm;
pub mod mediation;
pub mod net;
pub mod rng;
pub mod sampler;
pub mod simstudy;
pub mod transforms;

pub use error::{Error, Result};
