//! Monte Carlo ensembles for sample covariance matrices `S = X X^T` with
//! independent entries: IID, sparse Bernoulli, two-point triangular arrays,
//! truncated heavy tails and variance profiles.
//!
//! Every replicate draws from its own ChaCha8 stream derived from
//! `(seed, replicate)`, so reports are reproducible and independent of how
//! replicates are scheduled across threads.

pub mod config;
pub mod error;
pub mod experiment;
pub mod sample;
pub mod spectrum;

pub use config::{EnsembleConfig, Family, HistogramSpec, Profile, Truncation};
pub use error::{Result, SimError};
pub use experiment::{run_experiment, ExperimentReport, MomentStat, SpectralSample};
pub use sample::sample_matrix;
pub use spectrum::{eigenvalues, empirical_moments, histogram, Histogram};
