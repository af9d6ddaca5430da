//! Special symmetric partitions and the limiting spectral moments of sample
//! covariance matrices built from independent, non-identically distributed
//! entries.
//!
//! * [`partition`]: set partitions, canonical words, the special symmetric
//!   classification and exhaustive counts.
//! * [`census`]: exact circuit counts for a word under the sample covariance
//!   and Wigner link functions.
//! * [`moments`]: limiting moments as sums over special symmetric words.
//! * [`hypergraph`]: the word/hypergraph bijection and its counting identities.
//! * [`surface`]: functions on the unit square used as variance profiles.

pub mod census;
pub mod error;
pub mod hypergraph;
pub mod moments;
pub mod partition;
pub mod surface;

pub use error::{Error, Result};
pub use partition::{Partition, Word};
