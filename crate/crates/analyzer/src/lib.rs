//! Exact probability engine for decryption failures.
//!
//! Noise distributions are computed in multi-limb binary floating point so
//! probabilities far below `2^-1000` keep full relative precision.

pub mod bigprob;
pub mod channel;
mod error;
pub mod montecarlo;
pub mod noise;
pub mod pmf;
pub mod renyi;
pub mod tables;

pub use bigprob::{BigProb, Precision};
pub use channel::{binomial_tail, crossover_probabilities, crossover_probability, dfr_ate, dfr_bch, dfr_scheme, SuperChannel};
pub use error::{AnalyzerError, Result};
pub use montecarlo::{binomial_z, compare, max_abs_z, predict, roundtrips, sample_noise, tv_distance, BinComparison, NoiseHistogram, Prediction, RoundtripStats};
pub use noise::{compression_noise, difference_noise, total_noise, u_noise, Analyzer};
pub use pmf::Pmf;
pub use tables::{converged, evaluate, generate_table, Evaluation, Table, TableGenerator, TableId, TableRow};
