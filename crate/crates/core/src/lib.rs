//! Distributional distance between stationary ergodic time series.
//!
//! The empirical distance `d̂(x, y)` compares the frequencies of every word
//! (discrete samples) or every dyadic cell of every window length (real
//! samples), weighting length `k` by `w_k = 1/(k(k+1))`. It converges to the
//! distance between the generating processes for any pair of stationary
//! ergodic sources, with no mixing or memory assumptions, and costs
//! `O(n polylog n)` through a suffix array.
//!
//! On top of it sit the procedures that stay consistent under those weak
//! assumptions: three-sample classification, clustering with a known number of
//! groups, change-point estimation, and tests against explicit model sets.
//! There is deliberately no test of whether two samples share a source: no
//! such test is consistent for this class of processes.
//!
//! ```
//! use ergodist::{dd_discrete, Sample, Truncation};
//!
//! let x = Sample::binary("0101010101").unwrap();
//! let y = Sample::binary("0011001100").unwrap();
//! let d = dd_discrete(&x, &y, &Truncation::words(3)).unwrap();
//! assert!(d.value > 0.0 && d.value <= 1.0);
//! ```

pub mod changepoint;
pub mod classify;
pub mod cli;
pub mod cluster;
pub mod distance;
pub mod error;
pub mod hyptest;
pub mod index;
pub mod processes;
pub mod quantize;
pub mod sample;

pub use changepoint::{
    list_changepoints, multi_changepoint_known_k, multi_changepoint_known_r, score_delta,
    single_changepoint, ChangePointEstimate,
};
pub use classify::{three_sample, Label};
pub use cluster::{cluster_offline, clustering_error, Clustering};
pub use distance::{
    dd_discrete, dd_model_model, dd_real, dd_sample_model, default_truncation, default_words,
    distance, sum_information, DistanceEstimate, Truncation,
};
pub use error::{Error, Result};
pub use hyptest::{
    asymmetric_test, calibrate_gamma, goodness_of_fit, uniform_test, CalibrationTable, Hypothesis,
    TestVerdict,
};
pub use index::KGramIndex;
pub use processes::ProcessModel;
pub use sample::{frequency, Pattern, Sample};
