//! Benchmarks: Haar-random targets, trial campaigns, statistics, and the
//! brute-force baseline model.

pub mod baseline;
pub mod histogram;
pub mod scaling;
pub mod stats;
pub mod trials;

pub use baseline::{bf_baseline, BaselineModel};
pub use histogram::emit_histogram;
pub use scaling::{scaling_report, ScalingReport};
pub use stats::wigner_dyson_test;
pub use trials::{run_trials, trial_target, TrialReport};

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::su2::{Gate, Quat};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("baseline needs L >= 2 and even, got {0}")]
    BadLength(u32),
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("unknown stage `{0}`")]
    UnknownStage(String),
    #[error(transparent)]
    Weave(#[from] crate::weave::WeaveError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A Haar-random SU(2) gate: a uniformly random unit quaternion.
pub fn haar_random_gate<R: Rng + ?Sized>(rng: &mut R) -> Gate {
    haar_random_quat(rng).to_gate()
}

pub fn haar_random_quat<R: Rng + ?Sized>(rng: &mut R) -> Quat {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let q = Quat(v);
        let n = q.norm();
        if n > 1e-12 {
            return q.normalized();
        }
    }
}
