//! Trial campaigns over Haar-random targets.
//!
//! Trial `k` of a campaign with seed `s` draws its target from a ChaCha20
//! generator seeded with `s` on stream `k`, so any trial can be reproduced
//! alone and the order of evaluation does not matter.

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::histogram::{histogram, histogram_csv};
use super::stats::{mean, std_dev};
use super::{haar_random_gate, BenchError};
use crate::hash::{HashResult, Hasher};
use crate::su2::{fmt_f64, Gate};

/// Target of trial `index` in the campaign seeded with `seed`.
pub fn trial_target(seed: u64, index: u64) -> Gate {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    haar_random_gate(&mut rng)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageSummary {
    pub name: String,
    /// Nominal braid length after this stage.
    pub cumulative_length: u32,
    pub mean: f64,
    pub std_dev: f64,
    /// Trials in which the tail fallback was kept.
    pub tail_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialReport {
    pub config: String,
    pub seed: u64,
    pub trials: usize,
    pub stages: Vec<StageSummary>,
    /// `errors[stage][trial]`
    pub errors: Vec<Vec<f64>>,
}

impl TrialReport {
    pub fn from_results(config: String, seed: u64, results: &[HashResult]) -> TrialReport {
        let first = &results[0].trace;
        let mut errors = vec![Vec::with_capacity(results.len()); first.len()];
        let mut tails = vec![0; first.len()];
        for r in results {
            for (i, t) in r.trace.iter().enumerate() {
                errors[i].push(t.error);
                tails[i] += t.tail_used as usize;
            }
        }
        let mut cumulative = 0;
        let stages = first
            .iter()
            .zip(&errors)
            .zip(tails)
            .map(|((t, e), tail_count)| {
                cumulative += t.appended;
                StageSummary {
                    name: t.name.clone(),
                    cumulative_length: cumulative,
                    mean: mean(e),
                    std_dev: std_dev(e),
                    tail_count,
                }
            })
            .collect();
        TrialReport {
            config,
            seed,
            trials: results.len(),
            stages,
            errors,
        }
    }

    pub fn stage_index(&self, name: &str) -> Result<usize, BenchError> {
        self.stages
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| BenchError::UnknownStage(name.into()))
    }

    pub fn stage_errors(&self, name: &str) -> Result<&[f64], BenchError> {
        Ok(&self.errors[self.stage_index(name)?])
    }

    pub fn summary_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "trials={}", self.trials).unwrap();
        writeln!(s, "seed={}", self.seed).unwrap();
        for line in self.config.lines() {
            writeln!(s, "config.{line}").unwrap();
        }
        for (i, st) in self.stages.iter().enumerate() {
            writeln!(s, "stage.{i}.name={}", st.name).unwrap();
            writeln!(s, "stage.{i}.length={}", st.cumulative_length).unwrap();
            writeln!(s, "stage.{i}.mean={}", fmt_f64(st.mean)).unwrap();
            writeln!(s, "stage.{i}.std={}", fmt_f64(st.std_dev)).unwrap();
            writeln!(s, "stage.{i}.tail_count={}", st.tail_count).unwrap();
        }
        s
    }

    pub fn samples_csv(&self) -> String {
        let mut s = String::from("trial");
        for st in &self.stages {
            write!(s, ",{}", st.name).unwrap();
        }
        s.push('\n');
        for k in 0..self.trials {
            write!(s, "{k}").unwrap();
            for e in &self.errors {
                write!(s, ",{}", fmt_f64(e[k])).unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Writes `summary.txt`, `samples.csv`, `scaling.txt` (with three or more
    /// stages) and one `hist-<stage>.csv` per stage into `dir`.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<(), BenchError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("summary.txt"), self.summary_text())?;
        std::fs::write(dir.join("samples.csv"), self.samples_csv())?;
        for (st, e) in self.stages.iter().zip(&self.errors) {
            std::fs::write(dir.join(format!("hist-{}.csv", st.name)), histogram_csv(&histogram(e)))?;
        }
        if let Ok(report) = super::scaling::scaling_report(std::slice::from_ref(self)) {
            std::fs::write(dir.join("scaling.txt"), report.to_text())?;
        }
        Ok(())
    }
}

/// Hashes `count` Haar-random targets.
pub fn run_trials(hasher: &Hasher, count: usize, seed: u64) -> Result<TrialReport, BenchError> {
    if count == 0 {
        return Err(BenchError::TooFewSamples { needed: 1, got: 0 });
    }
    let results: Vec<HashResult> = (0..count as u64)
        .map(|k| hasher.hash(&trial_target(seed, k)))
        .collect();
    Ok(TrialReport::from_results(hasher.config().to_text(), seed, &results))
}
