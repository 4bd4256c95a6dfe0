//! Weave searches and pseudogroups.
//!
//! [`brute_force`] scans every canonical weave up to a length; [`mitm_search`]
//! reaches twice as far by joining short words with an index of short words.
//! A [`Pseudogroup`] stores the best weave found for each element of a finite
//! group and is persisted as a small text file.

mod index;
mod mitm;
mod pseudogroup;

pub use index::{HalfWordIndex, PackedWord, F32_PAD};
pub use mitm::{mitm_search, mitm_search_many, RadiusSchedule};
pub use pseudogroup::{
    build_pseudogroup, load_pseudogroup, save_pseudogroup, Pseudogroup, PseudogroupEntry, SearchMode,
};

use thiserror::Error;

use crate::groups::GroupError;
use crate::su2::{Gate, Quat, Su2Error};
use crate::weave::{visit_weaves, BraidWord, WeaveError};

/// Default cap on exhaustive search length (about 10⁷ words).
pub const DEFAULT_EXHAUSTIVE_LIMIT: u32 = 32;

/// Distances closer than this are treated as ties and resolved by word order.
pub const TIE_EPS: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error("exhaustive search to length {requested} exceeds the limit {limit}")]
    Capacity { requested: u32, limit: u32 },
    #[error("half-word index is empty")]
    EmptyIndex,
    #[error("index of length {index} cannot split words of length {len}")]
    IndexMismatch { index: u32, len: u32 },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("entry {index}: stored error {stored:e} but recomputed {recomputed:e}")]
    Verification { index: usize, stored: f64, recomputed: f64 },
    #[error(transparent)]
    Weave(#[from] WeaveError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Su2(#[from] Su2Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Best word found for a target.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub word: BraidWord,
    pub error: f64,
    /// False when a bounded search gave up before certifying optimality.
    pub complete: bool,
}

/// Search limits for exhaustive mode.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub exhaustive_max: u32,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            exhaustive_max: DEFAULT_EXHAUSTIVE_LIMIT,
        }
    }
}

/// Whether candidate `(d, w)` beats the incumbent `(best_d, best_w)`.
pub(crate) fn improves(d: f64, w: &BraidWord, best_d: f64, best_w: Option<&BraidWord>) -> bool {
    if d < best_d - TIE_EPS {
        return true;
    }
    match best_w {
        Some(bw) => d <= best_d + TIE_EPS && w.lex_cmp(bw).is_lt(),
        None => d <= best_d,
    }
}

/// The weave of even length `≤ max_len` nearest to `target`.
pub fn brute_force(target: &Gate, max_len: u32, limits: &SearchLimits) -> Result<SearchResult, ApproxError> {
    let mut out = brute_force_many(&[target.quat()], max_len, limits)?;
    Ok(out.remove(0))
}

/// Runs one exhaustive enumeration against several targets at once.
///
/// Words are visited in lexicographic pre-order and only replace the
/// incumbent when closer by more than [`TIE_EPS`], so ties resolve to the
/// lexicographically first word.
pub fn brute_force_many(
    targets: &[Quat],
    max_len: u32,
    limits: &SearchLimits,
) -> Result<Vec<SearchResult>, ApproxError> {
    if max_len % 2 != 0 {
        return Err(WeaveError::OddLength(max_len).into());
    }
    if max_len > limits.exhaustive_max {
        return Err(ApproxError::Capacity {
            requested: max_len,
            limit: limits.exhaustive_max,
        });
    }
    let mut best: Vec<(f64, Vec<crate::weave::Block>)> = vec![(f64::INFINITY, Vec::new()); targets.len()];
    visit_weaves(max_len, |blocks, q| {
        for (t, slot) in targets.iter().zip(best.iter_mut()) {
            // cheap reject before the precise chord
            let lim = slot.0 + 1e-6;
            if 2.0 - 2.0 * q.dot(t).abs() > lim * lim {
                continue;
            }
            let d = q.chord(t);
            if d < slot.0 - TIE_EPS {
                slot.0 = d;
                slot.1.clear();
                slot.1.extend_from_slice(blocks);
            }
        }
        true
    });
    Ok(best
        .into_iter()
        .map(|(error, blocks)| SearchResult {
            word: BraidWord::from_blocks_unchecked(blocks),
            error,
            complete: true,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weave::enumerate_weaves;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn member_of_search_set_is_found_exactly() {
        let w: BraidWord = "1^2.2^-4.1^2".parse().unwrap();
        let r = brute_force(&w.evaluate(), 8, &SearchLimits::default()).unwrap();
        assert!(r.error < 1e-12);
        assert!(r.word.len() <= 8);
    }

    #[test]
    fn short_search_matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let t = crate::bench::haar_random_gate(&mut rng);
            let r = brute_force(&t, 4, &SearchLimits::default()).unwrap();
            // 1 + 4 + 12 candidates
            let candidates: Vec<BraidWord> = (0..=4).step_by(2).flat_map(|l| enumerate_weaves(l).unwrap()).collect();
            assert_eq!(candidates.len(), 17);
            let oracle = candidates
                .iter()
                .map(|w| crate::su2::distance(&w.evaluate(), &t).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!((r.error - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn capacity_and_parity_errors() {
        let t = Gate::identity();
        assert!(matches!(
            brute_force(&t, 34, &SearchLimits::default()),
            Err(ApproxError::Capacity { .. })
        ));
        assert!(brute_force(&t, 5, &SearchLimits::default()).is_err());
    }

    #[test]
    fn identity_target_gives_empty_word() {
        let r = brute_force(&Gate::identity(), 6, &SearchLimits::default()).unwrap();
        assert!(r.word.is_empty());
        assert_eq!(r.error, 0.0);
    }
}
