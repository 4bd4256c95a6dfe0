//! Meet-in-the-middle search.
//!
//! A word of length `≤ L` is split as `u·v` with `|u| = L − h` exactly and
//! `|v| ≤ h`, where `h` is the index length. A straddling `p^±4` block splits
//! into two `p^±2` halves, so every word is reachable; the joined word is
//! always reduced. Words shorter than `L − h` are checked directly.

use super::{improves, ApproxError, HalfWordIndex, PackedWord, SearchResult, TIE_EPS};
use crate::bench::baseline::asymptotic_mean_error;
use crate::su2::{Gate, Quat};
use crate::weave::{concatenate_reduce, count_weaves, visit_weaves, BraidWord, WeaveError};

/// Expanding search radii: `initial · factor^k` for `k < rounds`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusSchedule {
    pub initial: f64,
    pub factor: f64,
    pub rounds: u32,
}

impl RadiusSchedule {
    /// Starts at the empirical mean brute-force error at `len`.
    pub fn for_length(len: u32) -> RadiusSchedule {
        RadiusSchedule {
            initial: asymptotic_mean_error(len),
            factor: 2.0,
            rounds: 4,
        }
    }

    /// Adds rounds until the last radius reaches the chord diameter, so no
    /// target is left without its true nearest word.
    pub fn until_complete(self) -> RadiusSchedule {
        let mut s = self;
        while s.radius(s.rounds - 1) < 2.0 {
            s.rounds += 1;
        }
        s
    }

    /// A single round covering the whole group manifold.
    pub fn exhaustive() -> RadiusSchedule {
        RadiusSchedule {
            initial: 2.0,
            factor: 2.0,
            rounds: 1,
        }
    }

    pub fn radius(&self, round: u32) -> f64 {
        self.initial * self.factor.powi(round as i32)
    }
}

pub fn mitm_search(
    target: &Gate,
    len: u32,
    index: &HalfWordIndex,
    schedule: &RadiusSchedule,
) -> Result<SearchResult, ApproxError> {
    let mut out = mitm_search_many(&[target.quat()], len, index, schedule)?;
    Ok(out.remove(0))
}

struct Best {
    error: f64,
    word: Option<BraidWord>,
}

impl Best {
    fn offer(&mut self, d: f64, make: impl FnOnce() -> BraidWord) -> bool {
        if d > self.error + TIE_EPS {
            return false;
        }
        let w = make();
        if improves(d, &w, self.error, self.word.as_ref()) {
            self.error = d;
            self.word = Some(w);
            true
        } else {
            false
        }
    }
}

/// Interleaves the top 16 bits of each coordinate.
fn morton_key(q: &Quat) -> u64 {
    let q = if q.w() < 0.0 { -*q } else { *q };
    let cells = q.0.map(|c| (((c + 1.0) * 0.5).clamp(0.0, 1.0) * 65535.0) as u64);
    let mut key = 0u64;
    for bit in (0..16).rev() {
        for c in cells {
            key = (key << 1) | ((c >> bit) & 1);
        }
    }
    key
}

/// All words of length exactly `len`, ordered along a space-filling curve
/// through their inverses. Every target's query centers `u⁻¹·t` then move
/// in small steps, so consecutive index queries share cached tree paths.
fn sorted_left_halves(len: u32) -> Vec<PackedWord> {
    let cap = count_weaves(len).map(|n| n as usize).unwrap_or(0);
    let mut keyed: Vec<(u64, PackedWord)> = Vec::with_capacity(cap);
    visit_weaves(len, |blocks, q| {
        if blocks.iter().map(|b| b.len()).sum::<u32>() == len {
            keyed.push((morton_key(&q.inverse()), PackedWord::pack(blocks).expect("fits")));
        }
        true
    });
    keyed.sort_unstable_by_key(|e| e.0);
    keyed.into_iter().map(|e| e.1).collect()
}

/// Searches several targets with one pass over the left halves per round.
pub fn mitm_search_many(
    targets: &[Quat],
    len: u32,
    index: &HalfWordIndex,
    schedule: &RadiusSchedule,
) -> Result<Vec<SearchResult>, ApproxError> {
    if len % 2 != 0 {
        return Err(WeaveError::OddLength(len).into());
    }
    if index.is_empty() {
        return Err(ApproxError::EmptyIndex);
    }
    let h = index.max_len();
    if h > len || len - h > h + 2 {
        return Err(ApproxError::IndexMismatch { index: h, len });
    }
    let left_len = len - h;

    let mut best: Vec<Best> = targets
        .iter()
        .map(|t| {
            let d = t.distance_to_identity();
            Best {
                error: d,
                word: Some(BraidWord::empty()),
            }
        })
        .collect();
    let mut done: Vec<bool> = best.iter().map(|b| b.error == 0.0).collect();

    // shorter left words stand alone
    visit_weaves(left_len, |blocks, q| {
        let ulen: u32 = blocks.iter().map(|b| b.len()).sum();
        if ulen < left_len {
            for (t, slot) in best.iter_mut().enumerate() {
                if !done[t] {
                    slot.offer(q.chord(&targets[t]), || BraidWord::from_blocks_unchecked(blocks.to_vec()));
                }
            }
        }
        true
    });
    let lefts = sorted_left_halves(left_len);

    for round in 0..schedule.rounds {
        let pending: Vec<usize> = (0..targets.len()).filter(|&t| !done[t]).collect();
        if pending.is_empty() {
            break;
        }
        let r_round = schedule.radius(round);
        for &u in &lefts {
            let q = u.quat();
            let uinv = q.inverse();
            for &t in &pending {
                let center = uinv * targets[t];
                let slot = &mut best[t];
                let mut radius = r_round.min(slot.error + TIE_EPS);
                index.query(&center, &mut radius, |i, radius| {
                    let pw = index.word(i);
                    let d = (q * pw.quat()).chord(&targets[t]);
                    if d > *radius {
                        return;
                    }
                    if slot.offer(d, || concatenate_reduce(&u.unpack(), &pw.unpack())) {
                        *radius = radius.min(slot.error + TIE_EPS);
                    }
                });
            }
        }
        for &t in &pending {
            if best[t].error <= r_round {
                done[t] = true;
            }
        }
    }

    Ok(best
        .into_iter()
        .zip(done)
        .map(|(b, complete)| SearchResult {
            word: b.word.unwrap_or_else(BraidWord::empty),
            error: b.error,
            complete,
        })
        .collect())
}
