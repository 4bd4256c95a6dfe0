//! Static spatial index over the quaternions of short weaves.
//!
//! Points are stored in single precision on the `w ≥ 0` hemisphere and
//! arranged as an implicit kd-tree (median splits, cycling axes). Range
//! queries pad the radius to absorb the rounding and hand every candidate
//! back to the caller, which re-evaluates the word in double precision.

use crate::su2::Quat;
use crate::weave::{visit_weaves, Block, BraidWord, Generator, GeneratorSet, EXPONENTS};

/// Radius padding that covers f32 rounding of both the stored point and the
/// query center.
pub const F32_PAD: f64 = 4e-7;
const LEAF: usize = 12;
const MAX_PACKED_BLOCKS: usize = 28;

/// A canonical weave of at most 28 blocks packed into 64 bits:
/// bit 0 first generator, bits 1..6 block count, then 2 bits per exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PackedWord(u64);

impl PackedWord {
    pub fn pack(blocks: &[Block]) -> Option<PackedWord> {
        if blocks.len() > MAX_PACKED_BLOCKS {
            return None;
        }
        let mut bits = match blocks.first() {
            Some(b) if b.generator == Generator::Two => 1u64,
            _ => 0,
        };
        bits |= (blocks.len() as u64) << 1;
        for (k, b) in blocks.iter().enumerate() {
            bits |= (b.exp_index() as u64) << (6 + 2 * k);
        }
        Some(PackedWord(bits))
    }

    pub fn block_count(self) -> usize {
        ((self.0 >> 1) & 0x1f) as usize
    }

    fn blocks(self) -> impl Iterator<Item = (usize, usize)> {
        let first = (self.0 & 1) as usize;
        (0..self.block_count()).map(move |k| ((first + k) % 2, ((self.0 >> (6 + 2 * k)) & 3) as usize))
    }

    pub fn quat(self) -> Quat {
        let gens = GeneratorSet::standard();
        self.blocks()
            .fold(Quat::IDENTITY, |acc, (g, e)| acc * gens.quat_by_index(g, e))
    }

    pub fn unpack(self) -> BraidWord {
        let blocks = self
            .blocks()
            .map(|(g, e)| Block {
                generator: if g == 0 { Generator::One } else { Generator::Two },
                exponent: EXPONENTS[e],
            })
            .collect();
        BraidWord::from_blocks_unchecked(blocks)
    }
}

/// Index of every weave of length `≤ max_len`.
pub struct HalfWordIndex {
    max_len: u32,
    entries: Vec<Entry>,
}

#[derive(Clone, Copy)]
struct Entry {
    point: [f32; 4],
    word: PackedWord,
}

fn hemisphere(q: &Quat) -> Quat {
    if q.w() < 0.0 {
        -*q
    } else {
        *q
    }
}

impl HalfWordIndex {
    /// Enumerates and indexes all weaves of length `≤ max_len` (even, ≤ 56).
    pub fn build(max_len: u32) -> HalfWordIndex {
        assert!(max_len % 2 == 0 && max_len as usize <= 2 * MAX_PACKED_BLOCKS);
        let cap = crate::weave::count_weaves_upto(max_len).unwrap_or(0) as usize;
        let mut entries: Vec<Entry> = Vec::with_capacity(cap);
        visit_weaves(max_len, |blocks, q| {
            entries.push(Entry {
                point: hemisphere(q).0.map(|c| c as f32),
                word: PackedWord::pack(blocks).expect("fits"),
            });
            true
        });
        let n = entries.len();
        build_tree(&mut entries, 0, n, 0);
        HalfWordIndex { max_len, entries }
    }

    pub fn max_len(&self) -> u32 {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn word(&self, i: usize) -> PackedWord {
        self.entries[i].word
    }

    /// Calls `on_candidate(i, &mut radius)` for every stored point whose
    /// single-precision image lies within `radius + F32_PAD` of `center`
    /// (either sign). The callback may shrink the radius.
    pub fn query(&self, center: &Quat, radius: &mut f64, mut on_candidate: impl FnMut(usize, &mut f64)) {
        if self.entries.is_empty() {
            return;
        }
        let c = hemisphere(center);
        self.search(&c.0, 0, self.entries.len(), 0, radius, &mut on_candidate);
        if c.w() <= *radius + F32_PAD {
            let neg = (-c).0;
            self.search(&neg, 0, self.entries.len(), 0, radius, &mut on_candidate);
        }
    }

    fn search(
        &self,
        c: &[f64; 4],
        lo: usize,
        hi: usize,
        depth: usize,
        radius: &mut f64,
        f: &mut impl FnMut(usize, &mut f64),
    ) {
        if hi - lo <= LEAF {
            for i in lo..hi {
                self.check(c, i, radius, f);
            }
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let dim = depth % 4;
        let diff = c[dim] - self.entries[mid].point[dim] as f64;
        self.check(c, mid, radius, f);
        let (near, far) = if diff <= 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(c, near.0, near.1, depth + 1, radius, f);
        if diff.abs() <= *radius + F32_PAD {
            self.search(c, far.0, far.1, depth + 1, radius, f);
        }
    }

    #[inline]
    fn check(&self, c: &[f64; 4], i: usize, radius: &mut f64, f: &mut impl FnMut(usize, &mut f64)) {
        let p = &self.entries[i].point;
        let mut d2 = 0.0;
        for k in 0..4 {
            let d = c[k] - p[k] as f64;
            d2 += d * d;
        }
        let r = *radius + F32_PAD;
        if d2 <= r * r {
            f(i, radius);
        }
    }
}

fn build_tree(entries: &mut [Entry], lo: usize, hi: usize, depth: usize) {
    if hi - lo <= LEAF {
        return;
    }
    let mid = lo + (hi - lo) / 2;
    let dim = depth % 4;
    entries[lo..hi].select_nth_unstable_by(mid - lo, |a, b| a.point[dim].total_cmp(&b.point[dim]));
    build_tree(entries, lo, mid, depth + 1);
    build_tree(entries, mid + 1, hi, depth + 1);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pack_roundtrip() {
        let w: BraidWord = "2^4.1^-2.2^2.1^-4".parse().unwrap();
        let p = PackedWord::pack(w.blocks()).unwrap();
        assert_eq!(p.unpack(), w);
        assert!(p.quat().chord(&w.quat()) < 1e-15);
        assert_eq!(PackedWord::pack(&[]).unwrap().unpack(), BraidWord::empty());
    }

    #[test]
    fn query_has_no_false_negatives() {
        let index = HalfWordIndex::build(10);
        let mut all = Vec::new();
        visit_weaves(10, |_, q| {
            all.push(*q);
            true
        });
        assert_eq!(index.len(), all.len());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let q = Quat::new(rng.gen(), rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                .normalized();
            let q = if rng.gen::<bool>() { -q } else { q };
            let r = 0.3;
            let want = all.iter().filter(|p| p.chord(&q) <= r).count();
            let mut got = 0;
            let mut radius = r;
            index.query(&q, &mut radius, |i, _| {
                if index.word(i).quat().chord(&q) <= r {
                    got += 1;
                }
            });
            assert_eq!(got, want);
        }
    }
}
