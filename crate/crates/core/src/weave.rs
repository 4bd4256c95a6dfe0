//! Weaves: braid words over the squared Fibonacci generators.
//!
//! A canonical weave is a list of blocks `σ_p^q` with alternating generators
//! `p ∈ {1, 2}` and exponents `q ∈ {±2, ±4}`. Since `σ_p^10 = 1`, any even
//! exponent reduces mod 10 into `{0, ±2, ±4}`, so this form is unique for
//! words with no further cancellation.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::su2::{mat_mul, Gate, Quat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeaveError {
    #[error("generator {0} is not 1 or 2")]
    BadGenerator(u8),
    #[error("exponent {0} is odd; weaves use even powers only")]
    OddExponent(i32),
    #[error("word is not canonical: {0}")]
    NotCanonical(String),
    #[error("length {0} is odd")]
    OddLength(u32),
    #[error("cannot parse word {0:?}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    One,
    Two,
}

impl Generator {
    pub fn index(self) -> u8 {
        match self {
            Generator::One => 1,
            Generator::Two => 2,
        }
    }

    pub fn other(self) -> Generator {
        match self {
            Generator::One => Generator::Two,
            Generator::Two => Generator::One,
        }
    }

    pub fn from_index(p: u8) -> Result<Self, WeaveError> {
        match p {
            1 => Ok(Generator::One),
            2 => Ok(Generator::Two),
            _ => Err(WeaveError::BadGenerator(p)),
        }
    }
}

/// Canonical exponents in enumeration order.
pub const EXPONENTS: [i8; 4] = [2, -2, 4, -4];

/// One block `σ_p^q` of a canonical weave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub generator: Generator,
    pub exponent: i8,
}

impl Block {
    pub fn new(generator: Generator, exponent: i8) -> Result<Self, WeaveError> {
        if !EXPONENTS.contains(&exponent) {
            return Err(WeaveError::NotCanonical(format!("exponent {exponent}")));
        }
        Ok(Block {
            generator,
            exponent,
        })
    }

    /// Position of the exponent in [`EXPONENTS`].
    #[inline]
    pub fn exp_index(self) -> usize {
        match self.exponent {
            2 => 0,
            -2 => 1,
            4 => 2,
            _ => 3,
        }
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.exponent.unsigned_abs() as u32
    }

    /// Sort key: generator first, then exponent in `+2, -2, +4, -4` order.
    #[inline]
    pub fn order_key(self) -> (u8, usize) {
        (self.generator.index(), self.exp_index())
    }
}

/// Maps an even exponent to its representative in `{0, ±2, ±4}`.
pub fn normalize_exponent(e: i32) -> i32 {
    match e.rem_euclid(10) {
        0 => 0,
        2 => 2,
        4 => 4,
        6 => -4,
        _ => -2,
    }
}

/// A canonical weave word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BraidWord {
    blocks: Vec<Block>,
}

impl BraidWord {
    pub fn empty() -> Self {
        BraidWord::default()
    }

    /// Checks the canonical-form invariants without reducing.
    pub fn from_blocks(blocks: Vec<Block>) -> Result<Self, WeaveError> {
        for (k, b) in blocks.iter().enumerate() {
            if !EXPONENTS.contains(&b.exponent) {
                return Err(WeaveError::NotCanonical(format!(
                    "block {k} has exponent {}",
                    b.exponent
                )));
            }
            if k > 0 && blocks[k - 1].generator == b.generator {
                return Err(WeaveError::NotCanonical(format!(
                    "blocks {} and {k} share generator {}",
                    k - 1,
                    b.generator.index()
                )));
            }
        }
        Ok(BraidWord { blocks })
    }

    pub(crate) fn from_blocks_unchecked(blocks: Vec<Block>) -> Self {
        debug_assert!(BraidWord::from_blocks(blocks.clone()).is_ok());
        BraidWord { blocks }
    }

    /// Validates `(generator, exponent)` pairs as a canonical word.
    pub fn from_pairs(pairs: &[(u8, i32)]) -> Result<Self, WeaveError> {
        let blocks = pairs
            .iter()
            .map(|&(p, q)| {
                let g = Generator::from_index(p)?;
                let e = i8::try_from(q).map_err(|_| WeaveError::NotCanonical(format!("exponent {q}")))?;
                Block::new(g, e)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_blocks(blocks)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of crossings, `Σ|q|`.
    pub fn len(&self) -> u32 {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            blocks: self
                .blocks
                .iter()
                .rev()
                .map(|b| Block {
                    generator: b.generator,
                    exponent: -b.exponent,
                })
                .collect(),
        }
    }

    /// Ordered matrix product in U(2), global phase included.
    pub fn evaluate(&self) -> Gate {
        let gens = GeneratorSet::standard();
        let mut m = Quat::IDENTITY.to_matrix();
        for b in &self.blocks {
            m = mat_mul(&m, gens.block_matrix(*b));
        }
        Gate::from_entries_unchecked(m)
    }

    /// SU(2) quaternion of the word, up to sign.
    pub fn quat(&self) -> Quat {
        let gens = GeneratorSet::standard();
        self.blocks
            .iter()
            .fold(Quat::IDENTITY, |acc, b| acc * gens.block_quat(*b))
    }

    /// Lexicographic comparison by block order key; a proper prefix sorts first.
    pub fn lex_cmp(&self, other: &BraidWord) -> std::cmp::Ordering {
        self.blocks
            .iter()
            .map(|b| b.order_key())
            .cmp(other.blocks.iter().map(|b| b.order_key()))
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("e");
        }
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}^{}", b.generator.index(), b.exponent)?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = WeaveError;

    /// Strict: the text must already be canonical.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "e" {
            return Ok(BraidWord::empty());
        }
        let pairs = s
            .split('.')
            .map(|tok| {
                let (p, q) = tok.split_once('^').ok_or_else(|| WeaveError::Parse(s.to_string()))?;
                let p: u8 = p.parse().map_err(|_| WeaveError::Parse(s.to_string()))?;
                let q: i32 = q.parse().map_err(|_| WeaveError::Parse(s.to_string()))?;
                Ok((p, q))
            })
            .collect::<Result<Vec<_>, WeaveError>>()?;
        BraidWord::from_pairs(&pairs)
    }
}

/// Reduces raw `(generator, even exponent)` blocks to canonical form.
///
/// Adjacent blocks on the same generator merge, exponents fold mod 10 into
/// `{0, ±2, ±4}`, and zero blocks vanish. A stack pass reaches the fixpoint.
pub fn reduce(raw: &[(u8, i32)]) -> Result<BraidWord, WeaveError> {
    let mut stack: Vec<(Generator, i32)> = Vec::with_capacity(raw.len());
    for &(p, q) in raw {
        let g = Generator::from_index(p)?;
        if q % 2 != 0 {
            return Err(WeaveError::OddExponent(q));
        }
        push_reduced(&mut stack, g, q);
    }
    Ok(BraidWord::from_blocks_unchecked(
        stack
            .into_iter()
            .map(|(generator, e)| Block {
                generator,
                exponent: e as i8,
            })
            .collect(),
    ))
}

fn push_reduced(stack: &mut Vec<(Generator, i32)>, g: Generator, q: i32) {
    match stack.last_mut() {
        Some((top, e)) if *top == g => {
            let merged = normalize_exponent(*e + q);
            if merged == 0 {
                stack.pop();
            } else {
                *e = merged;
            }
        }
        _ => {
            let e = normalize_exponent(q);
            if e != 0 {
                stack.push((g, e));
            }
        }
    }
}

/// `reduce(a ++ b)`; only the junction can shrink.
pub fn concatenate_reduce(a: &BraidWord, b: &BraidWord) -> BraidWord {
    concat_all([a, b])
}

/// Reduces the concatenation of several canonical words.
pub fn concat_all<'a>(words: impl IntoIterator<Item = &'a BraidWord>) -> BraidWord {
    let mut stack: Vec<(Generator, i32)> = Vec::new();
    for w in words {
        for b in &w.blocks {
            push_reduced(&mut stack, b.generator, b.exponent as i32);
        }
    }
    BraidWord::from_blocks_unchecked(
        stack
            .into_iter()
            .map(|(generator, e)| Block {
                generator,
                exponent: e as i8,
            })
            .collect(),
    )
}

/// The two Fibonacci braiding matrices and the block tables derived from them.
#[derive(Debug)]
pub struct GeneratorSet {
    pub tau: f64,
    sigma1: Gate,
    sigma2: Gate,
    // [generator][exp_index]
    block_mats: [[[[C64; 2]; 2]; 4]; 2],
    block_quats: [[Quat; 4]; 2],
}

impl GeneratorSet {
    pub fn standard() -> &'static GeneratorSet {
        static SET: OnceLock<GeneratorSet> = OnceLock::new();
        SET.get_or_init(GeneratorSet::build)
    }

    fn build() -> GeneratorSet {
        use std::f64::consts::PI;
        let tau = (5f64.sqrt() - 1.0) / 2.0;
        let z = C64::new(0.0, 0.0);
        let s1 = [
            [C64::from_polar(1.0, -4.0 * PI / 5.0), z],
            [z, -C64::from_polar(1.0, -2.0 * PI / 5.0)],
        ];
        let off = -C64::from_polar(tau.sqrt(), 2.0 * PI / 5.0);
        let s2 = [
            [-C64::from_polar(tau, -PI / 5.0), off],
            [off, C64::new(-tau, 0.0)],
        ];
        let mut block_mats = [[[[z; 2]; 2]; 4]; 2];
        let mut block_quats = [[Quat::IDENTITY; 4]; 2];
        for (gi, s) in [s1, s2].iter().enumerate() {
            let sq = mat_mul(s, s);
            let fourth = mat_mul(&sq, &sq);
            let mats = [sq, dagger(&sq), fourth, dagger(&fourth)];
            for (ei, m) in mats.into_iter().enumerate() {
                block_mats[gi][ei] = m;
                block_quats[gi][ei] = Gate::from_entries_unchecked(m).quat();
            }
        }
        GeneratorSet {
            tau,
            sigma1: Gate::from_entries_unchecked(s1),
            sigma2: Gate::from_entries_unchecked(s2),
            block_mats,
            block_quats,
        }
    }

    pub fn sigma1(&self) -> &Gate {
        &self.sigma1
    }

    pub fn sigma2(&self) -> &Gate {
        &self.sigma2
    }

    #[inline]
    pub fn block_matrix(&self, b: Block) -> &[[C64; 2]; 2] {
        &self.block_mats[(b.generator.index() - 1) as usize][b.exp_index()]
    }

    #[inline]
    pub fn block_quat(&self, b: Block) -> Quat {
        self.block_quats[(b.generator.index() - 1) as usize][b.exp_index()]
    }

    #[inline]
    pub(crate) fn quat_by_index(&self, gen_idx: usize, exp_idx: usize) -> Quat {
        self.block_quats[gen_idx][exp_idx]
    }
}

fn dagger(m: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

/// Number of canonical weaves of length exactly `len` (`1` for the empty word).
pub fn count_weaves(len: u32) -> Result<u128, WeaveError> {
    if len % 2 != 0 {
        return Err(WeaveError::OddLength(len));
    }
    if len == 0 {
        return Ok(1);
    }
    // words ending in a ±4 block, and in a ±2 block
    let (mut n4, mut n2): (u128, u128) = (0, 4);
    for _ in 1..len / 2 {
        (n4, n2) = (n2, 2 * n4 + 3 * n2 - n2);
    }
    Ok(n4 + n2)
}

/// Number of canonical weaves of length `≤ len`, the empty word included.
pub fn count_weaves_upto(len: u32) -> Result<u128, WeaveError> {
    if len % 2 != 0 {
        return Err(WeaveError::OddLength(len));
    }
    (0..=len).step_by(2).map(count_weaves).sum()
}

/// Closed form for the weave count, valid for even `len ≥ 2`.
pub fn count_weaves_closed_form(len: u32) -> f64 {
    let s3 = 3f64.sqrt();
    let k = (len / 2) as i32;
    (1.0 - 1.0 / s3) * (1.0 - s3).powi(k) + (1.0 + 1.0 / s3) * (1.0 + s3).powi(k)
}

/// Streams the canonical weaves of length exactly `len` in lexicographic
/// order: generator 1 before 2, exponents `+2, -2, +4, -4`.
pub fn enumerate_weaves(len: u32) -> Result<WeaveIter, WeaveError> {
    if len % 2 != 0 {
        return Err(WeaveError::OddLength(len));
    }
    Ok(WeaveIter {
        half_len: len / 2,
        first: Generator::One,
        choices: Vec::new(),
        sum: 0,
        state: IterState::Fresh,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

#[derive(Clone, Debug)]
pub struct WeaveIter {
    half_len: u32,
    first: Generator,
    choices: Vec<u8>,
    sum: u32,
    state: IterState,
}

#[inline]
fn half_size(choice: u8) -> u32 {
    if choice < 2 {
        1
    } else {
        2
    }
}

impl WeaveIter {
    fn fill(&mut self) {
        while self.sum < self.half_len {
            self.choices.push(0);
            self.sum += 1;
        }
    }

    fn current(&self) -> BraidWord {
        let mut g = self.first;
        let blocks = self
            .choices
            .iter()
            .map(|&c| {
                let b = Block {
                    generator: g,
                    exponent: EXPONENTS[c as usize],
                };
                g = g.other();
                b
            })
            .collect();
        BraidWord::from_blocks_unchecked(blocks)
    }
}

impl Iterator for WeaveIter {
    type Item = BraidWord;

    fn next(&mut self) -> Option<BraidWord> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.state = IterState::Running;
                if self.half_len == 0 {
                    self.state = IterState::Done;
                    return Some(BraidWord::empty());
                }
                self.fill();
                return Some(self.current());
            }
            IterState::Running => {}
        }
        loop {
            match self.choices.pop() {
                None => {
                    if self.first == Generator::One {
                        self.first = Generator::Two;
                        self.fill();
                        return Some(self.current());
                    }
                    self.state = IterState::Done;
                    return None;
                }
                Some(c) => {
                    self.sum -= half_size(c);
                    let room = self.half_len - self.sum;
                    if let Some(nc) = (c + 1..4).find(|&nc| half_size(nc) <= room) {
                        self.choices.push(nc);
                        self.sum += half_size(nc);
                        self.fill();
                        return Some(self.current());
                    }
                }
            }
        }
    }
}

/// Depth-first walk over every canonical weave of length `≤ max_len`,
/// in lexicographic pre-order (each word before its extensions), passing the
/// block list and the word's quaternion. Returning `false` from `visit`
/// prunes the extensions of that word.
pub fn visit_weaves(max_len: u32, mut visit: impl FnMut(&[Block], &Quat) -> bool) {
    let mut blocks = Vec::with_capacity(max_len as usize / 2 + 1);
    if !visit(&blocks, &Quat::IDENTITY) {
        return;
    }
    for g in [Generator::One, Generator::Two] {
        descend(&mut blocks, g, Quat::IDENTITY, max_len, &mut visit);
    }
}

fn descend(
    blocks: &mut Vec<Block>,
    g: Generator,
    q: Quat,
    room: u32,
    visit: &mut impl FnMut(&[Block], &Quat) -> bool,
) {
    let gens = GeneratorSet::standard();
    let gi = (g.index() - 1) as usize;
    for (ei, &e) in EXPONENTS.iter().enumerate() {
        let len = e.unsigned_abs() as u32;
        if len > room {
            continue;
        }
        let nq = q * gens.quat_by_index(gi, ei);
        blocks.push(Block {
            generator: g,
            exponent: e,
        });
        if visit(blocks, &nq) && room - len >= 2 {
            descend(blocks, g.other(), nq, room - len, visit);
        }
        blocks.pop();
    }
}
