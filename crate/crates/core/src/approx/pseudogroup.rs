//! Pseudogroups: the best weave of length `≤ L` for each element of a group.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{brute_force_many, mitm_search_many, ApproxError, HalfWordIndex, RadiusSchedule, SearchLimits};
use crate::groups::{FiniteGroup, GroupKind};
use crate::su2::{distance, fmt_f64, Quat};
use crate::weave::{BraidWord, WeaveError};

const MAGIC: &str = "pseudogroup-v1";
/// Allowed disagreement between a stored error and its recomputation.
pub const VERIFY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Mitm,
}

impl FromStr for SearchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "mitm" => Ok(SearchMode::Mitm),
            other => Err(format!("unknown search mode `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudogroupEntry {
    pub word: BraidWord,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pseudogroup {
    group: GroupKind,
    length: u32,
    entries: Vec<PseudogroupEntry>,
    quats: Vec<Quat>,
    complete: bool,
}

impl Pseudogroup {
    fn new(group: GroupKind, length: u32, entries: Vec<PseudogroupEntry>, complete: bool) -> Pseudogroup {
        let quats = entries.iter().map(|e| e.word.quat()).collect();
        Pseudogroup {
            group,
            length,
            entries,
            quats,
            complete,
        }
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn group_name(&self) -> &'static str {
        self.group.name()
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn entries(&self) -> &[PseudogroupEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Quaternion of the stored word for element `i`.
    pub fn quat(&self, i: usize) -> Quat {
        self.quats[i]
    }

    pub fn word(&self, i: usize) -> &BraidWord {
        &self.entries[i].word
    }

    /// False if a bounded search could not certify every entry. Not persisted.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    fn stats_errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().skip(1).map(|e| e.error)
    }

    /// Mean error over the non-identity elements.
    pub fn mean_error(&self) -> f64 {
        let n = self.entries.len().saturating_sub(1).max(1);
        self.stats_errors().sum::<f64>() / n as f64
    }

    pub fn min_error(&self) -> f64 {
        self.stats_errors().fold(f64::INFINITY, f64::min)
    }

    pub fn max_error(&self) -> f64 {
        self.stats_errors().fold(0.0, f64::max)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{MAGIC}").unwrap();
        writeln!(s, "group={}", self.group.name()).unwrap();
        writeln!(s, "L={}", self.length).unwrap();
        writeln!(s, "count={}", self.entries.len()).unwrap();
        for (i, e) in self.entries.iter().enumerate() {
            writeln!(s, "{i} {} {}", e.word, fmt_f64(e.error)).unwrap();
        }
        s
    }

    /// Parses and verifies a pseudogroup file.
    pub fn from_text(text: &str) -> Result<Pseudogroup, ApproxError> {
        let fmt = |line: usize, msg: String| ApproxError::Format { line, msg };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |what: &str| lines.next().ok_or_else(|| fmt(0, format!("missing {what}")));

        let (n, magic) = next("header")?;
        if magic != MAGIC {
            return Err(fmt(n, format!("expected `{MAGIC}`, found `{magic}`")));
        }
        let field = |(n, line): (usize, &str), key: &str| -> Result<String, ApproxError> {
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .map(str::to_owned)
                .ok_or_else(|| fmt(n, format!("expected `{key}=`")))
        };
        let group_line = next("group")?;
        let group: GroupKind = field(group_line, "group")?
            .parse()
            .map_err(|e| fmt(group_line.0, format!("{e}")))?;
        let len_line = next("L")?;
        let length: u32 = field(len_line, "L")?
            .parse()
            .map_err(|e| fmt(len_line.0, format!("{e}")))?;
        let count_line = next("count")?;
        let count: usize = field(count_line, "count")?
            .parse()
            .map_err(|e| fmt(count_line.0, format!("{e}")))?;
        if count != group.order() {
            return Err(fmt(count_line.0, format!("count {count} but {} has order {}", group, group.order())));
        }

        let g = group.build()?;
        let mut entries = Vec::with_capacity(count);
        for i in 0..count {
            let (n, line) = next("entry")?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(fmt(n, "expected `<index> <word> <error>`".into()));
            }
            let idx: usize = parts[0].parse().map_err(|e| fmt(n, format!("{e}")))?;
            if idx != i {
                return Err(fmt(n, format!("expected index {i}, found {idx}")));
            }
            let word: BraidWord = parts[1].parse().map_err(|e: WeaveError| fmt(n, e.to_string()))?;
            if word.len() > length {
                return Err(fmt(n, format!("word length {} exceeds L={length}", word.len())));
            }
            let error: f64 = parts[2].parse().map_err(|e| fmt(n, format!("{e}")))?;
            let recomputed = distance(&word.evaluate(), g.element(i))?;
            if !((error - recomputed).abs() <= VERIFY_TOL) {
                return Err(ApproxError::Verification {
                    index: i,
                    stored: error,
                    recomputed,
                });
            }
            entries.push(PseudogroupEntry { word, error });
        }
        if let Some((n, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(fmt(n, format!("unexpected trailing line `{extra}`")));
        }
        Ok(Pseudogroup::new(group, length, entries, true))
    }
}

/// Approximates every element of `g` by a weave of length `≤ len`.
///
/// The identity always gets the empty word.
pub fn build_pseudogroup(g: &FiniteGroup, len: u32, mode: SearchMode) -> Result<Pseudogroup, ApproxError> {
    match mode {
        SearchMode::Exhaustive => build_exhaustive(g, len, &SearchLimits::default()),
        SearchMode::Mitm => {
            if len % 2 != 0 {
                return Err(WeaveError::OddLength(len).into());
            }
            let index = HalfWordIndex::build(2 * (len / 4));
            build_with_index(g, len, &index, &RadiusSchedule::for_length(len).until_complete())
        }
    }
}

pub fn build_exhaustive(g: &FiniteGroup, len: u32, limits: &SearchLimits) -> Result<Pseudogroup, ApproxError> {
    let targets: Vec<Quat> = (1..g.order()).map(|i| g.quat(i)).collect();
    let found = brute_force_many(&targets, len, limits)?;
    Ok(assemble(g, len, found))
}

/// MITM build with a caller-supplied index, so one index can serve several lengths.
pub fn build_with_index(
    g: &FiniteGroup,
    len: u32,
    index: &HalfWordIndex,
    schedule: &RadiusSchedule,
) -> Result<Pseudogroup, ApproxError> {
    let targets: Vec<Quat> = (1..g.order()).map(|i| g.quat(i)).collect();
    let found = mitm_search_many(&targets, len, index, schedule)?;
    Ok(assemble(g, len, found))
}

fn assemble(g: &FiniteGroup, len: u32, found: Vec<super::SearchResult>) -> Pseudogroup {
    let complete = found.iter().all(|r| r.complete);
    let mut entries = vec![PseudogroupEntry {
        word: BraidWord::empty(),
        error: 0.0,
    }];
    // recomputed from the word, so the value does not depend on how it was found
    entries.extend(found.into_iter().enumerate().map(|(i, r)| PseudogroupEntry {
        error: r.word.quat().chord(&g.quat(i + 1)),
        word: r.word,
    }));
    Pseudogroup::new(g.kind(), len, entries, complete)
}

pub fn save_pseudogroup(p: &Pseudogroup, path: impl AsRef<Path>) -> Result<(), ApproxError> {
    std::fs::write(path, p.to_text())?;
    Ok(())
}

pub fn load_pseudogroup(path: impl AsRef<Path>) -> Result<Pseudogroup, ApproxError> {
    let text = std::fs::read_to_string(path)?;
    Pseudogroup::from_text(&text)
}
