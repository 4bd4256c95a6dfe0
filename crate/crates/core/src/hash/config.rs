//! `key=value` configuration of the hashing pipeline.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::HashError;
use crate::groups::GroupKind;
use crate::su2::fmt_f64;

#[derive(Clone, Debug, PartialEq)]
pub struct HashConfig {
    pub group: GroupKind,
    pub l0: u32,
    pub m: u32,
    pub n: u32,
    pub iterations: Vec<u32>,
    /// Fraction of targets left uncorrected; `None` disables tail correction.
    pub tail_quantile: Option<f64>,
    pub tail_delta: u32,
    /// Explicit thresholds per iteration. Calibrated when absent.
    pub tail_thresholds: Option<Vec<Option<f64>>>,
    pub calibration_count: usize,
    pub calibration_seed: u64,
    pub pseudogroup_dir: PathBuf,
}

impl Default for HashConfig {
    fn default() -> Self {
        HashConfig {
            group: GroupKind::Icosahedral,
            l0: 8,
            m: 3,
            n: 3,
            iterations: vec![24, 44, 68],
            tail_quantile: Some(0.994),
            tail_delta: 4,
            tail_thresholds: None,
            calibration_count: 1000,
            calibration_seed: 0xca11b,
            pseudogroup_dir: PathBuf::from("data/pseudogroups"),
        }
    }
}

fn list<T>(v: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    v.split(',').map(|s| item(s.trim())).collect()
}

fn opt_f64(s: &str) -> Result<Option<f64>, String> {
    match s {
        "none" | "-" => Ok(None),
        _ => s.parse().map(Some).map_err(|e| format!("{e}")),
    }
}

impl HashConfig {
    /// The cubic-group setup: `L0 = 8, m = 4`, one iteration at 24 with `n = 4`.
    pub fn cubic() -> HashConfig {
        HashConfig {
            group: GroupKind::Cubic,
            m: 4,
            n: 4,
            iterations: vec![24],
            tail_quantile: None,
            ..HashConfig::default()
        }
    }

    pub fn tail_enabled(&self) -> bool {
        self.tail_quantile.is_some() || self.tail_thresholds.is_some()
    }

    /// Tail correction is never applied to the first iteration.
    pub fn tail_applies(&self, iteration: usize) -> bool {
        iteration >= 1
    }

    /// Every pseudogroup length the pipeline will load.
    pub fn required_lengths(&self) -> Vec<u32> {
        let mut out = vec![self.l0];
        for (i, &l) in self.iterations.iter().enumerate() {
            out.push(l);
            if self.tail_enabled() && self.tail_applies(i) {
                out.push(l - self.tail_delta);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `m·L0 + Σ (n+1)·L_i`.
    pub fn nominal_length(&self) -> u32 {
        self.m * self.l0 + (self.n + 1) * self.iterations.iter().sum::<u32>()
    }

    pub fn validate(&self) -> Result<(), HashError> {
        let bad = |m: String| Err(HashError::Config(m));
        if self.m == 0 {
            return bad("m must be at least 1".into());
        }
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if let Some(q) = self.tail_quantile {
            if !(0.0 < q && q < 1.0) {
                return bad(format!("tail_quantile must lie in (0, 1), got {q}"));
            }
        }
        if self.calibration_count == 0 {
            return bad("calibration_count must be positive".into());
        }
        if let Some(t) = &self.tail_thresholds {
            if t.len() != self.iterations.len() {
                return bad(format!(
                    "{} tail thresholds for {} iterations",
                    t.len(),
                    self.iterations.len()
                ));
            }
        }
        for &l in std::iter::once(&self.l0).chain(&self.iterations) {
            if l % 2 != 0 {
                return bad(format!("odd pseudogroup length {l}"));
            }
        }
        if self.tail_enabled() && self.iterations.iter().skip(1).any(|&l| l <= self.tail_delta) {
            return bad("tail_delta must be shorter than every corrected iteration".into());
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<HashConfig, HashError> {
        let mut cfg = HashConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| HashError::ConfigLine { line: n + 1, msg };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, found `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            let num = |v: &str| v.parse::<u32>().map_err(|e| err(format!("{k}: {e}")));
            match k {
                "group" => cfg.group = v.parse().map_err(|e| err(format!("{e}")))?,
                "L0" => cfg.l0 = num(v)?,
                "m" => cfg.m = num(v)?,
                "n" => cfg.n = num(v)?,
                "iterations" => {
                    cfg.iterations = list(v, |s| s.parse::<u32>().map_err(|e| e.to_string())).map_err(err)?
                }
                "tail_quantile" => cfg.tail_quantile = opt_f64(v).map_err(err)?,
                "tail_delta" => cfg.tail_delta = num(v)?,
                "tail_thresholds" => cfg.tail_thresholds = Some(list(v, opt_f64).map_err(err)?),
                "calibration_count" => cfg.calibration_count = v.parse().map_err(|e| err(format!("{e}")))?,
                "calibration_seed" => cfg.calibration_seed = v.parse().map_err(|e| err(format!("{e}")))?,
                "pseudogroup_dir" => cfg.pseudogroup_dir = PathBuf::from(v),
                _ => return Err(err(format!("unknown key `{k}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative `pseudogroup_dir` is resolved against
    /// the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<HashConfig, HashError> {
        let path = path.as_ref();
        let mut cfg = Self::parse(&std::fs::read_to_string(path)?)?;
        if cfg.pseudogroup_dir.is_relative() {
            if let Some(parent) = path.parent() {
                cfg.pseudogroup_dir = parent.join(&cfg.pseudogroup_dir);
            }
        }
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let opt = |v: Option<f64>| v.map_or("none".to_string(), fmt_f64);
        let mut s = String::new();
        writeln!(s, "group={}", self.group.name()).unwrap();
        writeln!(s, "L0={}", self.l0).unwrap();
        writeln!(s, "m={}", self.m).unwrap();
        writeln!(s, "n={}", self.n).unwrap();
        writeln!(s, "iterations={}", join(&self.iterations)).unwrap();
        writeln!(s, "tail_quantile={}", opt(self.tail_quantile)).unwrap();
        writeln!(s, "tail_delta={}", self.tail_delta).unwrap();
        if let Some(t) = &self.tail_thresholds {
            let t: Vec<String> = t.iter().map(|v| opt(*v)).collect();
            writeln!(s, "tail_thresholds={}", t.join(",")).unwrap();
        }
        writeln!(s, "calibration_count={}", self.calibration_count).unwrap();
        writeln!(s, "calibration_seed={}", self.calibration_seed).unwrap();
        writeln!(s, "pseudogroup_dir={}", self.pseudogroup_dir.display()).unwrap();
        s
    }
}
