//! Iterative pseudogroup hashing.
//!
//! A target `T` is first matched against every product of `m` elements of a
//! coarse pseudogroup (the preprocessor). Each main iteration then multiplies
//! the current approximation `T̃` by the mesh item `s` that brings `T̃·s`
//! closest to `T`. Because the mesh contains the exact identity, errors never
//! increase from one stage to the next.

mod config;
mod mesh;

pub use config::HashConfig;
pub use mesh::{Mesh, ProductSet, MAX_ITEMS};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::approx::{load_pseudogroup, ApproxError, Pseudogroup};
use crate::groups::{GroupError, GroupKind};
use crate::su2::{fmt_f64, Gate, Quat};
use crate::weave::{concatenate_reduce, BraidWord};

#[derive(Debug, Error)]
pub enum HashError {
    #[error("{order}^{power} items exceeds the mesh capacity")]
    Capacity { order: usize, power: u32 },
    #[error("config: {0}")]
    Config(String),
    #[error("config line {line}: {msg}")]
    ConfigLine { line: usize, msg: String },
    #[error("pseudogroup {path}: {source}")]
    Pseudogroup { path: PathBuf, source: ApproxError },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One row of the hashing trace.
#[derive(Clone, Debug, PartialEq)]
pub struct StageTrace {
    pub name: String,
    /// Pseudogroup length used by the stage.
    pub length: u32,
    pub error: f64,
    /// Nominal braid length contributed by the stage.
    pub appended: u32,
    pub tail_used: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HashResult {
    pub word: BraidWord,
    pub error: f64,
    pub trace: Vec<StageTrace>,
    quat: Quat,
}

impl HashResult {
    pub fn quat(&self) -> Quat {
        self.quat
    }

    /// `m·L0 + Σ (n+1)·L_i` over the stages run.
    pub fn unreduced_length(&self) -> u32 {
        self.trace.iter().map(|s| s.appended).sum()
    }

    pub fn stage_errors(&self) -> Vec<f64> {
        self.trace.iter().map(|s| s.error).collect()
    }

    /// Human-readable summary with a stage table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "word: {}", self.word).unwrap();
        writeln!(s, "error: {}", fmt_f64(self.error)).unwrap();
        writeln!(s, "length: {} (unreduced {})", self.word.len(), self.unreduced_length()).unwrap();
        writeln!(s, "{:<14}{:>4}  {:<24}{}", "stage", "L", "error", "tail").unwrap();
        for t in &self.trace {
            let tail = if t.tail_used { "yes" } else { "no" };
            writeln!(s, "{:<14}{:>4}  {:<24}{}", t.name, t.length, fmt_f64(t.error), tail).unwrap();
        }
        s
    }

    /// Line-oriented `key=value` block.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        writeln!(s, "word={}", self.word).unwrap();
        writeln!(s, "error={}", fmt_f64(self.error)).unwrap();
        writeln!(s, "length={}", self.word.len()).unwrap();
        writeln!(s, "unreduced_length={}", self.unreduced_length()).unwrap();
        writeln!(s, "stages={}", self.trace.len()).unwrap();
        for (i, t) in self.trace.iter().enumerate() {
            writeln!(s, "stage.{i}.name={}", t.name).unwrap();
            writeln!(s, "stage.{i}.L={}", t.length).unwrap();
            writeln!(s, "stage.{i}.error={}", fmt_f64(t.error)).unwrap();
            writeln!(s, "stage.{i}.tail={}", t.tail_used).unwrap();
        }
        s
    }
}

/// Best product of `m` pseudogroup elements for `target`.
pub fn preprocess(target: &Gate, p: &Pseudogroup, m: u32) -> Result<HashResult, HashError> {
    let products = ProductSet::build(p, m)?;
    Ok(preprocess_with(&target.quat(), &products))
}

fn preprocess_with(target: &Quat, products: &ProductSet) -> HashResult {
    let (k, error) = mesh::nearest(products.quats(), target);
    let l0 = products.source().length();
    HashResult {
        word: products.word(k),
        error,
        trace: vec![StageTrace {
            name: "preprocessor".into(),
            length: l0,
            error,
            appended: products.m() * l0,
            tail_used: false,
        }],
        quat: products.quats()[k],
    }
}

/// One main-processor step with `mesh`.
pub fn iterate_once(current: &HashResult, target: &Gate, mesh: &Mesh) -> HashResult {
    let name = format!("iter{}", current.trace.len());
    step(current, &target.quat(), mesh, name, false)
}

fn step(current: &HashResult, target: &Quat, mesh: &Mesh, name: String, tail_used: bool) -> HashResult {
    // T̃·s ≈ T  ⇔  s ≈ T̃⁻¹·T, and left multiplication preserves distance
    let r = current.quat.inverse() * *target;
    let (k, _) = mesh::nearest(mesh.quats(), &r);
    let quat = current.quat * mesh.quats()[k];
    let error = quat.chord(target);
    let length = mesh.source().length();
    let stage = StageTrace {
        name,
        length,
        error,
        appended: (mesh.n() + 1) * length,
        tail_used,
    };
    let mut trace = current.trace.clone();
    if error >= current.error {
        // same as picking the all-identity item
        trace.push(StageTrace {
            error: current.error,
            ..stage
        });
        return HashResult {
            word: current.word.clone(),
            error: current.error,
            trace,
            quat: current.quat,
        };
    }
    trace.push(stage);
    HashResult {
        word: concatenate_reduce(&current.word, &mesh.word(k)),
        error,
        trace,
        quat,
    }
}

struct Iteration {
    mesh: Mesh,
    fallback: Option<Mesh>,
    threshold: Option<f64>,
}

/// A configured pipeline with its product set and meshes built once.
pub struct Hasher {
    config: HashConfig,
    products: ProductSet,
    iterations: Vec<Iteration>,
}

/// `<dir>/<group>-L<len>.txt`
pub fn pseudogroup_path(dir: &Path, group: GroupKind, len: u32) -> PathBuf {
    dir.join(format!("{}-L{len}.txt", group.name()))
}

fn load(dir: &Path, group: GroupKind, len: u32) -> Result<Pseudogroup, HashError> {
    let path = pseudogroup_path(dir, group, len);
    let p = load_pseudogroup(&path).map_err(|source| HashError::Pseudogroup {
        path: path.clone(),
        source,
    })?;
    if p.group() != group || p.length() != len {
        return Err(HashError::Config(format!(
            "{} holds {}-L{}",
            path.display(),
            p.group_name(),
            p.length()
        )));
    }
    Ok(p)
}

impl Hasher {
    /// Loads pseudogroups from `cfg.pseudogroup_dir` and calibrates tail
    /// thresholds if the config asks for it.
    pub fn new(cfg: &HashConfig) -> Result<Hasher, HashError> {
        cfg.validate()?;
        let dir = &cfg.pseudogroup_dir;
        Self::with_loader(cfg, |len| load(dir, cfg.group, len))
    }

    /// Like [`Hasher::new`] with pseudogroups supplied by `get`.
    pub fn with_loader(
        cfg: &HashConfig,
        mut get: impl FnMut(u32) -> Result<Pseudogroup, HashError>,
    ) -> Result<Hasher, HashError> {
        cfg.validate()?;
        let group = cfg.group.build()?;
        let products = ProductSet::build(&get(cfg.l0)?, cfg.m)?;
        let mut iterations = Vec::new();
        for (i, &len) in cfg.iterations.iter().enumerate() {
            let mesh = Mesh::build(&get(len)?, &group, cfg.n)?;
            let fallback = if cfg.tail_enabled() && cfg.tail_applies(i) {
                Some(Mesh::build(&get(len - cfg.tail_delta)?, &group, cfg.n)?)
            } else {
                None
            };
            let threshold = cfg.tail_thresholds.as_ref().and_then(|t| t.get(i).copied().flatten());
            iterations.push(Iteration {
                mesh,
                fallback,
                threshold,
            });
        }
        let mut h = Hasher {
            config: cfg.clone(),
            products,
            iterations,
        };
        if cfg.tail_enabled() && cfg.tail_thresholds.is_none() {
            h.calibrate();
        }
        Ok(h)
    }

    pub fn config(&self) -> &HashConfig {
        &self.config
    }

    pub fn products(&self) -> &ProductSet {
        &self.products
    }

    pub fn mesh(&self, iteration: usize) -> &Mesh {
        &self.iterations[iteration].mesh
    }

    /// Tail thresholds per iteration (`None` where no correction applies).
    pub fn thresholds(&self) -> Vec<Option<f64>> {
        self.iterations.iter().map(|it| it.threshold).collect()
    }

    fn calibrate(&mut self) {
        let q = self.config.tail_quantile.expect("tail enabled");
        let count = self.config.calibration_count;
        for i in 0..self.iterations.len() {
            if self.iterations[i].fallback.is_none() {
                continue;
            }
            let mut inputs: Vec<f64> = (0..count)
                .map(|t| {
                    let target = calibration_target(self.config.calibration_seed, t as u64);
                    self.run(&target, i).error
                })
                .collect();
            inputs.sort_by(f64::total_cmp);
            let rank = ((q * count as f64).ceil() as usize).clamp(1, count) - 1;
            self.iterations[i].threshold = Some(inputs[rank]);
        }
    }

    /// Preprocessor plus the first `stages` iterations.
    fn run(&self, target: &Quat, stages: usize) -> HashResult {
        let mut cur = preprocess_with(target, &self.products);
        for (i, it) in self.iterations.iter().take(stages).enumerate() {
            let name = format!("iter{}", i + 1);
            let input_error = cur.error;
            let mut next = step(&cur, target, &it.mesh, name.clone(), false);
            if let (Some(fb), Some(thr)) = (&it.fallback, it.threshold) {
                if input_error > thr {
                    let alt = step(&cur, target, fb, name, true);
                    if alt.error < next.error {
                        next = alt;
                    }
                }
            }
            cur = next;
        }
        cur
    }

    pub fn hash(&self, target: &Gate) -> HashResult {
        self.run(&target.quat(), self.iterations.len())
    }
}

/// Target `index` of the calibration stream for `seed`.
pub fn calibration_target(seed: u64, index: u64) -> Quat {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    crate::bench::haar_random_quat(&mut rng)
}

/// Builds a [`Hasher`] for `cfg` and hashes a single target.
pub fn hash_target(target: &Gate, cfg: &HashConfig) -> Result<HashResult, HashError> {
    Ok(Hasher::new(cfg)?.hash(target))
}
