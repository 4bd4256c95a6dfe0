//! Product sets of pseudogroup elements.

use super::HashError;
use crate::approx::Pseudogroup;
use crate::groups::FiniteGroup;
use crate::su2::{Gate, Quat};
use crate::weave::{concat_all, BraidWord};

/// Largest product set we are willing to materialize.
pub const MAX_ITEMS: usize = 5_000_000;

fn checked_power(order: usize, k: u32) -> Result<usize, HashError> {
    order
        .checked_pow(k)
        .filter(|&n| n <= MAX_ITEMS)
        .ok_or(HashError::Capacity { order, power: k })
}

/// Decodes item `k` of an `order^len` mixed-radix enumeration, most
/// significant index first.
fn digits(mut k: usize, order: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = k % order;
        k /= order;
    }
    out
}

/// Quaternions of all ordered products of `len` pseudogroup elements, in
/// lexicographic index order.
fn products(p: &Pseudogroup, len: u32) -> Vec<Quat> {
    let mut out = vec![Quat::IDENTITY];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|q| (0..p.len()).map(move |i| *q * p.quat(i)))
            .collect();
    }
    out
}

/// All `O^m` ordered products `g̃_{j1} ⋯ g̃_{jm}` used by the preprocessor.
#[derive(Clone, Debug)]
pub struct ProductSet {
    source: Pseudogroup,
    m: u32,
    quats: Vec<Quat>,
}

impl ProductSet {
    pub fn build(p: &Pseudogroup, m: u32) -> Result<ProductSet, HashError> {
        if m == 0 {
            return Err(HashError::Config("m must be at least 1".into()));
        }
        checked_power(p.len(), m)?;
        Ok(ProductSet {
            source: p.clone(),
            m,
            quats: products(p, m),
        })
    }

    pub fn len(&self) -> usize {
        self.quats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quats.is_empty()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn source(&self) -> &Pseudogroup {
        &self.source
    }

    pub fn quats(&self) -> &[Quat] {
        &self.quats
    }

    pub fn indices(&self, k: usize) -> Vec<usize> {
        digits(k, self.source.len(), self.m as usize)
    }

    pub fn word(&self, k: usize) -> BraidWord {
        concat_all(self.indices(k).iter().map(|&i| self.source.word(i)))
    }
}

/// The mesh `S(L, n)`: every product `g̃_{i1} ⋯ g̃_{in} g̃_{i(n+1)}` whose
/// exact counterpart is the identity.
#[derive(Clone, Debug)]
pub struct Mesh {
    source: Pseudogroup,
    n: u32,
    closing: Vec<u8>,
    quats: Vec<Quat>,
    s0: f64,
}

impl Mesh {
    pub fn build(p: &Pseudogroup, group: &FiniteGroup, n: u32) -> Result<Mesh, HashError> {
        if n < 2 {
            return Err(HashError::Config(format!("mesh needs n >= 2, got {n}")));
        }
        if group.kind() != p.group() || group.order() != p.len() {
            return Err(HashError::Config(format!(
                "pseudogroup is for {}, not {}",
                p.group_name(),
                group.name()
            )));
        }
        let order = p.len();
        let count = checked_power(order, n)?;
        let heads = products(p, n);
        let mut closing = Vec::with_capacity(count);
        let mut quats = Vec::with_capacity(count);
        // running group products per prefix, in the same order as `heads`
        let mut exact = vec![0usize];
        for _ in 0..n {
            exact = exact.iter().flat_map(|&a| (0..order).map(move |i| group.mul(a, i))).collect();
        }
        for (q, prod) in heads.iter().zip(exact) {
            let c = group.inv(prod);
            closing.push(c as u8);
            quats.push(*q * p.quat(c));
        }
        let s0 = quats.iter().skip(1).map(Quat::distance_to_identity).sum::<f64>() / (count - 1) as f64;
        Ok(Mesh {
            source: p.clone(),
            n,
            closing,
            quats,
            s0,
        })
    }

    pub fn len(&self) -> usize {
        self.quats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quats.is_empty()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn source(&self) -> &Pseudogroup {
        &self.source
    }

    /// Mean distance to the identity, the all-identity item excluded.
    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn quats(&self) -> &[Quat] {
        &self.quats
    }

    /// `(i1, …, in, i(n+1))` for item `k`.
    pub fn indices(&self, k: usize) -> Vec<usize> {
        let mut idx = digits(k, self.source.len(), self.n as usize);
        idx.push(self.closing[k] as usize);
        idx
    }

    pub fn word(&self, k: usize) -> BraidWord {
        concat_all(self.indices(k).iter().map(|&i| self.source.word(i)))
    }

    pub fn gate(&self, k: usize) -> Gate {
        self.quats[k].to_gate()
    }

    /// Distances to the identity of every item but the first.
    pub fn distances(&self) -> Vec<f64> {
        self.quats.iter().skip(1).map(Quat::distance_to_identity).collect()
    }
}

/// Index of the item nearest to `r`, first index on ties, with its chord.
pub(crate) fn nearest(quats: &[Quat], r: &Quat) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (k, q) in quats.iter().enumerate() {
        let d2 = q.chord_sqr(r);
        if d2 < best.1 {
            best = (k, d2);
        }
    }
    (best.0, best.1.sqrt())
}
