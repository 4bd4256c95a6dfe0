//! Finite rotation subgroups of SU(2)/±1: the icosahedral group (order 60)
//! and the cubic group (order 24).
//!
//! Elements are listed as the identity (index 0) followed by the rotations
//! about each symmetry axis, highest axis order first. Multiplication and
//! inverse tables are exact integer tables matched once at construction.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::su2::{AxisAngle, Gate, Quat};

/// Tolerance used to identify a product with a table element. Distinct
/// elements are at least ~0.3 apart.
pub const TABLE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("product of elements {0} and {1} matches no element (closure violated)")]
    Closure(usize, usize),
    #[error("expected {expected} elements, built {found}")]
    Order { expected: usize, found: usize },
    #[error("unknown group {0:?}")]
    Unknown(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Icosahedral,
    Cubic,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Icosahedral => "icosahedral",
            GroupKind::Cubic => "cubic",
        }
    }

    pub fn order(self) -> usize {
        match self {
            GroupKind::Icosahedral => 60,
            GroupKind::Cubic => 24,
        }
    }

    pub fn build(self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupKind::Icosahedral => build_icosahedral(),
            GroupKind::Cubic => build_cubic(),
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupKind {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "icosahedral" => Ok(GroupKind::Icosahedral),
            "cubic" => Ok(GroupKind::Cubic),
            _ => Err(GroupError::Unknown(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    kind: GroupKind,
    elements: Vec<Gate>,
    quats: Vec<Quat>,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

impl FiniteGroup {
    fn from_rotations(kind: GroupKind, rotations: Vec<AxisAngle>) -> Result<Self, GroupError> {
        let order = rotations.len();
        if order != kind.order() {
            return Err(GroupError::Order {
                expected: kind.order(),
                found: order,
            });
        }
        let quats: Vec<Quat> = rotations.iter().map(|r| r.to_quat().canonical()).collect();
        let find = |q: &Quat| quats.iter().position(|p| p.chord(q) < TABLE_TOL);
        let mut mul = vec![0u8; order * order];
        for i in 0..order {
            for j in 0..order {
                let k = find(&(quats[i] * quats[j])).ok_or(GroupError::Closure(i, j))?;
                mul[i * order + j] = k as u8;
            }
        }
        let inv = (0..order)
            .map(|i| {
                (0..order)
                    .find(|&j| mul[i * order + j] == 0)
                    .map(|j| j as u8)
                    .ok_or(GroupError::Closure(i, i))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroup {
            kind,
            elements: quats.iter().map(|q| Gate::from_quat(*q)).collect(),
            quats,
            mul,
            inv,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &Gate {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Gate] {
        &self.elements
    }

    pub fn quat(&self, i: usize) -> Quat {
        self.quats[i]
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.order() + j] as usize
    }

    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    /// Index `k` with `g_{i1} ⋯ g_{in} g_k = e`, from the tables alone.
    pub fn closing_element(&self, indices: &[usize]) -> usize {
        let product = indices.iter().fold(0, |acc, &i| self.mul(acc, i));
        self.inv(product)
    }
}

/// Direction canonical up to sign: first nonzero component positive.
fn orient(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let v = v.map(|c| c / n);
    let lead = v.iter().copied().find(|c| c.abs() > 1e-9).unwrap_or(1.0);
    if lead < 0.0 {
        v.map(|c| -c)
    } else {
        v
    }
}

fn dedup_axes(axes: Vec<[f64; 3]>) -> Vec<[f64; 3]> {
    let mut out: Vec<[f64; 3]> = Vec::new();
    for a in axes.into_iter().map(orient) {
        if !out.iter().any(|b| dist2(&a, b) < 1e-18) {
            out.push(a.map(|c| if c.abs() < 1e-12 { 0.0 } else { c }));
        }
    }
    // descending lexicographic, so (1, 0, 0)-like axes come first
    let key = |v: &[f64; 3]| v.map(|c| -(c * 1e9).round() as i64);
    out.sort_by_key(key);
    out
}

fn rotations_about(axes: &[[f64; 3]], fold: u32, out: &mut Vec<AxisAngle>) {
    for axis in axes {
        for k in 1..fold {
            out.push(AxisAngle::new(*axis, TAU * k as f64 / fold as f64).expect("unit axis"));
        }
    }
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum()
}

/// The 60 proper rotations of the icosahedron with vertices at the cyclic
/// permutations of `(0, ±1, ±φ)`.
pub fn build_icosahedral() -> Result<FiniteGroup, GroupError> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts = Vec::with_capacity(12);
    for s1 in [1.0, -1.0] {
        for s2 in [phi, -phi] {
            verts.push([0.0, s1, s2]);
            verts.push([s1, s2, 0.0]);
            verts.push([s2, 0.0, s1]);
        }
    }
    // edge length is 2
    let adjacent = |a: usize, b: usize| (dist2(&verts[a], &verts[b]) - 4.0).abs() < 1e-9;
    let mut edges = Vec::new();
    let mut faces = Vec::new();
    for a in 0..12 {
        for b in a + 1..12 {
            if !adjacent(a, b) {
                continue;
            }
            edges.push([0, 1, 2].map(|i| verts[a][i] + verts[b][i]));
            for c in b + 1..12 {
                if adjacent(a, c) && adjacent(b, c) {
                    faces.push([0, 1, 2].map(|i| verts[a][i] + verts[b][i] + verts[c][i]));
                }
            }
        }
    }
    let five = dedup_axes(verts);
    let three = dedup_axes(faces);
    let two = dedup_axes(edges);
    debug_assert_eq!((five.len(), three.len(), two.len()), (6, 10, 15));

    let mut rots = vec![AxisAngle::new([0.0, 0.0, 1.0], 0.0).expect("unit axis")];
    rotations_about(&five, 5, &mut rots);
    rotations_about(&three, 3, &mut rots);
    rotations_about(&two, 2, &mut rots);
    FiniteGroup::from_rotations(GroupKind::Icosahedral, rots)
}

/// The 24 proper rotations of the cube `[-1, 1]³`.
pub fn build_cubic() -> Result<FiniteGroup, GroupError> {
    let four = dedup_axes(vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    let mut diag = Vec::new();
    let mut face = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            diag.push([1.0, s1, s2]);
            face.push([1.0, s1, 0.0]);
            face.push([0.0, 1.0, s1]);
            face.push([s2, 0.0, 1.0]);
        }
    }
    let three = dedup_axes(diag);
    let two = dedup_axes(face);
    debug_assert_eq!((three.len(), two.len()), (4, 6));

    let mut rots = vec![AxisAngle::new([0.0, 0.0, 1.0], 0.0).expect("unit axis")];
    rotations_about(&four, 4, &mut rots);
    rotations_about(&three, 3, &mut rots);
    rotations_about(&two, 2, &mut rots);
    FiniteGroup::from_rotations(GroupKind::Cubic, rots)
}

/// SO(3) rotation angle in `[0, π]` of a group element.
pub fn rotation_angle(q: &Quat) -> f64 {
    let w = q.w().abs().min(1.0);
    let v = (1.0 - w * w).max(0.0).sqrt();
    (2.0 * v.atan2(w)).min(PI)
}
