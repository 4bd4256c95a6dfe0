//! Single-qubit gate algebra.
//!
//! A [`Gate`] holds a 2×2 unitary matrix, possibly carrying a global phase
//! (the braid generators live in U(2)). Everything that compares gates works
//! on the projective SU(2) representative, which is a unit quaternion
//! `q = (w, x, y, z)` laid out as
//!
//! ```text
//!   [  w + i z    y + i x ]
//!   [ -y + i x    w - i z ]
//! ```
//!
//! so that `U(m, φ) = exp(i m·σ φ/2)` has `q = (cos φ/2, m sin φ/2)`.
//! With this layout the operator-norm distance between two SU(2) elements is
//! exactly the Euclidean chord `|q - p|` in R⁴, minimized over the sign of `p`.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Maximum per-entry deviation of `U U†` from the identity accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Accepted deviation of an axis norm from one.
pub const AXIS_TOL: f64 = 1e-9;
/// Below this `|Re tr|` the sign of the representative is fixed by the
/// argument of the first nonzero entry of the first row.
pub const SIGN_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Su2Error {
    #[error("axis norm {norm} deviates from 1 by more than {AXIS_TOL}")]
    NonUnitAxis { norm: f64 },
    #[error("angle {0} is not finite")]
    BadAngle(f64),
    #[error("matrix is not unitary (max |UU† - I| entry = {deviation:e})")]
    NonUnitary { deviation: f64 },
    #[error("cannot parse gate: {0}")]
    Parse(String),
}

/// A unit quaternion standing for an SU(2) element.
///
/// `q` and `-q` are the same rotation; see [`Quat::chord`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quat(pub [f64; 4]);

impl Quat {
    pub const IDENTITY: Quat = Quat([1.0, 0.0, 0.0, 0.0]);

    #[inline]
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat([w, x, y, z])
    }

    #[inline]
    pub fn w(&self) -> f64 {
        self.0[0]
    }

    #[inline]
    pub fn dot(&self, other: &Quat) -> f64 {
        let (a, b) = (&self.0, &other.0);
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Quat {
        let n = self.norm();
        Quat(self.0.map(|c| c / n))
    }

    /// Inverse of a unit quaternion.
    #[inline]
    pub fn inverse(&self) -> Quat {
        let q = &self.0;
        Quat([q[0], -q[1], -q[2], -q[3]])
    }

    /// Projective operator-norm distance: `min(|q - p|, |q + p|)`.
    ///
    /// Computed from coordinate differences, so it keeps full relative
    /// precision for nearly coincident rotations.
    #[inline]
    pub fn chord(&self, other: &Quat) -> f64 {
        self.chord_sqr(other).sqrt()
    }

    #[inline]
    pub fn chord_sqr(&self, other: &Quat) -> f64 {
        let (a, b) = (&self.0, &other.0);
        let s = if self.dot(other) >= 0.0 { 1.0 } else { -1.0 };
        let d0 = a[0] - s * b[0];
        let d1 = a[1] - s * b[1];
        let d2 = a[2] - s * b[2];
        let d3 = a[3] - s * b[3];
        d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3
    }

    /// Distance to the identity rotation, `2 sin(φ/4)` for rotation angle φ ≤ π.
    #[inline]
    pub fn distance_to_identity(&self) -> f64 {
        self.chord(&Quat::IDENTITY)
    }

    /// Representative with the sign convention of [`canonicalize`].
    pub fn canonical(&self) -> Quat {
        if needs_flip(self) {
            -*self
        } else {
            *self
        }
    }

    pub fn to_matrix(&self) -> [[C64; 2]; 2] {
        let [w, x, y, z] = self.0;
        [
            [C64::new(w, z), C64::new(y, x)],
            [C64::new(-y, x), C64::new(w, -z)],
        ]
    }

    pub fn to_gate(&self) -> Gate {
        Gate::from_quat(*self)
    }
}

impl Neg for Quat {
    type Output = Quat;
    #[inline]
    fn neg(self) -> Quat {
        Quat(self.0.map(|c| -c))
    }
}

impl Mul for Quat {
    type Output = Quat;

    /// Matches the matrix product of the corresponding SU(2) matrices.
    /// The imaginary units here are `iσ_k`, for which `e1 e2 = -e3`, hence
    /// the negated cross product.
    #[inline]
    fn mul(self, rhs: Quat) -> Quat {
        let [w1, x1, y1, z1] = self.0;
        let [w2, x2, y2, z2] = rhs.0;
        Quat([
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 - (y1 * z2 - z1 * y2),
            w1 * y2 + y1 * w2 - (z1 * x2 - x1 * z2),
            w1 * z2 + z1 * w2 - (x1 * y2 - y1 * x2),
        ])
    }
}

fn needs_flip(q: &Quat) -> bool {
    let [w, x, y, z] = q.0;
    if (2.0 * w).abs() >= SIGN_TIE_TOL {
        return w < 0.0;
    }
    // First row is (w + i z, y + i x); the first nonzero entry must have
    // argument in [0, π).
    for (re, im) in [(w, z), (y, x)] {
        if re.hypot(im) > SIGN_TIE_TOL {
            let in_upper = im > 0.0 || (im == 0.0 && re > 0.0);
            return !in_upper;
        }
    }
    false
}

/// Rotation axis and angle; the angle is kept in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisAngle {
    axis: [f64; 3],
    angle: f64,
}

impl AxisAngle {
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self, Su2Error> {
        let norm = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > AXIS_TOL {
            return Err(Su2Error::NonUnitAxis { norm });
        }
        if !angle.is_finite() {
            return Err(Su2Error::BadAngle(angle));
        }
        let tau = std::f64::consts::TAU;
        let mut angle = angle.rem_euclid(tau);
        if angle >= tau {
            angle = 0.0;
        }
        Ok(AxisAngle {
            axis: axis.map(|c| c / norm),
            angle,
        })
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn to_quat(&self) -> Quat {
        let (s, c) = (self.angle / 2.0).sin_cos();
        let [mx, my, mz] = self.axis;
        Quat([c, mx * s, my * s, mz * s])
    }
}

/// A single-qubit gate: a 2×2 unitary matrix, global phase included.
#[derive(Clone, Debug)]
pub struct Gate {
    entries: [[C64; 2]; 2],
    canonical: OnceLock<Quat>,
}

impl PartialEq for Gate {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Gate {
    /// Wraps a matrix after checking unitarity.
    pub fn new(entries: [[C64; 2]; 2]) -> Result<Self, Su2Error> {
        let deviation = unitarity_deviation(&entries);
        if !(deviation <= UNITARY_TOL) {
            return Err(Su2Error::NonUnitary { deviation });
        }
        Ok(Self::from_entries_unchecked(entries))
    }

    pub(crate) fn from_entries_unchecked(entries: [[C64; 2]; 2]) -> Self {
        Gate {
            entries,
            canonical: OnceLock::new(),
        }
    }

    pub fn identity() -> Self {
        Self::from_quat(Quat::IDENTITY)
    }

    pub fn from_quat(q: Quat) -> Self {
        let g = Self::from_entries_unchecked(q.to_matrix());
        let _ = g.canonical.set(q.canonical());
        g
    }

    /// `exp(i m·σ φ/2)`.
    pub fn from_axis_angle(a: &AxisAngle) -> Self {
        Self::from_entries_unchecked(a.to_quat().to_matrix())
    }

    pub fn entries(&self) -> &[[C64; 2]; 2] {
        &self.entries
    }

    pub fn det(&self) -> C64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Unit quaternion of the canonical SU(2) representative.
    pub fn quat(&self) -> Quat {
        *self.canonical.get_or_init(|| su2_quat(&self.entries).canonical())
    }

    pub fn to_axis_angle(&self) -> AxisAngle {
        let q = self.quat();
        // canonical quaternions have w ≥ 0 up to the tie band, so the
        // angle lands in [0, π]
        let [w, x, y, z] = q.0;
        let v = (x * x + y * y + z * z).sqrt();
        if v < 1e-15 {
            return AxisAngle {
                axis: [0.0, 0.0, 1.0],
                angle: 0.0,
            };
        }
        let angle = 2.0 * v.atan2(w.abs());
        let s = if w < 0.0 { -1.0 } else { 1.0 };
        AxisAngle {
            axis: [s * x / v, s * y / v, s * z / v],
            angle,
        }
    }

    pub fn dagger(&self) -> Gate {
        let m = &self.entries;
        Gate::from_entries_unchecked([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    /// Multiplies every entry by `e^{iθ}`.
    pub fn with_phase(&self, theta: f64) -> Gate {
        let p = C64::from_polar(1.0, theta);
        Gate::from_entries_unchecked(self.entries.map(|row| row.map(|e| e * p)))
    }

    /// Text form: the real and imaginary parts of the row-major entries.
    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .flatten()
            .flat_map(|e| [e.re, e.im])
            .map(fmt_f64)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Mul for &Gate {
    type Output = Gate;
    fn mul(self, rhs: &Gate) -> Gate {
        Gate::from_entries_unchecked(mat_mul(&self.entries, &rhs.entries))
    }
}

impl Mul for Gate {
    type Output = Gate;
    fn mul(self, rhs: Gate) -> Gate {
        &self * &rhs
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Gate {
    type Err = Su2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let vals = s
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|e| Su2Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if vals.len() != 8 {
            return Err(Su2Error::Parse(format!("expected 8 floats, found {}", vals.len())));
        }
        let c = |k: usize| C64::new(vals[2 * k], vals[2 * k + 1]);
        Gate::new([[c(0), c(1)], [c(2), c(3)]])
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn mat_mul(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn unitarity_deviation(m: &[[C64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..2 {
                s += m[i][k] * m[j][k].conj();
            }
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (s - target).norm();
            if dev.is_nan() {
                return f64::NAN;
            }
            worst = worst.max(dev);
        }
    }
    worst
}

/// Strips the global phase and reads off the SU(2) quaternion (unnormalized
/// sign; the caller picks the representative).
fn su2_quat(m: &[[C64; 2]; 2]) -> Quat {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let phase = det.sqrt();
    let v = m.map(|row| row.map(|e| e / phase));
    let w = (v[0][0].re + v[1][1].re) / 2.0;
    let z = (v[0][0].im - v[1][1].im) / 2.0;
    let y = (v[0][1].re - v[1][0].re) / 2.0;
    let x = (v[0][1].im + v[1][0].im) / 2.0;
    Quat([w, x, y, z]).normalized()
}

fn is_exact_su2_layout(m: &[[C64; 2]; 2]) -> bool {
    m[1][1] == m[0][0].conj() && m[1][0] == -m[0][1].conj()
}

/// Projective SU(2) representative: determinant 1, `Re tr ≥ 0`, with the
/// first-row argument rule breaking the `Re tr = 0` tie.
///
/// Idempotent bit for bit, and `canonicalize(e^{iθ} g) == canonicalize(g)`
/// up to rounding.
pub fn canonicalize(g: &Gate) -> Result<Gate, Su2Error> {
    let deviation = unitarity_deviation(&g.entries);
    if !(deviation <= UNITARY_TOL) {
        return Err(Su2Error::NonUnitary { deviation });
    }
    let m = &g.entries;
    if is_exact_su2_layout(m) {
        let q = Quat([m[0][0].re, m[0][1].im, m[0][1].re, m[0][0].im]);
        if (q.dot(&q) - 1.0).abs() <= 1e-15 && !needs_flip(&q) {
            return Ok(Gate::from_quat(q));
        }
    }
    Ok(Gate::from_quat(g.quat()))
}

/// Largest singular value of a 2×2 complex matrix: the top eigenvalue of
/// `H = A†A`, written without the `tr² - 4 det` cancellation.
pub fn spectral_norm(a: &[[C64; 2]; 2]) -> f64 {
    let h11 = a[0][0].norm_sqr() + a[1][0].norm_sqr();
    let h22 = a[0][1].norm_sqr() + a[1][1].norm_sqr();
    let h12 = a[0][0].conj() * a[0][1] + a[1][0].conj() * a[1][1];
    let half = (h11 - h22) / 2.0;
    let top = (h11 + h22) / 2.0 + half.hypot(h12.norm());
    top.max(0.0).sqrt()
}

/// Operator-norm distance between the canonical representatives, minimized
/// over the residual sign. Range `[0, √2]`.
pub fn distance(u: &Gate, v: &Gate) -> Result<f64, Su2Error> {
    let cu = canonicalize(u)?;
    let cv = canonicalize(v)?;
    let (a, b) = (&cu.entries, &cv.entries);
    let mut diff = [[C64::new(0.0, 0.0); 2]; 2];
    let mut sum = diff;
    for i in 0..2 {
        for j in 0..2 {
            diff[i][j] = a[i][j] - b[i][j];
            sum[i][j] = a[i][j] + b[i][j];
        }
    }
    Ok(spectral_norm(&diff).min(spectral_norm(&sum)))
}

/// Closed-form distance between `U(m, φ)` and `U(n, θ)`.
pub fn axis_angle_distance(a: &AxisAngle, b: &AxisAngle) -> f64 {
    let (sp, cp) = (a.angle / 2.0).sin_cos();
    let (st, ct) = (b.angle / 2.0).sin_cos();
    let mn: f64 = a.axis.iter().zip(&b.axis).map(|(x, y)| x * y).sum();
    (2.0 - 2.0 * cp * ct - 2.0 * mn * sp * st).max(0.0).sqrt()
}

/// Named gates accepted on the command line.
pub fn named_gate(name: &str) -> Option<Gate> {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let m = match name {
        "I" => [[one, z], [z, one]],
        "X" => [[z, one], [one, z]],
        "Y" => [[z, -i], [i, z]],
        "Z" => [[one, z], [z, -one]],
        "iY" => [[z, one], [-one, z]],
        "H" => [[one * h, one * h], [one * h, -one * h]],
        _ => return None,
    };
    Some(Gate::from_entries_unchecked(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn aa(axis: [f64; 3], angle: f64) -> AxisAngle {
        AxisAngle::new(axis, angle).unwrap()
    }

    fn close(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2], tol: f64) -> bool {
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn zero_rotation_is_identity() {
        let g = Gate::from_axis_angle(&aa([0.6, 0.0, 0.8], 0.0));
        assert!(close(g.entries(), Gate::identity().entries(), 1e-15));
    }

    #[test]
    fn z_rotation_is_diagonal() {
        let phi = 1.234;
        let g = Gate::from_axis_angle(&aa([0.0, 0.0, 1.0], phi));
        let (s, c) = (phi / 2.0).sin_cos();
        let want = [
            [C64::new(c, s), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(c, -s)],
        ];
        assert!(close(g.entries(), &want, 1e-15));
    }

    #[test]
    fn rejects_non_unit_axis() {
        assert!(matches!(
            AxisAngle::new([1.0, 1.0, 0.0], 0.3),
            Err(Su2Error::NonUnitAxis { .. })
        ));
        assert!(AxisAngle::new([1.0 + 5e-10, 0.0, 0.0], 0.3).is_ok());
    }

    #[test]
    fn quat_product_matches_matrix_product() {
        let a = aa([0.0, 0.6, 0.8], 2.1).to_quat();
        let b = aa([1.0, 0.0, 0.0], 0.7).to_quat();
        let want = mat_mul(&a.to_matrix(), &b.to_matrix());
        assert!(close(&(a * b).to_matrix(), &want, 1e-15));
    }

    #[test]
    fn same_axis_angles_add() {
        let m = [0.48, 0.6, 0.64];
        let (p1, p2) = (4.0, 3.5);
        let prod = &Gate::from_axis_angle(&aa(m, p1)) * &Gate::from_axis_angle(&aa(m, p2));
        let sum = Gate::from_axis_angle(&aa(m, p1 + p2));
        assert!(distance(&prod, &sum).unwrap() < 1e-12);
    }

    #[test]
    fn to_axis_angle_identity_and_diag() {
        let id = Gate::identity().to_axis_angle();
        assert_eq!(id.axis(), [0.0, 0.0, 1.0]);
        assert_eq!(id.angle(), 0.0);

        let d = Gate::new([
            [C64::from_polar(1.0, FRAC_PI_4), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::from_polar(1.0, -FRAC_PI_4)],
        ])
        .unwrap();
        let r = d.to_axis_angle();
        assert!((r.angle() - FRAC_PI_2).abs() < 1e-12);
        assert!((r.axis()[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonicalize_removes_phase() {
        let id = Gate::identity();
        assert_eq!(canonicalize(&id).unwrap(), id);
        let ph = id.with_phase(PI / 7.0);
        let c = canonicalize(&ph).unwrap();
        assert!(close(c.entries(), id.entries(), 1e-15));
    }

    #[test]
    fn canonicalize_rejects_non_unitary() {
        let bad = Gate::from_entries_unchecked([
            [C64::new(2.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ]);
        assert!(matches!(canonicalize(&bad), Err(Su2Error::NonUnitary { .. })));
        assert!(distance(&bad, &Gate::identity()).is_err());
        let nan = Gate::from_entries_unchecked([[C64::new(f64::NAN, 0.0); 2]; 2]);
        assert!(canonicalize(&nan).is_err());
    }

    #[test]
    fn tie_rule_at_zero_trace() {
        // iZ and -iZ: Re tr = 0; the representative has arg(first entry) in [0, π)
        let g = Gate::from_quat(Quat::new(0.0, 0.0, 0.0, -1.0));
        let c = canonicalize(&g).unwrap();
        assert_eq!(c.entries()[0][0], C64::new(-0.0, 1.0));
        let x = Gate::from_quat(Quat::new(0.0, -1.0, 0.0, 0.0));
        let c = canonicalize(&x).unwrap();
        assert!(c.entries()[0][1].im > 0.0);
    }

    #[test]
    fn distance_to_pi_rotation_is_sqrt2() {
        let g = Gate::from_axis_angle(&aa([0.0, 1.0, 0.0], PI));
        let d = distance(&Gate::identity(), &g).unwrap();
        assert!((d - SQRT_2).abs() < 1e-12);
        assert!((d - 2.0 * (PI / 4.0).sin()).abs() < 1e-12);
        assert_eq!(distance(&g, &g).unwrap(), 0.0);
    }

    #[test]
    fn gate_text_roundtrip() {
        let g = Gate::from_axis_angle(&aa([0.0, 0.6, 0.8], 1.0)).with_phase(0.3);
        let back: Gate = g.to_text().parse().unwrap();
        assert_eq!(back, g);
        assert!("1 2 3".parse::<Gate>().is_err());
        assert!("1 0 0 0 0 0 2 0".parse::<Gate>().is_err());
    }

    #[test]
    fn named_gates_are_unitary() {
        for n in ["I", "X", "Y", "Z", "iY", "H"] {
            let g = named_gate(n).unwrap();
            assert!(canonicalize(&g).is_ok(), "{n}");
        }
        assert!(named_gate("T").is_none());
    }
}
