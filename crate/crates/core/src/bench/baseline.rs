//! Analytic model of the best approximation among `N` uniformly random gates.
//!
//! Distances to the identity of Haar-random SU(2) elements follow
//! `p(d) = (4/π) d² √(1 - d²/4)` on `[0, √2]`. The nearest of `N` independent
//! points has survival `Q(t) = exp(-N P(t))` and density `q(t) = N p(t) Q(t)`.

use std::f64::consts::{PI, SQRT_2};

use statrs::function::gamma::{gamma, gamma_ui};

use rand::Rng;

use super::stats::{mean, std_dev};
use super::{haar_random_quat, BenchError};
use crate::weave::count_weaves_upto;

/// Density of the distance to the identity of a Haar-random gate.
pub fn pdf_bf(d: f64) -> f64 {
    if !(0.0..=SQRT_2).contains(&d) {
        return 0.0;
    }
    4.0 / PI * d * d * (1.0 - d * d / 4.0).max(0.0).sqrt()
}

/// Cumulative distribution of [`pdf_bf`].
pub fn cdf_bf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= SQRT_2 {
        return 1.0;
    }
    // d = 2 sin θ turns the density into (4/π)(1 - cos 4θ) dθ
    let theta = (x / 2.0).asin();
    4.0 / PI * (theta - (4.0 * theta).sin() / 4.0)
}

/// Mean nearest distance among `n` random gates, using the small-distance
/// form `P(t) ≈ 4t³/(3π)` truncated at `√2` (incomplete gamma closed form).
pub fn mean_nearest_distance(n: f64) -> f64 {
    let a = 1.0 / 3.0;
    let x = 8.0 * SQRT_2 * n / (3.0 * PI);
    let upper = if x > 700.0 { 0.0 } else { gamma_ui(a, x) };
    PI.powf(a) * (gamma(a) - upper) / (6f64.powf(2.0 / 3.0) * n.powf(a))
}

/// `1.021 e^{-L/5.970}`, the large-`L` form of the brute-force mean error.
pub fn asymptotic_mean_error(len: u32) -> f64 {
    1.021 * (-(len as f64) / 5.970).exp()
}

/// Nearest-approximation statistics for a brute-force search over every weave
/// of length `≤ L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaselineModel {
    pub length: u32,
    /// Number of candidate weaves, the empty word included.
    pub n: f64,
}

pub fn bf_baseline(len: u32) -> Result<BaselineModel, BenchError> {
    if len < 2 || len % 2 != 0 {
        return Err(BenchError::BadLength(len));
    }
    let n = count_weaves_upto(len)? as f64;
    Ok(BaselineModel { length: len, n })
}

impl BaselineModel {
    pub fn with_count(n: f64) -> BaselineModel {
        BaselineModel { length: 0, n }
    }

    pub fn p(&self, t: f64) -> f64 {
        pdf_bf(t)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        cdf_bf(t)
    }

    /// Probability that no candidate lies within `t`.
    pub fn survival(&self, t: f64) -> f64 {
        (-self.n * cdf_bf(t)).exp()
    }

    /// Density of the nearest distance.
    pub fn q(&self, t: f64) -> f64 {
        self.n * pdf_bf(t) * self.survival(t)
    }

    pub fn mean(&self) -> f64 {
        mean_nearest_distance(self.n)
    }

    pub fn asymptotic_mean(&self) -> f64 {
        asymptotic_mean_error(self.length)
    }
}

/// Mean and standard error of the distance to the identity of the nearest of
/// `n` Haar-random gates, over `reps` repetitions.
pub fn monte_carlo_nearest<R: Rng + ?Sized>(n: usize, reps: usize, rng: &mut R) -> (f64, f64) {
    let samples: Vec<f64> = (0..reps)
        .map(|_| {
            (0..n)
                .map(|_| haar_random_quat(rng).distance_to_identity())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    (mean(&samples), std_dev(&samples) / (reps as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_boundaries() {
        assert_eq!(cdf_bf(0.0), 0.0);
        assert!((cdf_bf(SQRT_2) - 1.0).abs() < 1e-10);
        let m = bf_baseline(8).unwrap();
        assert_eq!(m.survival(0.0), 1.0);
        assert!((m.survival(SQRT_2) - (-m.n).exp()).abs() < 1e-15);
    }

    #[test]
    fn cdf_is_integral_of_pdf() {
        // midpoint rule
        let steps = 200_000;
        let h = SQRT_2 / steps as f64;
        let mut acc = 0.0;
        for k in 0..steps {
            let t = (k as f64 + 0.5) * h;
            acc += pdf_bf(t) * h;
            if k % 50_000 == 49_999 {
                assert!((acc - cdf_bf((k + 1) as f64 * h)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn asymptotic_form_at_24() {
        assert!((asymptotic_mean_error(24) - 0.0183).abs() < 5e-5);
        // with N(24) taken as the exact-length count, the closed form matches it
        let n24 = crate::weave::count_weaves(24).unwrap() as f64;
        assert!((mean_nearest_distance(n24) / asymptotic_mean_error(24) - 1.0).abs() < 0.01);
    }

    #[test]
    fn nearest_density_mass() {
        for len in [4, 8, 16] {
            let m = bf_baseline(len).unwrap();
            let steps = 400_000;
            let h = SQRT_2 / steps as f64;
            let mass: f64 = (0..steps).map(|k| m.q((k as f64 + 0.5) * h) * h).sum();
            assert!((mass - 1.0).abs() < 1e-6, "L={len}: {mass}");
            assert!(m.q(0.3) >= 0.0);
        }
        let means: Vec<f64> = (2..=30).step_by(2).map(|l| bf_baseline(l).unwrap().mean()).collect();
        assert!(means.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn short_lengths_rejected() {
        assert!(bf_baseline(0).is_err());
        assert!(bf_baseline(7).is_err());
    }
}
