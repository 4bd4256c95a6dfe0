//! Sample statistics, the one-sample Kolmogorov-Smirnov test, and the
//! unitary Wigner-Dyson law.

use std::f64::consts::PI;

use statrs::function::erf::erf;

use super::BenchError;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (`n - 1` in the denominator).
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// `sup |F_n - F|` for the given cdf.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value of a KS statistic `d` on `n` samples, with the usual
/// small-sample correction of the argument.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=200 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

const A: f64 = 4.0 / PI;

/// `P(s) = (32 / π² s0) (s/s0)² exp(-(4/π)(s/s0)²)`, mean `s0`.
pub fn wigner_dyson_pdf(s: f64, s0: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    let x = s / s0;
    32.0 / (PI * PI * s0) * x * x * (-A * x * x).exp()
}

pub fn wigner_dyson_cdf(s: f64, s0: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let x = s / s0;
    let g = -x * (-A * x * x).exp() / (2.0 * A) + PI.sqrt() / (4.0 * A.powf(1.5)) * erf(A.sqrt() * x);
    (32.0 / (PI * PI) * g).clamp(0.0, 1.0)
}

pub const WD_MIN_SAMPLES: usize = 100;
pub const WD_SIGNIFICANCE: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WignerDysonFit {
    pub s0: f64,
    pub ks: f64,
    pub p_value: f64,
    pub pass: bool,
}

/// KS test of `samples` against the Wigner-Dyson law with `s0` set to the
/// sample mean.
pub fn wigner_dyson_test(samples: &[f64]) -> Result<WignerDysonFit, BenchError> {
    if samples.len() < WD_MIN_SAMPLES {
        return Err(BenchError::TooFewSamples {
            needed: WD_MIN_SAMPLES,
            got: samples.len(),
        });
    }
    let s0 = mean(samples);
    let ks = ks_statistic(samples, |s| wigner_dyson_cdf(s, s0));
    let p_value = ks_p_value(ks, samples.len());
    Ok(WignerDysonFit {
        s0,
        ks,
        p_value,
        pass: p_value >= WD_SIGNIFICANCE,
    })
}
