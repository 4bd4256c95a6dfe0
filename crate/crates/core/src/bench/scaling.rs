//! Length-error scaling of the hashing stages.
//!
//! The braid length should grow like `(ln 1/ε)²`, i.e. `√L` linear in
//! `ln(1/ε)`.

use std::fmt::Write as _;

use super::trials::TrialReport;
use super::BenchError;
use crate::su2::fmt_f64;

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub stage: String,
    pub length: u32,
    pub mean_error: f64,
    pub sqrt_length: f64,
    pub log_inv_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Fit `√L = slope · ln(1/ε) + intercept`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `ε_{i-1} / ε_i` between consecutive rows.
    pub ratios: Vec<f64>,
}

pub const MIN_STAGES: usize = 3;

/// Solovay-Kitaev exponents for comparison: `N ~ (ln 1/ε)^c`, `T ~ (ln 1/ε)^d`.
pub fn sk_exponents() -> (f64, f64) {
    let l = 1.5f64.ln();
    (5f64.ln() / l, 3f64.ln() / l)
}

/// Ordinary least squares; returns `(slope, intercept, R²)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx, sxy * sxy / (sxx * syy))
}

/// Pools the stages of every report, ordered by length.
pub fn scaling_report(reports: &[TrialReport]) -> Result<ScalingReport, BenchError> {
    let mut rows: Vec<ScalingRow> = reports
        .iter()
        .flat_map(|r| r.stages.iter())
        .map(|s| ScalingRow {
            stage: s.name.clone(),
            length: s.cumulative_length,
            mean_error: s.mean,
            sqrt_length: (s.cumulative_length as f64).sqrt(),
            log_inv_error: (1.0 / s.mean).ln(),
        })
        .collect();
    rows.retain(|r| r.mean_error > 0.0);
    if rows.len() < MIN_STAGES {
        return Err(BenchError::TooFewSamples {
            needed: MIN_STAGES,
            got: rows.len(),
        });
    }
    rows.sort_by_key(|r| r.length);
    let x: Vec<f64> = rows.iter().map(|r| r.log_inv_error).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.sqrt_length).collect();
    let (slope, intercept, r_squared) = linear_fit(&x, &y);
    let ratios = rows.windows(2).map(|w| w[0].mean_error / w[1].mean_error).collect();
    Ok(ScalingReport {
        rows,
        slope,
        intercept,
        r_squared,
        ratios,
    })
}

impl ScalingReport {
    pub fn to_text(&self) -> String {
        let mut s = String::from("stage,length,mean_error,sqrt_length,ln_inv_error\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{}",
                r.stage,
                r.length,
                fmt_f64(r.mean_error),
                fmt_f64(r.sqrt_length),
                fmt_f64(r.log_inv_error)
            )
            .unwrap();
        }
        writeln!(s, "fit.slope={}", fmt_f64(self.slope)).unwrap();
        writeln!(s, "fit.intercept={}", fmt_f64(self.intercept)).unwrap();
        writeln!(s, "fit.r_squared={}", fmt_f64(self.r_squared)).unwrap();
        for (i, r) in self.ratios.iter().enumerate() {
            writeln!(s, "ratio.{}={}", i + 1, fmt_f64(*r)).unwrap();
        }
        let (c, d) = sk_exponents();
        writeln!(s, "# hashing: L ~ (ln 1/eps)^2, T ~ ln 1/eps").unwrap();
        writeln!(s, "# Solovay-Kitaev, simple: N ~ (ln 1/eps)^{c:.2}, T ~ (ln 1/eps)^{d:.2}").unwrap();
        writeln!(s, "# Solovay-Kitaev, improved: N, T ~ (ln 1/eps)^2 ln ln 1/eps").unwrap();
        s
    }
}
