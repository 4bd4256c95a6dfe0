//! Log-spaced histograms of error samples.

use std::fmt::Write as _;
use std::path::Path;

use super::trials::TrialReport;
use super::BenchError;
use crate::su2::fmt_f64;

pub const BINS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    /// Geometric midpoint.
    pub center: f64,
    pub count: usize,
    /// `count / (total · width)`, so the densities integrate to one.
    pub density: f64,
}

/// [`BINS`] log-spaced bins over `[min/2, 2·max]` of the positive samples.
/// Non-positive samples fall into the first bin.
pub fn histogram(samples: &[f64]) -> Vec<Bin> {
    let positive = samples.iter().copied().filter(|x| *x > 0.0);
    let min = positive.clone().fold(f64::INFINITY, f64::min);
    let max = positive.fold(0.0, f64::max);
    let (min, max) = if min.is_finite() { (min, max) } else { (1.0, 1.0) };
    let (a, b) = ((min / 2.0).ln(), (max * 2.0).ln());
    let step = (b - a) / BINS as f64;
    let edge = |k: usize| if k == BINS { max * 2.0 } else { (a + step * k as f64).exp() };
    let mut counts = vec![0usize; BINS];
    for &x in samples {
        let k = if x > 0.0 {
            (((x.ln() - a) / step).floor().max(0.0) as usize).min(BINS - 1)
        } else {
            0
        };
        counts[k] += 1;
    }
    let total = samples.len().max(1) as f64;
    (0..BINS)
        .map(|k| {
            let (lo, hi) = (edge(k), edge(k + 1));
            Bin {
                lo,
                hi,
                center: (lo * hi).sqrt(),
                count: counts[k],
                density: counts[k] as f64 / (total * (hi - lo)),
            }
        })
        .collect()
}

pub fn histogram_csv(bins: &[Bin]) -> String {
    let mut s = String::from("bin_center,count,density\n");
    for b in bins {
        writeln!(s, "{},{},{}", fmt_f64(b.center), b.count, fmt_f64(b.density)).unwrap();
    }
    s
}

/// Writes the histogram of `stage` as CSV.
pub fn emit_histogram(report: &TrialReport, stage: &str, path: impl AsRef<Path>) -> Result<(), BenchError> {
    let errors = report.stage_errors(stage)?;
    std::fs::write(path, histogram_csv(&histogram(errors)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_and_integral() {
        let xs: Vec<f64> = (1..=500).map(|k| 1e-6 * (1.0 + (k as f64).sin().abs() * 50.0)).collect();
        let bins = histogram(&xs);
        assert_eq!(bins.len(), BINS);
        assert_eq!(bins.iter().map(|b| b.count).sum::<usize>(), xs.len());
        let integral: f64 = bins.iter().map(|b| b.density * (b.hi - b.lo)).sum();
        assert!((integral - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_inputs() {
        let bins = histogram(&[0.5; 10]);
        assert_eq!(bins.iter().map(|b| b.count).sum::<usize>(), 10);
        let bins = histogram(&[0.0, 0.0]);
        assert_eq!(bins[0].count, 2);
    }
}
