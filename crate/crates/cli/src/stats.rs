//! Aggregate statistics, histograms and empirical CDFs over per-instance
//! lengths. Percentiles use linear interpolation between order statistics;
//! std is the sample standard deviation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    pub p5: f64,
    pub p25: f64,
    pub p75: f64,
    pub p95: f64,
    pub min: f64,
    pub max: f64,
}

/// Linear-interpolation percentile (R type 7) of a sorted slice, q in [0,1].
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

pub fn aggregate(values: &[f64]) -> Aggregate {
    assert!(!values.is_empty(), "aggregate of empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let count = sorted.len();
    let mean = sorted.iter().sum::<f64>() / count as f64;
    let std = if count > 1 {
        (sorted.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    Aggregate {
        count,
        mean,
        std,
        median: percentile(&sorted, 0.5),
        p5: percentile(&sorted, 0.05),
        p25: percentile(&sorted, 0.25),
        p75: percentile(&sorted, 0.75),
        p95: percentile(&sorted, 0.95),
        min: sorted[0],
        max: sorted[count - 1],
    }
}

/// Equal-width histogram over [lo, hi]; the top edge is inclusive so the
/// counts sum to the sample size.
pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<(f64, f64, usize)> {
    assert!(bins >= 1);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 0.0 };
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = if width == 0.0 {
            0
        } else {
            (((v - lo) / width) as usize).min(bins - 1)
        };
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (lo + i as f64 * width, if i + 1 == bins { hi } else { lo + (i + 1) as f64 * width }, c))
        .collect()
}

/// Empirical CDF points (value, fraction <= value); the last fraction is 1.
pub fn ecdf(values: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = sorted.len();
    sorted.into_iter().enumerate().map(|(i, v)| (v, (i + 1) as f64 / n as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_of_known_sample() {
        let a = aggregate(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(a.count, 4);
        assert_eq!(a.mean, 2.5);
        assert_eq!(a.median, 2.5);
        assert_eq!(a.min, 1.0);
        assert_eq!(a.max, 4.0);
        assert!((a.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(a.p25, 1.75);
        assert_eq!(a.p75, 3.25);
    }

    #[test]
    fn histogram_mass_conserved() {
        let vals: Vec<f64> = (0..100).map(|i| i as f64 / 10.0).collect();
        let h = histogram(&vals, 0.0, 9.9, 7);
        assert_eq!(h.iter().map(|&(_, _, c)| c).sum::<usize>(), 100);
        // Degenerate all-equal sample lands in one bin.
        let h = histogram(&[2.0, 2.0, 2.0], 2.0, 2.0, 5);
        assert_eq!(h.iter().map(|&(_, _, c)| c).sum::<usize>(), 3);
    }

    #[test]
    fn ecdf_ends_at_one() {
        let e = ecdf(&[3.0, 1.0, 2.0]);
        assert_eq!(e.first().unwrap().0, 1.0);
        assert_eq!(e.last().unwrap().1, 1.0);
        assert!(e.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
    }
}
