//! Deterministic summation and small summary-statistics helpers.
//!
//! Batch statistics must be byte-identical regardless of worker count, so
//! every reduction here is a pairwise (tree) sum over a slice in index order.

/// Pairwise (tree) summation. Deterministic for a fixed element order and
/// substantially more accurate than a running sum on long inputs.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LINEAR_CUTOFF: usize = 32;
    if xs.len() <= LINEAR_CUTOFF {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Sample standard deviation (n − 1 denominator); 0 for fewer than two samples.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|&x| (x - m) * (x - m)).collect();
    (pairwise_sum(&sq) / (xs.len() - 1) as f64).sqrt()
}

/// Quantile by linear interpolation on a sorted slice, `q` in `[0, 1]`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty slice");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let w = pos - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    }
}

/// Fixed-range histogram with equally sized bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        assert!(bins > 0 && hi > lo, "invalid histogram range");
        Self { lo, hi, counts: vec![0; bins] }
    }

    /// Values outside `[lo, hi]` are clamped into the edge bins.
    pub fn add(&mut self, x: f64) {
        let bins = self.counts.len();
        let t = (x - self.lo) / (self.hi - self.lo);
        let i = ((t * bins as f64).floor() as i64).clamp(0, bins as i64 - 1) as usize;
        self.counts[i] += 1;
    }

    pub fn from_values(lo: f64, hi: f64, bins: usize, values: &[f64]) -> Self {
        let mut h = Self::new(lo, hi, bins);
        for &v in values {
            h.add(v);
        }
        h
    }

    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = (self.hi - self.lo) / self.counts.len() as f64;
        (self.lo + w * i as f64, self.lo + w * (i + 1) as f64)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Count modes of a Gaussian kernel density estimate over `samples`.
///
/// A mode is a strict local maximum of the KDE evaluated on a uniform grid
/// that rises above `floor_frac` of the global peak and is separated from the
/// previously kept mode by a valley below 80% of the smaller peak. Bandwidth
/// follows Silverman's rule.
pub fn kde_mode_count(samples: &[f64], floor_frac: f64) -> usize {
    if samples.len() < 3 {
        return samples.is_empty().then_some(0).unwrap_or(1);
    }
    let sd = sample_sd(samples);
    if sd == 0.0 {
        return 1;
    }
    let bw = 1.06 * sd * (samples.len() as f64).powf(-0.2);
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min) - 3.0 * bw;
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 3.0 * bw;
    const GRID: usize = 512;
    let step = (hi - lo) / (GRID - 1) as f64;
    let mut dens = vec![0.0f64; GRID];
    for (g, d) in dens.iter_mut().enumerate() {
        let x = lo + g as f64 * step;
        let mut acc = 0.0;
        for &s in samples {
            let z = (x - s) / bw;
            acc += (-0.5 * z * z).exp();
        }
        *d = acc;
    }
    let peak = dens.iter().cloned().fold(0.0f64, f64::max);
    if peak == 0.0 {
        return 0;
    }
    let floor = floor_frac * peak;
    let mut modes = 0usize;
    let mut last_peak = 0.0f64;
    let mut valley = f64::INFINITY;
    for i in 1..GRID - 1 {
        valley = valley.min(dens[i]);
        if dens[i] > dens[i - 1] && dens[i] >= dens[i + 1] && dens[i] > floor {
            let is_first = modes == 0;
            let separated = valley < 0.8 * dens[i].min(last_peak);
            if is_first || separated {
                modes += 1;
                last_peak = dens[i];
                valley = f64::INFINITY;
            } else if dens[i] > last_peak {
                // same cluster, higher summit
                last_peak = dens[i];
            }
        }
    }
    modes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let xs: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 55.0);
    }

    #[test]
    fn pairwise_is_order_of_evaluation_stable() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.7).sin() * 1e-3).collect();
        assert_eq!(pairwise_sum(&xs), pairwise_sum(&xs));
    }

    #[test]
    fn sd_of_constant_is_zero() {
        assert_eq!(sample_sd(&[2.0, 2.0, 2.0]), 0.0);
    }

    #[test]
    fn sd_known_value() {
        // var of {1,2,3,4} with n-1 denominator is 5/3
        let sd = sample_sd(&[1.0, 2.0, 3.0, 4.0]);
        assert!((sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn histogram_clamps_to_edges() {
        let h = Histogram::from_values(0.0, 1.0, 4, &[-1.0, 0.1, 0.6, 2.0]);
        assert_eq!(h.counts, vec![2, 0, 1, 1]);
        assert_eq!(h.total(), 4);
    }

    #[test]
    fn quantiles_interpolate() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&xs, 0.5), 3.0);
        assert_eq!(quantile_sorted(&xs, 0.0), 1.0);
        assert_eq!(quantile_sorted(&xs, 1.0), 5.0);
        assert!((quantile_sorted(&xs, 0.25) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn kde_separates_two_far_clusters() {
        let mut xs = Vec::new();
        for i in 0..200 {
            xs.push(0.0 + (i % 20) as f64 * 0.001);
            xs.push(10.0 + (i % 20) as f64 * 0.001);
        }
        assert_eq!(kde_mode_count(&xs, 0.05), 2);
    }

    #[test]
    fn kde_single_cluster_is_unimodal() {
        let xs: Vec<f64> = (0..500).map(|i| (i as f64 / 500.0 - 0.5) * 0.1).collect();
        assert_eq!(kde_mode_count(&xs, 0.05), 1);
    }
}
