use serde::Serialize;

/// Bins with fewer samples are left out of the calibration error.
pub const DEFAULT_MIN_BIN_COUNT: u64 = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    pub mean_belief: f64,
    pub truth_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub policy: String,
    pub samples: u64,
    pub bins: Vec<CalibrationBin>,
    /// Largest `|mean belief - truth fraction|` over bins with enough samples.
    pub calibration_error: f64,
    /// Mean quadratic score `(belief - truth)^2`.
    pub brier: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
struct BinAccumulator {
    count: u64,
    truths: u64,
    belief_sum: f64,
}

/// Weighted (belief, outcome) accumulator over equal-width bins on `[0, 1]`.
///
/// Bin `i` covers `[i/k, (i+1)/k)`; a belief of exactly 1 goes to the top bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibrator {
    bins: Vec<BinAccumulator>,
    brier_sum: f64,
}

impl Calibrator {
    pub fn new(bins: usize) -> Self {
        assert!(bins > 0, "at least one bin");
        Calibrator {
            bins: vec![BinAccumulator::default(); bins],
            brier_sum: 0.0,
        }
    }

    pub fn bin_of(&self, belief: f64) -> usize {
        let k = self.bins.len();
        // guard against 0.3 * 10 = 2.9999999999999996
        let scaled = (belief * k as f64 + 1e-12).floor();
        (scaled.max(0.0) as usize).min(k - 1)
    }

    /// Records `weight` statements believed to degree `belief` with outcome `truth`.
    pub fn add(&mut self, belief: f64, truth: bool, weight: u64) {
        if weight == 0 {
            return;
        }
        let i = self.bin_of(belief);
        let bin = &mut self.bins[i];
        bin.count += weight;
        bin.belief_sum += belief * weight as f64;
        let outcome = if truth {
            bin.truths += weight;
            1.0
        } else {
            0.0
        };
        self.brier_sum += (belief - outcome) * (belief - outcome) * weight as f64;
    }

    pub fn merge(&mut self, other: &Calibrator) {
        assert_eq!(self.bins.len(), other.bins.len());
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            a.count += b.count;
            a.truths += b.truths;
            a.belief_sum += b.belief_sum;
        }
        self.brier_sum += other.brier_sum;
    }

    pub fn samples(&self) -> u64 {
        self.bins.iter().map(|b| b.count).sum()
    }

    pub fn report(&self, policy: &str, min_bin_count: u64) -> CalibrationReport {
        let k = self.bins.len() as f64;
        let bins: Vec<CalibrationBin> = self
            .bins
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let (mean_belief, truth_fraction) = if b.count == 0 {
                    (0.0, 0.0)
                } else {
                    (
                        b.belief_sum / b.count as f64,
                        b.truths as f64 / b.count as f64,
                    )
                };
                CalibrationBin {
                    lo: i as f64 / k,
                    hi: (i + 1) as f64 / k,
                    count: b.count,
                    mean_belief,
                    truth_fraction,
                }
            })
            .collect();
        let calibration_error = bins
            .iter()
            .filter(|b| b.count >= min_bin_count && b.count > 0)
            .map(|b| (b.mean_belief - b.truth_fraction).abs())
            .fold(0.0, f64::max);
        let samples = self.samples();
        CalibrationReport {
            policy: policy.to_string(),
            samples,
            bins,
            calibration_error,
            brier: if samples == 0 {
                0.0
            } else {
                self.brier_sum / samples as f64
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bin_boundaries() {
        let c = Calibrator::new(10);
        assert_eq!(c.bin_of(0.0), 0);
        assert_eq!(c.bin_of(0.1), 1);
        assert_eq!(c.bin_of(0.3), 3);
        assert_eq!(c.bin_of(0.7), 7);
        assert_eq!(c.bin_of(0.999), 9);
        assert_eq!(c.bin_of(1.0), 9);
    }

    #[test]
    fn perfect_calibration() {
        let mut c = Calibrator::new(10);
        c.add(0.75, true, 3);
        c.add(0.75, false, 1);
        c.add(0.0, false, 40);
        let r = c.report("x", 1);
        assert_eq!(r.samples, 44);
        assert_eq!(r.bins[7].count, 4);
        assert!((r.bins[7].truth_fraction - 0.75).abs() < 1e-12);
        assert!(r.calibration_error < 1e-12);
        let expected_brier = (3.0 * 0.0625 + 0.5625) / 44.0;
        assert!((r.brier - expected_brier).abs() < 1e-12);
    }

    #[test]
    fn small_bins_are_ignored() {
        let mut c = Calibrator::new(10);
        c.add(0.95, false, 5);
        c.add(0.05, false, 100);
        let r = c.report("x", DEFAULT_MIN_BIN_COUNT);
        assert!((r.calibration_error - 0.05).abs() < 1e-12);
    }

    #[test]
    fn merge_adds_counts() {
        let mut a = Calibrator::new(4);
        a.add(0.5, true, 2);
        let mut b = Calibrator::new(4);
        b.add(0.5, false, 2);
        a.merge(&b);
        let r = a.report("x", 1);
        assert_eq!(r.bins[2].count, 4);
        assert!((r.bins[2].truth_fraction - 0.5).abs() < 1e-12);
    }
}
