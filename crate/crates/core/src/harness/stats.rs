//! Normal-approximation summaries.

use super::HarnessError;

pub const Z95: f64 = 1.96;
pub const Z99: f64 = 2.576;

/// Mean, sample standard deviation and CI half-widths `z · std / √count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub ci95: f64,
    pub ci99: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let count = values.len();
        if count == 0 {
            return Summary { count, mean: f64::NAN, std: f64::NAN, ci95: f64::NAN, ci99: f64::NAN };
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let std = if count > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        let se = std / (count as f64).sqrt();
        Summary { count, mean, std, ci95: Z95 * se, ci99: Z99 * se }
    }

    pub fn of_u64(values: impl IntoIterator<Item = u64>) -> Summary {
        let v: Vec<f64> = values.into_iter().map(|x| x as f64).collect();
        Summary::of(&v)
    }

    pub fn lower99(&self) -> f64 {
        self.mean - self.ci99
    }

    pub fn upper99(&self) -> f64 {
        self.mean + self.ci99
    }

    /// Whether the 99% intervals of `self` and `other` intersect.
    pub fn overlaps99(&self, other: &Summary) -> bool {
        self.lower99() <= other.upper99() && other.lower99() <= self.upper99()
    }

    /// `self.mean ≤ other.mean`, or the 99% intervals overlap.
    pub fn le_up_to_overlap(&self, other: &Summary) -> bool {
        self.mean <= other.mean || self.overlaps99(other)
    }
}

/// `speedup = baseline / mean_t_par`, `efficiency = speedup / μ`.
pub fn speedup_efficiency(baseline: Option<f64>, mean_t_par: f64, mu: usize) -> Result<(f64, f64), HarnessError> {
    let baseline = baseline.ok_or(HarnessError::MissingBaseline)?;
    if !(mean_t_par > 0.0) || mu == 0 {
        return Err(HarnessError::Config(format!("need mean t_par > 0 and mu >= 1, got {mean_t_par}, {mu}")));
    }
    let speedup = baseline / mean_t_par;
    Ok((speedup, speedup / mu as f64))
}
