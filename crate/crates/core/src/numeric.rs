//! Small numerical helpers: stable log-domain sums, finite differences,
//! least-squares lines and sampling grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `log(2 cosh x)` without overflow for large `|x|`.
pub fn log_2cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// Running log-sum-exp accumulator with a moving max shift.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.scaled += (x - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    /// Merges two partial sums; merging in a fixed tree order keeps results reproducible.
    pub fn merge(self, other: Self) -> Self {
        if other.max == f64::NEG_INFINITY {
            return self;
        }
        if self.max == f64::NEG_INFINITY {
            return other;
        }
        if self.max >= other.max {
            Self {
                max: self.max,
                scaled: self.scaled + other.scaled * (other.max - self.max).exp(),
            }
        } else {
            Self {
                max: other.max,
                scaled: other.scaled + self.scaled * (self.max - other.max).exp(),
            }
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

/// `log Σ exp(xs)`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let mut acc = LogSumExp::new();
    for &x in xs {
        acc.push(x);
    }
    acc.value()
}

/// Central difference `(f(x+h) - f(x-h)) / 2h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// One Richardson step on central differences with steps `h` and `h/2`.
pub fn richardson_central<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let coarse = central_difference(&f, x, h);
    let fine = central_difference(&f, x, 0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

/// Least-squares line through `(x, y)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub rms_residual: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidRange(format!(
            "line fit needs at least two paired points, got {} x and {} y",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidRange(
            "line fit abscissae are all equal".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(LineFit {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    })
}

/// Point placement for sampling grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// `n` points from `lo` to `hi` inclusive. Log spacing needs `0 < lo`.
pub fn grid(lo: f64, hi: f64, n: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidRange(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    if !(lo < hi) {
        return Err(Error::InvalidRange(format!(
            "lower bound {lo} must be below upper bound {hi}"
        )));
    }
    let last = (n - 1) as f64;
    let pts = match spacing {
        Spacing::Linear => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64) / last
                }
            })
            .collect(),
        Spacing::Log => {
            if !(lo > 0.0) {
                return Err(Error::InvalidRange(format!(
                    "log spacing needs a positive lower bound, got {lo}"
                )));
            }
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| match i {
                    0 => lo,
                    _ if i == n - 1 => hi,
                    _ => (a + (b - a) * (i as f64) / last).exp(),
                })
                .collect()
        }
    };
    Ok(pts)
}
