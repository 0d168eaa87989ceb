//! Goodness-of-fit helpers for sampler checks.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub critical: f64,
    pub dof: usize,
}

impl ChiSquareOutcome {
    pub fn passed(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// Pearson chi-square of `counts` against `probs`, compared with the
/// `level` quantile (e.g. 0.999) of the chi-square law with `k − 1` degrees
/// of freedom.
pub fn chi_square(counts: &[u64], probs: &[f64], level: f64) -> Result<ChiSquareOutcome> {
    if counts.len() != probs.len() || counts.len() < 2 {
        return Err(Error::InvalidArgument(
            "need matching bins, at least two".into(),
        ));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument("no observations".into()));
    }
    let statistic = counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let dof = counts.len() - 1;
    let law = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(ChiSquareOutcome {
        statistic,
        critical: law.inverse_cdf(level),
        dof,
    })
}

pub fn chi_square_uniform(counts: &[u64], level: f64) -> Result<ChiSquareOutcome> {
    let p = 1.0 / counts.len() as f64;
    chi_square(counts, &vec![p; counts.len()], level)
}
