use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const CLAMP_TOL: f64 = 1e-12;
// Slack on top of the declared tail tolerance for floating-point summation.
const SUM_SLACK: f64 = 1e-10;

/// Probabilities of discrete measurement outcomes together with their
/// derivative with respect to the estimated parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub labels: Vec<usize>,
    pub probs: Vec<f64>,
    pub dprobs: Vec<f64>,
    pub tail_tol: f64,
}

impl OutcomeDistribution {
    /// Validates lengths and sums; entries in `[−1e−12, 0)` are clamped to 0.
    pub fn new(labels: Vec<usize>, probs: Vec<f64>, dprobs: Vec<f64>, tail_tol: f64) -> Result<Self> {
        if probs.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: probs.len(),
            });
        }
        if dprobs.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: dprobs.len(),
            });
        }
        let mut probs = probs;
        for (k, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -CLAMP_TOL {
                return Err(Error::NegativeProbability {
                    outcome: labels[k],
                    value: *p,
                });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if total > 1.0 + SUM_SLACK || total < 1.0 - tail_tol - SUM_SLACK {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {total:.12} (tail tolerance {tail_tol:.1e})"
            )));
        }
        let dtotal: f64 = dprobs.iter().sum();
        if !dtotal.is_finite() || dtotal.abs() > tail_tol + SUM_SLACK {
            return Err(Error::InvalidState(format!(
                "probability derivatives sum to {dtotal:.3e} (tail tolerance {tail_tol:.1e})"
            )));
        }
        Ok(Self {
            labels,
            probs,
            dprobs,
            tail_tol,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Merges outcomes mapped to the same new label by `f`.
    pub fn coarse_grain(&self, f: impl Fn(usize) -> usize) -> Result<Self> {
        let mut labels: Vec<usize> = Vec::new();
        let mut probs = Vec::new();
        let mut dprobs = Vec::new();
        for k in 0..self.len() {
            let l = f(self.labels[k]);
            match labels.iter().position(|&x| x == l) {
                Some(i) => {
                    probs[i] += self.probs[k];
                    dprobs[i] += self.dprobs[k];
                }
                None => {
                    labels.push(l);
                    probs.push(self.probs[k]);
                    dprobs.push(self.dprobs[k]);
                }
            }
        }
        Self::new(labels, probs, dprobs, self.tail_tol)
    }

    /// Joint distribution of two independent experiments sharing the
    /// parameter; outcome `(i, j)` is labelled `i · other.len() + j`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let m = other.len();
        let mut labels = Vec::with_capacity(self.len() * m);
        let mut probs = Vec::with_capacity(self.len() * m);
        let mut dprobs = Vec::with_capacity(self.len() * m);
        for i in 0..self.len() {
            for j in 0..m {
                labels.push(i * m + j);
                probs.push(self.probs[i] * other.probs[j]);
                dprobs.push(self.dprobs[i] * other.probs[j] + self.probs[i] * other.dprobs[j]);
            }
        }
        Self::new(labels, probs, dprobs, self.tail_tol + other.tail_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_tiny_negatives() {
        let d = OutcomeDistribution::new(vec![0, 1], vec![1.0, -1e-13], vec![0.0, 0.0], 1e-8).unwrap();
        assert_eq!(d.probs[1], 0.0);
        assert!(OutcomeDistribution::new(vec![0, 1], vec![1.0, -1e-9], vec![0.0, 0.0], 1e-8).is_err());
    }

    #[test]
    fn rejects_bad_sums() {
        assert!(OutcomeDistribution::new(vec![0, 1], vec![0.5, 0.4], vec![0.0, 0.0], 1e-8).is_err());
        assert!(OutcomeDistribution::new(vec![0, 1], vec![0.5, 0.5], vec![1.0, 0.0], 1e-8).is_err());
    }

    #[test]
    fn parity_coarse_graining() {
        let d = OutcomeDistribution::new(
            vec![0, 1, 2, 3],
            vec![0.4, 0.3, 0.2, 0.1],
            vec![-0.1, 0.05, 0.03, 0.02],
            1e-8,
        )
        .unwrap();
        let p = d.coarse_grain(|n| n % 2).unwrap();
        assert_eq!(p.labels, vec![0, 1]);
        assert!((p.probs[0] - 0.6).abs() < 1e-15);
        assert!((p.dprobs[1] - 0.07).abs() < 1e-15);
    }
}
