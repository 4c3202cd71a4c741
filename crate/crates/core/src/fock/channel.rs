use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_nonneg, Error, Result};
use crate::model::{LindbladModel, OutcomeDistribution, DEFAULT_TAIL_TOL};

/// Largest input photon number accepted by [`thermal_mix_distribution`].
pub const MAX_INPUT_PHOTONS: usize = 60;

/// Beamsplitter of transmissivity `κ` mixing the mode with a thermal
/// environment of `n_env` mean photons, the environment sum cut at
/// `env_cutoff` terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kappa: f64,
    pub n_env: f64,
    pub env_cutoff: usize,
    pub tail_tol: f64,
}

impl ChannelSpec {
    /// Chooses `env_cutoff` so that both the discarded thermal weight and its
    /// `n_env`-derivative are below `tail_tol / 10`.
    pub fn new(kappa: f64, n_env: f64, tail_tol: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
                reason: "transmissivity must lie in (0, 1]",
            });
        }
        check_nonneg("n_env", n_env)?;
        Ok(Self {
            kappa,
            n_env,
            env_cutoff: env_cutoff_for(n_env, 0.1 * tail_tol),
            tail_tol,
        })
    }

    /// `κ = e^{−Γt}` for the model's bath.
    pub fn from_model(model: &LindbladModel, t: f64) -> Result<Self> {
        check_nonneg("t", t)?;
        Self::new((-model.gamma * t).exp(), model.n_env, DEFAULT_TAIL_TOL)
    }

    /// Thermal weights `p(m) = n^m/(n+1)^{m+1}` for `m < env_cutoff`.
    pub fn weights(&self) -> Vec<f64> {
        thermal_weights(self.n_env, self.env_cutoff)
    }

    /// `∂p(m)/∂n_env`.
    pub fn weight_derivatives(&self) -> Vec<f64> {
        thermal_weight_derivatives(self.n_env, self.env_cutoff)
    }
}

fn env_cutoff_for(n: f64, tol: f64) -> usize {
    if n == 0.0 {
        // m = 1 still carries the derivative
        return 2;
    }
    let q = n / (n + 1.0);
    let mut m = 2usize;
    loop {
        let tail = q.powi(m as i32);
        let dtail = m as f64 * q.powi(m as i32 - 1) / ((n + 1.0) * (n + 1.0));
        if tail < tol && dtail < tol {
            return m;
        }
        m += 1;
    }
}

pub fn thermal_weights(n: f64, count: usize) -> Vec<f64> {
    let q = n / (n + 1.0);
    (0..count)
        .map(|m| q.powi(m as i32) / (n + 1.0))
        .collect()
}

pub fn thermal_weight_derivatives(n: f64, count: usize) -> Vec<f64> {
    if n == 0.0 {
        return (0..count)
            .map(|m| match m {
                0 => -1.0,
                1 => 1.0,
                _ => 0.0,
            })
            .collect();
    }
    thermal_weights(n, count)
        .into_iter()
        .enumerate()
        .map(|(m, p)| p * (m as f64 / n - (m as f64 + 1.0) / (n + 1.0)))
        .collect()
}

/// Output photon-number distribution of mode `a` when `|n⟩_a|m⟩_b` passes a
/// beamsplitter of transmissivity `κ`: entry `n′` is `p(n′ | n, m)` for
/// `n′ = 0, …, n + m`.
///
/// The amplitudes are columns of the rotation `exp(θ(a†b − b†a))`,
/// `cos²θ = κ`, restricted to `n + m` photons and computed by
/// diagonalisation, which is unitary to working precision.
pub fn beamsplitter_distribution(n: usize, m: usize, kappa: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            value: kappa,
            reason: "transmissivity must lie in [0, 1]",
        });
    }
    let total = n + m;
    let dim = total + 1;
    if kappa == 1.0 {
        let mut p = vec![0.0; dim];
        p[n] = 1.0;
        return Ok(p);
    }
    if total == 0 {
        return Ok(vec![1.0]);
    }
    let theta = kappa.sqrt().acos();
    // i·G with G_{k+1,k} = √((k+1)(N−k)) = −G_{k,k+1}
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..total {
        let g = (((k + 1) * (total - k)) as f64).sqrt();
        h[(k + 1, k)] = Complex64::new(0.0, g);
        h[(k, k + 1)] = Complex64::new(0.0, -g);
    }
    let eig = h.symmetric_eigen();
    let w = &eig.eigenvectors;
    let mut amp = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        let phase = Complex64::from_polar(1.0, -theta * eig.eigenvalues[j]) * w[(n, j)].conj();
        for (k, a) in amp.iter_mut().enumerate() {
            *a += w[(k, j)] * phase;
        }
    }
    Ok(amp.iter().map(|a| a.norm_sqr()).collect())
}

/// `p(n′ | n, m, κ)`; zero when `n′ > n + m`.
pub fn beamsplitter_transition(nprime: usize, n: usize, m: usize, kappa: f64) -> Result<f64> {
    if nprime > n + m {
        return Ok(0.0);
    }
    Ok(beamsplitter_distribution(n, m, kappa)?[nprime])
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|j| (j as f64).ln()).sum()
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Direct evaluation of the double sum
/// `n′!m′!/(n!m!) [Σᵢⱼ C(n,i) C(m,j) (−1)ʲ √κ^{n+m−i−j} √(1−κ)^{i+j} δ_{n−i+j,n′}]²`
/// in log space with sign tracking.
///
/// Alternating terms cancel, costing roughly `log₁₀ C(n+m, n)` digits, so
/// this is a reference for small photon numbers only; use
/// [`beamsplitter_transition`] in production.
pub fn beamsplitter_transition_sum(nprime: usize, n: usize, m: usize, kappa: f64) -> f64 {
    if nprime > n + m {
        return 0.0;
    }
    let mprime = n + m - nprime;
    let ln_k = kappa.ln();
    let ln_1k = (1.0 - kappa).ln();
    let mut terms: Vec<(f64, f64)> = Vec::new();
    for i in 0..=n {
        let j = nprime as isize - n as isize + i as isize;
        if j < 0 || j as usize > m {
            continue;
        }
        let j = j as usize;
        let e1 = (n + m - i - j) as f64 / 2.0;
        let e2 = (i + j) as f64 / 2.0;
        let mut l = ln_binomial(n, i) + ln_binomial(m, j);
        if e1 > 0.0 {
            if kappa == 0.0 {
                continue;
            }
            l += e1 * ln_k;
        }
        if e2 > 0.0 {
            if kappa == 1.0 {
                continue;
            }
            l += e2 * ln_1k;
        }
        terms.push((l, if j % 2 == 0 { 1.0 } else { -1.0 }));
    }
    if terms.is_empty() {
        return 0.0;
    }
    let top = terms.iter().fold(f64::NEG_INFINITY, |a, t| a.max(t.0));
    let s: f64 = terms.iter().map(|(l, sg)| sg * (l - top).exp()).sum();
    if s == 0.0 {
        return 0.0;
    }
    let pref = ln_factorial(nprime) + ln_factorial(mprime) - ln_factorial(n) - ln_factorial(m);
    (pref + 2.0 * (top + s.abs().ln())).exp()
}

/// Photon-number distribution of `|n_in⟩` after the thermal-loss channel,
/// `p(n′) = Σₘ p(m) p(n′ | n_in, m)`, with derivatives with respect to the
/// environment occupation.
pub fn thermal_mix_distribution(n_in: usize, spec: &ChannelSpec) -> Result<OutcomeDistribution> {
    if n_in > MAX_INPUT_PHOTONS {
        return Err(Error::InvalidParameter {
            name: "n_in",
            value: n_in as f64,
            reason: "input photon number above the supported limit of 60",
        });
    }
    let weights = spec.weights();
    let dweights = spec.weight_derivatives();
    let len = n_in + spec.env_cutoff;
    let mut probs = vec![0.0; len];
    let mut dprobs = vec![0.0; len];
    for m in 0..spec.env_cutoff {
        if weights[m] == 0.0 && dweights[m] == 0.0 {
            continue;
        }
        let p = beamsplitter_distribution(n_in, m, spec.kappa)?;
        for (k, pk) in p.iter().enumerate() {
            probs[k] += weights[m] * pk;
            dprobs[k] += dweights[m] * pk;
        }
    }
    OutcomeDistribution::new((0..len).collect(), probs, dprobs, spec.tail_tol)
}
