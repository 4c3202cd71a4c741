use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DenseOperator, FockSpace};
use crate::error::{check_finite, check_nonneg, check_positive, Error, Result};

/// The five parameters of the thermal-loss model that can be estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParameterTag {
    /// Oscillator frequency ω in `H = ω a†a`.
    Frequency,
    /// Drive amplitude α in `H = iα(a† − a)`.
    Displacement,
    /// Squeezing strength ε in `H = ε(a² + a†²)`.
    Squeezing,
    /// Loss rate Γ.
    Loss,
    /// Mean thermal occupation n_E of the bath.
    Temperature,
}

impl ParameterTag {
    pub const ALL: [ParameterTag; 5] = [
        ParameterTag::Frequency,
        ParameterTag::Displacement,
        ParameterTag::Squeezing,
        ParameterTag::Loss,
        ParameterTag::Temperature,
    ];

    pub fn is_hamiltonian(self) -> bool {
        matches!(
            self,
            ParameterTag::Frequency | ParameterTag::Displacement | ParameterTag::Squeezing
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            ParameterTag::Frequency => "frequency",
            ParameterTag::Displacement => "displacement",
            ParameterTag::Squeezing => "squeezing",
            ParameterTag::Loss => "loss",
            ParameterTag::Temperature => "temperature",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ParameterTag::Frequency => "omega",
            ParameterTag::Displacement => "alpha",
            ParameterTag::Squeezing => "epsilon",
            ParameterTag::Loss => "gamma",
            ParameterTag::Temperature => "n_env",
        }
    }
}

impl fmt::Display for ParameterTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParameterTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "frequency" | "freq" | "fre" | "omega" | "w" => Ok(ParameterTag::Frequency),
            "displacement" | "disp" | "alpha" => Ok(ParameterTag::Displacement),
            "squeezing" | "squeeze" | "epsilon" | "eps" => Ok(ParameterTag::Squeezing),
            "loss" | "gamma" | "loss-rate" => Ok(ParameterTag::Loss),
            "temperature" | "temp" | "n_env" | "n-env" | "ne" | "n_e" => {
                Ok(ParameterTag::Temperature)
            }
            other => Err(Error::Unsupported(format!(
                "unknown parameter `{other}` (expected one of frequency, displacement, squeezing, loss, temperature)"
            ))),
        }
    }
}

/// Hamiltonian of the mode, each variant carrying its real coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum HamiltonianKind {
    None,
    /// `ω a†a`
    Frequency(f64),
    /// `iα(a† − a)`
    Displacement(f64),
    /// `ε(a² + a†²)`
    Squeezing(f64),
}

impl HamiltonianKind {
    pub fn coefficient(&self) -> f64 {
        match *self {
            HamiltonianKind::None => 0.0,
            HamiltonianKind::Frequency(c)
            | HamiltonianKind::Displacement(c)
            | HamiltonianKind::Squeezing(c) => c,
        }
    }

    /// The Hamiltonian variant whose coefficient is the given parameter.
    pub fn for_target(target: ParameterTag, coefficient: f64) -> HamiltonianKind {
        match target {
            ParameterTag::Frequency => HamiltonianKind::Frequency(coefficient),
            ParameterTag::Displacement => HamiltonianKind::Displacement(coefficient),
            ParameterTag::Squeezing => HamiltonianKind::Squeezing(coefficient),
            ParameterTag::Loss | ParameterTag::Temperature => HamiltonianKind::None,
        }
    }

    fn matches(&self, target: ParameterTag) -> bool {
        matches!(
            (self, target),
            (HamiltonianKind::Frequency(_), ParameterTag::Frequency)
                | (HamiltonianKind::Displacement(_), ParameterTag::Displacement)
                | (HamiltonianKind::Squeezing(_), ParameterTag::Squeezing)
        )
    }
}

/// Single bosonic mode coupled to a thermal bath:
///
/// `dρ/dt = −i[H, ρ] + Γ(1+n_E) D[a]ρ + Γ n_E D[a†]ρ`
///
/// with jump operators `L₁ = √(Γ(1+n_E)) a` and `L₂ = √(Γ n_E) a†`. The second
/// channel is dropped when `n_E = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LindbladModel {
    pub hamiltonian: HamiltonianKind,
    pub gamma: f64,
    pub n_env: f64,
    pub target: ParameterTag,
}

impl LindbladModel {
    pub fn new(
        hamiltonian: HamiltonianKind,
        gamma: f64,
        n_env: f64,
        target: ParameterTag,
    ) -> Result<Self> {
        check_positive("gamma", gamma)?;
        check_nonneg("n_env", n_env)?;
        check_finite("hamiltonian coefficient", hamiltonian.coefficient())?;
        if target.is_hamiltonian() && !hamiltonian.matches(target) {
            return Err(Error::Unsupported(format!(
                "target {target} requires the matching Hamiltonian, got {hamiltonian:?}"
            )));
        }
        Ok(Self {
            hamiltonian,
            gamma,
            n_env,
            target,
        })
    }

    /// Model for `target` with the Hamiltonian coefficient at zero (the
    /// rotating-frame working point for Hamiltonian parameters).
    pub fn for_target(target: ParameterTag, gamma: f64, n_env: f64) -> Result<Self> {
        Self::new(HamiltonianKind::for_target(target, 0.0), gamma, n_env, target)
    }

    /// `(Γ(1+n_E), Γ n_E)`: the rates of photon loss and photon gain.
    pub fn rates(&self) -> (f64, f64) {
        (self.gamma * (1.0 + self.n_env), self.gamma * self.n_env)
    }

    /// Number of jump operators: 1 at zero temperature, 2 otherwise.
    pub fn jump_count(&self) -> usize {
        if self.n_env == 0.0 {
            1
        } else {
            2
        }
    }

    /// Scalar prefactors of the jump operators (`L₁ = c₁ a`, `L₂ = c₂ a†`).
    pub fn jump_amplitudes(&self) -> Vec<f64> {
        let (down, up) = self.rates();
        let mut c = vec![down.sqrt()];
        if self.jump_count() == 2 {
            c.push(up.sqrt());
        }
        c
    }

    pub fn hamiltonian_operator(&self, space: &FockSpace) -> DenseOperator {
        let i = Complex64::i();
        match self.hamiltonian {
            HamiltonianKind::None => space.zeros(),
            HamiltonianKind::Frequency(w) => space.number().map(|z| z * w),
            HamiltonianKind::Displacement(alpha) => {
                (space.a_dag() - space.a()).map(|z| z * i * alpha)
            }
            HamiltonianKind::Squeezing(eps) => {
                (space.a() * space.a() + space.a_dag() * space.a_dag()).map(|z| z * eps)
            }
        }
    }

    pub fn lindblad_operators(&self, space: &FockSpace) -> Vec<DenseOperator> {
        let amps = self.jump_amplitudes();
        let mut ops = vec![space.a().map(|z| z * amps[0])];
        if amps.len() == 2 {
            ops.push(space.a_dag().map(|z| z * amps[1]));
        }
        ops
    }

    /// `∂H/∂θ` for the tagged parameter (zero for noise parameters).
    pub fn hamiltonian_derivative(&self, space: &FockSpace) -> DenseOperator {
        match self.target {
            ParameterTag::Frequency => space.number().clone(),
            ParameterTag::Displacement => (space.a_dag() - space.a()).map(|z| z * Complex64::i()),
            ParameterTag::Squeezing => space.a() * space.a() + space.a_dag() * space.a_dag(),
            ParameterTag::Loss | ParameterTag::Temperature => space.zeros(),
        }
    }

    /// Scalar derivatives `∂c_j/∂θ` of the jump prefactors.
    ///
    /// The temperature derivative of `√(Γ n_E)` diverges at `n_E = 0`, which
    /// is reported as an unbounded request.
    pub fn jump_amplitude_derivatives(&self) -> Result<Vec<f64>> {
        let g = self.gamma;
        let n = self.n_env;
        let amps = self.jump_amplitudes();
        match self.target {
            ParameterTag::Frequency | ParameterTag::Displacement | ParameterTag::Squeezing => {
                Ok(vec![0.0; amps.len()])
            }
            ParameterTag::Loss => Ok(amps.iter().map(|c| c / (2.0 * g)).collect()),
            ParameterTag::Temperature => {
                if n == 0.0 {
                    return Err(Error::Unbounded(
                        "the temperature derivative of √(Γ n_E) a† diverges at n_E = 0".into(),
                    ));
                }
                Ok(vec![
                    0.5 * (g / (1.0 + n)).sqrt(),
                    0.5 * (g / n).sqrt(),
                ])
            }
        }
    }

    pub fn lindblad_derivatives(&self, space: &FockSpace) -> Result<Vec<DenseOperator>> {
        let d = self.jump_amplitude_derivatives()?;
        let mut ops = vec![space.a().map(|z| z * d[0])];
        if d.len() == 2 {
            ops.push(space.a_dag().map(|z| z * d[1]));
        }
        Ok(ops)
    }

    /// Copy with a different target (Hamiltonian unchanged).
    pub fn with_target(&self, target: ParameterTag) -> Result<Self> {
        Self::new(self.hamiltonian, self.gamma, self.n_env, target)
    }
}
