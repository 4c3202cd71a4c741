use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DenseOperator, FockSpace, HamiltonianKind, LindbladModel, ParameterTag};

/// Dense evaluation of
/// `−i[H, ρ] + Σⱼ (LⱼρLⱼ† − ½{Lⱼ†Lⱼ, ρ})` for the thermal-loss model.
pub fn lindblad_rhs(
    rho: &DenseOperator,
    model: &LindbladModel,
    space: &FockSpace,
) -> Result<DenseOperator> {
    check_dim(rho, space)?;
    let h = model.hamiltonian_operator(space);
    let mi = Complex64::new(0.0, -1.0);
    let mut out = (&h * rho - rho * &h).map(|z| z * mi);
    for l in model.lindblad_operators(space) {
        let ld = l.adjoint();
        let ldl = &ld * &l;
        out += &l * rho * &ld;
        out -= (&ldl * rho + rho * &ldl).map(|z| z * 0.5);
    }
    Ok(out)
}

pub(crate) fn check_dim(rho: &DenseOperator, space: &FockSpace) -> Result<()> {
    if rho.nrows() != space.dim() || rho.ncols() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: rho.nrows(),
        });
    }
    Ok(())
}

/// One diagonal band of a Hamiltonian: `H_{m, m+offset} = coeff[m]`.
#[derive(Clone, Debug)]
struct Band {
    offset: isize,
    coeff: Vec<Complex64>,
}

/// Banded representation of a Lindblad generator with jump operators
/// `√down · a` and `√up · a†`, applied in `O(D²)` operations.
///
/// The same structure describes the parameter derivative of the generator,
/// which drives the sensitivity equation.
#[derive(Clone, Debug)]
pub struct Generator {
    dim: usize,
    down: f64,
    up: f64,
    bands: Vec<Band>,
}

impl Generator {
    pub fn new(model: &LindbladModel, space: &FockSpace) -> Self {
        let (down, up) = model.rates();
        Self {
            dim: space.dim(),
            down,
            up,
            bands: hamiltonian_bands(model.hamiltonian, space.dim()),
        }
    }

    /// `∂𝓛/∂θ` for the model's target parameter.
    pub fn derivative(model: &LindbladModel, space: &FockSpace) -> Result<Self> {
        let dim = space.dim();
        let g = model.gamma;
        let n = model.n_env;
        let (down, up, hk) = match model.target {
            ParameterTag::Frequency => (0.0, 0.0, HamiltonianKind::Frequency(1.0)),
            ParameterTag::Displacement => (0.0, 0.0, HamiltonianKind::Displacement(1.0)),
            ParameterTag::Squeezing => (0.0, 0.0, HamiltonianKind::Squeezing(1.0)),
            ParameterTag::Loss => (1.0 + n, n, HamiltonianKind::None),
            ParameterTag::Temperature => (g, g, HamiltonianKind::None),
        };
        Ok(Self {
            dim,
            down,
            up,
            bands: hamiltonian_bands(hk, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, rho: &DenseOperator) -> DenseOperator {
        let d = self.dim;
        let mut out = DMatrix::zeros(d, d);
        let sq: Vec<f64> = (0..=d).map(|k| (k as f64).sqrt()).collect();
        // truncated a a† is diag(1, …, D−1, 0)
        let up_diag = |m: usize| if m + 1 < d { (m + 1) as f64 } else { 0.0 };
        for col in 0..d {
            for row in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                if self.down != 0.0 {
                    if row + 1 < d && col + 1 < d {
                        acc += rho[(row + 1, col + 1)] * (sq[row + 1] * sq[col + 1] * self.down);
                    }
                    acc -= rho[(row, col)] * (0.5 * self.down * (row + col) as f64);
                }
                if self.up != 0.0 {
                    if row > 0 && col > 0 {
                        acc += rho[(row - 1, col - 1)] * (sq[row] * sq[col] * self.up);
                    }
                    acc -= rho[(row, col)] * (0.5 * self.up * (up_diag(row) + up_diag(col)));
                }
                out[(row, col)] = acc;
            }
        }
        if !self.bands.is_empty() {
            let mi = Complex64::new(0.0, -1.0);
            for col in 0..d {
                for row in 0..d {
                    let mut comm = Complex64::new(0.0, 0.0);
                    for band in &self.bands {
                        // (Hρ)_{row,col} = H_{row,row+k} ρ_{row+k,col}
                        let r = row as isize + band.offset;
                        if r >= 0 && (r as usize) < d {
                            comm += band.coeff[row] * rho[(r as usize, col)];
                        }
                        // (ρH)_{row,col} = ρ_{row,col−k} H_{col−k,col}
                        let c = col as isize - band.offset;
                        if c >= 0 && (c as usize) < d {
                            comm -= rho[(row, c as usize)] * band.coeff[c as usize];
                        }
                    }
                    out[(row, col)] += comm * mi;
                }
            }
        }
        out
    }
}

fn hamiltonian_bands(kind: HamiltonianKind, d: usize) -> Vec<Band> {
    let sq = |k: usize| (k as f64).sqrt();
    let zero = Complex64::new(0.0, 0.0);
    match kind {
        HamiltonianKind::None => Vec::new(),
        HamiltonianKind::Frequency(w) => {
            if w == 0.0 {
                return Vec::new();
            }
            vec![Band {
                offset: 0,
                coeff: (0..d).map(|m| Complex64::new(w * m as f64, 0.0)).collect(),
            }]
        }
        HamiltonianKind::Displacement(alpha) => {
            if alpha == 0.0 {
                return Vec::new();
            }
            // iα(a† − a): H_{m,m−1} = iα√m, H_{m,m+1} = −iα√(m+1)
            let below = (0..d)
                .map(|m| if m >= 1 { Complex64::new(0.0, alpha * sq(m)) } else { zero })
                .collect();
            let above = (0..d)
                .map(|m| if m + 1 < d { Complex64::new(0.0, -alpha * sq(m + 1)) } else { zero })
                .collect();
            vec![
                Band { offset: -1, coeff: below },
                Band { offset: 1, coeff: above },
            ]
        }
        HamiltonianKind::Squeezing(eps) => {
            if eps == 0.0 {
                return Vec::new();
            }
            let below = (0..d)
                .map(|m| if m >= 2 { Complex64::new(eps * sq(m) * sq(m - 1), 0.0) } else { zero })
                .collect();
            let above = (0..d)
                .map(|m| {
                    if m + 2 < d {
                        Complex64::new(eps * sq(m + 1) * sq(m + 2), 0.0)
                    } else {
                        zero
                    }
                })
                .collect();
            vec![
                Band { offset: -2, coeff: below },
                Band { offset: 2, coeff: above },
            ]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{expectation, projector, trace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_density(d: usize, rng: &mut ChaCha8Rng) -> DenseOperator {
        let m = DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let rho = &m * m.adjoint();
        let tr = trace(&rho);
        rho.map(|z| z / tr)
    }

    #[test]
    fn structured_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let space = FockSpace::new(9).unwrap();
        let rho = random_density(9, &mut rng);
        for hk in [
            HamiltonianKind::Frequency(0.7),
            HamiltonianKind::Displacement(-0.4),
            HamiltonianKind::Squeezing(0.3),
        ] {
            for target in [hk_target(hk), ParameterTag::Loss, ParameterTag::Temperature] {
                let model = LindbladModel::new(hk, 1.3, 0.2, target).unwrap();
                let dense = lindblad_rhs(&rho, &model, &space).unwrap();
                let fast = Generator::new(&model, &space).apply(&rho);
                assert!((dense - fast).norm() < 1e-13);
            }
        }
    }

    fn hk_target(hk: HamiltonianKind) -> ParameterTag {
        match hk {
            HamiltonianKind::Frequency(_) => ParameterTag::Frequency,
            HamiltonianKind::Displacement(_) => ParameterTag::Displacement,
            _ => ParameterTag::Squeezing,
        }
    }

    #[test]
    fn derivative_generator_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let space = FockSpace::new(8).unwrap();
        let rho = random_density(8, &mut rng);
        let (g, n) = (0.9, 0.3);
        let h = 1e-6;
        let loss = |g: f64| LindbladModel::for_target(ParameterTag::Loss, g, n).unwrap();
        let fd = (Generator::new(&loss(g + h), &space).apply(&rho)
            - Generator::new(&loss(g - h), &space).apply(&rho))
        .map(|z| z / (2.0 * h));
        let an = Generator::derivative(&loss(g), &space).unwrap().apply(&rho);
        assert!((fd - an).norm() < 1e-8);

        let temp = |n: f64| LindbladModel::for_target(ParameterTag::Temperature, g, n).unwrap();
        let fd = (Generator::new(&temp(n + h), &space).apply(&rho)
            - Generator::new(&temp(n - h), &space).apply(&rho))
        .map(|z| z / (2.0 * h));
        let an = Generator::derivative(&temp(n), &space).unwrap().apply(&rho);
        assert!((fd - an).norm() < 1e-8);
    }

    #[test]
    fn thermal_state_is_stationary() {
        let space = FockSpace::new(60).unwrap();
        let model = LindbladModel::for_target(ParameterTag::Loss, 1.0, 0.3).unwrap();
        let rho = space.thermal(0.3, 1e-8).unwrap();
        let rhs = lindblad_rhs(&rho, &model, &space).unwrap();
        assert!(rhs.norm() < 1e-10);
    }

    #[test]
    fn vacuum_is_dark_and_single_photon_decays() {
        let space = FockSpace::new(6).unwrap();
        let model = LindbladModel::for_target(ParameterTag::Loss, 1.7, 0.0).unwrap();
        let vac = projector(&space.basis(0).unwrap());
        assert!(lindblad_rhs(&vac, &model, &space).unwrap().norm() < 1e-15);
        let one = projector(&space.basis(1).unwrap());
        let rhs = lindblad_rhs(&one, &model, &space).unwrap();
        assert!((expectation(&rhs, space.number()).re + 1.7).abs() < 1e-14);
    }

    #[test]
    fn output_is_traceless() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let space = FockSpace::new(12).unwrap();
        let rho = random_density(12, &mut rng);
        let model = LindbladModel::new(HamiltonianKind::Squeezing(0.5), 1.0, 0.4, ParameterTag::Squeezing).unwrap();
        let rhs = Generator::new(&model, &space).apply(&rho);
        assert!(trace(&rhs).norm() < 1e-12);
    }
}
