use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{hs_inner, DenseOperator, FockSpace, LindbladModel};

/// The freedom `(h₀₀, h⃗, 𝔥)` in the Lindblad representation.
///
/// `hmat` is assembled from its upper triangle, so it is hermitian exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HCorrection {
    pub h00: f64,
    pub hvec: Vec<Complex64>,
    hmat: Vec<Complex64>,
    jumps: usize,
}

impl HCorrection {
    pub fn zero(jumps: usize) -> Self {
        Self {
            h00: 0.0,
            hvec: vec![Complex64::new(0.0, 0.0); jumps],
            hmat: vec![Complex64::new(0.0, 0.0); jumps * jumps],
            jumps,
        }
    }

    pub fn jumps(&self) -> usize {
        self.jumps
    }

    pub fn hmat(&self, j: usize, k: usize) -> Complex64 {
        self.hmat[j * self.jumps + k]
    }

    /// Sets `𝔥_jk` and `𝔥_kj = 𝔥_jk*` together (the diagonal keeps only the
    /// real part).
    pub fn set_hmat(&mut self, j: usize, k: usize, value: Complex64) {
        let n = self.jumps;
        if j == k {
            self.hmat[j * n + j] = Complex64::new(value.re, 0.0);
        } else {
            self.hmat[j * n + k] = value;
            self.hmat[k * n + j] = value.conj();
        }
    }

    pub fn hmat_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.jumps, self.jumps, &self.hmat)
    }

    /// Number of real coordinates: `1 + 2J + J²`.
    pub fn real_dim(jumps: usize) -> usize {
        1 + 2 * jumps + jumps * jumps
    }

    /// Layout: `h₀₀`, `(Re h_j, Im h_j)`, diagonal `𝔥_jj`, then
    /// `(Re 𝔥_jk, Im 𝔥_jk)` for `j < k`.
    pub fn from_real(x: &[f64], jumps: usize) -> Result<Self> {
        if x.len() != Self::real_dim(jumps) {
            return Err(Error::DimensionMismatch {
                expected: Self::real_dim(jumps),
                found: x.len(),
            });
        }
        let mut h = Self::zero(jumps);
        h.h00 = x[0];
        let mut k = 1;
        for j in 0..jumps {
            h.hvec[j] = Complex64::new(x[k], x[k + 1]);
            k += 2;
        }
        for j in 0..jumps {
            h.set_hmat(j, j, Complex64::new(x[k], 0.0));
            k += 1;
        }
        for j in 0..jumps {
            for l in j + 1..jumps {
                h.set_hmat(j, l, Complex64::new(x[k], x[k + 1]));
                k += 2;
            }
        }
        Ok(h)
    }

    pub fn to_real(&self) -> Vec<f64> {
        let mut x = vec![self.h00];
        for h in &self.hvec {
            x.push(h.re);
            x.push(h.im);
        }
        for j in 0..self.jumps {
            x.push(self.hmat(j, j).re);
        }
        for j in 0..self.jumps {
            for l in j + 1..self.jumps {
                let v = self.hmat(j, l);
                x.push(v.re);
                x.push(v.im);
            }
        }
        x
    }
}

/// `𝔞(h)` and `𝔟(h)` written as affine functions of the real coordinates of
/// `h`:
///
/// `K_j = iL̇_j + Σ_k 𝔥_jk L_k + h_j`, `𝔞 = Σ_j K_j†K_j`,
///
/// `𝔟 = Ḣ − (i/2)Σ_j(L̇_j†L_j − L_j†L̇_j) + h₀₀ + Σ_j(L_j†h_j + h_j*L_j) + Σ_jk L_j†𝔥_jk L_k`.
#[derive(Clone, Debug)]
pub struct AffineFamily {
    pub jumps: usize,
    /// `K_j` at `h = 0`.
    pub k0: Vec<DenseOperator>,
    /// `∂K_j/∂x_v`, indexed `[v][j]`.
    pub kv: Vec<Vec<DenseOperator>>,
    pub b0: DenseOperator,
    pub bv: Vec<DenseOperator>,
}

impl AffineFamily {
    /// With `general = false` the jump-operator derivatives are dropped,
    /// which is exact for Hamiltonian parameters.
    pub fn new(model: &LindbladModel, space: &FockSpace, general: bool) -> Result<Self> {
        let ls = model.lindblad_operators(space);
        let jumps = ls.len();
        let i = Complex64::i();
        let zero = space.zeros();
        let ident = space.identity();
        let hdot = model.hamiltonian_derivative(space);
        let (k0, b0) = if general {
            let ld = model.lindblad_derivatives(space)?;
            let mut b0 = hdot;
            for (l, d) in ls.iter().zip(&ld) {
                let comm = d.adjoint() * l - l.adjoint() * d;
                b0 -= comm.map(|z| z * i * 0.5);
            }
            (ld.iter().map(|d| d.map(|z| z * i)).collect(), b0)
        } else {
            (vec![zero.clone(); jumps], hdot)
        };
        let mut kv = Vec::new();
        let mut bv = Vec::new();
        let mut push = |ks: Vec<DenseOperator>, b: DenseOperator| {
            kv.push(ks);
            bv.push(b);
        };
        push(vec![zero.clone(); jumps], ident.clone());
        for j in 0..jumps {
            let mut ks = vec![zero.clone(); jumps];
            ks[j] = ident.clone();
            push(ks, &ls[j] + ls[j].adjoint());
            let mut ks = vec![zero.clone(); jumps];
            ks[j] = ident.map(|z| z * i);
            push(ks, (ls[j].adjoint() - &ls[j]).map(|z| z * i));
        }
        for j in 0..jumps {
            let mut ks = vec![zero.clone(); jumps];
            ks[j] = ls[j].clone();
            push(ks, ls[j].adjoint() * &ls[j]);
        }
        for j in 0..jumps {
            for l in j + 1..jumps {
                let cross = ls[j].adjoint() * &ls[l];
                let mut ks = vec![zero.clone(); jumps];
                ks[j] = ls[l].clone();
                ks[l] = ls[j].clone();
                push(ks, &cross + cross.adjoint());
                let mut ks = vec![zero.clone(); jumps];
                ks[j] = ls[l].map(|z| z * i);
                ks[l] = ls[j].map(|z| -z * i);
                push(ks, (&cross - cross.adjoint()).map(|z| z * i));
            }
        }
        Ok(Self {
            jumps,
            k0,
            kv,
            b0,
            bv,
        })
    }

    pub fn vars(&self) -> usize {
        self.bv.len()
    }

    /// `⟨𝔞⟩ = xᵀQx + 2cᵀx + k` on `ρ`.
    pub fn a_quadratic(&self, rho: &DenseOperator) -> (DMatrix<f64>, DVector<f64>, f64) {
        let n = self.vars();
        // tr(ρ X†Y) = ⟨X, Yρ⟩
        let k_rho: Vec<DenseOperator> = self.k0.iter().map(|k| k * rho).collect();
        let kv_rho: Vec<Vec<DenseOperator>> = self
            .kv
            .iter()
            .map(|ks| ks.iter().map(|k| k * rho).collect())
            .collect();
        let mut q = DMatrix::zeros(n, n);
        let mut c = DVector::zeros(n);
        let mut k = 0.0;
        for j in 0..self.jumps {
            k += hs_inner(&self.k0[j], &k_rho[j]).re;
            for v in 0..n {
                c[v] += hs_inner(&self.k0[j], &kv_rho[v][j]).re;
                for w in 0..n {
                    q[(v, w)] += hs_inner(&self.kv[v][j], &kv_rho[w][j]).re;
                }
            }
        }
        (symmetrize(q), c, k)
    }

    /// `⟨𝔟²⟩ = xᵀPx + 2pᵀx + m` on `ρ`.
    pub fn b2_quadratic(&self, rho: &DenseOperator) -> (DMatrix<f64>, DVector<f64>, f64) {
        let n = self.vars();
        let b_rho: Vec<DenseOperator> = self.bv.iter().map(|b| b * rho).collect();
        let b0_rho = &self.b0 * rho;
        let mut p = DMatrix::zeros(n, n);
        let mut c = DVector::zeros(n);
        for v in 0..n {
            c[v] = hs_inner(&self.b0, &b_rho[v]).re;
            for w in 0..n {
                p[(v, w)] = hs_inner(&self.bv[v], &b_rho[w]).re;
            }
        }
        (symmetrize(p), c, hs_inner(&self.b0, &b0_rho).re)
    }

    /// `𝔟` at the given coordinates.
    pub fn b_at(&self, x: &[f64]) -> DenseOperator {
        let mut b = self.b0.clone();
        for (bv, xv) in self.bv.iter().zip(x) {
            if *xv != 0.0 {
                b += bv.map(|z| z * *xv);
            }
        }
        b
    }

    /// `𝔞` at the given coordinates.
    pub fn a_at(&self, x: &[f64]) -> DenseOperator {
        let d = self.b0.nrows();
        let mut a = DenseOperator::zeros(d, d);
        for j in 0..self.jumps {
            let mut k = self.k0[j].clone();
            for (v, xv) in x.iter().enumerate() {
                if *xv != 0.0 {
                    k += self.kv[v][j].map(|z| z * *xv);
                }
            }
            a += k.adjoint() * &k;
        }
        a
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// `(𝔞(h), 𝔟(h))` for the model; `general` adds the jump-operator
/// derivative terms needed for noise parameters.
pub fn ab_operators(
    h: &HCorrection,
    model: &LindbladModel,
    space: &FockSpace,
    general: bool,
) -> Result<(DenseOperator, DenseOperator)> {
    if h.jumps() != model.jump_count() {
        return Err(Error::DimensionMismatch {
            expected: model.jump_count(),
            found: h.jumps(),
        });
    }
    let fam = AffineFamily::new(model, space, general)?;
    let x = h.to_real();
    Ok((fam.a_at(&x), fam.b_at(&x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{expectation, ParameterTag};

    #[test]
    fn real_coordinates_round_trip() {
        let x: Vec<f64> = (0..HCorrection::real_dim(2)).map(|k| 0.1 * k as f64 - 0.3).collect();
        let h = HCorrection::from_real(&x, 2).unwrap();
        assert_eq!(h.to_real(), x);
        let m = h.hmat_matrix();
        assert_eq!(&m - m.adjoint(), DMatrix::zeros(2, 2));
    }

    #[test]
    fn zero_h_gives_bare_generator() {
        let space = FockSpace::new(20).unwrap();
        let model = LindbladModel::for_target(ParameterTag::Squeezing, 1.0, 0.2).unwrap();
        let (a, b) = ab_operators(&HCorrection::zero(2), &model, &space, false).unwrap();
        assert_eq!(a, space.zeros());
        assert_eq!(b, model.hamiltonian_derivative(&space));
    }

    #[test]
    fn loss_derivative_term() {
        // ⟨L̇†L̇⟩ on |N⟩ = [(1+2n)N + n]/(4Γ)
        let space = FockSpace::new(20).unwrap();
        let (g, n) = (1.7, 0.3);
        let model = LindbladModel::for_target(ParameterTag::Loss, g, n).unwrap();
        let (a, b) = ab_operators(&HCorrection::zero(2), &model, &space, true).unwrap();
        let rho = space.fock_density(5).unwrap();
        let expected = ((1.0 + 2.0 * n) * 5.0 + n) / (4.0 * g);
        assert!((expectation(&rho, &a).re - expected).abs() < 1e-12);
        assert!(b.norm() < 1e-12);
    }

    #[test]
    fn affine_form_matches_direct_evaluation() {
        let space = FockSpace::new(16).unwrap();
        let model = LindbladModel::for_target(ParameterTag::Temperature, 0.8, 0.4).unwrap();
        let fam = AffineFamily::new(&model, &space, true).unwrap();
        let x: Vec<f64> = (0..fam.vars()).map(|k| 0.07 * k as f64 - 0.2).collect();
        let rho = space.thermal(0.7, 1e-3).unwrap_or_else(|_| space.fock_density(2).unwrap());
        let (q, c, k) = fam.a_quadratic(&rho);
        let xv = DVector::from_vec(x.clone());
        let quad = (xv.transpose() * &q * &xv)[0] + 2.0 * c.dot(&xv) + k;
        let direct = expectation(&rho, &fam.a_at(&x)).re;
        assert!((quad - direct).abs() < 1e-10 * direct.abs().max(1.0));
        let (p, pc, m) = fam.b2_quadratic(&rho);
        let quad_b = (xv.transpose() * &p * &xv)[0] + 2.0 * pc.dot(&xv) + m;
        let b = fam.b_at(&x);
        let direct_b = expectation(&rho, &(&b * &b)).re;
        assert!((quad_b - direct_b).abs() < 1e-10 * direct_b.abs().max(1.0));
    }
}
