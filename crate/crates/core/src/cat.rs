//! Cat-code protocol for squeezing estimation: code states, the projected
//! Hamiltonian, the effective-qubit information, leakage out of the code
//! space and the static error-correction conditions on a Fock code with an
//! ancilla.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_nonneg, check_positive, Error, Result};
use crate::model::{
    hermitian_eigen, kron, DenseOperator, FockSpace, LindbladModel, StateVector,
};
use crate::numerics::maximize_log_unimodal;

/// Truncation allowed for coherent components of a code state.
pub const CAT_TAIL_TOL: f64 = 1e-14;
/// Validity region of the effective-qubit description, `tε√(4N+2) ≤ 0.1`.
pub const LEAKAGE_VALIDITY: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// `span{|C_α^±⟩, |C_{iα}^±⟩}` with `|C_β^±⟩ = 𝒩(|β⟩ ± |−β⟩)`.
#[derive(Clone, Debug)]
pub struct CatCode {
    pub alpha: Complex64,
    pub parity: Parity,
    pub cutoff: usize,
    /// `[|C_α^±⟩, |C_{iα}^±⟩]`
    pub basis: [StateVector; 2],
}

/// `𝒩 = [2(1 ± e^{−2|α|²})]^{−1/2}`
pub fn cat_normalization(alpha: Complex64, parity: Parity) -> f64 {
    (2.0 * (1.0 + parity.sign() * (-2.0 * alpha.norm_sqr()).exp())).sqrt().recip()
}

/// `𝒩(|β⟩ ± |−β⟩)` in the truncated space.
pub fn cat_state(beta: Complex64, parity: Parity, space: &FockSpace) -> Result<StateVector> {
    if parity == Parity::Odd && beta.norm() == 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: 0.0,
            reason: "the odd cat state needs a non-zero amplitude",
        });
    }
    let plus = space.coherent(beta, CAT_TAIL_TOL)?;
    let minus = space.coherent(-beta, CAT_TAIL_TOL)?;
    let v = plus + minus.map(|z| z * parity.sign());
    Ok(v.map(|z| z * cat_normalization(beta, parity)))
}

pub fn build_cat_code(alpha: Complex64, parity: Parity, space: &FockSpace) -> Result<CatCode> {
    let basis = [
        cat_state(alpha, parity, space)?,
        cat_state(alpha * Complex64::i(), parity, space)?,
    ];
    Ok(CatCode {
        alpha,
        parity,
        cutoff: space.dim(),
        basis,
    })
}

impl CatCode {
    /// `c_g|C_α⟩ + c_e|C_{iα}⟩`, normalised.
    pub fn logical(&self, c_g: Complex64, c_e: Complex64) -> StateVector {
        let v = self.basis[0].map(|z| z * c_g) + self.basis[1].map(|z| z * c_e);
        let n = v.norm();
        v / Complex64::new(n, 0.0)
    }

    /// `|⟨C_α|C_{iα}⟩|`
    pub fn overlap(&self) -> f64 {
        self.basis[0].dotc(&self.basis[1]).norm()
    }

    /// Mean photon number of `|C_α^±⟩`: `|α|² tanh(|α|²)` or `coth`.
    pub fn mean_photons(&self) -> f64 {
        let x = self.alpha.norm_sqr();
        match self.parity {
            Parity::Even => x * x.tanh(),
            Parity::Odd => x / x.tanh(),
        }
    }
}

/// `⟨c_i|ε(a² + a†²)|c_j⟩` in the code basis.
pub fn projected_hamiltonian(code: &CatCode, epsilon: f64, space: &FockSpace) -> Result<DMatrix<Complex64>> {
    check_dim(code, space)?;
    let h = (space.a() * space.a() + space.a_dag() * space.a_dag()).map(|z| z * epsilon);
    Ok(DMatrix::from_fn(2, 2, |i, j| code.basis[i].dotc(&(&h * &code.basis[j]))))
}

/// `2ε Re(α²) diag(+1, −1)`, the large-amplitude form of the projected
/// Hamiltonian.
pub fn ideal_projected_hamiltonian(alpha: Complex64, epsilon: f64) -> DMatrix<Complex64> {
    let e = 2.0 * epsilon * (alpha * alpha).re;
    DMatrix::from_row_slice(2, 2, &[e.into(), 0.0.into(), 0.0.into(), (-e).into()])
}

fn check_dim(code: &CatCode, space: &FockSpace) -> Result<()> {
    if code.cutoff != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: code.cutoff,
        });
    }
    Ok(())
}

/// `φ(t) = 2ε Re(α²)(1 − e^{−Γt})/Γ`, the relative phase accumulated while
/// the amplitude decays as `αe^{−Γt/2}`.
pub fn accumulated_phase(alpha: Complex64, epsilon: f64, gamma: f64, t: f64) -> f64 {
    2.0 * epsilon * (alpha * alpha).re * (1.0 - (-gamma * t).exp()) / gamma
}

/// `I_ε(t) = 16N²(1 − e^{−Γt})²/Γ²`, the effective-qubit information with
/// `N = |α|²`.
pub fn protocol_qfi(mean_photons: f64, gamma: f64, t: f64) -> Result<f64> {
    check_nonneg("mean_photons", mean_photons)?;
    check_positive("gamma", gamma)?;
    check_nonneg("t", t)?;
    let s = 1.0 - (-gamma * t).exp();
    Ok(16.0 * mean_photons * mean_photons * s * s / (gamma * gamma))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolOptimum {
    pub t_star: f64,
    pub rate_star: f64,
    /// `rate_star Γ/N²`
    pub rate_coefficient: f64,
}

/// `argmax_t I_ε(t)/t`.
pub fn protocol_optimum(mean_photons: f64, gamma: f64) -> Result<ProtocolOptimum> {
    check_positive("mean_photons", mean_photons)?;
    check_positive("gamma", gamma)?;
    let (t, v) = maximize_log_unimodal(
        |t| protocol_qfi(mean_photons, gamma, t).unwrap_or(f64::NAN) / t,
        1e-3 / gamma,
        20.0 / gamma,
        64,
        1e-10,
    )?;
    Ok(ProtocolOptimum {
        t_star: t,
        rate_star: v,
        rate_coefficient: v * gamma / (mean_photons * mean_photons),
    })
}

/// `tε√(4N+2)`, a bound on `‖ψ(t) − ψ_C(t)‖`.
pub fn leakage_bound(t: f64, epsilon: f64, mean_photons: f64) -> f64 {
    t * epsilon * (4.0 * mean_photons + 2.0).sqrt()
}

/// Longest time with `tε√(4N+2) ≤ 0.1`.
pub fn validity_time(epsilon: f64, mean_photons: f64) -> f64 {
    LEAKAGE_VALIDITY / (epsilon * (4.0 * mean_photons + 2.0).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageCheck {
    pub t: f64,
    pub deviation: f64,
    pub bound: f64,
}

/// `‖e^{−itH}ψ − e^{−itH_C}ψ‖` for the code state `ψ = c_g|C_α⟩ + c_e|C_{iα}⟩`
/// under `H = ε(a² + a†²)` without dissipation, with `H_C` the large-amplitude
/// projected Hamiltonian, next to [`leakage_bound`] at `N = |α|²`.
pub fn leakage_check(
    code: &CatCode,
    c_g: Complex64,
    c_e: Complex64,
    epsilon: f64,
    times: &[f64],
    space: &FockSpace,
) -> Result<Vec<LeakageCheck>> {
    check_dim(code, space)?;
    let psi = code.logical(c_g, c_e);
    let h = (space.a() * space.a() + space.a_dag() * space.a_dag()).map(|z| z * epsilon);
    let (evals, evecs) = hermitian_eigen(&h);
    let in_eig = evecs.adjoint() * &psi;
    let e = 2.0 * epsilon * (code.alpha * code.alpha).re;
    let n = code.alpha.norm_sqr();
    times
        .iter()
        .map(|&t| {
            check_nonneg("t", t)?;
            let phased = nalgebra::DVector::from_fn(in_eig.len(), |k, _| {
                in_eig[k] * Complex64::from_polar(1.0, -t * evals[k])
            });
            let exact = &evecs * phased;
            let edge: f64 = (space.dim() - 2..space.dim()).map(|k| exact[k].norm_sqr()).sum();
            if edge > CAT_TAIL_TOL.sqrt() {
                return Err(Error::CutoffTooSmall {
                    cutoff: space.dim(),
                    population: edge,
                    suggested: space.dim() + space.dim() / 2 + 4,
                });
            }
            let approx = code.basis[0].map(|z| z * c_g * Complex64::from_polar(1.0, -t * e))
                + code.basis[1].map(|z| z * c_e * Complex64::from_polar(1.0, t * e));
            let approx = &approx / Complex64::new(approx.norm(), 0.0);
            Ok(LeakageCheck {
                t,
                deviation: (exact - approx).norm(),
                bound: leakage_bound(t, epsilon, n),
            })
        })
        .collect()
}

/// `a^k|ψ⟩/‖a^k|ψ⟩‖`
pub fn apply_jumps(psi: &StateVector, jumps: usize, space: &FockSpace) -> StateVector {
    let mut v = psi.clone();
    for _ in 0..jumps {
        v = space.a() * v;
    }
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// `⟨ψ|(−1)^{a†a}|ψ⟩`
pub fn parity_expectation(psi: &StateVector, space: &FockSpace) -> f64 {
    psi.dotc(&(space.parity() * psi)).re
}

/// `|ψ^{(k)}⟩ = c_g|C_α^{p_k}⟩ + i^k c_e|C_{iα}^{p_k}⟩` with the parity
/// flipped for odd `k`: the code state after `k` jumps.
pub fn jumped_logical(
    alpha: Complex64,
    c_g: Complex64,
    c_e: Complex64,
    jumps: usize,
    space: &FockSpace,
) -> Result<StateVector> {
    let parity = if jumps % 2 == 0 { Parity::Even } else { Parity::Odd };
    let code = build_cat_code(alpha, parity, space)?;
    let phase = Complex64::i().powu(jumps as u32);
    Ok(code.logical(c_g, c_e * phase))
}

/// `|⟨ψ^{(k)}|a^kψ^{(0)}⟩|` normalised, for `k = 1, …, jumps`.
pub fn jump_cycle_overlaps(
    alpha: Complex64,
    c_g: Complex64,
    c_e: Complex64,
    jumps: usize,
    space: &FockSpace,
) -> Result<Vec<f64>> {
    let psi0 = jumped_logical(alpha, c_g, c_e, 0, space)?;
    (1..=jumps)
        .map(|k| {
            let jumped = apply_jumps(&psi0, k, space);
            let expected = jumped_logical(alpha, c_g, c_e, k, space)?;
            Ok(expected.dotc(&jumped).norm())
        })
        .collect()
}

/// Static error-correction conditions for the code
/// `|c₀⟩ = (|N−2⟩ + |N⟩)|0⟩_A/√2`, `|c₁⟩ = (|N−2⟩ − |N⟩)|1⟩_A/√2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QecReport {
    pub n: usize,
    /// Eigenvalues of `ΠḢΠ` on the code space, ascending.
    pub hdot_eigenvalues: [f64; 2],
    pub lambda: Complex64,
    /// `‖ΠLΠ − λI‖`
    pub l_deviation: f64,
    pub mu: f64,
    /// `‖ΠL†LΠ − μI‖`
    pub ltl_deviation: f64,
    /// `(e₊ − e₋)²`: coefficient of `t²` in the QFI of the corrected
    /// evolution.
    pub qfi_coefficient: f64,
    /// `4N(N−2)`, for comparison.
    pub comparison_coefficient: f64,
    pub violations: Vec<String>,
}

impl QecReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const QEC_TOL: f64 = 1e-10;

pub fn qec_code_check(n: usize, model: &LindbladModel, space: &FockSpace) -> Result<QecReport> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "N",
            value: n as f64,
            reason: "the code uses |N−2⟩ and needs N ≥ 2",
        });
    }
    if model.jump_count() != 1 {
        return Err(Error::Unsupported(
            "the code conditions are checked for the single jump operator of a zero-temperature bath".into(),
        ));
    }
    if space.dim() < n + 2 {
        return Err(Error::CutoffTooSmall {
            cutoff: space.dim(),
            population: 1.0,
            suggested: n + 2,
        });
    }
    // derivative of ε(a² + a†²)
    let hdot = space.a() * space.a() + space.a_dag() * space.a_dag();
    let l = model.lindblad_operators(space).remove(0);
    let ltl = l.adjoint() * &l;
    let anc = FockSpace::new(2)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let lo = space.basis(n - 2)?;
    let hi = space.basis(n)?;
    let c0 = kron_vec(&(&lo + &hi).map(|z| z * s), &anc.basis(0)?);
    let c1 = kron_vec(&(&lo - &hi).map(|z| z * s), &anc.basis(1)?);
    let code = [c0, c1];
    let id_a = anc.identity();
    let restrict = |op: &DenseOperator| -> DMatrix<Complex64> {
        let big = kron(op, &id_a);
        DMatrix::from_fn(2, 2, |i, j| code[i].dotc(&(&big * &code[j])))
    };
    let proportional = |m: &DMatrix<Complex64>| {
        let c = (m[(0, 0)] + m[(1, 1)]) * 0.5;
        let dev = (m - DMatrix::<Complex64>::identity(2, 2) * c).norm();
        (c, dev)
    };
    let mh = restrict(&hdot);
    let (evals, _) = hermitian_eigen(&mh);
    let (lambda, l_dev) = proportional(&restrict(&l));
    let (mu, ltl_dev) = proportional(&restrict(&ltl));
    let gap = evals[1] - evals[0];
    let mut violations = Vec::new();
    if gap <= QEC_TOL {
        violations.push("ΠḢΠ is proportional to the identity: no signal in the code space".into());
    }
    if l_dev > QEC_TOL {
        violations.push(format!("ΠLΠ deviates from λI by {l_dev:.3e}"));
    }
    if ltl_dev > QEC_TOL {
        violations.push(format!("ΠL†LΠ deviates from μI by {ltl_dev:.3e}"));
    }
    let nf = n as f64;
    Ok(QecReport {
        n,
        hdot_eigenvalues: [evals[0], evals[1]],
        lambda,
        l_deviation: l_dev,
        mu: mu.re,
        ltl_deviation: ltl_dev,
        qfi_coefficient: gap * gap,
        comparison_coefficient: 4.0 * nf * (nf - 2.0),
        violations,
    })
}

fn kron_vec(a: &StateVector, b: &StateVector) -> StateVector {
    let m = kron(
        &DenseOperator::from_column_slice(a.len(), 1, a.as_slice()),
        &DenseOperator::from_column_slice(b.len(), 1, b.as_slice()),
    );
    StateVector::from_column_slice(m.as_slice())
}
