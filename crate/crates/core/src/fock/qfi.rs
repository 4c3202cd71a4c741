use crate::error::{Error, Result};
use crate::model::{expectation, hermitian_eigen, hermiticity_defect, DenseOperator};

/// Relative eigenvalue-sum threshold below which SLD matrix elements are
/// set to zero.
pub const SLD_TOL: f64 = 1e-12;
const DRHO_HERMITICITY_TOL: f64 = 1e-8;

/// Quantum Fisher information and the symmetric logarithmic derivative `Λ`
/// solving `½(ρΛ + Λρ) = ∂ρ`.
pub fn sld_qfi(rho: &DenseOperator, drho: &DenseOperator) -> Result<(f64, DenseOperator)> {
    if rho.nrows() != drho.nrows() || !rho.is_square() || !drho.is_square() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            found: drho.nrows(),
        });
    }
    let defect = hermiticity_defect(drho);
    if defect > DRHO_HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let (lambda, v) = hermitian_eigen(rho);
    let lmax = lambda.iter().fold(0.0f64, |m, l| m.max(*l));
    let cut = SLD_TOL * lmax;
    let d_eig = v.adjoint() * drho * &v;
    let n = rho.nrows();
    let mut sld_eig = DenseOperator::zeros(n, n);
    let mut qfi = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s = lambda[i] + lambda[j];
            if s > cut {
                let x = d_eig[(i, j)];
                sld_eig[(i, j)] = x * (2.0 / s);
                qfi += 2.0 * x.norm_sqr() / s;
            }
        }
    }
    let sld = &v * sld_eig * v.adjoint();
    Ok((qfi, sld))
}

/// Signal-to-noise ratio `|tr(∂ρ Ô)|² / Var_ρ(Ô)` of a fixed observable.
pub fn max_snr_check(rho: &DenseOperator, drho: &DenseOperator, observable: &DenseOperator) -> Result<f64> {
    let defect = hermiticity_defect(observable);
    if defect > DRHO_HERMITICITY_TOL * observable.norm().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let mean = expectation(rho, observable).re;
    let second = expectation(rho, &(observable * observable)).re;
    let var = second - mean * mean;
    if var <= 1e-14 * second.abs().max(1e-300) {
        return Err(Error::ZeroVariance);
    }
    let signal = expectation(drho, observable).norm_sqr();
    Ok(signal / var)
}
