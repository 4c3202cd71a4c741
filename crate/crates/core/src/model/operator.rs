//! Dense complex matrices used for operators and density matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type DenseOperator = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-8;
const EIGEN_TOL: f64 = 1e-10;

/// `|ψ⟩⟨ψ|`
pub fn projector(psi: &StateVector) -> DenseOperator {
    psi * psi.adjoint()
}

/// `tr(ρ A)` without forming the product.
pub fn expectation(rho: &DenseOperator, op: &DenseOperator) -> Complex64 {
    let n = rho.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho[(i, j)] * op[(j, i)];
        }
    }
    acc
}

/// Hilbert-Schmidt inner product `tr(A† B)`.
pub fn hs_inner(a: &DenseOperator, b: &DenseOperator) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn trace(m: &DenseOperator) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Frobenius norm of `M − M†`.
pub fn hermiticity_defect(m: &DenseOperator) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (m[(i, j)] - m[(j, i)].conj()).norm_sqr();
        }
    }
    acc.sqrt()
}

/// `(M + M†)/2`
pub fn hermitian_part(m: &DenseOperator) -> DenseOperator {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// Eigen-decomposition of a hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &DenseOperator) -> (Vec<f64>, DenseOperator) {
    let eig = hermitian_part(m).symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    (values, vectors)
}

/// Checks hermiticity, unit trace and positivity within the standard
/// tolerances.
pub fn validate_density(rho: &DenseOperator) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            found: rho.ncols(),
        });
    }
    let defect = hermiticity_defect(rho);
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let tr = trace(rho);
    if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    let (values, _) = hermitian_eigen(rho);
    if let Some(&min) = values.first() {
        if min < -EIGEN_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
    }
    Ok(())
}

/// `½ ‖A − B‖₁`
pub fn trace_distance(a: &DenseOperator, b: &DenseOperator) -> f64 {
    let (values, _) = hermitian_eigen(&(a - b));
    0.5 * values.iter().map(|v| v.abs()).sum::<f64>()
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &DenseOperator, sigma: &DenseOperator) -> f64 {
    let sqrt_rho = psd_sqrt(rho);
    let inner = &sqrt_rho * sigma * &sqrt_rho;
    let (values, _) = hermitian_eigen(&inner);
    let s: f64 = values.iter().map(|v| v.max(0.0).sqrt()).sum();
    s * s
}

fn psd_sqrt(m: &DenseOperator) -> DenseOperator {
    let (values, vectors) = hermitian_eigen(m);
    let n = m.nrows();
    let mut scaled = vectors.clone();
    for (k, v) in values.iter().enumerate() {
        let s = v.max(0.0).sqrt();
        for i in 0..n {
            scaled[(i, k)] *= s;
        }
    }
    scaled * vectors.adjoint()
}

/// `A ⊗ B`
pub fn kron(a: &DenseOperator, b: &DenseOperator) -> DenseOperator {
    a.kronecker(b)
}
