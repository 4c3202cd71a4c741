use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

// Singular values of A below this fraction of the largest count as zero.
const RANK_TOL: f64 = 1e-10;

/// Solution of `min xᵀQx + 2cᵀx` subject to `Ax = b` (in the least-squares
/// sense when the constraint is inconsistent).
#[derive(Clone, Debug)]
pub struct ConstrainedSolution {
    pub x: DVector<f64>,
    pub objective: f64,
    /// `‖Ax − b‖ / max(‖b‖, ‖A‖)`.
    pub relative_residual: f64,
    pub constraint_rank: usize,
}

/// Null-space method: `x = x_p + Z z` with `x_p` the minimum-norm
/// least-squares solution of the constraint and `Z` spanning `ker A`.
pub fn equality_constrained_quadratic(
    q: &DMatrix<f64>,
    c: &DVector<f64>,
    a: &DMatrix<f64>,
    b: &DVector<f64>,
) -> Result<ConstrainedSolution> {
    let n = q.nrows();
    if q.ncols() != n || c.len() != n || a.ncols() != n || a.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let v_t = svd.v_t.as_ref().ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let smax = svd.singular_values.max();
    let cut = RANK_TOL * smax.max(f64::MIN_POSITIVE);
    let mut rank = 0;
    let mut xp = DVector::zeros(n);
    let mut in_range = vec![false; n];
    for k in 0..svd.singular_values.len() {
        let s = svd.singular_values[k];
        if s > cut {
            rank += 1;
            in_range[k] = true;
            let v = v_t.row(k).transpose();
            xp += v * (u.column(k).dot(b) / s);
        }
    }
    // Right singular vectors outside the range, plus the directions missing
    // from a thin SVD when A has fewer rows than columns.
    let full_v = complete_basis(v_t, &in_range, n);
    let null_cols: Vec<DVector<f64>> = full_v;
    let x = if null_cols.is_empty() {
        xp
    } else {
        let z = DMatrix::from_columns(&null_cols);
        let qz = z.transpose() * q * &z;
        let rhs = -(z.transpose() * (q * &xp + c));
        let sol = qz
            .svd(true, true)
            .solve(&rhs, 1e-13)
            .map_err(|e| Error::Numerical(e.to_string()))?;
        xp + z * sol
    };
    let resid = (a * &x - b).norm();
    let scale = b.norm().max(a.norm()).max(f64::MIN_POSITIVE);
    let objective = x.dot(&(q * &x)) + 2.0 * c.dot(&x);
    Ok(ConstrainedSolution {
        x,
        objective,
        relative_residual: resid / scale,
        constraint_rank: rank,
    })
}

/// Orthonormal basis of the orthogonal complement of the rows of `v_t` flagged
/// in `in_range`.
fn complete_basis(v_t: &DMatrix<f64>, in_range: &[bool], n: usize) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = (0..v_t.nrows())
        .filter(|&k| in_range[k])
        .map(|k| v_t.row(k).transpose())
        .collect();
    let kept = basis.len();
    for e in 0..n {
        let mut v = DVector::zeros(n);
        v[e] = 1.0;
        // two Gram-Schmidt passes for stability
        for _ in 0..2 {
            for w in &basis {
                let p = w.dot(&v);
                v.axpy(-p, w, 1.0);
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / norm);
        }
        if basis.len() == n {
            break;
        }
    }
    basis.split_off(kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projects_onto_plane() {
        // min |x|² s.t. x0 + x1 + x2 = 3  →  (1, 1, 1)
        let q = DMatrix::identity(3, 3);
        let c = DVector::zeros(3);
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let b = DVector::from_vec(vec![3.0]);
        let s = equality_constrained_quadratic(&q, &c, &a, &b).unwrap();
        for k in 0..3 {
            assert!((s.x[k] - 1.0).abs() < 1e-12);
        }
        assert!(s.relative_residual < 1e-14);
        assert_eq!(s.constraint_rank, 1);
    }

    #[test]
    fn reports_inconsistent_constraints() {
        let q = DMatrix::identity(2, 2);
        let c = DVector::zeros(2);
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 0.0]);
        let b = DVector::from_vec(vec![1.0, -1.0]);
        let s = equality_constrained_quadratic(&q, &c, &a, &b).unwrap();
        assert!(s.relative_residual > 0.1);
    }

    #[test]
    fn linear_term_and_free_direction() {
        // min (x1 − 2)² s.t. x0 = 1, with x1 free in the constraint
        let q = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let c = DVector::from_vec(vec![0.0, -2.0]);
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let b = DVector::from_vec(vec![1.0]);
        let s = equality_constrained_quadratic(&q, &c, &a, &b).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-12);
        assert!((s.x[1] - 2.0).abs() < 1e-12);
    }
}
