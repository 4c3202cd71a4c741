use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::family::{AffineFamily, HCorrection};
use super::BoundReport;
use crate::error::{check_nonneg, Error, Result};
use crate::model::{DenseOperator, FockSpace, LindbladModel, ParameterTag, DEFAULT_TAIL_TOL};
use crate::numerics::equality_constrained_quadratic;

/// Levels at the top of the truncated space excluded from operator
/// identities: `a²` reaches two levels, products of two such terms four.
pub const INTERIOR_MARGIN: usize = 4;

/// Relative residual above which `Ḣ` is declared outside the Lindblad span.
pub const HNLS_TOL: f64 = 1e-6;

/// Extra levels used for the second cutoff of the HNLS consistency check.
const HNLS_CUTOFF_STEP: usize = 8;

/// Relative residual above which `𝔟(h) = 0` counts as infeasible.
const FEASIBILITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HOptimum {
    pub h: HCorrection,
    /// Minimal `⟨𝔞(h)⟩` subject to `𝔟(h) = 0`.
    pub a_expect: f64,
    /// Relative residual of `𝔟(h) = 0` on the interior block.
    pub residual: f64,
    pub constraint_rank: usize,
}

fn interior(space: &FockSpace) -> Result<usize> {
    space
        .dim()
        .checked_sub(INTERIOR_MARGIN)
        .filter(|&k| k >= 2)
        .ok_or(Error::CutoffTooSmall {
            cutoff: space.dim(),
            population: 1.0,
            suggested: INTERIOR_MARGIN + 2,
        })
}

/// Relative residual of the least-squares projection of `Ḣ` onto
/// `span_ℂ{I, L_i, L_i†, L_i†L_j}`, restricted to the interior block.
pub fn hnls_residual(model: &LindbladModel, space: &FockSpace) -> Result<f64> {
    if !model.target.is_hamiltonian() {
        return Err(Error::Unsupported(format!(
            "the HNLS condition concerns Hamiltonian parameters, not {}",
            model.target
        )));
    }
    let m = interior(space)?;
    let ls = model.lindblad_operators(space);
    let mut basis: Vec<DenseOperator> = vec![space.identity()];
    for l in &ls {
        basis.push(l.clone());
        basis.push(l.adjoint());
    }
    for l in &ls {
        for k in &ls {
            basis.push(l.adjoint() * k);
        }
    }
    let rows = m * m;
    let flatten = |op: &DenseOperator| {
        let mut v = Vec::with_capacity(rows);
        for c in 0..m {
            for r in 0..m {
                v.push(op[(r, c)]);
            }
        }
        DVector::from_vec(v)
    };
    let cols: Vec<DVector<Complex64>> = basis.iter().map(flatten).collect();
    let a = DMatrix::from_columns(&cols);
    let target = flatten(&model.hamiltonian_derivative(space));
    let norm = target.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let svd = a.clone().svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let x = svd.solve(&target, eps).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok((a * x - &target).norm() / norm)
}

/// True when `Ḣ` lies outside the Lindblad span, so that quadratic growth
/// of the QFI can persist. The verdict must agree at two cutoffs.
pub fn hnls_test(model: &LindbladModel, space: &FockSpace) -> Result<bool> {
    let r1 = hnls_residual(model, space)?;
    let wider = FockSpace::new(space.dim() + HNLS_CUTOFF_STEP)?;
    let r2 = hnls_residual(model, &wider)?;
    let (v1, v2) = (r1 > HNLS_TOL, r2 > HNLS_TOL);
    if v1 != v2 {
        return Err(Error::Indeterminate(format!(
            "HNLS residual {r1:.3e} at cutoff {} but {r2:.3e} at cutoff {}",
            space.dim(),
            wider.dim()
        )));
    }
    Ok(v1)
}

/// Minimiser of `⟨𝔞(h)⟩_ρ` over `h` with `𝔟(h) = 0` imposed on the interior
/// block. Noise parameters use the general operators with `iL̇` terms.
pub fn numeric_h_optimization(
    model: &LindbladModel,
    rho: &DenseOperator,
    space: &FockSpace,
) -> Result<HOptimum> {
    if rho.nrows() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: rho.nrows(),
        });
    }
    let m = interior(space)?;
    let edge = space.edge_population(rho, INTERIOR_MARGIN);
    if edge > DEFAULT_TAIL_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff: space.dim(),
            population: edge,
            suggested: space.dim() + space.dim() / 2 + INTERIOR_MARGIN,
        });
    }
    let fam = AffineFamily::new(model, space, !model.target.is_hamiltonian())?;
    let (q, c, k) = fam.a_quadratic(rho);
    let (a, b) = interior_constraint(&fam, m);
    let sol = equality_constrained_quadratic(&q, &c, &a, &b)?;
    if sol.relative_residual > FEASIBILITY_TOL {
        return Err(Error::Unbounded(format!(
            "𝔟(h) = 0 has no solution for target {} (relative residual {:.3e} on the interior block); \
             Ḣ lies outside the Lindblad span",
            model.target, sol.relative_residual
        )));
    }
    let h = HCorrection::from_real(sol.x.as_slice(), fam.jumps)?;
    Ok(HOptimum {
        h,
        a_expect: sol.objective + k,
        residual: sol.relative_residual,
        constraint_rank: sol.constraint_rank,
    })
}

/// Real and imaginary parts of the upper triangle of `𝔟` on the `m × m`
/// interior block, as `A x = b`.
fn interior_constraint(fam: &AffineFamily, m: usize) -> (DMatrix<f64>, DVector<f64>) {
    let entries: Vec<(usize, usize)> = (0..m).flat_map(|c| (0..=c).map(move |r| (r, c))).collect();
    let rows = 2 * entries.len();
    let n = fam.vars();
    let mut a = DMatrix::zeros(rows, n);
    let mut b = DVector::zeros(rows);
    for (e, &(r, c)) in entries.iter().enumerate() {
        b[2 * e] = -fam.b0[(r, c)].re;
        b[2 * e + 1] = -fam.b0[(r, c)].im;
        for v in 0..n {
            a[(2 * e, v)] = fam.bv[v][(r, c)].re;
            a[(2 * e + 1, v)] = fam.bv[v][(r, c)].im;
        }
    }
    (a, b)
}

/// Closed-form minimiser of `⟨𝔞(h)⟩` with `𝔟(h) = 0` on states with
/// `⟨a†a⟩ = mean_photons` and no coherences between photon numbers.
///
/// * frequency: `N/(Γ(1+2n_E − n_E/(N+1)))`
/// * displacement: `1/(Γ(1+2n_E))`
/// * squeezing: `((1+2n_E)N + n_E)/(Γ n_E(1+n_E))`, unbounded at `n_E = 0`
pub fn closed_form_h(model: &LindbladModel, mean_photons: f64) -> Result<(HCorrection, f64)> {
    let n_ph = check_nonneg("mean_photons", mean_photons)?;
    let g = model.gamma;
    let n = model.n_env;
    let jumps = model.jump_count();
    let c = model.jump_amplitudes();
    let mut h = HCorrection::zero(jumps);
    match model.target {
        ParameterTag::Frequency => {
            // minimise x²Γ(1+n)N + y²Γn(N+1) with Γ(1+n)x + Γn y = −1
            let (x, y) = if n_ph == 0.0 {
                (-1.0 / (g * (1.0 + n)), 0.0)
            } else {
                let s = g * (1.0 + n) / n_ph + g * n / (n_ph + 1.0);
                (-1.0 / (n_ph * s), -1.0 / ((n_ph + 1.0) * s))
            };
            h.set_hmat(0, 0, Complex64::new(x, 0.0));
            if jumps == 2 {
                h.set_hmat(1, 1, Complex64::new(y, 0.0));
                h.h00 = -y * g * n;
            }
            let value = n_ph / (g * (1.0 + 2.0 * n - n / (n_ph + 1.0)));
            Ok((h, value))
        }
        ParameterTag::Displacement => {
            let s = g * (1.0 + 2.0 * n);
            h.hvec[0] = Complex64::new(0.0, -c[0] / s);
            if jumps == 2 {
                h.hvec[1] = Complex64::new(0.0, c[1] / s);
            }
            Ok((h, 1.0 / s))
        }
        ParameterTag::Squeezing => {
            if jumps == 1 {
                return Err(Error::Unbounded(
                    "with a single jump operator a² + a†² lies outside the Lindblad span (HNLS holds)"
                        .into(),
                ));
            }
            let s = -1.0 / (g * (n * (1.0 + n)).sqrt());
            h.set_hmat(0, 1, Complex64::new(s, 0.0));
            let value = ((1.0 + 2.0 * n) * n_ph + n) / (g * n * (1.0 + n));
            Ok((h, value))
        }
        ParameterTag::Loss | ParameterTag::Temperature => Err(Error::Unsupported(format!(
            "closed-form h is defined for Hamiltonian parameters, not {}",
            model.target
        ))),
    }
}

/// `(2N+1)/(Γ√(n_E(1+n_E)))`: the squeezing value of `⟨𝔞⟩` obtained when
/// both jump rates are replaced by their geometric mean. It differs from the
/// exact minimum of [`closed_form_h`] except as `n_E → ∞`.
pub fn squeezing_geometric_estimate(gamma: f64, n_env: f64, mean_photons: f64) -> f64 {
    (2.0 * mean_photons + 1.0) / (gamma * (n_env * (1.0 + n_env)).sqrt())
}

/// `I/t ≤ 4⟨𝔞(h)⟩` for a Hamiltonian parameter on a photon budget `N`.
pub fn hamiltonian_rate_bound(model: &LindbladModel, mean_photons: f64) -> Result<BoundReport> {
    let (_, a) = match closed_form_h(model, mean_photons) {
        Ok(v) => v,
        Err(Error::Unbounded(why)) => return Ok(BoundReport::unbounded(model.target, why)),
        Err(e) => return Err(e),
    };
    let g = model.gamma;
    let n = model.n_env;
    let n_ph = mean_photons;
    let mut components = vec![("a_expect".to_string(), a)];
    let tau = match model.target {
        ParameterTag::Frequency => {
            components.push(("large_n_rate".into(), 4.0 * n_ph / (g * (1.0 + 2.0 * n))));
            Some(1.0 / (2.0 * (n_ph + 1.0) * g * (1.0 + 2.0 * n)))
        }
        ParameterTag::Displacement => Some(1.0 / ((4.0 * n_ph + 2.0) * g * (1.0 + 2.0 * n))),
        _ => {
            components.push((
                "geometric_estimate_rate".into(),
                4.0 * squeezing_geometric_estimate(g, n, n_ph),
            ));
            None
        }
    };
    Ok(BoundReport {
        target: model.target,
        rate_bound: 4.0 * a,
        tau,
        unbounded: false,
        components,
        note: None,
    })
}
