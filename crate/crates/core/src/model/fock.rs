use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{projector, DenseOperator, StateVector};
use crate::error::{check_finite, check_nonneg, Error, Result};

/// Largest cutoff the amplitude recurrences will extend to when suggesting a
/// bigger space.
const MAX_SUGGESTED_CUTOFF: usize = 4096;

/// Default truncation tolerance for Fock-space tails.
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;

/// `D = ⌈N + 10√(N+1) + 20⌉`.
pub fn cutoff_heuristic(mean_photons: f64) -> usize {
    let n = mean_photons.max(0.0);
    (n + 10.0 * (n + 1.0).sqrt() + 20.0).ceil() as usize
}

/// Truncated Fock space `span{|0⟩, …, |D−1⟩}` with cached ladder operators.
#[derive(Clone, Debug)]
pub struct FockSpace {
    dim: usize,
    a: DenseOperator,
    a_dag: DenseOperator,
    number: DenseOperator,
}

impl FockSpace {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::InvalidParameter {
                name: "cutoff",
                value: cutoff as f64,
                reason: "Fock cutoff must be at least 2",
            });
        }
        let mut a = DMatrix::zeros(cutoff, cutoff);
        for n in 1..cutoff {
            a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        let a_dag = a.adjoint();
        let number = DMatrix::from_diagonal(&DVector::from_fn(cutoff, |n, _| {
            Complex64::new(n as f64, 0.0)
        }));
        Ok(Self {
            dim: cutoff,
            a,
            a_dag,
            number,
        })
    }

    /// Space sized by [`cutoff_heuristic`].
    pub fn for_mean_photons(mean_photons: f64) -> Result<Self> {
        Self::new(cutoff_heuristic(mean_photons))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &DenseOperator {
        &self.a
    }

    pub fn a_dag(&self) -> &DenseOperator {
        &self.a_dag
    }

    pub fn number(&self) -> &DenseOperator {
        &self.number
    }

    pub fn identity(&self) -> DenseOperator {
        DMatrix::identity(self.dim, self.dim)
    }

    pub fn zeros(&self) -> DenseOperator {
        DMatrix::zeros(self.dim, self.dim)
    }

    /// `(−1)^{a†a}`
    pub fn parity(&self) -> DenseOperator {
        DMatrix::from_diagonal(&DVector::from_fn(self.dim, |n, _| {
            Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        }))
    }

    /// `(x̂, p̂) = (a + a†, −i(a − a†))`
    pub fn quadratures(&self) -> (DenseOperator, DenseOperator) {
        let x = &self.a + &self.a_dag;
        let p = (&self.a - &self.a_dag).map(|z| z * Complex64::new(0.0, -1.0));
        (x, p)
    }

    pub fn basis(&self, n: usize) -> Result<StateVector> {
        if n >= self.dim {
            return Err(Error::CutoffTooSmall {
                cutoff: self.dim,
                population: 1.0,
                suggested: n + 3,
            });
        }
        let mut v = DVector::zeros(self.dim);
        v[n] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn fock_density(&self, n: usize) -> Result<DenseOperator> {
        Ok(projector(&self.basis(n)?))
    }

    /// Thermal state with mean occupation `n_mean`, truncated; fails when the
    /// discarded weight `(n/(n+1))^D` exceeds `tail_tol`.
    pub fn thermal(&self, n_mean: f64, tail_tol: f64) -> Result<DenseOperator> {
        check_nonneg("n_mean", n_mean)?;
        let q = n_mean / (n_mean + 1.0);
        let tail = q.powi(self.dim as i32);
        if tail > tail_tol {
            let suggested = if q > 0.0 {
                (tail_tol.ln() / q.ln()).ceil() as usize + 2
            } else {
                self.dim
            };
            return Err(Error::CutoffTooSmall {
                cutoff: self.dim,
                population: tail,
                suggested,
            });
        }
        let p0 = 1.0 / (n_mean + 1.0);
        Ok(DMatrix::from_diagonal(&DVector::from_fn(self.dim, |k, _| {
            Complex64::new(p0 * q.powi(k as i32), 0.0)
        })))
    }

    /// Coherent state `|α⟩`.
    pub fn coherent(&self, alpha: Complex64, tail_tol: f64) -> Result<StateVector> {
        self.gaussian_pure(alpha, 0.0, 0.0, tail_tol)
    }

    /// Squeezed vacuum with the x̂ quadrature squeezed.
    pub fn squeezed_vacuum(&self, r: f64, tail_tol: f64) -> Result<StateVector> {
        self.gaussian_pure(Complex64::new(0.0, 0.0), r, 0.0, tail_tol)
    }

    /// `D(α) S(r e^{2iθ}) |0⟩` in the Fock basis; `θ` is the squeezed axis as
    /// in [`super::make_gaussian`].
    pub fn gaussian_pure(
        &self,
        alpha: Complex64,
        r: f64,
        squeeze_axis: f64,
        tail_tol: f64,
    ) -> Result<StateVector> {
        let amps = gaussian_amplitudes(alpha, r, squeeze_axis, self.dim)?;
        let kept: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        let tail = (1.0 - kept).max(0.0);
        if tail > tail_tol {
            return Err(Error::CutoffTooSmall {
                cutoff: self.dim,
                population: tail,
                suggested: gaussian_cutoff(alpha, r, squeeze_axis, tail_tol)?,
            });
        }
        Ok(DVector::from_vec(amps))
    }

    /// Population of the top `levels` Fock levels of `rho`.
    pub fn edge_population(&self, rho: &DenseOperator, levels: usize) -> f64 {
        let start = self.dim.saturating_sub(levels);
        (start..self.dim).map(|k| rho[(k, k)].re.abs()).sum()
    }

    /// Embeds `rho` into a space with a larger cutoff.
    pub fn embed(&self, rho: &DenseOperator, larger: &FockSpace) -> Result<DenseOperator> {
        if larger.dim < self.dim || rho.nrows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.nrows(),
            });
        }
        let mut out = larger.zeros();
        out.view_mut((0, 0), (self.dim, self.dim)).copy_from(rho);
        Ok(out)
    }
}

/// Amplitudes `⟨n|D(α)S(ξ)|0⟩` for `n < count`, from the annihilation
/// condition `[(a − α) cosh r + (a† − α*) e^{iφ} sinh r] |ψ⟩ = 0`.
pub fn gaussian_amplitudes(
    alpha: Complex64,
    r: f64,
    squeeze_axis: f64,
    count: usize,
) -> Result<Vec<Complex64>> {
    check_nonneg("r", r)?;
    check_finite("squeeze_axis", squeeze_axis)?;
    check_finite("alpha", alpha.norm())?;
    let phase = Complex64::from_polar(1.0, 2.0 * squeeze_axis);
    let (ch, sh) = (r.cosh(), r.sinh());
    let gamma = alpha * ch + alpha.conj() * phase * sh;
    let c0 = (-0.5 * alpha.norm_sqr() - 0.5 * alpha.conj() * alpha.conj() * phase * r.tanh()).exp()
        / ch.sqrt();
    let mut amps = Vec::with_capacity(count);
    if count == 0 {
        return Ok(amps);
    }
    amps.push(c0);
    for n in 0..count.saturating_sub(1) {
        let prev = if n > 0 { amps[n - 1] } else { Complex64::new(0.0, 0.0) };
        let next = (gamma * amps[n] - phase * sh * (n as f64).sqrt() * prev)
            / (ch * ((n + 1) as f64).sqrt());
        amps.push(next);
    }
    Ok(amps)
}

/// Smallest cutoff whose discarded weight for the given Gaussian pure state is
/// below `tail_tol` (plus two levels of headroom).
pub fn gaussian_cutoff(alpha: Complex64, r: f64, squeeze_axis: f64, tail_tol: f64) -> Result<usize> {
    let amps = gaussian_amplitudes(alpha, r, squeeze_axis, MAX_SUGGESTED_CUTOFF)?;
    let mut kept = 0.0;
    for (n, c) in amps.iter().enumerate() {
        kept += c.norm_sqr();
        if 1.0 - kept <= tail_tol {
            return Ok(n + 3);
        }
    }
    Err(Error::Numerical(format!(
        "Gaussian state needs more than {MAX_SUGGESTED_CUTOFF} Fock levels"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{expectation, make_gaussian};

    #[test]
    fn qubit_truncation() {
        let s = FockSpace::new(2).unwrap();
        assert_eq!(s.a()[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(s.a()[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(s.a()[(1, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(s.a()[(1, 1)], Complex64::new(0.0, 0.0));
        assert!(FockSpace::new(1).is_err());
    }

    #[test]
    fn canonical_commutator_away_from_edge() {
        let s = FockSpace::new(30).unwrap();
        let comm = s.a() * s.a_dag() - s.a_dag() * s.a();
        for i in 0..29 {
            for j in 0..29 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((comm[(i, j)] - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
        assert_eq!(s.a_dag(), &s.a().adjoint());
        for n in 0..30 {
            assert_eq!(s.number()[(n, n)].re, n as f64);
        }
    }

    #[test]
    fn heuristic_values() {
        assert_eq!(cutoff_heuristic(0.0), 30);
        assert_eq!(cutoff_heuristic(5.0), (5.0 + 10.0 * 6f64.sqrt() + 20.0f64).ceil() as usize);
    }

    #[test]
    fn gaussian_fock_state_reproduces_moments() {
        let space = FockSpace::new(90).unwrap();
        let (x, p) = space.quadratures();
        for &(alpha, r, axis) in &[
            (Complex64::new(1.2, -0.7), 0.5, 0.3),
            (Complex64::new(0.0, 1.5), 0.8, 0.0),
            (Complex64::new(2.0, 0.0), 0.0, 0.0),
        ] {
            let psi = space.gaussian_pure(alpha, r, axis, 1e-12).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-12);
            let rho = projector(&psi);
            let mx = expectation(&rho, &x).re;
            let mp = expectation(&rho, &p).re;
            let g = make_gaussian(alpha, r, axis).unwrap();
            assert!((mx - g.mean[0]).abs() < 1e-10);
            assert!((mp - g.mean[1]).abs() < 1e-10);
            let vxx = expectation(&rho, &(&x * &x)).re - mx * mx;
            let vpp = expectation(&rho, &(&p * &p)).re - mp * mp;
            let vxp = 0.5 * expectation(&rho, &(&x * &p + &p * &x)).re - mx * mp;
            assert!((vxx - g.cov[0][0]).abs() < 1e-9, "{vxx} vs {}", g.cov[0][0]);
            assert!((vpp - g.cov[1][1]).abs() < 1e-9);
            assert!((vxp - g.cov[0][1]).abs() < 1e-9);
        }
    }

    #[test]
    fn truncation_is_reported() {
        let space = FockSpace::new(10).unwrap();
        match space.coherent(Complex64::new(3.0, 0.0), 1e-8) {
            Err(Error::CutoffTooSmall { suggested, .. }) => assert!(suggested > 10),
            other => panic!("expected cutoff error, got {other:?}"),
        }
        assert!(space.thermal(2.0, 1e-8).is_err());
        let rho = FockSpace::new(60).unwrap().thermal(0.5, 1e-8).unwrap();
        assert!((crate::model::trace(&rho).re - 1.0).abs() < 1e-8);
    }
}
