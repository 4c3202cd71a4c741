use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Vector-space operations needed by the integrator.
pub trait OdeState: Clone {
    /// `self += k · x`
    fn axpy(&mut self, k: f64, x: &Self);
    /// Largest absolute entry of `self − other`.
    fn max_abs_diff(&self, other: &Self) -> f64;
}

impl OdeState for DMatrix<Complex64> {
    fn axpy(&mut self, k: f64, x: &Self) {
        for (a, b) in self.iter_mut().zip(x.iter()) {
            *a += b * k;
        }
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

impl<S: OdeState> OdeState for Vec<S> {
    fn axpy(&mut self, k: f64, x: &Self) {
        for (a, b) in self.iter_mut().zip(x.iter()) {
            a.axpy(k, b);
        }
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other.iter())
            .fold(0.0, |m, (a, b)| m.max(a.max_abs_diff(b)))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StepControl {
    /// Local error allowed per step (max-abs entry).
    pub tol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            initial_step: 1e-3,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub max_error: f64,
}

fn rk4_step<S: OdeState>(f: &impl Fn(&S) -> S, y: &S, k1: &S, h: f64) -> S {
    let mut tmp = y.clone();
    tmp.axpy(0.5 * h, k1);
    let k2 = f(&tmp);
    let mut tmp = y.clone();
    tmp.axpy(0.5 * h, &k2);
    let k3 = f(&tmp);
    let mut tmp = y.clone();
    tmp.axpy(h, &k3);
    let k4 = f(&tmp);
    let mut out = y.clone();
    out.axpy(h / 6.0, k1);
    out.axpy(h / 3.0, &k2);
    out.axpy(h / 3.0, &k3);
    out.axpy(h / 6.0, &k4);
    out
}

/// Integrates the autonomous system `dy/dt = f(y)` from 0 to `t` with classic
/// RK4 and step-doubling error control. The accepted value is the Richardson
/// extrapolation of the two half steps.
pub fn integrate<S: OdeState>(
    f: impl Fn(&S) -> S,
    y0: S,
    t: f64,
    control: StepControl,
) -> Result<(S, OdeStats)> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be finite and non-negative",
        });
    }
    let mut stats = OdeStats::default();
    let mut y = y0;
    let mut now = 0.0;
    let mut h = control.initial_step.min(t);
    while now < t {
        if stats.accepted + stats.rejected >= control.max_steps {
            return Err(Error::Numerical(format!(
                "integrator exceeded {} steps at t = {now:.6e}",
                control.max_steps
            )));
        }
        let last = now + h >= t;
        if last {
            h = t - now;
        }
        let k1 = f(&y);
        let full = rk4_step(&f, &y, &k1, h);
        let half = rk4_step(&f, &y, &k1, 0.5 * h);
        let k1h = f(&half);
        let two = rk4_step(&f, &half, &k1h, 0.5 * h);
        let err = two.max_abs_diff(&full) / 15.0;
        if !err.is_finite() {
            return Err(Error::Numerical(format!(
                "integration diverged at t = {now:.6e}"
            )));
        }
        if err <= control.tol {
            let mut next = two.clone();
            next.axpy(1.0 / 15.0, &two);
            next.axpy(-1.0 / 15.0, &full);
            y = next;
            now = if last { t } else { now + h };
            stats.accepted += 1;
            stats.max_error = stats.max_error.max(err);
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 {
            4.0
        } else {
            (0.9 * (control.tol / err).powf(0.2)).clamp(0.2, 4.0)
        };
        h *= factor;
        if h < 1e-14 * t.max(1.0) {
            return Err(Error::Numerical(format!(
                "step size underflow at t = {now:.6e}"
            )));
        }
    }
    Ok((y, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> DMatrix<Complex64> {
        DMatrix::from_element(1, 1, Complex64::new(v, 0.0))
    }

    #[test]
    fn exponential_decay() {
        let (y, stats) = integrate(
            |y: &DMatrix<Complex64>| y.map(|z| -z),
            scalar(1.0),
            5.0,
            StepControl::default(),
        )
        .unwrap();
        assert!((y[(0, 0)].re - (-5.0f64).exp()).abs() < 1e-10);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn rotation_conserves_norm() {
        let y0 = vec![scalar(1.0), scalar(0.0)];
        let (y, _) = integrate(
            |y: &Vec<DMatrix<Complex64>>| vec![y[1].clone(), y[0].map(|z| -z)],
            y0,
            10.0,
            StepControl::default(),
        )
        .unwrap();
        assert!((y[0][(0, 0)].re - 10f64.cos()).abs() < 1e-9);
        assert!((y[1][(0, 0)].re + 10f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn zero_time_is_identity() {
        let (y, stats) =
            integrate(|y: &DMatrix<Complex64>| y.clone(), scalar(2.0), 0.0, StepControl::default())
                .unwrap();
        assert_eq!(y[(0, 0)].re, 2.0);
        assert_eq!(stats.accepted, 0);
    }
}
