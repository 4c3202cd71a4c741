use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson quadrature of `f` on `[a, b]` to relative tolerance
/// `rel_tol` (with an absolute floor relative to the coarse estimate).
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    let eps = rel_tol * scale;
    let v = recurse(&f, a, b, fa, fm, fb, whole, eps, MAX_DEPTH)?;
    if !v.is_finite() {
        return Err(Error::Numerical("integrand is not finite".into()));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numerical(format!(
            "adaptive quadrature did not converge near t = {m:.6e}"
        )));
    }
    Ok(recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)?
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)?)
}
