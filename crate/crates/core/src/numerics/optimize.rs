use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximisation of a unimodal `f` on `[lo, hi]`, stopping once
/// the bracket is below `tol` in absolute terms.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // The bracket midpoint can be marginally worse than the best probe.
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, p| if p.1 > best.1 { p } else { best })
}

/// `points` log-spaced abscissae on `[lo, hi]` (inclusive).
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (l, h) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| (l + (h - l) * k as f64 / (points - 1) as f64).exp())
        .collect()
}

/// `points` equally spaced abscissae on `[lo, hi]` (inclusive).
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect()
}

/// Maximiser of `f` over `t ∈ [lo, hi]` searched in `ln t`, with a
/// `prescan`-point unimodality check first.
///
/// Returns `NotUnimodal` when the sampled values rise again after falling.
pub fn maximize_log_unimodal(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    prescan: usize,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParameter {
            name: "t_range",
            value: lo,
            reason: "need 0 < lo < hi",
        });
    }
    let grid = log_grid(lo, hi, prescan.max(3));
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("objective is not finite on the search grid".into()));
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slack = 1e-12 * scale;
    let mut falling = false;
    for w in values.windows(2) {
        if w[1] < w[0] - slack {
            falling = true;
        } else if falling && w[1] > w[0] + slack {
            return Err(Error::NotUnimodal { lo, hi });
        }
    }
    let k = argmax(&values);
    let a = grid[k.saturating_sub(1)].ln();
    let b = grid[(k + 1).min(grid.len() - 1)].ln();
    // relative tolerance on t equals absolute tolerance on ln t
    let (s, v) = golden_section_max(|s| f(s.exp()), a, b, rel_tol);
    Ok((s.exp(), v))
}

/// Dense log-grid search followed by golden-section refinement around the
/// best grid point; works for multimodal objectives.
pub fn maximize_log_grid(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    points: usize,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParameter {
            name: "t_range",
            value: lo,
            reason: "need 0 < lo < hi",
        });
    }
    let grid = log_grid(lo, hi, points.max(3));
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let k = argmax(&values);
    let a = grid[k.saturating_sub(1)].ln();
    let b = grid[(k + 1).min(grid.len() - 1)].ln();
    let (s, v) = golden_section_max(|s| f(s.exp()), a, b, rel_tol);
    if v >= values[k] {
        Ok((s.exp(), v))
    } else {
        Ok((grid[k], values[k]))
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut k = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[k] {
            k = i;
        }
    }
    k
}
