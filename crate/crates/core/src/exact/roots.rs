//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Illinois-modified regula falsi on a sign-changing bracket `[lo, hi]`.
///
/// Iterates until the bracket collapses to a few ulps or `f` hits zero, so the
/// returned abscissa is as accurate as the function evaluation allows.
pub fn illinois<F>(f: F, mut lo: f64, mut hi: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Bracket(format!(
            "f({lo}) = {f_lo} and f({hi}) = {f_hi} do not bracket a root"
        )));
    }
    // side: -1 if lo was retained last time, +1 if hi was.
    let mut side = 0i8;
    for _ in 0..max_iter {
        let width = (hi - lo).abs();
        if width <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        // keep the step strictly inside; fall back to bisection on stagnation
        if !(x > lo.min(hi) && x < lo.max(hi)) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_hi.signum() {
            hi = x;
            f_hi = fx;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        } else {
            lo = x;
            f_lo = fx;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        }
    }
    // With halved weights the stored values are no longer true residuals;
    // re-evaluate to pick the better endpoint.
    let (a, b) = (f(lo).abs(), f(hi).abs());
    Ok(if a <= b { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let r = illinois(|x| x * x * x - 2.0, 0.0, 2.0, 200).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn decreasing_function() {
        let r = illinois(|x| (-x).exp() - 0.5, 0.0, 5.0, 200).unwrap();
        assert!((r - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(matches!(illinois(|x| x * x + 1.0, -1.0, 1.0, 50), Err(Error::Bracket(_))));
    }
}
