//! Separable solution with a stationary density singularity.
//!
//! Substituting `u = alpha(t) x`, `rho = beta0 |x|^(-1)`, `p = s(t) |x|` into
//! the planar equations leaves the ODE pair
//!
//! ```text
//! alpha' = -alpha^2 - s / beta0
//! s'     = -(gamma + 1) n s alpha - lambda beta0^(1/2) s^(3/2)
//! ```
//!
//! For `s(0) > 0` every trajectory escapes with `alpha -> -inf` in finite time.

use serde::{Deserialize, Serialize};

use crate::blowup::{BlowupReport, BlowupTrigger};
use crate::error::{Error, Result};
use crate::exact::ode::{self, AdaptiveOptions, StopReason};
use crate::hydro::GasParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularState {
    /// Velocity slope.
    pub alpha: f64,
    /// Pressure slope, `s >= 0`.
    pub s: f64,
    /// Density amplitude, constant along trajectories.
    pub beta0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub t: f64,
    pub alpha: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularTrajectory {
    pub beta0: f64,
    pub points: Vec<SingularPoint>,
    pub blowup: BlowupReport,
}

/// Stop thresholds for [`integrate_singular_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularThresholds {
    /// Stop once `|alpha|` exceeds this.
    pub alpha: f64,
    /// Optional cap on `s`; `s` grows like `alpha^2` near the singularity.
    pub s: Option<f64>,
}

fn rhs_unchecked(alpha: f64, s: f64, beta0: f64, g: &GasParams) -> (f64, f64) {
    let s = s.max(0.0);
    let pressure_term = if s == 0.0 { 0.0 } else { s / beta0 };
    let dalpha = -alpha * alpha - pressure_term;
    let ds = -(g.gamma + 1.0) * g.dim as f64 * s * alpha - g.lambda * beta0.sqrt() * s * s.sqrt();
    (dalpha, ds)
}

/// Right-hand side `(alpha', s')`.
pub fn singular_rhs(st: &SingularState, g: &GasParams) -> Result<(f64, f64)> {
    if st.s < 0.0 {
        return Err(Error::Domain(format!("pressure slope s = {} must be >= 0", st.s)));
    }
    if st.beta0 < 0.0 {
        return Err(Error::Domain(format!("density amplitude beta0 = {} must be >= 0", st.beta0)));
    }
    if st.beta0 == 0.0 && st.s > 0.0 {
        return Err(Error::Domain("s > 0 needs beta0 > 0".into()));
    }
    Ok(rhs_unchecked(st.alpha, st.s, st.beta0, g))
}

pub fn integrate_singular(
    st0: &SingularState,
    g: &GasParams,
    t_end: f64,
    blowup_threshold: f64,
) -> Result<SingularTrajectory> {
    integrate_singular_with(
        st0,
        g,
        t_end,
        SingularThresholds { alpha: blowup_threshold, s: None },
        &AdaptiveOptions::default(),
    )
}

pub fn integrate_singular_with(
    st0: &SingularState,
    g: &GasParams,
    t_end: f64,
    thresholds: SingularThresholds,
    opts: &AdaptiveOptions,
) -> Result<SingularTrajectory> {
    singular_rhs(st0, g)?;
    if !(t_end >= 0.0) {
        return Err(Error::InvalidParameter(format!("t_end must be >= 0, got {t_end}")));
    }
    let beta0 = st0.beta0;
    let f = |_t: f64, y: &[f64; 2]| {
        let (da, ds) = rhs_unchecked(y[0], y[1], beta0, g);
        [da, ds]
    };
    let stop = |_t: f64, y: &[f64; 2]| {
        y[0].abs() > thresholds.alpha || thresholds.s.is_some_and(|cap| y[1] > cap)
    };
    let (path, why) =
        ode::integrate(f, 0.0, [st0.alpha, st0.s], t_end, opts, stop, |y| y[1] = y[1].max(0.0));
    let points: Vec<SingularPoint> =
        path.iter().map(|&(t, y)| SingularPoint { t, alpha: y[0], s: y[1] }).collect();

    let last = *points.last().expect("trajectory holds the initial point");
    let blowup = match why {
        StopReason::Reached => BlowupReport::none(),
        StopReason::MaxSteps => {
            return Err(Error::Domain("singular integration exceeded its step budget".into()))
        }
        StopReason::Event | StopReason::StepUnderflow | StopReason::NonFinite => {
            let trigger = if why == StopReason::Event && last.alpha.abs() <= thresholds.alpha {
                BlowupTrigger::PressureSlopeThreshold
            } else {
                BlowupTrigger::AlphaThreshold
            };
            let (lo, hi) = extrapolate_pole(&points);
            BlowupReport::detected(trigger, last.t, lo, hi)
        }
    };
    Ok(SingularTrajectory { beta0, points, blowup })
}

/// Blow-up time bracket from the last accepted steps.
///
/// Near the singularity `1/|alpha|` vanishes roughly linearly, so the zero of
/// its linear (two-point) and quadratic (three-point) extrapolants estimates
/// the escape time. The lower end is the last time actually reached.
fn extrapolate_pole(points: &[SingularPoint]) -> (f64, f64) {
    let n = points.len();
    let t_last = points[n - 1].t;
    if n < 3 {
        return (t_last, t_last);
    }
    let p: Vec<(f64, f64)> = points[n - 3..].iter().map(|q| (q.t, 1.0 / q.alpha.abs())).collect();
    let mut roots = Vec::new();
    let (t1, y1) = p[1];
    let (t2, y2) = p[2];
    if y1 != y2 {
        roots.push(t2 - y2 * (t2 - t1) / (y2 - y1));
    }
    // quadratic through three points, Newton form
    let (t0, y0) = p[0];
    let d01 = (y1 - y0) / (t1 - t0);
    let d12 = (y2 - y1) / (t2 - t1);
    let d012 = (d12 - d01) / (t2 - t0);
    // y(t) = y2 + b (t - t2) + d012 (t - t2)^2 with b the slope at t2
    let b = d12 + d012 * (t2 - t1);
    if d012 != 0.0 {
        let disc = b * b - 4.0 * d012 * y2;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            for r in [(-b + sq) / (2.0 * d012), (-b - sq) / (2.0 * d012)] {
                if r >= 0.0 {
                    roots.push(t2 + r);
                }
            }
        }
    } else if b != 0.0 {
        roots.push(t2 - y2 / b);
    }
    let h = t2 - t1;
    let best = roots
        .into_iter()
        .filter(|r| r.is_finite() && *r >= t_last)
        .fold(f64::NAN, f64::max);
    let hi = if best.is_nan() { t_last + h } else { best + h };
    (t_last, hi.max(t_last))
}

/// Maximum residual of the planar equations for the separable ansatz.
///
/// Each equation's residual is divided by `max(1, sum of |terms|)`, i.e. it is
/// absolute for small states and relative once the terms are large.
pub fn singular_field_residual(
    st: &SingularState,
    dst: (f64, f64),
    sample_xs: &[f64],
    g: &GasParams,
) -> Result<f64> {
    if st.s < 0.0 {
        return Err(Error::Domain(format!("pressure slope s = {} must be >= 0", st.s)));
    }
    let (dalpha, ds) = dst;
    let (alpha, s, b) = (st.alpha, st.s, st.beta0);
    let gamma = g.gamma;
    let mut worst: f64 = 0.0;
    for &x in sample_xs {
        if x == 0.0 || !x.is_finite() {
            return Err(Error::Domain(format!("sample x = {x} must be nonzero and finite")));
        }
        let ax = x.abs();
        let sgn = x.signum();
        let rho = b / ax;
        let u = alpha * x;
        let p = s * ax;
        // continuity holds identically: rho u = beta0 alpha sign(x) and beta0 is constant
        // momentum: rho (u_t + u u_x) + p_x
        let mom_terms = [rho * dalpha * x, rho * u * alpha, s * sgn];
        // pressure: p_t + u p_x + gamma p u_x + lambda rho^(1/2) p^(3/2)
        let pr_terms = [
            ds * ax,
            u * s * sgn,
            gamma * p * alpha,
            g.lambda * rho.sqrt() * p * p.sqrt(),
        ];
        for terms in [&mom_terms[..], &pr_terms[..]] {
            let sum: f64 = terms.iter().sum();
            let scale: f64 = terms.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
            worst = worst.max(sum.abs() / scale);
        }
    }
    Ok(worst)
}
