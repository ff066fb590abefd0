use serde::{Deserialize, Serialize};

use crate::hydro::DiagnosticRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupEstimate {
    /// Zero of the fitted line.
    pub t_root: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub slope: f64,
    pub correlation: f64,
}

/// Extrapolates `1 / max |du/dx|` linearly to zero over the last quartile of the series.
///
/// Returns `None` for fewer than four records, a vanishing gradient, or no
/// clear downward trend (slope `>= 0` or correlation `>= -0.95`). The interval
/// is the root plus or minus one record spacing.
pub fn estimate_blowup(series: &[DiagnosticRecord]) -> Option<BlowupEstimate> {
    let n = series.len();
    if n < 4 {
        return None;
    }
    let take = n.div_ceil(4).max(3);
    let tail = &series[n - take..];
    if tail.iter().any(|r| !(r.dudx_max > 0.0) || !r.dudx_max.is_finite()) {
        return None;
    }
    let m = take as f64;
    let (ts, ys): (Vec<f64>, Vec<f64>) = tail.iter().map(|r| (r.t, 1.0 / r.dudx_max)).unzip();
    let tm = ts.iter().sum::<f64>() / m;
    let ym = ys.iter().sum::<f64>() / m;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (t, y) in ts.iter().zip(&ys) {
        sxx += (t - tm) * (t - tm);
        syy += (y - ym) * (y - ym);
        sxy += (t - tm) * (y - ym);
    }
    if !(sxx > 0.0 && syy > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let correlation = sxy / (sxx * syy).sqrt();
    if !(slope < 0.0 && correlation < -0.95) {
        return None;
    }
    let t_root = tm - ym / slope;
    let h = series[n - 1].t - series[n - 2].t;
    Some(BlowupEstimate { t_root, t_lo: t_root - h, t_hi: t_root + h, slope, correlation })
}
