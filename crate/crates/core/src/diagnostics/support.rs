use crate::diagnostics::functionals::Region;
use crate::diagnostics::inequalities::InequalityReport;
use crate::error::{Error, Result};
use crate::hydro::{Grid1D, PrimitiveField};

/// Smallest symmetric interval holding every cell that deviates from `background`
/// by more than `epsilon`.
///
/// Deviations are scaled per quantity by the background's largest density,
/// largest pressure and largest `|u| + sqrt(p / rho)` respectively (a zero
/// scale counts as one).
pub fn track_support(
    pf: &PrimitiveField,
    grid: &Grid1D,
    background: &PrimitiveField,
    epsilon: f64,
) -> Result<Region> {
    if pf.len() != background.len() {
        return Err(Error::InvalidParameter(format!(
            "field has {} cells, background {}",
            pf.len(),
            background.len()
        )));
    }
    let nonzero = |v: f64| if v > 0.0 { v } else { 1.0 };
    let s_rho = nonzero(background.cells.iter().map(|c| c.rho).fold(0.0, f64::max));
    let s_p = nonzero(background.cells.iter().map(|c| c.p).fold(0.0, f64::max));
    let s_u = nonzero(
        background
            .cells
            .iter()
            .map(|c| c.u.abs() + (c.p.max(0.0) / c.rho).sqrt())
            .fold(0.0, f64::max),
    );
    let mut radius: Option<f64> = None;
    for (i, (w, b)) in pf.cells.iter().zip(&background.cells).enumerate() {
        let dev = ((w.rho - b.rho).abs() / s_rho)
            .max((w.u - b.u).abs() / s_u)
            .max((w.p - b.p).abs() / s_p);
        if dev > epsilon {
            let r = grid.center(i).abs() + 0.5 * grid.dx();
            radius = Some(radius.map_or(r, |q| q.max(r)));
        }
    }
    radius
        .map(|radius| Region::TrackedSupport { epsilon, radius })
        .ok_or(Error::EmptyPerturbation)
}

/// `R(t) <= R(0) + sigma t + 2 dx` at each `(t, R)`; the first entry is taken as time zero.
pub fn propagation_checks(radii: &[(f64, f64)], sigma: f64, dx: f64) -> Vec<InequalityReport> {
    let Some(&(t0, r0)) = radii.first() else { return Vec::new() };
    radii
        .iter()
        .map(|&(t, r)| {
            InequalityReport::with_tolerance(
                "finite_propagation",
                t,
                r,
                r0 + sigma * (t - t0) + 2.0 * dx,
                0.0,
                true,
            )
        })
        .collect()
}
