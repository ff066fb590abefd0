use serde::{Deserialize, Serialize};

use crate::hydro::{Balance, DiagnosticRecord, GasParams, Grid1D, PrimitiveField};
use crate::diagnostics::inequalities::K_PRESSURE_THRESHOLD;
use crate::par::{self, ExecMode};

/// Cells over which functionals are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Region {
    FullDomain,
    /// Symmetric interval `[-radius, radius]` around a perturbation found at level `epsilon`.
    TrackedSupport { epsilon: f64, radius: f64 },
}

impl Region {
    fn contains(&self, x: f64) -> bool {
        match *self {
            Region::FullDomain => true,
            Region::TrackedSupport { radius, .. } => x.abs() <= radius,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match *self {
            Region::FullDomain => None,
            Region::TrackedSupport { radius, .. } => Some(radius),
        }
    }
}

/// Midpoint quadrature of the integral functionals over `region`.
///
/// `t` and `dt` are left at zero and the boundary-flux part of
/// [`Balance`] is empty; callers that know them fill them in.
pub fn functionals(
    pf: &PrimitiveField,
    grid: &Grid1D,
    g: &GasParams,
    region: Region,
) -> DiagnosticRecord {
    functionals_with(pf, grid, g, region, ExecMode::Sequential)
}

pub fn functionals_with(
    pf: &PrimitiveField,
    grid: &Grid1D,
    g: &GasParams,
    region: Region,
    mode: ExecMode,
) -> DiagnosticRecord {
    let n = pf.len();
    let dx = grid.dx();
    let gamma = g.gamma;
    let cells = &pf.cells;
    let sums = par::chunked_sums::<9, _>(mode, n, |i| {
        let x = grid.center(i);
        if !region.contains(x) {
            return [0.0; 9];
        }
        let c = cells[i];
        let mom = c.rho * c.u;
        let (s, ds, de) = if c.p > 0.0 {
            let p32 = c.p * c.p.sqrt();
            (
                c.p * c.rho.powf(1.0 - gamma),
                p32 * c.rho.powf(1.5 - gamma),
                c.rho.sqrt() * p32,
            )
        } else {
            (0.0, 0.0, 0.0)
        };
        [
            c.rho,
            mom,
            0.5 * mom * c.u,
            c.p / (gamma - 1.0),
            0.5 * c.rho * x * x,
            mom * x,
            s,
            de,
            ds,
        ]
    });
    let [m, p, ek, ei, gg, ff, s, de, ds] = sums.map(|v| v * dx);

    let k_max = par::max_over(mode, n, |i| {
        if region.contains(grid.center(i)) && cells[i].p > K_PRESSURE_THRESHOLD {
            cells[i].entropy(gamma)
        } else {
            f64::NEG_INFINITY
        }
    });
    let rho_max = par::max_over(mode, n, |i| {
        if region.contains(grid.center(i)) {
            cells[i].rho
        } else {
            f64::NEG_INFINITY
        }
    });
    let dudx_max = par::max_over(mode, n, |i| {
        if !region.contains(grid.center(i)) {
            return f64::NEG_INFINITY;
        }
        velocity_gradient(pf, dx, i).abs()
    });
    let finite_or_zero = |v: f64| if v.is_finite() { v } else { 0.0 };

    DiagnosticRecord {
        t: 0.0,
        mass: m,
        momentum: p,
        energy: ek + ei,
        kinetic: ek,
        internal: ei,
        inertia: gg,
        virial: ff,
        entropy_mass: s,
        k_max: finite_or_zero(k_max),
        rho_max: finite_or_zero(rho_max),
        dudx_max: finite_or_zero(dudx_max),
        dt: 0.0,
        balance: Balance { energy_loss: de, entropy_loss: ds, ..Balance::default() },
    }
}

/// Central difference of `u` at cell `i`, one-sided at the ends.
pub fn velocity_gradient(pf: &PrimitiveField, dx: f64, i: usize) -> f64 {
    let n = pf.len();
    if n < 2 {
        return 0.0;
    }
    let u = |j: usize| pf.cells[j].u;
    if i == 0 {
        (u(1) - u(0)) / dx
    } else if i == n - 1 {
        (u(n - 1) - u(n - 2)) / dx
    } else {
        (u(i + 1) - u(i - 1)) / (2.0 * dx)
    }
}
