use serde::{Deserialize, Serialize};

use crate::hydro::{DiagnosticRecord, GasParams, Grid1D, PrimitiveField};

/// Outcome of checking `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// `rhs - lhs`.
    pub margin: f64,
    pub tolerance: f64,
    /// Advisory checks are reported but never fail a run.
    pub enforced: bool,
}

impl InequalityReport {
    /// Tolerance `abs + rel * (1 + |lhs| + |rhs|)`.
    pub fn new(name: impl Into<String>, t: f64, lhs: f64, rhs: f64, rel: f64, enforced: bool) -> Self {
        let tolerance = if rel == 0.0 { 0.0 } else { rel * (1.0 + lhs.abs() + rhs.abs()) };
        Self::with_tolerance(name, t, lhs, rhs, tolerance, enforced)
    }

    pub fn with_tolerance(
        name: impl Into<String>,
        t: f64,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        enforced: bool,
    ) -> Self {
        let margin = rhs - lhs;
        InequalityReport {
            name: name.into(),
            t,
            lhs,
            rhs,
            satisfied: margin >= -tolerance,
            margin,
            tolerance,
            enforced,
        }
    }

    pub fn violated(&self) -> bool {
        self.enforced && !self.satisfied
    }
}

pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Cells with pressure at or below this are skipped when taking `max K`.
pub const K_PRESSURE_THRESHOLD: f64 = 1e-10;

/// `K_+ = max K` over cells with non-negligible pressure.
pub fn k_plus(pf: &PrimitiveField, g: &GasParams) -> f64 {
    pf.cells
        .iter()
        .filter(|c| c.p > K_PRESSURE_THRESHOLD)
        .map(|c| c.entropy(g.gamma))
        .fold(0.0, f64::max)
}

pub fn check_inequalities(
    record: &DiagnosticRecord,
    init: &DiagnosticRecord,
    g: &GasParams,
    k_plus: f64,
) -> Vec<InequalityReport> {
    check_inequalities_with(record, init, g, k_plus, DEFAULT_REL_TOL)
}

/// Energy and moment estimates at one record, given the initial record.
///
/// Names: `a_kinetic_floor`, `b_inertia_lower`, `b_inertia_upper`, `c_q_positive`,
/// `d_internal_by_q`, `e_internal_decay`, `f_internal_power_law`.
/// The two-sided inertia bound and the decay law assume `gamma <= 1 + 2/n`;
/// the decay law is enforced only while `F(0) > 0` and `F(t) > 0`.
/// The power law is advisory.
pub fn check_inequalities_with(
    record: &DiagnosticRecord,
    init: &DiagnosticRecord,
    g: &GasParams,
    k_plus: f64,
    rel: f64,
) -> Vec<InequalityReport> {
    let t = record.t - init.t;
    let n = g.dim as f64;
    let gamma = g.gamma;
    let virial_ok = g.in_virial_range();
    let r = record;
    let mut out = Vec::with_capacity(7);

    let floor = if r.mass > 0.0 { r.momentum * r.momentum / (2.0 * r.mass) } else { 0.0 };
    out.push(InequalityReport::new("a_kinetic_floor", r.t, floor, r.kinetic, rel, true));

    let p0_floor = init.momentum * init.momentum / (2.0 * init.mass);
    let lower = p0_floor * t * t + init.virial * t + init.inertia;
    let upper = init.energy * t * t + init.virial * t + init.inertia;
    out.push(InequalityReport::new("b_inertia_lower", r.t, lower, r.inertia, rel, virial_ok));
    out.push(InequalityReport::new("b_inertia_upper", r.t, r.inertia, upper, rel, virial_ok));

    let q = 4.0 * r.inertia * r.energy - r.virial * r.virial;
    out.push(InequalityReport::new("c_q_positive", r.t, 0.0, q, rel, true));
    let q_bound = if r.inertia > 0.0 { q / (4.0 * r.inertia) } else { f64::INFINITY };
    out.push(InequalityReport::new("d_internal_by_q", r.t, r.internal, q_bound, rel, true));

    let q0 = 4.0 * init.inertia * init.energy - init.virial * init.virial;
    let expo = n * (gamma - 1.0) / 2.0;
    let c2 = q0 * init.inertia.powf(expo - 1.0) / 4.0;
    let decay = c2 / r.inertia.powf(expo);
    let expanding = init.virial > 0.0 && r.virial > 0.0;
    out.push(InequalityReport::new(
        "e_internal_decay",
        r.t,
        r.internal,
        decay,
        rel,
        virial_ok && expanding,
    ));

    out.push(InequalityReport::new(
        "f_internal_power_law",
        r.t,
        r.internal,
        power_law_bound(t, init, g, k_plus),
        rel,
        false,
    ));
    out
}

/// `(c1 t + c2)^(-2 (gamma - 1) / (gamma + 1))` from integrating the dissipation
/// estimate with `E - P^2 / 2M` in place of the internal energy.
fn power_law_bound(t: f64, init: &DiagnosticRecord, g: &GasParams, k_plus: f64) -> f64 {
    let gamma = g.gamma;
    let gm1 = gamma - 1.0;
    let m = (3.0 * gamma - 1.0) / (2.0 * gm1);
    let mass = init.mass;
    let y0 = init.energy - init.momentum * init.momentum / (2.0 * mass);
    if !(k_plus > 0.0) || !(y0 > 0.0) {
        return f64::INFINITY;
    }
    let dissipation = k_plus.powf(-1.0 / gm1) * gm1.powf(m - 1.0) * mass.powf(1.0 - m);
    let c1 = g.lambda * dissipation * (gamma + 1.0) / (2.0 * gm1);
    let c2 = y0.powf(1.0 - m);
    (c1 * t + c2).powf(-2.0 * gm1 / (gamma + 1.0))
}

/// Interpolation constant for `||f||_1 <= C ||f||_gamma^a ||f||_{1,x^2}^b` with `n = 1`.
pub fn interpolation_constant(gamma: f64) -> f64 {
    let n = 1.0;
    let denom = (n + 2.0) * gamma - n;
    let base = 2.0 * gamma / (n * (gamma - 1.0));
    base.powf(n * (gamma - 1.0) / denom) + base.powf(-2.0 * gamma / denom)
}

/// Moment interpolation inequality for `f = K rho` on the grid.
///
/// `f` is taken piecewise constant, so each cell contributes
/// `f (x_c^2 + dx^2 / 12) dx` to the second moment.
pub fn moment_interpolation_check(pf: &PrimitiveField, grid: &Grid1D, g: &GasParams) -> InequalityReport {
    let gamma = g.gamma;
    let dx = grid.dx();
    let (mut l1, mut lg, mut l2x) = (0.0, 0.0, 0.0);
    for (i, c) in pf.cells.iter().enumerate() {
        let f = (c.p * c.rho.powf(1.0 - gamma)).abs();
        let x = grid.center(i);
        l1 += f;
        lg += f.powf(gamma);
        l2x += f * (x * x + dx * dx / 12.0);
    }
    let (l1, lg, l2x) = (l1 * dx, (lg * dx).powf(1.0 / gamma), l2x * dx);
    let denom = 3.0 * gamma - 1.0;
    let rhs = interpolation_constant(gamma)
        * lg.powf(2.0 * gamma / denom)
        * l2x.powf((gamma - 1.0) / denom);
    InequalityReport::new("moment_interpolation", 0.0, l1, rhs, DEFAULT_REL_TOL, true)
}

/// Sufficient condition `P~^2(0) > 8 M~ c2 / k` for breakdown of a perturbed steady state,
/// as `lhs = 8 M~ c2 / k`, `rhs = P~^2`. Informational.
pub fn momentum_hypothesis(tilde0: &DiagnosticRecord, k: f64, c2: f64) -> InequalityReport {
    InequalityReport::with_tolerance(
        "momentum_hypothesis",
        tilde0.t,
        8.0 * tilde0.mass * c2 / k,
        tilde0.momentum * tilde0.momentum,
        0.0,
        false,
    )
}

/// Conservation of mass and momentum against the first record, relative tolerance `rel`.
/// Momentum is measured against `max(|P0|, sqrt(2 M0 E0))`, its natural bound.
pub fn conservation_checks(series: &[DiagnosticRecord], rel: f64) -> Vec<InequalityReport> {
    let Some(first) = series.first() else { return Vec::new() };
    let p_scale = first.momentum.abs().max((2.0 * first.mass * first.energy).sqrt());
    let mut out = Vec::new();
    for r in series {
        out.push(InequalityReport::with_tolerance(
            "mass_conserved",
            r.t,
            (r.mass - first.mass).abs(),
            0.0,
            rel * first.mass.abs(),
            true,
        ));
        out.push(InequalityReport::with_tolerance(
            "momentum_conserved",
            r.t,
            (r.momentum - first.momentum).abs(),
            0.0,
            rel * p_scale,
            true,
        ));
    }
    out
}

/// `E` non-increasing between consecutive records, up to `rel * |E|` rounding.
pub fn energy_monotone(series: &[DiagnosticRecord], rel: f64) -> Vec<InequalityReport> {
    series
        .windows(2)
        .map(|w| {
            InequalityReport::with_tolerance(
                "energy_non_increasing",
                w[1].t,
                w[1].energy,
                w[0].energy,
                rel * w[0].energy.abs(),
                true,
            )
        })
        .collect()
}

/// `max K` and `S` non-increasing between records up to `10 (dx + dt)`
/// (relative to the earlier value).
pub fn entropy_monotone(series: &[DiagnosticRecord], dx: f64) -> Vec<InequalityReport> {
    let mut out = Vec::new();
    for w in series.windows(2) {
        let slack = 10.0 * (dx + w[1].dt);
        out.push(InequalityReport::with_tolerance(
            "kmax_non_increasing",
            w[1].t,
            w[1].k_max,
            w[0].k_max,
            slack * w[0].k_max.abs(),
            true,
        ));
        out.push(InequalityReport::with_tolerance(
            "entropy_non_increasing",
            w[1].t,
            w[1].entropy_mass,
            w[0].entropy_mass,
            slack * w[0].entropy_mass.abs(),
            true,
        ));
    }
    out
}
