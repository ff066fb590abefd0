use serde::{Deserialize, Serialize};

use crate::diagnostics::inequalities::InequalityReport;
use crate::error::{Error, Result};
use crate::hydro::{DiagnosticRecord, GasParams};

/// Worst relative mismatch of one evolution identity along a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    /// `max_i |lhs_i - rhs_i|` over the largest magnitude of the left side or
    /// any single right-hand term along the series.
    pub residual: f64,
    pub t_worst: f64,
    pub lhs_worst: f64,
    pub rhs_worst: f64,
    /// Largest magnitude of the left side or any right-hand term; zero when all vanish.
    pub scale: f64,
    pub samples: usize,
}

impl IdentityReport {
    /// Pass/fail view with `residual <= tolerance`.
    pub fn judge(&self, tolerance: f64) -> InequalityReport {
        InequalityReport::new(
            format!("identity_{}", self.name),
            self.t_worst,
            self.residual,
            tolerance,
            0.0,
            true,
        )
    }
}

/// Checks the time derivatives of `G`, `F`, `E` and `S` against their
/// right-hand sides by central differences at the interior records:
///
/// ```text
/// G' = F                          - outflow of rho x^2 / 2
/// F' = 2 Ek + n (gamma - 1) Ei    - outflow of (rho u^2 + p) x
/// E' = -lambda / (gamma - 1) int rho^(1/2) p^(3/2)       - outflow of energy
/// S' = -lambda int K^(3/2) rho^((gamma + 3) / 2)          - outflow of K rho u
/// ```
///
/// The outflow terms vanish for isolated solutions and are read from the
/// records' [`crate::hydro::Balance`].
pub fn check_identities(series: &[DiagnosticRecord], g: &GasParams) -> Result<Vec<IdentityReport>> {
    if series.len() < 3 {
        return Err(Error::InsufficientSeries { needed: 3, got: series.len() });
    }
    let h = series[1].t - series[0].t;
    let span = series[series.len() - 1].t - series[0].t;
    for w in series.windows(2) {
        let d = w[1].t - w[0].t;
        if !(h > 0.0) || (d - h).abs() > 1e-9 * span.max(h) {
            return Err(Error::NonUniformSeries { expected: h, found: d, t: w[1].t });
        }
    }
    let n = g.dim as f64;
    let gm1 = g.gamma - 1.0;
    let lam = g.lambda;
    // each right-hand side as its list of terms
    type Terms = fn(&DiagnosticRecord, f64, f64, f64) -> [f64; 3];
    type Row = (&'static str, fn(&DiagnosticRecord) -> f64, Terms);
    let table: [Row; 4] = [
        ("inertia", |r| r.inertia, |r, _, _, _| [r.virial, -r.balance.flux_inertia, 0.0]),
        (
            "virial",
            |r| r.virial,
            |r, n, gm1, _| [2.0 * r.kinetic, n * gm1 * r.internal, -r.balance.flux_virial],
        ),
        (
            "energy",
            |r| r.energy,
            |r, _, gm1, lam| [-lam / gm1 * r.balance.energy_loss, -r.balance.flux_energy, 0.0],
        ),
        (
            "entropy",
            |r| r.entropy_mass,
            |r, _, _, lam| [-lam * r.balance.entropy_loss, -r.balance.flux_entropy, 0.0],
        ),
    ];
    let mut out = Vec::with_capacity(4);
    for (name, value, terms) in table {
        let mut worst = (0.0f64, series[1].t, 0.0, 0.0);
        let mut scale = 0.0f64;
        for i in 1..series.len() - 1 {
            let l = (value(&series[i + 1]) - value(&series[i - 1])) / (2.0 * h);
            let parts = terms(&series[i], n, gm1, lam);
            let r: f64 = parts.iter().sum();
            scale = parts.iter().fold(scale.max(l.abs()), |m, p| m.max(p.abs()));
            let gap = (l - r).abs();
            if gap > worst.0 || !gap.is_finite() {
                worst = (gap, series[i].t, l, r);
            }
        }
        let residual = if scale > 0.0 { worst.0 / scale } else { worst.0 };
        out.push(IdentityReport {
            name: name.to_string(),
            residual,
            t_worst: worst.1,
            lhs_worst: worst.2,
            rhs_worst: worst.3,
            scale,
            samples: series.len() - 2,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GasParams {
        GasParams::new(5.0 / 3.0, 1.0, 1).unwrap()
    }

    #[test]
    fn needs_three_uniform_records() {
        let g = gas();
        let r = |t| DiagnosticRecord { t, ..Default::default() };
        assert!(matches!(
            check_identities(&[r(0.0), r(1.0)], &g),
            Err(Error::InsufficientSeries { needed: 3, got: 2 })
        ));
        assert!(matches!(
            check_identities(&[r(0.0), r(1.0), r(3.0)], &g),
            Err(Error::NonUniformSeries { .. })
        ));
    }

    #[test]
    fn static_vacuum_is_exact() {
        let g = gas();
        let s: Vec<_> =
            (0..5).map(|i| DiagnosticRecord { t: i as f64, mass: 2.0, inertia: 1.0 / 3.0, ..Default::default() }).collect();
        for rep in check_identities(&s, &g).unwrap() {
            assert_eq!(rep.residual, 0.0);
            assert_eq!(rep.scale, 0.0);
        }
    }

    #[test]
    fn ballistic_cloud_converges_quadratically() {
        // free-streaming moments plus a cubic term in G, with F = G' exactly
        let g = GasParams::new(5.0 / 3.0, 0.0, 1).unwrap();
        let series = |n: usize| -> Vec<DiagnosticRecord> {
            (0..=n)
                .map(|i| {
                    let t = 1.0 + i as f64 / n as f64;
                    let ek = 0.7;
                    DiagnosticRecord {
                        t,
                        kinetic: ek,
                        energy: ek,
                        inertia: 0.5 + 0.3 * t + ek * t * t + 0.01 * t.powi(3),
                        virial: 0.3 + 2.0 * ek * t + 0.03 * t * t,
                        ..Default::default()
                    }
                })
                .collect()
        };
        let r1 = check_identities(&series(10), &g).unwrap()[0].residual;
        let r2 = check_identities(&series(20), &g).unwrap()[0].residual;
        assert!(r1 > 0.0);
        let ratio = r1 / r2;
        assert!((ratio - 4.0).abs() < 0.5, "{ratio}");
    }
}
