//! JSON scenario files.
//!
//! A minimal homogeneous scenario:
//!
//! ```json
//! {
//!   "gas": {"gamma": 1.6666666666666667, "lambda": 1.0},
//!   "grid": {"x_min": -1.0, "x_max": 1.0, "num_cells": 100},
//!   "initial": {"kind": "homogeneous", "rho0": 1.0, "T0": 1.0},
//!   "boundary": "periodic",
//!   "time": {"t_end": 10.0}
//! }
//! ```
//!
//! Defaults: `cfl_number = 0.45`, `dt_floor = 1e-12`, `record_interval = t_end / 100`,
//! floors as in [`Floors`], blow-up caps `1e6 * max rho(0)` and `1e6 / dx`,
//! support threshold `1e-3`, inequality tolerance `1e-9`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::AnalysisSetup;
use crate::error::{Error, Result};
use crate::exact::profile::SteadyParams;
use crate::hydro::{Floors, GasParams, Grid1D};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub gas: GasParams,
    pub grid: Grid1D,
    pub initial: InitialCondition,
    pub boundary: Boundary,
    pub time: TimeControl,
    #[serde(default)]
    pub output: OutputControl,
    #[serde(default)]
    pub floors: Floors,
    #[serde(default)]
    pub blowup: BlowupControl,
    #[serde(default)]
    pub diagnostics: DiagnosticsControl,
    /// Accept `gamma > 1 + 2/dim` with a warning instead of an error.
    #[serde(default)]
    pub allow_gamma_outside_range: bool,
    /// Directory that relative table paths are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    Homogeneous {
        rho0: f64,
        #[serde(default)]
        u0: f64,
        #[serde(rename = "T0")]
        t0: f64,
    },
    /// Stationary profile with mass flux `k` plus a compact bump.
    SteadyPerturbed {
        k: f64,
        c2: f64,
        x_plus: f64,
        /// Profile value at `|x| = x_plus`; the sonic value when absent.
        #[serde(default)]
        z_anchor: Option<f64>,
        bump: Bump,
    },
    Automodel {
        c1: f64,
        c2: f64,
        a: f64,
        x_anchor: f64,
        #[serde(default)]
        z_anchor: Option<f64>,
    },
    /// CSV with header `x,rho,u,p` (an extra `K` column is ignored), one row per cell.
    Table { path: PathBuf },
}

/// Perturbation `amp * (1 - ((x - center) / radius)^2)^2` on `|x - center| < radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    #[serde(default)]
    pub center: f64,
    pub radius: f64,
    #[serde(default)]
    pub rho_amp: f64,
    #[serde(default)]
    pub u_amp: f64,
    #[serde(default)]
    pub p_amp: f64,
}

impl Bump {
    pub fn shape(&self, x: f64) -> f64 {
        let s = (x - self.center) / self.radius;
        if s.abs() >= 1.0 {
            0.0
        } else {
            let w = 1.0 - s * s;
            w * w
        }
    }

    /// Radius of the smallest origin-centred interval holding the support.
    pub fn reach(&self) -> f64 {
        self.center.abs() + self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Outflow,
    /// Ghost cells take the exact background state (steady or travelling profile).
    ExactBackground,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeControl {
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl_number: f64,
    #[serde(default = "default_dt_floor")]
    pub dt_floor: f64,
}

fn default_cfl() -> f64 {
    0.45
}

fn default_dt_floor() -> f64 {
    1e-12
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputControl {
    #[serde(default)]
    pub record_interval: Option<f64>,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default)]
    pub directory: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupControl {
    /// Absolute density cap; `1e6 * max rho(0)` when absent.
    #[serde(default)]
    pub density_cap: Option<f64>,
    /// Absolute cap on `max |du/dx|`; `1e6 / dx` when absent.
    #[serde(default)]
    pub gradient_cap: Option<f64>,
    /// Whether a detected blow-up is the intended outcome.
    #[serde(default)]
    pub expected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsControl {
    #[serde(default = "default_support_epsilon")]
    pub support_epsilon: f64,
    /// Pass threshold for the relative identity residuals; identities are
    /// reported but not judged when absent.
    #[serde(default)]
    pub identity_tolerance: Option<f64>,
    /// Relative part of the inequality tolerance `rel * (1 + |lhs| + |rhs|)`.
    #[serde(default = "default_inequality_rel_tol")]
    pub inequality_rel_tol: f64,
    /// Positive lower bound expected of `S(t)` in momentum-carrying runs.
    #[serde(default)]
    pub entropy_floor: Option<f64>,
}

fn default_support_epsilon() -> f64 {
    1e-3
}

fn default_inequality_rel_tol() -> f64 {
    1e-9
}

impl Default for DiagnosticsControl {
    fn default() -> Self {
        DiagnosticsControl {
            support_epsilon: default_support_epsilon(),
            identity_tolerance: None,
            inequality_rel_tol: default_inequality_rel_tol(),
            entropy_floor: None,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let sc: Scenario = serde_json::from_str(text)?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn record_interval(&self) -> f64 {
        self.output.record_interval.unwrap_or(self.time.t_end / 100.0)
    }

    /// Analysis settings for this scenario given `max K` of its initial field.
    pub fn analysis_setup(&self, k_plus: f64) -> AnalysisSetup {
        let steady = match self.initial {
            InitialCondition::SteadyPerturbed { k, c2, .. } => Some((k, c2)),
            _ => None,
        };
        AnalysisSetup {
            gas: self.gas,
            dx: self.grid.dx(),
            periodic: self.boundary == Boundary::Periodic,
            k_plus,
            inequality_rel_tol: self.diagnostics.inequality_rel_tol,
            identity_tolerance: self.diagnostics.identity_tolerance,
            entropy_floor: self.diagnostics.entropy_floor,
            steady,
        }
    }

    /// Profile constants of the background, if the initial condition has one.
    pub fn background_params(&self) -> Result<Option<SteadyParams>> {
        let g = &self.gas;
        Ok(match self.initial {
            InitialCondition::SteadyPerturbed { k, c2, x_plus, z_anchor, .. } => {
                Some(SteadyParams::steady(k, c2, x_plus, z_anchor, g)?)
            }
            InitialCondition::Automodel { c1, c2, a, x_anchor, z_anchor } => {
                Some(SteadyParams::anchored(c1, c2, a, x_anchor, z_anchor, g)?)
            }
            _ => None,
        })
    }

    pub fn table_path(&self) -> Option<PathBuf> {
        match &self.initial {
            InitialCondition::Table { path } => Some(match &self.base_dir {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path.clone(),
            }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.gas;
        g.validate()?;
        if g.dim != 1 {
            return Err(invalid(format!("the solver is planar and needs dim = 1, got {}", g.dim)));
        }
        if !g.in_virial_range() {
            let msg = format!(
                "gamma = {} lies outside (1, {}] assumed by the virial estimates",
                g.gamma,
                g.gamma_max()
            );
            if self.allow_gamma_outside_range {
                log::warn!("{msg}");
            } else {
                return Err(invalid(format!("{msg}; set allow_gamma_outside_range to override")));
            }
        }
        self.grid.validate()?;
        let t = &self.time;
        if !(t.t_end.is_finite() && t.t_end > 0.0) {
            return Err(invalid(format!("t_end must be > 0, got {}", t.t_end)));
        }
        if !(t.cfl_number > 0.0 && t.cfl_number < 1.0) {
            return Err(invalid(format!("cfl_number must lie in (0, 1), got {}", t.cfl_number)));
        }
        if !(t.dt_floor > 0.0) {
            return Err(invalid(format!("dt_floor must be > 0, got {}", t.dt_floor)));
        }
        let h = self.record_interval();
        if !(h.is_finite() && h > 0.0) {
            return Err(invalid(format!("record_interval must be > 0, got {h}")));
        }
        if let Some(&bad) =
            self.output.snapshot_times.iter().find(|&&s| !(s >= 0.0 && s <= t.t_end))
        {
            return Err(invalid(format!("snapshot time {bad} outside [0, t_end]")));
        }
        let f = &self.floors;
        if !(f.rho_floor > 0.0) || !(f.p_floor >= 0.0) {
            return Err(invalid("floors need rho_floor > 0 and p_floor >= 0"));
        }
        for (name, cap) in
            [("density_cap", self.blowup.density_cap), ("gradient_cap", self.blowup.gradient_cap)]
        {
            if let Some(c) = cap {
                if !(c > 0.0) {
                    return Err(invalid(format!("{name} must be > 0, got {c}")));
                }
            }
        }
        let d = &self.diagnostics;
        if !(d.support_epsilon > 0.0) || !(d.inequality_rel_tol >= 0.0) {
            return Err(invalid("support_epsilon must be > 0 and inequality_rel_tol >= 0"));
        }
        self.validate_initial()?;
        if self.boundary == Boundary::ExactBackground && self.background_params()?.is_none() {
            return Err(invalid(
                "exact_background boundaries need a steady_perturbed or automodel initial condition",
            ));
        }
        Ok(())
    }

    fn validate_initial(&self) -> Result<()> {
        match &self.initial {
            InitialCondition::Homogeneous { rho0, u0, t0 } => {
                if !(*rho0 > 0.0) || !(*t0 >= 0.0) || !u0.is_finite() {
                    return Err(invalid("homogeneous state needs rho0 > 0, T0 >= 0 and finite u0"));
                }
            }
            InitialCondition::SteadyPerturbed { k, c2, x_plus, bump, .. } => {
                if !(*k > 0.0) {
                    return Err(invalid(format!("mass flux k must be > 0, got {k}")));
                }
                if !(*c2 > 0.0) {
                    return Err(invalid(format!(
                        "positivity of rho*p requires c2 - a*c1 > 0, got {c2} with a = 0"
                    )));
                }
                if !(*x_plus >= 0.0) {
                    return Err(invalid(format!("x_plus must be >= 0, got {x_plus}")));
                }
                if !(bump.radius > 0.0) {
                    return Err(invalid(format!("bump radius must be > 0, got {}", bump.radius)));
                }
                let lo = bump.center - bump.radius;
                let hi = bump.center + bump.radius;
                if !(lo > self.grid.x_min && hi < self.grid.x_max) {
                    return Err(invalid(format!(
                        "bump support [{lo}, {hi}] must lie strictly inside [{}, {}]",
                        self.grid.x_min, self.grid.x_max
                    )));
                }
                self.background_params()?;
            }
            InitialCondition::Automodel { c1, c2, a, .. } => {
                if !(c2 - a * c1 > 0.0) {
                    return Err(invalid(format!(
                        "positivity of rho*p requires c2 - a*c1 > 0, got {}",
                        c2 - a * c1
                    )));
                }
                let sp = self.background_params()?.expect("automodel has a profile");
                // ghost centres at both ends of the run must stay on the branch
                let dx = self.grid.dx();
                let lowest = (self.grid.x_min - dx / 2.0) - sp.a.max(0.0) * self.time.t_end;
                let lowest = lowest.min(self.grid.x_min - dx / 2.0);
                if lowest < sp.x_plus {
                    return Err(invalid(format!(
                        "travelling profile leaves its branch: xi reaches {lowest} < {}",
                        sp.x_plus
                    )));
                }
            }
            InitialCondition::Table { path } => {
                if path.as_os_str().is_empty() {
                    return Err(invalid("table path is empty"));
                }
            }
        }
        Ok(())
    }
}

/// Reads and validates a scenario file. Relative table paths resolve against its directory.
pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut sc: Scenario = serde_json::from_str(&text)
        .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
    sc.base_dir = path.parent().map(Path::to_path_buf);
    sc.validate()?;
    Ok(sc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "gas": {"gamma": 1.6666666666666667, "lambda": 1.0},
        "grid": {"x_min": -1.0, "x_max": 1.0, "num_cells": 100},
        "initial": {"kind": "homogeneous", "rho0": 1.0, "T0": 1.0},
        "boundary": "periodic",
        "time": {"t_end": 10.0}
    }"#;

    #[test]
    fn defaults_filled() {
        let sc = Scenario::from_json(MINIMAL).unwrap();
        assert_eq!(sc.time.cfl_number, 0.45);
        assert_eq!(sc.time.dt_floor, 1e-12);
        assert_eq!(sc.floors, Floors::default());
        assert_eq!(sc.record_interval(), 0.1);
        assert_eq!(sc.gas.dim, 1);
        assert!(!sc.blowup.expected);
    }

    #[test]
    fn gamma_below_one_rejected() {
        let text = MINIMAL.replace("1.6666666666666667", "0.9");
        assert!(matches!(Scenario::from_json(&text), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn gamma_above_range_needs_override() {
        let text = MINIMAL.replace("1.6666666666666667", "4.0");
        assert!(Scenario::from_json(&text).is_err());
        let text = text.replace("\"boundary\"", "\"allow_gamma_outside_range\": true, \"boundary\"");
        assert!(Scenario::from_json(&text).is_ok());
    }

    #[test]
    fn positivity_constraint_cited() {
        let text = r#"{
            "gas": {"gamma": 1.6666666666666667, "lambda": 1.0},
            "grid": {"x_min": 1.0, "x_max": 6.0, "num_cells": 100},
            "initial": {"kind": "automodel", "c1": 1.0, "c2": 1.0, "a": 2.0, "x_anchor": 0.0},
            "boundary": "exact_background",
            "time": {"t_end": 1.0}
        }"#;
        let err = Scenario::from_json(text).unwrap_err().to_string();
        assert!(err.contains("c2 - a*c1 > 0"), "{err}");
    }

    #[test]
    fn bump_must_be_inside() {
        let text = r#"{
            "gas": {"gamma": 1.6666666666666667, "lambda": 1.0},
            "grid": {"x_min": -2.0, "x_max": 2.0, "num_cells": 100},
            "initial": {"kind": "steady_perturbed", "k": 1.0, "c2": 1.0, "x_plus": 0.5,
                        "bump": {"radius": 2.0, "u_amp": 1.0}},
            "boundary": "exact_background",
            "time": {"t_end": 1.0}
        }"#;
        assert!(Scenario::from_json(text).is_err());
    }

    #[test]
    fn unknown_field_is_an_error_with_position() {
        let text = MINIMAL.replace("\"boundary\"", "\"bondary\": 1, \"boundary\"");
        let err = Scenario::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn exact_background_needs_profile() {
        let text = MINIMAL.replace("\"periodic\"", "\"exact_background\"");
        assert!(Scenario::from_json(&text).is_err());
    }

    #[test]
    fn bump_shape_is_c1() {
        let b = Bump { center: 0.5, radius: 2.0, rho_amp: 0.0, u_amp: 1.0, p_amp: 0.0 };
        assert_eq!(b.shape(0.5), 1.0);
        assert_eq!(b.shape(2.5), 0.0);
        let h = 1e-6;
        let slope = (b.shape(2.5 - h) - b.shape(2.5 - 2.0 * h)) / h;
        assert!(slope.abs() < 1e-5);
        assert_eq!(b.reach(), 2.5);
    }
}
