//! Domain types and equation-of-state relations.
//!
//! State law is `p = rho * T` with ideal-gas internal energy `p / (gamma - 1)`.
//! Temperature is never stored; it is always derived as `p / rho`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, ExecMode};

/// Physical constants of the granular gas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasParams {
    pub gamma: f64,
    /// Inelastic cooling coefficient. Zero is accepted (elastic limit).
    pub lambda: f64,
    #[serde(default = "default_dim")]
    pub dim: u32,
}

fn default_dim() -> u32 {
    1
}

impl GasParams {
    pub fn new(gamma: f64, lambda: f64, dim: u32) -> Result<Self> {
        let g = GasParams { gamma, lambda, dim };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must satisfy gamma > 1, got {}",
                self.gamma
            )));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and non-negative, got {}",
                self.lambda
            )));
        }
        if self.dim == 0 {
            return Err(Error::InvalidParameter("dim must be >= 1".into()));
        }
        Ok(())
    }

    /// Upper end of the adiabatic-index range assumed by the virial estimates.
    pub fn gamma_max(&self) -> f64 {
        1.0 + 2.0 / self.dim as f64
    }

    pub fn in_virial_range(&self) -> bool {
        self.gamma > 1.0 && self.gamma <= self.gamma_max() * (1.0 + 1e-12)
    }

    pub fn sound_speed(&self, rho: f64, p: f64) -> f64 {
        if p <= 0.0 || rho <= 0.0 {
            0.0
        } else {
            (self.gamma * p / rho).sqrt()
        }
    }
}

/// Uniform 1-D grid of `num_cells` cells on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub num_cells: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, num_cells: usize) -> Result<Self> {
        let g = Grid1D { x_min, x_max, num_cells };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must satisfy x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.num_cells == 0 {
            return Err(Error::InvalidParameter("num_cells must be positive".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.num_cells as f64
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    /// Centre of a cell addressed by a signed index (ghost cells are -1 and `num_cells`).
    #[inline]
    pub fn center_signed(&self, i: isize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    /// Position of the interface to the left of cell `i` (`0..=num_cells`).
    #[inline]
    pub fn face(&self, i: usize) -> f64 {
        if i == self.num_cells {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.num_cells).map(|i| self.center(i)).collect()
    }

    pub fn len(&self) -> f64 {
        self.x_max - self.x_min
    }
}

/// Density and pressure floors. Every activation is counted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Floors {
    #[serde(default = "default_rho_floor")]
    pub rho_floor: f64,
    #[serde(default)]
    pub p_floor: f64,
}

fn default_rho_floor() -> f64 {
    1e-12
}

impl Default for Floors {
    fn default() -> Self {
        Floors { rho_floor: default_rho_floor(), p_floor: 0.0 }
    }
}

/// Primitive state of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl Primitive {
    pub const fn new(rho: f64, u: f64, p: f64) -> Self {
        Primitive { rho, u, p }
    }

    pub fn temperature(&self) -> f64 {
        self.p / self.rho
    }

    /// Entropy function `K = p * rho^(-gamma)`.
    pub fn entropy(&self, gamma: f64) -> f64 {
        if self.p == 0.0 {
            0.0
        } else {
            self.p * self.rho.powf(-gamma)
        }
    }

    pub fn to_conserved(&self, gamma: f64) -> Conserved {
        let mom = self.rho * self.u;
        Conserved { rho: self.rho, mom, en: self.p / (gamma - 1.0) + 0.5 * mom * self.u }
    }
}

/// Conserved state of one cell: density, momentum density, total energy density.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Conserved {
    pub rho: f64,
    pub mom: f64,
    pub en: f64,
}

impl Conserved {
    pub const fn new(rho: f64, mom: f64, en: f64) -> Self {
        Conserved { rho, mom, en }
    }

    /// Converts to primitives, returning how many floors were activated (0, 1 or 2).
    pub fn to_primitive(&self, gamma: f64, floors: &Floors) -> (Primitive, u32) {
        let mut events = 0;
        let rho = if self.rho < floors.rho_floor {
            events += 1;
            floors.rho_floor
        } else {
            self.rho
        };
        let u = self.mom / rho;
        let raw = (gamma - 1.0) * (self.en - 0.5 * self.mom * u);
        let p = if raw < floors.p_floor || raw.is_nan() {
            events += 1;
            floors.p_floor
        } else {
            raw
        };
        (Primitive { rho, u, p }, events)
    }

    pub fn internal_energy(&self) -> f64 {
        self.en - 0.5 * self.mom * self.mom / self.rho
    }
}

/// Cell-averaged primitive field.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PrimitiveField {
    pub cells: Vec<Primitive>,
}

/// Cell-averaged conserved field; the solver's internal state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConservedField {
    pub cells: Vec<Conserved>,
}

impl PrimitiveField {
    pub fn new(cells: Vec<Primitive>) -> Self {
        PrimitiveField { cells }
    }

    pub fn uniform(n: usize, state: Primitive) -> Self {
        PrimitiveField { cells: vec![state; n] }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Checks `rho >= rho_floor > 0` and `p >= 0` cellwise.
    pub fn validate(&self, floors: &Floors) -> Result<()> {
        for (i, c) in self.cells.iter().enumerate() {
            if !(c.rho.is_finite() && c.u.is_finite() && c.p.is_finite()) {
                return Err(Error::InvalidParameter(format!("non-finite state in cell {i}")));
            }
            if c.rho < floors.rho_floor || c.rho <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "density {} below floor in cell {i}",
                    c.rho
                )));
            }
            if c.p < 0.0 {
                return Err(Error::InvalidParameter(format!("negative pressure in cell {i}")));
            }
        }
        Ok(())
    }

    pub fn temperature(&self) -> Vec<f64> {
        self.cells.iter().map(Primitive::temperature).collect()
    }
}

impl ConservedField {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

pub fn primitive_to_conserved(pf: &PrimitiveField, g: &GasParams) -> ConservedField {
    ConservedField { cells: pf.cells.iter().map(|c| c.to_conserved(g.gamma)).collect() }
}

/// Inverse of [`primitive_to_conserved`]; the second value counts floor activations.
pub fn conserved_to_primitive(
    cf: &ConservedField,
    g: &GasParams,
    floors: &Floors,
) -> (PrimitiveField, usize) {
    conserved_to_primitive_with(cf, g, floors, ExecMode::Sequential)
}

pub fn conserved_to_primitive_with(
    cf: &ConservedField,
    g: &GasParams,
    floors: &Floors,
    mode: ExecMode,
) -> (PrimitiveField, usize) {
    let out = par::map_cells(mode, cf.len(), |i| cf.cells[i].to_primitive(g.gamma, floors));
    let events = out.iter().map(|&(_, e)| e as usize).sum();
    (PrimitiveField { cells: out.into_iter().map(|(p, _)| p).collect() }, events)
}

/// Per-cell entropy function `K = p * rho^(-gamma)`.
pub fn entropy_k(pf: &PrimitiveField, g: &GasParams) -> Vec<f64> {
    pf.cells.iter().map(|c| c.entropy(g.gamma)).collect()
}

/// One time slice of the integral functionals and pointwise extrema.
///
/// The first block of fields is what `diagnostics.csv` carries. The balance
/// block holds the source integrals and the net boundary outflow of each
/// functional; these are needed to close the evolution identities on open
/// or periodic domains and are written to `balance.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub t: f64,
    #[serde(rename = "M")]
    pub mass: f64,
    #[serde(rename = "P")]
    pub momentum: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "Ek")]
    pub kinetic: f64,
    #[serde(rename = "Ei")]
    pub internal: f64,
    /// Momentum of inertia `G = 1/2 int rho x^2`.
    #[serde(rename = "G")]
    pub inertia: f64,
    /// `F = int rho u x`.
    #[serde(rename = "F")]
    pub virial: f64,
    /// `S = int K rho`.
    #[serde(rename = "S")]
    pub entropy_mass: f64,
    #[serde(rename = "Kmax")]
    pub k_max: f64,
    pub rho_max: f64,
    pub dudx_max: f64,
    pub dt: f64,
    #[serde(skip)]
    pub balance: Balance,
}

/// Source integrals and net boundary outflows (value at `x_max` minus value at `x_min`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Balance {
    /// `int rho^(1/2) p^(3/2)`.
    pub energy_loss: f64,
    /// `int K^(3/2) rho^((gamma+3)/2)`.
    pub entropy_loss: f64,
    pub flux_mass: f64,
    pub flux_momentum: f64,
    pub flux_energy: f64,
    pub flux_inertia: f64,
    pub flux_virial: f64,
    pub flux_entropy: f64,
}

impl Balance {
    pub fn with_fluxes(self, fluxes: Balance) -> Balance {
        Balance {
            energy_loss: self.energy_loss,
            entropy_loss: self.entropy_loss,
            ..fluxes
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gas(gamma: f64) -> GasParams {
        GasParams::new(gamma, 1.0, 1).unwrap()
    }

    #[test]
    fn primitive_to_conserved_examples() {
        let g = gas(5.0 / 3.0);
        let c = Primitive::new(1.0, 0.0, 0.0).to_conserved(g.gamma);
        assert_eq!(c, Conserved::new(1.0, 0.0, 0.0));
        let c = Primitive::new(1.0, 2.0, 0.0).to_conserved(g.gamma);
        assert_eq!(c, Conserved::new(1.0, 2.0, 2.0));
        let c = Primitive::new(2.0, 1.0, 1.0).to_conserved(2.0);
        assert_eq!(c, Conserved::new(2.0, 2.0, 2.0));
    }

    #[test]
    fn conserved_to_primitive_examples() {
        let floors = Floors::default();
        let (p, ev) = Conserved::new(2.0, 2.0, 2.0).to_primitive(2.0, &floors);
        assert_eq!(ev, 0);
        assert_eq!(p, Primitive::new(2.0, 1.0, 1.0));

        let cf = ConservedField { cells: vec![Conserved::new(1.0, 0.0, -1e-18)] };
        let (pf, events) = conserved_to_primitive(&cf, &gas(1.4), &floors);
        assert_eq!(events, 1);
        assert_eq!(pf.cells[0].p, floors.p_floor);
    }

    #[test]
    fn density_floor_counts() {
        let floors = Floors::default();
        let (p, ev) = Conserved::new(0.0, 0.0, 0.0).to_primitive(1.4, &floors);
        assert_eq!(ev, 1);
        assert_eq!(p.rho, floors.rho_floor);
        assert_eq!(p.u, 0.0);
    }

    #[test]
    fn entropy_examples() {
        let g = GasParams::new(2.0, 1.0, 1).unwrap();
        let pf = PrimitiveField::new(vec![
            Primitive::new(3.0, 1.0, 0.0),
            Primitive::new(1.0, 0.0, 0.7),
            Primitive::new(2.0, 0.0, 4.0),
        ]);
        let k = entropy_k(&pf, &g);
        assert_eq!(k[0], 0.0);
        assert_eq!(k[1], 0.7);
        assert_relative_eq!(k[2], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn gas_validation() {
        assert!(GasParams::new(0.9, 1.0, 1).is_err());
        assert!(GasParams::new(1.0, 1.0, 1).is_err());
        assert!(GasParams::new(1.4, -1.0, 1).is_err());
        assert!(GasParams::new(1.4, 1.0, 0).is_err());
        let g = GasParams::new(3.0, 1.0, 1).unwrap();
        assert!(g.in_virial_range());
        assert!(!GasParams::new(3.1, 1.0, 1).unwrap().in_virial_range());
        assert!(!GasParams::new(5.0 / 3.0 + 0.01, 1.0, 3).unwrap().in_virial_range());
    }

    #[test]
    fn grid_geometry() {
        let g = Grid1D::new(-1.0, 1.0, 4).unwrap();
        assert_eq!(g.dx(), 0.5);
        assert_eq!(g.centers(), vec![-0.75, -0.25, 0.25, 0.75]);
        assert_eq!(g.face(4), 1.0);
        assert!(Grid1D::new(1.0, 1.0, 4).is_err());
        assert!(Grid1D::new(0.0, 1.0, 0).is_err());
    }
}
