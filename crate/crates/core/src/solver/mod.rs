//! Planar finite-volume integrator.
//!
//! Each step is Strang split: half a step of exact cooling, a first-order
//! Godunov update with the Rusanov flux, and another half step of cooling.
//! One ghost cell per side supplies the boundary condition.

pub mod flux;
pub mod scenario;

use crate::blowup::{BlowupReport, BlowupTrigger};
use crate::diagnostics::{self, Region};
use crate::error::{Error, Result};
use crate::exact::haff::cooled_pressure;
use crate::exact::profile::{automodel_eval, profile_z_of_xi, SteadyParams};
use crate::hydro::{
    Balance, Conserved, ConservedField, DiagnosticRecord, GasParams, Grid1D, Primitive,
    PrimitiveField,
};
use crate::par::{self, ExecMode};

pub use flux::{numerical_flux, physical_flux, wave_speed};
pub use scenario::{
    parse_scenario, BlowupControl, Boundary, Bump, DiagnosticsControl, InitialCondition,
    OutputControl, Scenario, TimeControl,
};

/// Exact cooling of the pressure over `dt` with density and velocity frozen.
pub fn cooling_substep(pf: &PrimitiveField, dt: f64, g: &GasParams) -> PrimitiveField {
    PrimitiveField::new(
        pf.cells
            .iter()
            .map(|w| Primitive { p: cooled_pressure(w.rho, w.p, dt, g.lambda), ..*w })
            .collect(),
    )
}

/// Unperturbed state the initial data and exact boundaries are built from.
#[derive(Debug, Clone, PartialEq)]
pub enum Background {
    /// Stationary profile, reflected for `x < 0`. Inside `|x| <= x_plus` the
    /// density and pressure are held at their `x_plus` values and the velocity
    /// is linear, which keeps the state continuous.
    Steady { sp: SteadyParams, edge: Primitive },
    Travelling { sp: SteadyParams },
}

impl Background {
    pub fn steady(sp: SteadyParams, z_anchor: Option<f64>, g: &GasParams) -> Result<Self> {
        let z = match z_anchor {
            Some(z) => z,
            None => profile_z_of_xi(sp.x_plus, &sp, g, sp.z_star(g))?,
        };
        Ok(Background::Steady { sp, edge: sp.state_from_z(z) })
    }

    pub fn params(&self) -> &SteadyParams {
        match self {
            Background::Steady { sp, .. } | Background::Travelling { sp } => sp,
        }
    }

    pub fn eval(&self, x: f64, t: f64, g: &GasParams) -> Result<Primitive> {
        match self {
            Background::Steady { sp, edge } => {
                if x.abs() <= sp.x_plus {
                    let u = if sp.x_plus > 0.0 { edge.u * x / sp.x_plus } else { 0.0 };
                    return Ok(Primitive { u, ..*edge });
                }
                let z = profile_z_of_xi(x.abs(), sp, g, sp.z_star(g))?;
                let mut s = sp.state_from_z(z);
                if x < 0.0 {
                    s.u = -s.u;
                }
                Ok(s)
            }
            Background::Travelling { sp } => automodel_eval(x, t, sp, g),
        }
    }

    pub fn field(&self, grid: &Grid1D, t: f64, g: &GasParams, mode: ExecMode) -> Result<PrimitiveField> {
        let cells = par::map_cells(mode, grid.num_cells, |i| self.eval(grid.center(i), t, g));
        Ok(PrimitiveField::new(cells.into_iter().collect::<Result<Vec<_>>>()?))
    }

    pub fn is_stationary(&self) -> bool {
        matches!(self, Background::Steady { .. })
    }
}

/// Boundary state of a running simulation.
#[derive(Debug, Clone)]
enum Ghosts {
    Periodic,
    Outflow,
    Exact,
}

/// Per-step bookkeeping returned by [`Solver::step`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepInfo {
    pub flooring_events: u64,
}

/// Mutable simulation state for one scenario.
#[derive(Debug, Clone)]
pub struct Solver {
    pub gas: GasParams,
    pub grid: Grid1D,
    pub floors: crate::hydro::Floors,
    pub cfl: f64,
    pub background: Option<Background>,
    pub mode: ExecMode,
    ghosts: Ghosts,
    /// Ghost states of a stationary exact background, computed once.
    fixed_ghosts: Option<(Primitive, Primitive)>,
    pub state: ConservedField,
    pub t: f64,
}

impl Solver {
    pub fn new(sc: &Scenario, mode: ExecMode) -> Result<Self> {
        sc.validate()?;
        let g = sc.gas;
        let grid = sc.grid;
        let background = match sc.initial {
            InitialCondition::SteadyPerturbed { z_anchor, .. } => {
                let sp = sc.background_params()?.expect("steady profile");
                Some(Background::steady(sp, z_anchor, &g)?)
            }
            InitialCondition::Automodel { .. } => {
                Some(Background::Travelling { sp: sc.background_params()?.expect("profile") })
            }
            _ => None,
        };
        let initial = initial_field(sc, background.as_ref(), mode)?;
        initial.validate(&sc.floors)?;
        let ghosts = match sc.boundary {
            Boundary::Periodic => Ghosts::Periodic,
            Boundary::Outflow => Ghosts::Outflow,
            Boundary::ExactBackground => Ghosts::Exact,
        };
        let fixed_ghosts = match (&ghosts, &background) {
            (Ghosts::Exact, Some(bg)) if bg.is_stationary() => {
                let dx = grid.dx();
                Some((
                    bg.eval(grid.x_min - dx / 2.0, 0.0, &g)?,
                    bg.eval(grid.x_max + dx / 2.0, 0.0, &g)?,
                ))
            }
            _ => None,
        };
        Ok(Solver {
            gas: g,
            grid,
            floors: sc.floors,
            cfl: sc.time.cfl_number,
            background,
            mode,
            ghosts,
            fixed_ghosts,
            state: crate::hydro::primitive_to_conserved(&initial, &g),
            t: 0.0,
        })
    }

    /// Current primitives and the number of floor activations in the conversion.
    pub fn primitives(&self) -> (PrimitiveField, u64) {
        let (pf, events) =
            crate::hydro::conserved_to_primitive_with(&self.state, &self.gas, &self.floors, self.mode);
        (pf, events as u64)
    }

    fn ghost_states(&self, pf: &PrimitiveField, t: f64) -> Result<(Primitive, Primitive)> {
        let n = pf.len();
        Ok(match self.ghosts {
            Ghosts::Periodic => (pf.cells[n - 1], pf.cells[0]),
            Ghosts::Outflow => (pf.cells[0], pf.cells[n - 1]),
            Ghosts::Exact => match self.fixed_ghosts {
                Some(pair) => pair,
                None => {
                    let bg = self.background.as_ref().expect("exact boundaries have a background");
                    let dx = self.grid.dx();
                    (
                        bg.eval(self.grid.x_min - dx / 2.0, t, &self.gas)?,
                        bg.eval(self.grid.x_max + dx / 2.0, t, &self.gas)?,
                    )
                }
            },
        })
    }

    /// Largest stable step `cfl * dx / max(|u| + c)`; infinite for a motionless cold state.
    pub fn cfl_dt(&self, pf: &PrimitiveField) -> f64 {
        let g = &self.gas;
        let smax = par::max_over(self.mode, pf.len(), |i| wave_speed(&pf.cells[i], g));
        if smax > 0.0 {
            self.cfl * self.grid.dx() / smax
        } else if smax == 0.0 {
            f64::INFINITY
        } else {
            f64::NAN
        }
    }

    fn cool(&mut self, dt: f64) {
        let g = self.gas;
        if g.lambda == 0.0 || dt == 0.0 {
            return;
        }
        let floors = self.floors;
        let cells = &self.state.cells;
        let cooled = par::map_cells(self.mode, cells.len(), |i| {
            let c = cells[i];
            let (w, _) = c.to_primitive(g.gamma, &floors);
            let p_new = cooled_pressure(w.rho, w.p, dt, g.lambda);
            Conserved { en: c.en - (w.p - p_new) / (g.gamma - 1.0), ..c }
        });
        self.state.cells = cooled;
    }

    /// Advances the state by `dt`.
    pub fn step(&mut self, dt: f64) -> Result<StepInfo> {
        if !(dt >= 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be >= 0, got {dt}")));
        }
        if dt == 0.0 {
            return Ok(StepInfo::default());
        }
        self.cool(0.5 * dt);
        let (pf, events) = self.primitives();
        let (gl, gr) = self.ghost_states(&pf, self.t + 0.5 * dt)?;
        let n = pf.len();
        let g = self.gas;
        let cell = |j: usize| -> &Primitive {
            if j == 0 {
                &gl
            } else if j == n + 1 {
                &gr
            } else {
                &pf.cells[j - 1]
            }
        };
        let faces = par::map_cells(self.mode, n + 1, |j| numerical_flux(cell(j), cell(j + 1), &g));
        let r = dt / self.grid.dx();
        let cells = &self.state.cells;
        let updated = par::map_cells(self.mode, n, |i| {
            let (fl, fr) = (faces[i], faces[i + 1]);
            let c = cells[i];
            Conserved {
                rho: c.rho - r * (fr.rho - fl.rho),
                mom: c.mom - r * (fr.mom - fl.mom),
                en: c.en - r * (fr.en - fl.en),
            }
        });
        self.state.cells = updated;
        self.cool(0.5 * dt);
        self.t += dt;
        Ok(StepInfo { flooring_events: events })
    }

    /// Net boundary outflow rates of the conserved and moment functionals at the current state.
    pub fn boundary_rates(&self, pf: &PrimitiveField) -> Result<Balance> {
        let (gl, gr) = self.ghost_states(pf, self.t)?;
        let g = &self.gas;
        let n = pf.len();
        let first = pf.cells[0];
        let last = pf.cells[n - 1];
        let fl = numerical_flux(&gl, &first, g);
        let fr = numerical_flux(&last, &gr, g);
        let x0 = self.grid.x_min;
        let x1 = self.grid.x_max;
        let upwind_k = |f: &Conserved, l: &Primitive, r: &Primitive| {
            let w = if f.rho >= 0.0 { l } else { r };
            f.rho * w.entropy(g.gamma)
        };
        Ok(Balance {
            flux_mass: fr.rho - fl.rho,
            flux_momentum: fr.mom - fl.mom,
            flux_energy: fr.en - fl.en,
            flux_inertia: 0.5 * (x1 * x1 * fr.rho - x0 * x0 * fl.rho),
            flux_virial: x1 * fr.mom - x0 * fl.mom,
            flux_entropy: upwind_k(&fr, &last, &gr) - upwind_k(&fl, &gl, &first),
            ..Balance::default()
        })
    }

    /// Full-domain diagnostic record at the current time.
    pub fn record(&self, pf: &PrimitiveField, dt: f64) -> Result<DiagnosticRecord> {
        let mut rec = diagnostics::functionals_with(pf, &self.grid, &self.gas, Region::FullDomain, self.mode);
        rec.t = self.t;
        rec.dt = dt;
        rec.balance = rec.balance.with_fluxes(self.boundary_rates(pf)?);
        Ok(rec)
    }
}

fn initial_field(sc: &Scenario, bg: Option<&Background>, mode: ExecMode) -> Result<PrimitiveField> {
    let grid = &sc.grid;
    let g = &sc.gas;
    match &sc.initial {
        InitialCondition::Homogeneous { rho0, u0, t0 } => {
            Ok(PrimitiveField::uniform(grid.num_cells, Primitive::new(*rho0, *u0, rho0 * t0)))
        }
        InitialCondition::SteadyPerturbed { bump, .. } => {
            let bg = bg.expect("steady background");
            let base = bg.field(grid, 0.0, g, mode)?;
            let cells = base
                .cells
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let phi = bump.shape(grid.center(i));
                    Primitive {
                        rho: w.rho + bump.rho_amp * phi,
                        u: w.u + bump.u_amp * phi,
                        p: w.p + bump.p_amp * phi,
                    }
                })
                .collect();
            Ok(PrimitiveField::new(cells))
        }
        InitialCondition::Automodel { .. } => bg.expect("travelling profile").field(grid, 0.0, g, mode),
        InitialCondition::Table { .. } => {
            let path = sc.table_path().expect("table path");
            let pf = crate::io::read_table(&path)?;
            if pf.len() != grid.num_cells {
                return Err(Error::Scenario(format!(
                    "{} has {} rows but the grid has {} cells",
                    path.display(),
                    pf.len(),
                    grid.num_cells
                )));
            }
            Ok(pf)
        }
    }
}

/// Field at one requested output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub field: PrimitiveField,
}

/// Functionals over the tracked perturbation support at one record time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedRecord {
    pub t: f64,
    /// Half-width of the tracked interval.
    pub radius: f64,
    /// False when no cell exceeded the threshold and the initial support was used.
    pub measured: bool,
    pub record: DiagnosticRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub grid: Grid1D,
    pub gas: GasParams,
    /// Records at uniformly spaced times up to the end or the last record before blow-up.
    pub records: Vec<DiagnosticRecord>,
    /// Tilde functionals over the tracked support (perturbed-steady runs only).
    pub tracked: Vec<TrackedRecord>,
    pub snapshots: Vec<Snapshot>,
    pub blowup: BlowupReport,
    pub initial: PrimitiveField,
    pub final_field: PrimitiveField,
    pub final_time: f64,
    pub flooring_events: u64,
    pub steps: u64,
    pub background: Option<Background>,
}

/// Output times `k * h` for `k = 0, 1, ...` up to `t_end`; `t_end` itself when it is a multiple.
pub fn record_times(t_end: f64, h: f64) -> Vec<f64> {
    let ratio = t_end / h;
    let k_max = (ratio + 1e-9).floor() as usize;
    let mut times: Vec<f64> = (0..=k_max).map(|k| k as f64 * h).collect();
    if (ratio - k_max as f64).abs() <= 1e-9 * ratio.max(1.0) {
        *times.last_mut().expect("k = 0 is always present") = t_end;
    }
    times
}

pub fn run(sc: &Scenario) -> Result<RunOutput> {
    run_with(sc, ExecMode::default())
}

pub fn run_with(sc: &Scenario, mode: ExecMode) -> Result<RunOutput> {
    let mut solver = Solver::new(sc, mode)?;
    let g = solver.gas;
    let grid = solver.grid;
    let dx = grid.dx();
    let t_end = sc.time.t_end;
    let records_at = record_times(t_end, sc.record_interval());
    let mut snaps_at = sc.output.snapshot_times.clone();
    snaps_at.sort_by(f64::total_cmp);
    snaps_at.dedup();
    let mut events: Vec<f64> = records_at.iter().chain(snaps_at.iter()).copied().collect();
    events.push(t_end);
    events.sort_by(f64::total_cmp);
    events.dedup();

    let (initial, mut flooring) = solver.primitives();
    let density_cap = sc.blowup.density_cap.unwrap_or_else(|| {
        1e6 * initial.cells.iter().map(|c| c.rho).fold(f64::NEG_INFINITY, f64::max)
    });
    let gradient_cap = sc.blowup.gradient_cap.unwrap_or(1e6 / dx);

    let tracking = match (&sc.initial, &solver.background) {
        (InitialCondition::SteadyPerturbed { bump, x_plus, .. }, Some(bg)) => {
            let field = bg.field(&grid, 0.0, &g, mode)?;
            Some((field, bump.reach().max(*x_plus)))
        }
        _ => None,
    };
    let epsilon = sc.diagnostics.support_epsilon;

    let mut out = RunOutput {
        grid,
        gas: g,
        records: Vec::with_capacity(records_at.len()),
        tracked: Vec::new(),
        snapshots: Vec::new(),
        blowup: BlowupReport::none(),
        initial: initial.clone(),
        final_field: initial.clone(),
        final_time: 0.0,
        flooring_events: 0,
        steps: 0,
        background: solver.background.clone(),
    };

    let mut next_record = 0usize;
    let mut next_snap = 0usize;
    let mut next_event = 0usize;
    let mut last_dt = 0.0;
    let mut pf = initial;
    loop {
        // emit everything scheduled at the current time
        while next_event < events.len() && events[next_event] <= solver.t {
            next_event += 1;
        }
        if next_record < records_at.len() && records_at[next_record] <= solver.t {
            let rec = solver.record(&pf, last_dt)?;
            if let Some((bg_field, fallback)) = &tracking {
                let (region, measured) =
                    match diagnostics::track_support(&pf, &grid, bg_field, epsilon) {
                        Ok(r) => (r, true),
                        Err(Error::EmptyPerturbation) => (
                            Region::TrackedSupport { epsilon, radius: *fallback },
                            false,
                        ),
                        Err(e) => return Err(e),
                    };
                let mut tilde = diagnostics::functionals_with(&pf, &grid, &g, region, mode);
                tilde.t = solver.t;
                tilde.dt = last_dt;
                out.tracked.push(TrackedRecord {
                    t: solver.t,
                    radius: region.radius().expect("tracked region"),
                    measured,
                    record: tilde,
                });
            }
            out.records.push(rec);
            next_record += 1;
        }
        if next_snap < snaps_at.len() && snaps_at[next_snap] <= solver.t {
            out.snapshots.push(Snapshot { t: solver.t, field: pf.clone() });
            next_snap += 1;
        }
        if next_event >= events.len() {
            break;
        }
        let dt_cfl = solver.cfl_dt(&pf);
        if !(dt_cfl >= sc.time.dt_floor) {
            out.blowup =
                BlowupReport::detected(BlowupTrigger::DtUnderflow, solver.t, solver.t - last_dt, solver.t);
            break;
        }
        let target = events[next_event];
        let t_prev = solver.t;
        let (dt, landing) = if dt_cfl >= target - solver.t {
            (target - solver.t, true)
        } else {
            (dt_cfl, false)
        };
        let info = solver.step(dt)?;
        if landing {
            solver.t = target;
        }
        out.steps += 1;
        flooring += info.flooring_events;
        last_dt = dt;
        let (next_pf, ev) = solver.primitives();
        flooring += ev;
        pf = next_pf;

        let rho_max = par::max_over(mode, pf.len(), |i| pf.cells[i].rho);
        let grad_max =
            par::max_over(mode, pf.len(), |i| diagnostics::velocity_gradient(&pf, dx, i).abs());
        let trigger = if !(rho_max <= density_cap) {
            Some(BlowupTrigger::DensityCap)
        } else if !(grad_max <= gradient_cap) {
            Some(BlowupTrigger::GradientCap)
        } else {
            None
        };
        if let Some(trigger) = trigger {
            out.blowup = BlowupReport::detected(trigger, solver.t, t_prev, solver.t);
            break;
        }
    }
    out.final_field = pf;
    out.final_time = solver.t;
    out.flooring_events = flooring;
    Ok(out)
}

/// L1 distance `sum |rho - rho_ex| + |u - u_ex| + |p - p_ex|` times `dx`.
pub fn l1_error(pf: &PrimitiveField, exact: &PrimitiveField, grid: &Grid1D) -> f64 {
    pf.cells
        .iter()
        .zip(&exact.cells)
        .map(|(a, b)| (a.rho - b.rho).abs() + (a.u - b.u).abs() + (a.p - b.p).abs())
        .sum::<f64>()
        * grid.dx()
}
