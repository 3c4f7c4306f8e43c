//! Time marching: ghost cells, CFL time step, MUSCL-Hancock update of the
//! planar system, operator splitting with the geometric source, and the
//! bookkeeping around a run (snapshots, conservation ledger, axis history).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gas::{ConservedState, Flux, GasModel, Geometry, PrimitiveState, RadialGrid};
use crate::reconstruction::{muscl_reconstruct, FacePair, LimiterKind};
use crate::riemann::roe_flux;
use crate::scenario::DiaphragmSpec;
use crate::snapshot::Snapshot;
use crate::source::rk2_source_step;

/// Ghost cells on each side of the interior.
pub const GHOSTS: usize = 2;

/// |u| the axis cell must exceed before a sign change counts as convergence.
pub const CONVERGENCE_GUARD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Splitting {
    /// Half source step, full hyperbolic step, half source step.
    #[default]
    Strang,
    /// Full hyperbolic step followed by a full source step.
    Godunov,
}

impl Splitting {
    pub fn name(self) -> &'static str {
        match self {
            Splitting::Strang => "strang",
            Splitting::Godunov => "godunov",
        }
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Splitting {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strang" => Ok(Splitting::Strang),
            "godunov" => Ok(Splitting::Godunov),
            other => Err(format!(
                "unknown splitting '{other}' (expected strang or godunov)"
            )),
        }
    }
}

/// Treatment of one end of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Mirror image with the velocity negated (symmetry axis or solid wall).
    Reflective,
    /// Zero-gradient outflow.
    Transmissive,
    /// Ghosts hold a constant state.
    Fixed(PrimitiveState),
    /// Wraps around to the opposite end; both ends must be periodic.
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundaries {
    pub inner: Boundary,
    pub outer: Boundary,
}

impl Boundaries {
    pub const TRANSMISSIVE: Self = Self {
        inner: Boundary::Transmissive,
        outer: Boundary::Transmissive,
    };

    pub const PERIODIC: Self = Self {
        inner: Boundary::Periodic,
        outer: Boundary::Periodic,
    };

    /// Reflective axis with the far field held at `outer`.
    pub fn converging(outer: PrimitiveState) -> Self {
        Self {
            inner: Boundary::Reflective,
            outer: Boundary::Fixed(outer),
        }
    }

    fn validate(&self) -> Result<()> {
        let inner_periodic = matches!(self.inner, Boundary::Periodic);
        let outer_periodic = matches!(self.outer, Boundary::Periodic);
        if inner_periodic != outer_periodic {
            return Err(Error::InvalidParameter(
                "periodic boundaries must be used on both ends".into(),
            ));
        }
        for b in [self.inner, self.outer] {
            if let Boundary::Fixed(s) = b {
                if !s.is_physical() {
                    return Err(Error::InvalidParameter(format!(
                        "fixed boundary state is not physical: {s:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Discrete state of the interior cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub time: f64,
    pub cells: Vec<ConservedState>,
    pub step_count: u64,
}

impl SimulationState {
    pub fn new(cells: Vec<ConservedState>) -> Self {
        Self {
            time: 0.0,
            cells,
            step_count: 0,
        }
    }

    pub fn from_primitives(prims: &[PrimitiveState], gas: &GasModel) -> Self {
        Self::new(prims.iter().map(|w| w.to_conserved(gas)).collect())
    }

    pub fn primitives(&self, gas: &GasModel) -> Result<Vec<PrimitiveState>> {
        self.cells.iter().map(|u| u.to_primitive(gas)).collect()
    }
}

/// Numerical method and domain, independent of the initial data.
#[derive(Debug, Clone, PartialEq)]
pub struct Solver {
    pub gas: GasModel,
    pub geometry: Geometry,
    pub grid: RadialGrid,
    pub limiter: LimiterKind,
    pub splitting: Splitting,
    pub boundaries: Boundaries,
    pub cfl: f64,
}

/// Interface fluxes at the two domain ends from one hyperbolic step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryFluxes {
    pub inner: Flux,
    pub outer: Flux,
}

impl Solver {
    pub fn new(
        gas: GasModel,
        geometry: Geometry,
        grid: RadialGrid,
        limiter: LimiterKind,
        splitting: Splitting,
        boundaries: Boundaries,
        cfl: f64,
    ) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cfl must lie in (0, 1], got {cfl}"
            )));
        }
        grid.check_geometry(geometry)?;
        boundaries.validate()?;
        Ok(Self {
            gas,
            geometry,
            grid,
            limiter,
            splitting,
            boundaries,
            cfl,
        })
    }

    /// Planar, transmissive, superbee, Strang (source-free) setup used by the verification problems.
    pub fn planar(grid: RadialGrid, cfl: f64) -> Result<Self> {
        Self::new(
            GasModel::air(),
            Geometry::Planar,
            grid,
            LimiterKind::Superbee,
            Splitting::Strang,
            Boundaries::TRANSMISSIVE,
            cfl,
        )
    }

    /// Largest stable step, `cfl * dr / max(|u| + c)`.
    pub fn compute_dt(&self, state: &SimulationState) -> Result<f64> {
        let mut max_speed = 0.0f64;
        for (i, cons) in state.cells.iter().enumerate() {
            let w = self.checked(cons, i, state, "time-step")?;
            max_speed = max_speed.max(w.u.abs() + w.sound_speed(&self.gas));
        }
        Ok(self.cfl * self.grid.dr() / max_speed)
    }

    fn checked(
        &self,
        cons: &ConservedState,
        cell: usize,
        state: &SimulationState,
        phase: &'static str,
    ) -> Result<PrimitiveState> {
        cons.to_primitive(&self.gas)
            .map_err(|_| self.blowup(phase, state, cell, cons))
    }

    fn blowup(
        &self,
        phase: &'static str,
        state: &SimulationState,
        cell: usize,
        cons: &ConservedState,
    ) -> Error {
        Error::SolverBlowup {
            phase,
            step: state.step_count,
            time: state.time,
            cell,
            r: self.grid.center(cell.min(self.grid.n_cells() - 1)),
            mass: cons.mass,
            momentum: cons.momentum,
            energy: cons.energy,
        }
    }

    /// Primitive cell values with `GHOSTS` ghost cells on each side.
    ///
    /// Index `k` of the result holds interior cell `k - GHOSTS`.
    pub fn apply_boundaries(&self, state: &SimulationState) -> Result<Vec<PrimitiveState>> {
        let n = state.cells.len();
        let mut ext = Vec::with_capacity(n + 2 * GHOSTS);
        let interior = state
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| self.checked(c, i, state, "boundary"))
            .collect::<Result<Vec<_>>>()?;

        for g in (0..GHOSTS).rev() {
            // g = 0 is the ghost adjacent to the interior
            ext.push(match self.boundaries.inner {
                Boundary::Reflective => interior[g].mirrored(),
                Boundary::Transmissive => interior[0],
                Boundary::Fixed(s) => s,
                Boundary::Periodic => interior[n - 1 - g],
            });
        }
        ext.extend_from_slice(&interior);
        for g in 0..GHOSTS {
            ext.push(match self.boundaries.outer {
                Boundary::Reflective => interior[n - 1 - g].mirrored(),
                Boundary::Transmissive => interior[n - 1],
                Boundary::Fixed(s) => s,
                Boundary::Periodic => interior[g],
            });
        }
        Ok(ext)
    }

    /// Face states evolved by half a step with the cell's own flux difference.
    fn evolved_faces(&self, stencil: [&PrimitiveState; 3], dt: f64) -> FacePair {
        let faces = muscl_reconstruct(stencil, self.limiter);
        if faces.minus == faces.plus {
            return faces;
        }
        let gas = &self.gas;
        let um = faces.minus.to_conserved(gas);
        let up = faces.plus.to_conserved(gas);
        let correction =
            (0.5 * dt / self.grid.dr()) * (faces.minus.flux(gas) - faces.plus.flux(gas));
        match (
            (um + correction).to_primitive(gas),
            (up + correction).to_primitive(gas),
        ) {
            (Ok(minus), Ok(plus)) => FacePair { minus, plus },
            _ => FacePair::flat(*stencil[1]),
        }
    }

    /// Interface fluxes `F_{i-1/2}` for `i = 0..=n`.
    pub fn interface_fluxes(&self, state: &SimulationState, dt: f64) -> Result<Vec<Flux>> {
        let ext = self.apply_boundaries(state)?;
        let n = state.cells.len();
        // faces for ext indices 1..=n+2, i.e. interior cells -1..=n
        let faces: Vec<FacePair> = (1..=n + 2)
            .map(|k| self.evolved_faces([&ext[k - 1], &ext[k], &ext[k + 1]], dt))
            .collect();
        (0..=n)
            .map(|j| {
                roe_flux(&faces[j].plus, &faces[j + 1].minus, &self.gas).map_err(|_| {
                    let cell = j.min(n - 1);
                    self.blowup("riemann", state, cell, &state.cells[cell])
                })
            })
            .collect()
    }

    /// One MUSCL-Hancock step of the planar system, without the geometric source.
    pub fn hyperbolic_step(&self, state: &SimulationState, dt: f64) -> Result<SimulationState> {
        self.hyperbolic_step_with_fluxes(state, dt).map(|(s, _)| s)
    }

    pub fn hyperbolic_step_with_fluxes(
        &self,
        state: &SimulationState,
        dt: f64,
    ) -> Result<(SimulationState, BoundaryFluxes)> {
        let fluxes = self.interface_fluxes(state, dt)?;
        let k = dt / self.grid.dr();
        let cells: Vec<ConservedState> = state
            .cells
            .iter()
            .zip(fluxes.windows(2))
            .map(|(u, f)| *u - k * (f[1] - f[0]))
            .collect();
        let next = SimulationState {
            time: state.time,
            cells,
            step_count: state.step_count,
        };
        for (i, c) in next.cells.iter().enumerate() {
            self.checked(c, i, state, "hyperbolic update")?;
        }
        let boundary = BoundaryFluxes {
            inner: fluxes[0],
            outer: fluxes[fluxes.len() - 1],
        };
        Ok((next, boundary))
    }

    /// Advances every cell through the source ODE by `dt`.
    pub fn source_step(&self, state: &SimulationState, dt: f64) -> Result<SimulationState> {
        if self.geometry == Geometry::Planar {
            return Ok(state.clone());
        }
        let cells = state
            .cells
            .iter()
            .enumerate()
            .map(|(i, u)| {
                rk2_source_step(u, self.grid.center(i), self.geometry, &self.gas, dt)
                    .map_err(|_| self.blowup("source", state, i, u))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimulationState {
            cells,
            ..state.clone()
        })
    }

    /// One split step; advances time and the step counter.
    pub fn split_step(&self, state: &SimulationState, dt: f64) -> Result<SimulationState> {
        self.split_step_with_fluxes(state, dt).map(|(s, _)| s)
    }

    pub fn split_step_with_fluxes(
        &self,
        state: &SimulationState,
        dt: f64,
    ) -> Result<(SimulationState, BoundaryFluxes)> {
        let (mut next, fluxes) = match self.splitting {
            Splitting::Godunov => {
                let (h, f) = self.hyperbolic_step_with_fluxes(state, dt)?;
                (self.source_step(&h, dt)?, f)
            }
            Splitting::Strang => {
                let s = self.source_step(state, 0.5 * dt)?;
                let (h, f) = self.hyperbolic_step_with_fluxes(&s, dt)?;
                (self.source_step(&h, 0.5 * dt)?, f)
            }
        };
        next.time = state.time + dt;
        next.step_count = state.step_count + 1;
        Ok((next, fluxes))
    }

    /// Geometry-weighted totals `sum U_i r_i^alpha dr`.
    pub fn weighted_totals(&self, state: &SimulationState) -> [f64; 3] {
        let mut total = [0.0; 3];
        for (i, u) in state.cells.iter().enumerate() {
            let w = self.geometry.area(self.grid.center(i)) * self.grid.dr();
            for (t, v) in total.iter_mut().zip(u.to_array()) {
                *t += w * v;
            }
        }
        total
    }
}

/// Running balance of the conserved totals against boundary fluxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationLedger {
    pub initial: [f64; 3],
    pub current: [f64; 3],
    /// Time-integrated net outflow through the domain ends, area weighted.
    pub outflow: [f64; 3],
}

impl ConservationLedger {
    pub fn new(initial: [f64; 3]) -> Self {
        Self {
            initial,
            current: initial,
            outflow: [0.0; 3],
        }
    }

    fn record(&mut self, totals: [f64; 3], fluxes: &BoundaryFluxes, solver: &Solver, dt: f64) {
        let a_in = solver.geometry.area(solver.grid.face(0));
        let a_out = solver
            .geometry
            .area(solver.grid.face(solver.grid.n_cells()));
        let periodic = matches!(solver.boundaries.inner, Boundary::Periodic);
        for k in 0..3 {
            let net = fluxes.outer.to_array()[k] * a_out - fluxes.inner.to_array()[k] * a_in;
            if !periodic {
                self.outflow[k] += dt * net;
            }
        }
        self.current = totals;
    }

    /// Change of total plus outflow, relative to the initial total.
    ///
    /// When an initial total is zero (e.g. momentum of a fluid at rest) the
    /// absolute change is reported instead.
    pub fn drift(&self) -> [f64; 3] {
        std::array::from_fn(|k| {
            let change = self.current[k] + self.outflow[k] - self.initial[k];
            let scale = if self.initial[k] != 0.0 {
                self.initial[k].abs()
            } else {
                1.0
            };
            change.abs() / scale
        })
    }
}

/// Moment the converging shock reaches the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceEvent {
    pub t_c: Option<f64>,
}

impl ConvergenceEvent {
    pub fn detected(&self) -> bool {
        self.t_c.is_some()
    }
}

/// First sign change of the axis velocity from negative to non-negative.
///
/// Samples are `(t, u_axis)` in time order. Crossings only count once
/// `|u_axis|` has exceeded [`CONVERGENCE_GUARD`]; the crossing time is
/// linearly interpolated between the bracketing samples.
pub fn detect_convergence(history: &[(f64, f64)]) -> ConvergenceEvent {
    let mut armed = false;
    for pair in history.windows(2) {
        let (t0, u0) = pair[0];
        let (t1, u1) = pair[1];
        armed |= u0.abs() > CONVERGENCE_GUARD;
        if armed && u0 < 0.0 && u1 >= 0.0 {
            let t_c = t0 + (t1 - t0) * (-u0) / (u1 - u0);
            return ConvergenceEvent { t_c: Some(t_c) };
        }
    }
    ConvergenceEvent { t_c: None }
}

/// Complete description of a diaphragm run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub geometry: Geometry,
    pub gas: GasModel,
    pub r_max: f64,
    pub n_cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub limiter: LimiterKind,
    pub splitting: Splitting,
    pub snapshot_times: Vec<f64>,
    pub initial_condition: DiaphragmSpec,
    pub output_dir: Option<String>,
}

impl SimulationConfig {
    pub fn grid(&self) -> Result<RadialGrid> {
        RadialGrid::spanning(0.0, self.r_max, self.n_cells)
    }

    /// Reflective axis and fixed far field for curved geometries; transmissive for planar.
    pub fn boundaries(&self) -> Boundaries {
        match self.geometry {
            Geometry::Planar => Boundaries::TRANSMISSIVE,
            _ => Boundaries::converging(self.initial_condition.outer_state(&self.gas)),
        }
    }

    pub fn solver(&self) -> Result<Solver> {
        Solver::new(
            self.gas,
            self.geometry,
            self.grid()?,
            self.limiter,
            self.splitting,
            self.boundaries(),
            self.cfl,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::config(
                None,
                format!("cfl must lie in (0, 1], got {}", self.cfl),
            ));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::config(
                None,
                format!("t_end must be >= 0, got {}", self.t_end),
            ));
        }
        if !(self.r_max > 0.0) || !self.r_max.is_finite() {
            return Err(Error::config(
                None,
                format!("r_max must be > 0, got {}", self.r_max),
            ));
        }
        if self.n_cells < RadialGrid::MIN_CELLS {
            return Err(Error::config(
                None,
                format!(
                    "cells must be at least {}, got {}",
                    RadialGrid::MIN_CELLS,
                    self.n_cells
                ),
            ));
        }
        if self.snapshot_times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::config(
                None,
                "snapshot times must be strictly increasing",
            ));
        }
        if let Some(t) = self
            .snapshot_times
            .iter()
            .find(|&&t| !(t >= 0.0 && t <= self.t_end))
        {
            return Err(Error::config(
                None,
                format!("snapshot time {t} outside [0, t_end = {}]", self.t_end),
            ));
        }
        self.initial_condition.validate(self.r_max)
    }
}

/// A run in progress: solver, current state and everything recorded so far.
#[derive(Debug, Clone)]
pub struct Simulation {
    solver: Solver,
    state: SimulationState,
    ledger: ConservationLedger,
    axis_history: Vec<(f64, f64)>,
}

impl Simulation {
    pub fn new(solver: Solver, initial: SimulationState) -> Result<Self> {
        if initial.cells.len() != solver.grid.n_cells() {
            return Err(Error::InvalidParameter(format!(
                "state has {} cells, grid has {}",
                initial.cells.len(),
                solver.grid.n_cells()
            )));
        }
        let u0 = initial.cells[0]
            .to_primitive(&solver.gas)
            .map_err(|_| solver.blowup("initial condition", &initial, 0, &initial.cells[0]))?
            .u;
        let ledger = ConservationLedger::new(solver.weighted_totals(&initial));
        Ok(Self {
            axis_history: vec![(initial.time, u0)],
            solver,
            state: initial,
            ledger,
        })
    }

    pub fn solver(&self) -> &Solver {
        &self.solver
    }

    /// Last accepted state.
    pub fn state(&self) -> &SimulationState {
        &self.state
    }

    pub fn ledger(&self) -> &ConservationLedger {
        &self.ledger
    }

    /// `(t, u)` of the innermost cell after every step.
    pub fn axis_history(&self) -> &[(f64, f64)] {
        &self.axis_history
    }

    pub fn convergence(&self) -> ConvergenceEvent {
        detect_convergence(&self.axis_history)
    }

    pub fn snapshot(&self) -> Result<Snapshot> {
        Snapshot::from_state(&self.state, &self.solver.grid, &self.solver.gas)
    }

    /// One step of at most the CFL step, landing exactly on `target` if it is closer.
    ///
    /// The state is only replaced when the step succeeds.
    pub fn step_toward(&mut self, target: f64) -> Result<f64> {
        let remaining = target - self.state.time;
        if remaining <= 0.0 {
            return Ok(0.0);
        }
        let dt_cfl = self.solver.compute_dt(&self.state)?;
        let hits_target = dt_cfl >= remaining * (1.0 - 1e-12);
        let dt = if hits_target { remaining } else { dt_cfl };
        let (mut next, fluxes) = self.solver.split_step_with_fluxes(&self.state, dt)?;
        if hits_target {
            next.time = target;
        }
        let u_axis = next.cells[0].momentum / next.cells[0].mass;
        self.ledger.record(
            self.solver.weighted_totals(&next),
            &fluxes,
            &self.solver,
            dt,
        );
        self.axis_history.push((next.time, u_axis));
        self.state = next;
        Ok(dt)
    }

    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        while self.state.time < target {
            self.step_toward(target)?;
        }
        Ok(())
    }

    /// Advances a fixed number of CFL steps with no target clipping.
    pub fn advance_steps(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step_toward(f64::INFINITY)?;
        }
        Ok(())
    }
}

/// Everything a finished run produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<Snapshot>,
    pub convergence: ConvergenceEvent,
    pub ledger: ConservationLedger,
    pub steps: u64,
    pub final_state: SimulationState,
}

/// A run that stopped on a non-physical state.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    /// Snapshots recorded before the failure.
    pub snapshots: Vec<Snapshot>,
    /// Last accepted state, if the initial condition could be built.
    pub last_state: Option<Snapshot>,
}

impl From<Error> for RunFailure {
    fn from(error: Error) -> Self {
        Self {
            error,
            snapshots: Vec::new(),
            last_state: None,
        }
    }
}

/// Marches a diaphragm problem to `t_end`, recording the requested
/// snapshots plus the final state.
#[allow(clippy::result_large_err)]
pub fn run_simulation(config: &SimulationConfig) -> std::result::Result<RunOutput, RunFailure> {
    config.validate()?;
    let solver = config.solver()?;
    let initial = crate::scenario::build_initial_condition(
        &config.initial_condition,
        &solver.grid,
        &solver.gas,
    )?;
    let mut sim = Simulation::new(solver, initial)?;

    let mut targets = config.snapshot_times.clone();
    if targets.last().is_none_or(|&t| t < config.t_end) {
        targets.push(config.t_end);
    }

    let mut snapshots = Vec::with_capacity(targets.len());
    for target in targets {
        if let Err(error) = sim.advance_to(target) {
            return Err(RunFailure {
                error,
                last_state: sim.snapshot().ok(),
                snapshots,
            });
        }
        snapshots.push(sim.snapshot()?);
    }

    Ok(RunOutput {
        convergence: sim.convergence(),
        ledger: *sim.ledger(),
        steps: sim.state().step_count,
        final_state: sim.state().clone(),
        snapshots,
    })
}
