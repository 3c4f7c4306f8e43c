//! Diaphragm initial conditions, the `key = value` run configuration and the
//! canned converging-shock scenarios.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gas::{GasModel, Geometry, PrimitiveState, RadialGrid};
use crate::reconstruction::{edit_distance, LimiterKind};
use crate::solver::{SimulationConfig, SimulationState, Splitting};

/// Cylindrical diaphragm of radius `r0` separating two isothermal gases at rest.
///
/// The inner gas is the reference state `(1, 0, 1/gamma)`; the outer gas has
/// density and pressure raised by `ratio`, so both sides share `T = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiaphragmSpec {
    pub r0: f64,
    pub ratio: f64,
}

impl DiaphragmSpec {
    pub fn new(ratio: f64) -> Self {
        Self { r0: 1.0, ratio }
    }

    pub fn inner_state(&self, gas: &GasModel) -> PrimitiveState {
        PrimitiveState::new(1.0, 0.0, 1.0 / gas.gamma())
    }

    pub fn outer_state(&self, gas: &GasModel) -> PrimitiveState {
        PrimitiveState::new(self.ratio, 0.0, self.ratio / gas.gamma())
    }

    pub fn validate(&self, r_max: f64) -> Result<()> {
        if !(self.ratio > 1.0) || !self.ratio.is_finite() {
            return Err(Error::config(
                None,
                format!("ratio must be > 1 (outer gas denser), got {}", self.ratio),
            ));
        }
        if !(self.r0 > 0.0 && self.r0 < r_max) {
            return Err(Error::config(
                None,
                format!("r0 = {} must lie inside (0, r_max = {r_max})", self.r0),
            ));
        }
        Ok(())
    }
}

/// Gas at rest with the diaphragm state on each side of `r0`.
pub fn build_initial_condition(
    spec: &DiaphragmSpec,
    grid: &RadialGrid,
    gas: &GasModel,
) -> Result<SimulationState> {
    if !(spec.r0 > grid.r_min() && spec.r0 < grid.r_max()) {
        return Err(Error::config(
            None,
            format!(
                "r0 = {} must lie inside the domain ({}, {})",
                spec.r0,
                grid.r_min(),
                grid.r_max()
            ),
        ));
    }
    let inner = spec.inner_state(gas);
    let outer = spec.outer_state(gas);
    let prims: Vec<PrimitiveState> = grid
        .centers()
        .map(|r| if r < spec.r0 { inner } else { outer })
        .collect();
    Ok(SimulationState::from_primitives(&prims, gas))
}

const KEYS: [&str; 11] = [
    "geometry",
    "ratio",
    "r0",
    "r_max",
    "cells",
    "cfl",
    "t_end",
    "limiter",
    "splitting",
    "snapshots",
    "output_dir",
];

pub const DEFAULT_R0: f64 = 1.0;
pub const DEFAULT_R_MAX: f64 = 2.0;
pub const DEFAULT_CELLS: usize = 400;
pub const DEFAULT_CFL: f64 = 0.5;
pub const DEFAULT_T_END: f64 = 0.8;

/// Multiples of the snapshot cadence in `(0, t_end]`.
pub fn default_snapshot_times(t_end: f64) -> Vec<f64> {
    (1..)
        .map(|k| k as f64 / 10.0)
        .take_while(|&t| t <= t_end * (1.0 + 1e-12))
        .map(|t| t.min(t_end))
        .collect()
}

/// Parses a configuration file; see [`parse_config_with_overrides`].
pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    parse_config_with_overrides(text, &[])
}

/// Parses `key = value` lines (`#` starts a comment) and applies
/// `overrides` on top, as if they were appended to the file.
///
/// Every key except `ratio` has a default. Unknown or repeated keys are
/// errors. When `snapshots` is absent the cadence is every 0.1 up to `t_end`.
pub fn parse_config_with_overrides(
    text: &str,
    overrides: &[(&str, String)],
) -> Result<SimulationConfig> {
    let mut values: [Option<(Option<usize>, String)>; KEYS.len()] = Default::default();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::config(
                Some(line_no),
                format!("expected 'key = value', got '{line}'"),
            ));
        };
        let key = key.trim();
        let slot = key_index(key).map_err(|reason| Error::config(Some(line_no), reason))?;
        if values[slot].is_some() {
            return Err(Error::config(
                Some(line_no),
                format!("duplicate key '{key}'"),
            ));
        }
        values[slot] = Some((Some(line_no), value.trim().to_string()));
    }
    for (key, value) in overrides {
        let slot = key_index(key).map_err(|reason| Error::config(None, reason))?;
        values[slot] = Some((None, value.trim().to_string()));
    }

    let get = |key: &str| -> Option<&(Option<usize>, String)> {
        values[KEYS.iter().position(|k| *k == key).unwrap()].as_ref()
    };
    fn parse<T: std::str::FromStr>(
        entry: Option<&(Option<usize>, String)>,
        key: &str,
        default: T,
    ) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match entry {
            None => Ok(default),
            Some((line, text)) => text.parse::<T>().map_err(|e| {
                Error::config(*line, format!("invalid value for {key}: '{text}' ({e})"))
            }),
        }
    }

    let ratio_entry =
        get("ratio").ok_or_else(|| Error::config(None, "missing required key 'ratio'"))?;
    let ratio: f64 = parse(Some(ratio_entry), "ratio", 0.0)?;
    let geometry: Geometry = parse(get("geometry"), "geometry", Geometry::Cylindrical)?;
    let r0: f64 = parse(get("r0"), "r0", DEFAULT_R0)?;
    let r_max: f64 = parse(get("r_max"), "r_max", DEFAULT_R_MAX)?;
    let n_cells: usize = parse(get("cells"), "cells", DEFAULT_CELLS)?;
    let cfl: f64 = parse(get("cfl"), "cfl", DEFAULT_CFL)?;
    let t_end: f64 = parse(get("t_end"), "t_end", DEFAULT_T_END)?;
    let limiter: LimiterKind = parse(get("limiter"), "limiter", LimiterKind::Superbee)?;
    let splitting: Splitting = parse(get("splitting"), "splitting", Splitting::Strang)?;
    let snapshot_times = match get("snapshots") {
        None => default_snapshot_times(t_end),
        Some((line, text)) => parse_times(text).map_err(|reason| Error::config(*line, reason))?,
    };
    let output_dir = get("output_dir")
        .map(|(_, v)| v.clone())
        .filter(|v| !v.is_empty());

    let config = SimulationConfig {
        geometry,
        gas: GasModel::air(),
        r_max,
        n_cells,
        cfl,
        t_end,
        limiter,
        splitting,
        snapshot_times,
        initial_condition: DiaphragmSpec { r0, ratio },
        output_dir,
    };

    // attach the line of the offending key; reasons start with the key name
    config.validate().map_err(|err| match err {
        Error::Config { line: None, reason } => {
            let first = reason.split_whitespace().next().unwrap_or("");
            let key = if first == "snapshot" {
                "snapshots"
            } else {
                first
            };
            let line = KEYS
                .contains(&key)
                .then(|| get(key))
                .flatten()
                .and_then(|(l, _)| *l);
            Error::Config { line, reason }
        }
        other => other,
    })?;
    Ok(config)
}

fn key_index(key: &str) -> std::result::Result<usize, String> {
    KEYS.iter().position(|k| *k == key).ok_or_else(|| {
        match KEYS.iter().find(|k| edit_distance(k, key) <= 2) {
            Some(k) => format!("unknown key '{key}' (did you mean '{k}'?)"),
            None => format!("unknown key '{key}' (valid keys: {})", KEYS.join(", ")),
        }
    })
}

fn parse_times(text: &str) -> std::result::Result<Vec<f64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("invalid snapshot time '{}' ({e})", t.trim()))
        })
        .collect()
}

/// Writes a configuration that [`parse_config`] reads back unchanged.
pub fn serialize_config(config: &SimulationConfig) -> String {
    let mut out = String::new();
    let times: Vec<String> = config
        .snapshot_times
        .iter()
        .map(|t| t.to_string())
        .collect();
    let _ = writeln!(out, "geometry = {}", config.geometry.name());
    let _ = writeln!(out, "ratio = {}", config.initial_condition.ratio);
    let _ = writeln!(out, "r0 = {}", config.initial_condition.r0);
    let _ = writeln!(out, "r_max = {}", config.r_max);
    let _ = writeln!(out, "cells = {}", config.n_cells);
    let _ = writeln!(out, "cfl = {}", config.cfl);
    let _ = writeln!(out, "t_end = {}", config.t_end);
    let _ = writeln!(out, "limiter = {}", config.limiter);
    let _ = writeln!(out, "splitting = {}", config.splitting);
    let _ = writeln!(out, "snapshots = {}", times.join(","));
    if let Some(dir) = &config.output_dir {
        let _ = writeln!(out, "output_dir = {dir}");
    }
    out
}

/// Names accepted by [`canned_scenario`].
pub const SCENARIOS: [&str; 3] = ["ratio4", "ratio10", "ratio20"];

/// Converging-shock cases with pressure/density ratios 4, 10 and 20, recorded
/// every 0.1 up to 0.6 and run on to `t_end = 0.8` so focusing is captured.
pub fn canned_scenario(name: &str) -> Result<String> {
    let ratio = match name {
        "ratio4" => 4,
        "ratio10" => 10,
        "ratio20" => 20,
        other => {
            return Err(Error::config(
                None,
                format!(
                    "unknown scenario '{other}' (expected one of {})",
                    SCENARIOS.join(", ")
                ),
            ))
        }
    };
    Ok(format!(
        "# converging cylindrical shock, pressure and density ratio {ratio}\n\
         geometry = cylindrical\n\
         ratio = {ratio}\n\
         snapshots = 0.1,0.2,0.3,0.4,0.5,0.6\n\
         t_end = {DEFAULT_T_END}\n"
    ))
}
