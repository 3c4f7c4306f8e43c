//! Recorded profiles and their CSV form.
//!
//! A snapshot file is UTF-8 with LF line endings:
//!
//! ```text
//! # t=<time, 17 significant digits>
//! r,rho,u,p,T,mach
//! <one row per cell, increasing r>
//! ```
//!
//! Row values use the shortest decimal that round-trips to the same `f64`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::gas::{GasModel, RadialGrid};
use crate::solver::SimulationState;

pub const CSV_HEADER: &str = "r,rho,u,p,T,mach";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotRow {
    pub r: f64,
    pub rho: f64,
    pub u: f64,
    pub p: f64,
    pub temperature: f64,
    pub mach: f64,
}

/// Primitive profile plus temperature and Mach number at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub rows: Vec<SnapshotRow>,
}

impl Snapshot {
    pub fn from_state(state: &SimulationState, grid: &RadialGrid, gas: &GasModel) -> Result<Self> {
        let rows = state
            .cells
            .iter()
            .enumerate()
            .map(|(i, cons)| {
                let w = cons.to_primitive(gas)?;
                Ok(SnapshotRow {
                    r: grid.center(i),
                    rho: w.rho,
                    u: w.u,
                    p: w.p,
                    temperature: w.temperature(gas),
                    mach: w.mach(gas),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            time: state.time,
            rows,
        })
    }

    pub fn pressures(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.p)
    }
}

/// `%.17g`-style rendering: 17 significant digits, trailing zeros dropped.
pub fn format_significant(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let sci = format!("{value:.16e}");
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exponent: i32 = exp.parse().unwrap_or(0);
    if (-5..17).contains(&exponent) {
        let fixed = format!("{:.*}", (16 - exponent) as usize, value);
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    } else {
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exp}")
    }
}

pub fn write_snapshot_csv<W: Write>(snapshot: &Snapshot, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "# t={}", format_significant(snapshot.time))?;
    writeln!(out, "{CSV_HEADER}")?;
    for row in &snapshot.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.r, row.rho, row.u, row.p, row.temperature, row.mach
        )?;
    }
    Ok(())
}

pub fn write_snapshot_file(snapshot: &Snapshot, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_snapshot_csv(snapshot, &mut out)?;
    out.flush()?;
    Ok(())
}

fn malformed(line: usize, reason: impl Into<String>) -> Error {
    Error::InvalidParameter(format!("snapshot CSV line {line}: {}", reason.into()))
}

/// Reads back a file produced by [`write_snapshot_csv`].
pub fn read_snapshot_csv<R: BufRead>(input: R) -> Result<Snapshot> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| malformed(1, "empty file"))??;
    let time = first
        .strip_prefix("# t=")
        .ok_or_else(|| malformed(1, "missing '# t=' line"))?
        .parse::<f64>()
        .map_err(|e| malformed(1, e.to_string()))?;
    let header = lines
        .next()
        .ok_or_else(|| malformed(2, "missing header"))??;
    if header != CSV_HEADER {
        return Err(malformed(2, format!("unexpected header '{header}'")));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let values = line
            .split(',')
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| malformed(idx + 3, e.to_string()))?;
        let [r, rho, u, p, temperature, mach] = values[..] else {
            return Err(malformed(
                idx + 3,
                format!("expected 6 columns, got {}", values.len()),
            ));
        };
        rows.push(SnapshotRow {
            r,
            rho,
            u,
            p,
            temperature,
            mach,
        });
    }
    Ok(Snapshot { time, rows })
}

pub fn read_snapshot_file(path: &Path) -> Result<Snapshot> {
    read_snapshot_csv(BufReader::new(File::open(path)?))
}
