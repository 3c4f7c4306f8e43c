//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for configuration or I/O problems, 2 when the
//! run aborts on a non-physical state.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;

use crate::error::{Error, Result};
use crate::reconstruction::LimiterKind;
use crate::scenario::{canned_scenario, parse_config_with_overrides};
use crate::snapshot::{format_significant, write_snapshot_file, Snapshot};
use crate::solver::{run_simulation, RunFailure, RunOutput, SimulationConfig, Splitting};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NON_PHYSICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cylshock",
    version,
    about = "Converging shock simulations in planar, cylindrical and spherical symmetry"
)]
pub struct Args {
    /// Canned case: ratio4, ratio10 or ratio20.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub scenario: Option<String>,

    /// Configuration file of `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Directory receiving snapshot CSVs and summary.txt [default: ./out].
    #[arg(long)]
    pub output_dir: Option<PathBuf>,

    #[arg(long)]
    pub cells: Option<usize>,

    /// Initial outer/inner pressure and density ratio.
    #[arg(long)]
    pub ratio: Option<f64>,

    #[arg(long)]
    pub cfl: Option<f64>,

    #[arg(long)]
    pub t_end: Option<f64>,

    #[arg(long)]
    pub limiter: Option<LimiterKind>,

    #[arg(long)]
    pub splitting: Option<Splitting>,
}

impl Args {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if let Some(v) = self.cells {
            out.push(("cells", v.to_string()));
        }
        if let Some(v) = self.ratio {
            out.push(("ratio", v.to_string()));
        }
        if let Some(v) = self.cfl {
            out.push(("cfl", v.to_string()));
        }
        if let Some(v) = self.t_end {
            out.push(("t_end", v.to_string()));
        }
        if let Some(v) = self.limiter {
            out.push(("limiter", v.to_string()));
        }
        if let Some(v) = self.splitting {
            out.push(("splitting", v.to_string()));
        }
        out
    }

    /// Resolves scenario or file plus flag overrides into a validated config.
    pub fn load_config(&self) -> Result<SimulationConfig> {
        let text = match (&self.scenario, &self.config) {
            (Some(name), _) => canned_scenario(name)?,
            (None, Some(path)) => fs::read_to_string(path).map_err(|source| Error::ConfigFile {
                path: path.clone(),
                source,
            })?,
            (None, None) => {
                return Err(Error::config(
                    None,
                    "either --scenario or --config is required",
                ))
            }
        };
        let overrides = self.overrides();
        parse_config_with_overrides(&text, &overrides)
    }

    fn output_dir(&self, config: &SimulationConfig) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("./out"))
    }
}

/// File name of the `index`-th snapshot.
pub fn snapshot_file_name(index: usize, time: f64) -> String {
    format!("snapshot_{index:03}_t{time:.4}.csv")
}

/// `key = value` summary of a finished run.
pub fn summary_text(output: &RunOutput, wall_seconds: f64) -> String {
    let mut s = String::new();
    if let Some(t_c) = output.convergence.t_c {
        let _ = writeln!(s, "t_c = {}", format_significant(t_c));
    }
    let drift = output.ledger.drift();
    let _ = writeln!(s, "detected = {}", output.convergence.detected());
    let _ = writeln!(s, "steps = {}", output.steps);
    let _ = writeln!(s, "mass_drift = {:e}", drift[0]);
    let _ = writeln!(s, "momentum_drift = {:e}", drift[1]);
    let _ = writeln!(s, "energy_drift = {:e}", drift[2]);
    let _ = writeln!(s, "wall_seconds = {wall_seconds:.3}");
    s
}

fn write_snapshots(dir: &Path, snapshots: &[Snapshot]) -> Result<()> {
    for (i, snap) in snapshots.iter().enumerate() {
        write_snapshot_file(snap, &dir.join(snapshot_file_name(i, snap.time)))?;
    }
    Ok(())
}

/// Writes what a failed run left behind and picks the exit code.
fn report_failure(dir: &Path, failure: &RunFailure) -> i32 {
    eprintln!("error: {}", failure.error);
    let _ = write_snapshots(dir, &failure.snapshots);
    if let Some(last) = &failure.last_state {
        let path = dir.join("crash.csv");
        match write_snapshot_file(last, &path) {
            Ok(()) => eprintln!("last accepted state written to {}", path.display()),
            Err(e) => eprintln!("could not write crash snapshot: {e}"),
        }
    }
    if failure.error.is_non_physical() {
        EXIT_NON_PHYSICAL
    } else {
        EXIT_CONFIG
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(args) => args,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_OK
            };
            let _ = err.print();
            return code;
        }
    };
    let config = match args.load_config() {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_CONFIG;
        }
    };
    let dir = args.output_dir(&config);
    if let Err(err) = fs::create_dir_all(&dir) {
        eprintln!(
            "error: cannot create output directory {}: {err}",
            dir.display()
        );
        return EXIT_CONFIG;
    }

    let started = Instant::now();
    match run_simulation(&config) {
        Ok(output) => {
            let wall = started.elapsed().as_secs_f64();
            let written = write_snapshots(&dir, &output.snapshots).and_then(|_| {
                fs::write(dir.join("summary.txt"), summary_text(&output, wall)).map_err(Error::from)
            });
            if let Err(err) = written {
                eprintln!("error: writing results to {}: {err}", dir.display());
                return EXIT_CONFIG;
            }
            match output.convergence.t_c {
                Some(t_c) => eprintln!(
                    "shock reached the axis at t_c = {t_c:.6} ({} steps)",
                    output.steps
                ),
                None => eprintln!("no convergence detected by t_end ({} steps)", output.steps),
            }
            EXIT_OK
        }
        Err(failure) => report_failure(&dir, &failure),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snapshot::read_snapshot_file;

    fn blowup() -> Error {
        Error::SolverBlowup {
            phase: "hyperbolic",
            step: 12,
            time: 0.05,
            cell: 0,
            r: 0.0025,
            mass: -1e-3,
            momentum: 0.0,
            energy: 1.0,
        }
    }

    #[test]
    fn blowup_writes_crash_snapshot_and_exits_2() {
        let dir = tempfile::tempdir().unwrap();
        let last = Snapshot {
            time: 0.05,
            rows: Vec::new(),
        };
        let failure = RunFailure {
            error: blowup(),
            snapshots: vec![Snapshot {
                time: 0.0,
                rows: Vec::new(),
            }],
            last_state: Some(last.clone()),
        };
        assert_eq!(report_failure(dir.path(), &failure), EXIT_NON_PHYSICAL);
        assert_eq!(
            read_snapshot_file(&dir.path().join("crash.csv")).unwrap(),
            last
        );
        assert!(dir.path().join(snapshot_file_name(0, 0.0)).exists());
    }

    #[test]
    fn other_failures_exit_1() {
        let dir = tempfile::tempdir().unwrap();
        let failure = RunFailure::from(Error::config(Some(3), "bad"));
        assert_eq!(report_failure(dir.path(), &failure), EXIT_CONFIG);
        assert!(!dir.path().join("crash.csv").exists());
    }

    #[test]
    fn snapshot_names_sort_by_index() {
        assert_eq!(snapshot_file_name(0, 0.1), "snapshot_000_t0.1000.csv");
        assert_eq!(snapshot_file_name(12, 0.55), "snapshot_012_t0.5500.csv");
    }
}
