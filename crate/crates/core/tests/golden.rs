//! Byte-level regression of a ratio-4 snapshot at t = 0.3 with dr = 0.005.

use std::path::Path;

use cylshock::scenario::parse_config;
use cylshock::snapshot::read_snapshot_file;
use cylshock::{run_simulation, write_snapshot_csv};

const GOLDEN: &str = "tests/golden/ratio4_t0.3.csv";

fn ratio4_at_03() -> Vec<u8> {
    let config = parse_config("ratio = 4\nt_end = 0.3\nsnapshots = 0.3\n").unwrap();
    assert_eq!(config.r_max / config.n_cells as f64, 0.005);
    let out = run_simulation(&config).unwrap();
    assert_eq!(out.snapshots.len(), 1);
    let mut bytes = Vec::new();
    write_snapshot_csv(&out.snapshots[0], &mut bytes).unwrap();
    bytes
}

#[test]
fn ratio4_snapshot_matches_golden_file() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(GOLDEN);
    let golden = std::fs::read(&path).unwrap();
    let fresh = ratio4_at_03();
    assert!(fresh == golden, "snapshot differs from {}", path.display());
}

#[test]
fn golden_file_parses_back() {
    let snap = read_snapshot_file(&Path::new(env!("CARGO_MANIFEST_DIR")).join(GOLDEN)).unwrap();
    assert_eq!(snap.time, 0.3);
    assert_eq!(snap.rows.len(), 400);
    // converging shock is inbound: gas behind it moves toward the axis
    assert!(snap.rows.iter().any(|r| r.u < -0.1));
    assert!(snap.rows.iter().all(|r| r.p > 0.0 && r.rho > 0.0));
}
