//! Fine-mesh reference profiles checked against stored golden files.
//!
//! Regenerate with `UPDATE_GOLDEN=1 cargo test --test reference_golden`.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use scaling_fv::grid::Grid;
use scaling_fv::models::model_by_name;
use scaling_fv::reference::{muscl_hancock_solve, ReferenceConfig};
use scaling_fv::report::{read_profile, write_profile};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(format!("{name}_reference.csv"))
}

fn check_against_golden(name: &str) {
    let m = model_by_name(name).unwrap();
    let rc = ReferenceConfig::with_cells(m.defaults.reference_cells);
    let q = muscl_hancock_solve(&m, &rc, m.defaults.t_final).unwrap();
    let grid = Grid::new(m.domain.0, m.domain.1, rc.n_cells).unwrap();
    let path = golden_path(name);

    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        write_profile(&grid, &q, File::create(&path).unwrap()).unwrap();
    }

    let (xs, stored) = read_profile(BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(xs.len(), grid.len());
    for (x, c) in xs.iter().zip(grid.centers()) {
        assert!((x - c).abs() < 1e-14);
    }
    for (i, (a, b)) in q.values().iter().zip(stored.values()).enumerate() {
        assert!(
            (a - b).abs() <= 1e-12 * b.abs().max(1.0),
            "{name} cell {i}: {a} vs {b}"
        );
    }
}

#[test]
fn burgers_reference_matches_golden() {
    check_against_golden("burgers");
}

#[test]
fn traffic_reference_matches_golden() {
    check_against_golden("traffic");
}
