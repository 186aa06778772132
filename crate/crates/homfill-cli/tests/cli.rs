//! End-to-end tests of the binary: output bytes, exit codes and
//! determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn homfill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homfill"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = homfill(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn fv_table_bytes() {
    assert_eq!(
        stdout(&["fv", "--complex", "tetra_solid", "--degree", "2", "--kmax", "4"]),
        "0,0\n1,0\n2,0\n3,0\n4,1\n"
    );
}

#[test]
fn fv_records_include_witnesses() {
    let out = stdout(&[
        "fv",
        "--complex",
        "tetra_hollow",
        "--degree",
        "2",
        "--kmax",
        "4",
        "--format",
        "records",
    ]);
    assert!(out.starts_with("k=0 value=0\n"));
    assert!(out.contains("k=4 value=inf witness="), "{out}");
}

#[test]
fn fill_square_boundary() {
    assert_eq!(
        stdout(&[
            "fill",
            "--complex",
            "grid_1x1",
            "--degree",
            "1",
            "--cycle",
            "ex(0,0):1 ey(1,0):1 ex(0,1):-1 ey(0,0):-1",
        ]),
        "finite 1 1*sq(0,0)\n"
    );
}

#[test]
fn fill_budget_exhaustion_exits_two() {
    let out = homfill(&[
        "fill",
        "--complex",
        "grid_1x1",
        "--degree",
        "1",
        "--cycle",
        "ex(0,0):1 ey(1,0):1 ex(0,1):-1 ey(0,0):-1",
        "--budget",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "budget-exceeded 0\n");
}

#[test]
fn fill_infeasible_prints_certificate() {
    let out = stdout(&[
        "fill",
        "--complex",
        "torus_2",
        "--degree",
        "1",
        "--cycle",
        "ex(0,0):1 ex(1,0):1",
    ]);
    assert!(out.starts_with("infeasible mod "), "{out}");
}

#[test]
fn validate_rejects_broken_boundaries_naming_the_cell() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join("homfill_cli_bad_complex.txt");
    std::fs::write(
        &path,
        "complex bad\ncells 0: v0 v1\ncells 1: e0\ncells 2: f0\n\
         boundary 1: e0 = 1*v1 + 1*v0\nboundary 2: f0 = 1*e0\n",
    )
    .unwrap();
    let out = homfill(&["validate", "--complex", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("f0"), "{err}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn build_then_validate_round_trips() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join("homfill_cli_grid22.txt");
    let built = stdout(&["build", "--complex", "grid_2x2"]);
    std::fs::write(&path, &built).unwrap();
    assert_eq!(stdout(&["validate", "--complex", path.to_str().unwrap()]), "ok\n");
    assert_eq!(stdout(&["build", "--complex", path.to_str().unwrap()]), built);
    std::fs::remove_file(&path).ok();
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let args = [
        "fv",
        "--complex",
        "coned_z2_2",
        "--degree",
        "1",
        "--kmax",
        "4",
    ];
    assert_eq!(stdout(&args), stdout(&args));

    let dn_args = ["dn", "--complex", "grid_2x2", "--degree", "1", "--n", "4"];
    assert_eq!(stdout(&dn_args), stdout(&dn_args));
}

#[test]
fn dn_with_action_file_lists_representatives() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join("homfill_cli_c4_action.txt");
    std::fs::write(&path, "action rot\nelement\nsource: (0 1 2 3)\ntarget: (0 1 2 3)\n")
        .unwrap();
    let out = stdout(&[
        "dn",
        "--complex",
        "cycle_4",
        "--degree",
        "1",
        "--n",
        "1",
        "--action",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.lines().count(), 2);
    std::fs::remove_file(&path).ok();
}

#[test]
fn bound_matches_between_routes() {
    let plain = stdout(&["bound", "--complex", "grid_2x2", "--degree", "1", "--n", "4"]);
    assert_eq!(plain, "4,1,4\n");
}

#[test]
fn unknown_flags_and_missing_fixtures_fail() {
    let out = homfill(&["fv", "--nonsense"]);
    assert!(!out.status.success());
    let out = homfill(&["validate", "--complex", "no_such_fixture_or_file"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn degree_out_of_range_is_an_input_error() {
    let out = homfill(&[
        "fv",
        "--complex",
        "grid_1x1",
        "--degree",
        "7",
        "--kmax",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree"));
}
