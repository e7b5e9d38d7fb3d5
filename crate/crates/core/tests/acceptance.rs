//! One test per acceptance criterion. Each prints a PASS/FAIL line with the
//! measured values; run with `--nocapture` (or `--test-threads=1`) to see them.

use std::sync::Mutex;

use blockade::acceptance;

// Criteria carry runtime limits, so they must not compete for the CPU.
static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(id: u8) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let outcome =
        acceptance::run(id).unwrap_or_else(|e| panic!("criterion {id} could not run: {e}"));
    println!("{outcome}");
    assert!(outcome.passed(), "criterion {id} not met");
}

#[test]
fn criterion_01_cpb_diagonal_dips() {
    criterion(1);
}

#[test]
fn criterion_02_slice_minima_at_cavity_detuning_20() {
    criterion(2);
}

#[test]
fn criterion_03_red_side_bunching() {
    criterion(3);
}

#[test]
fn criterion_04_weak_coupling_single_optimum() {
    criterion(4);
}

#[test]
fn criterion_05_twin_optima() {
    criterion(5);
}

#[test]
fn criterion_06_detuned_cavity_slices() {
    criterion(6);
}

#[test]
fn criterion_07_tied_detuning_sweeps() {
    criterion(7);
}

#[test]
fn criterion_08_analytic_numeric_agreement() {
    criterion(8);
}

#[test]
fn criterion_09_interference_zero() {
    criterion(9);
}

#[test]
fn criterion_10_solver_integrity() {
    criterion(10);
}

#[test]
fn criterion_11_origin_symmetry() {
    criterion(11);
}
