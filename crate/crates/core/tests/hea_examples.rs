//! Estimators on deep hardware-efficient ansätze against 2-design values.
//!
//! These use the CX ladder: at 30 layers the CZ ladder has not spread
//! operators far enough for `n = 8` to look like a design.

use bpscan::estimators::{
    continuous_correlator, discrete_correlator, variance_clifford, variance_uniform,
};
use bpscan::rng::master_rng;
use bpscan::{
    hea_circuit_with, two_body_nn_paulis, CprCircuit, Entangler, HeaOptions, ObservableSum,
    StabilizerState, StateVector,
};

fn hea(n: usize, seed: u64) -> CprCircuit {
    let opts = HeaOptions {
        entangler: Entangler::CX,
        ..HeaOptions::default()
    };
    hea_circuit_with(n, 30, opts, &mut master_rng(seed)).unwrap()
}

#[test]
fn uniform_variance_n4() {
    let obs = two_body_nn_paulis(4).unwrap()[4].clone();
    let init = StateVector::zero_state(4).unwrap();
    let v = variance_uniform(&hea(4, 1), &ObservableSum::single(obs), &init, 500, 11).unwrap();
    let target = 1.0 / 17.0;
    assert!(
        (v.value() - target).abs() <= 3.0 * v.stderr(),
        "{} +- {}",
        v.value(),
        v.stderr()
    );
}

#[test]
fn clifford_variance_n8() {
    let obs = &two_body_nn_paulis(8).unwrap()[20];
    let v = variance_clifford(&hea(8, 2), obs, &StabilizerState::zero(8), 500, 12).unwrap();
    assert!(v.within(1.0 / 257.0, 3.0), "{v:?}");
}

#[test]
fn discrete_correlator_n6() {
    let obs = two_body_nn_paulis(6).unwrap();
    let a = discrete_correlator(
        &hea(6, 3),
        &obs[10],
        &obs[30],
        &StabilizerState::zero(6),
        100_000,
        13,
    )
    .unwrap();
    let scaled = a.mean * 4f64.powi(6);
    assert!((0.3..=3.0).contains(&scaled), "{scaled}");
}

#[test]
fn continuous_correlator_n8() {
    let obs = two_body_nn_paulis(8).unwrap();
    let init = StateVector::zero_state(8).unwrap();
    let a = continuous_correlator(&hea(8, 4), &obs[10], &obs[40], &init, 500, 14).unwrap();
    let scaled = a.mean * 4f64.powi(8);
    assert!((0.5..=2.0).contains(&scaled), "{scaled}");
}
