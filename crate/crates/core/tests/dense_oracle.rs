//! Symplectic rules against explicit matrices.

use bpscan::dense::{
    self, as_signed_pauli, circuit_matrix, gate_matrix, pauli_matrix, rotation_matrix,
};
use bpscan::rng::master_rng;
use bpscan::{
    hea_circuit, prepare_stabilizer, two_body_nn_paulis, CliffordGate, CliffordTableau,
    PauliString, StabilizerState, StateVector,
};
use num_complex::Complex64;
use rand::Rng;

fn all_paulis(n: usize) -> Vec<PauliString> {
    (0..1u64 << (2 * n))
        .map(|code| {
            let (mut x, mut z) = (0, 0);
            for q in 0..n {
                x |= ((code >> (2 * q)) & 1) << q;
                z |= ((code >> (2 * q + 1)) & 1) << q;
            }
            PauliString::from_masks(n, x, z, false).unwrap()
        })
        .collect()
}

fn random_gates(n: usize, len: usize, rng: &mut impl Rng) -> Vec<CliffordGate> {
    let pool = CliffordGate::all_on(n);
    (0..len)
        .map(|_| pool[rng.gen_range(0..pool.len())])
        .collect()
}

#[test]
fn gate_conjugation_exhaustive() {
    for n in 1..=3 {
        for g in CliffordGate::all_on(n) {
            let u = gate_matrix(&g, n);
            for p in all_paulis(n) {
                for p in [p.clone(), p.negated()] {
                    let expected = u.adjoint().mul(&pauli_matrix(&p)).mul(&u);
                    let got = p.conjugate_by_gate(&g).unwrap();
                    assert!(
                        pauli_matrix(&got).max_abs_diff(&expected) < 1e-12,
                        "{g}: {p} -> {got}"
                    );
                }
            }
        }
    }
}

#[test]
fn products_match_matrix_products() {
    let i = Complex64::new(0.0, 1.0);
    for n in 1..=2 {
        for a in all_paulis(n) {
            for b in all_paulis(n) {
                let prod = a.multiply(&b).unwrap();
                let phase = i.powi(prod.i_power as i32);
                let lhs = pauli_matrix(&prod.pauli).scale(phase);
                let rhs = pauli_matrix(&a).mul(&pauli_matrix(&b));
                assert!(lhs.max_abs_diff(&rhs) < 1e-12, "{a}·{b}");
                let ab = a.multiply(&b).unwrap().i_power;
                let ba = b.multiply(&a).unwrap().i_power;
                let diff = (ab + 4 - ba) % 4;
                assert_eq!(diff, if a.commutes(&b).unwrap() { 0 } else { 2 });
            }
        }
    }
}

#[test]
fn random_products_n3() {
    let mut rng = master_rng(11);
    let i = Complex64::new(0.0, 1.0);
    for _ in 0..1000 {
        let a = PauliString::random(3, &mut rng, true);
        let b = PauliString::random(3, &mut rng, true);
        let prod = a.multiply(&b).unwrap();
        let lhs = pauli_matrix(&prod.pauli).scale(i.powi(prod.i_power as i32));
        assert!(lhs.max_abs_diff(&pauli_matrix(&a).mul(&pauli_matrix(&b))) < 1e-12);
    }
}

#[test]
fn quarter_rotations_match_dense() {
    let half_pi = std::f64::consts::FRAC_PI_2;
    for axis in all_paulis(2).into_iter().skip(1) {
        for k in 0..4u8 {
            let r = rotation_matrix(&axis, k as f64 * half_pi);
            for p in all_paulis(2) {
                let expected = r.adjoint().mul(&pauli_matrix(&p)).mul(&r);
                let got = p.conjugate_by_quarter_rotation(&axis, k).unwrap();
                assert!(
                    pauli_matrix(&got).max_abs_diff(&expected) < 1e-12,
                    "{axis} k={k} {p}"
                );
            }
        }
    }
}

#[test]
fn random_circuits_n2_n3() {
    let mut rng = master_rng(3);
    for trial in 0..1000 {
        let n = 2 + trial % 2;
        let gates = random_gates(n, 12, &mut rng);
        let u = circuit_matrix(&gates, n);
        let p = PauliString::random(n, &mut rng, true);
        let mut heis = p.clone();
        for g in gates.iter().rev() {
            heis = heis.conjugate_by_gate(g).unwrap();
        }
        let expected = u.adjoint().mul(&pauli_matrix(&p)).mul(&u);
        assert!(pauli_matrix(&heis).max_abs_diff(&expected) < 1e-10);

        // The tableau maps P to U P U†.
        let t = CliffordTableau::from_gates(n, &gates).unwrap();
        let fwd = u.mul(&pauli_matrix(&p)).mul(&u.adjoint());
        assert_eq!(
            as_signed_pauli(&fwd, n, 1e-9),
            Some(t.conjugate_pauli(&p).unwrap())
        );
        let back = t.inverse().conjugate_pauli(&p).unwrap();
        assert_eq!(as_signed_pauli(&expected, n, 1e-9), Some(back));
    }
}

#[test]
fn random_tableaux_are_unitary_cliffords() {
    let mut rng = master_rng(5);
    for _ in 0..50 {
        let t = CliffordTableau::random(3, &mut rng);
        assert!(t.is_symplectic());
        let psi: StateVector<f64> = prepare_stabilizer(&t).unwrap();
        let state = t.zero_state_image();
        for p in all_paulis(3) {
            let exact = state.expectation(&p).unwrap() as f64;
            assert!((psi.expectation(&p).unwrap() - exact).abs() < 1e-10, "{p}");
        }
    }
}

#[test]
fn prepared_states_match_generators_n4() {
    let mut rng = master_rng(8);
    for _ in 0..20 {
        let s = StabilizerState::random(4, &mut rng);
        let psi = StateVector::<f64>::from_stabilizer(&s).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        for p in all_paulis(4) {
            let e = s.expectation(&p).unwrap() as f64;
            assert!((psi.expectation(&p).unwrap() - e).abs() < 1e-10);
        }
    }
}

#[test]
fn heisenberg_matches_statevector_on_hea() {
    let mut rng = master_rng(21);
    for trial in 0..200 {
        let n = 2 + trial % 4;
        let c = hea_circuit(n, 2, &mut rng).unwrap();
        let obs = two_body_nn_paulis(n).unwrap();
        let p = &obs[rng.gen_range(0..obs.len())];
        let point = c.random_clifford_point(&mut rng);
        let zero = StabilizerState::zero(n);
        let exact = c.eval_at_clifford_point(&point, p, &zero).unwrap();
        let psi = StateVector::<f64>::zero_state(n)
            .unwrap()
            .evolve(&c, &point.to_angles())
            .unwrap();
        assert!((psi.expectation(p).unwrap() - exact as f64).abs() < 1e-9);
    }
}

#[test]
fn statevector_gates_match_dense() {
    let mut rng = master_rng(13);
    for _ in 0..30 {
        let gates = random_gates(3, 10, &mut rng);
        let mut sv = StateVector::<f64>::zero_state(3).unwrap();
        for g in &gates {
            sv.apply_gate(g).unwrap();
        }
        let u = circuit_matrix(&gates, 3);
        let mut e0 = vec![Complex64::new(0.0, 0.0); 8];
        e0[0] = Complex64::new(1.0, 0.0);
        let expected = u.apply(&e0);
        for (a, b) in sv.amplitudes().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
        let p = PauliString::random(3, &mut rng, true);
        let e = dense::expectation(&pauli_matrix(&p), &expected);
        assert!((sv.expectation(&p).unwrap() - e.re).abs() < 1e-12);
    }
}
