use bpscan::rng::master_rng;
use bpscan::{CliffordGate, CliffordTableau, CprCircuit, PauliString, StabilizerState};
use proptest::prelude::*;

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (any::<u64>(), any::<u64>(), any::<bool>()).prop_map(move |(x, z, s)| {
        let mask = if n == 64 { u64::MAX } else { (1 << n) - 1 };
        PauliString::from_masks(n, x & mask, z & mask, s).unwrap()
    })
}

fn gate(n: usize) -> impl Strategy<Value = CliffordGate> {
    let all = CliffordGate::all_on(n);
    (0..all.len()).prop_map(move |i| all[i])
}

proptest! {
    #[test]
    fn product_is_associative(a in pauli(5), b in pauli(5), c in pauli(5)) {
        let ab = a.multiply(&b).unwrap();
        let abc = ab.pauli.multiply(&c).unwrap();
        let bc = b.multiply(&c).unwrap();
        let a_bc = a.multiply(&bc.pauli).unwrap();
        prop_assert_eq!(&abc.pauli, &a_bc.pauli);
        prop_assert_eq!((ab.i_power + abc.i_power) % 4, (bc.i_power + a_bc.i_power) % 4);
    }

    #[test]
    fn commutation_phase_difference(a in pauli(7), b in pauli(7)) {
        let ab = a.multiply(&b).unwrap().i_power;
        let ba = b.multiply(&a).unwrap().i_power;
        prop_assert_eq!((ab + 4 - ba) % 4, if a.commutes(&b).unwrap() { 0 } else { 2 });
        prop_assert_eq!((ab + ba) % 4, 0);
    }

    #[test]
    fn conjugation_preserves_commutation(a in pauli(4), b in pauli(4), g in gate(4)) {
        let (ga, gb) = (a.conjugate_by_gate(&g).unwrap(), b.conjugate_by_gate(&g).unwrap());
        prop_assert_eq!(ga.commutes(&gb).unwrap(), a.commutes(&b).unwrap());
        prop_assert_eq!(ga.is_identity(), a.is_identity());
        prop_assert_eq!(ga.conjugate_by_gate(&g.inverse()).unwrap(), a);
    }

    #[test]
    fn quarter_rotation_round_trip(p in pauli(3), axis in pauli(3), k in 0u8..4) {
        prop_assume!(!axis.is_identity());
        let r = p.conjugate_by_quarter_rotation(&axis, k).unwrap();
        prop_assert_eq!(r.conjugate_by_quarter_rotation(&axis, (4 - k) % 4).unwrap(), p);
    }

    #[test]
    fn label_round_trip(p in pauli(9)) {
        prop_assert_eq!(p.to_string().parse::<PauliString>().unwrap(), p);
    }

    #[test]
    fn tableau_inverse_and_dump(seed in any::<u64>(), n in 1usize..6) {
        let t = CliffordTableau::random(n, &mut master_rng(seed));
        prop_assert!(t.is_symplectic());
        prop_assert_eq!(t.then(&t.inverse()).unwrap(), CliffordTableau::identity(n));
        prop_assert_eq!(CliffordTableau::parse_dump(&t.dump()).unwrap(), t);
    }

    #[test]
    fn stabilizer_expectations_are_ternary(seed in any::<u64>(), p in pauli(4)) {
        let s = StabilizerState::random(4, &mut master_rng(seed));
        let e = s.expectation(&p).unwrap();
        prop_assert!((-1..=1).contains(&e));
        prop_assert_eq!(s.expectation(&p.clone().negated()).unwrap(), -e);
    }

    #[test]
    fn circuit_text_round_trip(seed in any::<u64>(), n in 2usize..5, layers in 1usize..4) {
        let c = bpscan::hea_circuit(n, layers, &mut master_rng(seed)).unwrap();
        prop_assert_eq!(c.to_text().parse::<CprCircuit>().unwrap(), c);
    }
}
