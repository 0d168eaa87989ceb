//! Dense statevector simulation for continuous parameters.
//!
//! Paulis act index-wise: `σ(x,z)|i⟩ = ±i^{|x∧z|} (-1)^{|i∧z|} |i ⊕ x⟩`, so
//! applying a term or a rotation costs O(2ⁿ) with no matrix built.

use num_complex::Complex;

use crate::circuit::{CprCircuit, Instruction, ParameterPoint};
use crate::error::{check_size, Error, Result};
use crate::gate::CliffordGate;
use crate::pauli::PauliString;
use crate::scalar::Real;
use crate::stabilizer::{CliffordTableau, StabilizerState};

pub const DEFAULT_QUBIT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amps: Vec<Complex<T>>,
}

/// Index masks and constant phase of a Pauli term.
#[derive(Clone, Copy)]
struct PauliAction<T> {
    x: usize,
    z: usize,
    base: Complex<T>,
}

impl<T: Real> PauliAction<T> {
    fn new(p: &PauliString) -> Self {
        let x = p.x_words()[0] as usize;
        let z = p.z_words()[0] as usize;
        let (one, zero) = (T::one(), T::zero());
        let mut base = match (x & z).count_ones() % 4 {
            0 => Complex::new(one, zero),
            1 => Complex::new(zero, one),
            2 => Complex::new(-one, zero),
            _ => Complex::new(zero, -one),
        };
        if p.is_negative() {
            base = -base;
        }
        PauliAction { x, z, base }
    }

    /// Phase picked up by basis state `i`.
    #[inline]
    fn phase(&self, i: usize) -> Complex<T> {
        if (i & self.z).count_ones() % 2 == 1 {
            -self.base
        } else {
            self.base
        }
    }
}

impl<T: Real> StateVector<T> {
    pub fn zero_state(n: usize) -> Result<Self> {
        Self::zero_state_with_cap(n, DEFAULT_QUBIT_CAP)
    }

    pub fn zero_state_with_cap(n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("statevector needs n >= 1".into()));
        }
        if n > cap || n > 40 {
            return Err(Error::TooManyQubits(n, cap));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(StateVector { n, amps })
    }

    /// Dense image of a stabilizer state.
    pub fn from_stabilizer(state: &StabilizerState) -> Result<Self> {
        let n = state.num_qubits();
        let mut psi = StateVector::zero_state(n)?;
        for g in disentangling_circuit(state).iter().rev() {
            psi.apply_gate(&g.inverse())?;
        }
        Ok(psi)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    fn check_pauli(&self, p: &PauliString) -> Result<()> {
        check_size(self.n, p.num_qubits())
    }

    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        self.check_pauli(p)?;
        let act = PauliAction::new(p);
        if act.x == 0 {
            for (i, a) in self.amps.iter_mut().enumerate() {
                *a = *a * act.phase(i);
            }
        } else {
            let hi = 1usize << (usize::BITS - 1 - act.x.leading_zeros());
            for i in 0..self.amps.len() {
                if i & hi == 0 {
                    let j = i ^ act.x;
                    let (ai, aj) = (self.amps[i], self.amps[j]);
                    self.amps[j] = act.phase(i) * ai;
                    self.amps[i] = act.phase(j) * aj;
                }
            }
        }
        Ok(())
    }

    /// `ψ ← exp(-iθP/2) ψ = cos(θ/2) ψ − i sin(θ/2) Pψ`.
    pub fn apply_rotation(&mut self, axis: &PauliString, angle: T) -> Result<()> {
        self.check_pauli(axis)?;
        let half = angle / (T::one() + T::one());
        let (c, s) = (half.cos(), half.sin());
        let cc = Complex::new(c, T::zero());
        let mis = Complex::new(T::zero(), -s);
        let act = PauliAction::new(axis);
        if act.x == 0 {
            for (i, a) in self.amps.iter_mut().enumerate() {
                *a = *a * (cc + mis * act.phase(i));
            }
        } else {
            let hi = 1usize << (usize::BITS - 1 - act.x.leading_zeros());
            for i in 0..self.amps.len() {
                if i & hi == 0 {
                    let j = i ^ act.x;
                    let (ai, aj) = (self.amps[i], self.amps[j]);
                    self.amps[i] = cc * ai + mis * act.phase(j) * aj;
                    self.amps[j] = cc * aj + mis * act.phase(i) * ai;
                }
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &CliffordGate) -> Result<()> {
        gate.check(self.n)?;
        let bit = |q: usize| 1usize << q;
        match *gate {
            CliffordGate::H(q) => {
                let r = T::FRAC_1_SQRT_2();
                for i in 0..self.amps.len() {
                    if i & bit(q) == 0 {
                        let j = i | bit(q);
                        let (a0, a1) = (self.amps[i], self.amps[j]);
                        self.amps[i] = (a0 + a1).scale(r);
                        self.amps[j] = (a0 - a1).scale(r);
                    }
                }
            }
            CliffordGate::S(q) | CliffordGate::Sdg(q) => {
                let im = if matches!(gate, CliffordGate::S(_)) {
                    T::one()
                } else {
                    -T::one()
                };
                let phase = Complex::new(T::zero(), im);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & bit(q) != 0 {
                        *a = *a * phase;
                    }
                }
            }
            CliffordGate::X(q) => self.apply_pauli(&single(self.n, q, "X"))?,
            CliffordGate::Y(q) => self.apply_pauli(&single(self.n, q, "Y"))?,
            CliffordGate::Z(q) => self.apply_pauli(&single(self.n, q, "Z"))?,
            CliffordGate::CX(c, t) => {
                for i in 0..self.amps.len() {
                    if i & bit(c) != 0 && i & bit(t) == 0 {
                        self.amps.swap(i, i | bit(t));
                    }
                }
            }
            CliffordGate::CZ(a, b) => {
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & bit(a) != 0 && i & bit(b) != 0 {
                        *amp = -*amp;
                    }
                }
            }
            CliffordGate::Swap(a, b) => {
                for i in 0..self.amps.len() {
                    if i & bit(a) != 0 && i & bit(b) == 0 {
                        self.amps.swap(i, (i ^ bit(a)) | bit(b));
                    }
                }
            }
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, p: &PauliString) -> Result<T> {
        self.check_pauli(p)?;
        let act = PauliAction::new(p);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (i, a) in self.amps.iter().enumerate() {
            acc = acc + self.amps[i ^ act.x].conj() * act.phase(i) * a;
        }
        debug_assert!(
            acc.im.abs() <= T::from_f64_lossy(1e-10).max(T::epsilon().sqrt()),
            "Hermitian expectation has imaginary part {:?}",
            acc.im
        );
        Ok(acc.re)
    }

    /// Runs `U(φ)` on a copy of `self`.
    pub fn evolve(
        &self,
        circuit: &CprCircuit,
        point: &ParameterPoint<T>,
    ) -> Result<StateVector<T>> {
        check_size(self.n, circuit.num_qubits())?;
        if point.len() != circuit.num_params() {
            return Err(Error::PointLength {
                got: point.len(),
                expected: circuit.num_params(),
            });
        }
        let mut psi = self.clone();
        for ins in circuit.instructions() {
            match ins {
                Instruction::Gate(g) => psi.apply_gate(g)?,
                Instruction::Rotation { axis, param } => {
                    psi.apply_rotation(axis, point.angles[*param])?
                }
            }
        }
        Ok(psi)
    }
}

fn single(n: usize, q: usize, axis: &str) -> PauliString {
    let mut label = vec![b'I'; n];
    label[q] = axis.as_bytes()[0];
    std::str::from_utf8(&label)
        .expect("ascii")
        .parse()
        .expect("valid label")
}

/// `|ψ⟩` for the state `C|0…0⟩`.
pub fn prepare_stabilizer<T: Real>(tableau: &CliffordTableau) -> Result<StateVector<T>> {
    StateVector::from_stabilizer(&tableau.zero_state_image())
}

/// Gate list `W` (applied left to right) with `W|ψ⟩ = |0…0⟩`, found by
/// Gaussian elimination on the stabilizer generators.
pub fn disentangling_circuit(state: &StabilizerState) -> Vec<CliffordGate> {
    let n = state.num_qubits();
    let mut rows: Vec<PauliString> = state.generators().to_vec();
    let mut gates = Vec::new();
    let mut apply = |g: CliffordGate, rows: &mut Vec<PauliString>| {
        let inv = g.inverse();
        for r in rows.iter_mut() {
            r.conjugate_by_gate_in_place(&inv);
        }
        gates.push(g);
    };

    for i in 0..n {
        let x_pivot = (i..n).find_map(|r| (i..n).find(|&k| rows[r].x_bit(k)).map(|k| (r, k)));
        if let Some((r, k)) = x_pivot {
            rows.swap(i, r);
            if k != i {
                apply(CliffordGate::Swap(i, k), &mut rows);
            }
            for k in i + 1..n {
                if rows[i].x_bit(k) {
                    apply(CliffordGate::CX(i, k), &mut rows);
                }
            }
            for k in i + 1..n {
                if rows[i].z_bit(k) {
                    apply(CliffordGate::CZ(i, k), &mut rows);
                }
            }
            if rows[i].z_bit(i) {
                apply(CliffordGate::S(i), &mut rows);
            }
            apply(CliffordGate::H(i), &mut rows);
        } else {
            let (r, k) = (i..n)
                .find_map(|r| (i..n).find(|&k| rows[r].z_bit(k)).map(|k| (r, k)))
                .expect("independent generators leave a pivot");
            rows.swap(i, r);
            if k != i {
                apply(CliffordGate::Swap(i, k), &mut rows);
            }
            for k in i + 1..n {
                if rows[i].z_bit(k) {
                    apply(CliffordGate::CX(k, i), &mut rows);
                }
            }
        }
        // Row i is now ±Zᵢ; clear Zᵢ from the other rows.
        let pivot = rows[i].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != i && row.z_bit(i) {
                *row = row
                    .multiply(&pivot)
                    .expect("same size")
                    .into_hermitian()
                    .expect("stabilizers commute");
            }
        }
    }
    for (i, row) in rows.clone().iter().enumerate() {
        if row.is_negative() {
            apply(CliffordGate::X(i), &mut rows);
        }
    }
    gates
}

/// Weighted Pauli observable `O = Σ cᵢ Pᵢ` with `Σ cᵢ² ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSum<T> {
    terms: Vec<(T, PauliString)>,
}

impl<T: Real> ObservableSum<T> {
    pub fn new(terms: Vec<(T, PauliString)>) -> Result<Self> {
        if let Some((_, first)) = terms.first() {
            let n = first.num_qubits();
            for (_, p) in &terms {
                check_size(n, p.num_qubits())?;
            }
        }
        let norm = terms.iter().fold(T::zero(), |acc, (c, _)| acc + *c * *c);
        if norm > T::one() + T::epsilon() * T::from_f64_lossy(16.0) {
            return Err(Error::ObservableNorm(format!("{norm:?}")));
        }
        let mut seen = std::collections::HashSet::new();
        for (_, p) in &terms {
            if !seen.insert(p.unsigned()) {
                return Err(Error::DuplicateTerm(p.unsigned_label()));
            }
        }
        Ok(ObservableSum { terms })
    }

    pub fn single(p: PauliString) -> Self {
        ObservableSum {
            terms: vec![(T::one(), p)],
        }
    }

    pub fn terms(&self) -> &[(T, PauliString)] {
        &self.terms
    }

    pub fn expectation(&self, psi: &StateVector<T>) -> Result<T> {
        self.terms
            .iter()
            .try_fold(T::zero(), |acc, (c, p)| Ok(acc + *c * psi.expectation(p)?))
    }
}

/// `L(φ) = Σᵢ cᵢ ⟨ψ(φ)|Pᵢ|ψ(φ)⟩` with `ψ(φ) = U(φ)·init`.
pub fn evaluate_loss<T: Real>(
    circuit: &CprCircuit,
    point: &ParameterPoint<T>,
    obs: &ObservableSum<T>,
    init: &StateVector<T>,
) -> Result<T> {
    obs.expectation(&init.evolve(circuit, point)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::master_rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn zero_state_basics() {
        let s = StateVector::<f64>::zero_state(1).unwrap();
        assert_eq!(
            s.amplitudes(),
            &[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]
        );
        let s3 = StateVector::<f64>::zero_state(3).unwrap();
        assert_eq!(s3.norm_sqr(), 1.0);
        assert_eq!(s3.expectation(&p("ZZZ")).unwrap(), 1.0);
        assert_eq!(s3.expectation(&p("XII")).unwrap(), 0.0);
        assert!(StateVector::<f64>::zero_state(25).is_err());
        assert!(StateVector::<f64>::zero_state_with_cap(5, 4).is_err());
    }

    #[test]
    fn rotation_examples() {
        let mut s = StateVector::<f64>::zero_state(1).unwrap();
        s.apply_rotation(&p("X"), std::f64::consts::PI).unwrap();
        assert!((s.amplitudes()[1] - Complex::new(0.0, -1.0)).norm() < 1e-15);
        assert!((s.expectation(&p("Z")).unwrap() + 1.0).abs() < 1e-15);
        let mut t = StateVector::<f64>::zero_state(2).unwrap();
        t.apply_gate(&CliffordGate::H(0)).unwrap();
        let before = t.clone();
        t.apply_rotation(&p("YX"), 0.0).unwrap();
        assert_eq!(t, before);
        for phi in [0.3, 1.1, 2.7] {
            let mut s = StateVector::<f64>::zero_state(1).unwrap();
            s.apply_rotation(&p("X"), phi).unwrap();
            assert!((s.expectation(&p("Z")).unwrap() - phi.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn single_precision_instance() {
        let mut s = StateVector::<f32>::zero_state(2).unwrap();
        s.apply_rotation(&p("XZ"), 0.7).unwrap();
        let e = s.expectation(&p("ZZ")).unwrap();
        assert!((e - 0.7f32.cos()).abs() < 1e-6);
    }

    #[test]
    fn loss_examples() {
        let mut c = CprCircuit::new(1);
        c.push_rotation(p("X")).unwrap();
        let init = StateVector::<f64>::zero_state(1).unwrap();
        let obs = ObservableSum::single(p("Z"));
        let l = evaluate_loss(
            &c,
            &ParameterPoint::new(vec![std::f64::consts::FRAC_PI_2]),
            &obs,
            &init,
        )
        .unwrap();
        assert!(l.abs() < 1e-12);
        assert!(evaluate_loss(&c, &ParameterPoint::new(vec![]), &obs, &init).is_err());
    }

    #[test]
    fn observable_sum_contract() {
        assert!(ObservableSum::new(vec![(0.6, p("ZI")), (0.8, p("IZ"))]).is_ok());
        assert!(matches!(
            ObservableSum::new(vec![(0.9, p("ZI")), (0.9, p("IZ"))]),
            Err(Error::ObservableNorm(_))
        ));
        assert!(matches!(
            ObservableSum::new(vec![(0.5, p("ZI")), (0.5, p("-ZI"))]),
            Err(Error::DuplicateTerm(_))
        ));
        assert!(ObservableSum::new(vec![(0.5, p("ZI")), (0.5, p("Z"))]).is_err());
    }

    #[test]
    fn prepared_bell_state() {
        let t =
            CliffordTableau::from_gates(2, &[CliffordGate::H(0), CliffordGate::CX(0, 1)]).unwrap();
        let psi = prepare_stabilizer::<f64>(&t).unwrap();
        assert!((psi.expectation(&p("XX")).unwrap() - 1.0).abs() < 1e-12);
        assert!((psi.expectation(&p("ZZ")).unwrap() - 1.0).abs() < 1e-12);
        let id = prepare_stabilizer::<f64>(&CliffordTableau::identity(3)).unwrap();
        assert_eq!(id, StateVector::zero_state(3).unwrap());
    }

    #[test]
    fn norm_survives_long_sequences() {
        let mut rng = master_rng(8);
        let mut s = StateVector::<f64>::zero_state(4).unwrap();
        for step in 0..10_000 {
            let axis = PauliString::random(4, &mut rng, false);
            s.apply_rotation(&axis, 0.37 * step as f64).unwrap();
            s.apply_gate(&CliffordGate::H(step % 4)).unwrap();
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-8);
    }
}
