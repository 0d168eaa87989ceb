//! Clifford tableaux and pure stabilizer states.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rand::Rng;

use crate::error::{check_size, Error, Result};
use crate::gate::CliffordGate;
use crate::pauli::{PauliString, PhasedProduct};

/// Largest qubit count accepted by [`enumerate_stabilizer_states`].
pub const ENUMERATION_MAX_QUBITS: usize = 3;

/// A Clifford unitary `C` stored as the images `C Xⱼ C†` and `C Zⱼ C†`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    n: usize,
    // X images for qubits 0..n, then Z images.
    images: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        let mut images = Vec::with_capacity(2 * n);
        for q in 0..n {
            images.push(PauliString::single(n, q, crate::pauli::Axis::X).expect("q < n"));
        }
        for q in 0..n {
            images.push(PauliString::single(n, q, crate::pauli::Axis::Z).expect("q < n"));
        }
        CliffordTableau { n, images }
    }

    /// Tableau of the circuit that applies `gates` left to right.
    pub fn from_gates(n: usize, gates: &[CliffordGate]) -> Result<Self> {
        let mut t = CliffordTableau::identity(n);
        for g in gates {
            t.apply_gate(g)?;
        }
        Ok(t)
    }

    /// Builds a tableau from explicit generator images, checking the
    /// symplectic relations.
    pub fn from_images(images: Vec<PauliString>) -> Result<Self> {
        if images.len() % 2 != 0 || images.is_empty() {
            return Err(Error::InvalidArgument("tableau needs 2n images".into()));
        }
        let n = images.len() / 2;
        for p in &images {
            check_size(n, p.num_qubits())?;
        }
        let t = CliffordTableau { n, images };
        if !t.is_symplectic() {
            return Err(Error::InvalidArgument(
                "images violate the symplectic relations".into(),
            ));
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.images[self.n + q]
    }

    pub fn images(&self) -> &[PauliString] {
        &self.images
    }

    /// Appends `gate` after the current Clifford.
    pub fn apply_gate(&mut self, gate: &CliffordGate) -> Result<()> {
        gate.check(self.n)?;
        // G P G† is the Heisenberg update of the inverse gate.
        let inv = gate.inverse();
        for p in &mut self.images {
            p.conjugate_by_gate_in_place(&inv);
        }
        Ok(())
    }

    /// `C P C†`.
    pub fn conjugate_pauli(&self, p: &PauliString) -> Result<PauliString> {
        check_size(self.n, p.num_qubits())?;
        Ok(self.conjugate_unchecked(p))
    }

    fn conjugate_unchecked(&self, p: &PauliString) -> PauliString {
        let n = self.n;
        // P = ±i^{|x∧z|} XˣZᶻ; images of the X and Z factors multiply in order.
        let y_count = (0..n).filter(|&q| p.x_bit(q) && p.z_bit(q)).count();
        let mut acc = PhasedProduct {
            pauli: PauliString::identity(n),
            i_power: (y_count % 4) as u8,
        };
        if p.is_negative() {
            acc.pauli.negate();
        }
        for q in 0..n {
            if p.x_bit(q) {
                acc = accumulate(acc, &self.images[q]);
            }
        }
        for q in 0..n {
            if p.z_bit(q) {
                acc = accumulate(acc, &self.images[n + q]);
            }
        }
        acc.into_hermitian()
            .expect("Clifford image of a Hermitian Pauli is Hermitian")
    }

    /// Tableau of `self` followed by `after`.
    pub fn then(&self, after: &CliffordTableau) -> Result<CliffordTableau> {
        check_size(self.n, after.n)?;
        Ok(CliffordTableau {
            n: self.n,
            images: self
                .images
                .iter()
                .map(|p| after.conjugate_unchecked(p))
                .collect(),
        })
    }

    pub fn inverse(&self) -> CliffordTableau {
        let n = self.n;
        // Unsigned part: M⁻¹ = Ω Mᵀ Ω, i.e. row i of the inverse has bit j
        // equal to bit σ(i) of row σ(j), σ swapping the X and Z halves.
        let col_bit = |row: &PauliString, c: usize| {
            if c < n {
                row.x_bit(c)
            } else {
                row.z_bit(c - n)
            }
        };
        let swap = |i: usize| if i < n { i + n } else { i - n };
        let mut images = Vec::with_capacity(2 * n);
        for i in 0..2 * n {
            let mut cand = PauliString::identity(n);
            for j in 0..2 * n {
                if col_bit(&self.images[swap(j)], swap(i)) {
                    let q = j % n;
                    let (x, z) = (cand.x_bit(q), cand.z_bit(q));
                    let (nx, nz) = if j < n { (!x, z) } else { (x, !z) };
                    cand.set_axis(q, crate::pauli::Axis::from_bits(nx, nz));
                }
            }
            // Fix the sign so that C(cand) = +generator.
            let forward = self.conjugate_unchecked(&cand);
            if forward.is_negative() {
                cand.negate();
            }
            images.push(cand);
        }
        CliffordTableau { n, images }
    }

    /// Checks that the images obey the Pauli group commutation relations.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        for i in 0..2 * n {
            for j in 0..2 * n {
                let should_anticommute = i != j && i % n == j % n;
                if self.images[i].commutes_unchecked(&self.images[j]) == should_anticommute {
                    return false;
                }
            }
        }
        true
    }

    /// Uniformly random Clifford (modulo global phase), via the
    /// Bravyi–Maslov canonical form.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "random Clifford needs at least one qubit");
        let (had, perm) = sample_quantum_mallows(n, rng);

        let gamma1 = random_symmetric(n, rng);
        let gamma2 = random_symmetric(n, rng);
        let delta1 = random_unit_lower(n, rng);
        let delta2 = random_unit_lower(n, rng);

        let table1 = block_tableau(&delta1, &gamma1);
        let table2 = block_tableau(&delta2, &gamma2);

        let mut table = vec![vec![false; 2 * n]; 2 * n];
        for i in 0..n {
            table[i] = table2[perm[i]].clone();
            table[n + i] = table2[n + perm[i]].clone();
        }
        for (i, &h) in had.iter().enumerate() {
            if h {
                table.swap(i, n + i);
            }
        }
        let sym = mat_mul(&table1, &table);

        let images = sym
            .iter()
            .map(|row| {
                let mut p = PauliString::identity(n);
                for q in 0..n {
                    p.set_axis(q, crate::pauli::Axis::from_bits(row[q], row[n + q]));
                }
                if rng.gen::<bool>() {
                    p.negate();
                }
                p
            })
            .collect();
        CliffordTableau { n, images }
    }

    /// State `C|0…0⟩`.
    pub fn zero_state_image(&self) -> StabilizerState {
        StabilizerState::from_generators(self.images[self.n..].to_vec())
            .expect("images of Z generators form a stabilizer group")
    }

    /// 2n signed labels, one per line: X images then Z images.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for p in &self.images {
            s.push_str(&p.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse_dump(text: &str) -> Result<Self> {
        let images = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<PauliString>>>()?;
        CliffordTableau::from_images(images)
    }
}

impl fmt::Debug for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.images.iter().map(|p| p.to_string()))
            .finish()
    }
}

fn accumulate(acc: PhasedProduct, rhs: &PauliString) -> PhasedProduct {
    let mut prod = acc.pauli.multiply_unchecked(rhs);
    prod.i_power = (prod.i_power + acc.i_power) % 4;
    prod
}

fn sample_quantum_mallows<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<bool>, Vec<usize>) {
    let mut had = vec![false; n];
    let mut perm = vec![0; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let m = n - i;
        let eps = 4f64.powi(-(m as i32));
        let r: f64 = rng.gen();
        let index = (-(r + (1.0 - r) * eps).log2().ceil()) as usize;
        // r = 0 would land exactly on 2m.
        let index = index.min(2 * m - 1);
        had[i] = index < m;
        let k = if index < m { index } else { 2 * m - index - 1 };
        perm[i] = remaining.remove(k);
    }
    (had, perm)
}

type BitMatrix = Vec<Vec<bool>>;

fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = rng.gen();
    }
    for i in 0..n {
        for j in 0..i {
            let b = rng.gen();
            m[i][j] = b;
            m[j][i] = b;
        }
    }
    m
}

fn random_unit_lower<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        m[i][i] = true;
        for j in 0..i {
            m[i][j] = rng.gen();
        }
    }
    m
}

fn mat_mul(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let (rows, inner, cols) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![false; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k] {
                for j in 0..cols {
                    out[i][j] ^= b[k][j];
                }
            }
        }
    }
    out
}

/// Inverse of a unit lower-triangular matrix over GF(2).
fn inverse_unit_lower(m: &BitMatrix) -> BitMatrix {
    let n = m.len();
    let mut inv = vec![vec![false; n]; n];
    for col in 0..n {
        for i in 0..n {
            let mut v = i == col;
            for k in 0..i {
                v ^= m[i][k] & inv[k][col];
            }
            inv[i][col] = v;
        }
    }
    inv
}

/// `[[Δ, 0], [ΓΔ, (Δ⁻¹)ᵀ]]`.
fn block_tableau(delta: &BitMatrix, gamma: &BitMatrix) -> BitMatrix {
    let n = delta.len();
    let prod = mat_mul(gamma, delta);
    let inv = inverse_unit_lower(delta);
    let mut t = vec![vec![false; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            t[i][j] = delta[i][j];
            t[n + i][j] = prod[i][j];
            t[n + i][n + j] = inv[j][i];
        }
    }
    t
}

/// Pure stabilizer state given by `n` independent commuting generators.
///
/// Generators are kept in reduced row-echelon form over the column order
/// `x₀…xₙ₋₁ z₀…zₙ₋₁`, which is unique for a given state; equality and
/// hashing therefore compare states, not generating sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StabilizerState {
    n: usize,
    generators: Vec<PauliString>,
    pivots: Vec<usize>,
}

impl StabilizerState {
    /// `|0…0⟩`, stabilized by `+Z₀ … +Zₙ₋₁`.
    pub fn zero(n: usize) -> Self {
        CliffordTableau::identity(n).zero_state_image()
    }

    pub fn from_generators(generators: Vec<PauliString>) -> Result<Self> {
        let n = generators.len();
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one generator".into()));
        }
        for g in &generators {
            check_size(n, g.num_qubits())?;
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes_unchecked(b) {
                    return Err(Error::InvalidArgument(format!(
                        "generators {a} and {b} anticommute"
                    )));
                }
            }
        }
        let (rows, pivots) = row_reduce(generators);
        if rows.len() != n {
            return Err(Error::InvalidArgument(
                "generators are not independent".into(),
            ));
        }
        if rows.iter().any(|g| g.is_identity()) {
            return Err(Error::InvalidArgument("-I in the stabilizer group".into()));
        }
        Ok(StabilizerState {
            n,
            generators: rows,
            pivots,
        })
    }

    /// Uniformly random stabilizer state `C|0…0⟩`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        CliffordTableau::random(n, rng).zero_state_image()
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// `Tr(ρP)` in `{-1, 0, +1}`.
    pub fn expectation(&self, p: &PauliString) -> Result<i8> {
        check_size(self.n, p.num_qubits())?;
        Ok(self.expectation_unchecked(p))
    }

    pub(crate) fn expectation_unchecked(&self, p: &PauliString) -> i8 {
        if p.is_z_type() && self.is_zero_state() {
            return p.expectation_in_zero();
        }
        let mut residual = PhasedProduct {
            pauli: p.clone(),
            i_power: 0,
        };
        for (g, &col) in self.generators.iter().zip(&self.pivots) {
            if column_bit(&residual.pauli, col, self.n) {
                residual = accumulate(residual, g);
            }
        }
        if !residual.pauli.is_identity() {
            return 0;
        }
        // P·G = c·I with G in the stabilizer group, so ⟨P⟩ = c.
        match residual.into_hermitian() {
            Some(id) => id.sign(),
            None => unreachable!("product of commuting Hermitian Paulis is Hermitian"),
        }
    }

    fn is_zero_state(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(q, g)| !g.is_negative() && g.is_z_type() && g.weight() == 1 && g.z_bit(q))
    }

    /// State `G|ψ⟩`.
    pub fn apply_gate(&self, gate: &CliffordGate) -> Result<StabilizerState> {
        gate.check(self.n)?;
        let inv = gate.inverse();
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g.conjugate_by_gate_in_place(&inv);
                g
            })
            .collect();
        StabilizerState::from_generators(gens)
    }
}

impl fmt::Debug for StabilizerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.generators.iter().map(|p| p.to_string()))
            .finish()
    }
}

fn column_bit(p: &PauliString, col: usize, n: usize) -> bool {
    if col < n {
        p.x_bit(col)
    } else {
        p.z_bit(col - n)
    }
}

fn row_reduce(mut rows: Vec<PauliString>) -> (Vec<PauliString>, Vec<usize>) {
    let n = rows[0].num_qubits();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..2 * n {
        let Some(found) = (next..rows.len()).find(|&r| column_bit(&rows[r], col, n)) else {
            continue;
        };
        rows.swap(next, found);
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && column_bit(row, col, n) {
                *row = row
                    .multiply_unchecked(&pivot)
                    .into_hermitian()
                    .expect("commuting rows multiply to a Hermitian Pauli");
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    (rows, pivots)
}

/// Closed-form number of `n`-qubit stabilizer states, `2ⁿ ∏ₖ (2ᵏ + 1)`.
pub fn stabilizer_state_count(n: u32) -> u128 {
    (1..=n).fold(1u128 << n, |acc, k| acc * ((1u128 << k) + 1))
}

/// Every `n`-qubit stabilizer state exactly once, found by breadth-first
/// closure of `|0…0⟩` under `H`, `S` and `CX`.
pub fn enumerate_stabilizer_states(n: usize) -> Result<Vec<StabilizerState>> {
    if n == 0 || n > ENUMERATION_MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "enumeration supports 1 <= n <= {ENUMERATION_MAX_QUBITS}, got {n}"
        )));
    }
    let mut gates = Vec::new();
    for q in 0..n {
        gates.push(CliffordGate::H(q));
        gates.push(CliffordGate::S(q));
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                gates.push(CliffordGate::CX(a, b));
            }
        }
    }
    let start = StabilizerState::zero(n);
    let mut seen = HashSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for g in &gates {
            let next = s.apply_gate(g)?;
            if seen.insert(next.clone()) {
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::master_rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn identity_and_gate_tableaux() {
        let id = CliffordTableau::identity(2);
        assert_eq!(id.conjugate_pauli(&p("-XY")).unwrap(), p("-XY"));
        let h = CliffordTableau::from_gates(1, &[CliffordGate::H(0)]).unwrap();
        assert_eq!(h.conjugate_pauli(&p("Z")).unwrap(), p("X"));
        assert_eq!(h.conjugate_pauli(&p("X")).unwrap(), p("Z"));
        let bell =
            CliffordTableau::from_gates(2, &[CliffordGate::H(0), CliffordGate::CX(0, 1)]).unwrap();
        assert_eq!(bell.conjugate_pauli(&p("ZI")).unwrap(), p("XX"));
        assert_eq!(CliffordTableau::from_gates(2, &[]).unwrap(), id);
        assert!(CliffordTableau::from_gates(2, &[CliffordGate::H(2)]).is_err());
    }

    #[test]
    fn zero_state_generators() {
        let z = StabilizerState::zero(3);
        let labels: Vec<_> = z.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(labels, ["+ZII", "+IZI", "+IIZ"]);
    }

    #[test]
    fn expectations() {
        let z = StabilizerState::zero(2);
        assert_eq!(z.expectation(&p("ZZ")).unwrap(), 1);
        assert_eq!(z.expectation(&p("XI")).unwrap(), 0);
        let bell = StabilizerState::from_generators(vec![p("XX"), p("ZZ")]).unwrap();
        assert_eq!(bell.expectation(&p("YY")).unwrap(), -1);
        assert_eq!(bell.expectation(&p("-YY")).unwrap(), 1);
        assert_eq!(bell.expectation(&p("ZI")).unwrap(), 0);
        assert!(bell.expectation(&p("Z")).is_err());
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(StabilizerState::from_generators(vec![p("XI"), p("ZI")]).is_err());
        assert!(StabilizerState::from_generators(vec![p("ZZ"), p("ZZ")]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        for (n, expected) in [(1, 6), (2, 60), (3, 1080)] {
            let states = enumerate_stabilizer_states(n).unwrap();
            assert_eq!(states.len(), expected);
            assert_eq!(stabilizer_state_count(n as u32), expected as u128);
        }
        assert!(enumerate_stabilizer_states(4).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = master_rng(11);
        for n in 1..=4 {
            for _ in 0..50 {
                let t = CliffordTableau::random(n, &mut rng);
                assert!(t.is_symplectic());
                let id = t.then(&t.inverse()).unwrap();
                assert_eq!(id, CliffordTableau::identity(n));
                assert_eq!(t.inverse().then(&t).unwrap(), CliffordTableau::identity(n));
            }
        }
    }

    #[test]
    fn dump_round_trip() {
        let t = CliffordTableau::random(3, &mut master_rng(2));
        assert_eq!(CliffordTableau::parse_dump(&t.dump()).unwrap(), t);
        assert!(CliffordTableau::parse_dump("+X\n+X\n").is_err());
    }
}
