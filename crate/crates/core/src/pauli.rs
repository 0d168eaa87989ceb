//! Signed Pauli strings on packed bit masks.
//!
//! A [`PauliString`] stores the symplectic `(x, z)` representation of a
//! Hermitian Pauli operator `±σ(x₀,z₀) ⊗ … ⊗ σ(xₙ₋₁,zₙ₋₁)` with
//! `σ(0,0)=I`, `σ(1,0)=X`, `σ(1,1)=Y`, `σ(0,1)=Z`. Qubit `q` lives in bit
//! `q % 64` of word `q / 64`, so propagation through Clifford gates touches
//! at most two words and commutation checks are word-parallel.
//!
//! Phases other than `±1` only appear in [`PhasedProduct`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{check_size, Error, Result};
use crate::gate::CliffordGate;

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD).max(1)
}

fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    pub const NON_IDENTITY: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn bits(self) -> (bool, bool) {
        match self {
            Axis::I => (false, false),
            Axis::X => (true, false),
            Axis::Y => (true, true),
            Axis::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Axis {
        match (x, z) {
            (false, false) => Axis::I,
            (true, false) => Axis::X,
            (true, true) => Axis::Y,
            (false, true) => Axis::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Axis::I => 'I',
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

/// Hermitian Pauli operator with a `±1` sign.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    negative: bool,
}

/// Operator product `i^i_power · pauli`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasedProduct {
    pub pauli: PauliString,
    pub i_power: u8,
}

impl PhasedProduct {
    /// Folds the phase into the sign when it is real, returning `None` for
    /// an anti-Hermitian (`±i`) product.
    pub fn into_hermitian(self) -> Option<PauliString> {
        match self.i_power % 4 {
            0 => Some(self.pauli),
            2 => Some(self.pauli.negated()),
            _ => None,
        }
    }

    /// `self · rhs` with phases accumulated.
    pub fn then(&self, rhs: &PhasedProduct) -> Result<PhasedProduct> {
        let mut p = self.pauli.multiply(&rhs.pauli)?;
        p.i_power = (p.i_power + self.i_power + rhs.i_power) % 4;
        Ok(p)
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
            negative: false,
        }
    }

    /// Builds a string from per-qubit axes, qubit 0 first.
    pub fn from_axes(axes: &[Axis], negative: bool) -> Self {
        let mut p = PauliString::identity(axes.len());
        for (q, a) in axes.iter().enumerate() {
            p.set_axis(q, *a);
        }
        p.negative = negative;
        p
    }

    /// A single non-trivial factor on qubit `q`.
    pub fn single(n: usize, q: usize, axis: Axis) -> Result<Self> {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        let mut p = PauliString::identity(n);
        p.set_axis(q, axis);
        Ok(p)
    }

    /// Builds a string on at most 64 qubits from raw masks.
    pub fn from_masks(n: usize, x_mask: u64, z_mask: u64, negative: bool) -> Result<Self> {
        if n > WORD {
            return Err(Error::InvalidArgument(format!(
                "from_masks supports n <= 64, got {n}"
            )));
        }
        let keep = if n == WORD { u64::MAX } else { (1u64 << n) - 1 };
        if x_mask & !keep != 0 || z_mask & !keep != 0 {
            return Err(Error::InvalidArgument("mask has bits beyond n".into()));
        }
        Ok(PauliString {
            n,
            x: vec![x_mask],
            z: vec![z_mask],
            negative,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / WORD] >> (q % WORD)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / WORD] >> (q % WORD)) & 1 == 1
    }

    pub fn axis(&self, q: usize) -> Axis {
        Axis::from_bits(self.x_bit(q), self.z_bit(q))
    }

    fn set_bits(&mut self, q: usize, x: bool, z: bool) {
        let (w, b) = (q / WORD, q % WORD);
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    pub fn set_axis(&mut self, q: usize, axis: Axis) {
        let (x, z) = axis.bits();
        self.set_bits(q, x, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// True when the string has no X or Y factor.
    pub fn is_z_type(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> u32 {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones())
            .sum()
    }

    /// Same operator with the sign dropped.
    pub fn unsigned(&self) -> PauliString {
        PauliString {
            negative: false,
            ..self.clone()
        }
    }

    pub fn negated(mut self) -> PauliString {
        self.negative = !self.negative;
        self
    }

    pub fn negate(&mut self) {
        self.negative = !self.negative;
    }

    /// Label without the sign prefix.
    pub fn unsigned_label(&self) -> String {
        (0..self.n).map(|q| self.axis(q).symbol()).collect()
    }

    /// Exact operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PhasedProduct> {
        check_size(self.n, other.n)?;
        Ok(self.multiply_unchecked(other))
    }

    pub(crate) fn multiply_unchecked(&self, other: &PauliString) -> PhasedProduct {
        let x: Vec<u64> = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z: Vec<u64> = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        // σ(x,z) = i^{|x∧z|} XˣZᶻ and ZᶻXˣ' = (-1)^{|z∧x'|} Xˣ'Zᶻ.
        let phase = popcount_and(&self.x, &self.z)
            + popcount_and(&other.x, &other.z)
            + 2 * popcount_and(&self.z, &other.x)
            + 3 * popcount_and(&x, &z);
        PhasedProduct {
            pauli: PauliString {
                n: self.n,
                x,
                z,
                negative: self.negative ^ other.negative,
            },
            i_power: (phase % 4) as u8,
        }
    }

    /// Whether the two operators commute; signs are irrelevant.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        check_size(self.n, other.n)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        let s = popcount_and(&self.x, &other.z) + popcount_and(&other.x, &self.z);
        s % 2 == 0
    }

    /// `⟨0…0|P|0…0⟩`: the sign for Z-type strings, otherwise zero.
    pub fn expectation_in_zero(&self) -> i8 {
        if self.is_z_type() {
            self.sign()
        } else {
            0
        }
    }

    /// Uniform Pauli with `+` sign over all `4ⁿ` strings, or the `4ⁿ − 1`
    /// non-identity ones.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R, include_identity: bool) -> Self {
        assert!(n >= 1, "random Pauli needs at least one qubit");
        let w = words_for(n);
        let tail = n % WORD;
        let last_mask = if tail == 0 {
            u64::MAX
        } else {
            (1u64 << tail) - 1
        };
        loop {
            let mut x: Vec<u64> = (0..w).map(|_| rng.gen()).collect();
            let mut z: Vec<u64> = (0..w).map(|_| rng.gen()).collect();
            x[w - 1] &= last_mask;
            z[w - 1] &= last_mask;
            let p = PauliString {
                n,
                x,
                z,
                negative: false,
            };
            if include_identity || !p.is_identity() {
                return p;
            }
        }
    }

    /// Returns `G† P G`.
    pub fn conjugate_by_gate(&self, gate: &CliffordGate) -> Result<PauliString> {
        gate.check(self.n)?;
        let mut p = self.clone();
        p.conjugate_by_gate_in_place(gate);
        Ok(p)
    }

    /// In-place `P ← G† P G`; operands must already be checked.
    pub fn conjugate_by_gate_in_place(&mut self, gate: &CliffordGate) {
        match *gate {
            CliffordGate::H(q) => {
                let (x, z) = (self.x_bit(q), self.z_bit(q));
                self.negative ^= x & z;
                self.set_bits(q, z, x);
            }
            CliffordGate::S(q) => {
                // S†XS = -Y, S†YS = X
                let (x, z) = (self.x_bit(q), self.z_bit(q));
                self.negative ^= x & !z;
                self.set_bits(q, x, z ^ x);
            }
            CliffordGate::Sdg(q) => {
                // SXS† = Y, SYS† = -X
                let (x, z) = (self.x_bit(q), self.z_bit(q));
                self.negative ^= x & z;
                self.set_bits(q, x, z ^ x);
            }
            CliffordGate::X(q) => self.negative ^= self.z_bit(q),
            CliffordGate::Y(q) => self.negative ^= self.x_bit(q) ^ self.z_bit(q),
            CliffordGate::Z(q) => self.negative ^= self.x_bit(q),
            CliffordGate::CX(c, t) => {
                let (xc, zc, xt, zt) = (self.x_bit(c), self.z_bit(c), self.x_bit(t), self.z_bit(t));
                self.negative ^= xc & zt & !(xt ^ zc);
                self.set_bits(c, xc, zc ^ zt);
                self.set_bits(t, xt ^ xc, zt);
            }
            CliffordGate::CZ(a, b) => {
                let (xa, za, xb, zb) = (self.x_bit(a), self.z_bit(a), self.x_bit(b), self.z_bit(b));
                self.negative ^= xa & xb & (za ^ zb);
                self.set_bits(a, xa, za ^ xb);
                self.set_bits(b, xb, zb ^ xa);
            }
            CliffordGate::Swap(a, b) => {
                let (xa, za, xb, zb) = (self.x_bit(a), self.z_bit(a), self.x_bit(b), self.z_bit(b));
                self.set_bits(a, xb, zb);
                self.set_bits(b, xa, za);
            }
        }
    }

    /// Heisenberg image `e^{iφA/2} Q e^{-iφA/2}` at `φ = kπ/2`, where `A` is
    /// the rotation axis and `Q = self`.
    pub fn conjugate_by_quarter_rotation(&self, axis: &PauliString, k: u8) -> Result<PauliString> {
        check_size(self.n, axis.n)?;
        if axis.is_identity() {
            return Err(Error::IdentityAxis);
        }
        let mut q = self.clone();
        q.rotate_quarter_in_place(axis, k);
        Ok(q)
    }

    /// In-place form of [`Self::conjugate_by_quarter_rotation`]; sizes must match.
    pub fn rotate_quarter_in_place(&mut self, axis: &PauliString, k: u8) {
        let k = k % 4;
        if k == 0 || self.commutes_unchecked(axis) {
            return;
        }
        if k == 2 {
            self.negative = !self.negative;
            return;
        }
        // k = 1 gives iAQ, k = 3 gives -iAQ; both are Hermitian here.
        let before = popcount_and(&axis.x, &axis.z)
            + popcount_and(&self.x, &self.z)
            + 2 * popcount_and(&axis.z, &self.x);
        for (a, b) in self.x.iter_mut().zip(&axis.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&axis.z) {
            *a ^= b;
        }
        let after = popcount_and(&self.x, &self.z);
        let extra = if k == 1 { 1 } else { 3 };
        let phase = (before + 3 * after + extra) % 4;
        debug_assert!(phase % 2 == 0);
        self.negative ^= axis.negative ^ (phase == 2);
    }
}

/// Every `{X,Y,Z}ᵢ ⊗ {X,Y,Z}ᵢ₊₁` on an open chain, pair-major.
pub fn two_body_nn_paulis(n: usize) -> Result<Vec<PauliString>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "two-body terms need n >= 2, got {n}"
        )));
    }
    let mut out = Vec::with_capacity(9 * (n - 1));
    for i in 0..n - 1 {
        for a in Axis::NON_IDENTITY {
            for b in Axis::NON_IDENTITY {
                let mut p = PauliString::identity(n);
                p.set_axis(i, a);
                p.set_axis(i + 1, b);
                out.push(p);
            }
        }
    }
    Ok(out)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            if self.negative { '-' } else { '+' },
            self.unsigned_label()
        )
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `[+|-]` followed by characters from `IXYZ`; qubit 0 is leftmost.
    fn from_str(label: &str) -> Result<Self> {
        let (negative, body) = match label.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, label.strip_prefix('+').unwrap_or(label)),
        };
        if body.is_empty() {
            return Err(Error::EmptyLabel);
        }
        let axes = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Axis::I),
                'X' => Ok(Axis::X),
                'Y' => Ok(Axis::Y),
                'Z' => Ok(Axis::Z),
                other => Err(Error::UnknownPauliChar(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_axes(&axes, negative))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::master_rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn label_encoding() {
        let zz = p("+ZZ");
        assert_eq!(
            (zz.x_words()[0], zz.z_words()[0], zz.sign()),
            (0b00, 0b11, 1)
        );
        let y = p("-Y");
        assert_eq!((y.x_words()[0], y.z_words()[0], y.sign()), (1, 1, -1));
        assert_eq!(
            "XQ".parse::<PauliString>(),
            Err(Error::UnknownPauliChar('Q'))
        );
        assert_eq!("-".parse::<PauliString>(), Err(Error::EmptyLabel));
        assert_eq!(p("XIZ").to_string(), "+XIZ");
    }

    #[test]
    fn products_carry_phase() {
        let xz = p("X").multiply(&p("Z")).unwrap();
        assert_eq!((xz.pauli.clone(), xz.i_power), (p("Y"), 3));
        let zx = p("Z").multiply(&p("X")).unwrap();
        assert_eq!((zx.pauli.clone(), zx.i_power), (p("Y"), 1));
        for s in ["-XYZ", "YY", "-IZI"] {
            let sq = p(s).multiply(&p(s)).unwrap();
            assert!(sq.pauli.is_identity());
            assert_eq!((sq.i_power, sq.pauli.sign()), (0, 1));
        }
        assert!(p("XX").multiply(&p("X")).is_err());
    }

    #[test]
    fn commutation_table() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("ZZ").commutes(&p("XX")).unwrap());
        assert!(p("-XYZ").commutes(&p("III")).unwrap());
    }

    #[test]
    fn zero_state_expectations() {
        assert_eq!(p("ZZ").expectation_in_zero(), 1);
        assert_eq!(p("XI").expectation_in_zero(), 0);
        assert_eq!(p("-ZI").expectation_in_zero(), -1);
    }

    #[test]
    fn quarter_rotation_examples() {
        let z = p("Z");
        assert_eq!(
            z.conjugate_by_quarter_rotation(&p("X"), 1).unwrap(),
            p("+Y")
        );
        assert_eq!(
            z.conjugate_by_quarter_rotation(&p("X"), 2).unwrap(),
            p("-Z")
        );
        for k in 0..4 {
            assert_eq!(z.conjugate_by_quarter_rotation(&p("Z"), k).unwrap(), z);
        }
        assert_eq!(
            z.conjugate_by_quarter_rotation(&p("I"), 1),
            Err(Error::IdentityAxis)
        );
    }

    #[test]
    fn gate_conjugation_examples() {
        assert_eq!(
            p("Z").conjugate_by_gate(&CliffordGate::H(0)).unwrap(),
            p("X")
        );
        assert_eq!(
            p("XI").conjugate_by_gate(&CliffordGate::CX(0, 1)).unwrap(),
            p("XX")
        );
        assert!(p("XI").conjugate_by_gate(&CliffordGate::H(2)).is_err());
    }

    #[test]
    fn nn_terms() {
        assert_eq!(two_body_nn_paulis(2).unwrap().len(), 9);
        let t4 = two_body_nn_paulis(4).unwrap();
        assert_eq!(t4.len(), 27);
        assert_eq!(t4[0], p("XXII"));
        let t10 = two_body_nn_paulis(10).unwrap();
        assert_eq!(t10.len(), 81);
        let set: std::collections::HashSet<_> = t10.iter().collect();
        assert_eq!(set.len(), 81);
        assert!(two_body_nn_paulis(1).is_err());
    }

    #[test]
    fn random_excluding_identity() {
        let mut rng = master_rng(5);
        for _ in 0..2000 {
            assert!(!PauliString::random(1, &mut rng, false).is_identity());
        }
    }

    #[test]
    fn wide_strings_span_words() {
        let mut a = PauliString::identity(130);
        a.set_axis(0, Axis::X);
        a.set_axis(129, Axis::Z);
        let mut b = PauliString::identity(130);
        b.set_axis(129, Axis::X);
        assert!(!a.commutes(&b).unwrap());
        let label = a.to_string();
        assert_eq!(label.parse::<PauliString>().unwrap(), a);
        a.conjugate_by_gate_in_place(&CliffordGate::CX(0, 129));
        assert_eq!(a.axis(129), Axis::Y);
    }
}
