//! The fixed Clifford gate set.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A named Clifford gate with its qubit operands.
///
/// Two-qubit gates list the control (or first) qubit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    CX(usize, usize),
    CZ(usize, usize),
    Swap(usize, usize),
}

impl CliffordGate {
    pub fn name(&self) -> &'static str {
        match self {
            CliffordGate::H(_) => "H",
            CliffordGate::S(_) => "S",
            CliffordGate::Sdg(_) => "SDG",
            CliffordGate::X(_) => "X",
            CliffordGate::Y(_) => "Y",
            CliffordGate::Z(_) => "Z",
            CliffordGate::CX(..) => "CX",
            CliffordGate::CZ(..) => "CZ",
            CliffordGate::Swap(..) => "SWAP",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::H(q)
            | CliffordGate::S(q)
            | CliffordGate::Sdg(q)
            | CliffordGate::X(q)
            | CliffordGate::Y(q)
            | CliffordGate::Z(q) => vec![q],
            CliffordGate::CX(a, b) | CliffordGate::CZ(a, b) | CliffordGate::Swap(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn inverse(&self) -> CliffordGate {
        match *self {
            CliffordGate::S(q) => CliffordGate::Sdg(q),
            CliffordGate::Sdg(q) => CliffordGate::S(q),
            other => other,
        }
    }

    /// Checks operand ranges and that two-qubit gates use distinct qubits.
    pub fn check(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::RepeatedQubit(qs[0]));
        }
        Ok(())
    }

    /// Every gate of the set on every qubit and ordered qubit pair of `n`.
    pub fn all_on(n: usize) -> Vec<CliffordGate> {
        use CliffordGate::*;
        let mut out = Vec::new();
        for q in 0..n {
            out.extend([H(q), S(q), Sdg(q), X(q), Y(q), Z(q)]);
        }
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                out.extend([CX(a, b), CZ(a, b), Swap(a, b)]);
            }
        }
        out
    }

    fn from_parts(name: &str, qubits: &[usize]) -> Result<Self> {
        let one = |f: fn(usize) -> CliffordGate| match qubits {
            [q] => Ok(f(*q)),
            _ => Err(Error::InvalidArgument(format!("{name} takes one qubit"))),
        };
        let two = |f: fn(usize, usize) -> CliffordGate| match qubits {
            [a, b] => Ok(f(*a, *b)),
            _ => Err(Error::InvalidArgument(format!("{name} takes two qubits"))),
        };
        match name.to_ascii_uppercase().as_str() {
            "H" => one(CliffordGate::H),
            "S" => one(CliffordGate::S),
            "SDG" => one(CliffordGate::Sdg),
            "X" => one(CliffordGate::X),
            "Y" => one(CliffordGate::Y),
            "Z" => one(CliffordGate::Z),
            "CX" | "CNOT" => two(CliffordGate::CX),
            "CZ" => two(CliffordGate::CZ),
            "SWAP" => two(CliffordGate::Swap),
            other => Err(Error::InvalidArgument(format!("unknown gate {other}"))),
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

impl FromStr for CliffordGate {
    type Err = Error;

    /// Parses `NAME q0 [q1]`, e.g. `CZ 0 1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let name = parts
            .next()
            .ok_or(Error::InvalidArgument("empty gate".into()))?;
        let qubits = parts
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad qubit index {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CliffordGate::from_parts(name, &qubits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for g in [
            CliffordGate::H(3),
            CliffordGate::Sdg(0),
            CliffordGate::CX(1, 2),
            CliffordGate::Swap(4, 0),
        ] {
            assert_eq!(g.to_string().parse::<CliffordGate>().unwrap(), g);
        }
        assert!("CZ 1".parse::<CliffordGate>().is_err());
        assert!("T 0".parse::<CliffordGate>().is_err());
    }

    #[test]
    fn check_rejects_bad_operands() {
        assert_eq!(
            CliffordGate::CZ(0, 2).check(2),
            Err(Error::QubitOutOfRange { index: 2, n: 2 })
        );
        assert_eq!(
            CliffordGate::CX(1, 1).check(2),
            Err(Error::RepeatedQubit(1))
        );
        assert!(CliffordGate::H(1).check(2).is_ok());
    }
}
