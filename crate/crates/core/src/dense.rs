//! Small dense complex matrices used as an independent oracle.
//!
//! Everything here is built from explicit 2×2 factors and basis-state
//! actions; none of it goes through the symplectic update rules, so it can
//! be used to check them. Sizes are tiny (n ≤ 4 in practice).

use num_complex::Complex64;

use crate::gate::CliffordGate;
use crate::pauli::{Axis, PauliString};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut m = DenseMatrix::zeros(dim);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), dim);
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self ⊗ rhs`, with `rhs` on the low index bits.
    pub fn kron(&self, rhs: &DenseMatrix) -> DenseMatrix {
        let (a, b) = (self.dim, rhs.dim);
        let mut out = DenseMatrix::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let v = self[(i, j)];
                for k in 0..b {
                    for l in 0..b {
                        out[(i * b + k, j * b + l)] = v * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs_diff(&self, rhs: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

pub fn axis_matrix(axis: Axis) -> DenseMatrix {
    match axis {
        Axis::I => DenseMatrix::identity(2),
        Axis::X => DenseMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        Axis::Y => DenseMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]),
        Axis::Z => DenseMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]),
    }
}

/// Places single-qubit factors (qubit 0 first) into the full space; qubit 0
/// is the least significant index bit.
pub fn embed(factors: &[DenseMatrix]) -> DenseMatrix {
    factors
        .iter()
        .rev()
        .fold(DenseMatrix::identity(1), |acc, f| acc.kron(f))
}

pub fn pauli_matrix(p: &PauliString) -> DenseMatrix {
    let factors: Vec<_> = (0..p.num_qubits())
        .map(|q| axis_matrix(p.axis(q)))
        .collect();
    embed(&factors).scale(Complex64::new(p.sign() as f64, 0.0))
}

fn single_qubit(n: usize, q: usize, m: DenseMatrix) -> DenseMatrix {
    let factors: Vec<_> = (0..n)
        .map(|k| {
            if k == q {
                m.clone()
            } else {
                DenseMatrix::identity(2)
            }
        })
        .collect();
    embed(&factors)
}

fn permutation_with_phase(n: usize, f: impl Fn(usize) -> (usize, Complex64)) -> DenseMatrix {
    let dim = 1 << n;
    let mut m = DenseMatrix::zeros(dim);
    for col in 0..dim {
        let (row, phase) = f(col);
        m[(row, col)] = phase;
    }
    m
}

/// Standard unitary of a Clifford gate on `n` qubits.
pub fn gate_matrix(gate: &CliffordGate, n: usize) -> DenseMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |v: f64| Complex64::new(v, 0.0);
    match *gate {
        CliffordGate::H(q) => single_qubit(
            n,
            q,
            DenseMatrix::from_rows(&[&[c(h), c(h)], &[c(h), c(-h)]]),
        ),
        CliffordGate::S(q) => {
            single_qubit(n, q, DenseMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, I]]))
        }
        CliffordGate::Sdg(q) => {
            single_qubit(n, q, DenseMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -I]]))
        }
        CliffordGate::X(q) => single_qubit(n, q, axis_matrix(Axis::X)),
        CliffordGate::Y(q) => single_qubit(n, q, axis_matrix(Axis::Y)),
        CliffordGate::Z(q) => single_qubit(n, q, axis_matrix(Axis::Z)),
        CliffordGate::CX(ctl, tgt) => permutation_with_phase(n, |i| {
            let flip = (i >> ctl) & 1;
            (i ^ (flip << tgt), ONE)
        }),
        CliffordGate::CZ(a, b) => permutation_with_phase(n, |i| {
            let both = (i >> a) & (i >> b) & 1;
            (i, if both == 1 { -ONE } else { ONE })
        }),
        CliffordGate::Swap(a, b) => permutation_with_phase(n, |i| {
            let (ba, bb) = ((i >> a) & 1, (i >> b) & 1);
            let j = (i & !(1 << a) & !(1 << b)) | (bb << a) | (ba << b);
            (j, ONE)
        }),
    }
}

/// `exp(-iθP/2)`.
pub fn rotation_matrix(axis: &PauliString, theta: f64) -> DenseMatrix {
    let dim = 1 << axis.num_qubits();
    DenseMatrix::identity(dim)
        .scale(Complex64::new((theta / 2.0).cos(), 0.0))
        .add(&pauli_matrix(axis).scale(Complex64::new(0.0, -(theta / 2.0).sin())))
}

/// Unitary of a gate list applied left to right.
pub fn circuit_matrix(gates: &[CliffordGate], n: usize) -> DenseMatrix {
    gates.iter().fold(DenseMatrix::identity(1 << n), |acc, g| {
        gate_matrix(g, n).mul(&acc)
    })
}

/// Recovers `M = ±P` by projecting onto every unsigned Pauli; `None` when
/// `M` is not a signed Pauli within `tol`.
pub fn as_signed_pauli(m: &DenseMatrix, n: usize, tol: f64) -> Option<PauliString> {
    let dim = (1usize << n) as f64;
    for code in 0..(1u64 << (2 * n)) {
        let axes: Vec<Axis> = (0..n)
            .map(|q| Axis::from_bits((code >> (2 * q)) & 1 == 1, (code >> (2 * q + 1)) & 1 == 1))
            .collect();
        let p = PauliString::from_axes(&axes, false);
        let overlap = pauli_matrix(&p).mul(m).trace() / dim;
        for (target, negative) in [(1.0, false), (-1.0, true)] {
            if (overlap - Complex64::new(target, 0.0)).norm() < tol {
                let candidate = PauliString::from_axes(&axes, negative);
                if pauli_matrix(&candidate).max_abs_diff(m) < tol {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

/// `⟨ψ|M|ψ⟩`.
pub fn expectation(m: &DenseMatrix, psi: &[Complex64]) -> Complex64 {
    let mv = m.apply(psi);
    psi.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra_in_dense_form() {
        let x = axis_matrix(Axis::X);
        let z = axis_matrix(Axis::Z);
        let y = axis_matrix(Axis::Y);
        // XZ = -iY
        assert!(x.mul(&z).max_abs_diff(&y.scale(-I)) < 1e-15);
    }

    #[test]
    fn qubit_zero_is_low_bit() {
        let m = gate_matrix(&CliffordGate::X(0), 2);
        assert_eq!(m[(1, 0)], ONE);
        let p: PauliString = "XI".parse().unwrap();
        assert!(pauli_matrix(&p).max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn signed_pauli_recovery() {
        let p: PauliString = "-YZ".parse().unwrap();
        assert_eq!(as_signed_pauli(&pauli_matrix(&p), 2, 1e-9), Some(p));
        assert_eq!(
            as_signed_pauli(&gate_matrix(&CliffordGate::H(0), 1), 1, 1e-9),
            None
        );
    }
}
