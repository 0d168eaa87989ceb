//! Clifford + Pauli-rotation circuits and their evaluation at Clifford points.
//!
//! A circuit is an ordered list of fixed Clifford gates and rotations
//! `exp(-iφₖPₖ/2)`, each rotation owning its own parameter index. When every
//! angle is a multiple of π/2 the whole circuit is Clifford, and a
//! single-Pauli loss `Tr ρ U† P U` can be evaluated exactly by pushing `P`
//! backwards through the instruction list.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{check_size, Error, Result};
use crate::gate::CliffordGate;
use crate::pauli::{Axis, PauliString};
use crate::scalar::Real;
use crate::stabilizer::StabilizerState;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instruction {
    Gate(CliffordGate),
    Rotation { axis: PauliString, param: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CprCircuit {
    n: usize,
    num_params: usize,
    instructions: Vec<Instruction>,
}

impl CprCircuit {
    pub fn new(n: usize) -> Self {
        CprCircuit {
            n,
            num_params: 0,
            instructions: Vec::new(),
        }
    }

    /// Assembles a circuit from raw parts and validates it.
    pub fn from_parts(n: usize, num_params: usize, instructions: Vec<Instruction>) -> Result<Self> {
        let c = CprCircuit {
            n,
            num_params,
            instructions,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn push_gate(&mut self, gate: CliffordGate) -> Result<()> {
        gate.check(self.n)?;
        self.instructions.push(Instruction::Gate(gate));
        Ok(())
    }

    /// Appends a rotation with a fresh parameter and returns its index.
    pub fn push_rotation(&mut self, axis: PauliString) -> Result<usize> {
        check_size(self.n, axis.num_qubits())?;
        if axis.is_identity() {
            return Err(Error::IdentityAxis);
        }
        let param = self.num_params;
        self.num_params += 1;
        self.instructions
            .push(Instruction::Rotation { axis, param });
        Ok(param)
    }

    /// Every parameter is used by exactly one rotation, every axis is a
    /// non-identity string on `n` qubits, and all gate operands are in range.
    pub fn validate(&self) -> Result<()> {
        let mut used = vec![false; self.num_params];
        for ins in &self.instructions {
            match ins {
                Instruction::Gate(g) => g.check(self.n)?,
                Instruction::Rotation { axis, param } => {
                    check_size(self.n, axis.num_qubits())?;
                    if axis.is_identity() {
                        return Err(Error::IdentityAxis);
                    }
                    let slot = used.get_mut(*param).ok_or(Error::ParameterOutOfRange {
                        index: *param,
                        num_params: self.num_params,
                    })?;
                    if *slot {
                        return Err(Error::CorrelatedParameter(*param));
                    }
                    *slot = true;
                }
            }
        }
        match used.iter().position(|u| !u) {
            Some(missing) => Err(Error::MissingParameter(missing)),
            None => Ok(()),
        }
    }

    /// Writes the line-oriented text form.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        text.parse()
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.num_params {
            return Err(Error::PointLength {
                got: len,
                expected: self.num_params,
            });
        }
        Ok(())
    }

    /// `U†(φ_c) P U(φ_c)` for a Clifford point.
    pub fn heisenberg_image(
        &self,
        point: &CliffordPoint,
        obs: &PauliString,
    ) -> Result<PauliString> {
        check_size(self.n, obs.num_qubits())?;
        self.check_point(point.len())?;
        let mut p = obs.clone();
        self.back_propagate(point, &mut p);
        Ok(p)
    }

    fn back_propagate(&self, point: &CliffordPoint, p: &mut PauliString) {
        for ins in self.instructions.iter().rev() {
            match ins {
                Instruction::Gate(g) => p.conjugate_by_gate_in_place(g),
                Instruction::Rotation { axis, param } => {
                    p.rotate_quarter_in_place(axis, point.quarters[*param])
                }
            }
        }
    }

    /// True when the back-propagated `obs` commutes with every rotation it
    /// meets, so `U†(φ) obs U(φ)` does not depend on `φ`.
    pub fn is_constant_for(&self, obs: &PauliString) -> Result<bool> {
        check_size(self.n, obs.num_qubits())?;
        let mut p = obs.clone();
        for ins in self.instructions.iter().rev() {
            match ins {
                Instruction::Gate(g) => p.conjugate_by_gate_in_place(g),
                Instruction::Rotation { axis, .. } => {
                    if !p.commutes_unchecked(axis) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Exact `Tr(ρ U†(φ_c) P U(φ_c))` in `{-1, 0, +1}`.
    pub fn eval_at_clifford_point(
        &self,
        point: &CliffordPoint,
        obs: &PauliString,
        init: &StabilizerState,
    ) -> Result<i8> {
        check_size(self.n, init.num_qubits())?;
        let image = self.heisenberg_image(point, obs)?;
        Ok(init.expectation_unchecked(&image))
    }

    /// Number of `terms` whose loss is non-zero at `point`.
    pub fn nonzero_term_count(
        &self,
        point: &CliffordPoint,
        terms: &[PauliString],
        init: &StabilizerState,
    ) -> Result<usize> {
        let mut count = 0;
        for t in terms {
            if self.eval_at_clifford_point(point, t, init)? != 0 {
                count += 1;
            }
        }
        Ok(count)
    }

    pub fn random_clifford_point<R: Rng + ?Sized>(&self, rng: &mut R) -> CliffordPoint {
        CliffordPoint {
            quarters: (0..self.num_params)
                .map(|_| rng.gen_range(0..4u8))
                .collect(),
        }
    }

    /// Angles uniform in `[0, 2π)`.
    pub fn random_parameter_point<T: Real, R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> ParameterPoint<T> {
        let two_pi = T::TAU();
        ParameterPoint {
            angles: (0..self.num_params)
                .map(|_| T::from_f64_lossy(rng.gen::<f64>()) * two_pi)
                .collect(),
        }
    }
}

impl fmt::Display for CprCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CPR n={} params={}", self.n, self.num_params)?;
        for ins in &self.instructions {
            match ins {
                Instruction::Gate(g) => writeln!(f, "{g}")?,
                Instruction::Rotation { axis, param } => writeln!(f, "ROT {axis} {param}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for CprCircuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let bad_header = || Error::Parse {
            line: hline,
            msg: format!("bad header {header:?}"),
        };
        let mut fields = header.split_whitespace();
        if fields.next() != Some("CPR") {
            return Err(bad_header());
        }
        let mut field = |key: &str| -> Result<usize> {
            fields
                .next()
                .and_then(|f| f.strip_prefix(key))
                .and_then(|v| v.parse().ok())
                .ok_or_else(bad_header)
        };
        let n = field("n=")?;
        let num_params = field("params=")?;

        let mut instructions = Vec::new();
        for (line, l) in lines {
            let wrap = |e: Error| Error::Parse {
                line,
                msg: e.to_string(),
            };
            if let Some(rest) = l.strip_prefix("ROT ") {
                let mut parts = rest.split_whitespace();
                let (Some(axis), Some(param), None) = (parts.next(), parts.next(), parts.next())
                else {
                    return Err(Error::Parse {
                        line,
                        msg: "expected ROT <axis> <param>".into(),
                    });
                };
                let axis: PauliString = axis.parse().map_err(wrap)?;
                let param = param.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad parameter index {param:?}"),
                })?;
                instructions.push(Instruction::Rotation { axis, param });
            } else {
                instructions.push(Instruction::Gate(l.parse().map_err(wrap)?));
            }
        }
        CprCircuit::from_parts(n, num_params, instructions)
    }
}

/// Continuous parameter assignment, radians.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPoint<T> {
    pub angles: Vec<T>,
}

impl<T: Real> ParameterPoint<T> {
    pub fn new(angles: Vec<T>) -> Self {
        ParameterPoint { angles }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Nearest quarter-turn point, if every angle is within `tol` of a
    /// multiple of π/2.
    pub fn to_clifford_point(&self, tol: T) -> Option<CliffordPoint> {
        let quarter = T::FRAC_PI_2();
        let quarters = self
            .angles
            .iter()
            .map(|&a| {
                let k = (a / quarter).round();
                ((a - k * quarter).abs() <= tol)
                    .then(|| k.to_i64().unwrap_or(0).rem_euclid(4) as u8)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(CliffordPoint { quarters })
    }
}

/// Parameter assignment with every angle in `{0, π/2, π, 3π/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CliffordPoint {
    quarters: Vec<u8>,
}

impl CliffordPoint {
    pub fn new(quarters: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = quarters.iter().find(|&&q| q > 3) {
            return Err(Error::InvalidArgument(format!(
                "quarter-turn count {bad} not in 0..4"
            )));
        }
        Ok(CliffordPoint { quarters })
    }

    pub fn zeros(len: usize) -> Self {
        CliffordPoint {
            quarters: vec![0; len],
        }
    }

    /// Decodes the `index`-th point of the grid `{0,1,2,3}^len` (parameter
    /// 0 is the least significant base-4 digit).
    pub fn from_index(mut index: u64, len: usize) -> Self {
        let quarters = (0..len)
            .map(|_| {
                let q = (index % 4) as u8;
                index /= 4;
                q
            })
            .collect();
        CliffordPoint { quarters }
    }

    pub fn quarters(&self) -> &[u8] {
        &self.quarters
    }

    pub fn len(&self) -> usize {
        self.quarters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quarters.is_empty()
    }

    pub fn set(&mut self, param: usize, quarter: u8) {
        self.quarters[param] = quarter % 4;
    }

    pub fn to_angles<T: Real>(&self) -> ParameterPoint<T> {
        let quarter = T::FRAC_PI_2();
        ParameterPoint {
            angles: self
                .quarters
                .iter()
                .map(|&k| T::from_u8(k).expect("small int") * quarter)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Entangler {
    #[default]
    CZ,
    CX,
}

/// Layout knobs of the hardware-efficient ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HeaOptions {
    pub entangler: Entangler,
    /// Prepend a layer of Hadamards before the first rotation layer.
    pub hadamard_layer: bool,
}

/// Hardware-efficient ansatz with the default layout: per layer one
/// single-qubit rotation per qubit about a uniformly random axis in
/// `{X, Y, Z}`, then a CZ ladder on `(i, i+1)`.
pub fn hea_circuit<R: Rng + ?Sized>(n: usize, layers: usize, rng: &mut R) -> Result<CprCircuit> {
    hea_circuit_with(n, layers, HeaOptions::default(), rng)
}

pub fn hea_circuit_with<R: Rng + ?Sized>(
    n: usize,
    layers: usize,
    options: HeaOptions,
    rng: &mut R,
) -> Result<CprCircuit> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("HEA needs n >= 2, got {n}")));
    }
    if layers < 1 {
        return Err(Error::InvalidArgument(
            "HEA needs at least one layer".into(),
        ));
    }
    let mut c = CprCircuit::new(n);
    if options.hadamard_layer {
        for q in 0..n {
            c.push_gate(CliffordGate::H(q))?;
        }
    }
    for _ in 0..layers {
        for q in 0..n {
            let axis = Axis::NON_IDENTITY[rng.gen_range(0..3)];
            c.push_rotation(PauliString::single(n, q, axis)?)?;
        }
        for i in 0..n - 1 {
            c.push_gate(match options.entangler {
                Entangler::CZ => CliffordGate::CZ(i, i + 1),
                Entangler::CX => CliffordGate::CX(i, i + 1),
            })?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::master_rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn rx() -> CprCircuit {
        let mut c = CprCircuit::new(1);
        c.push_rotation(p("X")).unwrap();
        c
    }

    #[test]
    fn validation() {
        let dup = CprCircuit::from_parts(
            1,
            1,
            vec![
                Instruction::Rotation {
                    axis: p("X"),
                    param: 0,
                },
                Instruction::Rotation {
                    axis: p("Z"),
                    param: 0,
                },
            ],
        );
        assert_eq!(dup, Err(Error::CorrelatedParameter(0)));
        assert!(CprCircuit::from_parts(2, 0, vec![]).is_ok());
        assert_eq!(
            CprCircuit::from_parts(1, 1, vec![]),
            Err(Error::MissingParameter(0))
        );
        assert_eq!(
            CprCircuit::from_parts(
                1,
                1,
                vec![Instruction::Rotation {
                    axis: p("I"),
                    param: 0
                }]
            ),
            Err(Error::IdentityAxis)
        );
        assert!(CprCircuit::from_parts(1, 0, vec![Instruction::Gate(CliffordGate::H(1))]).is_err());
    }

    #[test]
    fn hea_shape() {
        let mut rng = master_rng(1);
        let c = hea_circuit(4, 1, &mut rng).unwrap();
        let rotations = c
            .instructions()
            .iter()
            .filter(|i| matches!(i, Instruction::Rotation { .. }))
            .count();
        assert_eq!(
            (
                rotations,
                c.instructions().len() - rotations,
                c.num_params()
            ),
            (4, 3, 4)
        );
        assert_eq!(hea_circuit(10, 30, &mut rng).unwrap().num_params(), 300);
        assert!(hea_circuit(1, 3, &mut rng).is_err());
        let a = hea_circuit(5, 7, &mut master_rng(9)).unwrap();
        let b = hea_circuit(5, 7, &mut master_rng(9)).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
    }

    #[test]
    fn hea_layer_prefix() {
        let short = hea_circuit(4, 3, &mut master_rng(3)).unwrap();
        let long = hea_circuit(4, 4, &mut master_rng(3)).unwrap();
        assert_eq!(
            &long.instructions()[..short.instructions().len()],
            short.instructions()
        );
    }

    #[test]
    fn clifford_point_examples() {
        let pt = CliffordPoint::new(vec![0, 1, 2, 3]).unwrap();
        let angles: ParameterPoint<f64> = pt.to_angles();
        let pi = std::f64::consts::PI;
        assert_eq!(angles.angles, vec![0.0, pi / 2.0, pi, 3.0 * pi / 2.0]);
        assert_eq!(angles.to_clifford_point(1e-12), Some(pt));
        assert_eq!(
            CliffordPoint::zeros(3).to_angles::<f64>().angles,
            vec![0.0; 3]
        );
        assert!(CliffordPoint::new(vec![4]).is_err());
        let empty = CprCircuit::new(2).random_clifford_point(&mut master_rng(0));
        assert!(empty.is_empty());
    }

    #[test]
    fn clifford_point_evaluation() {
        let zero1 = StabilizerState::zero(1);
        let mut h = CprCircuit::new(1);
        h.push_gate(CliffordGate::H(0)).unwrap();
        assert_eq!(
            h.eval_at_clifford_point(&CliffordPoint::zeros(0), &p("Z"), &zero1)
                .unwrap(),
            0
        );
        let pt = CliffordPoint::new(vec![2]).unwrap();
        assert_eq!(
            rx().eval_at_clifford_point(&pt, &p("Z"), &zero1).unwrap(),
            -1
        );
        assert!(rx()
            .eval_at_clifford_point(&CliffordPoint::zeros(2), &p("Z"), &zero1)
            .is_err());
    }

    #[test]
    fn counting_terms() {
        let c = CprCircuit::new(2);
        let init = StabilizerState::zero(2);
        let pt = CliffordPoint::zeros(0);
        assert_eq!(c.nonzero_term_count(&pt, &[], &init).unwrap(), 0);
        let terms = [p("ZI"), p("IZ"), p("ZZ")];
        assert_eq!(c.nonzero_term_count(&pt, &terms, &init).unwrap(), 3);
    }

    #[test]
    fn text_round_trip() {
        let c = hea_circuit(3, 2, &mut master_rng(4)).unwrap();
        let text = c.to_text();
        assert!(text.starts_with("CPR n=3 params=6\n"));
        assert_eq!(CprCircuit::from_text(&text).unwrap(), c);
        let golden = "CPR n=3 params=1\n# comment\nH 0\nCZ 0 1\nROT +XII 0\n";
        let parsed = CprCircuit::from_text(golden).unwrap();
        assert_eq!(parsed.instructions().len(), 3);
        assert!(CprCircuit::from_text("CPR n=3\n").is_err());
        assert!(CprCircuit::from_text("CPR n=1 params=1\nROT +Q 0\n").is_err());
    }
}
