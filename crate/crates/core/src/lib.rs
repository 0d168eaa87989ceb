//! Loss-landscape statistics for variational circuits built from Clifford
//! gates and Pauli rotations.
//!
//! Circuits live in [`circuit`]. At Clifford parameter points they are
//! evaluated exactly by Heisenberg propagation of Pauli strings through
//! [`stabilizer`] states; at arbitrary points by the dense [`statevector`]
//! simulator. [`estimators`] turns either route into sampled moments and
//! [`analytics`] supplies closed-form reference values.
//!
//! ```
//! use bpscan::{CprCircuit, CliffordPoint, PauliString, StabilizerState};
//!
//! let mut c = CprCircuit::new(1);
//! c.push_rotation("X".parse().unwrap()).unwrap();
//! let z: PauliString = "Z".parse().unwrap();
//! let zero = StabilizerState::zero(1);
//! // R_X(π) flips |0⟩, so ⟨Z⟩ = −1.
//! let pi = CliffordPoint::new(vec![2]).unwrap();
//! assert_eq!(c.eval_at_clifford_point(&pi, &z, &zero).unwrap(), -1);
//! ```

pub mod analytics;
pub mod circuit;
pub mod dense;
pub mod error;
pub mod estimators;
pub mod gate;
pub mod pauli;
pub mod rng;
pub mod scalar;
pub mod stabilizer;
pub mod statevector;
pub mod stats;
pub mod warmstart;

pub use analytics::{BpVerdict, ReferenceValue};
pub use circuit::{
    hea_circuit, hea_circuit_with, CliffordPoint, CprCircuit, Entangler, HeaOptions, Instruction,
    ParameterPoint,
};
pub use error::{Error, Result};
pub use estimators::{Ensemble, Estimate, LossTable, LossVariance};
pub use gate::CliffordGate;
pub use pauli::{two_body_nn_paulis, Axis, PauliString, PhasedProduct};
pub use scalar::{Real, RefScalar};
pub use stabilizer::{CliffordTableau, StabilizerState};
pub use statevector::{evaluate_loss, prepare_stabilizer, ObservableSum, StateVector};
pub use warmstart::{warmstart_search, WarmStart};

pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type ObservableSum64 = ObservableSum<f64>;
pub type ParameterPoint64 = ParameterPoint<f64>;
pub type Rational = num_rational::BigRational;
