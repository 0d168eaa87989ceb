//! Closed-form reference values for the landscape statistics.
//!
//! Each formula is written once against [`RefScalar`] and evaluated twice:
//! exactly in big rationals (for `n ≤ EXACT_MAX_QUBITS`) and in `f64`.
//! [`ReferenceValue`] carries both renderings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::RefScalar;

/// Above this qubit count only the floating-point rendering is produced.
pub const EXACT_MAX_QUBITS: u32 = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceValue {
    pub exact: Option<BigRational>,
    pub value: f64,
    pub validity: &'static str,
}

impl ReferenceValue {
    fn build(
        n: u32,
        validity: &'static str,
        exact: impl FnOnce() -> Result<BigRational>,
        float: impl FnOnce() -> Result<f64>,
    ) -> Result<Self> {
        let value = float()?;
        let exact = if n <= EXACT_MAX_QUBITS {
            Some(exact()?)
        } else {
            None
        };
        Ok(ReferenceValue {
            exact,
            value,
            validity,
        })
    }

    /// Exact value as `(numerator, denominator)` in lowest terms.
    pub fn as_fraction(&self) -> Option<(BigInt, BigInt)> {
        self.exact
            .as_ref()
            .map(|r| (r.numer().clone(), r.denom().clone()))
    }

    /// Relative gap between the rational and floating renderings.
    pub fn rendering_gap(&self) -> Option<f64> {
        let exact = self.exact.as_ref()?.to_f64()?;
        if exact == 0.0 {
            return Some(self.value.abs());
        }
        Some(((exact - self.value) / exact).abs())
    }
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn require(n: u32, min: u32, what: &'static str) -> Result<()> {
    if n < min {
        Err(Error::Degenerate { what, n })
    } else {
        Ok(())
    }
}

pub fn random_pauli_second_moment_in<T: RefScalar>(n: u32) -> T {
    T::one() / T::pow2(n)
}

pub fn random_pauli_pair_moment_in<T: RefScalar>(n: u32) -> T {
    T::one() / T::pow2(2 * n)
}

/// `(2ⁿ − 1)/(4ⁿ − 1)`.
pub fn clifford_ratio_in<T: RefScalar>(n: u32) -> T {
    (T::pow2(n) - T::one()) / (T::pow2(2 * n) - T::one())
}

/// `(2ⁿ−1)/(4ⁿ−1) · (2ⁿ−2)/(2²ⁿ⁻¹−2)` for commuting pairs, zero otherwise.
pub fn stabilizer_pair_moment_in<T: RefScalar>(n: u32, commuting: bool) -> Result<T> {
    require(n, 2, "stabilizer pair moment")?;
    if !commuting {
        return Ok(T::zero());
    }
    let two = T::from_u64(2);
    let orbit = (T::pow2(n) - two.clone()) / (T::pow2(2 * n - 1) - two);
    Ok(clifford_ratio_in::<T>(n) * orbit)
}

/// Haar second moment `Tr O² ((Tr ρ)²/(4ⁿ−1) − Tr ρ²/(2ⁿ(4ⁿ−1)))`.
pub fn two_design_variance_in<T: RefScalar>(n: u32, tr_rho: T, tr_rho2: T, tr_o2: T) -> T {
    let d2 = T::pow2(2 * n) - T::one();
    tr_o2 * (tr_rho.clone() * tr_rho / d2.clone() - tr_rho2 / (T::pow2(n) * d2))
}

/// `Wg(id, N) = (N⁴ − 8N² + 6)/(N²(N²−1)(N²−4)(N²−9))` with `N = 2ⁿ`.
pub fn wg4_identity_in<T: RefScalar>(n: u32) -> Result<T> {
    require(n, 2, "Weingarten function Wg(id, 2^n)")?;
    let n2 = T::pow2(2 * n);
    let num = n2.clone() * n2.clone() - T::from_u64(8) * n2.clone() + T::from_u64(6);
    let den = n2.clone()
        * (n2.clone() - T::one())
        * (n2.clone() - T::from_u64(4))
        * (n2 - T::from_u64(9));
    Ok(num / den)
}

/// Leading Weingarten term of the continuous correlator for a pure state:
/// `Tr P₁² Tr P₂² (Tr ρ²)² Wg(id) = 4ⁿ Wg(id, 2ⁿ)`.
pub fn continuous_pair_leading_in<T: RefScalar>(n: u32) -> Result<T> {
    Ok(T::pow2(2 * n) * wg4_identity_in::<T>(n)?)
}

pub fn random_pauli_second_moment(n: u32) -> Result<ReferenceValue> {
    require(n, 1, "random Pauli moment")?;
    ReferenceValue::build(
        n,
        "exact for n >= 1, identity included in the ensemble",
        || Ok(random_pauli_second_moment_in(n)),
        || Ok(random_pauli_second_moment_in(n)),
    )
}

pub fn random_pauli_pair_moment(n: u32) -> Result<ReferenceValue> {
    require(n, 1, "random Pauli pair moment")?;
    ReferenceValue::build(
        n,
        "exact for n >= 1, independent Paulis with identity included",
        || Ok(random_pauli_pair_moment_in(n)),
        || Ok(random_pauli_pair_moment_in(n)),
    )
}

pub fn clifford_ratio(n: u32) -> Result<ReferenceValue> {
    require(n, 1, "Clifford ratio")?;
    ReferenceValue::build(
        n,
        "exact for n >= 1",
        || Ok(clifford_ratio_in(n)),
        || Ok(clifford_ratio_in(n)),
    )
}

pub fn stabilizer_pair_moment(n: u32, commuting: bool) -> Result<ReferenceValue> {
    ReferenceValue::build(
        n,
        "exact for n >= 2, distinct non-identity Paulis",
        || stabilizer_pair_moment_in(n, commuting),
        || stabilizer_pair_moment_in(n, commuting),
    )
}

pub fn two_design_variance(
    n: u32,
    tr_rho: f64,
    tr_rho2: f64,
    tr_o2: f64,
) -> Result<ReferenceValue> {
    require(n, 1, "2-design variance")?;
    if !(tr_rho2 > 0.0 && tr_rho2 <= tr_rho) || tr_o2 < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < Tr rho^2 <= Tr rho and Tr O^2 >= 0, got {tr_rho}, {tr_rho2}, {tr_o2}"
        )));
    }
    let to_exact = |v: f64| {
        BigRational::from_float(v)
            .ok_or_else(|| Error::InvalidArgument(format!("non-finite input {v}")))
    };
    ReferenceValue::build(
        n,
        "exact for an exact unitary 2-design",
        || {
            Ok(two_design_variance_in(
                n,
                to_exact(tr_rho)?,
                to_exact(tr_rho2)?,
                to_exact(tr_o2)?,
            ))
        },
        || Ok(two_design_variance_in(n, tr_rho, tr_rho2, tr_o2)),
    )
}

/// Second moment of a single-Pauli loss under a 2-design with a pure
/// initial state, `1/(2ⁿ + 1)`.
pub fn two_design_single_pauli(n: u32) -> Result<ReferenceValue> {
    let n_f = 2f64.powi(n as i32);
    two_design_variance(n, 1.0, 1.0, n_f)
}

pub fn wg4_identity(n: u32) -> Result<ReferenceValue> {
    ReferenceValue::build(
        n,
        "exact for n >= 2",
        || wg4_identity_in(n),
        || wg4_identity_in(n),
    )
}

pub fn continuous_pair_leading(n: u32) -> Result<ReferenceValue> {
    ReferenceValue::build(
        n,
        "leading term only; relative corrections O(2^-n)",
        || continuous_pair_leading_in(n),
        || continuous_pair_leading_in(n),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpVerdict {
    ConsistentWithBp,
    NotConsistent,
    Inconclusive,
}

pub const DEFAULT_BP_KAPPA: f64 = 4.0;

/// Compares a variance estimate with the threshold `κ·2⁻ⁿ`; estimates
/// within one standard error of the threshold are inconclusive.
pub fn bp_threshold_check(estimate: f64, stderr: f64, n: u32, kappa: f64) -> BpVerdict {
    let threshold = kappa * 2f64.powi(-(n as i32));
    if (estimate - threshold).abs() <= stderr.max(0.0) {
        BpVerdict::Inconclusive
    } else if estimate < threshold {
        BpVerdict::ConsistentWithBp
    } else {
        BpVerdict::NotConsistent
    }
}

/// Whether a reference value is strictly positive in its exact rendering.
pub fn is_positive(v: &ReferenceValue) -> bool {
    match &v.exact {
        Some(r) => !r.is_zero() && r.numer().sign() == r.denom().sign(),
        None => v.value > 0.0,
    }
}
