//! Monte Carlo and exact-grid estimators of loss-landscape moments.
//!
//! Sample `i` of an estimator seeded with `seed` draws everything it needs
//! from [`stream_rng`]`(seed, i)`. Samples are evaluated in parallel on the
//! current rayon pool, collected by index and summed in index order, so an
//! [`Estimate`] is bit-identical for any worker count.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::circuit::{CliffordPoint, CprCircuit, ParameterPoint};
use crate::error::{check_size, Error, Result};
use crate::pauli::PauliString;
use crate::rng::{stream_rng, SampleRng};
use crate::stabilizer::{enumerate_stabilizer_states, CliffordTableau, StabilizerState};
use crate::statevector::{evaluate_loss, ObservableSum, StateVector};

/// Default sample count per estimate.
pub const DEFAULT_SAMPLES: usize = 500;

/// Default cap on the number of grid points visited by [`exact_grid_moment`].
pub const DEFAULT_GRID_GUARD: u128 = 10_000_000;

/// Summary of `samples` draws of a scalar quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub second_moment: f64,
    /// Plug-in `second_moment − mean²`.
    pub variance: f64,
    /// Sample standard deviation over `√samples`.
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Estimate {
    pub fn from_values(values: &[f64], seed: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument(
                "estimate needs at least one sample".into(),
            ));
        }
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let second_moment = values.iter().map(|v| v * v).sum::<f64>() / k;
        let centered = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
        let stderr = if values.len() > 1 {
            (centered / (k - 1.0)).sqrt() / k.sqrt()
        } else {
            0.0
        };
        Ok(Estimate {
            mean,
            second_moment,
            variance: second_moment - mean * mean,
            stderr,
            samples: values.len(),
            seed,
        })
    }

    /// `|mean − target| ≤ sigmas · stderr`.
    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.mean - target).abs() <= sigmas * self.stderr
    }
}

/// Loss statistics from uniform parameter sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossVariance {
    /// Statistics of `L`.
    pub loss: Estimate,
    /// Statistics of `L²`.
    pub squared: Estimate,
    /// Every observable term commutes with every rotation it meets, so the
    /// loss does not depend on the parameters.
    pub constant: bool,
}

impl LossVariance {
    /// Plug-in variance `E[L²] − E[L]²`, exactly zero for constant losses.
    pub fn value(&self) -> f64 {
        if self.constant {
            0.0
        } else {
            self.loss.variance
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.constant {
            0.0
        } else {
            self.squared.stderr
        }
    }
}

fn collect_samples<F>(samples: usize, seed: u64, f: F) -> Result<Vec<f64>>
where
    F: Fn(&mut SampleRng) -> Result<f64> + Sync,
{
    if samples == 0 {
        return Err(Error::InvalidArgument("zero samples requested".into()));
    }
    (0..samples as u64)
        .into_par_iter()
        .map(|i| f(&mut stream_rng(seed, i)))
        .collect()
}

fn require_non_identity(p: &PauliString) -> Result<()> {
    if p.is_identity() {
        Err(Error::IdentityObservable)
    } else {
        Ok(())
    }
}

/// `E_φ[L]`, `E_φ[L²]` and the loss variance with `φ` uniform on the torus.
pub fn variance_uniform(
    circuit: &CprCircuit,
    obs: &ObservableSum<f64>,
    init: &StateVector<f64>,
    samples: usize,
    seed: u64,
) -> Result<LossVariance> {
    let values = collect_samples(samples, seed, |rng| {
        let point: ParameterPoint<f64> = circuit.random_parameter_point(rng);
        evaluate_loss(circuit, &point, obs, init)
    })?;
    let mut constant = true;
    for (_, t) in obs.terms() {
        constant &= circuit.is_constant_for(t)?;
    }
    let squares: Vec<f64> = values.iter().map(|v| v * v).collect();
    Ok(LossVariance {
        loss: Estimate::from_values(&values, seed)?,
        squared: Estimate::from_values(&squares, seed)?,
        constant,
    })
}

/// Mean of `L²(φ_c)` over uniformly sampled Clifford points.
pub fn variance_clifford(
    circuit: &CprCircuit,
    obs: &PauliString,
    init: &StabilizerState,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    require_non_identity(obs)?;
    check_size(circuit.num_qubits(), obs.num_qubits())?;
    let values = collect_samples(samples, seed, |rng| {
        let point = circuit.random_clifford_point(rng);
        let v = circuit.eval_at_clifford_point(&point, obs, init)?;
        Ok((v * v) as f64)
    })?;
    Estimate::from_values(&values, seed)
}

/// Discrete correlator: mean of `L²_{P₁}(φ_c)·L²_{P₂}(φ_c)`.
pub fn discrete_correlator(
    circuit: &CprCircuit,
    p1: &PauliString,
    p2: &PauliString,
    init: &StabilizerState,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    require_non_identity(p1)?;
    require_non_identity(p2)?;
    let values = collect_samples(samples, seed, |rng| {
        let point = circuit.random_clifford_point(rng);
        let a = circuit.eval_at_clifford_point(&point, p1, init)?;
        let b = circuit.eval_at_clifford_point(&point, p2, init)?;
        Ok((a * a * b * b) as f64)
    })?;
    Estimate::from_values(&values, seed)
}

/// Continuous correlator: mean of `L²_{P₁}(φ)·L²_{P₂}(φ)` for uniform `φ`.
pub fn continuous_correlator(
    circuit: &CprCircuit,
    p1: &PauliString,
    p2: &PauliString,
    init: &StateVector<f64>,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    require_non_identity(p1)?;
    require_non_identity(p2)?;
    let values = collect_samples(samples, seed, |rng| {
        let point: ParameterPoint<f64> = circuit.random_parameter_point(rng);
        let psi = init.evolve(circuit, &point)?;
        let a = psi.expectation(p1)?;
        let b = psi.expectation(p2)?;
        Ok(a * a * b * b)
    })?;
    Estimate::from_values(&values, seed)
}

/// Average of `∏ₖ L²_{Pₖ}` over the full grid `{2πj/m}^{num_params}`.
///
/// For one term the result is the exact torus average for any `m ≥ 3`; for
/// two terms `m ≥ 5` is required.
pub fn exact_grid_moment(
    circuit: &CprCircuit,
    terms: &[PauliString],
    init: &StateVector<f64>,
    m: usize,
    guard: u128,
) -> Result<f64> {
    if terms.is_empty() || terms.len() > 2 {
        return Err(Error::InvalidArgument(
            "grid moment takes one or two terms".into(),
        ));
    }
    grid_average(circuit, init, m, guard, |psi| {
        terms.iter().try_fold(1.0, |acc, t| {
            let e = psi.expectation(t)?;
            Ok(acc * e * e)
        })
    })
}

/// Average of `L_P` over the full grid `{2πj/m}^{num_params}`; exact for `m ≥ 2`.
pub fn exact_grid_mean(
    circuit: &CprCircuit,
    obs: &PauliString,
    init: &StateVector<f64>,
    m: usize,
    guard: u128,
) -> Result<f64> {
    grid_average(circuit, init, m, guard, |psi| psi.expectation(obs))
}

fn grid_average<F>(
    circuit: &CprCircuit,
    init: &StateVector<f64>,
    m: usize,
    guard: u128,
    f: F,
) -> Result<f64>
where
    F: Fn(&StateVector<f64>) -> Result<f64> + Sync,
{
    if m == 0 {
        return Err(Error::InvalidArgument("grid needs m >= 1".into()));
    }
    let p = circuit.num_params();
    let points = (m as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
    if points > guard {
        return Err(Error::GridTooLarge { points, guard });
    }
    let step = std::f64::consts::TAU / m as f64;
    let values: Vec<f64> = (0..points as u64)
        .into_par_iter()
        .map(|mut idx| {
            let angles = (0..p)
                .map(|_| {
                    let j = idx % m as u64;
                    idx /= m as u64;
                    j as f64 * step
                })
                .collect();
            f(&init.evolve(circuit, &ParameterPoint::new(angles))?)
        })
        .collect::<Result<_>>()?;
    Ok(values.iter().sum::<f64>() / points as f64)
}

/// Exact average of `∏ₖ L²_{Pₖ}(φ_c)` over all `4^{num_params}` Clifford points.
pub fn exhaustive_clifford_moment(
    circuit: &CprCircuit,
    terms: &[PauliString],
    init: &StabilizerState,
) -> Result<BigRational> {
    let p = circuit.num_params();
    if p > 16 {
        return Err(Error::GridTooLarge {
            points: 1u128 << (2 * p),
            guard: 1 << 32,
        });
    }
    let total = 1u64 << (2 * p);
    let hits = (0..total)
        .into_par_iter()
        .map(|idx| {
            let point = CliffordPoint::from_index(idx, p);
            for t in terms {
                if circuit.eval_at_clifford_point(&point, t, init)? == 0 {
                    return Ok(0u64);
                }
            }
            Ok(1)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum::<u64>();
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}

/// Exact average of `∏ₖ (Tr ρ Pₖ)²` over every `n`-qubit stabilizer state.
pub fn exhaustive_stabilizer_moment(terms: &[PauliString]) -> Result<BigRational> {
    let n = terms
        .first()
        .ok_or(Error::InvalidArgument("need at least one term".into()))?
        .num_qubits();
    let states = enumerate_stabilizer_states(n)?;
    let mut hits = 0u64;
    for s in &states {
        let mut all = true;
        for t in terms {
            if s.expectation(t)? == 0 {
                all = false;
                break;
            }
        }
        hits += all as u64;
    }
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(states.len() as u64),
    ))
}

/// Ensemble over which a squared stabilizer expectation is averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    /// Observable drawn uniformly from the Pauli group.
    RandomPauli { include_identity: bool },
    /// Initial state drawn uniformly from the stabilizer states.
    RandomStabilizer,
    /// Initial state `𝒞|0…0⟩` with `𝒞` a uniform random Clifford, applied
    /// through its tableau rather than through a sampled state.
    RandomCliffordPrefix,
}

impl Ensemble {
    pub const RANDOM_PAULI: Ensemble = Ensemble::RandomPauli {
        include_identity: true,
    };
}

/// Squared loss of `image = U†(φ_c) P U(φ_c)` under one ensemble draw.
fn ensemble_factor(
    model: Ensemble,
    images: &[PauliString],
    init: &StabilizerState,
    rng: &mut SampleRng,
) -> i8 {
    let n = init.num_qubits();
    let value = |e: i8| e * e;
    match model {
        Ensemble::RandomPauli { .. } => images
            .iter()
            .map(|p| value(init.expectation_unchecked(p)))
            .product(),
        Ensemble::RandomStabilizer => {
            let rho = StabilizerState::random(n, rng);
            images
                .iter()
                .map(|p| value(rho.expectation_unchecked(p)))
                .product()
        }
        Ensemble::RandomCliffordPrefix => {
            // C is uniform, so C P C† has the law of C† P C.
            let c = CliffordTableau::random(n, rng);
            images
                .iter()
                .map(|p| {
                    value(
                        c.conjugate_pauli(p)
                            .expect("sizes checked")
                            .expectation_in_zero(),
                    )
                })
                .product()
        }
    }
}

/// `E_{φ_c} E_model [L²]` for a CPR circuit.
///
/// `obs` is ignored under [`Ensemble::RandomPauli`]; `init` is the fixed
/// state for the Pauli ensemble and only fixes `n` otherwise.
pub fn ensemble_second_moment(
    model: Ensemble,
    circuit: &CprCircuit,
    obs: &PauliString,
    init: &StabilizerState,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    let n = circuit.num_qubits();
    check_size(n, init.num_qubits())?;
    check_size(n, obs.num_qubits())?;
    let values = collect_samples(samples, seed, |rng| {
        let point = circuit.random_clifford_point(rng);
        let p = match model {
            Ensemble::RandomPauli { include_identity } => {
                PauliString::random(n, rng, include_identity)
            }
            _ => obs.clone(),
        };
        let image = circuit.heisenberg_image(&point, &p)?;
        Ok(ensemble_factor(model, &[image], init, rng) as f64)
    })?;
    Estimate::from_values(&values, seed)
}

/// `E_{φ_c} E_model [L²_{P₁} L²_{P₂}]`.
///
/// Under the Pauli ensemble `pair` must be `None` and both observables are
/// drawn independently; the state ensembles need a fixed pair of distinct
/// non-identity Paulis.
pub fn ensemble_pair_moment(
    model: Ensemble,
    circuit: &CprCircuit,
    pair: Option<(&PauliString, &PauliString)>,
    init: &StabilizerState,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    let n = circuit.num_qubits();
    check_size(n, init.num_qubits())?;
    let include_identity = match (model, pair) {
        (Ensemble::RandomPauli { include_identity }, None) => include_identity,
        (Ensemble::RandomPauli { .. }, Some(_)) => {
            return Err(Error::InvalidArgument(
                "the Pauli ensemble draws its own pair".into(),
            ))
        }
        (_, None) => {
            return Err(Error::InvalidArgument(
                "state ensembles need a fixed pair".into(),
            ))
        }
        (_, Some((a, b))) => {
            check_size(n, a.num_qubits())?;
            check_size(n, b.num_qubits())?;
            require_non_identity(a)?;
            require_non_identity(b)?;
            if a.unsigned() == b.unsigned() {
                return Err(Error::InvalidArgument(
                    "pair moment needs distinct Paulis".into(),
                ));
            }
            false
        }
    };
    let values = collect_samples(samples, seed, |rng| {
        let point = circuit.random_clifford_point(rng);
        let (a, b) = match pair {
            Some((a, b)) => (a.clone(), b.clone()),
            None => (
                PauliString::random(n, rng, include_identity),
                PauliString::random(n, rng, include_identity),
            ),
        };
        let images = [
            circuit.heisenberg_image(&point, &a)?,
            circuit.heisenberg_image(&point, &b)?,
        ];
        Ok(ensemble_factor(model, &images, init, rng) as f64)
    })?;
    Estimate::from_values(&values, seed)
}

/// Loss values of several observables at shared sample points.
///
/// Row `i` holds the losses at the point drawn from stream `i`; column `k`
/// belongs to `terms[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossTable {
    pub rows: Vec<Vec<f64>>,
    /// Per-term flag from [`CprCircuit::is_constant_for`].
    pub constant: Vec<bool>,
    pub seed: u64,
}

impl LossTable {
    /// Statevector losses at uniform points.
    pub fn uniform(
        circuit: &CprCircuit,
        terms: &[PauliString],
        init: &StateVector<f64>,
        samples: usize,
        seed: u64,
    ) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidArgument("zero samples requested".into()));
        }
        let rows = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(seed, i);
                let point: ParameterPoint<f64> = circuit.random_parameter_point(&mut rng);
                let psi = init.evolve(circuit, &point)?;
                terms
                    .iter()
                    .map(|t| psi.expectation(t))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let constant = terms
            .iter()
            .map(|t| circuit.is_constant_for(t))
            .collect::<Result<_>>()?;
        Ok(LossTable {
            rows,
            constant,
            seed,
        })
    }

    /// Heisenberg losses at uniformly sampled Clifford points.
    pub fn clifford(
        circuit: &CprCircuit,
        terms: &[PauliString],
        init: &StabilizerState,
        samples: usize,
        seed: u64,
    ) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidArgument("zero samples requested".into()));
        }
        let rows = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(seed, i);
                let point = circuit.random_clifford_point(&mut rng);
                terms
                    .iter()
                    .map(|t| {
                        circuit
                            .eval_at_clifford_point(&point, t, init)
                            .map(f64::from)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let constant = terms
            .iter()
            .map(|t| circuit.is_constant_for(t))
            .collect::<Result<_>>()?;
        Ok(LossTable {
            rows,
            constant,
            seed,
        })
    }

    pub fn num_terms(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    fn column(&self, k: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[k]).collect()
    }

    /// Loss variance of term `k`.
    pub fn term_variance(&self, k: usize) -> Result<LossVariance> {
        let values = self.column(k);
        let squares: Vec<f64> = values.iter().map(|v| v * v).collect();
        Ok(LossVariance {
            constant: self.constant[k],
            loss: Estimate::from_values(&values, self.seed)?,
            squared: Estimate::from_values(&squares, self.seed)?,
        })
    }

    /// `E[L²_{P_a} L²_{P_b}]`.
    pub fn pair_moment(&self, a: usize, b: usize) -> Result<Estimate> {
        let values: Vec<f64> = self.rows.iter().map(|r| (r[a] * r[b]).powi(2)).collect();
        Estimate::from_values(&values, self.seed)
    }

    /// Per-sample mean of `L²` over all terms.
    pub fn averaged_second_moment(&self) -> Result<Estimate> {
        let k = self.num_terms() as f64;
        let values: Vec<f64> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| v * v).sum::<f64>() / k)
            .collect();
        Estimate::from_values(&values, self.seed)
    }

    /// Mean over terms of the per-term plug-in variance.
    pub fn averaged_variance(&self) -> Result<f64> {
        let k = self.num_terms();
        let mut total = 0.0;
        for t in 0..k {
            total += self.term_variance(t)?.value();
        }
        Ok(total / k as f64)
    }

    /// Per-sample mean of `L²_a L²_b` over all unordered pairs `a < b`.
    pub fn averaged_pair_moment(&self) -> Result<Estimate> {
        let k = self.num_terms();
        if k < 2 {
            return Err(Error::InvalidArgument(
                "pair average needs two terms".into(),
            ));
        }
        let pairs = (k * (k - 1) / 2) as f64;
        let values: Vec<f64> = self
            .rows
            .iter()
            .map(|r| {
                let sq: Vec<f64> = r.iter().map(|v| v * v).collect();
                let s: f64 = sq.iter().sum();
                let s2: f64 = sq.iter().map(|v| v * v).sum();
                (s * s - s2) / 2.0 / pairs
            })
            .collect();
        Estimate::from_values(&values, self.seed)
    }

    /// Per-sample mean of `L²_a L²_b` over the listed pairs.
    pub fn averaged_pair_moment_over(&self, pairs: &[(usize, usize)]) -> Result<Estimate> {
        if pairs.is_empty() {
            return Err(Error::InvalidArgument("empty pair list".into()));
        }
        let values: Vec<f64> = self
            .rows
            .iter()
            .map(|r| {
                pairs
                    .iter()
                    .map(|&(a, b)| (r[a] * r[b]).powi(2))
                    .sum::<f64>()
                    / pairs.len() as f64
            })
            .collect();
        Estimate::from_values(&values, self.seed)
    }
}
