//! Clifford-point warm starts: coordinate search over `{0, π/2, π, 3π/2}^p`
//! maximizing the number of observable terms with non-zero loss.

use rand::seq::SliceRandom;

use crate::circuit::{CliffordPoint, CprCircuit};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::rng::master_rng;
use crate::stabilizer::StabilizerState;

/// Largest parameter count accepted by [`exhaustive_best`].
pub const EXHAUSTIVE_MAX_PARAMS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WarmStart {
    pub point: CliffordPoint,
    /// Non-zero terms at `point`.
    pub count: usize,
    /// Non-zero terms at the first restart's starting point.
    pub first_start_count: usize,
    /// Number of point evaluations performed.
    pub evaluations: u64,
}

/// Coordinate-ascent search.
///
/// Each restart sweeps the parameters in order at most `sweeps` times,
/// moving a coordinate only on strict improvement, and stops early once a
/// sweep changes nothing. Start points are distinct; when `restarts ≥ 4^p`
/// every grid point is a start, so the exhaustive optimum is returned.
pub fn warmstart_search(
    circuit: &CprCircuit,
    terms: &[PauliString],
    init: &StabilizerState,
    sweeps: usize,
    restarts: usize,
    seed: u64,
) -> Result<WarmStart> {
    if terms.is_empty() {
        return Err(Error::InvalidArgument(
            "warm start needs at least one term".into(),
        ));
    }
    if sweeps == 0 || restarts == 0 {
        return Err(Error::InvalidArgument(
            "sweeps and restarts must be positive".into(),
        ));
    }
    let p = circuit.num_params();
    let mut rng = master_rng(seed);
    let grid = 4u128.checked_pow(p as u32).unwrap_or(u128::MAX);
    let starts: Vec<CliffordPoint> = if restarts as u128 >= grid {
        let mut all: Vec<CliffordPoint> = (0..grid as u64)
            .map(|i| CliffordPoint::from_index(i, p))
            .collect();
        all.shuffle(&mut rng);
        all
    } else {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(restarts);
        while out.len() < restarts {
            let pt = circuit.random_clifford_point(&mut rng);
            if seen.insert(pt.clone()) {
                out.push(pt);
            }
        }
        out
    };

    let mut evaluations = 0u64;
    let mut eval = |pt: &CliffordPoint| {
        evaluations += 1;
        circuit.nonzero_term_count(pt, terms, init)
    };
    let mut best: Option<(CliffordPoint, usize)> = None;
    let mut first_start_count = 0;
    for (r, start) in starts.into_iter().enumerate() {
        let mut current = start;
        let mut count = eval(&current)?;
        if r == 0 {
            first_start_count = count;
        }
        for _ in 0..sweeps {
            let mut moved = false;
            for k in 0..p {
                let original = current.quarters()[k];
                let (mut best_q, mut best_count) = (original, count);
                for q in (0..4u8).filter(|&q| q != original) {
                    current.set(k, q);
                    let c = eval(&current)?;
                    if c > best_count {
                        best_q = q;
                        best_count = c;
                    }
                }
                current.set(k, best_q);
                if best_q != original {
                    moved = true;
                    count = best_count;
                }
            }
            if !moved || count == terms.len() {
                break;
            }
        }
        if best.as_ref().is_none_or(|(_, c)| count > *c) {
            best = Some((current, count));
        }
        if count == terms.len() {
            break;
        }
    }
    let (point, count) = best.expect("at least one restart");
    Ok(WarmStart {
        point,
        count,
        first_start_count,
        evaluations,
    })
}

/// Best point by exhaustive enumeration; ties go to the lowest index.
pub fn exhaustive_best(
    circuit: &CprCircuit,
    terms: &[PauliString],
    init: &StabilizerState,
) -> Result<(CliffordPoint, usize)> {
    let p = circuit.num_params();
    if p > EXHAUSTIVE_MAX_PARAMS {
        return Err(Error::GridTooLarge {
            points: 1u128 << (2 * p),
            guard: 1 << (2 * EXHAUSTIVE_MAX_PARAMS),
        });
    }
    let mut best = (CliffordPoint::zeros(p), 0);
    for i in 0..1u64 << (2 * p) {
        let pt = CliffordPoint::from_index(i, p);
        let c = circuit.nonzero_term_count(&pt, terms, init)?;
        if i == 0 || c > best.1 {
            best = (pt, c);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_single_rotation_optimum() {
        let mut c = CprCircuit::new(1);
        c.push_rotation("X".parse().unwrap()).unwrap();
        let terms: Vec<PauliString> = vec!["Y".parse().unwrap()];
        let zero = StabilizerState::zero(1);
        let ws = warmstart_search(&c, &terms, &zero, 3, 1, 0).unwrap();
        assert_eq!(ws.count, 1);
        assert!(matches!(ws.point.quarters()[0], 1 | 3));
        assert!(warmstart_search(&c, &[], &zero, 3, 1, 0).is_err());
    }
}
