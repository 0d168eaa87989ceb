//! Self-checks against independent references: dense matrices, quadrature,
//! enumeration, goodness of fit and exact analytics.

use std::collections::HashMap;

use bpscan::analytics::{self, ratio};
use bpscan::dense::{gate_matrix, pauli_matrix, rotation_matrix};
use bpscan::estimators::{exact_grid_moment, DEFAULT_GRID_GUARD};
use bpscan::rng::{master_rng, mix_seed};
use bpscan::stabilizer::{enumerate_stabilizer_states, stabilizer_state_count};
use bpscan::stats::chi_square_uniform;
use bpscan::{
    hea_circuit, two_body_nn_paulis, CliffordGate, CliffordTableau, CprCircuit, PauliString,
    Rational, StabilizerState, StateVector,
};
use rand::Rng;

use crate::config::Config;
use crate::record::{Row, RunRecord};

/// Heisenberg conjugation rule under test: `G† P G`.
pub type ConjugationFn = fn(&PauliString, &CliffordGate) -> PauliString;

pub fn library_conjugation(p: &PauliString, g: &CliffordGate) -> PauliString {
    p.conjugate_by_gate(g).expect("gate checked against n")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub checks: Vec<Check>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "{} {:<26} measured {:.3e} tol {:.3e}  {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.tolerance,
                    c.detail
                )
            })
            .collect()
    }

    pub fn to_record(&self, cfg: &Config) -> RunRecord {
        let mut rec = RunRecord::new("oracle", cfg);
        for c in &self.checks {
            rec.rows.push(Row {
                experiment: "oracle".into(),
                n: 0,
                layers: 0,
                estimator: c.name.into(),
                label: if c.passed { "pass" } else { "fail" }.into(),
                value: c.measured,
                stderr: 0.0,
                samples: 0,
                seed: cfg.seed,
                scaled_value: c.measured,
                reference: c.tolerance,
            });
        }
        rec
    }
}

fn check(name: &'static str, measured: f64, tolerance: f64, detail: String) -> Check {
    Check {
        name,
        passed: measured <= tolerance,
        measured,
        tolerance,
        detail,
    }
}

fn all_paulis(n: usize) -> Vec<PauliString> {
    (0..1u64 << (2 * n))
        .map(|code| {
            let (mut x, mut z) = (0, 0);
            for q in 0..n {
                x |= ((code >> (2 * q)) & 1) << q;
                z |= ((code >> (2 * q + 1)) & 1) << q;
            }
            PauliString::from_masks(n, x, z, false).expect("masks fit")
        })
        .collect()
}

fn random_circuit(n: usize, params: usize, rng: &mut impl Rng) -> CprCircuit {
    let gates = CliffordGate::all_on(n);
    let mut c = CprCircuit::new(n);
    for _ in 0..params {
        for _ in 0..2 {
            c.push_gate(gates[rng.gen_range(0..gates.len())])
                .expect("gate in range");
        }
        c.push_rotation(PauliString::random(n, rng, false))
            .expect("non-identity axis");
    }
    c
}

fn dense_conjugation(conj: ConjugationFn) -> Check {
    let mut mismatches = 0u32;
    let mut total = 0u32;
    for n in 1..=3 {
        for g in CliffordGate::all_on(n) {
            let u = gate_matrix(&g, n);
            for p in all_paulis(n) {
                for p in [p.clone(), p.negated()] {
                    let expected = u.adjoint().mul(&pauli_matrix(&p)).mul(&u);
                    total += 1;
                    if pauli_matrix(&conj(&p, &g)).max_abs_diff(&expected) > 1e-12 {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    check(
        "dense_conjugation",
        mismatches as f64,
        0.0,
        format!("{mismatches}/{total} gate images differ"),
    )
}

fn dense_rotation() -> Check {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut mismatches = 0u32;
    for axis in all_paulis(2).into_iter().skip(1) {
        for k in 0..4u8 {
            let r = rotation_matrix(&axis, k as f64 * half_pi);
            for p in all_paulis(2) {
                let expected = r.adjoint().mul(&pauli_matrix(&p)).mul(&r);
                let got = p
                    .conjugate_by_quarter_rotation(&axis, k)
                    .expect("non-identity axis");
                if pauli_matrix(&got).max_abs_diff(&expected) > 1e-12 {
                    mismatches += 1;
                }
            }
        }
    }
    check(
        "dense_quarter_rotation",
        mismatches as f64,
        0.0,
        format!("{mismatches} images differ"),
    )
}

fn quadrature_identity(seed: u64) -> anyhow::Result<Check> {
    let mut rng = master_rng(mix_seed(seed, 1));
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let n = 1 + trial % 3;
        let c = random_circuit(n, 1 + trial % 6, &mut rng);
        let obs = [PauliString::random(n, &mut rng, false)];
        let init = StateVector::zero_state(n)?;
        let m4 = exact_grid_moment(&c, &obs, &init, 4, DEFAULT_GRID_GUARD)?;
        let m5 = exact_grid_moment(&c, &obs, &init, 5, DEFAULT_GRID_GUARD)?;
        worst = worst.max((m4 - m5).abs());
    }
    Ok(check(
        "quadrature_identity",
        worst,
        1e-9,
        "20 circuits, grid m=4 vs m=5".into(),
    ))
}

fn heisenberg_vs_statevector(seed: u64) -> anyhow::Result<Check> {
    let mut rng = master_rng(mix_seed(seed, 2));
    let mut worst: f64 = 0.0;
    for trial in 0..200 {
        let n = 2 + trial % 5;
        let c = hea_circuit(n, 2, &mut rng)?;
        let obs = two_body_nn_paulis(n)?;
        let p = &obs[rng.gen_range(0..obs.len())];
        let pt = c.random_clifford_point(&mut rng);
        let exact = c.eval_at_clifford_point(&pt, p, &StabilizerState::zero(n))?;
        let psi = StateVector::<f64>::zero_state(n)?.evolve(&c, &pt.to_angles())?;
        worst = worst.max((psi.expectation(p)? - exact as f64).abs());
    }
    Ok(check(
        "heisenberg_vs_statevector",
        worst,
        1e-9,
        "200 HEA triples".into(),
    ))
}

fn nonzero(s: &StabilizerState, p: &PauliString) -> bool {
    s.expectation(p).is_ok_and(|e| e != 0)
}

fn stabilizer_enumeration() -> anyhow::Result<Check> {
    let mut errors = Vec::new();
    for n in 1..=3usize {
        let states = enumerate_stabilizer_states(n)?;
        if states.len() as u128 != stabilizer_state_count(n as u32) {
            errors.push(format!("n={n}: {} states", states.len()));
        }
    }
    let states = enumerate_stabilizer_states(2)?;
    let paulis: Vec<PauliString> = all_paulis(2).into_iter().skip(1).collect();
    for (i, a) in paulis.iter().enumerate() {
        let single = states.iter().filter(|s| nonzero(s, a)).count();
        if ratio(single as i64, 60) != ratio(1, 5) {
            errors.push(format!("single {a}"));
        }
        for b in &paulis[i + 1..] {
            let hits = states
                .iter()
                .filter(|s| nonzero(s, a) && nonzero(s, b))
                .count();
            let expected = analytics::stabilizer_pair_moment(2, a.commutes(b)?)?.exact;
            if Some(ratio(hits as i64, 60)) != expected {
                errors.push(format!("pair {a} {b}"));
            }
        }
    }
    Ok(check(
        "stabilizer_enumeration",
        errors.len() as f64,
        0.0,
        if errors.is_empty() {
            "counts 6/60/1080, n=2 moments exact".into()
        } else {
            errors.join("; ")
        },
    ))
}

fn sampler_uniformity(seed: u64) -> anyhow::Result<Check> {
    let mut rng = master_rng(mix_seed(seed, 3));
    let p: PauliString = "ZI".parse()?;
    let mut counts: HashMap<String, u64> = HashMap::new();
    for _ in 0..15_000 {
        let image = CliffordTableau::random(2, &mut rng).conjugate_pauli(&p)?;
        *counts.entry(image.unsigned_label()).or_default() += 1;
    }
    let mut bins: Vec<u64> = counts.into_values().collect();
    bins.resize(15, 0);
    let out = chi_square_uniform(&bins, 0.999)?;
    Ok(check(
        "sampler_uniformity",
        out.statistic,
        out.critical,
        "orbit of ZI, 15 bins, 15000 draws".into(),
    ))
}

fn analytics_exactness() -> anyhow::Result<Check> {
    let mut errors = Vec::new();
    let mut expect = |name: &str, got: Option<Rational>, want| {
        if got != Some(want) {
            errors.push(name.to_string());
        }
    };
    expect(
        "wg4_identity(2)",
        analytics::wg4_identity(2)?.exact,
        ratio(134, 20160),
    );
    expect(
        "two_design_single_pauli(2)",
        analytics::two_design_single_pauli(2)?.exact,
        ratio(1, 5),
    );
    expect(
        "clifford_ratio(4)",
        analytics::clifford_ratio(4)?.exact,
        ratio(1, 17),
    );
    expect(
        "stabilizer_pair_moment(4)",
        analytics::stabilizer_pair_moment(4, true)?.exact,
        ratio(1, 153),
    );
    let wg8 = analytics::wg4_identity(8)?;
    let scaled = wg8.exact.expect("exact at n=8") * ratio(16i64.pow(8), 1);
    if scaled < ratio(99, 100) || scaled > ratio(101, 100) {
        errors.push(format!("16^8·wg4(8) = {}", wg8.value * 16f64.powi(8)));
    }
    Ok(check(
        "analytics_exactness",
        errors.len() as f64,
        0.0,
        if errors.is_empty() {
            "exact rationals".into()
        } else {
            errors.join("; ")
        },
    ))
}

/// Runs every check with the given conjugation rule.
pub fn run_checks(cfg: &Config, conj: ConjugationFn) -> anyhow::Result<OracleReport> {
    Ok(OracleReport {
        checks: vec![
            dense_conjugation(conj),
            dense_rotation(),
            quadrature_identity(cfg.seed)?,
            heisenberg_vs_statevector(cfg.seed)?,
            stabilizer_enumeration()?,
            sampler_uniformity(cfg.seed)?,
            analytics_exactness()?,
        ],
    })
}

pub fn cmd_oracle(cfg: &Config) -> anyhow::Result<OracleReport> {
    crate::commands::with_threads(cfg.threads, || run_checks(cfg, library_conjugation))?
}
