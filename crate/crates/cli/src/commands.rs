use bpscan::analytics;
use bpscan::estimators::{ensemble_second_moment, LossTable};
use bpscan::rng::{master_rng, mix_seed};
use bpscan::{CprCircuit, Ensemble, PauliString, StabilizerState, StateVector};
use rand::seq::index;

use crate::config::{bad, Config, EnsembleSpec};
use crate::record::{Row, RunRecord};

/// Runs `f` on a dedicated pool of `threads` workers, or on the global
/// pool when `None`.
pub fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> anyhow::Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()?
            .install(f)),
    }
}

struct Instance {
    n: usize,
    layers: usize,
    circuit: CprCircuit,
    terms: Vec<PauliString>,
    init: StabilizerState,
}

impl Instance {
    fn new(cfg: &Config, n: usize) -> anyhow::Result<Self> {
        Ok(Instance {
            n,
            layers: cfg.layers,
            circuit: cfg.circuit_for(n)?,
            terms: cfg.observables_for(n)?,
            init: cfg.initial_state_for(n),
        })
    }

    fn row(
        &self,
        experiment: &str,
        estimator: &str,
        label: String,
        value: f64,
        stderr: f64,
    ) -> Row {
        Row {
            experiment: experiment.into(),
            n: self.n,
            layers: self.layers,
            estimator: estimator.into(),
            label,
            value,
            stderr,
            samples: 0,
            seed: 0,
            scaled_value: value * 2f64.powi(self.n as i32),
            reference: 0.0,
        }
    }

    fn uniform_table(
        &self,
        terms: &[PauliString],
        samples: usize,
        seed: u64,
    ) -> anyhow::Result<LossTable> {
        let psi = StateVector::<f64>::from_stabilizer(&self.init)?;
        Ok(LossTable::uniform(
            &self.circuit,
            terms,
            &psi,
            samples,
            seed,
        )?)
    }

    fn clifford_table(
        &self,
        terms: &[PauliString],
        samples: usize,
        seed: u64,
    ) -> anyhow::Result<LossTable> {
        Ok(LossTable::clifford(
            &self.circuit,
            terms,
            &self.init,
            samples,
            seed,
        )?)
    }

    /// Loss table over all terms; with `shared == false` column `k` is
    /// drawn from its own seed `mix_seed(seed, k + 1)`.
    fn table(
        &self,
        clifford: bool,
        shared: bool,
        samples: usize,
        seed: u64,
    ) -> anyhow::Result<LossTable> {
        let build = |terms: &[PauliString], s| {
            if clifford {
                self.clifford_table(terms, samples, s)
            } else {
                self.uniform_table(terms, samples, s)
            }
        };
        if shared {
            return build(&self.terms, seed);
        }
        let mut combined = LossTable {
            rows: vec![Vec::new(); samples],
            constant: Vec::new(),
            seed,
        };
        for (k, t) in self.terms.iter().enumerate() {
            let col = build(std::slice::from_ref(t), mix_seed(seed, k as u64 + 1))?;
            for (row, v) in combined.rows.iter_mut().zip(&col.rows) {
                row.push(v[0]);
            }
            combined.constant.push(col.constant[0]);
        }
        Ok(combined)
    }
}

fn two_design(n: usize) -> f64 {
    1.0 / (2f64.powi(n as i32) + 1.0)
}

fn four_pow_neg(n: usize) -> f64 {
    4f64.powi(-(n as i32))
}

fn finish(mut row: Row, samples: usize, seed: u64, reference: f64) -> Row {
    row.samples = samples;
    row.seed = seed;
    row.reference = reference;
    row
}

/// Loss variance of every observable, per sampling mode.
pub fn cmd_variance(cfg: &Config) -> anyhow::Result<RunRecord> {
    cfg.validate(&[cfg.n])?;
    with_threads(cfg.threads, || {
        let inst = Instance::new(cfg, cfg.n)?;
        let seed = cfg.sample_seed(cfg.n);
        let mut rec = RunRecord::new("variance", cfg);
        let reference = two_design(cfg.n);
        if cfg.mode.uniform() {
            let table = inst.table(false, cfg.share_points, cfg.samples, seed)?;
            for (k, t) in inst.terms.iter().enumerate() {
                let v = table.term_variance(k)?;
                let row = inst.row(
                    "variance",
                    "variance_uniform",
                    t.unsigned_label(),
                    v.value(),
                    v.stderr(),
                );
                rec.rows
                    .push(finish(row, cfg.samples, term_seed(cfg, seed, k), reference));
            }
        }
        if cfg.mode.clifford() {
            let table = inst.table(true, cfg.share_points, cfg.samples, seed)?;
            for (k, t) in inst.terms.iter().enumerate() {
                let v = table.term_variance(k)?.squared;
                let row = inst.row(
                    "variance",
                    "variance_clifford",
                    t.unsigned_label(),
                    v.mean,
                    v.stderr,
                );
                rec.rows
                    .push(finish(row, cfg.samples, term_seed(cfg, seed, k), reference));
            }
        }
        rec.rows.extend(ensemble_rows(cfg, &inst, seed)?);
        Ok(rec)
    })?
}

fn term_seed(cfg: &Config, seed: u64, k: usize) -> u64 {
    if cfg.share_points {
        seed
    } else {
        mix_seed(seed, k as u64 + 1)
    }
}

fn ensemble_rows(cfg: &Config, inst: &Instance, seed: u64) -> anyhow::Result<Vec<Row>> {
    let n = inst.n as u32;
    let (model, name, reference) = match cfg.ensemble {
        EnsembleSpec::Fixed => return Ok(Vec::new()),
        EnsembleSpec::RandomPauli => {
            let r = if cfg.include_identity {
                analytics::random_pauli_second_moment(n)?
            } else {
                analytics::clifford_ratio(n)?
            };
            (
                Ensemble::RandomPauli {
                    include_identity: cfg.include_identity,
                },
                "ensemble_random_pauli",
                r,
            )
        }
        EnsembleSpec::RandomStabilizer => (
            Ensemble::RandomStabilizer,
            "ensemble_random_stabilizer",
            analytics::clifford_ratio(n)?,
        ),
        EnsembleSpec::RandomCliffordPrefix => (
            Ensemble::RandomCliffordPrefix,
            "ensemble_random_clifford_prefix",
            analytics::clifford_ratio(n)?,
        ),
    };
    let ens_seed = mix_seed(seed, 0xE);
    let observed: Vec<(String, &PauliString)> = match model {
        Ensemble::RandomPauli { .. } => vec![("random".into(), &inst.terms[0])],
        _ => inst.terms.iter().map(|t| (t.unsigned_label(), t)).collect(),
    };
    observed
        .into_iter()
        .map(|(label, t)| {
            let e =
                ensemble_second_moment(model, &inst.circuit, t, &inst.init, cfg.samples, ens_seed)?;
            let row = inst.row("variance", name, label, e.mean, e.stderr);
            Ok(finish(row, cfg.samples, ens_seed, reference.value))
        })
        .collect()
}

fn all_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .collect()
}

/// Discrete and continuous correlators for every pair of observables, or
/// for `pair_cap` sampled pairs when there are more.
pub fn cmd_anticoncentration(cfg: &Config) -> anyhow::Result<RunRecord> {
    cfg.validate(&[cfg.n])?;
    with_threads(cfg.threads, || {
        let inst = Instance::new(cfg, cfg.n)?;
        if inst.terms.len() < 2 {
            return Err(bad("anticoncentration needs at least two observables"));
        }
        let seed = cfg.sample_seed(cfg.n);
        let mut pairs = all_pairs(inst.terms.len());
        let total = pairs.len();
        let average_label = if total > cfg.pair_cap {
            let mut rng = master_rng(cfg.pair_seed(cfg.n));
            let mut picked = index::sample(&mut rng, total, cfg.pair_cap).into_vec();
            picked.sort_unstable();
            pairs = picked.into_iter().map(|i| pairs[i]).collect();
            format!("average_sampled_{}_of_{}", cfg.pair_cap, total)
        } else {
            "average".to_string()
        };
        let reference = four_pow_neg(cfg.n);
        let mut rec = RunRecord::new("anticoncentration", cfg);
        let modes = [
            (false, cfg.mode.uniform(), "continuous_correlator"),
            (true, cfg.mode.clifford(), "discrete_correlator"),
        ];
        for (clifford, enabled, name) in modes {
            if !enabled {
                continue;
            }
            let table = inst.table(clifford, true, cfg.samples, seed)?;
            for &(a, b) in &pairs {
                let e = table.pair_moment(a, b)?;
                let label = format!(
                    "{}|{}",
                    inst.terms[a].unsigned_label(),
                    inst.terms[b].unsigned_label()
                );
                rec.rows.push(finish(
                    inst.row("anticoncentration", name, label, e.mean, e.stderr),
                    cfg.samples,
                    seed,
                    reference,
                ));
            }
            let avg = table.averaged_pair_moment_over(&pairs)?;
            let row = inst.row(
                "anticoncentration",
                name,
                average_label.clone(),
                avg.mean,
                avg.stderr,
            );
            rec.rows.push(finish(row, cfg.samples, seed, reference));
        }
        Ok(rec)
    })?
}

/// The observable-averaged variances and pair-averaged correlators for each
/// `n` in `n_list`, plus reference rows.
pub fn cmd_figure2(cfg: &Config) -> anyhow::Result<RunRecord> {
    cfg.validate(&cfg.n_list)?;
    with_threads(cfg.threads, || {
        let mut rec = RunRecord::new("figure2", cfg);
        for &n in &cfg.n_list {
            let inst = Instance::new(cfg, n)?;
            let seed = cfg.sample_seed(n);
            let exp = "figure2";
            for (clifford, enabled) in [(false, cfg.mode.uniform()), (true, cfg.mode.clifford())] {
                if !enabled {
                    continue;
                }
                let vtable = inst.table(clifford, cfg.share_points, cfg.samples, seed)?;
                let second = vtable.averaged_second_moment()?;
                let (name, value) = if clifford {
                    ("variance_clifford", second.mean)
                } else {
                    ("variance_uniform", vtable.averaged_variance()?)
                };
                let row = inst.row(exp, name, "average".into(), value, second.stderr);
                rec.rows.push(finish(row, cfg.samples, seed, two_design(n)));

                let ctable = if cfg.share_points {
                    vtable
                } else {
                    inst.table(clifford, true, cfg.samples, seed)?
                };
                let name = if clifford {
                    "discrete_correlator"
                } else {
                    "continuous_correlator"
                };
                if inst.terms.len() > 1 {
                    let a = ctable.averaged_pair_moment()?;
                    let row = inst.row(exp, name, "average".into(), a.mean, a.stderr);
                    rec.rows
                        .push(finish(row, cfg.samples, seed, four_pow_neg(n)));
                }
            }
            for (label, v) in [
                ("2^-n", 2f64.powi(-(n as i32))),
                ("1/(2^n+1)", two_design(n)),
                ("4^-n", four_pow_neg(n)),
            ] {
                rec.rows.push(finish(
                    inst.row(exp, "reference", label.into(), v, 0.0),
                    0,
                    0,
                    v,
                ));
            }
        }
        Ok(rec)
    })?
}

/// Warm-start search on the ansatz with the configured observables,
/// against the spread of non-zero counts at random Clifford points.
pub fn cmd_warmstart(cfg: &Config) -> anyhow::Result<RunRecord> {
    cfg.validate(&[cfg.n])?;
    with_threads(cfg.threads, || {
        let inst = Instance::new(cfg, cfg.n)?;
        let seed = cfg.search_seed(cfg.n);
        let ws = &cfg.warmstart;
        let found = bpscan::warmstart_search(
            &inst.circuit,
            &inst.terms,
            &inst.init,
            ws.sweeps,
            ws.restarts,
            seed,
        )?;
        let mut rng = master_rng(mix_seed(seed, 1));
        let counts = (0..ws.random_points)
            .map(|_| {
                let pt = inst.circuit.random_clifford_point(&mut rng);
                inst.circuit
                    .nonzero_term_count(&pt, &inst.terms, &inst.init)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let total = inst.terms.len() as f64;
        let mean = counts.iter().sum::<usize>() as f64 / counts.len() as f64;
        let max = *counts.iter().max().expect("random_points > 0") as f64;
        let point: String = found
            .point
            .quarters()
            .iter()
            .map(|q| char::from(b'0' + q))
            .collect();
        let mut rec = RunRecord::new("warmstart", cfg);
        let mut push = |estimator: &str, label: String, value: f64, samples| {
            let mut row = finish(
                inst.row("warmstart", estimator, label, value, 0.0),
                samples,
                seed,
                total,
            );
            row.scaled_value = value / total;
            rec.rows.push(row);
        };
        push("best_count", point, found.count as f64, ws.restarts);
        push(
            "first_start_count",
            String::new(),
            found.first_start_count as f64,
            1,
        );
        push("random_mean", String::new(), mean, ws.random_points);
        push("random_max", String::new(), max, ws.random_points);
        if inst.circuit.num_params() <= 6 {
            let (_, best) =
                bpscan::warmstart::exhaustive_best(&inst.circuit, &inst.terms, &inst.init)?;
            push(
                "exhaustive_optimum",
                String::new(),
                best as f64,
                1 << (2 * inst.circuit.num_params()),
            );
        }
        Ok(rec)
    })?
}
