use std::process::Command;

use bpscan::{CliffordGate, PauliString};
use bpscan_cli::config::EnsembleSpec;
use bpscan_cli::oracle::{library_conjugation, run_checks};
use bpscan_cli::{
    cmd_anticoncentration, cmd_figure2, cmd_variance, cmd_warmstart, parse_csv, Config, Mode,
    CSV_HEADER,
};

fn small() -> Config {
    Config {
        n: 4,
        layers: 4,
        samples: 200,
        seed: 7,
        ..Config::default()
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bpscan"))
}

#[test]
fn variance_rows_cover_every_term_and_mode() {
    let rec = cmd_variance(&small()).unwrap();
    // 9 two-body Paulis on each of 3 edges.
    let per_mode = 27;
    assert_eq!(
        rec.rows
            .iter()
            .filter(|r| r.estimator == "variance_uniform")
            .count(),
        per_mode
    );
    assert_eq!(
        rec.rows
            .iter()
            .filter(|r| r.estimator == "variance_clifford")
            .count(),
        per_mode
    );
    for r in &rec.rows {
        assert_eq!(r.n, 4);
        assert!(r.value >= 0.0 && r.value <= 1.0, "{r:?}");
        assert_eq!(r.reference, 1.0 / 17.0);
    }
}

#[test]
fn single_mode_drops_the_other_estimator() {
    let cfg = Config {
        mode: Mode::Uniform,
        ..small()
    };
    let rec = cmd_variance(&cfg).unwrap();
    assert!(rec.rows.iter().all(|r| r.estimator != "variance_clifford"));
    assert!(!rec.rows.is_empty());
}

#[test]
fn ensemble_rows_are_added() {
    let cfg = Config {
        ensemble: EnsembleSpec::RandomPauli,
        ..small()
    };
    let base = cmd_variance(&small()).unwrap().rows.len();
    assert!(cmd_variance(&cfg).unwrap().rows.len() > base);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let a = cmd_variance(&small()).unwrap().to_csv();
    let b = cmd_variance(&small()).unwrap().to_csv();
    assert_eq!(a, b);
    let c = cmd_variance(&Config { seed: 8, ..small() })
        .unwrap()
        .to_csv();
    assert_ne!(a, c);
}

#[test]
fn csv_round_trips_with_fixed_header() {
    let csv = cmd_figure2(&Config {
        n_list: vec![2, 3],
        layers: 3,
        samples: 50,
        ..Config::default()
    })
    .unwrap()
    .to_csv();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    let rows = parse_csv(&csv).unwrap();
    assert!(rows
        .iter()
        .any(|r| r.estimator == "reference" && r.label == "2^-n" && r.n == 3));
    assert!(rows.iter().all(|r| r.experiment == "figure2"));
}

#[test]
fn zero_samples_is_a_config_error() {
    let err = cmd_variance(&Config {
        samples: 0,
        ..small()
    })
    .unwrap_err();
    assert!(err.to_string().contains("samples"), "{err}");
    assert!(Config::from_json(r#"{"bogus": 1}"#).is_err());
}

#[test]
fn anticoncentration_lists_every_pair_at_n2() {
    let cfg = Config {
        n: 2,
        layers: 3,
        samples: 100,
        ..Config::default()
    };
    let rec = cmd_anticoncentration(&cfg).unwrap();
    for est in ["continuous_correlator", "discrete_correlator"] {
        let pairs: Vec<_> = rec
            .rows
            .iter()
            .filter(|r| r.estimator == est && r.label.contains('|'))
            .collect();
        // 9 two-body Paulis on one edge.
        assert_eq!(pairs.len(), 36, "{est}");
        assert!(pairs.iter().all(|r| (0.0..=1.0).contains(&r.value)));
    }
}

#[test]
fn pair_cap_samples_and_flags() {
    let cfg = Config {
        n: 6,
        layers: 2,
        samples: 20,
        pair_cap: 200,
        ..Config::default()
    };
    let rec = cmd_anticoncentration(&cfg).unwrap();
    let pairs = rec
        .rows
        .iter()
        .filter(|r| r.estimator == "discrete_correlator" && r.label.contains('|'))
        .count();
    assert_eq!(pairs, 200);
    // 45 terms give 990 pairs.
    assert!(rec
        .rows
        .iter()
        .any(|r| r.label.starts_with("average_sampled_200_of_990")));
}

#[test]
fn warmstart_is_deterministic_and_bounded() {
    let cfg = Config {
        n: 3,
        layers: 1,
        ..Config::default()
    };
    let a = cmd_warmstart(&cfg).unwrap();
    assert_eq!(a.to_csv(), cmd_warmstart(&cfg).unwrap().to_csv());
    let get = |name: &str| a.rows.iter().find(|r| r.estimator == name).map(|r| r.value);
    let best = get("best_count").unwrap();
    assert!(best >= get("first_start_count").unwrap());
    assert!(best <= get("exhaustive_optimum").unwrap_or(f64::INFINITY));
    assert!(best <= a.rows[0].reference);
}

fn sign_bug(p: &PauliString, g: &CliffordGate) -> PauliString {
    let out = library_conjugation(p, g);
    if matches!(g, CliffordGate::H(_)) && !out.is_identity() {
        out.negated()
    } else {
        out
    }
}

#[test]
fn oracle_catches_a_sign_error() {
    let cfg = Config::default();
    let good = run_checks(&cfg, library_conjugation).unwrap();
    assert!(good.passed(), "{}", good.summary());
    let bad = run_checks(&cfg, sign_bug).unwrap();
    assert!(!bad.passed());
    let failing: Vec<_> = bad
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    assert_eq!(failing, ["dense_conjugation"]);
}

#[test]
fn binary_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.csv");
    let status = bin()
        .args([
            "variance",
            "--n",
            "3",
            "--layers",
            "2",
            "--samples",
            "30",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with(CSV_HEADER));
    let echo = std::fs::read_to_string(dir.path().join("v.csv.json")).unwrap();
    assert_eq!(Config::from_json(&echo).unwrap().samples, 30);

    let status = bin().args(["variance", "--samples", "0"]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&status.stderr).contains("error"));

    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"layers": 0}"#).unwrap();
    let status = bin()
        .arg("figure2")
        .arg("--config")
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    let oracle = bin().args(["oracle"]).output().unwrap();
    assert_eq!(
        oracle.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&oracle.stderr)
    );
    assert!(String::from_utf8_lossy(&oracle.stderr)
        .lines()
        .all(|l| l.starts_with("PASS")));
}
