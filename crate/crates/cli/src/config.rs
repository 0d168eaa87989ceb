use std::path::Path;

use bpscan::rng::mix_seed;
use bpscan::{two_body_nn_paulis, CprCircuit, Entangler, HeaOptions, PauliString, StabilizerState};
use serde::{Deserialize, Serialize};

/// Error in the configuration or its overrides; maps to exit code 1.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub(crate) fn bad(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Uniform,
    Clifford,
    #[default]
    Both,
}

impl Mode {
    pub fn uniform(self) -> bool {
        matches!(self, Mode::Uniform | Mode::Both)
    }

    pub fn clifford(self) -> bool {
        matches!(self, Mode::Clifford | Mode::Both)
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Mode::Uniform),
            "clifford" => Ok(Mode::Clifford),
            "both" => Ok(Mode::Both),
            _ => Err(format!("unknown mode '{s}' (uniform, clifford, both)")),
        }
    }
}

/// Experiments default to a CX ladder: each CX feeds the next, so one layer
/// reaches across the whole chain, while a CZ layer is diagonal and only
/// spreads operators by one site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EntanglerSpec {
    Cz,
    #[default]
    Cx,
}

/// `"two_body_nn"` or an explicit list of Pauli labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservableSpec {
    Named(String),
    Labels(Vec<String>),
}

impl Default for ObservableSpec {
    fn default() -> Self {
        ObservableSpec::Named("two_body_nn".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    #[default]
    Zero,
    RandomStabilizer(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleSpec {
    #[default]
    Fixed,
    RandomPauli,
    RandomStabilizer,
    RandomCliffordPrefix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WarmstartConfig {
    pub sweeps: usize,
    pub restarts: usize,
    pub random_points: usize,
}

impl Default for WarmstartConfig {
    fn default() -> Self {
        WarmstartConfig {
            sweeps: 50,
            restarts: 10,
            random_points: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub n: usize,
    /// Qubit counts swept by `figure2`.
    pub n_list: Vec<usize>,
    pub layers: usize,
    pub samples: usize,
    pub seed: u64,
    pub mode: Mode,
    pub threads: Option<usize>,
    /// Evaluate every observable at the same sample points.
    pub share_points: bool,
    /// Largest number of pairs reported individually by `anticoncentration`.
    pub pair_cap: usize,
    pub entangler: EntanglerSpec,
    pub hadamard_layer: bool,
    pub observables: ObservableSpec,
    pub initial_state: InitialState,
    pub ensemble: EnsembleSpec,
    /// Whether the random-Pauli ensemble may draw the identity.
    pub include_identity: bool,
    pub warmstart: WarmstartConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            n: 4,
            n_list: vec![2, 4, 6, 8],
            layers: 30,
            samples: 500,
            seed: 0,
            mode: Mode::Both,
            threads: None,
            share_points: true,
            pair_cap: 500,
            entangler: EntanglerSpec::Cx,
            hadamard_layer: false,
            observables: ObservableSpec::default(),
            initial_state: InitialState::Zero,
            ensemble: EnsembleSpec::Fixed,
            include_identity: true,
            warmstart: WarmstartConfig::default(),
        }
    }
}

const CIRCUIT_SALT: u64 = 0x100;
const SAMPLE_SALT: u64 = 0x200;
const PAIR_SALT: u64 = 0x300;
const STATE_SALT: u64 = 0x400;
const SEARCH_SALT: u64 = 0x500;

impl Config {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks counts and, for every qubit count in `ns`, the observables.
    pub fn validate(&self, ns: &[usize]) -> anyhow::Result<()> {
        let positive = [
            ("n", self.n),
            ("layers", self.layers),
            ("samples", self.samples),
            ("pair_cap", self.pair_cap),
            ("warmstart.sweeps", self.warmstart.sweeps),
            ("warmstart.restarts", self.warmstart.restarts),
            ("warmstart.random_points", self.warmstart.random_points),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(bad(format!("{name} must be positive")));
            }
        }
        if self.threads == Some(0) {
            return Err(bad("threads must be positive"));
        }
        if ns.is_empty() {
            return Err(bad("no qubit counts given"));
        }
        for &n in ns {
            if n < 2 {
                return Err(bad(format!(
                    "n = {n}: the ansatz needs at least two qubits"
                )));
            }
            if self.mode.uniform() && n > bpscan::statevector::DEFAULT_QUBIT_CAP {
                return Err(bad(format!("n = {n} exceeds the statevector cap")));
            }
            self.observables_for(n)?;
        }
        Ok(())
    }

    pub fn observables_for(&self, n: usize) -> anyhow::Result<Vec<PauliString>> {
        let terms = match &self.observables {
            ObservableSpec::Named(name) if name == "two_body_nn" => two_body_nn_paulis(n)?,
            ObservableSpec::Named(name) => {
                return Err(bad(format!("unknown observable set '{name}'")))
            }
            ObservableSpec::Labels(labels) => labels
                .iter()
                .map(|l| {
                    l.parse::<PauliString>()
                        .map_err(|e| bad(format!("observable '{l}': {e}")))
                })
                .collect::<anyhow::Result<_>>()?,
        };
        if terms.is_empty() {
            return Err(bad("empty observable list"));
        }
        for t in &terms {
            if t.num_qubits() != n {
                return Err(bad(format!("observable {t} does not act on {n} qubits")));
            }
            if t.is_identity() {
                return Err(bad("identity observable has a constant loss"));
            }
        }
        Ok(terms)
    }

    pub fn hea_options(&self) -> HeaOptions {
        HeaOptions {
            entangler: match self.entangler {
                EntanglerSpec::Cz => Entangler::CZ,
                EntanglerSpec::Cx => Entangler::CX,
            },
            hadamard_layer: self.hadamard_layer,
        }
    }

    pub fn circuit_for(&self, n: usize) -> anyhow::Result<CprCircuit> {
        let mut rng = bpscan::rng::master_rng(mix_seed(self.seed, CIRCUIT_SALT + n as u64));
        Ok(bpscan::hea_circuit_with(
            n,
            self.layers,
            self.hea_options(),
            &mut rng,
        )?)
    }

    pub fn initial_state_for(&self, n: usize) -> StabilizerState {
        match self.initial_state {
            InitialState::Zero => StabilizerState::zero(n),
            InitialState::RandomStabilizer(seed) => StabilizerState::random(
                n,
                &mut bpscan::rng::master_rng(mix_seed(seed, STATE_SALT + n as u64)),
            ),
        }
    }

    pub fn sample_seed(&self, n: usize) -> u64 {
        mix_seed(self.seed, SAMPLE_SALT + n as u64)
    }

    pub fn pair_seed(&self, n: usize) -> u64 {
        mix_seed(self.seed, PAIR_SALT + n as u64)
    }

    pub fn search_seed(&self, n: usize) -> u64 {
        mix_seed(self.seed, SEARCH_SALT + n as u64)
    }
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub layers: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<Mode>,
    pub threads: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut Config) {
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(list) = &self.n_list {
            cfg.n_list = list.clone();
        }
        if let Some(v) = self.layers {
            cfg.layers = v;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.mode {
            cfg.mode = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = Some(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_partial_json() {
        let cfg = Config::from_json(
            r#"{"n": 6, "mode": "clifford", "initial_state": {"random_stabilizer": 3}}"#,
        )
        .unwrap();
        assert_eq!(cfg.n, 6);
        assert_eq!(cfg.mode, Mode::Clifford);
        assert_eq!(cfg.samples, 500);
        assert_eq!(cfg.initial_state, InitialState::RandomStabilizer(3));
        assert_eq!(Config::from_json(&cfg.to_json()).unwrap(), cfg);
        assert!(Config::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = Config {
            samples: 0,
            ..Config::default()
        };
        assert!(cfg.validate(&[4]).is_err());
        cfg.samples = 10;
        cfg.validate(&[4]).unwrap();
        cfg.observables = ObservableSpec::Labels(vec!["XZ".into()]);
        assert!(cfg.validate(&[4]).is_err());
        cfg.validate(&[2]).unwrap();
        assert!(cfg.validate(&[]).is_err());
    }
}
