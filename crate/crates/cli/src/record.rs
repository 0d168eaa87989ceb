use std::fmt::Write as _;
use std::path::Path;

use crate::config::Config;

pub const CSV_HEADER: &str =
    "experiment,n,layers,estimator,label,value,stderr,samples,seed,scaled_value,reference";

/// One CSV line.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub n: usize,
    pub layers: usize,
    pub estimator: String,
    pub label: String,
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    pub scaled_value: f64,
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub experiment: String,
    pub config: Config,
    pub rows: Vec<Row>,
}

// 17 significant digits round-trip any f64.
fn float(v: f64) -> String {
    format!("{v:.16e}")
}

impl RunRecord {
    pub fn new(experiment: &str, config: &Config) -> Self {
        RunRecord {
            experiment: experiment.into(),
            config: config.clone(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.experiment,
                r.n,
                r.layers,
                r.estimator,
                r.label,
                float(r.value),
                float(r.stderr),
                r.samples,
                r.seed,
                float(r.scaled_value),
                float(r.reference)
            )
            .expect("writing to a String");
        }
        out
    }

    /// Writes the CSV to `path` and the config echo to `path` + `.json`.
    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        std::fs::write(path, self.to_csv())?;
        let mut echo = path.as_os_str().to_owned();
        echo.push(".json");
        std::fs::write(echo, self.config.to_json())?;
        Ok(())
    }
}

/// Parses a CSV produced by [`RunRecord::to_csv`].
pub fn parse_csv(text: &str) -> anyhow::Result<Vec<Row>> {
    let mut lines = text.lines();
    anyhow::ensure!(lines.next() == Some(CSV_HEADER), "unexpected CSV header");
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            anyhow::ensure!(f.len() == 11, "expected 11 fields in '{line}'");
            Ok(Row {
                experiment: f[0].into(),
                n: f[1].parse()?,
                layers: f[2].parse()?,
                estimator: f[3].into(),
                label: f[4].into(),
                value: f[5].parse()?,
                stderr: f[6].parse()?,
                samples: f[7].parse()?,
                seed: f[8].parse()?,
                scaled_value: f[9].parse()?,
                reference: f[10].parse()?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        let mut rec = RunRecord::new("t", &Config::default());
        for v in [0.1, 1.0 / 3.0, 2f64.powi(-40), 0.0, 123456.789] {
            rec.rows.push(Row {
                experiment: "t".into(),
                n: 2,
                layers: 1,
                estimator: "e".into(),
                label: "XX".into(),
                value: v,
                stderr: v / 7.0,
                samples: 5,
                seed: u64::MAX,
                scaled_value: v * 4.0,
                reference: 0.2,
            });
        }
        assert_eq!(parse_csv(&rec.to_csv()).unwrap(), rec.rows);
    }
}
