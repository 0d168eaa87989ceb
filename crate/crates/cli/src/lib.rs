//! Seeded, configuration-driven experiment runner.
//!
//! Every command takes a [`Config`], fans samples out on a rayon pool and
//! returns a [`RunRecord`] whose CSV rendering is byte-identical for any
//! worker count.

pub mod commands;
pub mod config;
pub mod oracle;
pub mod record;

pub use commands::{cmd_anticoncentration, cmd_figure2, cmd_variance, cmd_warmstart, with_threads};
pub use config::{Config, ConfigError, Mode, Overrides};
pub use oracle::{cmd_oracle, OracleReport};
pub use record::{parse_csv, Row, RunRecord, CSV_HEADER};

/// Exit status for a finished run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_ORACLE: i32 = 2;
