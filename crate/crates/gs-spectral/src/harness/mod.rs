//! Convergence harness: norms, error trackers, sweep driver, snapshots and
//! CLI configuration.

pub mod config;
pub mod norms;
pub mod snapshot;
pub mod study;

pub use config::{parse_config, Cli, Command, RunArgs};
pub use norms::{
    l2_norm_coeffs, l2_norm_field, ExactErrorTracker, ReferenceErrorTracker, ReferenceTrajectory,
};
pub use snapshot::FieldSnapshot;
pub use study::{
    convergence_order, format_float, run_convergence_study, ConvergenceTable, ErrorRecord,
    RunConfig, TableRow,
};
