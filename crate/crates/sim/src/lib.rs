//! Simulation harness: configuration, synthetic updates, attack injection,
//! end-to-end rounds, reports and cost sweeps.

pub mod attack;
pub mod bench;
pub mod config;
pub mod error;
pub mod report;
pub mod runner;
pub mod updates;

pub use attack::{AttackKind, AttackSpec};
pub use bench::{bench, params_summary, BenchRow, ParamsSummary};
pub use config::{ReportFormat, SimulationConfig};
pub use error::{Result, SimError};
pub use report::{emit_report, report_rows, ReportRow};
pub use runner::{run_simulation, RoundReport, Simulation};
pub use updates::{generate_updates, quantize_update};

/// Environment variable that overrides the output directory.
pub const OUT_DIR_ENV: &str = "VAGG_OUT_DIR";
