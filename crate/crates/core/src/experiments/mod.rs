//! Experiment harness: configurations, initial data, reference-versus-calmed
//! error studies, slope fits and file formats.

pub mod config;
pub mod fit;
pub mod initial;
pub mod io;
pub mod simulate;
pub mod study;

pub use config::{default_eps_list, InitialPreset, RunConfig};
pub use fit::{fit_loglog_slope, LogLogFit};
pub use initial::make_initial;
pub use io::{load_snapshot, write_snapshot, ErrorSeries, SnapshotMeta};
pub use simulate::simulate;
pub use study::{convergence_study, fit_norms, run_pair, ConvergenceReport, NormFits};
