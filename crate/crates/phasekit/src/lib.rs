//! Phase-diagram scans, boundary tracing and multicritical search on top of
//! `phasekit-core`, with CSV and JSON output.

pub mod config;
pub mod format;
pub mod multicritical;
pub mod parallel;
pub mod scan;
pub mod selfcheck;
pub mod trace;

pub use config::{ConfigError, Settings};
pub use multicritical::{find_multicritical, MulticriticalReport};
pub use parallel::Rayon;
pub use scan::{run_scan, write_csv, Axis, Method, PointFlag, ScanRecord, ScanSpec, SpecError};
pub use selfcheck::run_selfcheck;
pub use trace::{trace_boundary, TraceEntry, TraceMethod};
