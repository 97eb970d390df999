//! The verification harness: algebra config ingestion, seeded identity
//! suites, and JSON residual reports.

pub mod config;
pub mod report;
pub mod sampling;
pub mod suites;

pub use config::{load_algebra, parse_algebra_config, AlgebraConfig};
pub use report::{ResidualReport, SampleRecord};
pub use suites::{build_family, run_identity, CaseOptions, CdybeFamily, IdentityId, DEFAULT_SEED};
