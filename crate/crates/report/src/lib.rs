//! Report generation for GR(1) specifications: runs every analysis of
//! `gr1-core` on a specification file and writes a JSON and a static HTML
//! report.

pub mod config;
pub mod error;
pub mod html;
mod report;

pub use config::{AnalysisId, ReportConfig, SemanticsChoice};
pub use error::ReportError;
pub use report::{build_report, compile_source, run_report, Report, TOOL_NAME, TOOL_VERSION};

/// JSON schema the reports conform to.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
