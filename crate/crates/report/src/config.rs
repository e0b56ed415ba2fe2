use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use gr1_core::analyses::{DEFAULT_MAX_CUBES, DEFAULT_MAX_K};
use gr1_core::traces::{DEFAULT_HORIZON, DEFAULT_MAX_TRACE_STEPS};
use gr1_core::Limits;

use crate::error::ReportError;

/// Report sections, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnalysisId {
    Semantics,
    Positions,
    Falsify,
    Assumptions,
    Resilience,
    Precommit,
    Stuckat,
    Trace,
    Abstract,
}

impl AnalysisId {
    pub const ALL: [AnalysisId; 9] = [
        AnalysisId::Semantics,
        AnalysisId::Positions,
        AnalysisId::Falsify,
        AnalysisId::Assumptions,
        AnalysisId::Resilience,
        AnalysisId::Precommit,
        AnalysisId::Stuckat,
        AnalysisId::Trace,
        AnalysisId::Abstract,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AnalysisId::Semantics => "semantics",
            AnalysisId::Positions => "positions",
            AnalysisId::Falsify => "falsify",
            AnalysisId::Assumptions => "assumptions",
            AnalysisId::Resilience => "resilience",
            AnalysisId::Precommit => "precommit",
            AnalysisId::Stuckat => "stuckat",
            AnalysisId::Trace => "trace",
            AnalysisId::Abstract => "abstract",
        }
    }
}

impl fmt::Display for AnalysisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AnalysisId {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AnalysisId::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| ReportError::Config(format!("unknown analysis '{s}'")))
    }
}

/// Which realizability verdicts the semantics section reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SemanticsChoice {
    Strict,
    Nonstrict,
    Both,
}

impl SemanticsChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            SemanticsChoice::Strict => "strict",
            SemanticsChoice::Nonstrict => "nonstrict",
            SemanticsChoice::Both => "both",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportConfig {
    /// Requested analyses; run in canonical order regardless of the order given.
    pub analyses: Vec<AnalysisId>,
    pub semantics: SemanticsChoice,
    pub robotics: bool,
    pub max_k: u32,
    pub max_cubes: usize,
    pub max_trace_steps: usize,
    pub abstract_horizon: usize,
    pub node_budget: usize,
    /// Per analysis; `None` means unlimited.
    pub timeout: Option<Duration>,
    /// Include wall-clock times in the JSON (breaks byte-identical output).
    pub timings: bool,
    pub json_path: Option<PathBuf>,
    pub html_path: Option<PathBuf>,
    /// Graphviz dump of the baseline winning region.
    pub dump_bdd: Option<PathBuf>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            analyses: AnalysisId::ALL.to_vec(),
            semantics: SemanticsChoice::Both,
            robotics: false,
            max_k: DEFAULT_MAX_K,
            max_cubes: DEFAULT_MAX_CUBES,
            max_trace_steps: DEFAULT_MAX_TRACE_STEPS,
            abstract_horizon: DEFAULT_HORIZON,
            node_budget: Limits::DEFAULT_NODE_BUDGET,
            timeout: None,
            timings: false,
            json_path: None,
            html_path: None,
            dump_bdd: None,
        }
    }
}

impl ReportConfig {
    /// Parses a comma-separated analysis list such as `positions,stuckat`.
    pub fn parse_analyses(list: &str) -> Result<Vec<AnalysisId>, ReportError> {
        let mut out: Vec<AnalysisId> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect::<Result<_, _>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        let bounds = [
            ("max-k", self.max_k as usize),
            ("max-cubes", self.max_cubes),
            ("max-trace-steps", self.max_trace_steps),
            ("abstract-horizon", self.abstract_horizon),
            ("node-budget", self.node_budget),
        ];
        if let Some((name, _)) = bounds.iter().find(|b| b.1 == 0) {
            return Err(ReportError::Config(format!("--{name} must be positive")));
        }
        if self.timeout == Some(Duration::ZERO) {
            return Err(ReportError::Config("--timeout must be positive".into()));
        }
        Ok(())
    }

    pub fn wants(&self, id: AnalysisId) -> bool {
        self.analyses.contains(&id)
    }
}
