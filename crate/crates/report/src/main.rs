use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use gr1report::{run_report, ReportConfig, SemanticsChoice};

/// Analyze a GR(1) specification and write JSON and HTML reports.
#[derive(Parser, Debug)]
#[command(name = "gr1report", version)]
struct Cli {
    /// Specification file.
    spec: PathBuf,
    /// HTML output path [default: SPEC.report.html]
    #[arg(long, value_name = "PATH")]
    html: Option<PathBuf>,
    /// JSON output path [default: SPEC.report.json]
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Comma-separated analyses: semantics, positions, falsify, assumptions,
    /// resilience, precommit, stuckat, trace, abstract [default: all]
    #[arg(long, value_name = "LIST")]
    analyses: Option<String>,
    #[arg(long, value_enum, default_value = "both")]
    semantics: SemanticsChoice,
    /// Require every admissible start position to be winning.
    #[arg(long)]
    robotics: bool,
    /// Largest glitch budget tried by the resilience analysis.
    #[arg(long, value_name = "N")]
    max_k: Option<u32>,
    /// Cubes listed per position set.
    #[arg(long, value_name = "N")]
    max_cubes: Option<usize>,
    #[arg(long, value_name = "N")]
    max_trace_steps: Option<usize>,
    /// Round limit for abstract strategies.
    #[arg(long, value_name = "N")]
    abstract_horizon: Option<usize>,
    /// Per-analysis time limit.
    #[arg(long, value_name = "SECONDS")]
    timeout: Option<f64>,
    /// Live BDD node limit per analysis.
    #[arg(long, value_name = "N")]
    node_budget: Option<usize>,
    /// Write the winning region of the baseline game as Graphviz.
    #[arg(long, value_name = "NAME.dot")]
    dump_bdd: Option<PathBuf>,
    /// Record per-analysis wall-clock time (the JSON is then no longer reproducible).
    #[arg(long)]
    timings: bool,
}

fn config(cli: Cli) -> Result<(PathBuf, ReportConfig), gr1report::ReportError> {
    let mut cfg = ReportConfig { semantics: cli.semantics, robotics: cli.robotics, timings: cli.timings, ..Default::default() };
    if let Some(list) = &cli.analyses {
        cfg.analyses = ReportConfig::parse_analyses(list)?;
    }
    cfg.max_k = cli.max_k.unwrap_or(cfg.max_k);
    cfg.max_cubes = cli.max_cubes.unwrap_or(cfg.max_cubes);
    cfg.max_trace_steps = cli.max_trace_steps.unwrap_or(cfg.max_trace_steps);
    cfg.abstract_horizon = cli.abstract_horizon.unwrap_or(cfg.abstract_horizon);
    cfg.node_budget = cli.node_budget.unwrap_or(cfg.node_budget);
    if let Some(t) = cli.timeout {
        cfg.timeout = Some(Duration::try_from_secs_f64(t).map_err(|e| gr1report::ReportError::Config(format!("--timeout: {e}")))?);
    }
    cfg.json_path = cli.json;
    cfg.html_path = cli.html;
    cfg.dump_bdd = cli.dump_bdd;
    Ok((cli.spec, cfg))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = config(cli).and_then(|(spec, cfg)| run_report(&spec, &cfg));
    match result {
        Ok(report) => {
            let base = &report.json["baseline"];
            match base["realizability"].as_str() {
                Some(v) => println!("{}: {v}", report.json["spec"]["file"].as_str().unwrap_or_default()),
                None => eprintln!("baseline realizability check failed: {}", base["error"].as_str().unwrap_or_default()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("gr1report: {e}");
            ExitCode::from(1)
        }
    }
}
