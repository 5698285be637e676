//! Batch driver behind the `nonscatter` binary.
//!
//! A job is a JSON config plus a task name. Output is a versioned CSV table;
//! diagnostics go to stderr as one JSON object per line.

pub mod config;
pub mod csv;
pub mod tasks;

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use thiserror::Error;

use config::{validate, Issue, JobConfig, Severity, Task};
use nonscatter_core::Error as CoreError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot parse config: {0}")]
    Config(String),
    #[error("config failed validation")]
    Validation(Vec<Issue>),
    #[error(transparent)]
    Numeric(#[from] CoreError),
    #[error("{0}")]
    Degenerate(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Validation(_) => EXIT_VALIDATION,
            RunError::Numeric(e) => match e {
                CoreError::DegenerateHessian { .. }
                | CoreError::DegenerateSet(_)
                | CoreError::Bracket { .. }
                | CoreError::InadmissibleSlope { .. }
                | CoreError::GridTooCoarse { .. } => EXIT_DEGENERATE,
                CoreError::InvalidInput(_) | CoreError::SignPattern(_) | CoreError::Precondition(_) => EXIT_VALIDATION,
            },
            RunError::Degenerate(_) => EXIT_DEGENERATE,
            RunError::Io(_) => EXIT_IO,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Validation(_) => "validation",
            RunError::Numeric(_) => "numeric",
            RunError::Degenerate(_) => "degenerate",
            RunError::Io(_) => "io",
        }
    }

    /// The machine-readable line printed on stderr.
    pub fn json_line(&self) -> String {
        let mut v = json!({
            "level": "error",
            "code": self.exit_code(),
            "kind": self.kind(),
            "message": self.to_string(),
        });
        if let RunError::Validation(issues) = self {
            v["issues"] = serde_json::to_value(issues).unwrap_or_default();
        }
        v.to_string()
    }
}

pub fn warning_line(field: &str, message: &str) -> String {
    json!({ "level": "warning", "field": field, "message": message }).to_string()
}

pub fn load_config(path: &Path) -> Result<JobConfig, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    JobConfig::from_json(&text).map_err(|e| RunError::Config(e.to_string()))
}

/// Result of one job. `csv` is present whenever a table was produced, including
/// runs that finished with degenerate cells.
#[derive(Debug)]
pub struct Outcome {
    pub csv: Option<String>,
    /// JSON lines for stderr.
    pub messages: Vec<String>,
    pub error: Option<RunError>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(EXIT_OK, RunError::exit_code)
    }
}

/// Validates and runs a job in memory. `workers = None` uses the global pool.
pub fn run(task: Task, config: &JobConfig, workers: Option<usize>) -> Outcome {
    let issues = validate(config, task);
    let mut messages: Vec<String> =
        issues.iter().filter(|i| i.severity == Severity::Warning).map(|i| warning_line(&i.field, &i.message)).collect();
    let errors: Vec<Issue> = issues.into_iter().filter(|i| i.severity == Severity::Error).collect();
    if !errors.is_empty() {
        return Outcome { csv: None, messages, error: Some(RunError::Validation(errors)) };
    }
    let job = || tasks::dispatch(task, config);
    let result = match workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(job),
            Err(e) => Err(RunError::Io(format!("cannot start worker pool: {e}"))),
        },
        None => job(),
    };
    let out = match result {
        Ok(o) => o,
        Err(e) => return Outcome { csv: None, messages, error: Some(e) },
    };
    messages.extend(out.warnings.iter().map(|w| warning_line(task.id(), w)));
    messages.extend(out.degeneracies.iter().map(|w| warning_line(task.id(), w)));
    let error = out
        .degeneracies
        .first()
        .map(|first| RunError::Degenerate(format!("{} degenerate cell(s); first: {first}", out.degeneracies.len())));
    Outcome { csv: Some(out.table.render()), messages, error }
}

/// Full command: read config, run, write output, print stderr lines.
/// Returns the process exit code.
pub fn execute(task: Task, config_path: &Path, out: Option<&Path>, workers: Option<usize>) -> i32 {
    let fail = |e: RunError| {
        eprintln!("{}", e.json_line());
        e.exit_code()
    };
    if workers == Some(0) {
        return fail(RunError::Validation(vec![Issue {
            severity: Severity::Error,
            field: "--workers".into(),
            message: "worker count must be at least 1".into(),
        }]));
    }
    let config = match load_config(config_path) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let out_path: PathBuf = match out.map(Path::to_path_buf).or_else(|| config.output.clone()) {
        Some(p) => p,
        None => return fail(RunError::Config("no output path: pass --out or set output in the config".into())),
    };
    let outcome = run(task, &config, workers);
    for m in &outcome.messages {
        eprintln!("{m}");
    }
    if let Some(csv) = &outcome.csv {
        if let Err(e) = fs::write(&out_path, csv) {
            return fail(RunError::Io(format!("{}: {e}", out_path.display())));
        }
    }
    match outcome.error {
        Some(e) => fail(e),
        None => EXIT_OK,
    }
}
