use obstructa::zlinalg::Certificate;
use obstructa::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::time::Instant;

pub const TOOL: &str = "obstructa";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub source: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub ms: u64,
}

/// One JSON line per run. Everything except `timings` is deterministic in the inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub timings: Vec<Timing>,
    pub census: Value,
    pub result: Value,
    #[serde(default)]
    pub certificates: Vec<Certificate>,
    pub verdict: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: command.to_string(),
            inputs: Vec::new(),
            timings: Vec::new(),
            census: json!({}),
            result: json!({}),
            certificates: Vec::new(),
            verdict: String::new(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// The report with timings cleared, for reproducibility comparisons.
    pub fn without_timings(&self) -> Report {
        Report { timings: Vec::new(), ..self.clone() }
    }

    pub fn summary(&self) -> String {
        let mut out = format!("{} {} {}\n", self.tool, self.version, self.command);
        for i in &self.inputs {
            out.push_str(&format!("  input {} = {} (sha256 {})\n", i.role, i.source, &i.sha256[..16]));
        }
        if self.census.as_object().is_some_and(|m| !m.is_empty()) {
            out.push_str(&format!("  census {}\n", self.census));
        }
        for c in &self.certificates {
            let kind = serde_json::to_value(c.kind).expect("kind serializes");
            out.push_str(&format!("  certificate {} for {}\n", kind.as_str().unwrap_or("?"), c.subject));
        }
        for t in &self.timings {
            out.push_str(&format!("  {} {} ms\n", t.stage, t.ms));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

/// Stage timer appending to a report.
pub struct Stopwatch {
    start: Instant,
}

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch { start: Instant::now() }
    }

    pub fn lap(&mut self, report: &mut Report, stage: &str) {
        let ms = self.start.elapsed().as_millis() as u64;
        report.timings.push(Timing { stage: stage.to_string(), ms });
        self.start = Instant::now();
    }
}

/// A library error tagged with the pipeline stage where it surfaced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub stage: String,
    pub error: Error,
}

impl CliError {
    pub fn new(stage: &str, error: Error) -> Self {
        CliError { stage: stage.to_string(), error }
    }

    pub fn exit_code(&self) -> i32 {
        self.error.exit_code()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "error": {
                "code": self.error.code(),
                "exit_code": self.exit_code(),
                "stage": self.stage,
                "message": self.error.to_string(),
            }
        })
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}", self.stage, self.error)
    }
}

impl std::error::Error for CliError {}

pub trait Staged<T> {
    fn stage(self, stage: &str) -> Result<T, CliError>;
}

impl<T> Staged<T> for obstructa::Result<T> {
    fn stage(self, stage: &str) -> Result<T, CliError> {
        self.map_err(|e| CliError::new(stage, e))
    }
}
