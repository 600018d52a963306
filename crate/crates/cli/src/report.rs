use serde::Serialize;
use serde_json::Value;

use lp_rigidity::field::FieldConfig;
use lp_rigidity::global::Mode;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Serialize)]
pub struct InputSummary {
    pub graph: Option<String>,
    pub config: Option<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Parameters {
    pub d: Option<usize>,
    pub p: Option<u32>,
    pub seed: u64,
    pub field: FieldConfig,
    pub trials: Option<usize>,
    pub mode: Option<Mode>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub input: InputSummary,
    pub parameters: Parameters,
    pub outcome: &'static str,
    pub exit_code: i32,
    pub warnings: Vec<String>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    #[serde(skip)]
    pub text: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ErrorReport<'a> {
    pub command: &'a str,
    pub outcome: &'static str,
    pub exit_code: i32,
    pub error: String,
}

impl Report {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        for line in &self.text {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!("outcome: {}\n", self.outcome.replace('_', " ")));
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("time: {ms:.1} ms\n"));
        }
        out
    }
}

pub fn edge_list(edges: &[(usize, usize)]) -> String {
    edges
        .iter()
        .map(|(u, v)| format!("{u}-{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}
