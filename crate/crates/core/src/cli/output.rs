use serde::Serialize;

use crate::error::Result;
use crate::problems::matrix::csv_cell;

use super::{Format, RunConfig};

pub(super) const CONFIG_PREFIX: &str = "# config: ";

/// A flat table for CSV output.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// The result of one command: a JSON payload, its CSV table, and whether
/// every asserted check held.
#[derive(Clone, Debug)]
pub struct Output {
    pub result: serde_json::Value,
    pub table: Table,
    pub passed: bool,
}

#[derive(Serialize)]
struct Document<'a> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    config: &'a RunConfig,
    passed: bool,
    result: &'a serde_json::Value,
}

pub fn render(cfg: &RunConfig, out: &Output) -> Result<String> {
    let version = env!("CARGO_PKG_VERSION");
    match cfg.format {
        Format::Json => {
            let doc = Document {
                tool: "xfc",
                version,
                seed: cfg.seed,
                config: cfg,
                passed: out.passed,
                result: &out.result,
            };
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut s = format!("# tool: xfc {version}\n# seed: {}\n", cfg.seed);
            s.push_str(CONFIG_PREFIX);
            s.push_str(&serde_json::to_string(cfg)?);
            s.push('\n');
            s.push_str(&format!("# passed: {}\n", out.passed));
            let line = |cells: &[String]| cells.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",");
            s.push_str(&line(&out.table.header));
            s.push('\n');
            for r in &out.table.rows {
                s.push_str(&line(r));
                s.push('\n');
            }
            Ok(s)
        }
    }
}
