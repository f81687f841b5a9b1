use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use surfarith_core::json::SCHEMA_VERSION;

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture_digest: Option<String>,
    pub pass: bool,
    pub result: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64, fixture_digest: Option<String>, pass: bool, result: Value) -> Self {
        Report { schema_version: SCHEMA_VERSION, version: env!("CARGO_PKG_VERSION"), command: command.into(), seed, fixture_digest, pass, result }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Stdout, or `out` via temp-and-rename so a failed run never leaves a partial file.
    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        let body = self.to_json();
        match out {
            None => {
                std::io::stdout().write_all(body.as_bytes())?;
            }
            Some(path) => {
                let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
                let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
                tmp.write_all(body.as_bytes())?;
                tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Ok(())
    }
}
