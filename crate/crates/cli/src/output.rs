//! Output plumbing: stamped CSV and JSON writers.
//!
//! Every run stamps (version, config, seed) into its output. CSV bodies
//! use '.' decimals and default float formatting except identity checks,
//! which carry 17 significant digits. No timestamps anywhere, so repeated
//! runs with the same configuration are byte-identical.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, for identity checks.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub struct OutputSink {
    target: Option<PathBuf>,
}

impl OutputSink {
    pub fn new(target: Option<PathBuf>) -> OutputSink {
        OutputSink { target }
    }

    fn write_all(&self, payload: &str) -> io::Result<()> {
        match &self.target {
            Some(path) => {
                let mut f = File::create(path)?;
                f.write_all(payload.as_bytes())
            }
            None => io::stdout().write_all(payload.as_bytes()),
        }
    }

    /// CSV with stamped comment lines and a header row.
    pub fn csv(&self, config: &str, seed: u64, header: &str, rows: &[String]) -> io::Result<()> {
        let mut out = String::new();
        out.push_str(&format!("# glassbridge v{VERSION}\n"));
        out.push_str(&format!("# config: {config}\n"));
        out.push_str(&format!("# seed: {seed}\n"));
        out.push_str(header);
        out.push('\n');
        for row in rows {
            out.push_str(row);
            out.push('\n');
        }
        self.write_all(&out)
    }

    /// JSON with the stamp wrapped around a serializable payload.
    pub fn json<T: Serialize>(&self, config: &str, seed: u64, payload: &T) -> io::Result<()> {
        let doc = json!({
            "version": VERSION,
            "config": config,
            "seed": seed,
            "results": payload,
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("serializable payload");
        out.push('\n');
        self.write_all(&out)
    }
}
