//! Artifact files with provenance headers.

use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{LoadedConfig, RunConfig};
use crate::failure::Failure;

pub const TOOL: &str = "trimotion";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    /// SHA-256 of the effective configuration (overrides applied, output
    /// directory excluded).
    pub config_sha256: String,
    pub timestamp: String,
}

impl Provenance {
    pub fn new(config: &RunConfig) -> Self {
        let mut hashed = config.clone();
        hashed.output.dir = PathBuf::from(".");
        let bytes = serde_json::to_vec(&hashed).expect("config serializes");
        Self {
            tool: TOOL,
            version: VERSION,
            config_sha256: format!("{:x}", Sha256::digest(&bytes)),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    provenance: &'a Provenance,
    #[serde(flatten)]
    body: &'a T,
}

/// Writes `<dir>/<prefix>[_<suffix>].<ext>` files for one run.
pub struct Artifacts {
    dir: PathBuf,
    prefix: String,
    pub provenance: Provenance,
    pub written: Vec<PathBuf>,
}

impl Artifacts {
    pub fn new(loaded: &LoadedConfig) -> Result<Self, Failure> {
        let dir = loaded.out_dir();
        std::fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            prefix: loaded.prefix(),
            provenance: Provenance::new(&loaded.config),
            written: Vec::new(),
        })
    }

    fn path(&self, suffix: Option<&str>, ext: &str) -> PathBuf {
        match suffix {
            Some(s) => self.dir.join(format!("{}_{s}.{ext}", self.prefix)),
            None => self.dir.join(format!("{}.{ext}", self.prefix)),
        }
    }

    fn header(&self, comment: &str, context: &[(&str, String)]) -> String {
        let p = &self.provenance;
        let mut out = format!(
            "{comment} tool: {} {}\n{comment} config_sha256: {}\n{comment} timestamp: {}\n",
            p.tool, p.version, p.config_sha256, p.timestamp
        );
        for (key, value) in context {
            out.push_str(&format!("{comment} {key}: {value}\n"));
        }
        out
    }

    /// CSV body after `#` provenance lines.
    pub fn csv(&mut self, suffix: Option<&str>, context: &[(&str, String)], body: &str) -> Result<(), Failure> {
        self.text(suffix, "csv", "#", context, body)
    }

    /// Whitespace table after `#` provenance lines.
    pub fn dat(&mut self, suffix: Option<&str>, context: &[(&str, String)], body: &str) -> Result<(), Failure> {
        self.text(suffix, "dat", "#", context, body)
    }

    fn text(
        &mut self,
        suffix: Option<&str>,
        ext: &str,
        comment: &str,
        context: &[(&str, String)],
        body: &str,
    ) -> Result<(), Failure> {
        let path = self.path(suffix, ext);
        std::fs::write(&path, self.header(comment, context) + body)?;
        self.written.push(path);
        Ok(())
    }

    /// Pretty JSON object with `provenance` as its first key; `body` must
    /// serialize to an object.
    pub fn json<T: Serialize>(&mut self, suffix: Option<&str>, body: &T) -> Result<(), Failure> {
        let path = self.path(suffix, "json");
        let doc = Document {
            provenance: &self.provenance,
            body,
        };
        let mut text =
            serde_json::to_string_pretty(&doc).map_err(|e| Failure::config(format!("cannot encode output: {e}")))?;
        text.push('\n');
        std::fs::write(&path, text)?;
        self.written.push(path);
        Ok(())
    }
}
