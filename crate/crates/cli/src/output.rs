use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::{CliError, CliResult};

/// Provenance written at the top of every artifact.
#[derive(Clone, Debug)]
pub struct Header {
    pub command: &'static str,
    pub config_sha256: String,
    pub seed: Option<u64>,
}

pub struct Artifact {
    pub name: &'static str,
    pub content: String,
}

impl Header {
    fn seed_text(&self) -> String {
        self.seed.map_or_else(|| "none".to_string(), |s| s.to_string())
    }

    /// CSV or JSON Lines body behind `#` comment lines.
    pub fn text(&self, name: &'static str, body: &str) -> Artifact {
        let content = format!(
            "# command: {}\n# config-sha256: {}\n# seed: {}\n{body}",
            self.command,
            self.config_sha256,
            self.seed_text()
        );
        Artifact { name, content }
    }

    /// JSON document `{"header": ..., "data": ...}`.
    pub fn json(&self, name: &'static str, data: Value) -> Artifact {
        let doc = json!({
            "header": { "command": self.command, "config_sha256": self.config_sha256, "seed": self.seed },
            "data": data,
        });
        let mut content = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        content.push('\n');
        Artifact { name, content }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

/// Writes every artifact and the resolved config into `dir`, or the first
/// artifact to stdout.
pub fn emit(dir: Option<&Path>, artifacts: &[Artifact], config_toml: &str) -> CliResult<()> {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
            let config = dir.join("config.toml");
            fs::write(&config, config_toml).map_err(io_err(&config))?;
            for a in artifacts {
                let path = dir.join(a.name);
                fs::write(&path, &a.content).map_err(io_err(&path))?;
            }
        }
        None => {
            if let Some(a) = artifacts.first() {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(a.content.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
            }
        }
    }
    Ok(())
}
