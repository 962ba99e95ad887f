//! Config files: a TOML table whose keys are long flag names of one
//! subcommand, plus an optional `command` key.

use std::ffi::OsString;

use clap::CommandFactory;
use sha2::{Digest, Sha256};

use crate::args::{Cli, Command};
use crate::{CliError, CliResult};

fn config_path(argv: &[OsString]) -> Option<OsString> {
    argv.iter().enumerate().skip(1).find_map(|(i, a)| {
        let s = a.to_str()?;
        if s == "--config" {
            argv.get(i + 1).cloned()
        } else {
            s.strip_prefix("--config=").map(OsString::from)
        }
    })
}

fn flag_tokens(table: &toml::Table) -> CliResult<Vec<OsString>> {
    let mut out = Vec::new();
    for (key, value) in table {
        if key == "command" {
            continue;
        }
        let flag = OsString::from(format!("--{key}"));
        let scalar = |v: &toml::Value| -> CliResult<String> {
            match v {
                toml::Value::String(s) => Ok(s.clone()),
                toml::Value::Integer(i) => Ok(i.to_string()),
                toml::Value::Float(f) => Ok(f.to_string()),
                _ => Err(CliError::Usage(format!("config key '{key}' has an unsupported value"))),
            }
        };
        match value {
            toml::Value::Boolean(true) => out.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) if items.is_empty() => {}
            toml::Value::Array(items) => {
                let parts: CliResult<Vec<String>> = items.iter().map(scalar).collect();
                out.push(flag);
                out.push(parts?.join(",").into());
            }
            v => {
                out.push(flag);
                out.push(scalar(v)?.into());
            }
        }
    }
    Ok(out)
}

/// Splices the flags of a `--config` file in right after the subcommand, so
/// that flags given later on the command line override them.
pub fn expand_argv(argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.to_string_lossy().into_owned(), source })?;
    let table: toml::Table = text.parse().map_err(|e| CliError::Usage(format!("config {}: {e}", path.to_string_lossy())))?;
    let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
    let from_file = match table.get("command") {
        None => None,
        Some(toml::Value::String(s)) if names.contains(s) => Some(s.clone()),
        Some(v) => return Err(CliError::Usage(format!("config names an unknown command {v}"))),
    };
    let position = argv.iter().position(|a| a.to_str().is_some_and(|s| names.iter().any(|n| n == s)));
    let flags = flag_tokens(&table)?;
    let mut out = argv;
    match (position, from_file) {
        (Some(i), file) => {
            if let Some(f) = file {
                if out[i] != *f {
                    return Err(CliError::Usage(format!("config is for '{f}', not '{}'", out[i].to_string_lossy())));
                }
            }
            out.splice(i + 1..i + 1, flags);
        }
        (None, Some(f)) => {
            out.push(f.into());
            out.extend(flags);
        }
        (None, None) => return Err(CliError::Usage("no subcommand given and the config names none".into())),
    }
    Ok(out)
}

/// SHA-256 of the resolved subcommand and its parameters.
pub fn config_hash(command: &Command) -> String {
    let json = serde_json::to_string(command).expect("config serializes");
    hex::encode(Sha256::digest(json.as_bytes()))
}

/// The resolved configuration in the file form read by `--config`.
pub fn to_toml(command: &Command) -> CliResult<String> {
    toml::to_string(command).map_err(|e| CliError::Usage(format!("cannot write config: {e}")))
}
