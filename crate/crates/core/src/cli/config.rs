//! `key = value` run files.

use std::ffi::OsString;
use std::fs;

use super::{CliError, CliResult};

const SUBCOMMANDS: [&str; 6] = ["constants", "roots", "bounds", "solve", "verify", "sweep"];

/// Parses a run file into long flags. `true` yields a bare switch, `false` drops the key.
pub fn parse(text: &str) -> CliResult<Vec<String>> {
    let mut flags = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.starts_with('-') || key == "config" {
            return Err(CliError::Usage(format!("config line {}: bad key {key:?}", n + 1)));
        }
        match value {
            "true" => flags.push(format!("--{key}")),
            "false" => {}
            v => {
                flags.push(format!("--{key}"));
                flags.push(v.to_string());
            }
        }
    }
    Ok(flags)
}

/// Splices the flags of every `--config FILE` in `argv` in after the subcommand.
pub fn expand(argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let mut paths = Vec::new();
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            let p = it
                .next()
                .ok_or_else(|| CliError::Usage("--config needs a file path".into()))?;
            paths.push(p);
        } else if let Some(p) = s.strip_prefix("--config=") {
            paths.push(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    if paths.is_empty() {
        return Ok(rest);
    }
    let mut injected = Vec::new();
    for p in &paths {
        let text = fs::read_to_string(p)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.to_string_lossy())))?;
        injected.extend(parse(&text)?.into_iter().map(OsString::from));
    }
    let at = rest
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .map_or(rest.len(), |i| i + 1);
    rest.splice(at..at, injected);
    Ok(rest)
}
