//! Batch files: `key=value` lines, sections separated by blank lines, `#`
//! comments. Each section names a `subcommand`; every other key is a long flag
//! of that subcommand without the leading dashes.

use std::ffi::OsString;
use std::path::Path;

use clap::{ArgAction, Command};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    /// Line of the section's first entry.
    pub line: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(path: &Path, text: &str) -> Result<Vec<Section>, CliError> {
    let err = |line: usize, msg: String| CliError::Batch {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut sections = Vec::new();
    let mut current: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            if !current.is_empty() {
                sections.push(finish(std::mem::take(&mut current)));
            }
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(err(line, format!("expected key=value, found `{trimmed}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(err(line, "empty key".into()));
        }
        if let Some(prev) = current.iter().find(|e| e.key == key) {
            return Err(err(
                line,
                format!("duplicate key `{key}` (first set on line {})", prev.line),
            ));
        }
        current.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
        });
    }
    if !current.is_empty() {
        sections.push(finish(current));
    }
    Ok(sections)
}

fn finish(entries: Vec<Entry>) -> Section {
    Section {
        line: entries[0].line,
        entries,
    }
}

/// Turns a section into an argument vector for `root`, rejecting keys the
/// subcommand does not define.
pub fn to_argv(path: &Path, root: &Command, section: &Section) -> Result<Vec<OsString>, CliError> {
    let err = |line: usize, msg: String| CliError::Batch {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let Some(sub_entry) = section.entries.iter().find(|e| e.key == "subcommand") else {
        return Err(err(section.line, "section has no `subcommand` key".into()));
    };
    let name = sub_entry.value.as_str();
    let sub = root
        .find_subcommand(name)
        .filter(|_| name != "batch")
        .ok_or_else(|| err(sub_entry.line, format!("unknown subcommand `{name}`")))?;
    let mut argv: Vec<OsString> = vec![root.get_name().into(), name.into()];
    for e in section.entries.iter().filter(|e| e.key != "subcommand") {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(e.key.as_str()) && a.get_id() != "help")
            .ok_or_else(|| err(e.line, format!("unknown key `{}` for `{name}`", e.key)))?;
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match e.value.as_str() {
                "true" => argv.push(format!("--{}", e.key).into()),
                "false" => {}
                v => return Err(err(e.line, format!("`{}` expects true or false, got `{v}`", e.key))),
            }
        } else {
            argv.push(format!("--{}={}", e.key, e.value).into());
        }
    }
    Ok(argv)
}
