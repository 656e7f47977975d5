//! Run manifests: the comment header written above every CSV.

use std::fmt::Write as _;
use std::path::Path;

use clap::{ArgMatches, Command};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything that determines a run's output. Wall-clock start is reported on
/// stderr only, so equal manifests give byte-identical files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub subcommand: String,
    /// `(flag, value)` in definition order, defaults included.
    pub flags: Vec<(String, String)>,
    pub seed: u64,
    pub output: String,
}

impl RunManifest {
    pub fn from_matches(
        cmd: &Command,
        matches: &ArgMatches,
        seed: u64,
        out: Option<&Path>,
    ) -> Self {
        let flags = cmd
            .get_arguments()
            .filter(|a| !matches!(a.get_id().as_str(), "seed" | "out" | "help" | "version"))
            .filter_map(|a| {
                let raw = matches.get_raw(a.get_id().as_str())?;
                let value = raw
                    .map(|v| v.to_string_lossy().into_owned())
                    .collect::<Vec<_>>()
                    .join(",");
                Some((a.get_long().unwrap_or(a.get_id().as_str()).to_string(), value))
            })
            .collect();
        Self {
            subcommand: cmd.get_name().to_string(),
            flags,
            seed,
            output: out.map_or_else(|| "-".to_string(), |p| p.display().to_string()),
        }
    }

    pub fn header(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# tool={TOOL} {VERSION}");
        let _ = writeln!(s, "# subcommand={}", self.subcommand);
        let _ = writeln!(s, "# seed={}", self.seed);
        let _ = writeln!(s, "# output={}", self.output);
        for (k, v) in &self.flags {
            let _ = writeln!(s, "# --{k}={v}");
        }
        s
    }
}
