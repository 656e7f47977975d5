//! `cssqkd` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod batch;
mod commands;
mod error;
mod manifest;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;
use std::time::SystemTime;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};
use rayon::prelude::*;

use args::{Cli, Command};
use commands::Body;
use error::CliError;
use manifest::RunManifest;

/// All simulations in the run aborted.
const EXIT_ABORTED: u8 = 2;

struct Job {
    manifest: RunManifest,
    command: Command,
}

struct Finished {
    manifest: RunManifest,
    body: Body,
}

fn parse(argv: Vec<OsString>) -> Result<Job, clap::Error> {
    let root = Cli::command();
    let matches = root.clone().try_get_matches_from(argv)?;
    let cli = Cli::from_arg_matches(&matches)?;
    let (name, sub_matches) = matches.subcommand().expect("subcommand is required");
    let sub = root.find_subcommand(name).expect("parsed subcommand exists");
    let (seed, out) = cli
        .command
        .common()
        .map_or((0, None), |c| (c.seed, c.out.clone()));
    Ok(Job {
        manifest: RunManifest::from_matches(sub, sub_matches, seed, out.as_deref()),
        command: cli.command,
    })
}

fn execute(command: &Command) -> Result<Body, CliError> {
    match command {
        Command::Exponent(a) => commands::exponent(a),
        Command::Keyrate(a) => commands::keyrate(a),
        Command::Perr(a) => commands::perr(a),
        Command::Bound(a) => commands::bound(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::SampleCode(a) => commands::sample_code(a),
        Command::Batch(_) => unreachable!("batches are expanded before execution"),
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn emit(done: &Finished, stdout: &mut impl Write) -> Result<(), CliError> {
    let text = format!("{}{}", done.manifest.header(), done.body.csv);
    if let Some((path, side)) = &done.body.side_file {
        write_file(path, &format!("{}{}", done.manifest.header(), side))?;
    }
    match &done.manifest.output {
        o if o == "-" => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
        path => write_file(path.as_ref(), &text),
    }
}

fn expand(job: Job) -> Result<(Vec<Job>, usize), CliError> {
    let Command::Batch(b) = &job.command else {
        return Ok((vec![job], 1));
    };
    if b.parallel == 0 {
        return Err(CliError::Usage("--parallel must be at least 1".into()));
    }
    let text = fs::read_to_string(&b.config).map_err(|e| CliError::io(&b.config, e))?;
    let root = Cli::command();
    let jobs = batch::parse(&b.config, &text)?
        .iter()
        .map(|section| {
            let argv = batch::to_argv(&b.config, &root, section)?;
            parse(argv).map_err(|e| CliError::Batch {
                path: b.config.clone(),
                line: section.line,
                msg: {
                    let text = e.render().to_string();
                    let text = text.strip_prefix("error: ").unwrap_or(&text);
                    text.lines().next().unwrap_or_default().to_string()
                },
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((jobs, b.parallel))
}

fn run(job: Job) -> Result<u8, CliError> {
    let (jobs, parallel) = expand(job)?;
    let started = SystemTime::now()
        .duration_since(SystemTime::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    eprintln!("# started_unix={started}");
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<Result<Finished, CliError>> = pool.install(|| {
        jobs.into_par_iter()
            .with_max_len(1)
            .map(|j| {
                execute(&j.command).map(|body| Finished {
                    manifest: j.manifest,
                    body,
                })
            })
            .collect()
    });
    let mut stdout = io::stdout().lock();
    let mut sims = Vec::new();
    for r in results {
        let done = r?;
        emit(&done, &mut stdout)?;
        sims.extend(done.body.all_aborted);
    }
    stdout.flush().map_err(|e| CliError::io("<stdout>", e))?;
    Ok(if !sims.is_empty() && sims.iter().all(|&a| a) {
        EXIT_ABORTED
    } else {
        0
    })
}

fn main() -> ExitCode {
    let job = match parse(std::env::args_os().collect()) {
        Ok(j) => j,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(job) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
