//! Command-line front end of the `parisian-ruin` toolkit.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod selftest;

use std::ffi::OsString;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::config::{ConfigFile, Resolver};
use crate::error::CliError;
use crate::report::Report;

fn dispatch(cli: &Cli, r: &Resolver) -> Result<(), CliError> {
    let (report, out): (Report, _) = match &cli.command {
        Command::RuinProb(a) => (commands::ruin_prob(r, a)?, &a.out),
        Command::Constant(a) => (commands::constant(r, a)?, &a.out),
        Command::Compare(a) => (commands::compare(r, a)?, &a.out),
        Command::RuinTime(a) => (commands::ruin_time(r, a)?, &a.out),
        Command::Selftest => {
            println!("{}", selftest::run()?);
            return Ok(());
        }
    };
    println!("{}", report.summary);
    if let Some(out) = r.opt(out.clone(), "out")? {
        let (csv, json) = report.write(&out)?;
        println!("wrote {} and {}", csv.display(), json.display());
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let r = Resolver::new(file);
    match r.opt(cli.workers, "workers")? {
        Some(0) => Err(CliError::Usage("--workers must be >= 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?
            .install(|| dispatch(&cli, &r)),
        None => dispatch(&cli, &r),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
