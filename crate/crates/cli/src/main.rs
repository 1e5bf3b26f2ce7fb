use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use sdlimit::config::{self, Entry, Origin};
use sdlimit::{CliError, RunConfig};

/// Exact checks and Monte Carlo reports for sample-distribution limits.
#[derive(Debug, Parser)]
#[command(name = "sdlimit", version)]
struct Args {
    /// force-script, measure, homogeneity-exact, null-cover, gc-test,
    /// homogeneity-mc, fg-demo, rect-oracle, thmd-check or nonatomic-split
    command: String,
    /// `key = value` config file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the report files
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// `key=value` settings applied after the config file
    overrides: Vec<String>,
}

fn flag(key: &str, value: String) -> Entry {
    Entry {
        key: key.into(),
        value,
        origin: Origin::Argument(format!("--{key}")),
        base: PathBuf::new(),
    }
}

fn resolve(args: Args) -> Result<RunConfig, CliError> {
    let mut entries = match &args.config {
        Some(path) => {
            let text = sdlimit::read_file(path)?;
            let base = path.parent().unwrap_or(Path::new(""));
            config::parse_entries(&text, base)?
        }
        None => Vec::new(),
    };
    if let Some(e) = entries.iter().find(|e| e.key == "command" && e.value != args.command) {
        return Err(CliError::Usage(format!(
            "{}: config names command {:?} but {:?} was requested",
            e.origin, e.value, args.command
        )));
    }
    entries.push(flag("command", args.command));
    for o in &args.overrides {
        entries.push(config::parse_override(o)?);
    }
    if let Some(s) = args.seed {
        entries.push(flag("seed", s.to_string()));
    }
    if let Some(o) = args.out {
        entries.push(flag("out", o.display().to_string()));
    }
    if let Some(w) = args.workers {
        entries.push(flag("workers", w.to_string()));
    }
    Ok(RunConfig::resolve(entries)?)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = resolve(args).and_then(|config| {
        let outcome = sdlimit::run(&config)?;
        sdlimit::write_outputs(&config, &outcome)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            for l in &outcome.report.summary {
                println!("{l}");
            }
            println!("verdict: {}", if outcome.report.pass { "PASS" } else { "FAIL" });
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("sdlimit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
