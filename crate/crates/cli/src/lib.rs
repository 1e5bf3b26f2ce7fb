//! Batch front end for `sdlimit-core`.
//!
//! One invocation runs one command from a `key = value` config and writes
//! `<command>.csv` and `<command>.txt` into the output directory. Exit codes:
//! 0 when the check passes, 1 when it ran and failed, 2 on usage or input
//! errors.

use std::io;
use std::path::{Path, PathBuf};

pub mod commands;
pub mod config;
pub mod formats;
pub mod report;

pub use config::{parse_config, Command, RunConfig, DEFAULT_SEED};
pub use report::{Report, Table};

use config::ConfigError;
use formats::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{}: {error}", path.display())]
    Input { path: PathBuf, error: ParseError },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{module}{context}: {source}")]
    Core {
        module: &'static str,
        context: String,
        #[source]
        source: sdlimit_core::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for a broken internal invariant, 2 for anything the caller can fix.
    pub fn exit_code(&self) -> i32 {
        fn internal(e: &sdlimit_core::Error) -> bool {
            match e {
                sdlimit_core::Error::InternalConsistency(_) => true,
                sdlimit_core::Error::Stage { source, .. } => internal(source),
                _ => false,
            }
        }
        match self {
            CliError::Core { source, .. } if internal(source) => 1,
            _ => 2,
        }
    }

    pub(crate) fn core(module: &'static str) -> impl Fn(sdlimit_core::Error) -> CliError {
        move |source| CliError::Core {
            module,
            context: String::new(),
            source,
        }
    }
}

/// The result of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: Report,
    pub table: Table,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            0
        } else {
            1
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs the configured command without touching the output directory.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    commands::dispatch(config)
}

/// Writes the report files selected by the config's format and returns
/// their paths.
pub fn write_outputs(config: &RunConfig, outcome: &Outcome) -> Result<Vec<PathBuf>, CliError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    std::fs::create_dir_all(&config.out).map_err(io_err(&config.out))?;
    let mut written = Vec::new();
    let stem = config.command.name();
    if config.format.csv() {
        let p = config.out.join(format!("{stem}.csv"));
        std::fs::write(&p, outcome.table.to_csv()).map_err(io_err(&p))?;
        written.push(p);
    }
    if config.format.text() {
        let p = config.out.join(format!("{stem}.txt"));
        std::fs::write(&p, outcome.report.render()).map_err(io_err(&p))?;
        written.push(p);
    }
    Ok(written)
}

/// `f(0), …, f(n−1)` computed on up to `workers` threads, each taking a
/// contiguous block. The output order does not depend on `workers`.
pub fn par_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(workers);
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let range = (w * chunk).min(n)..((w + 1) * chunk).min(n);
                s.spawn(move || range.map(f).collect::<Vec<T>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}
