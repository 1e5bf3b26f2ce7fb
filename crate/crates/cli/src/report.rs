//! Structured-text reports and CSV tables.
//!
//! A text report is a sequence of lines:
//!
//! ```text
//! sdlimit <version>
//! command: <name>
//! identity: <identity or test executed>
//! seed: <seed>
//! note: <caveat>            (optional, may repeat)
//! [config]
//! <key> = <value>           (every resolved setting)
//! [result]
//! <key> = <value>
//! [summary]
//! <free text>
//! verdict: PASS | FAIL
//! ```

use std::fmt::Write as _;

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub identity: &'static str,
    pub seed: u64,
    pub notes: Vec<&'static str>,
    pub config: Vec<(String, String)>,
    pub fields: Vec<(String, String)>,
    pub summary: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(config: &RunConfig, identity: &'static str) -> Self {
        Report {
            command: config.command.to_string(),
            identity,
            seed: config.seed,
            notes: Vec::new(),
            config: config.resolved(),
            fields: Vec::new(),
            summary: Vec::new(),
            pass: true,
        }
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.summary.push(text.into());
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "sdlimit {VERSION}").unwrap();
        writeln!(s, "command: {}", self.command).unwrap();
        writeln!(s, "identity: {}", self.identity).unwrap();
        writeln!(s, "seed: {}", self.seed).unwrap();
        for n in &self.notes {
            writeln!(s, "note: {n}").unwrap();
        }
        s.push_str("[config]\n");
        for (k, v) in &self.config {
            writeln!(s, "{k} = {v}").unwrap();
        }
        s.push_str("[result]\n");
        for (k, v) in &self.fields {
            writeln!(s, "{k} = {v}").unwrap();
        }
        s.push_str("[summary]\n");
        for l in &self.summary {
            writeln!(s, "{l}").unwrap();
        }
        writeln!(s, "verdict: {}", if self.pass { "PASS" } else { "FAIL" }).unwrap();
        s
    }
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

/// Cells of one CSV row.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($x.to_string()),*] };
}
