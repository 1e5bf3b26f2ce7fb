//! `key = value` run configuration.
//!
//! A config names one command, the value space and that command's
//! parameters. Parameters not given take the defaults listed in
//! [`Command::params`]; keys the command does not take are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sdlimit_core::{Label, Rational, ValueSet, ValueSpace};

use crate::formats::{self, format_value_space};

/// Seed used when neither the config nor `--seed` gives one.
pub const DEFAULT_SEED: u64 = 20_190_417;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    ForceScript,
    Measure,
    HomogeneityExact,
    NullCover,
    GcTest,
    HomogeneityMc,
    FgDemo,
    RectOracle,
    ThmdCheck,
    NonatomicSplit,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::ForceScript,
        Command::Measure,
        Command::HomogeneityExact,
        Command::NullCover,
        Command::GcTest,
        Command::HomogeneityMc,
        Command::FgDemo,
        Command::RectOracle,
        Command::ThmdCheck,
        Command::NonatomicSplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::ForceScript => "force-script",
            Command::Measure => "measure",
            Command::HomogeneityExact => "homogeneity-exact",
            Command::NullCover => "null-cover",
            Command::GcTest => "gc-test",
            Command::HomogeneityMc => "homogeneity-mc",
            Command::FgDemo => "fg-demo",
            Command::RectOracle => "rect-oracle",
            Command::ThmdCheck => "thmd-check",
            Command::NonatomicSplit => "nonatomic-split",
        }
    }

    /// Parameters the command takes, in report order.
    pub fn params(self) -> &'static [Param] {
        use Fallback::*;
        use Kind::*;
        // struct literals so the tables are promoted to statics
        macro_rules! p {
            ($key:expr, $kind:expr, $default:expr) => {
                Param { key: $key, kind: $kind, default: $default }
            };
        }
        match self {
            Command::ForceScript => &[
                p!("script", Path, Required),
                p!("L", Uint, Text("8")),
                p!("default", Label, FirstLabel),
            ],
            Command::Measure => &[p!("event", Path, Required)],
            Command::HomogeneityExact => &[
                p!("event", Path, Absent),
                p!("set", Set, FirstLabel),
                p!("star", Uint, Absent),
                p!("trials", Uint, Text("1000")),
                p!("coords", Uint, Text("8")),
                p!("max_constraints", Uint, Text("4")),
            ],
            Command::NullCover => &[
                p!("x", Rational, Text("1/10")),
                p!("set", Set, FirstLabel),
                p!("value", Label, Absent),
                p!("omega", Uint, Text("0")),
            ],
            Command::GcTest => &[
                p!("n", Uint, Text("10000")),
                p!("epsilon", Rational, Text("1/40")),
                p!("runs", Uint, Text("100")),
                p!("min_passes", Uint, Absent),
            ],
            Command::HomogeneityMc => &[
                p!("rows", Uint, Text("100")),
                p!("cols", Uint, Text("10000")),
                p!("subsets", Uint, Text("20")),
                p!("subset_min", Uint, Text("1000")),
                p!("set", Set, FirstLabel),
                p!("epsilon", Rational, Text("1/20")),
                p!("min_fraction", Rational, Text("99/100")),
            ],
            Command::FgDemo => &[p!("n", Uint, Text("20"))],
            Command::RectOracle => &[
                p!("matrix", Path, Absent),
                p!("rows", Uint, Text("4")),
                p!("cols", Uint, Text("4")),
                p!("I", Uint, Text("1")),
                p!("set", Set, FirstLabel),
                p!("instances", Uint, Text("1")),
                p!("heuristic", Bool, Text("false")),
            ],
            Command::ThmdCheck => &[
                p!("a", Rational, Text("1/2")),
                p!("overlap", Bool, Text("false")),
                p!("rows", Uint, Text("200")),
                p!("cols", Uint, Text("40")),
                p!("I", Uint, Text("2")),
                p!("set", Set, FirstLabel),
            ],
            Command::NonatomicSplit => &[
                p!("event", Path, Absent),
                p!("set", Set, FirstLabel),
                p!("iterations", Uint, Text("10")),
            ],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
                format!("unknown command {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Uint,
    Rational,
    Set,
    Label,
    Path,
    Bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    Text(&'static str),
    /// The first label, or the set holding only it.
    FirstLabel,
    Required,
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Param {
    pub key: &'static str,
    pub kind: Kind,
    pub default: Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Uint(u64),
    Rational(Rational),
    Set(ValueSet),
    Label(Label),
    Path(PathBuf),
    Bool(bool),
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Text,
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        self != OutputFormat::Text
    }

    pub fn text(self) -> bool {
        self != OutputFormat::Csv
    }

    fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
            OutputFormat::Both => "both",
        }
    }
}

/// Where a setting came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Argument(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Argument(a) => write!(f, "argument {a:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub origin: Option<Origin>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.origin {
            Some(o) => write!(f, "{o}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(origin: Option<&Origin>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        origin: origin.cloned(),
        message: message.into(),
    }
}

/// One `key = value` setting before resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub origin: Origin,
    /// Relative paths are taken from here.
    pub base: PathBuf,
}

const GLOBAL_KEYS: [&str; 7] = ["command", "labels", "weights", "seed", "format", "out", "workers"];

/// Settings of a config text; `#` starts a comment. A key may appear once.
pub fn parse_entries(text: &str, base: &Path) -> Result<Vec<Entry>, ConfigError> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let origin = Origin::Line(i + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(Some(&origin), format!("expected key = value, found {line:?}")))?;
        let key = key.trim().to_owned();
        if key.is_empty() {
            return Err(err(Some(&origin), "missing key"));
        }
        if let Some(first) = seen.insert(key.clone(), i + 1) {
            return Err(err(Some(&origin), format!("key {key:?} already set on line {first}")));
        }
        out.push(Entry {
            key,
            value: value.trim().to_owned(),
            origin,
            base: base.to_path_buf(),
        });
    }
    Ok(out)
}

/// A `key=value` command-line override.
pub fn parse_override(arg: &str) -> Result<Entry, ConfigError> {
    let origin = Origin::Argument(arg.to_owned());
    let (key, value) = arg
        .split_once('=')
        .ok_or_else(|| err(Some(&origin), "expected key=value"))?;
    Ok(Entry {
        key: key.trim().to_owned(),
        value: value.trim().to_owned(),
        origin,
        base: PathBuf::new(),
    })
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub space: ValueSpace,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: PathBuf,
    pub workers: usize,
    params: BTreeMap<&'static str, Value>,
}

/// Parses a config text with paths relative to the working directory.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::resolve(parse_entries(text, Path::new(""))?)
}

impl RunConfig {
    /// Applies defaults and checks every value. Later entries override
    /// earlier ones.
    pub fn resolve(entries: Vec<Entry>) -> Result<RunConfig, ConfigError> {
        let mut map: BTreeMap<String, Entry> = BTreeMap::new();
        for e in entries {
            map.insert(e.key.clone(), e);
        }
        let command_entry = map
            .get("command")
            .ok_or_else(|| err(None, "no command given"))?;
        let command: Command = command_entry
            .value
            .parse()
            .map_err(|m| err(Some(&command_entry.origin), m))?;
        let params = command.params();
        if let Some(e) = map
            .values()
            .find(|e| !GLOBAL_KEYS.contains(&e.key.as_str()) && !params.iter().any(|p| p.key == e.key))
        {
            return Err(err(
                Some(&e.origin),
                format!("unknown key {:?} for command {command}", e.key),
            ));
        }

        let text = |key: &str, default: &str| -> (String, Option<Origin>) {
            match map.get(key) {
                Some(e) => (e.value.clone(), Some(e.origin.clone())),
                None => (default.to_owned(), None),
            }
        };
        let (labels, lo) = text("labels", "0,1");
        let (weights, wo) = text("weights", "1/2,1/2");
        let space = formats::value_space_from_lists(&labels, &weights)
            .map_err(|m| err(wo.as_ref().or(lo.as_ref()), m))?;

        let (seed, so) = text("seed", &DEFAULT_SEED.to_string());
        let seed = seed
            .parse()
            .map_err(|_| err(so.as_ref(), format!("seed {seed:?} is not a 64-bit unsigned integer")))?;
        let (format, fo) = text("format", "both");
        let format = match format.as_str() {
            "csv" => OutputFormat::Csv,
            "text" => OutputFormat::Text,
            "both" => OutputFormat::Both,
            other => return Err(err(fo.as_ref(), format!("unknown format {other:?}"))),
        };
        let (out, _) = text("out", ".");
        let out = match map.get("out") {
            Some(e) => e.base.join(out),
            None => PathBuf::from(out),
        };
        let (workers, wko) = text("workers", "1");
        let workers: usize = workers
            .parse()
            .ok()
            .filter(|&w| w >= 1)
            .ok_or_else(|| err(wko.as_ref(), format!("workers {workers:?} must be a positive integer")))?;

        let mut values = BTreeMap::new();
        for p in params {
            let value = match (map.get(p.key), p.default) {
                (Some(e), _) => parse_value(p.kind, &e.value, &e.base, &space)
                    .map_err(|m| err(Some(&e.origin), format!("{}: {m}", p.key)))?,
                (None, Fallback::Text(t)) => {
                    parse_value(p.kind, t, Path::new(""), &space).expect("defaults parse")
                }
                (None, Fallback::FirstLabel) => match p.kind {
                    Kind::Set => Value::Set(ValueSet::singleton(Label(0))),
                    _ => Value::Label(Label(0)),
                },
                (None, Fallback::Required) => {
                    return Err(err(None, format!("{command} needs {}", p.key)));
                }
                (None, Fallback::Absent) => Value::Absent,
            };
            values.insert(p.key, value);
        }
        Ok(RunConfig {
            command,
            space,
            seed,
            format,
            out,
            workers,
            params: values,
        })
    }

    fn get(&self, key: &str) -> &Value {
        self.params
            .get(key)
            .unwrap_or_else(|| panic!("{} has no parameter {key}", self.command))
    }

    pub fn uint(&self, key: &str) -> Option<u64> {
        match self.get(key) {
            Value::Uint(v) => Some(*v),
            _ => None,
        }
    }

    /// An unsigned parameter as a size. Sizes beyond `usize` saturate.
    pub fn size(&self, key: &str) -> Option<usize> {
        self.uint(key).map(|v| usize::try_from(v).unwrap_or(usize::MAX))
    }

    pub fn rational(&self, key: &str) -> Option<&Rational> {
        match self.get(key) {
            Value::Rational(v) => Some(v),
            _ => None,
        }
    }

    pub fn set(&self, key: &str) -> Option<ValueSet> {
        match self.get(key) {
            Value::Set(v) => Some(*v),
            _ => None,
        }
    }

    pub fn label(&self, key: &str) -> Option<Label> {
        match self.get(key) {
            Value::Label(v) => Some(*v),
            _ => None,
        }
    }

    pub fn path(&self, key: &str) -> Option<&Path> {
        match self.get(key) {
            Value::Path(v) => Some(v),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.get(key), Value::Bool(true))
    }

    /// Every setting after resolution, in a fixed order. Settings that
    /// only control how the run is carried out (`out`, `workers`) come
    /// last.
    pub fn resolved(&self) -> Vec<(String, String)> {
        let mut v = vec![
            ("command".to_owned(), self.command.to_string()),
            ("labels".to_owned(), self.space.names().join(",")),
            (
                "weights".to_owned(),
                self.space
                    .weights()
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("seed".to_owned(), self.seed.to_string()),
            ("format".to_owned(), self.format.name().to_owned()),
        ];
        for p in self.command.params() {
            let shown = match self.get(p.key) {
                Value::Uint(x) => x.to_string(),
                Value::Rational(x) => x.to_string(),
                Value::Set(s) => self.space.display_set(*s).to_string(),
                Value::Label(l) => self.space.name(*l).to_owned(),
                Value::Path(p) => p.display().to_string(),
                Value::Bool(b) => b.to_string(),
                Value::Absent => "-".to_owned(),
            };
            v.push((p.key.to_owned(), shown));
        }
        v.push(("out".to_owned(), self.out.display().to_string()));
        v.push(("workers".to_owned(), self.workers.to_string()));
        v
    }

    /// The value space in its one-line text form.
    pub fn space_text(&self) -> String {
        format_value_space(&self.space)
    }
}

fn parse_value(kind: Kind, text: &str, base: &Path, space: &ValueSpace) -> Result<Value, String> {
    Ok(match kind {
        Kind::Uint => Value::Uint(
            text.parse()
                .map_err(|_| format!("{text:?} is not an unsigned integer"))?,
        ),
        Kind::Rational => Value::Rational(formats::parse_rational(text)?),
        Kind::Set => Value::Set(formats::parse_set(text, space)?),
        Kind::Label => Value::Label(formats::parse_label(text, space)?),
        Kind::Path if text.is_empty() => return Err("empty path".into()),
        Kind::Path => Value::Path(base.join(text)),
        Kind::Bool => Value::Bool(match text {
            "true" | "yes" | "1" => true,
            "false" | "no" | "0" => false,
            _ => return Err(format!("{text:?} is not true or false")),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = parse_config("labels = 0,1\nweights = 1/2,1/2\ncommand = gc-test\nn = 10000\n").unwrap();
        assert_eq!(c.command, Command::GcTest);
        assert_eq!(c.size("n"), Some(10_000));
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.rational("epsilon").unwrap().to_string(), "1/40");
        assert_eq!(c.uint("min_passes"), None);
        assert_eq!(c.workers, 1);
    }

    #[test]
    fn bad_weights_name_the_line() {
        let e = parse_config("command = gc-test\nlabels = 0,1\nweights = 1/2,1/3\n").unwrap_err();
        assert_eq!(e.origin, Some(Origin::Line(3)));
        assert_eq!(e.message, "weights sum 5/6 ≠ 1");
        assert_eq!(e.to_string(), "line 3: weights sum 5/6 ≠ 1");
    }

    #[test]
    fn usage_errors() {
        let e = parse_config("# c\ncommand = frobnicate\n").unwrap_err();
        assert_eq!(e.origin, Some(Origin::Line(2)));
        assert!(e.message.contains("unknown command"));
        let e = parse_config("command = fg-demo\nepsilon = 1/2\n").unwrap_err();
        assert_eq!(e.origin, Some(Origin::Line(2)));
        let e = parse_config("command = gc-test\nepsilon = 1/x\n").unwrap_err();
        assert_eq!(e.origin, Some(Origin::Line(2)));
        assert!(parse_config("command = gc-test\nn = 5\nn = 6\n").is_err());
        assert!(parse_config("command = measure\n").is_err());
        assert!(parse_config("n = 5\n").is_err());
        assert!(parse_config("command fg-demo\n").is_err());
    }

    #[test]
    fn overrides_win() {
        let mut entries = parse_entries("command = fg-demo\nn = 4\n", Path::new("")).unwrap();
        entries.push(parse_override("n=8").unwrap());
        let c = RunConfig::resolve(entries).unwrap();
        assert_eq!(c.size("n"), Some(8));
        let resolved = c.resolved();
        assert!(resolved.contains(&("n".into(), "8".into())));
    }

    #[test]
    fn paths_are_relative_to_the_config() {
        let entries = parse_entries("command = measure\nevent = ev.txt\n", Path::new("/tmp/x")).unwrap();
        let c = RunConfig::resolve(entries).unwrap();
        assert_eq!(c.path("event"), Some(Path::new("/tmp/x/ev.txt")));
    }

    #[test]
    fn labels_resolve_against_the_space() {
        let c = parse_config("command = null-cover\nlabels = a,b,c\nweights = 1/2,1/4,1/4\nset = {b,c}\n").unwrap();
        assert_eq!(c.set("set"), Some(ValueSet(0b110)));
        assert!(parse_config("command = null-cover\nset = {q}\n").is_err());
    }
}
