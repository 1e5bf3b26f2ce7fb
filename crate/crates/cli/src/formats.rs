//! Line-oriented text forms for rationals, value spaces, cylinders, events,
//! feature scripts and label matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use sdlimit_core::verify::SampleMatrix;
use sdlimit_core::{
    AlgebraEvent, CylinderSpec, Feature, Label, Rational, Side, ValueSequence, ValueSet, ValueSpace,
};

/// A parse failure at a 1-based line of some input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// `p/q`, an integer, or a terminating decimal such as `0.025`, all exact.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    let bad = || format!("malformed rational {s:?}");
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits if digits.bytes().all(|b| b.is_ascii_digit()) => digits.parse().map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let value = Rational::new(int * &scale + frac, scale);
        return Ok(if negative { -value } else { value });
    }
    s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad())
}

/// Labels and weights from two comma-separated lists.
pub fn value_space_from_lists(labels: &str, weights: &str) -> Result<ValueSpace, String> {
    let labels: Vec<String> = split_list(labels).map(str::to_owned).collect();
    let weights = split_list(weights)
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()?;
    if labels.len() != weights.len() {
        return Err(format!("{} labels but {} weights", labels.len(), weights.len()));
    }
    let sum: Rational = weights.iter().sum();
    if !sum.is_one() {
        return Err(format!("weights sum {sum} ≠ 1"));
    }
    if labels.iter().any(|l| !valid_label(l)) {
        return Err("labels must be nonempty and free of spaces, commas, braces, ':' and '='".into());
    }
    ValueSpace::new_degenerate(labels, weights).map_err(|e| e.to_string())
}

fn valid_label(l: &str) -> bool {
    !l.is_empty() && !l.contains(|c: char| c.is_whitespace() || ",{}:=#".contains(c))
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

/// `a:1/2 b:1/2`.
pub fn parse_value_space(text: &str) -> Result<ValueSpace, String> {
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    for tok in text.split_whitespace() {
        let (l, w) = tok
            .split_once(':')
            .ok_or_else(|| format!("expected label:weight, found {tok:?}"))?;
        labels.push(l);
        weights.push(w);
    }
    value_space_from_lists(&labels.join(","), &weights.join(","))
}

pub fn format_value_space(space: &ValueSpace) -> String {
    space
        .names()
        .iter()
        .zip(space.weights())
        .map(|(l, w)| format!("{l}:{w}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_label(text: &str, space: &ValueSpace) -> Result<Label, String> {
    space
        .label(text.trim())
        .ok_or_else(|| format!("unknown label {:?}", text.trim()))
}

/// `{a,b}`; the braces may be omitted.
pub fn parse_set(text: &str, space: &ValueSpace) -> Result<ValueSet, String> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .unwrap_or(t);
    let set = ValueSet::from_labels(
        split_list(inner)
            .map(|l| parse_label(l, space))
            .collect::<Result<Vec<_>, _>>()?,
    );
    if set.is_empty() {
        return Err(format!("empty value set {t:?}"));
    }
    Ok(set)
}

pub fn parse_side(text: &str) -> Result<Side, String> {
    match text {
        "theta" | "t" => Ok(Side::Theta),
        "omega" | "w" => Ok(Side::Omega),
        _ => Err(format!("unknown side {text:?}, expected theta or omega")),
    }
}

/// `theta 1={a,b} 3={c}`. A side with no constraints is the full cylinder.
pub fn parse_cylinder(text: &str, space: &ValueSpace) -> Result<CylinderSpec, String> {
    let mut toks = text.split_whitespace();
    let side = parse_side(toks.next().ok_or("empty cylinder")?)?;
    let mut constraints = BTreeMap::new();
    for tok in toks {
        let (i, set) = tok
            .split_once('=')
            .ok_or_else(|| format!("expected index=set, found {tok:?}"))?;
        let i: u64 = i.parse().map_err(|_| format!("bad coordinate index {i:?}"))?;
        let set = parse_set(set, space)?;
        if constraints.insert(i, set).is_some() {
            return Err(format!("coordinate {i} constrained twice"));
        }
    }
    CylinderSpec::from_constraints(side, constraints).map_err(|e| e.to_string())
}

pub fn format_cylinder(cyl: &CylinderSpec, space: &ValueSpace) -> String {
    let mut s = cyl.side().to_string();
    for (i, set) in cyl.constraints() {
        s.push_str(&format!(" {i}={}", space.display_set(set)));
    }
    s
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// One cylinder per line; `#` starts a comment. Pieces must share a side and
/// be pairwise disjoint.
pub fn parse_event(text: &str, space: &ValueSpace) -> Result<AlgebraEvent, ParseError> {
    let mut pieces = Vec::new();
    let mut side = None;
    let mut last = 0;
    for (n, line) in content_lines(text) {
        let cyl = parse_cylinder(line, space).map_err(|m| ParseError::new(n, m))?;
        if *side.get_or_insert(cyl.side()) != cyl.side() {
            return Err(ParseError::new(n, "pieces lie on different sides"));
        }
        pieces.push(cyl);
        last = n;
    }
    let side = side.ok_or_else(|| ParseError::new(0, "event has no pieces"))?;
    AlgebraEvent::new(side, pieces).map_err(|e| ParseError::new(last, e.to_string()))
}

/// `const:a`, `periodic:a,b`, `list:a,b` or `seeded:N`.
pub fn parse_generator(text: &str, space: &ValueSpace) -> Result<ValueSequence, String> {
    let (kind, arg) = text
        .split_once(':')
        .ok_or_else(|| format!("expected kind:argument, found {text:?}"))?;
    let labels = || -> Result<Vec<Label>, String> {
        split_list(arg).map(|l| parse_label(l, space)).collect()
    };
    match kind {
        "const" => Ok(ValueSequence::Constant(parse_label(arg, space)?)),
        "periodic" => {
            let p = labels()?;
            if p.is_empty() {
                return Err("empty period".into());
            }
            Ok(ValueSequence::Periodic(p))
        }
        "list" => Ok(ValueSequence::Explicit(labels()?)),
        "seeded" => arg
            .parse()
            .map(|s| ValueSequence::seeded(s, space))
            .map_err(|_| format!("bad seed {arg:?}")),
        _ => Err(format!("unknown generator {kind:?}")),
    }
}

fn parse_ids(toks: &[&str]) -> Result<Vec<u64>, String> {
    let ids: Vec<u64> = toks
        .iter()
        .map(|t| t.parse().map_err(|_| format!("bad id {t:?}")))
        .collect::<Result<_, _>>()?;
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err("index list repeats an id".into());
    }
    Ok(ids)
}

/// `ROW <gen> <theta ids...>`, `COL <gen> <omega ids...>`, `POINT <omega> <theta>`.
pub fn parse_feature(line: &str, space: &ValueSpace) -> Result<Feature, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    match toks.as_slice() {
        ["ROW", g, ids @ ..] => Ok(Feature::Row {
            values: parse_generator(g, space)?,
            thetas: parse_ids(ids)?,
        }),
        ["COL", g, ids @ ..] => Ok(Feature::Col {
            values: parse_generator(g, space)?,
            omegas: parse_ids(ids)?,
        }),
        ["POINT", w, t] => Ok(Feature::Point {
            omega: w.parse().map_err(|_| format!("bad id {w:?}"))?,
            theta: t.parse().map_err(|_| format!("bad id {t:?}"))?,
        }),
        [kind, ..] => Err(format!("unknown or incomplete feature {kind:?}")),
        [] => Err("empty feature".into()),
    }
}

/// Features with the line each came from.
pub fn parse_script(text: &str, space: &ValueSpace) -> Result<Vec<(usize, Feature)>, ParseError> {
    content_lines(text)
        .map(|(n, l)| {
            parse_feature(l, space)
                .map(|f| (n, f))
                .map_err(|m| ParseError::new(n, m))
        })
        .collect()
}

/// One row of labels per line, separated by whitespace.
pub fn parse_matrix(text: &str, space: &ValueSpace) -> Result<SampleMatrix, ParseError> {
    let mut rows = Vec::new();
    for (n, line) in content_lines(text) {
        let row = line
            .split_whitespace()
            .map(|l| parse_label(l, space))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|m| ParseError::new(n, m))?;
        rows.push(row);
    }
    SampleMatrix::from_rows(space, rows, None).map_err(|e| ParseError::new(0, e.to_string()))
}
