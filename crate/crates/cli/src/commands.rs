//! One function per command. Each returns the report and the CSV table;
//! nothing here writes files.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use sdlimit_core::limit::{homogeneity_exact, homogeneity_exact_event, null_cover, Membership};
use sdlimit_core::rng::{self, Purpose};
use sdlimit_core::verify::{
    fg_impossibility, gc_test, homogeneity_mc, min_rectangle_error, nonatomic_split, overlap_check,
    rectangle_error, thmd_mechanism_check, Rectangle, RectangleFamily, SampleMatrix,
};
use sdlimit_core::{
    partition_measure, AlgebraEvent, CoordinateId, CylinderSpec, ForcingStore, Rational, Side, ValueSet,
    ValueSpace,
};

use crate::config::{Command, RunConfig};
use crate::formats::{self, format_cylinder};
use crate::report::{Report, Table};
use crate::{par_map, read_file, row, CliError, Outcome};

pub fn dispatch(c: &RunConfig) -> Result<Outcome, CliError> {
    match c.command {
        Command::ForceScript => force_script(c),
        Command::Measure => measure(c),
        Command::HomogeneityExact => homogeneity_exact_cmd(c),
        Command::NullCover => null_cover_cmd(c),
        Command::GcTest => gc(c),
        Command::HomogeneityMc => homogeneity_mc_cmd(c),
        Command::FgDemo => fg_demo(c),
        Command::RectOracle => rect_oracle(c),
        Command::ThmdCheck => thmd_check(c),
        Command::NonatomicSplit => nonatomic(c),
    }
}

fn required<T>(v: Option<T>, key: &str) -> T {
    // resolve() fills every parameter that has a default
    v.unwrap_or_else(|| panic!("parameter {key} was not resolved"))
}

fn load_event(c: &RunConfig, key: &str) -> Result<Option<AlgebraEvent>, CliError> {
    let Some(path) = c.path(key) else {
        return Ok(None);
    };
    let text = read_file(path)?;
    formats::parse_event(&text, &c.space)
        .map(Some)
        .map_err(|error| CliError::Input {
            path: path.to_path_buf(),
            error,
        })
}

fn ratio(p: usize, q: usize) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q.max(1)))
}

fn fresh_index(event: &AlgebraEvent) -> u64 {
    event
        .support()
        .iter()
        .map(|id| id.index + 1)
        .max()
        .unwrap_or(0)
}

/// Seed of the `i`-th run or instance of a batch.
pub fn run_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add(i as u64)
}

/// A random cylinder on coordinates `0..coords` with at most
/// `max_constraints` constrained coordinates.
pub fn random_cylinder<R: Rng>(
    rng: &mut R,
    side: Side,
    space: &ValueSpace,
    coords: u64,
    max_constraints: usize,
) -> CylinderSpec {
    let full = space.full().0;
    let k = rng.random_range(0..=max_constraints.min(coords as usize));
    let mut constraints = BTreeMap::new();
    while constraints.len() < k {
        let i = rng.random_range(0..coords);
        constraints.insert(i, ValueSet(rng.random_range(1..=full)));
    }
    CylinderSpec::from_constraints(side, constraints).expect("nonempty constraints")
}

fn force_script(c: &RunConfig) -> Result<Outcome, CliError> {
    let path = required(c.path("script"), "script");
    let text = read_file(path)?;
    let features = formats::parse_script(&text, &c.space).map_err(|error| CliError::Input {
        path: path.to_path_buf(),
        error,
    })?;
    let l = required(c.size("L"), "L");
    let default = required(c.label("default"), "default");
    let mut store = ForcingStore::new(&c.space)
        .with_default(default)
        .map_err(CliError::core("forcing"))?;
    let mut table = Table::new(&[
        "stage", "line", "kind", "witness", "materialized", "deferred", "forced", "nested",
    ]);
    let mut bad = Vec::new();
    for (line, f) in &features {
        let r = store.force(f, l).map_err(|source| CliError::Core {
            module: "forcing",
            context: format!(" (script line {line})"),
            source,
        })?;
        let witness = r.witness.map(|w| w.to_string()).unwrap_or_default();
        if !(r.forced && r.nested && r.materialized <= l.max(1)) {
            bad.push(*line);
        }
        table.push(row![r.stage, line, r.kind, witness, r.materialized, r.deferred, r.forced, r.nested]);
    }
    let stored = store.materialized_len();
    let mut rep = Report::new(c, "forcing: every stage extends the function outside its domain and forces its feature");
    rep.field("stages", features.len())
        .field("assignments", store.len())
        .field("stored", stored)
        .field("deferred", store.len() - stored)
        .field("rows", store.row_domain().len())
        .field("columns", store.col_domain().len());
    for kind in ["ROW", "COL", "POINT"] {
        let n = store.journal().iter().filter(|r| r.kind.to_string() == kind).count();
        rep.field(&format!("stages.{kind}"), n);
    }
    rep.pass = bad.is_empty();
    rep.line(format!(
        "{} stages; {} assignments ({} stored, {} deferred)",
        features.len(),
        store.len(),
        stored,
        store.len() - stored
    ));
    if rep.pass {
        rep.line("every stage forced its feature and extended the previous store");
    } else {
        rep.line(format!("stages failing a check at script lines {bad:?}"));
    }
    Ok(Outcome { report: rep, table })
}

fn measure(c: &RunConfig) -> Result<Outcome, CliError> {
    let event = load_event(c, "event")?.expect("event is required");
    let space = &c.space;
    let core = CliError::core("algebra");
    let mut table = Table::new(&["piece", "cylinder", "measure"]);
    for (i, p) in event.pieces().iter().enumerate() {
        table.push(row![i, format_cylinder(p, space), p.measure(space).map_err(&core)?]);
    }
    let total = event.measure(space).map_err(&core)?;
    let by_partition = partition_measure(event.pieces(), space).map_err(&core)?;
    let complement = event.complement(space).map_err(&core)?.measure(space).map_err(&core)?;
    table.push(row!["total", event.side(), total]);
    let mut rep = Report::new(c, "κ of a finite disjoint union of cylinders: sum of products of μ over constraints");
    let support: Vec<String> = event.support().iter().map(ToString::to_string).collect();
    rep.field("space", c.space_text())
        .field("side", event.side())
        .field("pieces", event.pieces().len())
        .field("support", support.join(" "))
        .field("measure", &total)
        .field("complement", &complement);
    rep.pass = by_partition == total && &complement + &total == Rational::one();
    rep.line(format!("κ = {total}; complement {complement}"));
    Ok(Outcome { report: rep, table })
}

fn homogeneity_exact_cmd(c: &RunConfig) -> Result<Outcome, CliError> {
    let space = &c.space;
    let set = required(c.set("set"), "set");
    let core = CliError::core("limit");
    let mut rep = Report::new(c, "κ(α ∩ {x* ∈ B}) = κ(α)·μ(B) for a coordinate x* outside the support of α");
    let mut table = Table::new(&[
        "trial", "alpha", "set", "star", "kappa_alpha", "kappa_beta", "kappa_gamma", "holds",
        "union_pieces", "union_holds",
    ]);
    let shown_set = space.display_set(set).to_string();

    if let Some(event) = load_event(c, "event")? {
        let side = event.side();
        let star = CoordinateId {
            side,
            index: c.uint("star").unwrap_or_else(|| fresh_index(&event)),
        };
        let mut all = true;
        for (i, piece) in event.pieces().iter().enumerate() {
            let id = homogeneity_exact(piece, set, star, space).map_err(&core)?;
            all &= id.holds;
            table.push(row![
                i, format_cylinder(piece, space), shown_set, star, id.alpha, id.beta, id.gamma, id.holds, "", ""
            ]);
        }
        let h = homogeneity_exact_event(&event, set, star, space).map_err(&core)?;
        table.push(row![
            "event", side, shown_set, star, h.event, h.beta, h.intersection, all,
            event.pieces().len(), h.holds
        ]);
        rep.field("star", star)
            .field("kappa_event", &h.event)
            .field("kappa_beta", &h.beta)
            .field("kappa_intersection", &h.intersection)
            .field("piecewise_sum", &h.piecewise);
        rep.pass = all && h.holds;
        rep.line(format!(
            "κ(A ∩ {{{star} ∈ B}}) = {} = {}·{}: {}",
            h.intersection,
            h.event,
            h.beta,
            if rep.pass { "holds" } else { "FAILS" }
        ));
        return Ok(Outcome { report: rep, table });
    }

    let trials = required(c.size("trials"), "trials");
    let coords = required(c.uint("coords"), "coords").max(1);
    let max_constraints = required(c.size("max_constraints"), "max_constraints");
    let results = par_map(trials, c.workers, |t| -> Result<Vec<String>, CliError> {
        let mut rng = rng::stream(c.seed, Purpose::Instance, t as u64);
        let alpha = random_cylinder(&mut rng, Side::Theta, space, coords, max_constraints);
        let set = ValueSet(rng.random_range(1..=space.full().0));
        let star = loop {
            let s = rng.random_range(0..coords + 4);
            if alpha.constraint(s).is_none() {
                break CoordinateId::theta(s);
            }
        };
        let id = homogeneity_exact(&alpha, set, star, space).map_err(&core)?;
        let other = random_cylinder(&mut rng, Side::Theta, space, coords, max_constraints);
        let union = AlgebraEvent::from_cylinder(alpha.clone())
            .union(&AlgebraEvent::from_cylinder(other), space)
            .map_err(&core)?;
        let star2 = CoordinateId::theta(fresh_index(&union) + rng.random_range(0..4));
        let h = homogeneity_exact_event(&union, set, star2, space).map_err(&core)?;
        Ok(row![
            t,
            format_cylinder(&alpha, space),
            space.display_set(set),
            star,
            id.alpha,
            id.beta,
            id.gamma,
            id.holds,
            union.pieces().len(),
            h.holds
        ])
    });
    let mut failures = 0usize;
    for r in results {
        let r = r?;
        if r[7] != "true" || r[9] != "true" {
            failures += 1;
        }
        table.push(r);
    }
    rep.field("trials", trials).field("failures", failures);
    rep.pass = failures == 0;
    rep.line(format!(
        "{} of {trials} random triples and unions satisfy the product identity exactly",
        trials - failures
    ));
    Ok(Outcome { report: rep, table })
}

fn null_cover_cmd(c: &RunConfig) -> Result<Outcome, CliError> {
    let space = &c.space;
    let x = required(c.rational("x"), "x");
    let set = required(c.set("set"), "set");
    let value = c.label("value").or(set.first()).expect("set is nonempty");
    let omega = required(c.uint("omega"), "omega");
    let mut store = ForcingStore::new(space);
    let cover = null_cover(&mut store, omega, x, set, value, space).map_err(CliError::core("limit"))?;
    let mu = space.measure(set).map_err(CliError::core("algebra"))?;
    let member = cover
        .event
        .member(CoordinateId::omega(omega), &store)
        .map_err(CliError::core("limit"))?;
    let power = (0..cover.n).fold(Rational::one(), |acc, _| acc * &mu);
    let minimal = cover.n == 0 || &power / &mu >= *x;
    let thetas: Vec<String> = cover.thetas.iter().map(|t| format!("t{t}")).collect();
    let mut table = Table::new(&["omega", "x", "set", "mu", "n", "measure", "thetas", "member"]);
    table.push(row![
        format!("w{omega}"), x, space.display_set(set), mu, cover.n, cover.measure, thetas.join(" "),
        member == Membership::In
    ]);
    let mut rep = Report::new(c, "null cover: π(B_n) = μ(X)^n < x with n least and ω in B_n");
    rep.field("n", cover.n)
        .field("mu", &mu)
        .field("measure", &cover.measure)
        .field("thetas", thetas.join(" "))
        .field("member", format!("{member:?}"));
    rep.pass = member == Membership::In && cover.measure == power && cover.measure < *x && minimal;
    rep.line(format!(
        "n={}, μ(X)^n={} < x={x}; w{omega} {} B_n",
        cover.n,
        cover.measure,
        if member == Membership::In { "∈" } else { "∉" }
    ));
    Ok(Outcome { report: rep, table })
}

fn gc(c: &RunConfig) -> Result<Outcome, CliError> {
    let space = &c.space;
    let n = required(c.size("n"), "n");
    let eps = required(c.rational("epsilon"), "epsilon");
    let runs = required(c.size("runs"), "runs");
    let min_passes = c.size("min_passes").unwrap_or(runs - runs / 100);
    let reports = par_map(runs, c.workers, |i| gc_test(space, n, run_seed(c.seed, i), eps));
    let mut table = Table::new(&["run", "seed", "n", "deviation", "pass", "false_failure_bound"]);
    let mut passes = 0;
    let mut bound = 0.0;
    for (i, r) in reports.into_iter().enumerate() {
        let r = r.map_err(CliError::core("verify"))?;
        passes += usize::from(r.pass);
        bound = r.false_failure_bound;
        table.push(row![i, r.seed, r.n, r.deviation, r.pass, format!("{:.3e}", r.false_failure_bound)]);
    }
    let mut rep = Report::new(c, "Glivenko-Cantelli: max over labels of |ν_n(r) − μ(r)| < ε");
    rep.field("runs", runs)
        .field("passes", passes)
        .field("min_passes", min_passes)
        .field("false_failure_bound", format!("{bound:.3e}"));
    rep.pass = passes >= min_passes;
    rep.line(format!(
        "{passes} of {runs} runs within ε={eps} (required {min_passes}); per-run false-failure bound {bound:.2e}"
    ));
    rep.line(format!("run i uses seed {} + i", c.seed));
    Ok(Outcome { report: rep, table })
}

fn homogeneity_mc_cmd(c: &RunConfig) -> Result<Outcome, CliError> {
    let space = &c.space;
    let rows = required(c.size("rows"), "rows");
    let cols = required(c.size("cols"), "cols");
    let subsets = required(c.size("subsets"), "subsets");
    let subset_min = required(c.size("subset_min"), "subset_min").max(1);
    let set = required(c.set("set"), "set");
    let eps = required(c.rational("epsilon"), "epsilon");
    let min_fraction = required(c.rational("min_fraction"), "min_fraction");
    if subset_min > cols {
        return Err(CliError::Usage(format!("subset_min {subset_min} exceeds cols {cols}")));
    }
    let m = SampleMatrix::generate(space, rows, cols, c.seed);
    let tables = par_map(subsets, c.workers, |s| {
        let mut rng = rng::stream(c.seed, Purpose::Instance, s as u64);
        let size = rng.random_range(subset_min..=cols);
        let mut columns = rand::seq::index::sample(&mut rng, cols, size).into_vec();
        columns.sort_unstable();
        homogeneity_mc(&m, &columns, set, eps).map(|t| (size, t))
    });
    let mut table = Table::new(&["subset", "size", "row", "hits", "deviation", "conditional", "within"]);
    let (mut within, mut total) = (0usize, 0usize);
    let mut worst = Rational::zero();
    for (s, t) in tables.into_iter().enumerate() {
        let (size, t) = t.map_err(CliError::core("verify"))?;
        within += t.within;
        total += t.rows.len();
        for r in &t.rows {
            if r.conditional > worst {
                worst = r.conditional.clone();
            }
            table.push(row![s, size, r.row, r.hits, r.deviation, r.conditional, r.within]);
        }
    }
    let fraction = ratio(within, total);
    let mut rep = Report::new(c, "homogeneity: |ν(A ∩ φ_ω⁻¹(B))/ν(A) − μ(B)| < ε for each row ω and column set A");
    rep.field("pairs", total)
        .field("within", within)
        .field("fraction", &fraction)
        .field("worst", &worst);
    rep.pass = total > 0 && fraction >= *min_fraction;
    rep.line(format!(
        "{within} of {total} (row, A) pairs within ε={eps} (fraction {fraction}, required {min_fraction}); worst deviation {worst}"
    ));
    Ok(Outcome { report: rep, table })
}

fn fg_demo(c: &RunConfig) -> Result<Outcome, CliError> {
    let n = required(c.size("n"), "n");
    let core = CliError::core("verify");
    if n == 0 {
        return Err(CliError::Usage("fg-demo needs n ≥ 1".into()));
    }
    let mut table = Table::new(&["n", "total", "satisfying", "obstruction", "visited"]);
    let mut last = None;
    let mut clean = true;
    for k in 1..=n {
        let r = fg_impossibility(k).map_err(&core)?;
        clean &= r.satisfying == 0;
        let obstruction = r.obstruction.map(|o| o.to_string()).unwrap_or_default();
        table.push(row![r.n, r.total, r.satisfying, obstruction, r.visited]);
        last = Some(r);
    }
    let r = last.expect("n ≥ 1");
    let mut rep = Report::new(c, "every prefix mean of a {0,1} sequence equal to 1/2");
    rep.field("total", r.total)
        .field("satisfying", r.satisfying)
        .field(
            "obstruction",
            r.obstruction.map(|o| o.to_string()).unwrap_or_else(|| "-".into()),
        )
        .field("visited", r.visited);
    rep.pass = clean;
    let obstruction = match r.obstruction {
        Some(k) => format!("first obstruction k={k}"),
        None => "no obstruction".to_owned(),
    };
    rep.line(format!(
        "{} of {} vectors satisfy exact homogeneity; {obstruction}",
        r.satisfying, r.total
    ));
    Ok(Outcome { report: rep, table })
}

fn format_family(fam: &RectangleFamily) -> String {
    let list = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    fam.rects()
        .iter()
        .map(|r| format!("[{}]x[{}]", list(r.rows()), list(r.cols())))
        .collect::<Vec<_>>()
        .join(";")
}

fn rect_oracle(c: &RunConfig) -> Result<Outcome, CliError> {
    let space = &c.space;
    let set = required(c.set("set"), "set");
    let max_rects = required(c.size("I"), "I");
    let heuristic = c.flag("heuristic");
    let core = CliError::core("verify");
    let matrices: Vec<(String, SampleMatrix)> = match c.path("matrix") {
        Some(path) => {
            let m = formats::parse_matrix(&read_file(path)?, space).map_err(|error| CliError::Input {
                path: path.to_path_buf(),
                error,
            })?;
            vec![("-".into(), m)]
        }
        None => {
            let rows = required(c.size("rows"), "rows");
            let cols = required(c.size("cols"), "cols");
            (0..required(c.size("instances"), "instances"))
                .map(|i| {
                    let s = run_seed(c.seed, i);
                    (s.to_string(), SampleMatrix::generate(space, rows, cols, s))
                })
                .collect()
        }
    };
    let results = par_map(matrices.len(), c.workers, |i| {
        let m = &matrices[i].1;
        let opt = min_rectangle_error(m, set, max_rects, heuristic)?;
        let empty = rectangle_error(m, set, &RectangleFamily::empty())?;
        let whole = if max_rects >= 1 && m.rows() > 0 && m.cols() > 0 {
            let r = Rectangle::new((0..m.rows()).collect(), (0..m.cols()).collect());
            Some(rectangle_error(m, set, &RectangleFamily::new(vec![r])?)?)
        } else {
            None
        };
        let dominated = opt.error <= empty && whole.is_none_or(|w| opt.error <= w);
        Ok::<_, sdlimit_core::Error>((opt, dominated))
    });
    let mut table = Table::new(&[
        "instance", "seed", "rows", "cols", "I", "min_error", "mismatches", "exhaustive", "family",
    ]);
    let mut ok = true;
    let mut errors = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        let (opt, dominated) = r.map_err(&core)?;
        ok &= dominated;
        let m = &matrices[i].1;
        table.push(row![
            i, matrices[i].0, m.rows(), m.cols(), max_rects, opt.error, opt.mismatches, opt.exhaustive,
            format_family(&opt.family)
        ]);
        errors.push(opt.error);
    }
    let mut rep = Report::new(c, "least density of φ⁻¹(A) △ ⋃ B_i×F_i over at most I disjoint rectangles");
    rep.field("instances", errors.len());
    if let [only] = errors.as_slice() {
        rep.field("min_error", only);
    }
    rep.pass = ok;
    match errors.as_slice() {
        [only] => rep.line(format!("least rectangle error with I={max_rects}: {only}")),
        _ => rep.line(format!("{} instances with I={max_rects}", errors.len())),
    };
    if !ok {
        rep.line("the reported optimum is worse than a trivial family");
    }
    Ok(Outcome { report: rep, table })
}

fn thmd_check(c: &RunConfig) -> Result<Outcome, CliError> {
    let space = &c.space;
    let core = CliError::core("verify");
    let a = required(c.rational("a"), "a");
    let id = thmd_mechanism_check(a).map_err(&core)?;
    let mut rep = Report::new(c, "b = (a − a²)/2 gives a − 2b = a²");
    rep.notes.push(
        "finite-scale check of the approximation mechanism; the nonmeasurability statement itself is not verified",
    );
    rep.field("a", &id.a)
        .field("b", &id.b)
        .field("a_minus_2b", &id.a_minus_2b)
        .field("a_squared", &id.a_squared)
        .field("holds", id.holds);
    rep.pass = id.holds;
    if id.holds {
        rep.line(format!("b={}, a−2b={}=a²", id.b, id.a_minus_2b));
    } else {
        rep.line(format!("b={}, a−2b={} ≠ a²={}", id.b, id.a_minus_2b, id.a_squared));
    }
    let mut table = Table::new(&[
        "a", "b", "a_minus_2b", "a_squared", "holds", "eta", "theta", "freq_eta", "overlap",
        "lower_bound", "threshold", "realized",
    ]);
    let mut cells = row![id.a, id.b, id.a_minus_2b, id.a_squared, id.holds];
    if c.flag("overlap") {
        let set = required(c.set("set"), "set");
        let mu = space.measure(set).map_err(CliError::core("algebra"))?;
        let mech = thmd_mechanism_check(&mu).map_err(|_| {
            CliError::Usage(format!("overlap demo needs 0 < μ(set) < 1, found {mu}"))
        })?;
        let m = SampleMatrix::generate(
            space,
            required(c.size("rows"), "rows"),
            required(c.size("cols"), "cols"),
            c.seed,
        );
        let opt = min_rectangle_error(&m, set, required(c.size("I"), "I"), true).map_err(&core)?;
        let w = overlap_check(&m, set, &opt.family, &mech.b).map_err(&core)?;
        rep.field("overlap.a", &mu)
            .field("overlap.b", &mech.b)
            .field("overlap.family", format_family(&opt.family))
            .field("overlap.rectangle_error", &opt.error);
        match w {
            Some(w) => {
                rep.field("overlap.eta", w.eta)
                    .field("overlap.theta", w.theta)
                    .field("overlap.value", &w.overlap)
                    .field("overlap.lower_bound", &w.lower_bound)
                    .field("overlap.threshold", &w.threshold)
                    .field("overlap.realized", w.realized);
                rep.pass &= w.overlap >= w.lower_bound;
                rep.line(format!(
                    "columns {} and {}: overlap {} against a−2b={} ({})",
                    w.eta,
                    w.theta,
                    w.overlap,
                    w.threshold,
                    if w.realized { "chain realized" } else { "chain not realized" }
                ));
                cells.extend(row![w.eta, w.theta, w.freq_eta, w.overlap, w.lower_bound, w.threshold, w.realized]);
            }
            None => {
                rep.line("no two equivalent columns lie within b of their row union");
                cells.extend(row!["", "", "", "", "", "", ""]);
            }
        }
    } else {
        cells.extend(row!["", "", "", "", "", "", ""]);
    }
    table.push(cells);
    Ok(Outcome { report: rep, table })
}

fn nonatomic(c: &RunConfig) -> Result<Outcome, CliError> {
    let space = &c.space;
    let set = required(c.set("set"), "set");
    let iterations = required(c.size("iterations"), "iterations");
    let mut event = load_event(c, "event")?.unwrap_or_else(|| AlgebraEvent::full(Side::Omega));
    let mut table = Table::new(&["step", "star", "parent", "measure"]);
    let mut rep = Report::new(c, "nonatomic split: 0 < ν(A ∩ {x* ∈ B}) = ν(A)·μ(B) < ν(A)");
    for step in 0..iterations {
        let star = CoordinateId {
            side: event.side(),
            index: fresh_index(&event),
        };
        let split = nonatomic_split(&event, set, star, space).map_err(CliError::core("verify"))?;
        table.push(row![step, star, split.parent, split.measure]);
        event = split.event;
    }
    let last = event.measure(space).map_err(CliError::core("algebra"))?;
    rep.field("iterations", iterations).field("final_measure", &last);
    rep.line(format!(
        "{iterations} strictly decreasing splits, final measure {last}"
    ));
    Ok(Outcome { report: rep, table })
}
