use std::fmt;
use std::path::Path;

use num_bigint::BigUint;
use serde_json::json;

use wsb_core::analytics::{
    mod9_census, observed_counts, oeis_report, ones_fraction, predicted_counts, reduction_census, AnalyticsError,
};
use wsb_core::crossdiff::{
    crossdiffs_from_fractions, log3_exact, no_reduction_row, probe_unit_rule, unit_row_by_rule, CrossDiffError,
    MATERIALIZE_CAP,
};
use wsb_core::oracle::{infinite_unit_exponent, infinite_unit_value, no_reduction_value, parse_index, unit_value};
use wsb_core::render::{
    cantor_bitmap, cantor_stack, ones_bitmap, ones_stack, steeple_strip, step_plot, Figure as _, RenderError,
};
use wsb_core::row::{default_row_cap, generate_row_capped, RowError, RowSpec};
use wsb_core::verify::{run_suite, Suite};
use wsb_core::{CrossDiffRow, Fraction};

use crate::output::{io_failure, JsonArray, Sink};
use crate::{
    CensusArgs, CensusKind, Command, CrossdiffArgs, Figure, Format, Method, ProbeArgs, QueryArgs, RenderArgs,
    RenderFormat, RowArgs, SequenceArgs, VerifyArgs,
};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Resource(String),
    Mismatch(String),
    Suite(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Mismatch(_) => 4,
            Failure::Suite(_) => 5,
            Failure::Io(_) => 6,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Resource(m) | Failure::Mismatch(m) | Failure::Suite(m) | Failure::Io(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<RowError> for Failure {
    fn from(e: RowError) -> Self {
        match e {
            RowError::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CrossDiffError> for Failure {
    fn from(e: CrossDiffError) -> Self {
        match e {
            CrossDiffError::Row(e) => e.into(),
            CrossDiffError::TooLarge { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<AnalyticsError> for Failure {
    fn from(e: AnalyticsError) -> Self {
        match e {
            AnalyticsError::Row(e) => e.into(),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<RenderError> for Failure {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::Io { .. } => Failure::Io(e.to_string()),
            RenderError::CrossDiff(e) => e.into(),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Row(args) => cmd_row(args),
        Command::Crossdiff(args) => cmd_crossdiff(args),
        Command::Query(args) => cmd_query(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Render(args) => cmd_render(args),
        Command::Census(args) => cmd_census(args),
        Command::Probe(args) => cmd_probe(args),
    }
}

fn spec_of(seq: &SequenceArgs, n: u32) -> Result<RowSpec, Failure> {
    let (left, right) = seq.start.clone();
    Ok(RowSpec::new(seq.k, left, right, !seq.no_reduce, n)?)
}

fn is_unit_start(spec: &RowSpec) -> bool {
    spec.k == 3 && spec.start_left == Fraction::zero() && spec.start_right == Fraction::one()
}

fn cmd_row(args: RowArgs) -> Result<(), Failure> {
    let spec = spec_of(&args.seq, args.n)?;
    let cap = args.cap.unwrap_or_else(|| default_row_cap(spec.k));
    let stream = generate_row_capped(&spec, cap)?;
    let mut sink = Sink::open(args.out.as_deref())?;
    match args.format {
        Format::Text | Format::Log3 => {
            for f in stream {
                sink.line(f.to_string())?;
            }
        }
        Format::Json => {
            let mut array = JsonArray::start(&mut sink)?;
            for f in stream {
                array.push(&f.to_string())?;
            }
            array.end()?;
        }
        Format::Csv => {
            sink.line("index,num,den")?;
            for (i, f) in stream.enumerate() {
                sink.line(format!("{i},{},{}", f.num(), f.den()))?;
            }
        }
    }
    sink.finish()
}

fn oracle_row(n: u32) -> CrossDiffRow {
    let values = (0..3u64.pow(n)).map(|i| unit_value(&BigUint::from(i), n).expect("index in range")).collect();
    CrossDiffRow::new(n, values)
}

fn no_reduction_oracle_row(n: u32) -> CrossDiffRow {
    CrossDiffRow::new(n, (0..3u64.pow(n)).map(|i| no_reduction_value(&BigUint::from(i))).collect())
}

fn cmd_crossdiff(args: CrossdiffArgs) -> Result<(), Failure> {
    let spec = spec_of(&args.seq, args.n)?;
    if args.method != Method::Fractions && !spec.is_unit() {
        return Err(Failure::Usage(
            format!("--method {:?} needs the unit case (k = 3, start 0/1,1/1, reduced)", args.method).to_lowercase(),
        ));
    }
    if args.n > MATERIALIZE_CAP {
        return Err(Failure::Resource(format!("row {} is past the materialization cap {MATERIALIZE_CAP}", args.n)));
    }
    let row = match args.method {
        Method::Fractions => crossdiffs_from_fractions(&spec)?,
        Method::Rule => unit_row_by_rule(args.n)?,
        Method::Oracle => oracle_row(args.n),
    };
    if args.check {
        let mut routes: Vec<(&str, CrossDiffRow)> = vec![("fractions", crossdiffs_from_fractions(&spec)?)];
        if spec.is_unit() {
            routes.push(("rule", unit_row_by_rule(args.n)?));
            routes.push(("oracle", oracle_row(args.n)));
        } else if is_unit_start(&spec) && !spec.reduce {
            routes.push(("no-reduction rule", no_reduction_row(args.n)?));
            routes.push(("no-reduction oracle", no_reduction_oracle_row(args.n)));
        }
        let (base_name, base) = &routes[0];
        for (name, other) in &routes[1..] {
            if let Some(i) = (0..base.len()).find(|&i| base.values()[i] != other.values()[i]) {
                return Err(Failure::Mismatch(format!(
                    "C_{} differs at index {i}: {base_name} {} vs {name} {}",
                    args.n,
                    base.values()[i],
                    other.values()[i]
                )));
            }
        }
        eprintln!(
            "check: {} agree on {} values",
            routes.iter().map(|r| r.0).collect::<Vec<_>>().join(", "),
            base.len()
        );
    }
    let mut sink = Sink::open(args.out.as_deref())?;
    write_crossdiffs(&mut sink, &row, args.format)?;
    sink.finish()
}

fn write_crossdiffs(sink: &mut Sink, row: &CrossDiffRow, format: Format) -> Result<(), Failure> {
    match format {
        Format::Text => {
            for v in row.values() {
                sink.line(v.to_string())?;
            }
        }
        Format::Json => {
            let mut array = JsonArray::start(sink)?;
            for v in row.values() {
                array.push(&v.to_string())?;
            }
            array.end()?;
        }
        Format::Csv => {
            sink.line("index,value,log3")?;
            for (i, v) in row.values().iter().enumerate() {
                let log = log3_exact(v).map(|e| e.to_string()).unwrap_or_default();
                sink.line(format!("{i},{v},{log}"))?;
            }
        }
        Format::Log3 => {
            let plot = step_plot(row)?;
            sink.raw(plot.to_text())?
        }
    }
    Ok(())
}

fn cmd_query(args: QueryArgs) -> Result<(), Failure> {
    let index = parse_index(&args.index).map_err(|e| Failure::Usage(e.to_string()))?;
    let exponent = infinite_unit_exponent(&index);
    let value = infinite_unit_value(&index);
    let mut sink = Sink::open(None)?;
    match args.format {
        Format::Json => {
            sink.line(json!({ "index": index.to_string(), "value": value.to_string(), "log3": exponent }).to_string())?
        }
        _ => sink.line(format!("{value} = 3^{exponent}"))?,
    }
    sink.finish()
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let suites: Vec<Suite> = if args.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suites.iter().map(|s| s.parse::<Suite>()).collect::<Result<_, _>>().map_err(Failure::Usage)?
    };
    let reports: Vec<_> =
        suites.iter().map(|&s| run_suite(s, args.max_n.unwrap_or_else(|| s.default_max_n()))).collect();
    let mut sink = Sink::open(None)?;
    if args.format == Format::Json {
        let items: Vec<_> = reports
            .iter()
            .map(|r| {
                json!({
                    "suite": r.suite.name(),
                    "max_n": r.max_n,
                    "passed": r.passed(),
                    "checks": r.checks,
                    "counterexample": r.counterexample,
                    "notes": r.notes,
                })
            })
            .collect();
        sink.line(serde_json::Value::from(items).to_string())?;
    } else {
        for r in &reports {
            sink.line(r.summary_line())?;
            for note in &r.notes {
                for line in note.lines() {
                    sink.line(format!("    {line}"))?;
                }
            }
            if let Some(cx) = &r.counterexample {
                sink.line(format!("    counterexample: {cx}"))?;
            }
        }
    }
    sink.finish()?;
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => {
            Err(Failure::Suite(format!("suite {} failed: {}", r.suite, r.counterexample.clone().unwrap_or_default())))
        }
        None => Ok(()),
    }
}

fn require(value: Option<u32>, flag: &str) -> Result<u32, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this figure")))
}

fn cmd_render(args: RenderArgs) -> Result<(), Failure> {
    let format = args.format.unwrap_or_else(|| {
        let svg = args.out.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg"));
        if svg {
            RenderFormat::Svg
        } else {
            RenderFormat::Text
        }
    });
    let body = match args.what {
        Figure::Crossdiff | Figure::Nored => {
            let n = require(args.n, "n")?;
            let row = if args.what == Figure::Crossdiff { unit_row_by_rule(n)? } else { no_reduction_row(n)? };
            render(&step_plot(&row)?, format)
        }
        Figure::Steeples => {
            let max_n = require(args.max_n.or(args.n), "max-n")?;
            if max_n == 0 || max_n > MATERIALIZE_CAP {
                return Err(Failure::Usage(format!("--max-n must be in 1..={MATERIALIZE_CAP}")));
            }
            render(&steeple_strip(max_n)?, format)
        }
        Figure::Cantor | Figure::Ones => {
            let n = require(args.n, "n")?;
            if n > MATERIALIZE_CAP {
                return Err(Failure::Resource(format!("depth {n} is past the cap {MATERIALIZE_CAP}")));
            }
            match (args.what, args.single) {
                (Figure::Cantor, true) => render(&cantor_bitmap(n), format),
                (Figure::Cantor, false) => render(&cantor_stack(n), format),
                (_, true) => render(&ones_bitmap(n), format),
                (_, false) => render(&ones_stack(n), format),
            }
        }
    };
    write_file(&args.out, &body)
}

fn render(figure: &impl wsb_core::render::Figure, format: RenderFormat) -> String {
    match format {
        RenderFormat::Svg => figure.to_svg(),
        RenderFormat::Text => figure.to_text(),
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    std::fs::write(path, body).map_err(|e| io_failure(path, e))
}

fn cmd_census(args: CensusArgs) -> Result<(), Failure> {
    let mut sink = Sink::open(None)?;
    let json = args.format == Format::Json;
    match args.what {
        CensusKind::Counts => {
            let table = predicted_counts(require(args.n, "n")?);
            sink.raw(if json { table.to_json().to_string() + "\n" } else { table.to_text() })?;
        }
        CensusKind::Observed => {
            let n = require(args.n, "n")?;
            let table = observed_counts(&crossdiffs_from_fractions(&RowSpec::unit(n))?)?;
            sink.raw(if json { table.to_json().to_string() + "\n" } else { table.to_text() })?;
        }
        CensusKind::Mod9 => {
            let census = mod9_census(args.n.unwrap_or(8))?;
            sink.raw(if json { census.to_json().to_string() + "\n" } else { census.to_text() })?;
        }
        CensusKind::Reduction => {
            let census = reduction_census(args.n.unwrap_or(10))?;
            let factors: serde_json::Map<_, _> =
                census.factors.iter().map(|(f, c)| (f.to_string(), json!(c))).collect();
            let report = json!({
                "max_n": census.max_n,
                "constructions": census.constructions,
                "factors": factors,
                "asymmetric": census.asymmetric,
                "non_dividing": census.non_dividing,
                "reducing": census.reducing,
                "monotone_numerators": census.monotone_numerators,
                "unit_step_numerators": census.unit_step_numerators,
                "monotone_denominators": census.monotone_denominators,
                "unit_step_denominators": census.unit_step_denominators,
            });
            if json {
                sink.line(report.to_string())?;
            } else {
                for (key, value) in report.as_object().expect("object") {
                    sink.line(format!("{key:<24} {value}"))?;
                }
            }
        }
        CensusKind::Oeis => {
            let checks = oeis_report();
            if json {
                let items: Vec<_> = checks
                    .iter()
                    .map(|c| {
                        json!({
                            "id": c.id,
                            "description": c.description,
                            "expected": c.expected,
                            "computed": c.computed.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                            "matches": c.matches(),
                        })
                    })
                    .collect();
                sink.line(serde_json::Value::from(items).to_string())?;
            } else {
                for c in checks {
                    let computed: Vec<String> = c.computed.iter().map(|v| v.to_string()).collect();
                    let expected: Vec<String> = c.expected.iter().map(|v| v.to_string()).collect();
                    let status = if c.matches() { "match" } else { "MISMATCH" };
                    sink.line(format!("{} ({}): {status}", c.id, c.description))?;
                    sink.line(format!("  expected {}", expected.join(", ")))?;
                    sink.line(format!("  computed {}", computed.join(", ")))?;
                }
            }
        }
        CensusKind::OnesFraction => {
            let n = require(args.n, "n")?;
            if n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let share = ones_fraction(n);
            if json {
                sink.line(json!({ "n": n, "ones_fraction": share.to_string() }).to_string())?;
            } else {
                sink.line(share.to_string())?;
            }
        }
    }
    sink.finish()
}

fn cmd_probe(args: ProbeArgs) -> Result<(), Failure> {
    let (left, right) = args.start;
    let template = RowSpec::new(3, left, right, true, 0)?;
    let probes = probe_unit_rule(&template, args.max_n)?;
    let mut sink = Sink::open(None)?;
    if args.format == Format::Json {
        let items: Vec<_> = probes
            .iter()
            .map(|p| {
                json!({
                    "n": p.n,
                    "agrees": p.agrees(),
                    "mismatches": p.mismatches.len(),
                    "first_mismatch": p.mismatches.first(),
                    "rule_error": p.rule_error.as_ref().map(|e| e.to_string()),
                })
            })
            .collect();
        sink.line(serde_json::Value::from(items).to_string())?;
    } else {
        for p in &probes {
            let detail = match (&p.rule_error, p.mismatches.first()) {
                (Some(e), _) => format!("rule error: {e}"),
                (None, Some(i)) => format!("{} mismatches, first at {i}", p.mismatches.len()),
                (None, None) => "agrees".to_string(),
            };
            sink.line(format!("n={} {detail}", p.n))?;
        }
    }
    sink.finish()
}
