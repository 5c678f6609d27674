//! Command-line front end.
//!
//! Exit codes: 0 = clean, 1 = violations or counterexamples found,
//! 2 = usage or input error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::axioms::{
    check_aggregation_consistency, check_improvement_consistency, concordant_outcome,
    ConsistencyProperty, RankOutcome, Severity, ViolationReport,
};
use crate::document::{load_document, Document, DocumentShape, ScientistData};
use crate::model::{evaluate, CitationRecord, Fraction, IndicatorKind, IndicatorSpec, Threshold};
use crate::repro::{builtin_fixture, run_fixture, FixtureReport, TableId};
use crate::search::{find_counterexamples, minimal_counterexamples, Counterexample, SearchBounds};
use crate::transforms::{aggregate_periods, Improvement, RoundingMode};

pub const EXIT_CLEAN: u8 = 0;
pub const EXIT_FOUND: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "citecheck",
    version,
    about = "Citation indicators, ranking-consistency checks and counterexample search"
)]
pub struct Cli {
    /// Output format; defaults to `table` on a terminal and `records` otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned human-readable table.
    Table,
    /// One JSON object per line.
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IndicatorArg {
    Hcp,
    H,
    TotalCitations,
    PaperCount,
}

impl From<IndicatorArg> for IndicatorKind {
    fn from(arg: IndicatorArg) -> Self {
        match arg {
            IndicatorArg::Hcp => IndicatorKind::Hcp,
            IndicatorArg::H => IndicatorKind::HIndex,
            IndicatorArg::TotalCitations => IndicatorKind::TotalCitations,
            IndicatorArg::PaperCount => IndicatorKind::PaperCount,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    Relative,
    Absolute,
    Aggregation,
}

impl From<PropertyArg> for ConsistencyProperty {
    fn from(arg: PropertyArg) -> Self {
        match arg {
            PropertyArg::Relative => ConsistencyProperty::RelativeImprovement,
            PropertyArg::Absolute => ConsistencyProperty::AbsoluteImprovement,
            PropertyArg::Aggregation => ConsistencyProperty::Aggregation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoundingArg {
    Strict,
    Floor,
}

impl From<RoundingArg> for RoundingMode {
    fn from(arg: RoundingArg) -> Self {
        match arg {
            RoundingArg::Strict => RoundingMode::Strict,
            RoundingArg::Floor => RoundingMode::Floor,
        }
    }
}

#[derive(Debug, Args)]
pub struct ImprovementArgs {
    /// Relative improvement factor written as an integer fraction, e.g. 4/3.
    #[arg(long = "relative", value_name = "P/Q", value_parser = parse_fraction)]
    pub relative: Vec<Fraction>,

    /// Absolute improvement: citations added to every paper.
    #[arg(long = "absolute", value_name = "D")]
    pub absolute: Vec<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an indicator for every scientist of a document.
    Compute {
        document: PathBuf,
        #[arg(long, value_enum)]
        indicator: IndicatorArg,
        /// HCP threshold; overrides the document's threshold.
        #[arg(long)]
        threshold: Option<u64>,
        #[command(flatten)]
        improvements: ImprovementArgs,
    },
    /// Check a consistency property for every pair of scientists.
    Check {
        document: PathBuf,
        #[arg(long, value_enum)]
        indicator: IndicatorArg,
        #[arg(long)]
        threshold: Option<u64>,
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[command(flatten)]
        improvements: ImprovementArgs,
        #[arg(long, value_enum, default_value = "strict")]
        rounding: RoundingArg,
        /// Count weakenings (strict order to tie and back) as violations in the summary.
        #[arg(long)]
        include_weakenings: bool,
    },
    /// Exhaustively search bounded record pairs for counterexamples.
    Search {
        #[arg(long, value_enum)]
        indicator: IndicatorArg,
        /// HCP threshold; repeat for a grid.
        #[arg(long)]
        threshold: Vec<u64>,
        #[arg(long)]
        max_papers: usize,
        #[arg(long)]
        max_citations: u64,
        #[command(flatten)]
        improvements: ImprovementArgs,
        /// Properties to search; inferred from the improvement grid when omitted.
        #[arg(long, value_enum)]
        property: Vec<PropertyArg>,
        #[arg(long, default_value_t = 2)]
        max_periods: usize,
        #[arg(long)]
        include_weakenings: bool,
        /// Also pair scientists with different numbers of papers.
        #[arg(long)]
        mixed_paper_counts: bool,
        /// Only print Pareto-minimal counterexamples by (papers, citations).
        #[arg(long)]
        minimal: bool,
    },
    /// Recompute the built-in table fixtures.
    Repro {
        /// T1..T7 or all.
        #[arg(default_value = "all")]
        table: String,
    },
    /// Write the built-in fixtures as record documents.
    ExportFixtures {
        /// T1..T7 or all.
        #[arg(default_value = "all")]
        table: String,
        /// Directory receiving one `<table>.json` per fixture.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_fraction(s: &str) -> Result<Fraction, String> {
    s.parse::<Fraction>().map_err(|e| e.to_string())
}

/// Failure that maps to exit code 2.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        Self(e.to_string())
    }
}

type CmdResult = Result<u8, InputError>;

fn input_error<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError(msg.into()))
}

/// Parses `args` and runs the command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, terminal: bool) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let clean = !e.use_stderr();
            let sink: &mut dyn Write = if clean { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if clean { EXIT_CLEAN } else { EXIT_INPUT };
        }
    };
    let format = cli.format.unwrap_or(if terminal {
        Format::Table
    } else {
        Format::Records
    });
    match execute(cli.command, format, out) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn execute(command: Command, format: Format, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Compute {
            document,
            indicator,
            threshold,
            improvements,
        } => cmd_compute(
            &document,
            indicator.into(),
            threshold,
            &improvements,
            format,
            out,
        ),
        Command::Check {
            document,
            indicator,
            threshold,
            property,
            improvements,
            rounding,
            include_weakenings,
        } => {
            let doc = read_document(&document)?;
            let spec = resolve_indicator(indicator.into(), threshold, doc.threshold)?;
            let options = CheckOptions {
                property: property.into(),
                improvements: improvement_grid(&improvements, rounding.into())?,
                include_weakenings,
            };
            cmd_check(&doc, spec, &options, format, out)
        }
        Command::Search {
            indicator,
            threshold,
            max_papers,
            max_citations,
            improvements,
            property,
            max_periods,
            include_weakenings,
            mixed_paper_counts,
            minimal,
        } => {
            let grid = improvement_grid(&improvements, RoundingMode::Floor)?;
            let properties: BTreeSet<ConsistencyProperty> = if property.is_empty() {
                grid.iter()
                    .map(ConsistencyProperty::of_improvement)
                    .collect()
            } else {
                property.into_iter().map(Into::into).collect()
            };
            if properties.is_empty() {
                return input_error("empty improvement grid: give --relative or --absolute");
            }
            let thresholds = threshold
                .into_iter()
                .map(Threshold::new)
                .collect::<Result<Vec<_>, _>>()?;
            let kind: IndicatorKind = indicator.into();
            if kind == IndicatorKind::Hcp && thresholds.is_empty() {
                return input_error("the hcp indicator needs --threshold");
            }
            let bounds = SearchBounds {
                max_papers,
                max_citations,
                improvements: grid,
                thresholds,
                properties,
                max_periods,
                include_weakenings,
                mixed_paper_counts,
            };
            cmd_search(kind, &bounds, minimal, format, out)
        }
        Command::Repro { table } => cmd_repro(&table, format, out),
        Command::ExportFixtures { table, out: dir } => cmd_export(&table, dir.as_deref(), out),
    }
}

fn read_document(path: &Path) -> Result<Document, InputError> {
    let text =
        fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    load_document(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn resolve_indicator(
    kind: IndicatorKind,
    flag: Option<u64>,
    embedded: Option<Threshold>,
) -> Result<IndicatorSpec, InputError> {
    Ok(match kind {
        IndicatorKind::Hcp => {
            let threshold = match (flag, embedded) {
                (Some(t), _) => Threshold::new(t)?,
                (None, Some(t)) => t,
                (None, None) => {
                    return input_error(
                        "the hcp indicator needs a threshold (document or --threshold)",
                    )
                }
            };
            IndicatorSpec::HcpCount { threshold }
        }
        IndicatorKind::HIndex => IndicatorSpec::HIndex,
        IndicatorKind::TotalCitations => IndicatorSpec::TotalCitations,
        IndicatorKind::PaperCount => IndicatorSpec::PaperCount,
    })
}

fn improvement_grid(
    args: &ImprovementArgs,
    rounding: RoundingMode,
) -> Result<Vec<Improvement>, InputError> {
    let mut grid = args
        .relative
        .iter()
        .map(|&f| Improvement::relative(f, rounding))
        .collect::<Result<Vec<_>, _>>()?;
    grid.extend(args.absolute.iter().map(|&d| Improvement::absolute(d)));
    Ok(grid)
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<(), InputError> {
    let line = serde_json::to_string(value)?;
    writeln!(out, "{line}")?;
    Ok(())
}

/// Prints rows as left-aligned columns.
fn print_table(
    out: &mut dyn Write,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), InputError> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn cmd_compute(
    path: &Path,
    kind: IndicatorKind,
    threshold: Option<u64>,
    improvements: &ImprovementArgs,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let doc = read_document(path)?;
    let spec = resolve_indicator(kind, threshold, doc.threshold)?;
    let grid = improvement_grid(improvements, RoundingMode::Strict)?;
    if grid.len() > 1 {
        return input_error("compute accepts at most one improvement");
    }
    let improvement = grid.first().copied();
    if improvement.is_some() && matches!(doc.shape, DocumentShape::Periods(_)) {
        return input_error("improvements apply to flat documents only");
    }

    let mut rows = Vec::new();
    for s in &doc.scientists {
        let (periods, value) = match &s.data {
            ScientistData::Flat(r) => {
                let r = match improvement {
                    Some(imp) => imp
                        .apply(r)
                        .map_err(|e| InputError(format!("scientist {:?}: {e}", s.name)))?,
                    None => r.clone(),
                };
                (None, evaluate(spec, &r))
            }
            ScientistData::Periods(tp) => {
                let per: Vec<u64> = tp.periods().iter().map(|p| evaluate(spec, p)).collect();
                (Some(per), evaluate(spec, &aggregate_periods(tp)?))
            }
        };
        rows.push((s.name.clone(), periods, value));
    }

    match format {
        Format::Records => {
            for (name, periods, value) in &rows {
                match periods {
                    Some(p) => emit(out, &json!({"name": name, "periods": p, "value": value}))?,
                    None => emit(out, &json!({"name": name, "value": value}))?,
                }
            }
        }
        Format::Table => {
            let label = spec.to_string();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(name, periods, value)| {
                    let mut row = vec![name.clone()];
                    if let Some(p) = periods {
                        row.extend(p.iter().map(u64::to_string));
                    }
                    row.push(value.to_string());
                    row
                })
                .collect();
            let mut header = vec!["scientist".to_string()];
            if let DocumentShape::Periods(n) = doc.shape {
                header.extend((1..=n).map(|k| format!("period {k}")));
                header.push(format!("{label} (aggregated)"));
            } else {
                header.push(label);
            }
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            print_table(out, &header, &body)?;
        }
    }
    Ok(EXIT_CLEAN)
}

pub struct CheckOptions {
    pub property: ConsistencyProperty,
    pub improvements: Vec<Improvement>,
    pub include_weakenings: bool,
}

/// Outcome of one pair under one improvement (or under aggregation).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairOutcome {
    pub a: String,
    pub b: String,
    pub property: ConsistencyProperty,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub improvement: Option<Improvement>,
    /// `consistent`, `premise-unmet`, `strict-reversal` or `weakening`.
    pub outcome: String,
    pub before: Vec<(u64, u64)>,
    pub after: (u64, u64),
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub inexact_rounding: bool,
}

impl PairOutcome {
    fn from_report(a: &str, b: &str, report: &ViolationReport) -> Self {
        let inexact = matches!(
            report.subject,
            crate::axioms::Subject::Improvement {
                inexact_rounding: true,
                ..
            }
        );
        Self {
            a: a.to_string(),
            b: b.to_string(),
            property: report.property,
            improvement: report.improvement(),
            outcome: report.severity.to_string(),
            before: report.before.clone(),
            after: report.after,
            inexact_rounding: inexact,
        }
    }
}

/// Evaluates every pair of the document and returns the listing.
pub fn check_pairs(
    doc: &Document,
    spec: IndicatorSpec,
    options: &CheckOptions,
) -> Result<Vec<PairOutcome>, crate::Error> {
    let n = doc.scientists.len();
    let mut listing = Vec::new();
    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    match options.property {
        ConsistencyProperty::Aggregation => {
            for (i, j) in pairs {
                let (sa, sb) = (&doc.scientists[i], &doc.scientists[j]);
                let (ScientistData::Periods(a), ScientistData::Periods(b)) = (&sa.data, &sb.data)
                else {
                    unreachable!("shape checked by caller")
                };
                let before: Vec<(u64, u64)> = a
                    .periods()
                    .iter()
                    .zip(b.periods())
                    .map(|(x, y)| (evaluate(spec, x), evaluate(spec, y)))
                    .collect();
                let entry = match check_aggregation_consistency(spec, a, b)? {
                    Some(report) => oriented(&sa.name, &sb.name, report),
                    None => {
                        let after = (
                            evaluate(spec, &aggregate_periods(a)?),
                            evaluate(spec, &aggregate_periods(b)?),
                        );
                        let outcome = if concordant_outcome(&before).is_some() {
                            "consistent"
                        } else {
                            "premise-unmet"
                        };
                        let mut entry = PairOutcome {
                            a: sa.name.clone(),
                            b: sb.name.clone(),
                            property: options.property,
                            improvement: None,
                            outcome: outcome.into(),
                            before,
                            after,
                            inexact_rounding: false,
                        };
                        if concordant_outcome(&entry.before) == Some(RankOutcome::BHigher) {
                            entry = swap_entry(entry);
                        }
                        entry
                    }
                };
                listing.push(entry);
            }
        }
        _ => {
            for &imp in &options.improvements {
                for (i, j) in pairs.clone() {
                    let (sa, sb) = (&doc.scientists[i], &doc.scientists[j]);
                    let (ScientistData::Flat(a), ScientistData::Flat(b)) = (&sa.data, &sb.data)
                    else {
                        unreachable!("shape checked by caller")
                    };
                    let entry = match check_improvement_consistency(spec, a, b, imp)? {
                        Some(report) => oriented(&sa.name, &sb.name, report),
                        None => consistent_entry(spec, &sa.name, &sb.name, a, b, imp)?,
                    };
                    listing.push(entry);
                }
            }
        }
    }
    Ok(listing)
}

fn oriented(a: &str, b: &str, report: ViolationReport) -> PairOutcome {
    let first = report.before[0];
    let initially_b = match report.property {
        ConsistencyProperty::Aggregation => {
            concordant_outcome(&report.before) == Some(RankOutcome::BHigher)
        }
        _ => RankOutcome::from_values(first.0, first.1) == RankOutcome::BHigher,
    };
    if initially_b {
        PairOutcome::from_report(b, a, &report.swapped())
    } else {
        PairOutcome::from_report(a, b, &report)
    }
}

fn swap_entry(e: PairOutcome) -> PairOutcome {
    PairOutcome {
        a: e.b,
        b: e.a,
        before: e.before.into_iter().map(|(x, y)| (y, x)).collect(),
        after: (e.after.1, e.after.0),
        ..e
    }
}

fn consistent_entry(
    spec: IndicatorSpec,
    name_a: &str,
    name_b: &str,
    a: &CitationRecord,
    b: &CitationRecord,
    imp: Improvement,
) -> Result<PairOutcome, crate::Error> {
    let entry = PairOutcome {
        a: name_a.to_string(),
        b: name_b.to_string(),
        property: ConsistencyProperty::of_improvement(&imp),
        improvement: Some(imp),
        outcome: "consistent".into(),
        before: vec![(evaluate(spec, a), evaluate(spec, b))],
        after: (
            evaluate(spec, &imp.apply(a)?),
            evaluate(spec, &imp.apply(b)?),
        ),
        inexact_rounding: imp.rounds(a) || imp.rounds(b),
    };
    Ok(if entry.before[0].0 < entry.before[0].1 {
        swap_entry(entry)
    } else {
        entry
    })
}

fn cmd_check(
    doc: &Document,
    spec: IndicatorSpec,
    options: &CheckOptions,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    match (options.property, doc.shape) {
        (ConsistencyProperty::Aggregation, DocumentShape::Flat) => {
            return input_error("aggregation checks need a per-period document")
        }
        (ConsistencyProperty::Aggregation, _) => {}
        (_, DocumentShape::Periods(_)) => {
            return input_error("improvement checks need a flat document")
        }
        (property, _) => {
            let matching: Vec<Improvement> = options
                .improvements
                .iter()
                .copied()
                .filter(|i| ConsistencyProperty::of_improvement(i) == property)
                .collect();
            if matching.is_empty() {
                return input_error(format!(
                    "property {property} needs at least one --{property} improvement"
                ));
            }
            if matching.len() != options.improvements.len() {
                return input_error(format!(
                    "only --{property} improvements apply to property {property}"
                ));
            }
        }
    }

    let listing = check_pairs(doc, spec, options)?;
    let strict = listing
        .iter()
        .filter(|e| e.outcome == Severity::StrictReversal.to_string())
        .count();
    let weak = listing
        .iter()
        .filter(|e| e.outcome == Severity::Weakening.to_string())
        .count();
    let violations = strict + if options.include_weakenings { weak } else { 0 };

    match format {
        Format::Records => {
            for entry in &listing {
                emit(out, entry)?;
            }
        }
        Format::Table => {
            let fmt_pair = |(x, y): (u64, u64)| format!("({x},{y})");
            let rows: Vec<Vec<String>> = listing
                .iter()
                .map(|e| {
                    vec![
                        e.a.clone(),
                        e.b.clone(),
                        e.improvement
                            .map_or_else(|| "aggregate".into(), |i| i.to_string()),
                        e.before
                            .iter()
                            .map(|&p| fmt_pair(p))
                            .collect::<Vec<_>>()
                            .join(" "),
                        fmt_pair(e.after),
                        e.outcome.clone(),
                    ]
                })
                .collect();
            print_table(
                out,
                &["a", "b", "change", "before", "after", "outcome"],
                &rows,
            )?;
            writeln!(
                out,
                "{spec}: {} pairs checked, {strict} strict reversals, {weak} weakenings, {violations} counted as violations",
                listing.len()
            )?;
        }
    }
    Ok(if strict > 0 { EXIT_FOUND } else { EXIT_CLEAN })
}

fn cmd_search(
    kind: IndicatorKind,
    bounds: &SearchBounds,
    minimal: bool,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let mut found = find_counterexamples(&[kind], bounds)?;
    if minimal {
        found = minimal_counterexamples(&found);
    }
    match format {
        Format::Records => {
            for c in &found {
                emit(out, c)?;
            }
        }
        Format::Table => print_counterexamples(out, &found)?,
    }
    Ok(if found.is_empty() {
        EXIT_CLEAN
    } else {
        EXIT_FOUND
    })
}

fn print_counterexamples(out: &mut dyn Write, found: &[Counterexample]) -> Result<(), InputError> {
    use crate::axioms::Subject;
    let rows: Vec<Vec<String>> = found
        .iter()
        .map(|c| {
            let r = &c.report;
            let (a, b, change) = match &r.subject {
                Subject::Improvement {
                    record_a,
                    record_b,
                    improvement,
                    inexact_rounding,
                } => (
                    record_a.to_string(),
                    record_b.to_string(),
                    format!(
                        "{improvement}{}",
                        if *inexact_rounding { " (rounded)" } else { "" }
                    ),
                ),
                Subject::Aggregation { record_a, record_b } => (
                    record_a.to_string(),
                    record_b.to_string(),
                    "aggregate".into(),
                ),
            };
            let before: Vec<String> = r.before.iter().map(|(x, y)| format!("({x},{y})")).collect();
            vec![
                format!("({},{})", c.size.0, c.size.1),
                r.indicator.to_string(),
                a,
                b,
                change,
                before.join(" "),
                format!("({},{})", r.after.0, r.after.1),
                r.severity.to_string(),
            ]
        })
        .collect();
    print_table(
        out,
        &[
            "size",
            "indicator",
            "a",
            "b",
            "change",
            "before",
            "after",
            "severity",
        ],
        &rows,
    )?;
    writeln!(out, "{} counterexamples", found.len())?;
    Ok(())
}

fn select_tables(selector: &str) -> Result<Vec<TableId>, InputError> {
    if selector.eq_ignore_ascii_case("all") {
        Ok(TableId::ALL.to_vec())
    } else {
        Ok(vec![selector.parse::<TableId>()?])
    }
}

fn cmd_repro(selector: &str, format: Format, out: &mut dyn Write) -> CmdResult {
    let tables = select_tables(selector)?;
    let reports: Vec<FixtureReport> = tables
        .into_iter()
        .map(|t| run_fixture(&builtin_fixture(t)))
        .collect();
    for report in &reports {
        let failures: Vec<String> = report
            .cells
            .iter()
            .filter(|c| !c.passed())
            .map(|c| {
                format!(
                    "{}/{}: expected {}, computed {}",
                    c.scientist,
                    c.scenario,
                    c.expected,
                    match &c.computed {
                        Ok(v) => v.to_string(),
                        Err(e) => e.clone(),
                    }
                )
            })
            .chain(report.rank_cells.iter().filter(|c| !c.passed()).map(|c| {
                format!(
                    "rank {}/{}: expected {}, computed {:?}",
                    c.scientist, c.column, c.expected, c.computed
                )
            }))
            .chain(report.errors.iter().cloned())
            .collect();
        match format {
            Format::Records => emit(
                out,
                &json!({
                    "table": report.table.to_string(),
                    "passed": report.passed(),
                    "cells": report.cells.len(),
                    "rank_cells": report.rank_cells.len(),
                    "failures": failures,
                }),
            )?,
            Format::Table => {
                let status = if report.passed() { "PASS" } else { "FAIL" };
                let ranks = if report.rank_cells.is_empty() {
                    String::new()
                } else {
                    format!(" + {} rank cells", report.rank_cells.len())
                };
                writeln!(
                    out,
                    "{} {status}  {} cells{ranks}",
                    report.table,
                    report.cells.len()
                )?;
                for f in &failures {
                    writeln!(out, "    {f}")?;
                }
            }
        }
    }
    let all_passed = reports.iter().all(FixtureReport::passed);
    if format == Format::Table {
        writeln!(
            out,
            "{}/{} fixtures reproduced",
            reports.iter().filter(|r| r.passed()).count(),
            reports.len()
        )?;
    }
    // A failed reproduction is a defect in the fixtures or the indicators,
    // reported through the same non-zero code as other findings.
    Ok(if all_passed { EXIT_CLEAN } else { EXIT_FOUND })
}

fn cmd_export(selector: &str, dir: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let tables = select_tables(selector)?;
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for t in tables {
                let path = dir.join(format!("{t}.json"));
                fs::write(&path, builtin_fixture(t).to_document().to_json() + "\n")?;
                writeln!(out, "{}", path.display())?;
            }
        }
        None if tables.len() == 1 => {
            writeln!(
                out,
                "{}",
                builtin_fixture(tables[0]).to_document().to_json()
            )?;
        }
        None => {
            for t in tables {
                let f = builtin_fixture(t);
                emit(
                    out,
                    &json!({"table": t.to_string(), "indicator": f.indicator, "document": f.to_document()}),
                )?;
            }
        }
    }
    Ok(EXIT_CLEAN)
}
