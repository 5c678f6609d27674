//! Bounded exhaustive search for consistency counterexamples.
//!
//! Every indicator is permutation-invariant, so records are enumerated in
//! canonical (non-increasing) form only. Pairs `(a, b)` are taken with `a`
//! strictly before `b` in enumeration order; a found pair is reported with
//! the initially higher-ranked scientist first. Work is split across threads
//! by the first record of each pair and the gathered results are sorted, so
//! the output does not depend on scheduling.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::axioms::{
    classify, ConsistencyProperty, RankOutcome, Severity, Subject, ViolationReport,
};
use crate::error::{Error, Result};
use crate::model::{evaluate, CitationRecord, IndicatorKind, IndicatorSpec, Threshold};
use crate::transforms::{aggregate_periods, Improvement, RoundingMode, TimePartitionedRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_papers: usize,
    /// Per-paper (and, for aggregation, per-period) citation cap.
    pub max_citations: u64,
    /// Relative entries are always applied with floor rounding.
    pub improvements: Vec<Improvement>,
    pub thresholds: Vec<Threshold>,
    pub properties: BTreeSet<ConsistencyProperty>,
    pub max_periods: usize,
    pub include_weakenings: bool,
    /// Also pair records of different lengths. Off by default: compared
    /// scientists then always have the same number of publications.
    pub mixed_paper_counts: bool,
}

impl Default for SearchBounds {
    fn default() -> Self {
        let rel = |n, d| Improvement::Relative {
            num: n,
            den: d,
            rounding: RoundingMode::Floor,
        };
        Self {
            max_papers: 4,
            max_citations: 12,
            improvements: vec![
                rel(2, 1),
                rel(4, 3),
                rel(5, 3),
                Improvement::absolute(2),
                Improvement::absolute(3),
                Improvement::absolute(5),
            ],
            thresholds: vec![Threshold::new(10).expect("non-zero")],
            properties: [
                ConsistencyProperty::RelativeImprovement,
                ConsistencyProperty::AbsoluteImprovement,
            ]
            .into_iter()
            .collect(),
            max_periods: 2,
            include_weakenings: false,
            mixed_paper_counts: false,
        }
    }
}

impl SearchBounds {
    pub fn validate(&self, family: &[IndicatorKind]) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidBounds(msg.to_string()));
        if self.max_papers == 0 {
            return bad("max_papers must be positive");
        }
        if self.properties.is_empty() {
            return bad("no consistency property selected");
        }
        if family.is_empty() {
            return bad("no indicator selected");
        }
        if family.contains(&IndicatorKind::Hcp) && self.thresholds.is_empty() {
            return bad("empty threshold grid for the HCP indicator");
        }
        if self
            .properties
            .contains(&ConsistencyProperty::RelativeImprovement)
            && !self.improvements.iter().any(Improvement::is_relative)
        {
            return bad("empty improvement grid: no relative factor given");
        }
        if self
            .properties
            .contains(&ConsistencyProperty::AbsoluteImprovement)
            && !self.improvements.iter().any(|i| !i.is_relative())
        {
            return bad("empty improvement grid: no absolute increment given");
        }
        if self.properties.contains(&ConsistencyProperty::Aggregation) {
            if self.max_periods < 2 {
                return bad("max_periods must be at least 2");
            }
            let columns = u32::try_from(self.max_periods)
                .ok()
                .and_then(|k| (self.max_citations.checked_add(1)?).checked_pow(k));
            if columns.is_none() {
                return bad("per-period enumeration space does not fit in 64 bits");
            }
        }
        Ok(())
    }

    fn keeps(&self, severity: Severity) -> bool {
        severity == Severity::StrictReversal || self.include_weakenings
    }

    fn pairs_lengths(&self, a: usize, b: usize) -> bool {
        self.mixed_paper_counts || a == b
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Counterexample {
    pub report: ViolationReport,
    /// (total papers, total citations) over both records; aggregated counts
    /// for time-partitioned records.
    pub size: (u64, u64),
}

impl Counterexample {
    fn new(report: ViolationReport) -> Self {
        let size = match &report.subject {
            Subject::Improvement {
                record_a, record_b, ..
            } => record_size(record_a, record_b),
            Subject::Aggregation { record_a, record_b } => record_size(
                &aggregate_periods(record_a).expect("bounded counts"),
                &aggregate_periods(record_b).expect("bounded counts"),
            ),
        };
        Self { report, size }
    }
}

fn record_size(a: &CitationRecord, b: &CitationRecord) -> (u64, u64) {
    (
        (a.len() + b.len()) as u64,
        a.counts().iter().chain(b.counts()).sum(),
    )
}

/// Lexicographic successor enumeration of non-increasing sequences of
/// length `0..=max_len` over `0..=max_value`, shortest first.
#[derive(Debug, Clone)]
struct NonIncreasing {
    max_len: usize,
    max_value: u64,
    current: Option<Vec<u64>>,
}

impl NonIncreasing {
    fn new(max_len: usize, max_value: u64) -> Self {
        Self {
            max_len,
            max_value,
            current: Some(Vec::new()),
        }
    }
}

impl Iterator for NonIncreasing {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let bumped = (0..next.len())
            .rev()
            .find(|&i| next[i] < self.max_value && (i == 0 || next[i] < next[i - 1]));
        self.current = match bumped {
            Some(i) => {
                next[i] += 1;
                next[i + 1..].iter_mut().for_each(|v| *v = 0);
                Some(next)
            }
            None if next.len() < self.max_len => Some(vec![0; next.len() + 1]),
            None => None,
        };
        Some(out)
    }
}

/// Every canonical record with at most `max_papers` papers and at most
/// `max_citations` citations per paper, ordered by length then
/// lexicographically.
pub fn enumerate_records(
    max_papers: usize,
    max_citations: u64,
) -> impl Iterator<Item = CitationRecord> {
    NonIncreasing::new(max_papers, max_citations).map(CitationRecord::new)
}

/// Every canonical time-partitioned record with `periods` periods. Each
/// paper is a column of per-period counts; columns are non-increasing in
/// lexicographic order.
pub fn enumerate_partitioned(
    max_papers: usize,
    max_citations: u64,
    periods: usize,
) -> impl Iterator<Item = TimePartitionedRecord> {
    let base = max_citations + 1;
    let columns = base
        .checked_pow(periods as u32)
        .expect("enumeration space too large");
    NonIncreasing::new(max_papers, columns - 1).map(move |codes| {
        let mut out = vec![Vec::with_capacity(codes.len()); periods];
        for code in codes {
            let mut rest = code;
            for k in (0..periods).rev() {
                out[k].push(rest % base);
                rest /= base;
            }
        }
        TimePartitionedRecord::new(out.into_iter().map(CitationRecord::new).collect())
            .expect("equal period lengths")
    })
}

/// Number of multisets of size at most `max_papers` drawn from
/// `max_citations + 1` values: the sum of C(m + k, k) for k = 0..=max_papers.
pub fn multiset_count(max_papers: usize, max_citations: u64) -> u128 {
    let m = max_citations as u128;
    let mut term = 1u128; // C(m + 0, 0)
    let mut total = 1u128;
    for k in 1..=max_papers as u128 {
        term = term * (m + k) / k;
        total += term;
    }
    total
}

/// Expands indicator kinds into concrete specs, one HCP spec per threshold.
pub fn expand_family(family: &[IndicatorKind], thresholds: &[Threshold]) -> Vec<IndicatorSpec> {
    let mut specs: Vec<IndicatorSpec> = family
        .iter()
        .flat_map(|kind| match kind {
            IndicatorKind::Hcp => thresholds
                .iter()
                .map(|&threshold| IndicatorSpec::HcpCount { threshold })
                .collect(),
            IndicatorKind::HIndex => vec![IndicatorSpec::HIndex],
            IndicatorKind::TotalCitations => vec![IndicatorSpec::TotalCitations],
            IndicatorKind::PaperCount => vec![IndicatorSpec::PaperCount],
        })
        .collect();
    specs.sort();
    specs.dedup();
    specs
}

/// Exhaustively searches the bounded space and returns every counterexample,
/// sorted by size and then canonically.
pub fn find_counterexamples(
    family: &[IndicatorKind],
    bounds: &SearchBounds,
) -> Result<Vec<Counterexample>> {
    bounds.validate(family)?;
    let specs = expand_family(family, &bounds.thresholds);
    let mut found = Vec::new();

    let wants_improvements = bounds.properties.iter().any(|p| {
        matches!(
            p,
            ConsistencyProperty::RelativeImprovement | ConsistencyProperty::AbsoluteImprovement
        )
    });
    if wants_improvements {
        let records: Vec<CitationRecord> =
            enumerate_records(bounds.max_papers, bounds.max_citations).collect();
        let mut grid: Vec<Improvement> = bounds
            .improvements
            .iter()
            .map(|imp| imp.with_rounding(RoundingMode::Floor))
            .filter(|imp| {
                bounds
                    .properties
                    .contains(&ConsistencyProperty::of_improvement(imp))
            })
            .collect();
        grid.sort();
        grid.dedup();
        for &spec in &specs {
            for &imp in &grid {
                found.extend(search_improvement(&records, spec, imp, bounds)?);
            }
        }
    }

    if bounds
        .properties
        .contains(&ConsistencyProperty::Aggregation)
    {
        for periods in 2..=bounds.max_periods {
            let records: Vec<TimePartitionedRecord> =
                enumerate_partitioned(bounds.max_papers, bounds.max_citations, periods).collect();
            for &spec in &specs {
                found.extend(search_aggregation(&records, spec, bounds)?);
            }
        }
    }

    found.sort_by(canonical_order);
    Ok(found)
}

fn search_improvement(
    records: &[CitationRecord],
    spec: IndicatorSpec,
    imp: Improvement,
    bounds: &SearchBounds,
) -> Result<Vec<Counterexample>> {
    let values = records
        .iter()
        .map(|r| Ok((evaluate(spec, r), evaluate(spec, &imp.apply(r)?))))
        .collect::<Result<Vec<(u64, u64)>>>()?;

    Ok((0..records.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let values = &values;
            (i + 1..records.len()).filter_map(move |j| {
                let (a, b) = (&records[i], &records[j]);
                if !bounds.pairs_lengths(a.len(), b.len()) {
                    return None;
                }
                let before = RankOutcome::from_values(values[i].0, values[j].0);
                let after = RankOutcome::from_values(values[i].1, values[j].1);
                let severity = classify(before, after).filter(|&s| bounds.keeps(s))?;
                let report = ViolationReport {
                    property: ConsistencyProperty::of_improvement(&imp),
                    indicator: spec,
                    subject: Subject::Improvement {
                        record_a: a.clone(),
                        record_b: b.clone(),
                        improvement: imp,
                        inexact_rounding: imp.rounds(a) || imp.rounds(b),
                    },
                    before: vec![(values[i].0, values[j].0)],
                    after: (values[i].1, values[j].1),
                    severity,
                };
                Some(Counterexample::new(orient(report, before)))
            })
        })
        .collect())
}

fn search_aggregation(
    records: &[TimePartitionedRecord],
    spec: IndicatorSpec,
    bounds: &SearchBounds,
) -> Result<Vec<Counterexample>> {
    let values = records
        .iter()
        .map(|r| {
            let per_period: Vec<u64> = r.periods().iter().map(|p| evaluate(spec, p)).collect();
            Ok((per_period, evaluate(spec, &aggregate_periods(r)?)))
        })
        .collect::<Result<Vec<(Vec<u64>, u64)>>>()?;

    Ok((0..records.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let values = &values;
            (i + 1..records.len()).filter_map(move |j| {
                let (a, b) = (&records[i], &records[j]);
                if !bounds.pairs_lengths(a.paper_count(), b.paper_count()) {
                    return None;
                }
                let (pa, pb) = (&values[i].0, &values[j].0);
                let premise = RankOutcome::from_values(pa[0], pb[0]);
                if !premise.is_strict()
                    || pa
                        .iter()
                        .zip(pb)
                        .any(|(&x, &y)| RankOutcome::from_values(x, y) != premise)
                {
                    return None;
                }
                let after = (values[i].1, values[j].1);
                let severity = classify(premise, RankOutcome::from_values(after.0, after.1))
                    .filter(|&s| bounds.keeps(s))?;
                let before: Vec<(u64, u64)> = pa.iter().copied().zip(pb.iter().copied()).collect();
                let report = ViolationReport {
                    property: ConsistencyProperty::Aggregation,
                    indicator: spec,
                    subject: Subject::Aggregation {
                        record_a: a.clone(),
                        record_b: b.clone(),
                    },
                    before,
                    after,
                    severity,
                };
                Some(Counterexample::new(orient(report, premise)))
            })
        })
        .collect())
}

/// Puts the initially higher-ranked record first.
fn orient(report: ViolationReport, before: RankOutcome) -> ViolationReport {
    if before == RankOutcome::BHigher {
        report.swapped()
    } else {
        report
    }
}

fn cmp_partitioned(a: &TimePartitionedRecord, b: &TimePartitionedRecord) -> Ordering {
    a.period_count()
        .cmp(&b.period_count())
        .then_with(|| a.paper_count().cmp(&b.paper_count()))
        .then_with(|| {
            a.periods()
                .iter()
                .zip(b.periods())
                .map(|(x, y)| x.canonical_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

fn cmp_subject(a: &Subject, b: &Subject) -> Ordering {
    match (a, b) {
        (
            Subject::Improvement {
                record_a: a1,
                record_b: b1,
                improvement: i1,
                ..
            },
            Subject::Improvement {
                record_a: a2,
                record_b: b2,
                improvement: i2,
                ..
            },
        ) => a1
            .canonical_cmp(a2)
            .then_with(|| b1.canonical_cmp(b2))
            .then_with(|| i1.cmp(i2)),
        (
            Subject::Aggregation {
                record_a: a1,
                record_b: b1,
            },
            Subject::Aggregation {
                record_a: a2,
                record_b: b2,
            },
        ) => cmp_partitioned(a1, a2).then_with(|| cmp_partitioned(b1, b2)),
        (Subject::Improvement { .. }, Subject::Aggregation { .. }) => Ordering::Less,
        (Subject::Aggregation { .. }, Subject::Improvement { .. }) => Ordering::Greater,
    }
}

/// Total order on counterexamples: size, then property, indicator, records
/// and improvement.
pub fn canonical_order(x: &Counterexample, y: &Counterexample) -> Ordering {
    x.size
        .cmp(&y.size)
        .then_with(|| x.report.property.cmp(&y.report.property))
        .then_with(|| x.report.indicator.cmp(&y.report.indicator))
        .then_with(|| cmp_subject(&x.report.subject, &y.report.subject))
        .then_with(|| x.report.severity.cmp(&y.report.severity))
}

/// Keeps the counterexamples whose (papers, citations) size is not
/// dominated by another entry's size. Input order is preserved.
pub fn minimal_counterexamples(results: &[Counterexample]) -> Vec<Counterexample> {
    let sizes: BTreeSet<(u64, u64)> = results.iter().map(|c| c.size).collect();
    results
        .iter()
        .filter(|c| {
            !sizes
                .iter()
                .any(|&s| s != c.size && s.0 <= c.size.0 && s.1 <= c.size.1)
        })
        .cloned()
        .collect()
}
