//! Brute-force reference implementation used to cross-check the search.
//!
//! Nothing here calls into the library's indicator, transform, axiom or
//! enumeration code: records are raw (unsorted) sequences, every ordered pair
//! is visited, and results are normalized only at the very end.

#![allow(dead_code)]

use std::collections::BTreeSet;

use citecheck::axioms::{Severity, Subject};
use citecheck::search::Counterexample;
use citecheck::{Improvement, IndicatorSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Indicator {
    Hcp(u64),
    H,
    Total,
    Papers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Change {
    Scale(u64, u64),
    Add(u64),
}

/// Normalized finding: indicator, change (None for aggregation), the two
/// records (per-period lists), values before and after, strict flag.
pub type Finding = (
    Indicator,
    Option<Change>,
    Vec<Vec<u64>>,
    Vec<Vec<u64>>,
    Vec<(u64, u64)>,
    (u64, u64),
    bool,
);

pub fn value(ind: Indicator, counts: &[u64]) -> u64 {
    match ind {
        Indicator::Hcp(t) => counts.iter().filter(|&&c| c >= t).count() as u64,
        Indicator::H => {
            let mut h = counts.len() as u64;
            while counts.iter().filter(|&&c| c >= h).count() < h as usize {
                h -= 1;
            }
            h
        }
        Indicator::Total => counts.iter().sum(),
        Indicator::Papers => counts.len() as u64,
    }
}

pub fn apply(change: Change, counts: &[u64]) -> Vec<u64> {
    counts
        .iter()
        .map(|&c| match change {
            Change::Scale(n, d) => c * n / d,
            Change::Add(d) => c + d,
        })
        .collect()
}

/// Every sequence (not just sorted ones) of length 0..=max_len over 0..=max_value.
pub fn all_sequences(max_len: usize, max_value: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &layer {
            for v in 0..=max_value {
                let mut s = seq.clone();
                s.push(v);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn sorted_desc(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_by(|a, b| b.cmp(a));
    v
}

/// Shorter first, then lexicographic.
fn shortlex_less(a: &[Vec<u64>], b: &[Vec<u64>]) -> bool {
    let key = |r: &[Vec<u64>]| (r.first().map_or(0, Vec::len), r.to_vec());
    key(a) < key(b)
}

fn sign(a: u64, b: u64) -> i8 {
    (a > b) as i8 - (a < b) as i8
}

/// Reverses `(x, y)` so the initially better scientist comes first; ties keep
/// the shortlex-smaller record first.
fn normalize(
    ind: Indicator,
    change: Option<Change>,
    x: Vec<Vec<u64>>,
    y: Vec<Vec<u64>>,
    before: Vec<(u64, u64)>,
    after: (u64, u64),
    strict: bool,
) -> Finding {
    let first = sign(before[0].0, before[0].1);
    let swap = first < 0 || (first == 0 && shortlex_less(&y, &x));
    if swap {
        (
            ind,
            change,
            y,
            x,
            before.into_iter().map(|(a, b)| (b, a)).collect(),
            (after.1, after.0),
            strict,
        )
    } else {
        (ind, change, x, y, before, after, strict)
    }
}

pub fn brute_force_improvements(
    indicators: &[Indicator],
    changes: &[Change],
    max_papers: usize,
    max_citations: u64,
    weakenings: bool,
    mixed: bool,
) -> BTreeSet<Finding> {
    let records = all_sequences(max_papers, max_citations);
    let mut found = BTreeSet::new();
    for &ind in indicators {
        for &change in changes {
            for x in &records {
                for y in &records {
                    if !mixed && x.len() != y.len() {
                        continue;
                    }
                    let before = (value(ind, x), value(ind, y));
                    let after = (value(ind, &apply(change, x)), value(ind, &apply(change, y)));
                    let (s0, s1) = (sign(before.0, before.1), sign(after.0, after.1));
                    if s0 == s1 {
                        continue;
                    }
                    let strict = s0 != 0 && s1 != 0;
                    if !strict && !weakenings {
                        continue;
                    }
                    found.insert(normalize(
                        ind,
                        Some(change),
                        vec![sorted_desc(x.clone())],
                        vec![sorted_desc(y.clone())],
                        vec![before],
                        after,
                        strict,
                    ));
                }
            }
        }
    }
    found
}

/// Sorts papers (columns across periods) into non-increasing order.
fn canonical_periods(periods: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = periods[0].len();
    let mut cols: Vec<Vec<u64>> = (0..n)
        .map(|i| periods.iter().map(|p| p[i]).collect())
        .collect();
    cols.sort_by(|a, b| b.cmp(a));
    (0..periods.len())
        .map(|k| cols.iter().map(|c| c[k]).collect())
        .collect()
}

pub fn brute_force_aggregation(
    indicators: &[Indicator],
    max_papers: usize,
    max_citations: u64,
    weakenings: bool,
) -> BTreeSet<Finding> {
    // two periods: every pair of equal-length raw sequences
    let seqs = all_sequences(max_papers, max_citations);
    let mut records: Vec<Vec<Vec<u64>>> = Vec::new();
    for p in &seqs {
        for q in &seqs {
            if p.len() == q.len() {
                records.push(vec![p.clone(), q.clone()]);
            }
        }
    }
    let mut found = BTreeSet::new();
    for &ind in indicators {
        for x in &records {
            for y in &records {
                if x[0].len() != y[0].len() {
                    continue;
                }
                let before: Vec<(u64, u64)> = x
                    .iter()
                    .zip(y)
                    .map(|(p, q)| (value(ind, p), value(ind, q)))
                    .collect();
                let s0 = sign(before[0].0, before[0].1);
                if s0 == 0 || before.iter().any(|&(a, b)| sign(a, b) != s0) {
                    continue;
                }
                let sum = |r: &Vec<Vec<u64>>| -> Vec<u64> {
                    (0..r[0].len())
                        .map(|i| r.iter().map(|p| p[i]).sum())
                        .collect()
                };
                let after = (value(ind, &sum(x)), value(ind, &sum(y)));
                let s1 = sign(after.0, after.1);
                if s1 == s0 {
                    continue;
                }
                let strict = s1 != 0;
                if !strict && !weakenings {
                    continue;
                }
                found.insert(normalize(
                    ind,
                    None,
                    canonical_periods(x),
                    canonical_periods(y),
                    before,
                    after,
                    strict,
                ));
            }
        }
    }
    found
}

pub fn indicator_of(spec: IndicatorSpec) -> Indicator {
    match spec {
        IndicatorSpec::HcpCount { threshold } => Indicator::Hcp(threshold.value()),
        IndicatorSpec::HIndex => Indicator::H,
        IndicatorSpec::TotalCitations => Indicator::Total,
        IndicatorSpec::PaperCount => Indicator::Papers,
    }
}

pub fn change_of(imp: Improvement) -> Change {
    match imp {
        Improvement::Relative { num, den, .. } => Change::Scale(num, den),
        Improvement::Absolute { delta } => Change::Add(delta),
    }
}

/// Converts search output into the oracle's normalized form.
pub fn findings_of(results: &[Counterexample]) -> BTreeSet<Finding> {
    results
        .iter()
        .map(|c| {
            let r = &c.report;
            let (change, a, b) = match &r.subject {
                Subject::Improvement {
                    record_a,
                    record_b,
                    improvement,
                    ..
                } => (
                    Some(change_of(*improvement)),
                    vec![record_a.counts().to_vec()],
                    vec![record_b.counts().to_vec()],
                ),
                Subject::Aggregation { record_a, record_b } => (
                    None,
                    record_a
                        .periods()
                        .iter()
                        .map(|p| p.counts().to_vec())
                        .collect(),
                    record_b
                        .periods()
                        .iter()
                        .map(|p| p.counts().to_vec())
                        .collect(),
                ),
            };
            (
                indicator_of(r.indicator),
                change,
                a,
                b,
                r.before.clone(),
                r.after,
                r.severity == Severity::StrictReversal,
            )
        })
        .collect()
}
