//! Citation records and the indicators evaluated on them.
//!
//! Every indicator here is an exact integer function of the multiset of
//! per-paper citation counts, so paper order never matters.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-paper citation counts of one scientist. Position identifies the paper.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CitationRecord {
    counts: Vec<u64>,
}

impl CitationRecord {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn into_counts(self) -> Vec<u64> {
        self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// The representative of this record's permutation class: counts sorted
    /// in non-increasing order.
    pub fn canonical(&self) -> Self {
        let mut counts = self.counts.clone();
        counts.sort_unstable_by(|a, b| b.cmp(a));
        Self { counts }
    }

    pub fn is_canonical(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] >= w[1])
    }

    /// Total order used for canonical records: shorter first, then
    /// lexicographic on the counts.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.counts
            .len()
            .cmp(&other.counts.len())
            .then_with(|| self.counts.cmp(&other.counts))
    }
}

impl From<Vec<u64>> for CitationRecord {
    fn from(counts: Vec<u64>) -> Self {
        Self::new(counts)
    }
}

impl<const N: usize> From<[u64; N]> for CitationRecord {
    fn from(counts: [u64; N]) -> Self {
        Self::new(counts.to_vec())
    }
}

impl fmt::Display for CitationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Minimum citation count for a paper to be highly cited. Always >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Threshold(u64);

impl Threshold {
    pub fn new(value: u64) -> Result<Self> {
        if value == 0 {
            Err(Error::ZeroThreshold)
        } else {
            Ok(Self(value))
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Threshold {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Threshold> for u64 {
    fn from(t: Threshold) -> u64 {
        t.0
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An exact non-negative rational `num/den` with `den > 0`, written `p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub const fn new(num: u64, den: u64) -> Self {
        Self { num, den }
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadFraction(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: u64 = num.parse().map_err(|_| bad())?;
        let den: u64 = den.parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        Ok(Self { num, den })
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Indicator family without parameters; HCP thresholds are supplied separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndicatorKind {
    Hcp,
    HIndex,
    TotalCitations,
    PaperCount,
}

/// Which indicator to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IndicatorSpec {
    HcpCount { threshold: Threshold },
    HIndex,
    TotalCitations,
    PaperCount,
}

impl IndicatorSpec {
    pub fn hcp(threshold: u64) -> Result<Self> {
        Ok(Self::HcpCount {
            threshold: Threshold::new(threshold)?,
        })
    }

    pub fn kind(&self) -> IndicatorKind {
        match self {
            Self::HcpCount { .. } => IndicatorKind::Hcp,
            Self::HIndex => IndicatorKind::HIndex,
            Self::TotalCitations => IndicatorKind::TotalCitations,
            Self::PaperCount => IndicatorKind::PaperCount,
        }
    }
}

impl fmt::Display for IndicatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::HcpCount { threshold } => write!(f, "hcp(>={threshold})"),
            Self::HIndex => write!(f, "h-index"),
            Self::TotalCitations => write!(f, "total-citations"),
            Self::PaperCount => write!(f, "paper-count"),
        }
    }
}

/// Number of papers with at least `threshold` citations.
pub fn hcp_count(record: &CitationRecord, threshold: Threshold) -> u64 {
    record
        .counts
        .iter()
        .filter(|&&c| c >= threshold.value())
        .count() as u64
}

/// Largest `h` such that at least `h` papers have at least `h` citations.
pub fn h_index(record: &CitationRecord) -> u64 {
    let n = record.counts.len();
    // bucket[k] = papers with exactly k citations, capped at n
    let mut buckets = vec![0usize; n + 1];
    for &c in &record.counts {
        buckets[(c as usize).min(n)] += 1;
    }
    let mut at_least = 0usize;
    for h in (1..=n).rev() {
        at_least += buckets[h];
        if at_least >= h {
            return h as u64;
        }
    }
    0
}

pub fn total_citations(record: &CitationRecord) -> u64 {
    record.counts.iter().sum()
}

pub fn paper_count(record: &CitationRecord) -> u64 {
    record.counts.len() as u64
}

pub fn evaluate(spec: IndicatorSpec, record: &CitationRecord) -> u64 {
    match spec {
        IndicatorSpec::HcpCount { threshold } => hcp_count(record, threshold),
        IndicatorSpec::HIndex => h_index(record),
        IndicatorSpec::TotalCitations => total_citations(record),
        IndicatorSpec::PaperCount => paper_count(record),
    }
}

/// Derives an HCP threshold from a reference set: the smallest `t >= 1` such
/// that at most `top_fraction` of the reference entries have `t` or more
/// citations.
pub fn calibrate_threshold(reference: &[u64], top_fraction: Fraction) -> Result<Threshold> {
    if top_fraction.den == 0 || top_fraction.num == 0 || top_fraction.num >= top_fraction.den {
        return Err(Error::FractionOutOfRange {
            num: top_fraction.num,
            den: top_fraction.den,
        });
    }
    if reference.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let mut sorted = reference.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let n = sorted.len() as u128;
    // allowed = floor(num * n / den); entries strictly above sorted[allowed]
    // may stay at or above the threshold.
    let allowed = (top_fraction.num as u128 * n / top_fraction.den as u128) as usize;
    let t = if allowed >= sorted.len() {
        1
    } else {
        sorted[allowed].saturating_add(1).max(1)
    };
    Threshold::new(t)
}
