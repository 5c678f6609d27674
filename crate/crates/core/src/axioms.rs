//! Ranking-consistency properties and their violation checks.
//!
//! Scientists are compared pairwise by indicator value (higher is better).
//! A property is violated when the same improvement, or the aggregation of
//! concordant periods, changes the rank outcome of the pair.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{evaluate, CitationRecord, IndicatorSpec};
use crate::transforms::{aggregate_periods, Improvement, TimePartitionedRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankOutcome {
    AHigher,
    Tie,
    BHigher,
}

impl RankOutcome {
    pub fn from_values(a: u64, b: u64) -> Self {
        match a.cmp(&b) {
            Ordering::Greater => Self::AHigher,
            Ordering::Equal => Self::Tie,
            Ordering::Less => Self::BHigher,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Self::AHigher => Self::BHigher,
            Self::Tie => Self::Tie,
            Self::BHigher => Self::AHigher,
        }
    }

    pub fn is_strict(self) -> bool {
        self != Self::Tie
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsistencyProperty {
    RelativeImprovement,
    AbsoluteImprovement,
    Aggregation,
}

impl ConsistencyProperty {
    pub fn of_improvement(imp: &Improvement) -> Self {
        if imp.is_relative() {
            Self::RelativeImprovement
        } else {
            Self::AbsoluteImprovement
        }
    }
}

impl fmt::Display for ConsistencyProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RelativeImprovement => "relative",
            Self::AbsoluteImprovement => "absolute",
            Self::Aggregation => "aggregation",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    /// Strict order before, strict opposite order after.
    StrictReversal,
    /// Strict order collapsing to a tie, or a tie becoming strict.
    Weakening,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::StrictReversal => "strict-reversal",
            Self::Weakening => "weakening",
        })
    }
}

/// Severity of a change in rank outcome, or `None` when nothing changed.
pub fn classify(before: RankOutcome, after: RankOutcome) -> Option<Severity> {
    if before == after {
        None
    } else if before.is_strict() && after.is_strict() {
        Some(Severity::StrictReversal)
    } else {
        Some(Severity::Weakening)
    }
}

/// The inputs a violation was found on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Subject {
    Improvement {
        record_a: CitationRecord,
        record_b: CitationRecord,
        improvement: Improvement,
        /// A floored relative improvement had to round at least one count,
        /// so the two scientists did not receive an exactly equal factor.
        inexact_rounding: bool,
    },
    Aggregation {
        record_a: TimePartitionedRecord,
        record_b: TimePartitionedRecord,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ViolationReport {
    pub property: ConsistencyProperty,
    pub indicator: IndicatorSpec,
    pub subject: Subject,
    /// Indicator values `(a, b)` before the change; one entry per period for
    /// aggregation, a single entry otherwise.
    pub before: Vec<(u64, u64)>,
    pub after: (u64, u64),
    pub severity: Severity,
}

impl ViolationReport {
    pub fn improvement(&self) -> Option<Improvement> {
        match &self.subject {
            Subject::Improvement { improvement, .. } => Some(*improvement),
            Subject::Aggregation { .. } => None,
        }
    }

    /// Same report with the roles of `a` and `b` exchanged.
    pub fn swapped(self) -> Self {
        let subject = match self.subject {
            Subject::Improvement {
                record_a,
                record_b,
                improvement,
                inexact_rounding,
            } => Subject::Improvement {
                record_a: record_b,
                record_b: record_a,
                improvement,
                inexact_rounding,
            },
            Subject::Aggregation { record_a, record_b } => Subject::Aggregation {
                record_a: record_b,
                record_b: record_a,
            },
        };
        Self {
            subject,
            before: self.before.into_iter().map(|(a, b)| (b, a)).collect(),
            after: (self.after.1, self.after.0),
            ..self
        }
    }

    /// Recomputes every stored value from the stored records and checks the
    /// report against them.
    pub fn revalidate(&self) -> Result<bool> {
        let fresh = match &self.subject {
            Subject::Improvement {
                record_a,
                record_b,
                improvement,
                ..
            } => check_improvement_consistency(self.indicator, record_a, record_b, *improvement)?,
            Subject::Aggregation { record_a, record_b } => {
                check_aggregation_consistency(self.indicator, record_a, record_b)?
            }
        };
        Ok(fresh.as_ref() == Some(self))
    }
}

pub fn compare(spec: IndicatorSpec, a: &CitationRecord, b: &CitationRecord) -> RankOutcome {
    RankOutcome::from_values(evaluate(spec, a), evaluate(spec, b))
}

/// Applies `imp` to both records and reports any change of rank outcome.
pub fn check_improvement_consistency(
    spec: IndicatorSpec,
    a: &CitationRecord,
    b: &CitationRecord,
    imp: Improvement,
) -> Result<Option<ViolationReport>> {
    let a_after = imp.apply(a)?;
    let b_after = imp.apply(b)?;
    let before = (evaluate(spec, a), evaluate(spec, b));
    let after = (evaluate(spec, &a_after), evaluate(spec, &b_after));
    let severity = classify(
        RankOutcome::from_values(before.0, before.1),
        RankOutcome::from_values(after.0, after.1),
    );
    Ok(severity.map(|severity| ViolationReport {
        property: ConsistencyProperty::of_improvement(&imp),
        indicator: spec,
        subject: Subject::Improvement {
            record_a: a.clone(),
            record_b: b.clone(),
            improvement: imp,
            inexact_rounding: imp.rounds(a) || imp.rounds(b),
        },
        before: vec![before],
        after,
        severity,
    }))
}

/// Per-period outcome shared by every period, if all periods rank the pair
/// strictly in the same direction.
pub fn concordant_outcome(per_period: &[(u64, u64)]) -> Option<RankOutcome> {
    let first = RankOutcome::from_values(per_period.first()?.0, per_period.first()?.1);
    if !first.is_strict() {
        return None;
    }
    per_period
        .iter()
        .all(|&(a, b)| RankOutcome::from_values(a, b) == first)
        .then_some(first)
}

/// Checks that a strict ranking shared by every period survives aggregation.
/// Pairs whose periods do not all agree on a strict order satisfy the
/// property vacuously.
pub fn check_aggregation_consistency(
    spec: IndicatorSpec,
    a: &TimePartitionedRecord,
    b: &TimePartitionedRecord,
) -> Result<Option<ViolationReport>> {
    if a.period_count() != b.period_count() {
        return Err(Error::PeriodStructuresDiffer {
            a: a.period_count(),
            b: b.period_count(),
        });
    }
    let before: Vec<(u64, u64)> = a
        .periods()
        .iter()
        .zip(b.periods())
        .map(|(pa, pb)| (evaluate(spec, pa), evaluate(spec, pb)))
        .collect();
    let Some(premise) = concordant_outcome(&before) else {
        return Ok(None);
    };
    let after = (
        evaluate(spec, &aggregate_periods(a)?),
        evaluate(spec, &aggregate_periods(b)?),
    );
    let severity = classify(premise, RankOutcome::from_values(after.0, after.1));
    Ok(severity.map(|severity| ViolationReport {
        property: ConsistencyProperty::Aggregation,
        indicator: spec,
        subject: Subject::Aggregation {
            record_a: a.clone(),
            record_b: b.clone(),
        },
        before,
        after,
        severity,
    }))
}
