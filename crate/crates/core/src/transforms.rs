//! Uniform citation improvements and aggregation of time periods.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CitationRecord, Fraction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundingMode {
    /// Round each scaled count down.
    Floor,
    /// Reject any scaled count that is not an integer.
    Strict,
}

/// A performance improvement applied uniformly to every paper of a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Improvement {
    Relative {
        num: u64,
        den: u64,
        rounding: RoundingMode,
    },
    Absolute {
        delta: u64,
    },
}

impl Improvement {
    pub fn relative(factor: Fraction, rounding: RoundingMode) -> Result<Self> {
        check_factor(factor)?;
        Ok(Self::Relative {
            num: factor.num,
            den: factor.den,
            rounding,
        })
    }

    pub fn absolute(delta: u64) -> Self {
        Self::Absolute { delta }
    }

    pub fn is_identity(&self) -> bool {
        match *self {
            Self::Relative { num, den, .. } => num == den,
            Self::Absolute { delta } => delta == 0,
        }
    }

    pub fn is_relative(&self) -> bool {
        matches!(self, Self::Relative { .. })
    }

    pub fn apply(&self, record: &CitationRecord) -> Result<CitationRecord> {
        match *self {
            Self::Relative { num, den, rounding } => {
                relative_improvement(record, Fraction::new(num, den), rounding)
            }
            Self::Absolute { delta } => absolute_improvement(record, delta),
        }
    }

    /// Whether a relative improvement had to round any count of `record`.
    pub fn rounds(&self, record: &CitationRecord) -> bool {
        match *self {
            Self::Relative { num, den, .. } => record
                .counts()
                .iter()
                .any(|&c| !(c as u128 * num as u128).is_multiple_of(den as u128)),
            Self::Absolute { .. } => false,
        }
    }

    pub fn with_rounding(self, mode: RoundingMode) -> Self {
        match self {
            Self::Relative { num, den, .. } => Self::Relative {
                num,
                den,
                rounding: mode,
            },
            other => other,
        }
    }
}

impl fmt::Display for Improvement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Relative { num, den, .. } => write!(f, "x{num}/{den}"),
            Self::Absolute { delta } => write!(f, "+{delta}"),
        }
    }
}

fn check_factor(factor: Fraction) -> Result<()> {
    if factor.den == 0 || factor.num < factor.den {
        return Err(Error::InvalidFactor {
            num: factor.num,
            den: factor.den,
        });
    }
    Ok(())
}

/// Multiplies every count by `factor`.
pub fn relative_improvement(
    record: &CitationRecord,
    factor: Fraction,
    rounding: RoundingMode,
) -> Result<CitationRecord> {
    check_factor(factor)?;
    let (num, den) = (factor.num as u128, factor.den as u128);
    record
        .counts()
        .iter()
        .enumerate()
        .map(|(index, &count)| {
            let scaled = count as u128 * num;
            if rounding == RoundingMode::Strict && !scaled.is_multiple_of(den) {
                return Err(Error::InexactRelativeImprovement {
                    index,
                    count,
                    num: factor.num,
                    den: factor.den,
                });
            }
            u64::try_from(scaled / den).map_err(|_| Error::Overflow { index })
        })
        .collect::<Result<Vec<_>>>()
        .map(CitationRecord::new)
}

/// Adds `delta` citations to every paper.
pub fn absolute_improvement(record: &CitationRecord, delta: u64) -> Result<CitationRecord> {
    record
        .counts()
        .iter()
        .enumerate()
        .map(|(index, &c)| c.checked_add(delta).ok_or(Error::Overflow { index }))
        .collect::<Result<Vec<_>>>()
        .map(CitationRecord::new)
}

/// Concatenates extra papers onto a record.
pub fn pad_record(record: &CitationRecord, extra: &[u64]) -> CitationRecord {
    let mut counts = record.counts().to_vec();
    counts.extend_from_slice(extra);
    CitationRecord::new(counts)
}

/// Citation counts of one fixed set of papers over two or more periods.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct TimePartitionedRecord {
    periods: Vec<CitationRecord>,
}

impl TimePartitionedRecord {
    pub fn new(periods: Vec<CitationRecord>) -> Result<Self> {
        if periods.len() < 2 {
            return Err(Error::TooFewPeriods(periods.len()));
        }
        let expected = periods[0].len();
        if let Some((period, p)) = periods
            .iter()
            .enumerate()
            .find(|(_, p)| p.len() != expected)
        {
            return Err(Error::PeriodsCoverDifferentPapers {
                period,
                expected,
                found: p.len(),
            });
        }
        Ok(Self { periods })
    }

    pub fn periods(&self) -> &[CitationRecord] {
        &self.periods
    }

    pub fn period_count(&self) -> usize {
        self.periods.len()
    }

    pub fn paper_count(&self) -> usize {
        self.periods[0].len()
    }

    /// Reorders papers (jointly across periods) into non-increasing order of
    /// their per-period count vectors.
    pub fn canonical(&self) -> Self {
        let n = self.paper_count();
        let mut columns: Vec<Vec<u64>> = (0..n)
            .map(|i| self.periods.iter().map(|p| p.counts()[i]).collect())
            .collect();
        columns.sort_unstable_by(|a, b| b.cmp(a));
        let periods = (0..self.periods.len())
            .map(|k| CitationRecord::new(columns.iter().map(|col| col[k]).collect()))
            .collect();
        Self { periods }
    }
}

impl<'de> Deserialize<'de> for TimePartitionedRecord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let periods = Vec::<CitationRecord>::deserialize(d)?;
        Self::new(periods).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TimePartitionedRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.periods.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Position-wise sum of citations over all periods.
pub fn aggregate_periods(tp: &TimePartitionedRecord) -> Result<CitationRecord> {
    aggregate_slices(tp.periods())
}

/// Same as [`aggregate_periods`] for unvalidated input.
pub fn aggregate_slices(periods: &[CitationRecord]) -> Result<CitationRecord> {
    let Some(first) = periods.first() else {
        return Ok(CitationRecord::empty());
    };
    let mut sums = first.counts().to_vec();
    for (period, p) in periods.iter().enumerate().skip(1) {
        if p.len() != sums.len() {
            return Err(Error::PeriodsCoverDifferentPapers {
                period,
                expected: sums.len(),
                found: p.len(),
            });
        }
        for (index, (s, &c)) in sums.iter_mut().zip(p.counts()).enumerate() {
            *s = s.checked_add(c).ok_or(Error::Overflow { index })?;
        }
    }
    Ok(CitationRecord::new(sums))
}
