//! Built-in fixtures for the seven published example tables and the
//! machinery to recompute every cell.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::document::{RecordDocument, ScientistData, ScientistEntry};
use crate::error::{Error, Result};
use crate::model::{
    evaluate, paper_count, total_citations, CitationRecord, Fraction, IndicatorSpec,
};
use crate::transforms::{aggregate_periods, Improvement, RoundingMode, TimePartitionedRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
}

impl TableId {
    pub const ALL: [TableId; 7] = [
        TableId::T1,
        TableId::T2,
        TableId::T3,
        TableId::T4,
        TableId::T5,
        TableId::T6,
        TableId::T7,
    ];
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", *self as u8 + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown fixture {0:?} (expected T1..T7 or all)")]
pub struct UnknownFixture(pub String);

impl FromStr for TableId {
    type Err = UnknownFixture;

    fn from_str(s: &str) -> std::result::Result<Self, UnknownFixture> {
        TableId::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownFixture(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ScenarioKind {
    Original,
    Improve {
        improvement: Improvement,
    },
    /// One period of a time-partitioned record (0-based).
    Period {
        index: usize,
    },
    Aggregate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scenario {
    pub label: String,
    pub kind: ScenarioKind,
}

/// Expected ranks for a group of scenarios sharing one rank column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankColumn {
    pub label: String,
    pub scenarios: Vec<String>,
    /// One rank per scientist, 1 = best.
    pub ranks: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fixture {
    pub table: TableId,
    pub title: String,
    pub indicator: IndicatorSpec,
    pub scientists: Vec<(String, ScientistData)>,
    pub scenarios: Vec<Scenario>,
    /// `expected[s][k]`: value for scientist `s` under scenario `k`.
    pub expected: Vec<Vec<u64>>,
    pub expected_ranks: Option<Vec<RankColumn>>,
}

impl Fixture {
    pub fn scenario(&self, label: &str) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| s.label == label)
    }

    /// The fixture's records in the command-line document format.
    pub fn to_document(&self) -> RecordDocument {
        let threshold = match self.indicator {
            IndicatorSpec::HcpCount { threshold } => Some(threshold.value()),
            _ => None,
        };
        RecordDocument {
            threshold,
            scientists: self
                .scientists
                .iter()
                .map(|(name, data)| ScientistEntry {
                    name: name.clone(),
                    papers: data.to_papers(),
                })
                .collect(),
        }
    }

    /// Transformed record of one scientist under one scenario.
    pub fn scenario_record(
        &self,
        data: &ScientistData,
        kind: ScenarioKind,
    ) -> Result<CitationRecord> {
        match (data, kind) {
            (ScientistData::Flat(r), ScenarioKind::Original) => Ok(r.clone()),
            (ScientistData::Flat(r), ScenarioKind::Improve { improvement }) => {
                improvement.with_rounding(RoundingMode::Strict).apply(r)
            }
            (ScientistData::Periods(tp), ScenarioKind::Period { index }) => tp
                .periods()
                .get(index)
                .cloned()
                .ok_or_else(|| Error::ScenarioMismatch(format!("no period {index}"))),
            (ScientistData::Periods(tp), ScenarioKind::Aggregate) => aggregate_periods(tp),
            (_, kind) => Err(Error::ScenarioMismatch(format!("{kind:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellResult {
    pub scientist: String,
    pub scenario: String,
    pub expected: u64,
    pub computed: std::result::Result<u64, String>,
}

impl CellResult {
    pub fn passed(&self) -> bool {
        self.computed.as_ref() == Ok(&self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCellResult {
    pub scientist: String,
    pub column: String,
    pub expected: u32,
    /// Rank recomputed from each scenario of the column.
    pub computed: Vec<Option<u32>>,
}

impl RankCellResult {
    pub fn passed(&self) -> bool {
        !self.computed.is_empty() && self.computed.iter().all(|&r| r == Some(self.expected))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub table: TableId,
    pub cells: Vec<CellResult>,
    pub rank_cells: Vec<RankCellResult>,
    pub errors: Vec<String>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty()
            && self.cells.iter().all(CellResult::passed)
            && self.rank_cells.iter().all(RankCellResult::passed)
    }

    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| !c.passed()).count()
            + self.rank_cells.iter().filter(|c| !c.passed()).count()
    }
}

/// Competition ranking: 1 + number of strictly larger values.
pub fn competition_ranks(values: &[u64]) -> Vec<u32> {
    values
        .iter()
        .map(|v| 1 + values.iter().filter(|&w| w > v).count() as u32)
        .collect()
}

/// Recomputes every cell of a fixture under strict rounding.
pub fn run_fixture(f: &Fixture) -> FixtureReport {
    let mut errors = Vec::new();
    let mut computed = vec![vec![None; f.scenarios.len()]; f.scientists.len()];
    let mut cells = Vec::new();
    for (s, (name, data)) in f.scientists.iter().enumerate() {
        for (k, scenario) in f.scenarios.iter().enumerate() {
            let value = f
                .scenario_record(data, scenario.kind)
                .map(|r| evaluate(f.indicator, &r))
                .map_err(|e| e.to_string());
            if let Err(e) = &value {
                errors.push(format!("{name}/{}: {e}", scenario.label));
            }
            computed[s][k] = value.as_ref().ok().copied();
            cells.push(CellResult {
                scientist: name.clone(),
                scenario: scenario.label.clone(),
                expected: f.expected[s][k],
                computed: value,
            });
        }
    }

    let mut rank_cells = Vec::new();
    for column in f.expected_ranks.iter().flatten() {
        let per_scenario: Vec<Option<Vec<u32>>> = column
            .scenarios
            .iter()
            .map(|label| {
                let k = f.scenarios.iter().position(|s| &s.label == label)?;
                let values: Option<Vec<u64>> = computed.iter().map(|row| row[k]).collect();
                values.map(|v| competition_ranks(&v))
            })
            .collect();
        for (s, (name, _)) in f.scientists.iter().enumerate() {
            rank_cells.push(RankCellResult {
                scientist: name.clone(),
                column: column.label.clone(),
                expected: column.ranks[s],
                computed: per_scenario
                    .iter()
                    .map(|r| r.as_ref().map(|r| r[s]))
                    .collect(),
            });
        }
    }

    FixtureReport {
        table: f.table,
        cells,
        rank_cells,
        errors,
    }
}

/// Citations of the five paper groups in the unimproved situation, from
/// excellent down to poor.
pub const GROUP_LABELS: [&str; 5] = ["E", "G", "M", "B", "P"];
pub const GROUP_CITATIONS: [u64; 5] = [15, 12, 9, 6, 3];

/// Expands group multiplicities (E, G, M, B, P) into an explicit record.
pub fn expand_groups(multiplicities: [usize; 5]) -> CitationRecord {
    CitationRecord::new(
        multiplicities
            .iter()
            .zip(GROUP_CITATIONS)
            .flat_map(|(&n, c)| std::iter::repeat_n(c, n))
            .collect(),
    )
}

fn flat(counts: &[u64]) -> ScientistData {
    ScientistData::Flat(CitationRecord::new(counts.to_vec()))
}

fn periods(periods: &[&[u64]]) -> ScientistData {
    ScientistData::Periods(
        TimePartitionedRecord::new(periods.iter().map(|p| p.to_vec().into()).collect())
            .expect("fixture periods are well-formed"),
    )
}

fn rel(num: u64, den: u64) -> ScenarioKind {
    ScenarioKind::Improve {
        improvement: Improvement::relative(Fraction::new(num, den), RoundingMode::Strict)
            .expect("fixture factors are improvements"),
    }
}

fn abs(delta: u64) -> ScenarioKind {
    ScenarioKind::Improve {
        improvement: Improvement::absolute(delta),
    }
}

fn scenarios(list: &[(&str, ScenarioKind)]) -> Vec<Scenario> {
    list.iter()
        .map(|(label, kind)| Scenario {
            label: label.to_string(),
            kind: *kind,
        })
        .collect()
}

fn yearly() -> Vec<Scenario> {
    scenarios(&[
        ("first-year", ScenarioKind::Period { index: 0 }),
        ("second-year", ScenarioKind::Period { index: 1 }),
        ("both-years", ScenarioKind::Aggregate),
    ])
}

fn named(list: Vec<(&str, ScientistData)>) -> Vec<(String, ScientistData)> {
    list.into_iter().map(|(n, d)| (n.to_string(), d)).collect()
}

fn hcp10() -> IndicatorSpec {
    IndicatorSpec::hcp(10).expect("non-zero")
}

pub fn builtin_fixture(table: TableId) -> Fixture {
    match table {
        TableId::T1 => Fixture {
            table,
            title: "Two scientists, two papers each: doubling and +5 citations".into(),
            indicator: hcp10(),
            scientists: named(vec![("V", flat(&[10, 0])), ("W", flat(&[5, 5]))]),
            scenarios: scenarios(&[
                ("O", ScenarioKind::Original),
                ("R", rel(2, 1)),
                ("A", abs(5)),
            ]),
            expected: vec![vec![1, 1, 1], vec![0, 2, 2]],
            expected_ranks: None,
        },
        TableId::T2 => Fixture {
            table,
            title: "Citations per paper group under relative and absolute improvements".into(),
            indicator: IndicatorSpec::TotalCitations,
            scientists: GROUP_LABELS
                .iter()
                .zip(GROUP_CITATIONS)
                .map(|(l, c)| (l.to_string(), flat(&[c])))
                .collect(),
            scenarios: scenarios(&[
                ("O", ScenarioKind::Original),
                ("R1", rel(4, 3)),
                ("R2", rel(5, 3)),
                ("A1", abs(3)),
                ("A2", abs(6)),
            ]),
            expected: vec![
                vec![15, 20, 25, 18, 21],
                vec![12, 16, 20, 15, 18],
                vec![9, 12, 15, 12, 15],
                vec![6, 8, 10, 9, 12],
                vec![3, 4, 5, 6, 9],
            ],
            expected_ranks: None,
        },
        TableId::T3 => {
            let column = |label: &str, scen: &[&str], ranks: [u32; 3]| RankColumn {
                label: label.to_string(),
                scenarios: scen.iter().map(|s| s.to_string()).collect(),
                ranks: ranks.to_vec(),
            };
            Fixture {
                table,
                title: "Three scientists with twelve papers and 108 citations each".into(),
                indicator: hcp10(),
                scientists: named(vec![
                    ("X", ScientistData::Flat(expand_groups([0, 4, 4, 4, 0]))),
                    ("Y", ScientistData::Flat(expand_groups([1, 2, 6, 2, 1]))),
                    ("Z", ScientistData::Flat(expand_groups([2, 0, 8, 0, 2]))),
                ]),
                scenarios: scenarios(&[
                    ("O", ScenarioKind::Original),
                    ("R1", rel(4, 3)),
                    ("A1", abs(3)),
                    ("R2", rel(5, 3)),
                    ("A2", abs(6)),
                ]),
                expected: vec![
                    vec![4, 8, 8, 12, 12],
                    vec![3, 9, 9, 11, 11],
                    vec![2, 10, 10, 10, 10],
                ],
                expected_ranks: Some(vec![
                    column("O", &["O"], [1, 2, 3]),
                    column("R1/A1", &["R1", "A1"], [3, 2, 1]),
                    column("R2/A2", &["R2", "A2"], [1, 2, 3]),
                ]),
            }
        }
        TableId::T4 => Fixture {
            table,
            title: "h-index of two scientists: doubling and +2 citations".into(),
            indicator: IndicatorSpec::HIndex,
            scientists: named(vec![("P", flat(&[3, 3, 3, 0])), ("Q", flat(&[3, 2, 2, 2]))]),
            scenarios: scenarios(&[
                ("O", ScenarioKind::Original),
                ("R", rel(2, 1)),
                ("A", abs(2)),
            ]),
            expected: vec![vec![3, 3, 3], vec![2, 4, 4]],
            expected_ranks: None,
        },
        TableId::T5 => Fixture {
            table,
            title: "Two scientists over two years".into(),
            indicator: hcp10(),
            scientists: named(vec![
                ("V", periods(&[&[10, 0], &[10, 0]])),
                ("W", periods(&[&[5, 5], &[5, 5]])),
            ]),
            scenarios: yearly(),
            expected: vec![vec![1, 1, 1], vec![0, 0, 2]],
            expected_ranks: None,
        },
        TableId::T6 => Fixture {
            table,
            title: "Three scientists over two years".into(),
            indicator: hcp10(),
            scientists: named(vec![
                ("S", periods(&[&[5, 5, 5, 5], &[5, 5, 5, 5]])),
                ("T", periods(&[&[10, 5, 5, 0], &[5, 10, 5, 0]])),
                ("U", periods(&[&[10, 10, 0, 0], &[10, 10, 0, 0]])),
            ]),
            scenarios: yearly(),
            expected: vec![vec![0, 0, 4], vec![1, 1, 3], vec![2, 2, 2]],
            expected_ranks: None,
        },
        TableId::T7 => Fixture {
            table,
            title: "h-index of two scientists over two years".into(),
            indicator: IndicatorSpec::HIndex,
            scientists: named(vec![
                ("P", periods(&[&[3, 3, 3, 0], &[3, 3, 3, 0]])),
                ("Q", periods(&[&[3, 2, 2, 2], &[3, 2, 2, 2]])),
            ]),
            scenarios: yearly(),
            expected: vec![vec![3, 3, 3], vec![2, 2, 4]],
            expected_ranks: None,
        },
    }
}

pub fn builtin_fixtures() -> Vec<Fixture> {
    TableId::ALL.into_iter().map(builtin_fixture).collect()
}

/// Sanity facts about the expanded group distributions: paper and citation
/// totals of each scientist in the three-scientist table.
pub fn group_totals(f: &Fixture) -> Vec<(u64, u64)> {
    f.scientists
        .iter()
        .filter_map(|(_, d)| match d {
            ScientistData::Flat(r) => Some((paper_count(r), total_citations(r))),
            ScientistData::Periods(_) => None,
        })
        .collect()
}
