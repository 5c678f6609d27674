mod common;

use std::collections::HashSet;

use proptest::prelude::*;

use citecheck::axioms::{
    check_aggregation_consistency, check_improvement_consistency, compare, ConsistencyProperty,
    RankOutcome, Severity, Subject,
};
use citecheck::search::{find_counterexamples, minimal_counterexamples, SearchBounds};
use citecheck::transforms::pad_record;
use citecheck::{
    CitationRecord, Fraction, Improvement, IndicatorKind, IndicatorSpec, RoundingMode, Threshold,
    TimePartitionedRecord,
};

use common::{brute_force_improvements, Change, Indicator};

fn spec_strategy() -> impl Strategy<Value = IndicatorSpec> {
    prop_oneof![
        (1u64..30).prop_map(|t| IndicatorSpec::hcp(t).unwrap()),
        Just(IndicatorSpec::HIndex),
        Just(IndicatorSpec::TotalCitations),
        Just(IndicatorSpec::PaperCount),
    ]
}

fn record() -> impl Strategy<Value = CitationRecord> {
    proptest::collection::vec(0u64..40, 0..12).prop_map(CitationRecord::new)
}

fn improvement() -> impl Strategy<Value = Improvement> {
    prop_oneof![
        (1u64..6, 1u64..6).prop_map(|(a, b)| {
            let (n, d) = if a >= b { (a, b) } else { (b, a) };
            Improvement::relative(Fraction::new(n, d), RoundingMode::Floor).unwrap()
        }),
        (0u64..15).prop_map(Improvement::absolute),
    ]
}

proptest! {
    #[test]
    fn compare_is_antisymmetric(spec in spec_strategy(), a in record(), b in record()) {
        let ab = compare(spec, &a, &b);
        prop_assert_eq!(compare(spec, &b, &a), ab.flip());
        prop_assert_eq!(compare(spec, &a, &a), RankOutcome::Tie);
    }

    #[test]
    fn paper_count_never_violates(a in record(), b in record(), imp in improvement()) {
        prop_assert_eq!(check_improvement_consistency(IndicatorSpec::PaperCount, &a, &b, imp).unwrap(), None);
    }

    #[test]
    fn paper_count_never_violates_aggregation(
        n in 0usize..6, m in 0usize..6,
        seed in proptest::collection::vec(0u64..20, 24),
    ) {
        let tp = |len: usize, off: usize| TimePartitionedRecord::new(vec![
            CitationRecord::new(seed[off..off + len].to_vec()),
            CitationRecord::new(seed[off + 6..off + 6 + len].to_vec()),
        ]).unwrap();
        let (a, b) = (tp(n, 0), tp(m, 12));
        prop_assert_eq!(check_aggregation_consistency(IndicatorSpec::PaperCount, &a, &b).unwrap(), None);
    }

    #[test]
    fn reports_revalidate(spec in spec_strategy(), a in record(), b in record(), imp in improvement()) {
        if let Some(report) = check_improvement_consistency(spec, &a, &b, imp).unwrap() {
            prop_assert!(report.revalidate().unwrap());
            let before = report.before[0];
            match report.severity {
                Severity::StrictReversal => {
                    prop_assert_ne!(before.0, before.1);
                    prop_assert_eq!(before.0 > before.1, report.after.0 < report.after.1);
                    prop_assert_ne!(report.after.0, report.after.1);
                }
                Severity::Weakening => {
                    prop_assert!((before.0 == before.1) != (report.after.0 == report.after.1));
                }
            }
        }
    }

    #[test]
    fn hcp_padding_preserves_violations(
        a in record(), b in record(), t in 1u64..30, m in 1usize..5, extra in 0u64..10, imp in improvement(),
    ) {
        let spec = IndicatorSpec::hcp(t).unwrap();
        let Some(report) = check_improvement_consistency(spec, &a, &b, imp).unwrap() else {
            return Ok(());
        };
        // entries >= t stay >= t under any improvement
        let pad = vec![t + extra; m];
        let padded = check_improvement_consistency(spec, &pad_record(&a, &pad), &pad_record(&b, &pad), imp)
            .unwrap()
            .expect("violation survives padding");
        let m = m as u64;
        prop_assert_eq!(padded.before[0], (report.before[0].0 + m, report.before[0].1 + m));
        prop_assert_eq!(padded.after, (report.after.0 + m, report.after.1 + m));
        prop_assert_eq!(padded.severity, report.severity);
    }
}

#[test]
fn total_citations_only_break_under_rounding() {
    // exact scalings never move the order of sums; floored ones may, and are flagged
    let bounds = SearchBounds {
        properties: [ConsistencyProperty::RelativeImprovement]
            .into_iter()
            .collect(),
        include_weakenings: true,
        ..SearchBounds::default()
    };
    let found = find_counterexamples(&[IndicatorKind::TotalCitations], &bounds).unwrap();
    assert!(!found.is_empty());
    for c in &found {
        assert!(
            matches!(
                c.report.subject,
                Subject::Improvement {
                    inexact_rounding: true,
                    ..
                }
            ),
            "{c:?}"
        );
    }

    let exact = SearchBounds {
        improvements: (2..=4)
            .map(|k| Improvement::relative(Fraction::new(k, 1), RoundingMode::Floor).unwrap())
            .collect(),
        mixed_paper_counts: true,
        ..bounds
    };
    assert!(
        find_counterexamples(&[IndicatorKind::TotalCitations], &exact)
            .unwrap()
            .is_empty()
    );
}

#[test]
fn floor_rounding_can_break_total_citations() {
    // five singly cited papers against one paper with four citations, scaled by 3/2
    let a: CitationRecord = [1, 1, 1, 1, 1].into();
    let b: CitationRecord = [4, 0, 0, 0, 0].into();
    let imp = Improvement::relative(Fraction::new(3, 2), RoundingMode::Floor).unwrap();
    let r = check_improvement_consistency(IndicatorSpec::TotalCitations, &a, &b, imp)
        .unwrap()
        .unwrap();
    assert_eq!((r.before[0], r.after), ((5, 4), (5, 6)));
    assert!(matches!(
        r.subject,
        Subject::Improvement {
            inexact_rounding: true,
            ..
        }
    ));
}

fn doubling() -> Improvement {
    Improvement::relative(Fraction::new(2, 1), RoundingMode::Floor).unwrap()
}

fn improvement_bounds(
    max_papers: usize,
    max_citations: u64,
    theta: u64,
    imps: Vec<Improvement>,
) -> SearchBounds {
    SearchBounds {
        max_papers,
        max_citations,
        properties: imps
            .iter()
            .map(ConsistencyProperty::of_improvement)
            .collect(),
        improvements: imps,
        thresholds: vec![Threshold::new(theta).unwrap()],
        ..SearchBounds::default()
    }
}

#[test]
fn threshold_two_minimum_matches_double_loop() {
    // independent double loop over all 15 x 15 canonical two-paper pairs with counts <= 4
    let canonical: Vec<Vec<u64>> = common::all_sequences(2, 4)
        .into_iter()
        .filter(|s| s.len() == 2 && s[0] >= s[1])
        .collect();
    assert_eq!(canonical.len(), 15);
    type Pair = (Vec<u64>, Vec<u64>);
    let mut smallest: Option<((u64, u64), Pair)> = None;
    for a in &canonical {
        for b in &canonical {
            if a.len() != b.len() {
                continue;
            }
            let hcp = |r: &[u64]| r.iter().filter(|&&c| c >= 2).count();
            let dbl = |r: &[u64]| r.iter().map(|c| 2 * c).collect::<Vec<_>>();
            if hcp(a) > hcp(b) && hcp(&dbl(a)) < hcp(&dbl(b)) {
                let size = ((a.len() + b.len()) as u64, a.iter().chain(b).sum());
                if smallest.as_ref().is_none_or(|(s, _)| size < *s) {
                    smallest = Some((size, (a.clone(), b.clone())));
                }
            }
        }
    }
    let (size, pair) = smallest.unwrap();
    assert_eq!(pair, (vec![2, 0], vec![1, 1]));

    let found = find_counterexamples(
        &[IndicatorKind::Hcp],
        &improvement_bounds(2, 4, 2, vec![doubling()]),
    )
    .unwrap();
    let minimal = minimal_counterexamples(&found);
    assert_eq!(minimal.len(), 1);
    assert_eq!(minimal[0].size, size);
    let Subject::Improvement {
        record_a, record_b, ..
    } = &minimal[0].report.subject
    else {
        unreachable!()
    };
    assert_eq!(
        (record_a.counts(), record_b.counts()),
        (&[2, 0][..], &[1, 1][..])
    );
    assert_eq!(
        (minimal[0].report.before[0], minimal[0].report.after),
        ((1, 0), (1, 2))
    );
}

#[test]
fn table_one_pair_is_smallest_at_threshold_ten() {
    // full enumeration over at most three papers in total
    let oracle = brute_force_improvements(
        &[Indicator::Hcp(10)],
        &[Change::Scale(2, 1)],
        1,
        40,
        false,
        false,
    );
    assert!(oracle.is_empty());
    let found = find_counterexamples(
        &[IndicatorKind::Hcp],
        &improvement_bounds(2, 10, 10, vec![doubling()]),
    )
    .unwrap();
    let minimal = minimal_counterexamples(&found);
    assert!(minimal.iter().all(|c| c.size.0 >= 4));
    assert!(found.iter().any(|c| c.size == (4, 20)));
}

#[test]
fn search_completeness_for_both_improvements() {
    let bounds = improvement_bounds(2, 10, 10, vec![doubling(), Improvement::absolute(5)]);
    let found = find_counterexamples(&[IndicatorKind::Hcp], &bounds).unwrap();
    for property in [
        ConsistencyProperty::RelativeImprovement,
        ConsistencyProperty::AbsoluteImprovement,
    ] {
        assert!(found.iter().any(|c| {
            c.report.property == property
                && matches!(&c.report.subject, Subject::Improvement { record_a, record_b, .. }
                    if record_a.counts() == [10, 0] && record_b.counts() == [5, 5])
        }));
    }
    let keys: HashSet<_> = found
        .iter()
        .map(|c| (c.report.indicator, c.report.subject.clone()))
        .collect();
    assert_eq!(keys.len(), found.len());
    for c in &found {
        assert!(c.report.revalidate().unwrap());
    }
}

#[test]
fn search_is_schedule_independent() {
    let bounds = improvement_bounds(3, 9, 5, vec![doubling(), Improvement::absolute(2)]);
    let family = [IndicatorKind::Hcp, IndicatorKind::HIndex];
    let parallel = find_counterexamples(&family, &bounds).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| find_counterexamples(&family, &bounds).unwrap());
    assert_eq!(parallel, single);
}
