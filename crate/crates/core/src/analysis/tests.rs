use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::constructions::{build, field_of_order, BuildOptions, CodeKind, CodeRecipe};
use crate::field::Field;
use crate::zoo::{build_family, instances::instance};

fn naive_distribution(code: &LinearCode) -> BTreeMap<u64, u64> {
    let mut out = BTreeMap::new();
    for idx in 0..codeword_count(code).unwrap() {
        let c = code.encode(&message(idx, code.q(), code.k())).unwrap();
        *out.entry(c.iter().filter(|x| !x.is_zero()).count() as u64)
            .or_insert(0) += 1;
    }
    out
}

fn naive_minimal(code: &LinearCode) -> bool {
    let f = code.alphabet();
    let words: Vec<Vec<Elem>> = (1..codeword_count(code).unwrap())
        .map(|i| code.encode(&message(i, code.q(), code.k())).unwrap())
        .collect();
    words.iter().all(|c| {
        words.iter().all(|d| {
            let covered = d.iter().zip(c).all(|(x, y)| x.is_zero() || !y.is_zero());
            !covered
                || f.nonzero_elements()
                    .any(|a| d.iter().zip(c).all(|(&x, &y)| x == f.mul(a, y)))
        })
    })
}

fn code(q: u64, rows: &[&[u32]]) -> LinearCode {
    let g = rows
        .iter()
        .map(|r| r.iter().map(|&x| Elem(x)).collect())
        .collect();
    LinearCode::new(field_of_order(q).unwrap(), g).unwrap()
}

fn built(name: &str, recipe: CodeRecipe) -> crate::constructions::Construction {
    build(
        &build_family(&instance(name).unwrap()).unwrap(),
        &recipe,
        &BuildOptions::default(),
    )
    .unwrap()
}

#[test]
fn first_example_matches_prediction() {
    let c = built("example1", CodeRecipe::theorem1(2));
    let r = analyze(&c.code, Some(&c.predicted), Budget::default()).unwrap();
    assert_eq!((r.n, r.k, r.d), (80, 3, 71));
    assert_eq!(r.distribution, vec![(0, 1), (71, 640), (72, 80), (80, 8)]);
    assert!(r.prediction.unwrap().matches);
    assert_eq!(
        r.griesmer,
        GriesmerCheck {
            bound: 80,
            meets: true
        }
    );
    // s = r/2 here, so full-weight words cover everything
    assert_eq!(
        r.minimality,
        MinimalityReport {
            verdict: Some(false),
            method: MinimalityMethod::Exhaustive
        }
    );
    assert_eq!(
        naive_distribution(&c.code),
        r.distribution.into_iter().collect()
    );
}

#[test]
fn second_example_matches_prediction() {
    let c = built("example2", CodeRecipe::new(CodeKind::Corollary1, 2, 2, 1));
    let dist = weight_distribution(&c.code).unwrap();
    assert_eq!(
        dist.counts,
        [(0, 1), (72, 5904), (81, 656)].into_iter().collect()
    );
    assert!(verify_against_prediction(&dist, &c.predicted).matches);
    assert_eq!(
        dual_distance_class(&c.code),
        DualDistanceClass::AtLeastThree
    );
}

#[test]
fn tiny_code_and_its_parent() {
    let c = built("f3-p3-r4-m1", CodeRecipe::theorem1(1));
    let dist = weight_distribution(&c.code).unwrap();
    assert_eq!(dist.counts, naive_distribution(&c.code));
    assert!(verify_against_prediction(&dist, &c.predicted).matches);
    assert_eq!(dist.total(), 243);
    assert!(exhaustive_minimality(&c.code).unwrap());
}

#[test]
fn tampered_code_reports_a_diff() {
    let c = built("example1", CodeRecipe::theorem1(2));
    let mut g = c.code.generator().to_vec();
    g[0][0] = Elem::ZERO;
    let bad = LinearCode::new(c.code.alphabet().clone(), g).unwrap();
    let check = verify_against_prediction(&weight_distribution(&bad).unwrap(), &c.predicted);
    assert!(!check.matches);
    assert!(!check.diff.is_empty());
}

#[test]
fn budget_is_enforced() {
    let c = code(9, &[&[1, 2, 3], &[0, 1, 4], &[5, 0, 1]]);
    assert!(matches!(
        weight_distribution_with(&c, Budget::codewords(728), None),
        Err(Error::BudgetExceeded { required: 729, .. })
    ));
    assert_eq!(
        weight_distribution_with(&c, Budget::codewords(729), None)
            .unwrap()
            .total(),
        729
    );
    let tight = Budget {
        codewords: 729,
        work: 729 * 3 - 1,
    };
    assert!(matches!(
        weight_distribution_with(&c, tight, None),
        Err(Error::BudgetExceeded { required: 2187, .. })
    ));
}

#[test]
fn bounds() {
    assert_eq!(
        griesmer_check(60, 2, 59, 121),
        GriesmerCheck {
            bound: 60,
            meets: true
        }
    );
    assert_eq!(
        singleton_check(60, 2, 59),
        SingletonCheck {
            defect: 0,
            mds: true
        }
    );
    assert_eq!(griesmer_check(82, 4, 72, 9).bound, 72 + 8 + 1 + 1);
    assert!(!singleton_check(82, 4, 72).mds);
}

#[test]
fn dual_distance_classes() {
    assert_eq!(
        dual_distance_class(&code(3, &[&[1, 0, 1], &[0, 0, 1]])),
        DualDistanceClass::One
    );
    assert_eq!(
        dual_distance_class(&code(3, &[&[1, 2, 0], &[1, 2, 1]])),
        DualDistanceClass::Two
    );
    assert_eq!(
        dual_distance_class(&code(3, &[&[1, 0, 1], &[0, 1, 1]])),
        DualDistanceClass::AtLeastThree
    );
}

#[test]
fn non_minimal_code_found_exhaustively() {
    let c = code(3, &[&[1, 0, 0], &[0, 1, 1]]);
    let dist = weight_distribution(&c).unwrap();
    assert!(!ratio_condition(&dist));
    assert_eq!(
        minimality_check(&c, &dist),
        MinimalityReport {
            verdict: Some(false),
            method: MinimalityMethod::Exhaustive
        }
    );
    assert_eq!(
        non_minimal_messages(&c).unwrap(),
        vec![vec![Elem::ONE, Elem::ONE], vec![Elem::ONE, Elem(2)]]
    );
}

#[test]
fn chunking_is_independent_of_thread_count() {
    let c = built("example2", CodeRecipe::new(CodeKind::Corollary1, 2, 2, 1));
    let run = |t| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .unwrap()
            .install(|| weight_distribution(&c.code).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(2));
    assert_eq!(one, run(8));
}

#[test]
fn csv_export() {
    let c = code(3, &[&[1, 1]]);
    assert_eq!(
        weight_distribution(&c).unwrap().to_csv(),
        "weight,count\n0,1\n2,2\n"
    );
}

fn small_code() -> impl Strategy<Value = LinearCode> {
    (
        prop::sample::select(vec![3u64, 5, 7, 9, 25, 27]),
        1usize..4,
        1usize..6,
    )
        .prop_filter("small", |&(q, k, _)| q.pow(k as u32) <= 729)
        .prop_flat_map(|(q, k, n)| {
            prop::collection::vec(prop::collection::vec(0..q as u32, n), k).prop_map(move |g| {
                let f: Arc<Field> = field_of_order(q).unwrap();
                LinearCode::new(
                    f,
                    g.into_iter()
                        .map(|r| r.into_iter().map(Elem).collect())
                        .collect(),
                )
                .unwrap()
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gray_enumeration_matches_direct_encoding(c in small_code()) {
        let dist = weight_distribution(&c).unwrap();
        prop_assert_eq!(dist.total(), codeword_count(&c).unwrap() as u128);
        prop_assert_eq!(dist.counts, naive_distribution(&c));
    }

    #[test]
    fn rank_criterion_matches_support_covering(c in small_code()) {
        prop_assume!(c.rank() == c.k());
        prop_assert_eq!(exhaustive_minimality(&c).unwrap(), naive_minimal(&c));
    }

    #[test]
    fn lemma_ratio_implies_minimal(c in small_code()) {
        prop_assume!(c.rank() == c.k());
        let dist = weight_distribution(&c).unwrap();
        if ratio_condition(&dist) {
            prop_assert!(naive_minimal(&c));
        }
    }
}

#[test]
fn sampling_sees_only_predicted_weights() {
    let f = build_family(&instance("example2").unwrap()).unwrap();
    let c = build(
        &f,
        &CodeRecipe::new(CodeKind::Corollary1, 2, 2, 1),
        &BuildOptions::default(),
    )
    .unwrap();
    let s = sample_weights(&c.code, 2000, 9, Some(&c.predicted)).unwrap();
    assert_eq!(s.counts.values().sum::<u64>(), 2000);
    assert!(s.unexpected.is_empty());
    assert_eq!(s.counts.keys().copied().collect::<Vec<_>>(), vec![72, 81]);
    let again = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    assert_eq!(
        again.install(|| sample_weights(&c.code, 2000, 9, Some(&c.predicted)).unwrap()),
        s
    );
    let other = sample_weights(&c.code, 2000, 10, Some(&c.predicted)).unwrap();
    assert_ne!(other.counts, s.counts);
}
