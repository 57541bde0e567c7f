use rand::seq::SliceRandom;

use super::*;
use crate::constructions::{build, field_of_order, BuildOptions, CodeKind, CodeRecipe};
use crate::zoo::{build_family, instances::instance};

fn built(name: &str, recipe: CodeRecipe) -> LinearCode {
    build(
        &build_family(&instance(name).unwrap()).unwrap(),
        &recipe,
        &BuildOptions::default(),
    )
    .unwrap()
    .code
}

fn tiny() -> LinearCode {
    built("f3-p3-r4-m1", CodeRecipe::theorem1(1))
}

fn code(q: u64, rows: &[&[u32]]) -> LinearCode {
    let g = rows
        .iter()
        .map(|r| r.iter().map(|&x| Elem(x)).collect())
        .collect();
    LinearCode::new(field_of_order(q).unwrap(), g).unwrap()
}

/// Smallest number of linearly dependent generator columns, searched up to `cap`.
fn dual_distance(code: &LinearCode, cap: usize) -> usize {
    let f = code.alphabet();
    let cols: Vec<Vec<Elem>> = (0..code.n()).map(|j| code.column(j)).collect();
    fn subsets(n: usize, l: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            subsets(n, l, i + 1, cur, out);
            cur.pop();
        }
    }
    for l in 1..=cap {
        let mut all = Vec::new();
        subsets(cols.len(), l, 0, &mut Vec::new(), &mut all);
        if all
            .iter()
            .any(|s| linalg::rank(f, &s.iter().map(|&i| cols[i].clone()).collect::<Vec<_>>()) < l)
        {
            return l;
        }
    }
    cap + 1
}

#[test]
fn tiny_theorem1_access_structure() {
    let c = tiny();
    let r = access_report(&c, false).unwrap();
    let e = r.enumerated.as_ref().unwrap();
    assert_eq!(e.total, 81);
    assert!(e.code_minimal);
    assert_eq!(r.predicted.total, 81);
    assert_eq!(r.predicted.per_participant, 54);
    assert_eq!(r.predicted.dual_distance, DualDistanceClass::Two);
    for (i, &f) in &e.frequencies {
        let expected = if r.predicted.always_in.contains(i) {
            81
        } else {
            54
        };
        assert_eq!(f, expected, "participant {i}");
    }
    assert_eq!(
        r.verdicts,
        Some(AccessVerdicts {
            total: true,
            always_in: true,
            frequencies: true
        })
    );
}

#[test]
fn deal_and_reconstruct_round_trip() {
    let scheme = MasseyScheme::new(tiny()).unwrap();
    let sets = minimal_access_sets(scheme.code()).unwrap();
    for secret in 0..3 {
        for seed in 0..10 {
            let d = scheme.deal(Elem(secret), seed).unwrap();
            assert_eq!(d, scheme.deal(Elem(secret), seed).unwrap());
            for set in sets.iter().skip(seed as usize).step_by(9) {
                let shares: Vec<(usize, Elem)> = set
                    .iter()
                    .map(|&i| (i as usize, Elem(d.shares[i as usize - 1])))
                    .collect();
                assert_eq!(
                    scheme.reconstruct(&shares).unwrap(),
                    Recovery::Secret(Elem(secret))
                );
                assert_eq!(
                    scheme.reconstruct(&shares[1..]).unwrap(),
                    Recovery::Unqualified
                );
            }
            let all: Vec<(usize, Elem)> = d
                .shares
                .iter()
                .enumerate()
                .map(|(i, &s)| (i + 1, Elem(s)))
                .collect();
            assert_eq!(
                scheme.reconstruct(&all).unwrap(),
                Recovery::Secret(Elem(secret))
            );
        }
    }
    assert_eq!(scheme.reconstruct(&[]).unwrap(), Recovery::Unqualified);
}

#[test]
fn proper_subsets_of_minimal_sets_are_unqualified() {
    let scheme = MasseyScheme::new(tiny()).unwrap();
    for set in minimal_access_sets(scheme.code()).unwrap().iter().take(12) {
        let set: Vec<usize> = set.iter().map(|&i| i as usize).collect();
        assert!(scheme.is_access_set(&set));
        for drop in 0..set.len() {
            let sub: Vec<usize> = set
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != drop)
                .map(|(_, &i)| i)
                .collect();
            assert!(!scheme.is_access_set(&sub));
        }
    }
}

#[test]
fn supersets_of_access_sets_qualify() {
    let scheme = MasseyScheme::new(tiny()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let everyone: Vec<usize> = (1..=scheme.participants()).collect();
    for set in minimal_access_sets(scheme.code())
        .unwrap()
        .iter()
        .step_by(7)
    {
        let mut sup: Vec<usize> = set.iter().map(|&i| i as usize).collect();
        sup.extend(everyone.choose_multiple(&mut rng, 5).copied());
        sup.sort();
        sup.dedup();
        assert!(scheme.is_access_set(&sup));
    }
}

#[test]
fn zero_secret_with_zero_dealer_vector() {
    let scheme = MasseyScheme::new(tiny()).unwrap();
    let zero: Vec<(usize, Elem)> = (1..=scheme.participants())
        .map(|i| (i, Elem::ZERO))
        .collect();
    assert_eq!(
        scheme.reconstruct(&zero).unwrap(),
        Recovery::Secret(Elem::ZERO)
    );
}

#[test]
fn tampered_shares_are_inconsistent() {
    let scheme = MasseyScheme::new(tiny()).unwrap();
    let d = scheme.deal(Elem(2), 5).unwrap();
    let mut all: Vec<(usize, Elem)> = d
        .shares
        .iter()
        .enumerate()
        .map(|(i, &s)| (i + 1, Elem(s)))
        .collect();
    all[4].1 = Elem((all[4].1 .0 + 1) % 3);
    assert!(matches!(
        scheme.reconstruct(&all),
        Err(Error::InconsistentShares)
    ));
}

#[test]
fn corollary_access_structure_has_no_fixed_members() {
    let spec = crate::zoo::VectorialFnSpec::QuadraticTrace {
        p: 3,
        r: 6,
        m: 1,
        a: 1,
    };
    let f = build_family(&spec).unwrap();
    let c = build(
        &f,
        &CodeRecipe::new(CodeKind::Corollary1, 1, 1, 1),
        &BuildOptions::default(),
    )
    .unwrap()
    .code;
    assert_eq!((c.q(), c.k()), (3, 6));
    let r = access_report(&c, false).unwrap();
    assert_eq!(r.predicted.dual_distance, DualDistanceClass::AtLeastThree);
    assert!(r.predicted.always_in.is_empty());
    assert_eq!(r.enumerated.as_ref().unwrap().total, 243);
    assert_eq!(
        r.verdicts,
        Some(AccessVerdicts {
            total: true,
            always_in: true,
            frequencies: true
        })
    );
    let dd = dual_distance(&c, 3);
    let checked = if dd > 3 { 2 } else { 1 };
    assert_eq!(r.groups.len(), checked);
    assert!(r.groups.iter().all(|g| g.holds));
    assert_eq!(no_dependent_triples(&c), Some(dd > 3));

    assert!(dd >= 3);
    let sets = minimal_access_sets(&c).unwrap();
    let q = 3u64;
    let k = 6u32;
    let participants: Vec<u32> = (1..c.n() as u32).collect();
    for l in 1..=(k as usize - 1).min(dd - 2) {
        let mut groups = vec![vec![]];
        for _ in 0..l {
            groups = groups
                .into_iter()
                .flat_map(|g: Vec<u32>| {
                    let last = g.last().copied().unwrap_or(0);
                    participants
                        .iter()
                        .filter(move |&&p| p > last)
                        .map(move |&p| {
                            let mut h = g.clone();
                            h.push(p);
                            h
                        })
                })
                .collect();
        }
        let expected = q.pow(k - 1 - l as u32) * (q - 1).pow(l as u32);
        for g in groups {
            let count = sets
                .iter()
                .filter(|s| g.iter().all(|p| s.contains(p)))
                .count() as u64;
            assert_eq!(count, expected, "group {g:?}");
        }
    }
}

#[test]
fn one_dimensional_code_has_one_set() {
    let c = code(5, &[&[1, 2, 3, 4]]);
    let sets = minimal_access_sets(&c).unwrap();
    assert_eq!(sets, vec![vec![1, 2, 3]]);
}

#[test]
fn non_minimal_code_breaks_the_count() {
    let c = code(3, &[&[1, 0, 0], &[0, 1, 1]]);
    let r = access_report(&c, false).unwrap();
    assert!(!r.enumerated.as_ref().unwrap().code_minimal);
    assert!(!r.verdicts.unwrap().total);
}

#[test]
fn degenerate_secret_coordinate() {
    assert!(matches!(
        MasseyScheme::new(code(3, &[&[0, 1, 2], &[0, 2, 2]])),
        Err(Error::DegenerateG0)
    ));
    // coordinate 0 alone is a codeword, so every dual word vanishes there
    assert!(matches!(
        MasseyScheme::new(code(3, &[&[1, 0, 0], &[0, 1, 2]])),
        Err(Error::DegenerateG0)
    ));
}

#[test]
fn predicted_only_skips_enumeration() {
    let c = built("example2", CodeRecipe::new(CodeKind::Corollary1, 2, 2, 1));
    let r = access_report(&c, true).unwrap();
    assert_eq!(r.mode, "predicted");
    assert_eq!(r.predicted.total, 729);
    assert_eq!(r.predicted.per_participant, 8 * 81);
    assert_eq!(r.predicted.dual_distance, DualDistanceClass::AtLeastThree);
    assert!(r.enumerated.is_none());
    let big = code(
        25,
        &[
            &[1, 1, 0, 0, 0],
            &[1, 0, 1, 0, 0],
            &[1, 0, 0, 1, 0],
            &[1, 0, 0, 0, 1],
        ],
    );
    assert!(matches!(
        access_report(&big, false),
        Err(Error::BudgetExceeded { .. })
    ));
}

#[test]
fn pair_law_on_a_cap_code() {
    // points of the elliptic quadric x0 x1 + x2^2 + x3^2 = 0 in PG(3, 3)
    let mut points: Vec<[u32; 4]> = Vec::new();
    for idx in 1..81u32 {
        let x = [idx % 3, idx / 3 % 3, idx / 9 % 3, idx / 27];
        let lead = *x.iter().find(|&&v| v != 0).unwrap();
        if lead == 1 && (x[0] * x[1] + x[2] * x[2] + x[3] * x[3]) % 3 == 0 {
            points.push(x);
        }
    }
    assert_eq!(points.len(), 10);
    let rows: Vec<Vec<u32>> = (0..4)
        .map(|r| points.iter().map(|pt| pt[r]).collect())
        .collect();
    let refs: Vec<&[u32]> = rows.iter().map(|r| r.as_slice()).collect();
    let c = code(3, &refs);
    assert_eq!(dual_distance(&c, 3), 4);
    assert_eq!(no_dependent_triples(&c), Some(true));
    let r = access_report(&c, false).unwrap();
    let sets = minimal_access_sets(&c).unwrap();
    let n = c.n() as u32;
    let pair_law = (1..n).all(|i| {
        (i + 1..n).all(|j| {
            sets.iter()
                .filter(|s| s.contains(&i) && s.contains(&j))
                .count()
                == 12
        })
    });
    assert_eq!(r.groups.len(), 2);
    assert_eq!(
        r.groups[1],
        GroupVerdict {
            size: 2,
            predicted: 12,
            holds: pair_law
        }
    );
    // weights 6 and 9 sit on the ratio boundary and the code is not minimal
    assert!(!r.enumerated.unwrap().code_minimal);
    assert!(!pair_law);
}
