use super::instances::{instance, list};
use super::*;
use crate::walsh::{classify_bent, dual_dual_check};

fn small_instances() -> Vec<(&'static str, VectorialFn)> {
    list()
        .iter()
        .filter(|i| !i.name.starts_with("example") || i.name == "example1")
        .map(|i| (i.name, build_family(&instance(i.name).unwrap()).unwrap()))
        .filter(|(_, f)| f.domain().size() <= 6561)
        .collect()
}

#[test]
fn example1_table() {
    let f = build_family(&instance("example1").unwrap()).unwrap();
    let k = Field::conway(3, 4).unwrap();
    for x in k.elements() {
        assert_eq!(f.eval(x.0), k.trace_to(k.mul(x, x), 2).unwrap());
    }
}

#[test]
fn xy_power_vanishes_on_y_zero() {
    let f = build_family(&VectorialFnSpec::XyPower {
        p: 3,
        r_prime: 2,
        m: 1,
        a: 1,
        e: 1,
    })
    .unwrap();
    for x in 0..9 {
        assert_eq!(f.eval(x), Elem::ZERO);
    }
}

#[test]
fn example3_table() {
    let f = build_family(&instance("example3").unwrap()).unwrap();
    let k = Field::conway(5, 2).unwrap();
    let d = f.domain().clone();
    for x in (0..d.size()).step_by(997) {
        let c: Vec<Elem> = (0..4).map(|j| d.coord(x, j)).collect();
        let mut want = Elem::ZERO;
        for (j, &cj) in c.iter().enumerate() {
            let coef = if j == 3 { k.generator() } else { Elem::ONE };
            want = k.add(want, k.mul(coef, k.mul(cj, cj)));
        }
        assert_eq!(f.eval(x), want);
    }
}

#[test]
fn spec_invariants_rejected() {
    let bad = [
        VectorialFnSpec::XyPower {
            p: 3,
            r_prime: 2,
            m: 1,
            a: 1,
            e: 2,
        },
        VectorialFnSpec::XyPower {
            p: 3,
            r_prime: 2,
            m: 1,
            a: 0,
            e: 1,
        },
        VectorialFnSpec::QuadraticTrace {
            p: 3,
            r: 4,
            m: 3,
            a: 1,
        },
        VectorialFnSpec::DiagonalQuadratic {
            p: 3,
            m: 2,
            a: vec![1, 0],
        },
        VectorialFnSpec::XyLinearized {
            p: 3,
            r_prime: 2,
            m: 1,
            a: 1,
            l: vec![1, 1],
        },
        VectorialFnSpec::PartialSpread {
            p: 5,
            r_prime: 2,
            m: 2,
            alpha: 1,
            perm: Some(vec![Term { coeff: 1, exp: 3 }]),
            g: None,
        },
        VectorialFnSpec::PartialSpread {
            p: 3,
            r_prime: 2,
            m: 1,
            alpha: 1,
            perm: None,
            g: Some(vec![Term { coeff: 1, exp: 2 }]),
        },
        VectorialFnSpec::Mixed {
            p: 3,
            r_prime: 2,
            r_second: 1,
            m: 1,
            alpha: [1, 0, 1],
            beta: 1,
            gamma: 1,
            l: vec![1],
        },
    ];
    for spec in bad {
        assert!(
            matches!(build_family(&spec), Err(Error::SpecInvariantViolated(_))),
            "{spec:?}"
        );
    }
}

#[test]
fn component_basics() {
    let f = build_family(&instance("f3-p3-r4-m1").unwrap()).unwrap();
    let c1 = component(&f, Elem::ONE).unwrap();
    for x in 0..81 {
        assert_eq!(c1.eval(x), f.eval(x).0);
    }
    assert_eq!(
        component(&f, Elem::ZERO).unwrap_err(),
        Error::ZeroComponentIndex
    );
    let g = build_family(&instance("example1").unwrap()).unwrap();
    for c in g.codomain().nonzero_elements() {
        let fc = component(&g, c).unwrap();
        assert_eq!(
            fc.eval(0),
            g.codomain().tr_prime(g.codomain().mul(c, g.eval(0)))
        );
    }
}

/// The per-c sign formulas against full spectra, on every small instance
/// and on F3 with r = m where the sign genuinely varies with c.
#[test]
fn epsilon_formula_matches_spectrum() {
    let mut fns = small_instances();
    fns.push((
        "f3-r-eq-m",
        build_family(&VectorialFnSpec::QuadraticTrace {
            p: 3,
            r: 2,
            m: 2,
            a: 1,
        })
        .unwrap(),
    ));
    for (name, f) in fns {
        let facts = f.facts().unwrap();
        let Some(pred) = &facts.epsilon_by_c else {
            continue;
        };
        for c in f.codomain().nonzero_elements() {
            let cl = classify_bent(&component(&f, c).unwrap()).unwrap();
            assert!(cl.verdict.is_weakly_regular(), "{name} c={c}");
            assert_eq!(cl.epsilon, Some(pred[c.0 as usize - 1]), "{name} c={c}");
        }
    }
    let f = build_family(&VectorialFnSpec::QuadraticTrace {
        p: 3,
        r: 2,
        m: 2,
        a: 1,
    })
    .unwrap();
    let pred = f.facts().unwrap().epsilon_by_c.clone().unwrap();
    assert!(pred.contains(&1) && pred.contains(&-1));
}

#[test]
fn closed_form_duals_agree_with_spectra() {
    for (name, f) in small_instances() {
        let rep = verify_vectorial_dual_bent(&f).unwrap();
        assert!(rep.is_vdb, "{name}");
        assert_eq!(rep.dual_source, Some(DualSource::ClosedForm), "{name}");
        assert_eq!(
            rep.sigma_exponent,
            Some(f.facts().unwrap().sigma_exponent),
            "{name}"
        );
    }
}

#[test]
fn vdb_examples() {
    let f = build_family(&instance("f1-p3-r2-m1").unwrap()).unwrap();
    let rep = verify_vectorial_dual_bent(&f).unwrap();
    assert!(rep.is_vdb);
    // c^{-1} on F_3
    assert_eq!(rep.sigma.unwrap(), vec![(1, 1), (2, 2)]);
    let g = build_family(&instance("example1").unwrap()).unwrap();
    let rep = verify_vectorial_dual_bent(&g).unwrap();
    assert!(rep.is_vdb);
    let k = g.codomain();
    for (c, s) in rep.sigma.unwrap() {
        assert_eq!(Elem(s), k.inv(Elem(c)).unwrap());
    }
    let zero =
        VectorialFn::from_table(g.domain().clone(), k.clone(), vec![Elem::ZERO; 81]).unwrap();
    assert!(!verify_vectorial_dual_bent(&zero).unwrap().is_vdb);
}

#[test]
fn vdb_without_closed_form_dual() {
    let f = build_family(&instance("f1-p3-r2-m2-e5").unwrap()).unwrap();
    let bare =
        VectorialFn::from_table(f.domain().clone(), f.codomain().clone(), f.table().to_vec())
            .unwrap();
    let rep = verify_vectorial_dual_bent(&bare).unwrap();
    assert!(rep.is_vdb);
    assert_eq!(rep.dual_source, Some(DualSource::PowerMap));
    assert_eq!(rep.sigma_exponent, Some(5));
}

#[test]
fn condition_a_examples() {
    let f = build_family(&instance("example1").unwrap()).unwrap();
    let rep = verify_condition_a(&f).unwrap();
    assert!(rep.passes, "{:?}", rep.failures);
    assert_eq!((rep.epsilon, rep.e), (Some(-1), Some(1)));
    assert_eq!(rep.closed_form_dual_agrees, Some(true));

    let f = build_family(&instance("f1-p3-r2-m2").unwrap()).unwrap();
    let rep = verify_condition_a(&f).unwrap();
    assert!(rep.passes, "{:?}", rep.failures);
    assert_eq!(rep.epsilon, Some(1));

    let f = build_family(&instance("f4-p3-m2-t3").unwrap()).unwrap();
    let rep = verify_condition_a(&f).unwrap();
    assert!(!rep.passes);
    assert!(!rep.constant_epsilon);
}

#[test]
fn condition_a_on_all_small_instances() {
    for inst in list() {
        if inst.name.starts_with("example") && inst.name != "example1" {
            continue;
        }
        let f = build_family(&instance(inst.name).unwrap()).unwrap();
        if f.domain().size() > 6561 {
            continue;
        }
        let spectral = verify_condition_a(&f).unwrap();
        assert_eq!(spectral.method, ConditionAMethod::Spectral);
        assert_eq!(
            spectral.passes, inst.condition_a,
            "{} {:?}",
            inst.name, spectral.failures
        );
        if !inst.condition_a {
            continue;
        }
        assert_eq!(
            spectral.closed_form_dual_agrees,
            Some(true),
            "{}",
            inst.name
        );
        let closed = verify_condition_a_with(
            &f,
            ConditionAOptions {
                method: MethodChoice::ClosedForm,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(closed.passes, "{} {:?}", inst.name, closed.failures);
        assert_eq!(closed.epsilon, spectral.epsilon, "{}", inst.name);
        assert_eq!(closed.e, spectral.e, "{}", inst.name);
        assert!(f.dual().unwrap().eval(0).is_zero());
    }
}

#[test]
fn homogeneity_degrees() {
    let cases = [
        ("example1", 2),
        ("f4-p3-m2-t2", 2),
        ("f1-p3-r2-m2", 2),
        ("f1-p3-r2-m2-e5", 6),
        ("f5-p3-r2-m2", 8),
        ("f5-p3-r2-m1", 2),
    ];
    for (name, l) in cases {
        let f = build_family(&instance(name).unwrap()).unwrap();
        assert_eq!(homogeneity_degree(&f), Some(l), "{name}");
    }
    // brute-force the defining identity for every scalar
    let f = build_family(&instance("f1-p3-r2-m2-e5").unwrap()).unwrap();
    let d = f.domain();
    let k = f.codomain();
    for c in k.nonzero_elements() {
        let cv = d.embed_scalar(2, c).unwrap();
        for x in 0..d.size() {
            assert_eq!(f.eval(d.scale(&cv, x)), k.mul(k.pow(c, 6), f.eval(x)));
        }
    }
}

#[test]
fn level_sets_for_function_and_dual() {
    let f = build_family(&instance("example1").unwrap()).unwrap();
    let ls = level_set_counts(&f, -1);
    assert_eq!(ls.counts[0], 1);
    assert!(ls.counts[1..].iter().all(|&c| c == 10));
    assert_eq!(ls.verdict, Some(true));
    assert_eq!(ls.counts.iter().sum::<u64>(), 81);
    assert_eq!(level_set_counts(f.dual().unwrap(), -1).counts, ls.counts);
    assert_eq!(level_set_counts(&f, 1).verdict, Some(false));
    for (name, f) in small_instances() {
        let Some(eps) = f.facts().unwrap().constant_epsilon() else {
            continue;
        };
        if name == "f4-p3-m2-t3" {
            continue;
        }
        assert_eq!(level_set_counts(&f, eps).verdict, Some(true), "{name}");
        assert_eq!(
            level_set_counts(f.dual().unwrap(), eps).verdict,
            Some(true),
            "{name}"
        );
    }
}

#[test]
fn duals_of_components_dualize_back() {
    for (name, f) in small_instances() {
        if f.domain().size() > 729 {
            continue;
        }
        let c = component(&f, Elem::ONE).unwrap();
        assert!(dual_dual_check(&c).unwrap(), "{name}");
    }
}
