use proptest::prelude::*;

use super::*;
use crate::{Config, Error};

use TValue::{Atom, Const};

fn f(s: &str) -> FunctorExpr {
    parse_functor(s).unwrap()
}

fn s(xs: &[usize]) -> TValue {
    TValue::atoms(xs.iter().copied())
}

#[test]
fn parse_examples() {
    assert_eq!(f("P"), FunctorExpr::Pfin);
    assert_eq!(f("Id*Id"), FunctorExpr::prod(FunctorExpr::Id, FunctorExpr::Id));
    assert_eq!(f("P∘(C[2]+Id)"), FunctorExpr::comp(FunctorExpr::Pfin, FunctorExpr::coprod(FunctorExpr::Const(2), FunctorExpr::Id)));
    assert_eq!(f("P.(C[2]+Id)"), f("P∘(C[2]+Id)"));
    assert_eq!(
        f("Id+Id*P^2"),
        FunctorExpr::coprod(FunctorExpr::Id, FunctorExpr::prod(FunctorExpr::Id, FunctorExpr::exp(FunctorExpr::Pfin, 2)))
    );
    assert_eq!(f("Id*Id*Id"), FunctorExpr::prod(FunctorExpr::prod(FunctorExpr::Id, FunctorExpr::Id), FunctorExpr::Id));
    assert!(matches!(parse_functor("P∘"), Err(Error::Syntax { .. })));
    assert!(matches!(parse_functor("C[x]"), Err(Error::Syntax { pos: 2, .. })));
    assert!(matches!(parse_functor("(Id"), Err(Error::Syntax { .. })));
    assert!(!f("P∘M").finite_to_finite());
}

fn functor_strategy() -> impl Strategy<Value = FunctorExpr> {
    let leaf =
        prop_oneof![Just(FunctorExpr::Id), Just(FunctorExpr::Pfin), Just(FunctorExpr::Mfin), (0usize..4).prop_map(FunctorExpr::Const)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| FunctorExpr::prod(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| FunctorExpr::coprod(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| FunctorExpr::comp(l, r)),
            (inner, 0usize..4).prop_map(|(b, d)| FunctorExpr::exp(b, d)),
        ]
    })
}

proptest! {
    #[test]
    fn printer_round_trips(t in functor_strategy()) {
        prop_assert_eq!(parse_functor(&t.to_string()).unwrap(), t.clone());
        prop_assert_eq!(parse_functor(&t.to_ascii()).unwrap(), t);
    }
}

#[test]
fn carrier_examples() {
    let cfg = Config::default();
    assert_eq!(carrier(&FunctorExpr::Pfin, &[0, 1], &cfg).unwrap(), vec![s(&[]), s(&[0]), s(&[1]), s(&[0, 1])]);
    assert_eq!(carrier(&f("Id*Id"), &[0, 1], &cfg).unwrap().len(), 4);
    let c = carrier(&f("C[2]+Id"), &[0], &cfg).unwrap();
    assert_eq!(c, vec![TValue::inl(Const(0)), TValue::inl(Const(1)), TValue::inr(Atom(0))]);
    assert!(matches!(carrier(&FunctorExpr::Mfin, &[0], &cfg), Err(Error::NotFiniteToFinite(_))));
    assert!(matches!(carrier(&f("P∘P"), &[0, 1, 2, 3, 4], &cfg), Err(Error::SizeCapExceeded { .. })));
}

#[test]
fn carrier_sizes_match_arithmetic() {
    let cfg = Config::default();
    for text in ["Id", "P", "Id*Id", "C[2]+Id", "P∘(Id*Id)", "(Id+C[1])^3", "P∘P", "C[3]∘P", "Id^0"] {
        let t = f(text);
        for n in 0..=3usize {
            let xs: Vec<usize> = (0..n).collect();
            let c = carrier(&t, &xs, &cfg).unwrap();
            assert_eq!(c.len() as u128, carrier_size(&t, n as u128).unwrap(), "{text} over {n}");
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            assert!(c.iter().all(|v| well_formed(&t, v)));
            // standardness: T X' ⊆ T X for X' ⊆ X
            if n > 0 {
                let smaller = carrier(&t, &xs[1..], &cfg).unwrap();
                assert!(smaller.iter().all(|v| c.binary_search(v).is_ok()));
            }
        }
    }
}

#[test]
fn fmap_examples() {
    let collapse = |_: usize| Some(0);
    assert_eq!(fmap(&FunctorExpr::Pfin, &s(&[0, 1]), &collapse).unwrap(), s(&[0]));
    let swap = |x: usize| Some(1 - x);
    assert_eq!(fmap(&f("Id*Id"), &TValue::pair(Atom(0), Atom(1)), &swap).unwrap(), TValue::pair(Atom(1), Atom(0)));
    let mu = TValue::mset([(Atom(0), 2), (Atom(1), 3)]);
    assert_eq!(fmap(&FunctorExpr::Mfin, &mu, &collapse).unwrap(), TValue::mset([(Atom(0), 5)]));
    assert_eq!(fmap(&FunctorExpr::Pfin, &s(&[0, 7]), &|x| (x < 2).then_some(x)), Err(Error::AtomOutsideDomain(7)));
    assert!(matches!(fmap(&FunctorExpr::Pfin, &Atom(0), &collapse), Err(Error::ShapeMismatch { .. })));
}

#[test]
fn fmap_functor_laws() {
    let cfg = Config::default();
    for text in ["Id", "P", "Id*Id", "C[2]+Id", "P∘(Id*Id)", "Id^2+P"] {
        let t = f(text);
        for v in carrier(&t, &[0, 1, 2], &cfg).unwrap() {
            assert_eq!(fmap(&t, &v, &Some).unwrap(), v);
            for g in [[1usize, 1, 0], [2, 0, 1], [0, 0, 0]] {
                for h in [[1usize, 2, 2], [0, 1, 0]] {
                    let two_steps = fmap_table(&t, &fmap_table(&t, &v, &g).unwrap(), &h).unwrap();
                    let composed: Vec<usize> = g.iter().map(|&x| h[x]).collect();
                    assert_eq!(two_steps, fmap_table(&t, &v, &composed).unwrap());
                }
            }
        }
    }
}

#[test]
fn lift_examples() {
    // R = {(x,u)} with x = 0 ∈ {x, y}, u = 0 ∈ {u}
    let r = Relation::new(2, 1, [(0, 0)]).unwrap();
    let p = lift_relation(&FunctorExpr::Pfin, &r);
    assert!(p.contains(&s(&[0]), &s(&[0])).unwrap());
    assert!(!p.contains(&s(&[]), &s(&[0])).unwrap());
    assert_eq!(p.pairs(&Config::default()).unwrap(), vec![(s(&[]), s(&[])), (s(&[0]), s(&[0]))]);
    let c = lift_relation(&FunctorExpr::Const(3), &Relation::total(2, 2));
    assert!(c.contains(&Const(1), &Const(1)).unwrap());
    assert!(!c.contains(&Const(1), &Const(2)).unwrap());
    let leq = Relation::new(3, 3, [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]).unwrap();
    let b = lift_relation(&f("Id*Id"), &leq);
    for (x, y, x2, y2) in [(0, 2, 1, 2), (1, 1, 0, 2), (2, 0, 2, 1)] {
        let expected = leq.contains(x, x2) && leq.contains(y, y2);
        let got = b.contains(&TValue::pair(Atom(x), Atom(y)), &TValue::pair(Atom(x2), Atom(y2))).unwrap();
        assert_eq!(got, expected);
    }
    assert!(matches!(p.contains(&Atom(0), &s(&[0])), Err(Error::ShapeMismatch { .. })));
}

#[test]
fn span_oracle_examples() {
    let cfg = Config::default();
    let r = Relation::new(2, 3, [(0, 1), (1, 1), (1, 2)]).unwrap();
    let id = lift_relation_span_oracle(&FunctorExpr::Id, &r, &cfg).unwrap();
    let expected: Vec<_> = r.pairs().iter().map(|&(x, y)| (Atom(x), Atom(y))).collect();
    assert_eq!(id, expected);
    let t = f("C[2]+Id");
    let diag = lift_relation_span_oracle(&t, &Relation::diagonal(2), &cfg).unwrap();
    let tx = carrier(&t, &[0, 1], &cfg).unwrap();
    assert_eq!(diag, tx.iter().map(|v| (v.clone(), v.clone())).collect::<Vec<_>>());
    for text in ["P", "Id*Id", "P∘(Id*Id)", "Id^2+C[1]"] {
        let t = f(text);
        assert_eq!(lift_relation(&t, &r).pairs(&cfg).unwrap(), lift_relation_span_oracle(&t, &r, &cfg).unwrap(), "{text}");
    }
}

#[test]
fn witnesses_project_back() {
    let cfg = Config::default();
    let r = Relation::new(3, 2, [(0, 0), (1, 0), (2, 1)]).unwrap();
    for text in ["P", "Id*Id", "P∘(Id*Id)", "C[1]+P"] {
        let t = f(text);
        let lifted = lift_relation(&t, &r);
        for (a, b) in lifted.pairs(&cfg).unwrap() {
            let w = lifted.witness(&a, &b).unwrap().unwrap();
            assert_eq!(project(&t, &w, true).unwrap(), a);
            assert_eq!(project(&t, &w, false).unwrap(), b);
        }
    }
}

#[test]
fn multiset_examples() {
    let d = Relation::diagonal(2);
    let mu = TValue::mset([(Atom(0), 2), (Atom(1), 1)]);
    let c = multiset_lift(&d, &mu, &mu).unwrap().unwrap();
    assert_eq!(c, vec![((0, 0), 2), ((1, 1), 1)]);
    let heavier = TValue::mset([(Atom(0), 3), (Atom(1), 1)]);
    assert_eq!(multiset_lift(&d, &mu, &heavier).unwrap(), None);
    let r = Relation::new(2, 1, [(0, 0), (1, 0)]).unwrap();
    let split = TValue::mset([(Atom(0), 1), (Atom(1), 1)]);
    let merged = TValue::mset([(Atom(0), 2)]);
    assert_eq!(multiset_lift(&r, &split, &merged).unwrap().unwrap(), vec![((0, 0), 1), ((1, 0), 1)]);
    let m = lift_relation(&FunctorExpr::Mfin, &r);
    assert!(m.contains(&split, &merged).unwrap());
    assert!(matches!(m.pairs(&Config::default()), Err(Error::NotFiniteToFinite(_))));
}

#[test]
fn base_examples() {
    let cfg = Config::default();
    assert_eq!(base(&FunctorExpr::Pfin, &s(&[0, 1])).unwrap().into_iter().collect::<Vec<_>>(), vec![0, 1]);
    assert!(base(&FunctorExpr::Const(2), &Const(0)).unwrap().is_empty());
    let t = f("Id*Id");
    let v = TValue::pair(Atom(0), Atom(0));
    assert_eq!(base(&t, &v).unwrap().into_iter().collect::<Vec<_>>(), vec![0]);
    // minimality: v lies in T{0} but not in T{1}
    assert!(carrier(&t, &[0], &cfg).unwrap().contains(&v));
    assert!(!carrier(&t, &[1], &cfg).unwrap().contains(&v));
}

#[test]
fn lifted_members_examples() {
    let cfg = Config::default();
    let p = FunctorExpr::Pfin;
    let phi = TValue::set([s(&[0]), s(&[0, 1])]);
    assert_eq!(lifted_members(&p, &phi, &cfg).unwrap(), vec![s(&[0]), s(&[0, 1])]);
    let with_empty = TValue::set([s(&[]), s(&[0])]);
    assert!(lifted_members(&p, &with_empty, &cfg).unwrap().is_empty());
    let singletons = TValue::set([s(&[0]), s(&[1])]);
    assert_eq!(lifted_members(&p, &singletons, &cfg).unwrap(), vec![s(&[0, 1])]);
    let t = f("Id*Id");
    let phi = TValue::pair(s(&[2]), s(&[0]));
    assert_eq!(lifted_members(&t, &phi, &cfg).unwrap(), vec![TValue::pair(Atom(2), Atom(0))]);
}

#[test]
fn srd_examples() {
    let cfg = Config::default();
    for text in ["Id", "P", "Id*Id", "C[2]+Id"] {
        let t = f(text);
        let expected = carrier_over(&t, &[s(&[])], &cfg).unwrap();
        assert_eq!(slim_redistributions(&t, &[], &cfg).unwrap(), expected);
    }
    let p = FunctorExpr::Pfin;
    let srd = slim_redistributions(&p, &[s(&[0]), s(&[0, 1])], &cfg).unwrap();
    assert!(srd.contains(&TValue::set([s(&[0, 1])])));
    assert!(srd.contains(&TValue::set([s(&[0]), s(&[0, 1])])));
    for psi in &srd {
        let parts = psi.as_set().unwrap();
        let union: std::collections::BTreeSet<_> = parts.iter().flat_map(|x| x.as_set().unwrap().iter().cloned()).collect();
        assert_eq!(union.len(), 2);
        assert!(parts.iter().all(|x| x.contains(&Atom(0))));
    }
    let id = slim_redistributions(&FunctorExpr::Id, &[Atom(0), Atom(1)], &cfg).unwrap();
    assert_eq!(id, vec![s(&[0, 1])]);
}

#[test]
fn canonical_order_sorts_sets_by_size() {
    let mut v = vec![s(&[0, 1]), s(&[1]), s(&[]), s(&[0])];
    v.sort();
    assert_eq!(v, vec![s(&[]), s(&[0]), s(&[1]), s(&[0, 1])]);
    assert_eq!(TValue::set([Atom(2), Atom(0), Atom(2)]), TValue::Set(vec![Atom(0), Atom(2)]));
    assert_eq!(s(&[0, 1]).to_string(), "{0,1}");
    assert_eq!(s(&[]).to_string(), "∅");
}

#[test]
fn json_encoding_mirrors_tree() {
    let v = TValue::pair(Atom(0), s(&[1]));
    let j = serde_json::to_string(&v).unwrap();
    assert_eq!(j, r#"{"pair":[{"atom":0},{"set":[{"atom":1}]}]}"#);
    assert_eq!(serde_json::from_str::<TValue>(&j).unwrap(), v);
}

#[test]
fn srd_agrees_with_enumeration() {
    let cfg = Config::default();
    for (text, limit) in [("Id", 60), ("P", 60), ("Id*Id", 60), ("C[2]+Id", 60), ("Id^2", 60), ("(Id+Id)*C[1]", 60), ("P.(Id*Id)", 6)] {
        let t = f(text);
        let xs = carrier(&t, &[0, 1], &cfg).unwrap();
        let mut gammas: Vec<Vec<TValue>> = vec![vec![]];
        gammas.extend(xs.iter().map(|x| vec![x.clone()]));
        for i in 0..xs.len() {
            gammas.extend((i + 1..xs.len()).map(|j| vec![xs[i].clone(), xs[j].clone()]));
        }
        for g in gammas.iter().step_by(gammas.len() / limit + 1) {
            let fast = slim_redistributions(&t, g, &cfg);
            let slow = slim_redistributions_by_enumeration(&t, g, &cfg);
            match (fast, slow) {
                (Ok(a), Ok(b)) => assert_eq!(a, b, "{text} {g:?}"),
                (_, Err(e)) if e.is_cap() => {}
                (a, b) => panic!("{text} {g:?}: {a:?} vs {b:?}"),
            }
        }
    }
}
