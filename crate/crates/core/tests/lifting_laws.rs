//! Algebraic laws of relation lifting, `Base` and `λ`, on random small
//! functors, relations and maps.

mod common;

use std::collections::BTreeSet;

use common::*;
use powerlocale_core::functor::{
    base, carrier, carrier_size, fmap_table, lift_relation, lift_relation_span_oracle, lifted_members, map_leaves, member, related,
    FunctorExpr, Relation, TValue,
};
use powerlocale_core::Config;
use proptest::prelude::*;

const MAX_CARRIER: u128 = 300;

fn functor() -> impl Strategy<Value = FunctorExpr> {
    let leaf = prop_oneof![Just(FunctorExpr::Id), Just(FunctorExpr::Pfin), (1usize..=2).prop_map(FunctorExpr::Const)];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| FunctorExpr::prod(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| FunctorExpr::coprod(l, r)),
            inner.clone().prop_map(|b| FunctorExpr::exp(b, 2)),
            (inner.clone(), inner).prop_map(|(o, i)| FunctorExpr::comp(o, i)),
        ]
    })
    .prop_filter("carrier too large", |t| carrier_size(t, 3).is_some_and(|n| n <= MAX_CARRIER))
}

fn relation(max: usize) -> impl Strategy<Value = Relation> {
    (1..=max, 1..=max)
        .prop_flat_map(|(nx, ny)| (Just(nx), Just(ny), prop::collection::vec(any::<bool>(), nx * ny)))
        .prop_map(|(nx, ny, bits)| Relation::new(nx, ny, (0..nx * ny).filter(|&k| bits[k]).map(|k| (k / ny, k % ny))).unwrap())
}

fn map(max: usize) -> impl Strategy<Value = (Vec<usize>, usize)> {
    (1..=max, 1..=max).prop_flat_map(|(nx, ny)| (prop::collection::vec(0..ny, nx), Just(ny)))
}

fn pairs_of(t: &FunctorExpr, r: &Relation) -> BTreeSet<(TValue, TValue)> {
    lift_relation(t, r).pairs(&Config::default()).unwrap().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_lifts_to_graph_of_the_image(t in functor(), (f, ny) in map(3)) {
        let r = Relation::graph(&f, ny).unwrap();
        let expected: BTreeSet<_> = values(&t, f.len()).into_iter().map(|v| { let w = fmap_table(&t, &v, &f).unwrap(); (v, w) }).collect();
        prop_assert_eq!(pairs_of(&t, &r), expected);
    }

    #[test]
    fn diagonal_lifts_to_diagonal(t in functor(), n in 0usize..=3) {
        let expected: BTreeSet<_> = values(&t, n).into_iter().map(|v| (v.clone(), v)).collect();
        prop_assert_eq!(pairs_of(&t, &Relation::diagonal(n)), expected);
    }

    #[test]
    fn lifting_commutes_with_converse(t in functor(), r in relation(3)) {
        let swapped: BTreeSet<_> = pairs_of(&t, &r).into_iter().map(|(a, b)| (b, a)).collect();
        prop_assert_eq!(pairs_of(&t, &r.converse()), swapped);
    }

    #[test]
    fn lifting_is_monotone(t in functor(), r in relation(3), extra in any::<(usize, usize)>()) {
        let (x, y) = (extra.0 % r.left(), extra.1 % r.right());
        let bigger = Relation::new(r.left(), r.right(), r.pairs().iter().copied().chain([(x, y)])).unwrap();
        prop_assert!(pairs_of(&t, &r).is_subset(&pairs_of(&t, &bigger)));
    }

    #[test]
    fn lifting_distributes_over_composition(t in functor(), r in relation(2), nz in 1usize..=2, bits in prop::collection::vec(any::<bool>(), 4)) {
        let s = Relation::new(r.right(), nz, (0..r.right() * nz).filter(|&k| bits[k]).map(|k| (k / nz, k % nz))).unwrap();
        let nzv = values(&t, nz).len();
        let lhs = lifted_matrix(&t, &r.then(&s));
        let rhs = compose(&lifted_matrix(&t, &r), &lifted_matrix(&t, &s), nzv);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lifting_commutes_with_restriction(t in functor(), r in relation(3), mx in any::<u8>(), my in any::<u8>()) {
        let xs: Vec<usize> = (0..r.left()).filter(|i| mx >> i & 1 == 1).collect();
        let ys: Vec<usize> = (0..r.right()).filter(|i| my >> i & 1 == 1).collect();
        let cfg = Config::default();
        let (tx, ty): (BTreeSet<_>, BTreeSet<_>) =
            (carrier(&t, &xs, &cfg).unwrap().into_iter().collect(), carrier(&t, &ys, &cfg).unwrap().into_iter().collect());
        let restricted = pairs_of(&t, &r.restrict(&xs, &ys));
        let expected: BTreeSet<_> = pairs_of(&t, &r).into_iter().filter(|(a, b)| tx.contains(a) && ty.contains(b)).collect();
        prop_assert_eq!(restricted, expected);
    }

    #[test]
    fn structural_lifting_matches_the_span_oracle(t in functor(), r in relation(2)) {
        match lift_relation_span_oracle(&t, &r, &Config::default()) {
            Ok(oracle) => prop_assert_eq!(pairs_of(&t, &r), oracle.into_iter().collect::<BTreeSet<_>>()),
            Err(e) => prop_assert!(e.is_cap()),
        }
    }

    #[test]
    fn base_is_natural(t in functor(), (f, _ny) in map(3)) {
        for v in values(&t, f.len()) {
            let image: BTreeSet<usize> = base(&t, &v).unwrap().into_iter().map(|x| f[x]).collect();
            prop_assert_eq!(base(&t, &fmap_table(&t, &v, &f).unwrap()).unwrap(), image);
        }
    }

    #[test]
    fn related_values_have_related_bases(t in functor(), r in relation(3)) {
        for (a, b) in pairs_of(&t, &r) {
            let (ba, bb) = (base(&t, &a).unwrap(), base(&t, &b).unwrap());
            prop_assert!(ba.iter().all(|&x| bb.iter().any(|&y| r.contains(x, y))));
            prop_assert!(bb.iter().all(|&y| ba.iter().any(|&x| r.contains(x, y))));
        }
    }

    #[test]
    fn carriers_are_inclusion_monotone(t in functor(), m in any::<u8>()) {
        let sub: Vec<usize> = (0..3).filter(|i| m >> i & 1 == 1).collect();
        let all: BTreeSet<_> = values(&t, 3).into_iter().collect();
        prop_assert!(carrier(&t, &sub, &Config::default()).unwrap().iter().all(|v| all.contains(v)));
    }
}

fn set_functor_values(t: &FunctorExpr, n: usize) -> Vec<TValue> {
    let subsets = carrier(&FunctorExpr::Pfin, &ground(n), &Config::default()).unwrap();
    powerlocale_core::functor::carrier_over(t, &subsets, &Config::default()).unwrap()
}

fn small_functor() -> impl Strategy<Value = FunctorExpr> {
    functor().prop_filter("T P X too large", |t| carrier_size(t, 4).is_some_and(|n| n <= 256))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lifted_members_match_a_full_filter(t in small_functor()) {
        let cfg = Config::default();
        let xs = values(&t, 2);
        for phi in set_functor_values(&t, 2) {
            let expected: Vec<TValue> = xs.iter().filter(|a| related(&t, a, &phi, &member)).cloned().collect();
            let mut got = lifted_members(&t, &phi, &cfg).unwrap();
            got.sort();
            let mut expected = expected;
            expected.sort();
            prop_assert_eq!(got, expected);
        }
    }

    #[test]
    fn lambda_commutes_with_direct_image(t in small_functor(), f in prop::collection::vec(0usize..2, 2)) {
        let cfg = Config::default();
        let tp = FunctorExpr::comp(t.clone(), FunctorExpr::Pfin);
        for phi in set_functor_values(&t, 2) {
            let lhs: BTreeSet<TValue> = lifted_members(&t, &fmap_table(&tp, &phi, &f).unwrap(), &cfg).unwrap().into_iter().collect();
            let rhs: BTreeSet<TValue> =
                lifted_members(&t, &phi, &cfg).unwrap().iter().map(|a| fmap_table(&t, a, &f).unwrap()).collect();
            prop_assert_eq!(lhs, rhs, "Φ = {}", phi);
        }
    }

    #[test]
    fn lambda_commutes_with_inverse_image(t in small_functor(), f in prop::collection::vec(0usize..2, 2)) {
        let cfg = Config::default();
        let xs = values(&t, 2);
        for psi in set_functor_values(&t, 2) {
            let pulled = map_leaves(&t, &psi, &mut |u| {
                Ok(TValue::atoms((0..2).filter(|&x| u.contains(&TValue::Atom(f[x])))))
            }).unwrap();
            let lhs: BTreeSet<TValue> = lifted_members(&t, &pulled, &cfg).unwrap().into_iter().collect();
            let lam: BTreeSet<TValue> = lifted_members(&t, &psi, &cfg).unwrap().into_iter().collect();
            let rhs: BTreeSet<TValue> = xs.iter().filter(|a| lam.contains(&fmap_table(&t, a, &f).unwrap())).cloned().collect();
            prop_assert_eq!(lhs, rhs, "Ψ = {}", psi);
        }
    }
}

#[test]
fn lifted_order_is_a_preorder_on_fixture_frames() {
    for text in FUNCTORS {
        let t = fx(text);
        for l in frames() {
            let r =
                Relation::new(l.len(), l.len(), (0..l.len()).flat_map(|a| (0..l.len()).map(move |b| (a, b))).filter(|&(a, b)| l.leq(a, b)))
                    .unwrap();
            if carrier_size(&t, l.len() as u128).is_none_or(|n| n > 600) {
                continue;
            }
            let m = lifted_matrix(&t, &r);
            let n = m.len();
            assert!((0..n).all(|i| m[i].contains(i)), "{text}");
            assert_eq!(compose(&m, &m, n), m, "{text}");
        }
    }
}
