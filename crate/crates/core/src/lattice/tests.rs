use std::sync::Arc;

use super::*;
use crate::{Config, Error};

fn fixtures() -> Vec<FiniteFrame> {
    vec![
        FiniteFrame::two(),
        FiniteFrame::c3(),
        FiniteFrame::b2(),
        FiniteFrame::chain(4),
        FiniteFrame::product(&FiniteFrame::c3(), &FiniteFrame::two()),
    ]
}

#[test]
fn build_examples() {
    let cfg = Config::default();
    let two = FiniteFrame::build(&["0", "1"], &[("0", "1")], &cfg).unwrap();
    assert_eq!(two.len(), 2);
    assert_eq!((two.bottom(), two.top()), (0, 1));
    let b2 = FiniteFrame::b2();
    assert!(b2.is_boolean());
    let fork = FiniteFrame::build(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1"), ("a", "c")], &cfg);
    assert_eq!(fork, Err(Error::UnknownElement("c".into())));
    let no_meet = FiniteFrame::build(&["a", "b", "1"], &[("a", "1"), ("b", "1")], &cfg);
    assert_eq!(no_meet, Err(Error::NoBottom));
    let bowtie = FiniteFrame::build(
        &["0", "a", "b", "c", "d", "1"],
        &[("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")],
        &cfg,
    );
    assert!(matches!(bowtie, Err(Error::NotALattice { .. })));
    let cycle = FiniteFrame::build(&["0", "a", "1"], &[("0", "a"), ("a", "0"), ("a", "1")], &cfg);
    assert!(matches!(cycle, Err(Error::NotAPoset(_))));
    let m3 =
        FiniteFrame::build(&["0", "a", "b", "c", "1"], &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")], &cfg);
    assert!(matches!(m3, Err(Error::NotDistributive { .. })));
}

#[test]
fn canonical_order_puts_rank_first() {
    let f = FiniteFrame::build(&["1", "b", "a", "0"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], &Config::default()).unwrap();
    assert_eq!(f.names(), &["0", "b", "a", "1"]);
}

#[test]
fn join_meet_examples() {
    let two = FiniteFrame::two();
    assert_eq!(two.join([]), two.bottom());
    let b2 = FiniteFrame::b2();
    assert_eq!(b2.meet_named(&["a", "b"]).unwrap(), b2.bottom());
    assert_eq!(b2.meet([]), b2.top());
    let c3 = FiniteFrame::c3();
    assert_eq!(c3.join_named(&["m", "1"]).unwrap(), c3.top());
    assert_eq!(c3.join_named(&["x"]), Err(Error::UnknownElement("x".into())));
}

#[test]
fn negation_and_well_inside_examples() {
    let b2 = FiniteFrame::b2();
    let c3 = FiniteFrame::c3();
    let [a, b] = [b2.elem("a").unwrap(), b2.elem("b").unwrap()];
    assert_eq!(b2.negation(a), b);
    let m = c3.elem("m").unwrap();
    assert_eq!(c3.negation(m), c3.bottom());
    for f in fixtures() {
        assert_eq!(f.negation(f.bottom()), f.top());
        assert!((0..f.len()).all(|x| f.well_inside(f.bottom(), x)));
    }
    assert!(b2.well_inside(a, a));
    assert!(!c3.well_inside(m, m));
}

#[test]
fn clopens_and_classification_examples() {
    let c3 = FiniteFrame::c3();
    assert_eq!(c3.clopens(), vec![c3.bottom(), c3.top()]);
    assert_eq!(FiniteFrame::b2().clopens(), vec![0, 1, 2, 3]);
    assert_eq!(FiniteFrame::two().clopens(), vec![0, 1]);
    let yes = Classification { regular: true, zero_dimensional: true, compact: true };
    assert_eq!(FiniteFrame::b2().classify(), yes);
    assert_eq!(FiniteFrame::two().classify(), yes);
    assert_eq!(c3.classify(), Classification { regular: false, zero_dimensional: false, compact: true });
}

#[test]
fn down_clopen_examples() {
    let b2 = FiniteFrame::b2();
    let a = b2.elem("a").unwrap();
    assert_eq!(b2.down_clopen(&[a]), vec![b2.bottom(), a]);
    let c3 = FiniteFrame::c3();
    assert_eq!(c3.down_clopen(&[c3.elem("m").unwrap()]), vec![c3.bottom()]);
    assert!(c3.down_clopen(&[]).is_empty());
}

#[test]
fn hom_examples() {
    for f in fixtures() {
        let f = Arc::new(f);
        assert!(FrameHom::identity(f.clone()).is_frame_hom());
        assert!(FrameHom::initial(f).is_frame_hom());
    }
    let c3 = Arc::new(FiniteFrame::c3());
    let two = Arc::new(FiniteFrame::two());
    let h = FrameHom::new(c3.clone(), two.clone(), vec![0, 1, 1]).unwrap();
    assert!(check_frame_hom(&h).is_ok());
    let bad = FrameHom::new(two.clone(), c3.clone(), vec![0, 1]).unwrap();
    assert_eq!(bad.check().unwrap_err().law, "top");
    let b2 = Arc::new(FiniteFrame::b2());
    let not_meet = FrameHom::new(b2.clone(), two, vec![0, 1, 1, 1]).unwrap();
    assert_eq!(not_meet.check().unwrap_err().law, "meet");
}

#[test]
fn iso_examples() {
    let two = Arc::new(FiniteFrame::two());
    assert_eq!(find_iso(&two, &two).unwrap().map(), &[0, 1]);
    let c3 = Arc::new(FiniteFrame::c3());
    let b2 = Arc::new(FiniteFrame::b2());
    assert!(find_iso(&c3, &b2).is_none());
    let prod = Arc::new(FiniteFrame::product(&two, &two));
    let iso = find_iso(&b2, &prod).unwrap();
    assert!(iso.is_bijective() && iso.is_frame_hom());
    let c4 = Arc::new(FiniteFrame::chain(4));
    assert!(find_iso(&c4, &b2).is_none());
}

#[test]
fn all_homs_enumerates_exactly_the_homs() {
    for l in fixtures().into_iter().take(3) {
        for m in fixtures().into_iter().take(3) {
            let homs = l.all_homs_to(&m);
            let (l, m) = (Arc::new(l.clone()), Arc::new(m));
            let mut brute = Vec::new();
            let n = l.len();
            let total = m.len().pow(n as u32);
            for code in 0..total {
                let map: Vec<usize> = (0..n).map(|i| code / m.len().pow(i as u32) % m.len()).collect();
                if FrameHom::new(l.clone(), m.clone(), map.clone()).unwrap().is_frame_hom() {
                    brute.push(map);
                }
            }
            brute.sort();
            assert_eq!(homs, brute);
        }
    }
}

#[test]
fn well_inside_facts_on_fixtures() {
    for f in fixtures() {
        let n = f.len();
        for a in 0..n {
            // a ⋖ a iff a is complemented
            let complemented = (0..n).any(|c| f.meet2(a, c) == f.bottom() && f.join2(a, c) == f.top());
            assert_eq!(f.is_clopen(a), complemented);
            for b in 0..n {
                if f.well_inside(a, b) {
                    assert!(f.leq(a, b));
                    for x in f.down_set(a).ones() {
                        for y in f.up_set(b).ones() {
                            assert!(f.well_inside(x, y));
                        }
                    }
                }
            }
        }
        // joins and finite meets of elements well inside y
        for y in 0..n {
            let inside: Vec<usize> = (0..n).filter(|&x| f.well_inside(x, y)).collect();
            for s in subsets_up_to(&inside, 3) {
                assert!(f.well_inside(f.join(s.iter().copied()), y));
            }
            let outside: Vec<usize> = (0..n).filter(|&x| f.well_inside(y, x)).collect();
            for s in subsets_up_to(&outside, 3) {
                assert!(f.well_inside(y, f.meet(s.iter().copied())));
            }
        }
        let c = f.clopens();
        assert!(c.contains(&f.bottom()) && c.contains(&f.top()));
        for &a in &c {
            for &b in &c {
                assert!(c.contains(&f.join2(a, b)) && c.contains(&f.meet2(a, b)));
            }
        }
        let k = f.classify();
        assert_eq!(k.regular, f.is_boolean());
        assert_eq!(k.zero_dimensional, f.is_boolean());
    }
}

fn subsets_up_to(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &x in items {
        let more: Vec<Vec<usize>> = out.iter().filter(|s| s.len() < k).map(|s| [s.clone(), vec![x]].concat()).collect();
        out.extend(more);
    }
    out
}

#[test]
fn json_round_trip_and_dot() {
    let c3 = FiniteFrame::c3();
    let back = FiniteFrame::from_json(&c3.to_json(), &Config::default()).unwrap();
    assert_eq!(back, c3);
    let dot = c3.to_dot("c3");
    assert_eq!(dot.matches("->").count(), 2);
}
