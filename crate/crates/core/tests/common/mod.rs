#![allow(dead_code)]

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use powerlocale_core::functor::{carrier, lift_relation, FunctorExpr, Relation, TValue};
use powerlocale_core::lattice::FiniteFrame;
use powerlocale_core::Config;
use rand::Rng;

pub const FUNCTORS: [&str; 5] = ["Id", "P", "Id*Id", "C[2]+Id", "P.(Id*Id)"];

pub fn fx(text: &str) -> FunctorExpr {
    FunctorExpr::parse(text).unwrap()
}

pub fn frames() -> Vec<Arc<FiniteFrame>> {
    vec![Arc::new(FiniteFrame::two()), Arc::new(FiniteFrame::c3()), Arc::new(FiniteFrame::b2())]
}

pub fn ground(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub fn values(t: &FunctorExpr, n: usize) -> Vec<TValue> {
    carrier(t, &ground(n), &Config::default()).unwrap()
}

/// Every relation between `{0..nx-1}` and `{0..ny-1}`.
pub fn all_relations(nx: usize, ny: usize) -> Vec<Relation> {
    let cells: Vec<(usize, usize)> = (0..nx).flat_map(|x| (0..ny).map(move |y| (x, y))).collect();
    (0u32..1 << cells.len())
        .map(|m| Relation::new(nx, ny, cells.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, c)| *c)).unwrap())
        .collect()
}

pub fn random_relation(nx: usize, ny: usize, rng: &mut impl Rng) -> Relation {
    let pairs: Vec<(usize, usize)> = (0..nx).flat_map(|x| (0..ny).map(move |y| (x, y))).collect();
    Relation::new(nx, ny, pairs.into_iter().filter(|_| rng.gen_bool(0.5))).unwrap()
}

pub fn all_maps(nx: usize, ny: usize) -> Vec<Vec<usize>> {
    (0..ny.pow(nx as u32)).map(|k| (0..nx).map(|d| k / ny.pow(d as u32) % ny).collect()).collect()
}

/// Row `i` lists the `j` with `xs[i] T̄R ys[j]`, over the full carriers.
pub fn lifted_matrix(t: &FunctorExpr, r: &Relation) -> Vec<FixedBitSet> {
    let (xs, ys) = (values(t, r.left()), values(t, r.right()));
    lift_relation(t, r).matrix(&xs, &ys, &Config::default())
}

pub fn compose(a: &[FixedBitSet], b: &[FixedBitSet], width: usize) -> Vec<FixedBitSet> {
    a.iter()
        .map(|row| {
            let mut out = FixedBitSet::with_capacity(width);
            for k in row.ones() {
                out.union_with(&b[k]);
            }
            out
        })
        .collect()
}

pub fn transpose(a: &[FixedBitSet], width: usize) -> Vec<FixedBitSet> {
    let mut out = vec![FixedBitSet::with_capacity(a.len()); width];
    for (i, row) in a.iter().enumerate() {
        for j in row.ones() {
            out[j].insert(i);
        }
    }
    out
}

/// Decides a multiset coupling by enumerating every integer matrix with the
/// given row sums, supported on `r`, and comparing column sums.
pub fn coupling_by_enumeration(mu: &[u32], nu: &[u32], r: &Relation) -> bool {
    fn rows(i: usize, mu: &[u32], nu: &[u32], r: &Relation, cols: &mut Vec<u32>) -> bool {
        if i == mu.len() {
            return cols.iter().zip(nu).all(|(c, n)| c == n);
        }
        fn split(i: usize, j: usize, left: u32, mu: &[u32], nu: &[u32], r: &Relation, cols: &mut Vec<u32>) -> bool {
            if j == nu.len() {
                return left == 0 && rows(i + 1, mu, nu, r, cols);
            }
            let max = if r.contains(i, j) { left } else { 0 };
            for k in 0..=max {
                cols[j] += k;
                let ok = cols[j] <= nu[j] && split(i, j + 1, left - k, mu, nu, r, cols);
                cols[j] -= k;
                if ok {
                    return true;
                }
            }
            false
        }
        split(i, 0, mu[i], mu, nu, r, cols)
    }
    rows(0, mu, nu, r, &mut vec![0; nu.len()])
}

/// Multiplicity vectors over `n` atoms with total at most `mass`.
pub fn multisets(n: usize, mass: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=mass - used).map(move |k| [v.clone(), vec![k]].concat())
            })
            .collect();
    }
    out
}

pub fn mset_value(m: &[u32]) -> TValue {
    TValue::mset(m.iter().enumerate().filter(|(_, &k)| k > 0).map(|(a, &k)| (TValue::Atom(a), k)))
}

/// Preserves 0, 1, binary meets and binary joins, checked pointwise.
pub fn is_frame_hom(src: &FiniteFrame, tgt: &FiniteFrame, map: &[usize]) -> bool {
    let n = src.len();
    map[src.bottom()] == tgt.bottom()
        && map[src.top()] == tgt.top()
        && (0..n)
            .all(|a| (0..n).all(|b| map[src.meet2(a, b)] == tgt.meet2(map[a], map[b]) && map[src.join2(a, b)] == tgt.join2(map[a], map[b])))
}
