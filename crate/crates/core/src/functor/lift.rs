use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::multiset::coupling;
use super::ops::{carrier, carrier_over, map_leaves, shape_error, well_formed};
use super::{FunctorExpr, TValue};
use crate::{Config, Error, Result};

use FunctorExpr::*;

/// A relation between ground sets `{0..left-1}` and `{0..right-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    left: usize,
    right: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(left: usize, right: usize, pairs: I) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= left || y >= right) {
            return Err(Error::Input(format!("pair ({x},{y}) outside {left}×{right}")));
        }
        Ok(Relation { left, right, pairs })
    }

    pub fn diagonal(n: usize) -> Self {
        Relation { left: n, right: n, pairs: (0..n).map(|x| (x, x)).collect() }
    }

    pub fn total(left: usize, right: usize) -> Self {
        Relation { left, right, pairs: (0..left).flat_map(|x| (0..right).map(move |y| (x, y))).collect() }
    }

    /// The graph of `f: {0..f.len()-1} → {0..right-1}`.
    pub fn graph(f: &[usize], right: usize) -> Result<Self> {
        Relation::new(f.len(), right, f.iter().copied().enumerate())
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn converse(&self) -> Self {
        Relation { left: self.right, right: self.left, pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect() }
    }

    /// `self ; other` (first `self`, then `other`).
    pub fn then(&self, other: &Relation) -> Self {
        let pairs = self.pairs.iter().flat_map(|&(x, y)| other.pairs.range((y, 0)..(y + 1, 0)).map(move |&(_, z)| (x, z))).collect();
        Relation { left: self.left, right: other.right, pairs }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Restriction to `xs × ys`, keeping the ambient sizes.
    pub fn restrict(&self, xs: &[usize], ys: &[usize]) -> Self {
        let pairs = self.pairs.iter().copied().filter(|(x, y)| xs.contains(x) && ys.contains(y)).collect();
        Relation { left: self.left, right: self.right, pairs }
    }

    pub(crate) fn as_leaf_relation(&self) -> impl Fn(&TValue, &TValue) -> bool + Sync + '_ {
        move |a, b| matches!((a, b), (TValue::Atom(x), TValue::Atom(y)) if self.contains(*x, *y))
    }
}

/// Decides `(a, b) ∈ T̄R` for a relation `r` between leaves. Values of the
/// wrong shape are simply unrelated.
pub fn related(t: &FunctorExpr, a: &TValue, b: &TValue, r: &dyn Fn(&TValue, &TValue) -> bool) -> bool {
    match (t, a, b) {
        (Id, x, y) => r(x, y),
        (Const(_), TValue::Const(x), TValue::Const(y)) => x == y,
        (Pfin, TValue::Set(xs), TValue::Set(ys)) => {
            xs.iter().all(|x| ys.iter().any(|y| r(x, y))) && ys.iter().all(|y| xs.iter().any(|x| r(x, y)))
        }
        (Mfin, TValue::Mset(xs), TValue::Mset(ys)) => coupling(xs, ys, r).is_some(),
        (Prod(l, rr), TValue::Pair(a1, a2), TValue::Pair(b1, b2)) => related(l, a1, b1, r) && related(rr, a2, b2, r),
        (Coprod(l, _), TValue::Inl(x), TValue::Inl(y)) => related(l, x, y, r),
        (Coprod(_, rr), TValue::Inr(x), TValue::Inr(y)) => related(rr, x, y, r),
        (Exp(body, _), TValue::Fun(xs), TValue::Fun(ys)) => xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| related(body, x, y, r)),
        (Comp(o, i), _, _) => related(o, a, b, &|x, y| related(i, x, y, r)),
        _ => false,
    }
}

/// A span witness for `(a, b) ∈ T̄R`: a value `δ` over leaves produced by
/// `w` (typically pairs) with `T π(δ) = a` and `T π'(δ) = b`. The leaf
/// callback returns `None` for unrelated leaves.
pub fn lift_witness(t: &FunctorExpr, a: &TValue, b: &TValue, w: &dyn Fn(&TValue, &TValue) -> Option<TValue>) -> Option<TValue> {
    match (t, a, b) {
        (Id, x, y) => w(x, y),
        (Const(_), TValue::Const(x), TValue::Const(y)) => (x == y).then(|| a.clone()),
        (Pfin, TValue::Set(xs), TValue::Set(ys)) => {
            let links: Vec<(usize, usize, TValue)> = xs
                .iter()
                .enumerate()
                .flat_map(|(i, x)| ys.iter().enumerate().filter_map(move |(j, y)| w(x, y).map(|d| (i, j, d))))
                .collect();
            let left_total = (0..xs.len()).all(|i| links.iter().any(|l| l.0 == i));
            let right_total = (0..ys.len()).all(|j| links.iter().any(|l| l.1 == j));
            (left_total && right_total).then(|| TValue::set(links.into_iter().map(|l| l.2)))
        }
        (Mfin, TValue::Mset(xs), TValue::Mset(ys)) => {
            let rho = coupling(xs, ys, &|x, y| w(x, y).is_some())?;
            Some(TValue::mset(rho.into_iter().map(|(i, j, m)| (w(&xs[i].0, &ys[j].0).expect("edge in R"), m))))
        }
        (Prod(l, r), TValue::Pair(a1, a2), TValue::Pair(b1, b2)) => {
            Some(TValue::pair(lift_witness(l, a1, b1, w)?, lift_witness(r, a2, b2, w)?))
        }
        (Coprod(l, _), TValue::Inl(x), TValue::Inl(y)) => Some(TValue::inl(lift_witness(l, x, y, w)?)),
        (Coprod(_, r), TValue::Inr(x), TValue::Inr(y)) => Some(TValue::inr(lift_witness(r, x, y, w)?)),
        (Exp(body, _), TValue::Fun(xs), TValue::Fun(ys)) if xs.len() == ys.len() => {
            Some(TValue::Fun(xs.iter().zip(ys).map(|(x, y)| lift_witness(body, x, y, w)).collect::<Option<Vec<_>>>()?))
        }
        (Comp(o, i), _, _) => lift_witness(o, a, b, &|x, y| lift_witness(i, x, y, w)),
        _ => None,
    }
}

/// Projects a value over pair leaves to its first (`left = true`) or second
/// components.
pub fn project(t: &FunctorExpr, delta: &TValue, left: bool) -> Result<TValue> {
    map_leaves(t, delta, &mut |leaf| match leaf {
        TValue::Pair(x, y) => Ok(if left { (**x).clone() } else { (**y).clone() }),
        other => Err(shape_error(&Id, other)),
    })
}

/// `T̄R` for a ground relation `R`, with structural membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedRelation {
    functor: FunctorExpr,
    ground: Relation,
}

pub fn lift_relation(t: &FunctorExpr, r: &Relation) -> LiftedRelation {
    LiftedRelation { functor: t.clone(), ground: r.clone() }
}

impl LiftedRelation {
    pub fn functor(&self) -> &FunctorExpr {
        &self.functor
    }

    pub fn ground(&self) -> &Relation {
        &self.ground
    }

    fn check(&self, v: &TValue, size: usize) -> Result<()> {
        if !well_formed(&self.functor, v) {
            return Err(shape_error(&self.functor, v));
        }
        let bad = super::ops::base(&self.functor, v)?.into_iter().find(|&x| x >= size);
        bad.map_or(Ok(()), |x| Err(Error::AtomOutsideDomain(x)))
    }

    pub fn contains(&self, a: &TValue, b: &TValue) -> Result<bool> {
        self.check(a, self.ground.left)?;
        self.check(b, self.ground.right)?;
        Ok(related(&self.functor, a, b, &self.ground.as_leaf_relation()))
    }

    /// A span witness `δ ∈ T R` (leaves are atom pairs) when related.
    pub fn witness(&self, a: &TValue, b: &TValue) -> Result<Option<TValue>> {
        self.check(a, self.ground.left)?;
        self.check(b, self.ground.right)?;
        let r = self.ground.as_leaf_relation();
        Ok(lift_witness(&self.functor, a, b, &|x, y| r(x, y).then(|| TValue::pair(x.clone(), y.clone()))))
    }

    /// All related pairs over `T{0..left-1} × T{0..right-1}` in canonical order.
    pub fn pairs(&self, cfg: &Config) -> Result<Vec<(TValue, TValue)>> {
        let xs = carrier(&self.functor, &(0..self.ground.left).collect::<Vec<_>>(), cfg)?;
        let ys = carrier(&self.functor, &(0..self.ground.right).collect::<Vec<_>>(), cfg)?;
        let m = self.matrix(&xs, &ys, cfg);
        Ok(xs.iter().enumerate().flat_map(|(i, x)| m[i].ones().map(|j| (x.clone(), ys[j].clone())).collect::<Vec<_>>()).collect())
    }

    /// Row `i` holds the indices `j` with `xs[i] T̄R ys[j]`.
    pub fn matrix(&self, xs: &[TValue], ys: &[TValue], cfg: &Config) -> Vec<FixedBitSet> {
        let r = self.ground.as_leaf_relation();
        cfg.exec.map(xs, |x| {
            let mut row = FixedBitSet::with_capacity(ys.len());
            for (j, y) in ys.iter().enumerate() {
                if related(&self.functor, x, y, &r) {
                    row.insert(j);
                }
            }
            row
        })
    }
}

/// `{(T π(ρ), T π'(ρ)) | ρ ∈ T R}`, enumerated from the carrier of `T` over
/// the pairs of `R`; independent of [`related`].
pub fn lift_relation_span_oracle(t: &FunctorExpr, r: &Relation, cfg: &Config) -> Result<Vec<(TValue, TValue)>> {
    let pairs: Vec<TValue> = r.pairs().iter().map(|&(x, y)| TValue::pair(TValue::Atom(x), TValue::Atom(y))).collect();
    let spans = carrier_over(t, &pairs, cfg)?;
    let mut out: Vec<(TValue, TValue)> = spans.iter().map(|d| Ok((project(t, d, true)?, project(t, d, false)?))).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}
