use std::collections::BTreeSet;

use super::{FunctorExpr, TValue};
use crate::{Config, Error, Result};

use FunctorExpr::*;

/// `|T X|` for `|X| = n`, or `None` on overflow or for `Mfin`.
pub fn carrier_size(t: &FunctorExpr, n: u128) -> Option<u128> {
    match t {
        Id => Some(n),
        Const(k) => Some(*k as u128),
        Pfin => 1u128.checked_shl(u32::try_from(n).ok()?).filter(|_| n < 128),
        Mfin => None,
        Prod(l, r) => carrier_size(l, n)?.checked_mul(carrier_size(r, n)?),
        Coprod(l, r) => carrier_size(l, n)?.checked_add(carrier_size(r, n)?),
        Exp(b, d) => carrier_size(b, n)?.checked_pow(u32::try_from(*d).ok()?),
        Comp(o, i) => carrier_size(o, carrier_size(i, n)?),
    }
}

/// Enumerates `T X` for the ground set `X = atoms`, in canonical order.
pub fn carrier(t: &FunctorExpr, atoms: &[usize], cfg: &Config) -> Result<Vec<TValue>> {
    let leaves: Vec<TValue> = atoms.iter().map(|&a| TValue::Atom(a)).collect();
    carrier_over(t, &leaves, cfg)
}

/// Enumerates `T X` where `X` is an arbitrary set of leaf values.
pub fn carrier_over(t: &FunctorExpr, leaves: &[TValue], cfg: &Config) -> Result<Vec<TValue>> {
    if !t.finite_to_finite() {
        return Err(Error::NotFiniteToFinite(t.to_string()));
    }
    let mut leaves = leaves.to_vec();
    leaves.sort();
    leaves.dedup();
    let mut out = enumerate(t, &leaves, cfg)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn enumerate(t: &FunctorExpr, leaves: &[TValue], cfg: &Config) -> Result<Vec<TValue>> {
    cfg.check_carrier(&format!("carrier of {t}"), carrier_size(t, leaves.len() as u128))?;
    Ok(match t {
        Id => leaves.to_vec(),
        Const(k) => (0..*k).map(TValue::Const).collect(),
        Pfin => {
            let n = leaves.len();
            (0u64..1 << n).map(|mask| TValue::Set((0..n).filter(|i| mask >> i & 1 == 1).map(|i| leaves[i].clone()).collect())).collect()
        }
        Mfin => unreachable!("rejected by finite_to_finite"),
        Prod(l, r) => {
            let (ls, rs) = (enumerate(l, leaves, cfg)?, enumerate(r, leaves, cfg)?);
            ls.iter().flat_map(|a| rs.iter().map(move |b| TValue::pair(a.clone(), b.clone()))).collect()
        }
        Coprod(l, r) => {
            let mut out: Vec<TValue> = enumerate(l, leaves, cfg)?.into_iter().map(TValue::inl).collect();
            out.extend(enumerate(r, leaves, cfg)?.into_iter().map(TValue::inr));
            out
        }
        Exp(b, d) => {
            let body = enumerate(b, leaves, cfg)?;
            let mut out = vec![Vec::new()];
            for _ in 0..*d {
                out = out.into_iter().flat_map(|prefix| body.iter().map(move |x| [prefix.clone(), vec![x.clone()]].concat())).collect();
            }
            out.into_iter().map(TValue::Fun).collect()
        }
        Comp(o, i) => {
            let mut inner = enumerate(i, leaves, cfg)?;
            inner.sort();
            enumerate(o, &inner, cfg)?
        }
    })
}

fn mismatch(t: &FunctorExpr, v: &TValue) -> Error {
    Error::ShapeMismatch { functor: t.to_string(), value: v.to_string() }
}

/// `T f` for a map `f` on leaves; re-canonicalizes sets and multisets.
pub fn map_leaves(t: &FunctorExpr, v: &TValue, f: &mut dyn FnMut(&TValue) -> Result<TValue>) -> Result<TValue> {
    Ok(match (t, v) {
        (Id, x) => f(x)?,
        (Const(k), TValue::Const(c)) if c < k => v.clone(),
        (Pfin, TValue::Set(xs)) => TValue::set(xs.iter().map(&mut *f).collect::<Result<Vec<_>>>()?),
        (Mfin, TValue::Mset(xs)) => TValue::mset(xs.iter().map(|(x, m)| Ok((f(x)?, *m))).collect::<Result<Vec<_>>>()?),
        (Prod(l, r), TValue::Pair(a, b)) => TValue::pair(map_leaves(l, a, f)?, map_leaves(r, b, f)?),
        (Coprod(l, _), TValue::Inl(a)) => TValue::inl(map_leaves(l, a, f)?),
        (Coprod(_, r), TValue::Inr(b)) => TValue::inr(map_leaves(r, b, f)?),
        (Exp(b, d), TValue::Fun(xs)) if xs.len() == *d => TValue::Fun(xs.iter().map(|x| map_leaves(b, x, f)).collect::<Result<Vec<_>>>()?),
        (Comp(o, i), _) => map_leaves(o, v, &mut |w| map_leaves(i, w, f))?,
        _ => return Err(mismatch(t, v)),
    })
}

/// `T f (v)` for a ground function on atoms; `None` marks atoms outside the
/// domain.
pub fn fmap(t: &FunctorExpr, v: &TValue, f: &dyn Fn(usize) -> Option<usize>) -> Result<TValue> {
    map_leaves(t, v, &mut |leaf| match leaf {
        TValue::Atom(a) => f(*a).map(TValue::Atom).ok_or(Error::AtomOutsideDomain(*a)),
        other => Err(mismatch(&Id, other)),
    })
}

/// `fmap` with the function given as a lookup table.
pub fn fmap_table(t: &FunctorExpr, v: &TValue, f: &[usize]) -> Result<TValue> {
    fmap(t, v, &|a| f.get(a).copied())
}

/// All leaves occurring at `Id` positions (the base of `v` over its leaf
/// set), sorted and deduplicated.
pub fn leaves(t: &FunctorExpr, v: &TValue) -> Result<Vec<TValue>> {
    let mut acc = BTreeSet::new();
    map_leaves(t, v, &mut |x| {
        acc.insert(x.clone());
        Ok(x.clone())
    })?;
    Ok(acc.into_iter().collect())
}

/// The smallest set of atoms `X'` with `v ∈ T X'`.
pub fn base(t: &FunctorExpr, v: &TValue) -> Result<BTreeSet<usize>> {
    leaves(t, v)?.iter().map(|x| x.as_atom().ok_or_else(|| mismatch(&Id, x))).collect()
}

/// True iff `v` has the shape of `T` with atoms at every `Id` position.
pub fn well_formed(t: &FunctorExpr, v: &TValue) -> bool {
    fn ok(t: &FunctorExpr, v: &TValue) -> bool {
        let canonical = match v {
            TValue::Set(xs) => xs.windows(2).all(|w| w[0] < w[1]),
            TValue::Mset(xs) => xs.windows(2).all(|w| w[0].0 < w[1].0) && xs.iter().all(|(_, m)| *m > 0),
            _ => true,
        };
        canonical
            && match (t, v) {
                (Id, TValue::Atom(_)) => true,
                (Const(k), TValue::Const(c)) => c < k,
                (Pfin, TValue::Set(xs)) => xs.iter().all(|x| matches!(x, TValue::Atom(_))),
                (Mfin, TValue::Mset(xs)) => xs.iter().all(|(x, _)| matches!(x, TValue::Atom(_))),
                (Prod(l, r), TValue::Pair(a, b)) => ok(l, a) && ok(r, b),
                (Coprod(l, _), TValue::Inl(a)) => ok(l, a),
                (Coprod(_, r), TValue::Inr(b)) => ok(r, b),
                (Exp(b, d), TValue::Fun(xs)) => xs.len() == *d && xs.iter().all(|x| ok(b, x)),
                (Comp(o, i), _) => {
                    let mut inner_ok = true;
                    let outer = map_leaves(o, v, &mut |w| {
                        inner_ok &= ok(i, w);
                        Ok(TValue::Atom(0))
                    });
                    outer.is_ok() && inner_ok && canonical_outer(o, v)
                }
                _ => false,
            }
    }
    // Outer sets of a composite must be canonical over their inner leaves.
    fn canonical_outer(o: &FunctorExpr, v: &TValue) -> bool {
        map_leaves(o, v, &mut |w| Ok(w.clone())).is_ok_and(|c| &c == v)
    }
    ok(t, v)
}

pub(crate) fn shape_error(t: &FunctorExpr, v: &TValue) -> Error {
    mismatch(t, v)
}
