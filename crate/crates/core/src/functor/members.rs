use std::collections::BTreeSet;

use super::lift::related;
use super::ops::{carrier_over, leaves};
use super::{FunctorExpr, TValue};
use crate::{Config, Error, Result};

/// `x ∈ S` as a relation between leaves and set-valued leaves.
pub fn member(x: &TValue, s: &TValue) -> bool {
    s.contains(x)
}

/// `⊆` between set-valued leaves.
pub fn subset(a: &TValue, b: &TValue) -> bool {
    match (a, b) {
        (TValue::Set(xs), TValue::Set(_)) => xs.iter().all(|x| b.contains(x)),
        _ => false,
    }
}

/// The union of the set-valued leaves of `phi`.
fn union_of_leaves(t: &FunctorExpr, phi: &TValue) -> Result<Vec<TValue>> {
    let mut acc = BTreeSet::new();
    for s in leaves(t, phi)? {
        let items = s.as_set().ok_or_else(|| Error::ShapeMismatch { functor: format!("{t}∘P"), value: phi.to_string() })?;
        acc.extend(items.iter().cloned());
    }
    Ok(acc.into_iter().collect())
}

/// `λ(Φ) = {α | α T̄∈ Φ}`, for `Φ` a `T`-value whose leaves are sets.
/// Candidates range over `T` of the union of those sets, which contains
/// every lifted member.
pub fn lifted_members(t: &FunctorExpr, phi: &TValue, cfg: &Config) -> Result<Vec<TValue>> {
    let candidates = carrier_over(t, &union_of_leaves(t, phi)?, cfg)?;
    Ok(cfg.exec.filter(&candidates, |alpha| related(t, alpha, phi, &member)))
}

/// `SRD(Γ) = {Ψ ∈ T P(C) | γ T̄∈ Ψ for all γ ∈ Γ}` with `C` the union of
/// the bases of `Γ`. Built shape by shape: at each position only values
/// that can still be lifted-related to every `γ` are generated.
pub fn slim_redistributions(t: &FunctorExpr, gamma: &[TValue], cfg: &Config) -> Result<Vec<TValue>> {
    let base = union_of_bases(t, gamma)?;
    let n = base.len();
    if n >= 20 {
        return Err(Error::cap("subsets of the base of Γ", 1u128.checked_shl(n as u32), cfg.carrier_cap));
    }
    // leaf candidates: subsets of C containing every given element
    let leaf = |xs: &[&TValue]| -> Result<Vec<TValue>> {
        let required: u32 = xs.iter().map(|x| base.iter().position(|b| b == *x).map_or(u32::MAX, |i| 1 << i)).fold(0, |a, b| a | b);
        if required == u32::MAX || required >> n != 0 {
            return Ok(vec![]);
        }
        cfg.check_carrier("subsets of the base of Γ", Some(1u128 << n))?;
        Ok((0u32..1 << n)
            .filter(|m| m & required == required)
            .map(|m| TValue::set((0..n).filter(|i| m >> i & 1 == 1).map(|i| base[i].clone())))
            .collect())
    };
    let refs: Vec<&TValue> = gamma.iter().collect();
    let mut out = preimage(t, &refs, &leaf, &member, cfg)?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// `SRD(Γ)` by filtering all of `T P(C)`; kept as an independent check of
/// [`slim_redistributions`].
pub fn slim_redistributions_by_enumeration(t: &FunctorExpr, gamma: &[TValue], cfg: &Config) -> Result<Vec<TValue>> {
    let base = union_of_bases(t, gamma)?;
    let subsets = carrier_over(&FunctorExpr::Pfin, &base, cfg)?;
    let candidates = carrier_over(t, &subsets, cfg)?;
    Ok(cfg.exec.filter(&candidates, |psi| gamma.iter().all(|g| related(t, g, psi, &member))))
}

fn union_of_bases(t: &FunctorExpr, gamma: &[TValue]) -> Result<Vec<TValue>> {
    let mut base = BTreeSet::new();
    for g in gamma {
        base.extend(leaves(t, g)?);
    }
    Ok(base.into_iter().collect())
}

type LeafSolver<'a> = dyn Fn(&[&TValue]) -> Result<Vec<TValue>> + 'a;

/// All `ψ` of shape `t` with `γ T̄R ψ` for every `γ ∈ gammas`. `leaf(xs)`
/// lists the leaf values `u` with `x R u` for all `x ∈ xs`, and `rel` decides
/// `R` itself.
fn preimage(
    t: &FunctorExpr,
    gammas: &[&TValue],
    leaf: &LeafSolver<'_>,
    rel: &dyn Fn(&TValue, &TValue) -> bool,
    cfg: &Config,
) -> Result<Vec<TValue>> {
    use FunctorExpr::*;
    Ok(match t {
        Id => leaf(gammas)?,
        Const(k) => match gammas.first() {
            None => (0..*k).map(TValue::Const).collect(),
            Some(TValue::Const(c)) if c < k && gammas.iter().all(|g| **g == TValue::Const(*c)) => vec![TValue::Const(*c)],
            Some(_) => vec![],
        },
        Pfin => {
            let Some(sets) = gammas.iter().map(|g| g.as_set()).collect::<Option<Vec<_>>>() else { return Ok(vec![]) };
            // u is admissible iff every γ has some x with x R u
            let mut admissible = BTreeSet::new();
            let mut choice = vec![0usize; sets.len()];
            if sets.iter().all(|s| !s.is_empty()) {
                loop {
                    let xs: Vec<&TValue> = sets.iter().zip(&choice).map(|(s, &i)| &s[i]).collect();
                    admissible.extend(leaf(&xs)?);
                    let mut k = 0;
                    while k < choice.len() && choice[k] + 1 == sets[k].len() {
                        choice[k] = 0;
                        k += 1;
                    }
                    if k == choice.len() {
                        break;
                    }
                    choice[k] += 1;
                }
            }
            let adm: Vec<TValue> = admissible.into_iter().collect();
            cfg.check_carrier("admissible subsets", super::carrier_size(&Pfin, adm.len() as u128))?;
            // each x in each γ must be related to some chosen u
            let needs: Vec<u64> = sets
                .iter()
                .flat_map(|s| s.iter())
                .map(|x| adm.iter().enumerate().filter(|(_, u)| rel(x, u)).fold(0u64, |m, (i, _)| m | 1 << i))
                .collect();
            (0u64..1 << adm.len())
                .filter(|m| needs.iter().all(|need| need & m != 0))
                .map(|m| TValue::Set((0..adm.len()).filter(|i| m >> i & 1 == 1).map(|i| adm[i].clone()).collect()))
                .collect()
        }
        Mfin => return Err(Error::NotFiniteToFinite(t.to_string())),
        Prod(l, r) => {
            let Some(parts) = gammas
                .iter()
                .map(|g| match g {
                    TValue::Pair(a, b) => Some((&**a, &**b)),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()
            else {
                return Ok(vec![]);
            };
            let ls = preimage(l, &parts.iter().map(|p| p.0).collect::<Vec<_>>(), leaf, rel, cfg)?;
            let rs = preimage(r, &parts.iter().map(|p| p.1).collect::<Vec<_>>(), leaf, rel, cfg)?;
            cfg.check_carrier("product of preimages", (ls.len() as u128).checked_mul(rs.len() as u128))?;
            ls.iter().flat_map(|a| rs.iter().map(move |b| TValue::pair(a.clone(), b.clone()))).collect()
        }
        Coprod(l, r) => {
            let lefts: Option<Vec<&TValue>> = gammas.iter().map(|g| if let TValue::Inl(x) = g { Some(&**x) } else { None }).collect();
            let rights: Option<Vec<&TValue>> = gammas.iter().map(|g| if let TValue::Inr(x) = g { Some(&**x) } else { None }).collect();
            let mut out = Vec::new();
            if let Some(xs) = lefts {
                out.extend(preimage(l, &xs, leaf, rel, cfg)?.into_iter().map(TValue::inl));
            }
            if let Some(xs) = rights {
                out.extend(preimage(r, &xs, leaf, rel, cfg)?.into_iter().map(TValue::inr));
            }
            out
        }
        Exp(body, d) => {
            let Some(funs) = gammas
                .iter()
                .map(|g| match g {
                    TValue::Fun(xs) if xs.len() == *d => Some(xs),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()
            else {
                return Ok(vec![]);
            };
            let mut acc: Vec<Vec<TValue>> = vec![vec![]];
            for k in 0..*d {
                let col = preimage(body, &funs.iter().map(|f| &f[k]).collect::<Vec<_>>(), leaf, rel, cfg)?;
                cfg.check_carrier("exponent of preimages", (acc.len() as u128).checked_mul(col.len() as u128))?;
                acc = acc.into_iter().flat_map(|prefix| col.iter().map(move |c| [prefix.clone(), vec![c.clone()]].concat())).collect();
            }
            acc.into_iter().map(TValue::Fun).collect()
        }
        Comp(o, i) => {
            let inner_leaf = |xs: &[&TValue]| preimage(i, xs, leaf, rel, cfg);
            let inner_rel = |x: &TValue, y: &TValue| related(i, x, y, rel);
            preimage(o, gammas, &inner_leaf, &inner_rel, cfg)?
        }
    })
}
