//! Audits of the auxiliary facts behind the ∇-site: the meet-with-α
//! refinement of covers, lifted down-sets of `λ`, and the behaviour of slim
//! redistributions under maps.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::functor::{
    carrier, carrier_over, fmap_table, leaves, lift_witness, lifted_members, map_leaves, project, related, slim_redistributions, subset,
    FunctorExpr, TValue,
};
use crate::lattice::FiniteFrame;
use crate::report::{Check, Report};
use crate::{Config, Exec, Result};

use super::audit::title;
use super::ops::{leq_relation, t_down, t_eta, t_join};
use super::Powerlocale;

fn atoms_of(s: &TValue) -> Vec<usize> {
    s.as_set().unwrap_or(&[]).iter().filter_map(TValue::as_atom).collect()
}

/// Up to `limit` indices into `0..n`, all of them when `n ≤ limit`.
fn pick(n: usize, limit: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if n <= limit {
        (0..n).collect()
    } else {
        let mut v = sample(rng, n, limit).into_vec();
        v.sort_unstable();
        v
    }
}

/// For every `α ∈ T M` and `Φ ∈ T Pfin M` with `α T̄≤ T⋁Φ`, the value `Φ′`
/// obtained from a span witness by `(a, A) ↦ a ∧ A` lies in `T Pfin M`,
/// still has `α T̄≤ T⋁Φ′`, and is lifted-included in both `T↓(Tη α)` and
/// `T↓Φ`. `M` is the generator base of `p`. At most `limit` values `Φ` are
/// tried, drawn with the seeded generator when there are more.
pub fn stability_lemma_audit(p: &Powerlocale, limit: usize, seed: u64, cfg: &Config) -> Check {
    let name = "meet-with-α refinement of covers";
    let (t, l) = (&p.functor, &*p.base_frame);
    let leq = leq_relation(l);
    let all = match carrier(&FunctorExpr::Pfin, &p.atoms, cfg).and_then(|s| carrier_over(t, &s, cfg)) {
        Ok(v) => v,
        Err(e) => return Check::skipped(name, e.to_string()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phis: Vec<&TValue> = pick(all.len(), limit, &mut rng).into_iter().map(|i| &all[i]).collect();
    let x = p.generators();
    let cover_rel = |a: &TValue, s: &TValue| -> Option<TValue> {
        let (a_atom, set) = (a.as_atom()?, atoms_of(s));
        l.leq(a_atom, l.join(set.iter().copied())).then(|| TValue::pair(a.clone(), s.clone()))
    };
    let mut checked = std::sync::atomic::AtomicUsize::new(0);
    let w = cfg.exec.find_first(phis.len(), |i| {
        let phi = phis[i];
        let run = || -> Result<Option<String>> {
            for alpha in x {
                let Some(delta) = lift_witness(t, alpha, phi, &cover_rel) else { continue };
                checked.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let shown = || format!("α = {}, Φ = {}", p.show(alpha), p.show(phi));
                if project(t, &delta, true)? != *alpha || project(t, &delta, false)? != *phi {
                    return Ok(Some(format!("{}: witness projects wrongly", shown())));
                }
                let refined = map_leaves(t, &delta, &mut |leaf| match leaf {
                    TValue::Pair(a, s) => {
                        let a = a.as_atom().expect("atom");
                        Ok(TValue::atoms(atoms_of(s).into_iter().map(|b| l.meet2(a, b))))
                    }
                    _ => unreachable!("witness leaves are pairs"),
                })?;
                let in_m = leaves(t, &refined)?.iter().all(|s| atoms_of(s).iter().all(|a| p.atoms.contains(a)));
                if !in_m {
                    return Ok(Some(format!("{}: Φ′ leaves the generator base", shown())));
                }
                if !related(t, alpha, &t_join(t, l, &refined)?, &leq) {
                    return Ok(Some(format!("{}: α not below T⋁Φ′", shown())));
                }
                if !related(t, &refined, &t_down(t, l, &t_eta(t, alpha)?)?, &subset) {
                    return Ok(Some(format!("{}: Φ′ not inside T↓(Tη α)", shown())));
                }
                if !related(t, &refined, &t_down(t, l, phi)?, &subset) {
                    return Ok(Some(format!("{}: Φ′ not inside T↓Φ", shown())));
                }
            }
            Ok(None)
        };
        run().unwrap_or_else(|e| Some(e.to_string()))
    });
    let checked = *checked.get_mut();
    Check::from_witness(name, w).with_detail(format!(
        "{checked} pairs (α, Φ) from {} of {} values Φ; {}",
        phis.len(),
        all.len(),
        title(p, "site")
    ))
}

/// The three lifted down-set identities over the frame order:
/// `↓λ(Φ) = λ(T↓Φ)`, `↓{α} = λ(T↓(Tη α))`, and `Φ′ T̄⊆ Φ ⟹ λ(Φ′) ⊆ λ(Φ)`.
/// At most `limit` values `Φ` (and `limit` pairs) are used, drawn with the
/// seeded generator when there are more.
pub fn lifted_downset_audit(t: &FunctorExpr, l: &FiniteFrame, limit: usize, seed: u64, cfg: &Config) -> Report {
    let mut report = Report::new(format!("lifted down-sets for {t} over a {}-element frame", l.len()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms: Vec<usize> = (0..l.len()).collect();
    let data = carrier(t, &atoms, cfg).and_then(|xs| {
        let phis = carrier_over(t, &carrier(&FunctorExpr::Pfin, &atoms, cfg)?, cfg)?;
        Ok((xs, phis))
    });
    let (xs, phis) = match data {
        Ok(d) => d,
        Err(e) => {
            report.push(Check::skipped("enumeration", e.to_string()));
            return report;
        }
    };
    let leq = leq_relation(l);
    let inner = cfg.with_exec(Exec::Sequential);
    let down = |set: &[TValue]| -> BTreeSet<TValue> { xs.iter().filter(|b| set.iter().any(|g| related(t, b, g, &leq))).cloned().collect() };
    let chosen: Vec<TValue> = pick(phis.len(), limit, &mut rng).into_iter().map(|i| phis[i].clone()).collect();
    let lams: Vec<Result<Vec<TValue>>> = cfg.exec.map(&chosen, |phi| lifted_members(t, phi, &inner));
    let first_err = lams.iter().find_map(|r| r.as_ref().err().map(|e| e.to_string()));
    if let Some(e) = first_err {
        report.push(Check::fail("λ evaluation", e));
        return report;
    }
    let lams: Vec<Vec<TValue>> = lams.into_iter().map(|r| r.expect("checked")).collect();

    let w = cfg.exec.find_first(chosen.len(), |i| {
        let lhs = down(&lams[i]);
        let rhs: BTreeSet<TValue> = t_down(t, l, &chosen[i]).and_then(|d| lifted_members(t, &d, &inner)).ok()?.into_iter().collect();
        (lhs != rhs).then(|| format!("Φ = {}", chosen[i]))
    });
    report.push(Check::from_witness("↓λ(Φ) = λ(T↓Φ)", w).with_detail(format!("{} values Φ", chosen.len())));

    let w = cfg.exec.find_first(xs.len(), |i| {
        let lhs = down(std::slice::from_ref(&xs[i]));
        let rhs: BTreeSet<TValue> =
            t_eta(t, &xs[i]).and_then(|e| t_down(t, l, &e)).and_then(|d| lifted_members(t, &d, &inner)).ok()?.into_iter().collect();
        (lhs != rhs).then(|| format!("α = {}", xs[i]))
    });
    report.push(Check::from_witness("↓{α} = λ(T↓(Tη α))", w).with_detail(format!("{} values α", xs.len())));

    let n = chosen.len();
    let pairs: Vec<(usize, usize)> =
        pick(n * n, limit.saturating_mul(limit).min(1 << 16), &mut rng).into_iter().map(|k| (k / n, k % n)).collect();
    let w = cfg.exec.find_first(pairs.len(), |k| {
        let (i, j) = pairs[k];
        (related(t, &chosen[i], &chosen[j], &subset) && !lams[i].iter().all(|m| lams[j].contains(m)))
            .then(|| format!("Φ′ = {}, Φ = {}", chosen[i], chosen[j]))
    });
    report.push(Check::from_witness("Φ′ T̄⊆ Φ implies λ(Φ′) ⊆ λ(Φ)", w).with_detail(format!("{} pairs", pairs.len())));
    report
}

/// For every map `f: X → Y` between ground sets of size at most 2 and every
/// `Γ ⊆ T X` with `|Γ| ≤ 2` (at most `limit` of them, seeded), `T Pfin f`
/// maps `SRD(Γ)` onto `SRD(Pfin T f (Γ))`.
pub fn bl1_audit(t: &FunctorExpr, limit: usize, seed: u64, cfg: &Config) -> Report {
    let mut report = Report::new(format!("slim redistributions under maps for {t}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tp = FunctorExpr::comp(t.clone(), FunctorExpr::Pfin);
    let inner = cfg.with_exec(Exec::Sequential);
    let mut count = 0;
    let mut witness = None;
    'all: for nx in 1..=2usize {
        let xs = match carrier(t, &(0..nx).collect::<Vec<_>>(), cfg) {
            Ok(v) => v,
            Err(e) => {
                report.push(Check::skipped("SRD image", e.to_string()));
                return report;
            }
        };
        let mut gammas: Vec<Vec<TValue>> = vec![vec![]];
        gammas.extend(xs.iter().map(|x| vec![x.clone()]));
        for i in 0..xs.len() {
            gammas.extend((i + 1..xs.len()).map(|j| vec![xs[i].clone(), xs[j].clone()]));
        }
        let chosen = pick(gammas.len(), limit, &mut rng);
        for ny in 1..=2usize {
            let maps: Vec<Vec<usize>> = (0..ny.pow(nx as u32)).map(|k| (0..nx).map(|d| k / ny.pow(d as u32) % ny).collect()).collect();
            for f in &maps {
                let outcomes: Vec<Result<Option<String>>> = cfg.exec.map(&chosen, |&g| {
                    let gamma = &gammas[g];
                    let srd = slim_redistributions(t, gamma, &inner)?;
                    let image: BTreeSet<TValue> = srd.iter().map(|psi| fmap_table(&tp, psi, f)).collect::<Result<_>>()?;
                    let mapped: BTreeSet<TValue> = gamma.iter().map(|x| fmap_table(t, x, f)).collect::<Result<_>>()?;
                    let target: BTreeSet<TValue> =
                        slim_redistributions(t, &mapped.into_iter().collect::<Vec<_>>(), &inner)?.into_iter().collect();
                    Ok((image != target).then(|| format!("f = {f:?}, Γ = {gamma:?}")))
                });
                for o in outcomes {
                    count += 1;
                    match o {
                        Ok(None) => {}
                        Ok(Some(w)) => {
                            witness = Some(w);
                            break 'all;
                        }
                        Err(e) if e.is_cap() => {
                            report.push(Check::skipped("SRD image", e.to_string()));
                            return report;
                        }
                        Err(e) => {
                            witness = Some(e.to_string());
                            break 'all;
                        }
                    }
                }
            }
        }
    }
    report.push(Check::from_witness("T Pfin f maps SRD(Γ) onto SRD(Pfin T f Γ)", witness).with_detail(format!("{count} instances")));
    report
}
