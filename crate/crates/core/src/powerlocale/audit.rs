use crate::functor::{base, carrier, carrier_over, lifted_members, related, slim_redistributions, FunctorExpr, TValue};
use crate::presentation::check_insertion;
use crate::report::{Check, Report};
use crate::{Config, Error, Exec};

use super::ops::{leq_relation, t_join, t_meet, well_inside_relation};
use super::{GeneratorBase, Powerlocale};

pub(crate) fn title(p: &Powerlocale, what: &str) -> String {
    let v = match p.generator_base {
        GeneratorBase::Full => "V",
        GeneratorBase::Clopen => "V^C",
    };
    format!("{what} for {v}_{} of a {}-element frame", p.functor, p.base_frame.len())
}

/// Turns a computation error into a failed (or, for caps, skipped) check.
fn errored(name: &str, e: Error) -> Check {
    if e.is_cap() {
        Check::skipped(name, e.to_string())
    } else {
        Check::fail(name, e.to_string())
    }
}

/// All `Γ ⊆ X` with `|Γ| ≤ 2`, as index lists.
fn small_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    out.extend((0..n).map(|i| vec![i]));
    for i in 0..n {
        out.extend((i + 1..n).map(|j| vec![i, j]));
    }
    out
}

#[derive(Default)]
struct GammaOutcome {
    srd: Option<String>,
    lower_bounds: Option<String>,
    characterization: Option<String>,
    error: Option<Error>,
}

/// Exhaustive checks of the three defining relations and the lower-bound
/// form of the meet relation, over every `Γ` with at most two elements.
pub fn carioca_audit(p: &Powerlocale, cfg: &Config) -> Report {
    let mut report = Report::new(title(p, "carioca audit"));
    let (t, l, f) = (&p.functor, &*p.base_frame, &*p.frame);
    let x = p.generators();
    let n = x.len();
    let leq = leq_relation(l);
    let inner = cfg.with_exec(Exec::Sequential);

    let monotone = cfg.exec.find_first(n, |a| {
        (0..n).find_map(|b| {
            (related(t, &x[b], &x[a], &leq) && !f.leq(p.nabla_at(b), p.nabla_at(a)))
                .then(|| format!("{} ≤ {} lifted, but ∇{} ≰ ∇{}", p.show(&x[b]), p.show(&x[a]), p.show(&x[b]), p.show(&x[a])))
        })
    });
    report.push(Check::from_witness("(∇1) lifted order implies ∇-order", monotone).with_detail(format!("{} pairs", n * n)));

    let gammas = small_subsets(n);
    let outcomes: Vec<GammaOutcome> = cfg.exec.map(&gammas, |gamma| {
        let values: Vec<TValue> = gamma.iter().map(|&i| x[i].clone()).collect();
        let shown = format!("Γ = {{{}}}", values.iter().map(|v| p.show(v)).collect::<Vec<_>>().join(", "));
        let lhs = f.meet(gamma.iter().map(|&i| p.nabla_at(i)));
        let srd = match slim_redistributions(t, &values, &inner) {
            Ok(s) => s,
            Err(e) => return GammaOutcome { error: Some(e), ..Default::default() },
        };
        let mut meets = Vec::with_capacity(srd.len());
        for psi in &srd {
            match t_meet(t, l, psi).and_then(|m| p.nabla(&m).map(|e| (m, e))) {
                Ok(pair) => meets.push(pair),
                Err(e) => return GammaOutcome { error: Some(e), ..Default::default() },
            }
        }
        let rhs = f.join(meets.iter().map(|(_, e)| *e));
        let lower: Vec<usize> = (0..n).filter(|&d| gamma.iter().all(|&g| related(t, &x[d], &x[g], &leq))).collect();
        let rhs_lower = f.join(lower.iter().map(|&d| p.nabla_at(d)));
        let via_srd: Vec<usize> = (0..n).filter(|&d| meets.iter().any(|(m, _)| related(t, &x[d], m, &leq))).collect();
        GammaOutcome {
            srd: (lhs != rhs).then(|| format!("{shown}: ⋀∇Γ = {} but ⋁∇(T⋀Ψ) = {}", f.name(lhs), f.name(rhs))),
            lower_bounds: (lhs != rhs_lower)
                .then(|| format!("{shown}: ⋀∇Γ = {} but ⋁ over lower bounds = {}", f.name(lhs), f.name(rhs_lower))),
            characterization: (lower != via_srd).then(|| {
                let d = lower.iter().chain(&via_srd).find(|d| lower.contains(d) != via_srd.contains(d)).expect("sets differ");
                format!("{shown}: {} is in exactly one of the two lower-bound sets", p.show(&x[*d]))
            }),
            error: None,
        }
    });
    let detail = format!("{} sets Γ with |Γ| ≤ 2", gammas.len());
    if let Some(e) = outcomes.iter().find_map(|o| o.error.as_ref()) {
        for name in ["(∇2) meets via slim redistributions", "(∇2′) meets via lower bounds", "lower bounds via slim redistributions"] {
            report.push(if e.is_cap() { Check::skipped(name, e.to_string()) } else { Check::fail(name, e.to_string()) });
        }
    } else {
        let first = |pick: fn(&GammaOutcome) -> &Option<String>| outcomes.iter().find_map(|o| pick(o).clone());
        report.push(Check::from_witness("(∇2) meets via slim redistributions", first(|o| &o.srd)).with_detail(detail.clone()));
        report.push(Check::from_witness("(∇2′) meets via lower bounds", first(|o| &o.lower_bounds)).with_detail(detail.clone()));
        report.push(Check::from_witness("lower bounds via slim redistributions", first(|o| &o.characterization)).with_detail(detail));
    }

    let empty_instance = carrier(t, &[l.top()], cfg).and_then(|tops| p.nabla_join(&tops));
    report.push(match empty_instance {
        Ok(e) => Check::from_witness("1 = ⋁∇[T{1}]", (e != f.top()).then(|| format!("join is {}", f.name(e)))),
        Err(e) => errored("1 = ⋁∇[T{1}]", e),
    });

    let name = "(∇3) ∇T⋁Φ ≤ ⋁∇λ(Φ)";
    let phis = carrier(&FunctorExpr::Pfin, &p.atoms, cfg).and_then(|s| carrier_over(t, &s, cfg));
    report.push(match phis {
        Err(e) => errored(name, e),
        Ok(phis) => {
            let w = cfg.exec.find_first(phis.len(), |i| {
                let phi = &phis[i];
                let check = || -> crate::Result<Option<String>> {
                    let top = p.nabla(&t_join(t, l, phi)?)?;
                    let lam = lifted_members(t, phi, &inner)?;
                    let rhs = p.nabla_join(&lam)?;
                    Ok((!f.leq(top, rhs)).then(|| format!("Φ = {}", p.show(phi))))
                };
                check().unwrap_or_else(|e| Some(format!("Φ = {}: {e}", p.show(phi))))
            });
            Check::from_witness(name, w).with_detail(format!("{} values Φ", phis.len()))
        }
    });
    report
}

/// All subsets of `atoms`, or `None` when there are too many to list.
fn subsets_of(atoms: &[usize]) -> Option<Vec<Vec<usize>>> {
    (atoms.len() <= 12)
        .then(|| (0u32..1 << atoms.len()).map(|m| (0..atoms.len()).filter(|i| m >> i & 1 == 1).map(|i| atoms[i]).collect()).collect())
}

/// The elementary consequences of the defining relations, checked
/// exhaustively over the generators.
pub fn basic_facts_audit(p: &Powerlocale, cfg: &Config) -> Report {
    let mut report = Report::new(title(p, "basic facts"));
    let (t, l, f) = (&p.functor, &*p.base_frame, &*p.frame);
    let x = p.generators();
    let n = x.len();

    let w = x.iter().enumerate().find_map(|(i, alpha)| {
        let has_bottom = base(t, alpha).map(|b| b.contains(&l.bottom())).unwrap_or(false);
        (has_bottom && p.nabla_at(i) != f.bottom()).then(|| format!("∇{} ≠ 0", p.show(alpha)))
    });
    report.push(Check::from_witness("0 in the base forces ∇α = 0", w));

    let subsets = subsets_of(&p.atoms);
    let name = "disjoint generators have disjoint ∇";
    report.push(match &subsets {
        None => Check::skipped(name, "more than 12 generator atoms"),
        Some(all) => {
            let disjoint: Vec<&Vec<usize>> =
                all.iter().filter(|a| a.iter().all(|&u| a.iter().all(|&v| u == v || l.meet2(u, v) == l.bottom()))).collect();
            let mut witness = None;
            for a in &disjoint {
                match carrier(t, a, cfg) {
                    Err(e) => {
                        witness = Some(e.to_string());
                        break;
                    }
                    Ok(vals) => {
                        let es: Vec<usize> = vals.iter().map(|v| p.nabla(v).expect("generator")).collect();
                        let bad = (0..vals.len())
                            .find_map(|i| (i + 1..vals.len()).find(|&j| f.meet2(es[i], es[j]) != f.bottom()).map(|j| (i, j)));
                        if let Some((i, j)) = bad {
                            witness = Some(format!("∇{} ∧ ∇{} ≠ 0", p.show(&vals[i]), p.show(&vals[j])));
                            break;
                        }
                    }
                }
            }
            Check::from_witness(name, witness).with_detail(format!("{} pairwise-disjoint sets", disjoint.len()))
        }
    });

    let total = |_: &TValue, _: &TValue| true;
    let w = cfg.exec.find_first(n, |a| {
        (0..n).find_map(|b| {
            (!related(t, &x[a], &x[b], &total) && f.meet2(p.nabla_at(a), p.nabla_at(b)) != f.bottom())
                .then(|| format!("∇{} ∧ ∇{} ≠ 0", p.show(&x[a]), p.show(&x[b])))
        })
    });
    report.push(Check::from_witness("shape-unrelated generators have disjoint ∇", w));

    let name = "1 = ⋁∇[T{1}]";
    report.push(match carrier(t, &[l.top()], cfg).and_then(|v| p.nabla_join(&v)) {
        Ok(e) => Check::from_witness(name, (e != f.top()).then(|| format!("join is {}", f.name(e)))),
        Err(e) => errored(name, e),
    });

    let name = "⋁A = 1 implies ⋁∇[T A] = 1";
    report.push(match &subsets {
        None => Check::skipped(name, "more than 12 generator atoms"),
        Some(all) => {
            let covering: Vec<&Vec<usize>> = all.iter().filter(|a| l.join(a.iter().copied()) == l.top()).collect();
            let w = covering.iter().find_map(|a| match carrier(t, a, cfg).and_then(|v| p.nabla_join(&v)) {
                Ok(e) if e == f.top() => None,
                Ok(e) => Some(format!("A = {:?}: join is {}", a.iter().map(|&u| l.name(u)).collect::<Vec<_>>(), f.name(e))),
                Err(e) => Some(e.to_string()),
            });
            Check::from_witness(name, w).with_detail(format!("{} sets A", covering.len()))
        }
    });

    let wi = well_inside_relation(l);
    let w = cfg.exec.find_first(n, |a| {
        (0..n).find_map(|b| {
            (related(t, &x[a], &x[b], &wi) && !f.well_inside(p.nabla_at(a), p.nabla_at(b)))
                .then(|| format!("{} ⋖ {} lifted, but not ∇{} ⋖ ∇{}", p.show(&x[a]), p.show(&x[b]), p.show(&x[a]), p.show(&x[b])))
        })
    });
    report.push(Check::from_witness("lifted well-inside implies ∇ well-inside", w));
    report
}

/// Every element equals the join of the ∇-images in its C-ideal.
pub fn normal_form_audit(p: &Powerlocale) -> Check {
    let f = &p.frame;
    let w = (0..f.len()).find_map(|e| {
        let rebuilt = f.join(p.site_frame.ideals[e].ones().map(|i| p.nabla_at(i)));
        (rebuilt != e).then(|| format!("{} rebuilt as {}", f.name(e), f.name(rebuilt)))
    });
    Check::from_witness("normal form: element = ⋁∇[its ideal]", w).with_detail(format!("{} elements", f.len()))
}

/// Flatness of the ∇-site, the presented-frame conditions on `∇`, and the
/// normal form.
pub fn structure_audit(p: &Powerlocale, cfg: &Config) -> Report {
    let mut report = Report::new(title(p, "site structure"));
    let flat = p.site.verify(cfg).err().map(|v| {
        let g = |i: usize| p.show(&p.generators()[i]);
        format!("{} ≲ {} ◁₀ {{{}}}", g(v.b), g(v.a), v.cover.iter().map(|&c| g(c)).collect::<Vec<_>>().join(", "))
    });
    report.push(Check::from_witness("∇-site is flat", flat).with_detail(format!(
        "{} generators, {} covers",
        p.site.len(),
        p.site.covers().len()
    )));
    report
        .push(Check::from_witness("∇ satisfies the site relations", check_insertion(&p.site, &p.site_frame).err().map(|e| e.to_string())));
    report.push(normal_form_audit(p));
    report
}
