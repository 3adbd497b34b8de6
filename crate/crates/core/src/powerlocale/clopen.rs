use std::sync::Arc;

use crate::functor::{carrier, carrier_over, lifted_members, map_leaves, related, FunctorExpr, TValue};
use crate::lattice::{find_iso, FiniteFrame};
use crate::presentation::{extend_hom, HomMode};
use crate::report::{Check, Report};
use crate::{Config, Result};

use super::audit::title;
use super::ops::{leq_relation, t_join, well_inside_relation};
use super::{assemble, GeneratorBase, Powerlocale, PowerlocaleCache};

/// `V_T^C L`: generators `T C_L`, covers from `Φ ∈ T Pfin C_L` only.
pub fn clopen_powerlocale(t: &FunctorExpr, l: &Arc<FiniteFrame>, cfg: &Config) -> Result<Powerlocale> {
    assemble(t, l, l.clopens(), GeneratorBase::Clopen, cfg)
}

fn classification(f: &FiniteFrame) -> String {
    let c = f.classify();
    format!("regular {}, zero-dimensional {}, compact {}", c.regular, c.zero_dimensional, c.compact)
}

/// Regularity and zero-dimensionality pass from `L` to `V_T L`; for
/// zero-dimensional `L`, `V_T^C L ≅ V_T L` through the mutually inverse
/// join-maps `∇^C α ↦ ∇α` and `∇α ↦ ⋁{∇^C β | β ∈ T C_L, β T̄≤ α}`.
pub fn preservation_audit(t: &FunctorExpr, l: &Arc<FiniteFrame>, cache: &PowerlocaleCache, cfg: &Config) -> Report {
    let mut report = Report::new(format!("preservation for V_{t} of a {}-element frame", l.len()));
    let p = match cache.get(t, l, cfg) {
        Ok(p) => p,
        Err(e) if e.is_cap() => {
            report.push(Check::skipped("construction", e.to_string()));
            return report;
        }
        Err(e) => {
            report.push(Check::fail("construction", e.to_string()));
            return report;
        }
    };
    let (cl, cv) = (l.classify(), p.frame.classify());
    report.push(Check::pass("classification of the base frame").with_detail(classification(l)));
    report.push(Check::pass("classification of the powerlocale").with_detail(classification(&p.frame)));
    let implication = |name: &str, hyp: bool, concl: bool| {
        let c = Check::from_witness(name, (hyp && !concl).then(|| "hypothesis holds, conclusion fails".to_string()));
        if hyp {
            c
        } else {
            c.with_detail("vacuous")
        }
    };
    report.push(implication("regular L implies regular V_T L", cl.regular, cv.regular));
    report.push(implication("zero-dimensional L implies zero-dimensional V_T L", cl.zero_dimensional, cv.zero_dimensional));

    let (leq, wi) = (leq_relation(l), well_inside_relation(l));
    let x = p.generators();
    if cl.regular {
        let w = (0..x.len()).find_map(|a| {
            let inside = p.frame.join((0..x.len()).filter(|&b| related(t, &x[b], &x[a], &wi)).map(|b| p.nabla_at(b)));
            (inside != p.nabla_at(a)).then(|| format!("∇{}", p.show(&x[a])))
        });
        report.push(Check::from_witness("∇α = ⋁{∇β | β T̄⋖ α}", w));
    }
    if !cl.zero_dimensional {
        return report;
    }
    let clopen = l.clopens();
    let w = (0..x.len()).find_map(|a| {
        let below = (0..x.len())
            .filter(|&b| crate::functor::base(t, &x[b]).is_ok_and(|s| s.iter().all(|c| clopen.contains(c))))
            .filter(|&b| related(t, &x[b], &x[a], &leq));
        (p.frame.join(below.map(|b| p.nabla_at(b))) != p.nabla_at(a)).then(|| format!("∇{}", p.show(&x[a])))
    });
    report.push(Check::from_witness("∇α = ⋁{∇β | β ∈ T C_L, β T̄≤ α}", w));

    let run = || -> Result<Vec<Check>> {
        let pc = cache.get_clopen(t, l, cfg)?;
        let mut checks = vec![Check::from_witness(
            "V_T^C L ≅ V_T L",
            find_iso(&pc.frame, &p.frame).is_none().then(|| format!("{} vs {} elements", pc.frame.len(), p.frame.len())),
        )];
        let g: Vec<usize> = pc.generators().iter().map(|a| p.nabla(a)).collect::<Result<_>>()?;
        let g_ext = extend_hom(&pc.site, &pc.site_frame, &p.frame, &g, HomMode::Suplattice)?;
        let f: Vec<usize> = x
            .iter()
            .map(|alpha| {
                pc.frame.join((0..pc.generators().len()).filter(|&b| related(t, &pc.generators()[b], alpha, &leq)).map(|b| pc.nabla_at(b)))
            })
            .collect();
        let f_ext = extend_hom(&p.site, &p.site_frame, &pc.frame, &f, HomMode::Suplattice)?;
        let gf = f_ext.then(&g_ext)?;
        let fg = g_ext.then(&f_ext)?;
        let w = (0..p.frame.len()).find(|&e| gf.apply(e) != e).map(|e| format!("g′f′ moves {}", p.frame.name(e)));
        checks.push(Check::from_witness("g′ ∘ f′ = id", w));
        let w = (0..pc.frame.len()).find(|&e| fg.apply(e) != e).map(|e| format!("f′g′ moves {}", pc.frame.name(e)));
        checks.push(Check::from_witness("f′ ∘ g′ = id", w));
        checks.push(joins_finite_audit(&p, &pc, cfg));
        Ok(checks)
    };
    match run() {
        Ok(checks) => checks.into_iter().for_each(|c| report.push(c)),
        Err(e) if e.is_cap() => report.push(Check::skipped("clopen comparison", e.to_string())),
        Err(e) => report.push(Check::fail("clopen comparison", e.to_string())),
    }
    report
}

/// For zero-dimensional `L`: every `◁₀` cover over `T L` whose covered
/// generator lies in `T C_L` is matched in `V_T^C L` by the cover built from
/// the clopen part `T⇓Φ`, i.e. `∇^C α ≤ ⋁∇^C[λ(T⇓Φ)]` whenever
/// `α ∈ T C_L` and `α T̄≤ T⋁Φ` for `Φ ∈ T Pfin L`.
pub fn joins_finite_audit(p: &Powerlocale, pc: &Powerlocale, cfg: &Config) -> Check {
    let name = "covers over T C_L are reached by finite clopen covers";
    let (t, l) = (&p.functor, &*p.base_frame);
    if !l.classify().zero_dimensional {
        return Check::skipped(name, "base frame is not zero-dimensional");
    }
    let leq = leq_relation(l);
    let phis = match carrier(&FunctorExpr::Pfin, &p.atoms, cfg).and_then(|s| carrier_over(t, &s, cfg)) {
        Ok(v) => v,
        Err(e) => return Check::skipped(name, e.to_string()),
    };
    let inner = cfg.with_exec(crate::Exec::Sequential);
    let w = cfg.exec.find_first(phis.len(), |i| {
        let phi = &phis[i];
        let run = || -> Result<Option<String>> {
            let top = t_join(t, l, phi)?;
            let clopen_part = map_leaves(t, phi, &mut |s| {
                let atoms: Vec<usize> = s.as_set().unwrap_or(&[]).iter().filter_map(TValue::as_atom).collect();
                Ok(TValue::atoms(l.down_clopen(&atoms)))
            })?;
            if t_join(t, l, &clopen_part)? != top {
                return Ok(Some(format!("T⋁Φ ≠ T⋁T⇓Φ for Φ = {}", p.show(phi))));
            }
            let rhs = pc.nabla_join(&lifted_members(t, &clopen_part, &inner)?)?;
            Ok(pc.generators().iter().enumerate().find_map(|(a, alpha)| {
                (related(t, alpha, &top, &leq) && !pc.frame.leq(pc.nabla_at(a), rhs))
                    .then(|| format!("∇^C{} against Φ = {}", p.show(alpha), p.show(phi)))
            }))
        };
        run().unwrap_or_else(|e| Some(e.to_string()))
    });
    Check::from_witness(name, w).with_detail(format!("{} values Φ; {}", phis.len(), title(pc, "checked")))
}
