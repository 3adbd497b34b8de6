use crate::functor::fmap_table;
use crate::lattice::FrameHom;
use crate::presentation::{extend_hom, HomMode};
use crate::report::{Check, Report};
use crate::{Config, Error, Result};

use super::{Powerlocale, PowerlocaleCache};

/// `V_T f`: the frame homomorphism extending `α ↦ ∇(T f (α))` from the
/// ∇-site of `pl` into `pm`.
pub fn t_powerlocale_hom(pl: &Powerlocale, pm: &Powerlocale, f: &FrameHom) -> Result<FrameHom> {
    if pl.functor != pm.functor {
        return Err(Error::Input(format!("functors differ: {} and {}", pl.functor, pm.functor)));
    }
    if f.source().fingerprint() != pl.base_frame.fingerprint() || f.target().fingerprint() != pm.base_frame.fingerprint() {
        return Err(Error::Input("homomorphism does not connect the two base frames".into()));
    }
    let g = pl.generators().iter().map(|alpha| pm.nabla(&fmap_table(&pl.functor, alpha, f.map())?)).collect::<Result<Vec<_>>>()?;
    extend_hom(&pl.site, &pl.site_frame, &pm.frame, &g, HomMode::Frame)
}

/// `V_T id = id` on both ends of `f` and `g`, and `V_T(g ∘ f) = V_T g ∘ V_T f`.
pub fn functoriality_audit(t: &crate::functor::FunctorExpr, f: &FrameHom, g: &FrameHom, cache: &PowerlocaleCache, cfg: &Config) -> Report {
    let mut report = Report::new(format!("functoriality of V_{t}"));
    let run = || -> Result<Vec<Check>> {
        let (pl, pm, pn) = (cache.get(t, f.source(), cfg)?, cache.get(t, f.target(), cfg)?, cache.get(t, g.target(), cfg)?);
        let mut checks = Vec::new();
        for (name, p) in [("source", &pl), ("middle", &pm), ("target", &pn)] {
            let id = FrameHom::identity(p.base_frame.clone());
            let vid = t_powerlocale_hom(p, p, &id)?;
            let w = (vid.map() != FrameHom::identity(p.frame.clone()).map()).then(|| "V_T id moves an element".to_string());
            checks.push(Check::from_witness(format!("V_T id = id on the {name} frame"), w));
        }
        let vf = t_powerlocale_hom(&pl, &pm, f)?;
        let vg = t_powerlocale_hom(&pm, &pn, g)?;
        let vgf = t_powerlocale_hom(&pl, &pn, &f.then(g)?)?;
        let composed = vf.then(&vg)?;
        let w = (0..pl.frame.len())
            .find(|&e| composed.apply(e) != vgf.apply(e))
            .map(|e| format!("at {}: {} vs {}", pl.frame.name(e), pn.frame.name(composed.apply(e)), pn.frame.name(vgf.apply(e))));
        checks.push(Check::from_witness("V_T(g∘f) = V_T g ∘ V_T f", w));
        for (name, h) in [("V_T f", &vf), ("V_T g", &vg)] {
            checks.push(Check::from_witness(format!("{name} is a frame homomorphism"), h.check().err().map(|v| v.law.to_string())));
        }
        Ok(checks)
    };
    match run() {
        Ok(checks) => checks.into_iter().for_each(|c| report.push(c)),
        Err(e) if e.is_cap() => report.push(Check::skipped("construction", e.to_string())),
        Err(e) => report.push(Check::fail("construction", e.to_string())),
    }
    report
}
