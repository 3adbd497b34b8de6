//! The full audit battery over the fixture functors and frames, as run by
//! `powerlocale check-all`. Output depends only on the configuration caps and
//! the seed.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::functor::FunctorExpr;
use crate::lattice::{FiniteFrame, FrameHom};
use crate::powerlocale::{
    basic_facts_audit, bl1_audit, carioca_audit, counit_audit, functoriality_audit, lifted_downset_audit, naturality_audit,
    preservation_audit, sample_homs, stability_lemma_audit, structure_audit, verify_nt, NatTrans, NtCheck, PowerlocaleCache,
};
use crate::report::{Check, Report};
use crate::vietoris::vietoris_compare;
use crate::{Config, Result};

pub const FIXTURE_FUNCTORS: [&str; 5] = ["Id", "P", "Id*Id", "C[2]+Id", "P.(Id*Id)"];

/// Sample sizes for the audits that do not run exhaustively.
pub const STABILITY_LIMIT: usize = 512;
pub const DOWNSET_LIMIT: usize = 200;
pub const BL1_LIMIT: usize = 40;
pub const NATURALITY_HOMS: usize = 5;

pub fn fixture_frames() -> Vec<Arc<FiniteFrame>> {
    vec![Arc::new(FiniteFrame::two()), Arc::new(FiniteFrame::c3()), Arc::new(FiniteFrame::b2())]
}

pub fn fixture_functors() -> Vec<FunctorExpr> {
    FIXTURE_FUNCTORS.iter().map(|t| FunctorExpr::parse(t).expect("fixture functor parses")).collect()
}

/// `𝟚 → C3` (the initial map) followed by `C3 → B2` sending the middle
/// element to `0`.
pub fn functoriality_pair(frames: &[Arc<FiniteFrame>]) -> Result<(FrameHom, FrameHom)> {
    let (c3, b2) = (frames[1].clone(), frames[2].clone());
    let f = FrameHom::new(frames[0].clone(), c3.clone(), vec![c3.bottom(), c3.top()])?;
    let g = FrameHom::new(c3, b2.clone(), vec![b2.bottom(), b2.bottom(), b2.top()])?;
    Ok((f, g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckAll {
    pub seed: u64,
    pub passed: bool,
    pub reports: Vec<Report>,
}

impl CheckAll {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn guarded(title: String, r: Result<Report>) -> Report {
    r.unwrap_or_else(|e| {
        let mut report = Report::new(title);
        report.push(if e.is_cap() { Check::skipped("construction", e.to_string()) } else { Check::fail("construction", e.to_string()) });
        report
    })
}

pub fn check_all(cfg: &Config, seed: u64) -> CheckAll {
    let cache = PowerlocaleCache::new();
    let frames = fixture_frames();
    let mut reports = Vec::new();

    for t in fixture_functors() {
        for l in &frames {
            let title = format!("V_{t} of a {}-element frame", l.len());
            reports.push(guarded(
                title.clone(),
                (|| {
                    let p = cache.get(&t, l, cfg)?;
                    let mut r = Report::new(title.clone());
                    r.extend(structure_audit(&p, cfg));
                    r.extend(carioca_audit(&p, cfg));
                    r.extend(basic_facts_audit(&p, cfg));
                    r.push(stability_lemma_audit(&p, STABILITY_LIMIT, seed, cfg).with_detail("M = L"));
                    let pc = cache.get_clopen(&t, l, cfg)?;
                    r.push(stability_lemma_audit(&pc, STABILITY_LIMIT, seed, cfg).with_detail("M = C_L"));
                    Ok(r)
                })(),
            ));
        }
        for l in &frames {
            reports.push(lifted_downset_audit(&t, l, DOWNSET_LIMIT, seed, cfg));
        }
        reports.push(bl1_audit(&t, BL1_LIMIT, seed, cfg));
    }

    for l in &frames {
        let title = format!("Vietoris comparison for a {}-element frame", l.len());
        reports.push(guarded(title, cache.get(&FunctorExpr::Pfin, l, cfg).map(|p| vietoris_compare(&p, cfg))));
        let title = format!("counit of a {}-element frame", l.len());
        let counit = || -> Result<Report> {
            let (pp, pid) = (cache.get(&FunctorExpr::Pfin, l, cfg)?, cache.get(&FunctorExpr::Id, l, cfg)?);
            Ok(counit_audit(&pp, &pid))
        };
        reports.push(guarded(title, counit()));
    }

    let params = NtCheck { seed, ..NtCheck::default() };
    let rhos = [
        NatTrans::singleton(),
        NatTrans::diagonal(),
        NatTrans::base(FunctorExpr::Pfin),
        NatTrans::base(FunctorExpr::parse("Id*Id").expect("parses")),
    ];
    let homs = sample_homs(&frames, NATURALITY_HOMS, seed);
    for rho in &rhos {
        reports.push(verify_nt(rho, &params, cfg));
        reports.push(naturality_audit(rho, &homs, &cache, cfg));
    }

    match functoriality_pair(&frames) {
        Ok((f, g)) => {
            for t in [FunctorExpr::Id, FunctorExpr::Pfin] {
                reports.push(functoriality_audit(&t, &f, &g, &cache, cfg));
            }
        }
        Err(e) => reports.push(guarded("functoriality".into(), Err(e))),
    }

    for t in ["Id", "P", "Id*Id"] {
        let t = FunctorExpr::parse(t).expect("parses");
        for l in &frames {
            reports.push(preservation_audit(&t, l, &cache, cfg));
        }
    }

    let passed = reports.iter().all(Report::passed);
    CheckAll { seed, passed, reports }
}
