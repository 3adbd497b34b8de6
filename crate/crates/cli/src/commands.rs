use std::fmt::Write as _;

use anyhow::{bail, Result};
use powerlocale_core::checks;
use powerlocale_core::functor::{
    base as value_base, carrier, lift_relation, lift_relation_span_oracle, lifted_members, slim_redistributions,
    slim_redistributions_by_enumeration, well_formed, FunctorExpr, TValue,
};
use powerlocale_core::lattice::find_iso;
use powerlocale_core::powerlocale::{
    basic_facts_audit, carioca_audit, clopen_powerlocale, preservation_audit, stability_lemma_audit, structure_audit, t_powerlocale,
    PowerlocaleCache,
};
use powerlocale_core::report::Report;
use powerlocale_core::vietoris::{vietoris_compare, vietoris_frame_oracle, vietoris_presentation};
use powerlocale_core::Config;
use serde_json::{json, Value};

use crate::input::{load_frame, read_json, RelationFile};
use crate::{Audit, Format, FrameAction};

pub struct Opts {
    pub cfg: Config,
    pub format: Format,
    pub seed: u64,
    pub oracle: bool,
}

pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, passed: true }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn render(opts: &Opts, json: Value, text: impl FnOnce() -> String) -> Result<String> {
    match opts.format {
        Format::Json => Ok(pretty(&json)),
        Format::Text => Ok(text()),
        Format::Dot => bail!("this command has no DOT output"),
    }
}

fn reports_text(reports: &[Report]) -> String {
    reports.iter().map(Report::to_text).collect::<Vec<_>>().join("\n")
}

fn parse(expr: &str) -> Result<FunctorExpr> {
    Ok(FunctorExpr::parse(expr)?)
}

fn shown(v: &TValue, names: &[String]) -> String {
    v.display_with(&|a| names.get(a).cloned().unwrap_or_else(|| a.to_string()))
}

fn numbered(v: &TValue) -> String {
    v.to_string()
}

pub fn frame(opts: &Opts, action: FrameAction, spec: &str) -> Result<Output> {
    let f = load_frame(spec, &opts.cfg)?;
    let text = match action {
        FrameAction::Validate => {
            render(opts, json!({"valid": true, "elements": f.len()}), || format!("valid frame with {} elements\n", f.len()))?
        }
        FrameAction::Classify => {
            let c = f.classify();
            render(opts, serde_json::to_value(c)?, || {
                format!(
                    "regular: {}\nzero_dimensional: {}\ncompact: {} (every finite frame is compact)\n",
                    c.regular, c.zero_dimensional, c.compact
                )
            })?
        }
        FrameAction::Show => match opts.format {
            Format::Dot => f.to_dot(spec),
            Format::Json => pretty(&serde_json::to_value(f.to_json())?),
            Format::Text => {
                let mut s = format!("{} elements: {}\n", f.len(), f.names().join(", "));
                for (a, b) in f.hasse() {
                    let _ = writeln!(s, "  {} < {}", f.name(a), f.name(b));
                }
                s
            }
        },
    };
    Ok(Output::ok(text))
}

pub fn functor(opts: &Opts, expr: &str, n: Option<usize>) -> Result<Output> {
    let t = parse(expr)?;
    let mut j = json!({"functor": t.to_string(), "ascii": t.to_ascii(), "finite_to_finite": t.finite_to_finite()});
    let values = n.map(|n| carrier(&t, &(0..n).collect::<Vec<_>>(), &opts.cfg)).transpose()?;
    if let Some(vs) = &values {
        j["carrier"] = json!(vs.iter().map(numbered).collect::<Vec<_>>());
    }
    let text = render(opts, j, || {
        let mut s = format!("{t}\nascii: {}\nfinite to finite: {}\n", t.to_ascii(), t.finite_to_finite());
        if let Some(vs) = &values {
            let _ = writeln!(s, "carrier ({} values):", vs.len());
            vs.iter().for_each(|v| s.push_str(&format!("  {v}\n")));
        }
        s
    })?;
    Ok(Output::ok(text))
}

pub fn lift(opts: &Opts, functor: &str, path: &str) -> Result<Output> {
    let t = parse(functor)?;
    let file = RelationFile::load(path)?;
    let r = file.relation()?;
    let lifted = lift_relation(&t, &r);
    let mut j = json!({"functor": t.to_string()});
    let mut passed = true;
    let mut text = String::new();
    if !file.queries.is_empty() {
        let mut answers = Vec::new();
        for (a, b) in &file.queries {
            let related = lifted.contains(a, b)?;
            let witness = lifted.witness(a, b)?;
            let pair = (shown(a, &file.left), shown(b, &file.right));
            let _ = writeln!(text, "{} ~ {}: {related}", pair.0, pair.1);
            if let Some(w) = &witness {
                let _ = writeln!(text, "  witness {}", numbered(w));
            }
            answers.push(json!({"left": pair.0, "right": pair.1, "related": related, "witness": witness}));
        }
        j["queries"] = json!(answers);
    } else {
        if !t.finite_to_finite() {
            bail!("{t} has infinite carriers; give queries in the relation file");
        }
        let pairs = lifted.pairs(&opts.cfg)?;
        let named: Vec<(String, String)> = pairs.iter().map(|(a, b)| (shown(a, &file.left), shown(b, &file.right))).collect();
        named.iter().for_each(|(a, b)| text.push_str(&format!("{a} ~ {b}\n")));
        j["pairs"] = json!(named);
        if opts.oracle {
            let oracle = lift_relation_span_oracle(&t, &r, &opts.cfg)?;
            let (extra, missing): (Vec<_>, Vec<_>) =
                (pairs.iter().filter(|p| !oracle.contains(p)).collect(), oracle.iter().filter(|p| !pairs.contains(p)).collect());
            passed = extra.is_empty() && missing.is_empty();
            let _ = writeln!(text, "span oracle agrees: {passed}");
            let show = |v: &[&(TValue, TValue)]| v.iter().map(|(a, b)| (shown(a, &file.left), shown(b, &file.right))).collect::<Vec<_>>();
            j["oracle"] = json!({"agrees": passed, "only_structural": show(&extra), "only_oracle": show(&missing)});
        }
    }
    let out = match opts.format {
        Format::Text => text,
        _ => render(opts, j, String::new)?,
    };
    Ok(Output { text: out, passed })
}

fn value_for(t: &FunctorExpr, arg: &str) -> Result<TValue> {
    let v: TValue = read_json(arg)?;
    if !well_formed(t, &v) {
        bail!("value {v} does not have the shape of {t}");
    }
    Ok(v)
}

pub fn base(opts: &Opts, functor: &str, value: &str) -> Result<Output> {
    let t = parse(functor)?;
    let v = value_for(&t, value)?;
    let b: Vec<usize> = value_base(&t, &v)?.into_iter().collect();
    Ok(Output::ok(render(opts, json!({"value": numbered(&v), "base": b}), || format!("{b:?}\n"))?))
}

pub fn lambda(opts: &Opts, functor: &str, value: &str) -> Result<Output> {
    let t = parse(functor)?;
    let phi: TValue = read_json(value)?;
    let members = lifted_members(&t, &phi, &opts.cfg)?;
    let shown: Vec<String> = members.iter().map(numbered).collect();
    Ok(Output::ok(render(opts, json!({"phi": numbered(&phi), "lifted_members": shown}), || shown.join("\n") + "\n")?))
}

pub fn srd(opts: &Opts, functor: &str, gamma: &str) -> Result<Output> {
    let t = parse(functor)?;
    let gamma: Vec<TValue> = read_json(gamma)?;
    if let Some(g) = gamma.iter().find(|g| !well_formed(&t, g)) {
        bail!("value {g} does not have the shape of {t}");
    }
    let srd = slim_redistributions(&t, &gamma, &opts.cfg)?;
    let shown: Vec<String> = srd.iter().map(numbered).collect();
    let mut j = json!({"gamma": gamma.iter().map(numbered).collect::<Vec<_>>(), "srd": shown});
    let mut passed = true;
    if opts.oracle {
        passed = slim_redistributions_by_enumeration(&t, &gamma, &opts.cfg)? == srd;
        j["oracle_agrees"] = json!(passed);
    }
    let text = render(opts, j, || {
        let mut s = shown.join("\n") + "\n";
        if opts.oracle {
            let _ = writeln!(s, "enumeration agrees: {passed}");
        }
        s
    })?;
    Ok(Output { text, passed })
}

pub fn powerlocale(opts: &Opts, functor: &str, frame: &str, audits: &[Audit], clopen: bool) -> Result<Output> {
    let t = parse(functor)?;
    let l = load_frame(frame, &opts.cfg)?;
    let cfg = &opts.cfg;
    let p = if clopen { clopen_powerlocale(&t, &l, cfg)? } else { t_powerlocale(&t, &l, cfg)? };
    let wants = |a: Audit| audits.contains(&a) || audits.contains(&Audit::All);
    let mut reports = Vec::new();
    if wants(Audit::Structure) {
        reports.push(structure_audit(&p, cfg));
    }
    if wants(Audit::Carioca) {
        reports.push(carioca_audit(&p, cfg));
    }
    if wants(Audit::Basic) {
        reports.push(basic_facts_audit(&p, cfg));
    }
    if wants(Audit::Stability) {
        let mut r = Report::new("stability");
        r.push(stability_lemma_audit(&p, checks::STABILITY_LIMIT, opts.seed, cfg));
        reports.push(r);
    }
    if wants(Audit::Preservation) {
        reports.push(preservation_audit(&t, &l, &PowerlocaleCache::new(), cfg));
    }
    if wants(Audit::VietorisCompare) {
        if t != FunctorExpr::Pfin || clopen {
            if audits.contains(&Audit::VietorisCompare) {
                bail!("the Vietoris comparison needs the functor P over all of L");
            }
        } else {
            reports.push(vietoris_compare(&p, cfg));
        }
    }
    let passed = reports.iter().all(Report::passed);
    let iso = find_iso(&p.frame, &l).is_some();
    let summary = || {
        json!({
            "functor": t.to_string(),
            "base_elements": l.len(),
            "generators": p.generators().len(),
            "covers": p.site.covers().len(),
            "elements": p.frame.len(),
            "isomorphic_to_base": iso,
            "classification": p.frame.classify(),
        })
    };
    let text = match opts.format {
        Format::Dot => p.to_dot(),
        Format::Json => {
            let mut j = summary();
            j["passed"] = json!(passed);
            j["reports"] = serde_json::to_value(&reports)?;
            pretty(&j)
        }
        Format::Text => {
            let mut s = format!(
                "V_{t} of a {}-element frame: {} generators, {} covers, {} elements{}\n",
                l.len(),
                p.generators().len(),
                p.site.covers().len(),
                p.frame.len(),
                if iso { ", isomorphic to the base frame" } else { "" }
            );
            if !reports.is_empty() {
                s.push('\n');
                s.push_str(&reports_text(&reports));
            }
            s
        }
    };
    Ok(Output { text, passed })
}

pub fn vietoris(opts: &Opts, frame: &str) -> Result<Output> {
    let l = load_frame(frame, &opts.cfg)?;
    let vp = vietoris_presentation(&l);
    let cfg = &opts.cfg;
    let oracle = match vietoris_frame_oracle(&l, cfg) {
        Ok(o) => Some(o),
        Err(e) if e.is_cap() => None,
        Err(e) => return Err(e.into()),
    };
    let p = t_powerlocale(&FunctorExpr::Pfin, &l, cfg)?;
    let report = vietoris_compare(&p, cfg);
    let passed = report.passed();
    let text = match opts.format {
        Format::Dot => match &oracle {
            Some(o) => o.frame().to_dot("V L"),
            None => bail!("the free-frame oracle is over its cap for this frame; no diagram of V L"),
        },
        Format::Json => pretty(&json!({
            "presentation": vp.presentation.to_json(),
            "oracle_elements": oracle.as_ref().map(|o| o.frame().len()),
            "powerlocale_elements": p.frame.len(),
            "passed": passed,
            "report": report,
        })),
        Format::Text => {
            let mut s = format!("{} generators, {} relations\n", vp.presentation.generators.len(), vp.presentation.relations.len());
            match &oracle {
                Some(o) => {
                    let _ = writeln!(s, "V L has {} elements", o.frame().len());
                }
                None => s.push_str("V L: free-frame oracle over its cap\n"),
            }
            let _ = writeln!(s, "V_P L has {} elements\n", p.frame.len());
            s + &report.to_text()
        }
    };
    Ok(Output { text, passed })
}

pub fn check_all(opts: &Opts) -> Result<Output> {
    let all = checks::check_all(&opts.cfg, opts.seed);
    let text = match opts.format {
        Format::Json => all.to_json() + "\n",
        Format::Text => reports_text(&all.reports),
        Format::Dot => bail!("check-all has no DOT output"),
    };
    Ok(Output { text, passed: all.passed })
}
