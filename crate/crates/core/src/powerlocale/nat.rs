use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::functor::{base, carrier, fmap_table, leaves, related, well_formed, FunctorExpr, Relation, TValue};
use crate::lattice::{FiniteFrame, FrameHom};
use crate::presentation::{extend_hom, HomMode};
use crate::report::{Check, Report};
use crate::{Config, Error, Result};

use super::hom::t_powerlocale_hom;
use super::ops::leq_relation;
use super::{Powerlocale, PowerlocaleCache};

type Component = Arc<dyn Fn(&TValue) -> Result<TValue> + Send + Sync>;

/// A natural transformation `ρ: T′ → T`, given by its component on values.
#[derive(Clone)]
pub struct NatTrans {
    pub name: String,
    pub source: FunctorExpr,
    pub target: FunctorExpr,
    component: Component,
}

impl fmt::Debug for NatTrans {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} → {}", self.name, self.source, self.target)
    }
}

impl NatTrans {
    pub fn custom(
        name: impl Into<String>,
        source: FunctorExpr,
        target: FunctorExpr,
        component: impl Fn(&TValue) -> Result<TValue> + Send + Sync + 'static,
    ) -> Self {
        NatTrans { name: name.into(), source, target, component: Arc::new(component) }
    }

    /// `σ: Id → P`, `x ↦ {x}`.
    pub fn singleton() -> Self {
        Self::custom("singleton", FunctorExpr::Id, FunctorExpr::Pfin, |x| Ok(TValue::set([x.clone()])))
    }

    /// `δ: Id → Id×Id`, `x ↦ (x, x)`.
    pub fn diagonal() -> Self {
        let t = FunctorExpr::prod(FunctorExpr::Id, FunctorExpr::Id);
        Self::custom("diagonal", FunctorExpr::Id, t, |x| Ok(TValue::pair(x.clone(), x.clone())))
    }

    /// `Base: T → P`.
    pub fn base(t: FunctorExpr) -> Self {
        let inner = t.clone();
        Self::custom(format!("base of {t}"), t, FunctorExpr::Pfin, move |v| Ok(TValue::set(leaves(&inner, v)?)))
    }

    pub fn apply(&self, v: &TValue) -> Result<TValue> {
        (self.component)(v)
    }
}

/// Ground data for [`verify_nt`]: relations between ground sets of size up
/// to `max_ground` are enumerated exhaustively when they have at most
/// `exhaustive_cells` pairs, and otherwise `samples` of them are drawn with
/// a seeded generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NtCheck {
    pub max_ground: usize,
    pub exhaustive_cells: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for NtCheck {
    fn default() -> Self {
        NtCheck { max_ground: 3, exhaustive_cells: 6, samples: 40, seed: 0 }
    }
}

fn ground(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Relations `X × Y` for the given sizes, exhaustive or sampled.
fn relations(nx: usize, ny: usize, params: &NtCheck, rng: &mut ChaCha8Rng) -> Vec<Relation> {
    let cells: Vec<(usize, usize)> = (0..nx).flat_map(|x| (0..ny).map(move |y| (x, y))).collect();
    let pick =
        |mask: u64| Relation::new(nx, ny, cells.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| *c)).expect("in range");
    if cells.len() <= params.exhaustive_cells {
        (0u64..1 << cells.len()).map(pick).collect()
    } else {
        (0..params.samples).map(|_| pick(rng.gen::<u64>() & ((1u64 << cells.len()) - 1))).collect()
    }
}

/// All functions `{0..nx} → {0..ny}` as lookup tables.
fn functions(nx: usize, ny: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..nx {
        out = out.into_iter().flat_map(|f| (0..ny).map(move |y| [f.clone(), vec![y]].concat())).collect();
    }
    if ny == 0 && nx > 0 {
        return vec![];
    }
    out
}

/// Checks that `ρ` lands in `T`, respects relation lifting, is
/// base-invariant, and is natural for every function between ground sets
/// of size at most 2.
pub fn verify_nt(rho: &NatTrans, params: &NtCheck, cfg: &Config) -> Report {
    let mut report = Report::new(format!("natural transformation {rho:?}"));
    let (src, tgt) = (&rho.source, &rho.target);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let carriers: Vec<Result<Vec<TValue>>> = (0..=params.max_ground).map(|n| carrier(src, &ground(n), cfg)).collect();
    if let Some(Err(e)) = carriers.iter().find(|c| c.is_err()) {
        report.push(Check::skipped("enumeration", e.to_string()));
        return report;
    }
    let carriers: Vec<Vec<TValue>> = carriers.into_iter().map(|c| c.expect("checked")).collect();

    let mut typed = None;
    let mut invariant = None;
    'outer: for (n, vals) in carriers.iter().enumerate() {
        for v in vals {
            let w = match rho.apply(v) {
                Err(e) => Some(format!("{v}: {e}")),
                Ok(image) if !well_formed(tgt, &image) || base(tgt, &image).map_or(true, |b| b.iter().any(|&a| a >= n)) => {
                    Some(format!("{v} ↦ {image} is not in {tgt} of the ground set"))
                }
                Ok(image) => {
                    if base(src, v).ok() != base(tgt, &image).ok() && invariant.is_none() {
                        invariant = Some(format!("base({v}) ≠ base({image})"));
                    }
                    None
                }
            };
            if w.is_some() {
                typed = w;
                break 'outer;
            }
        }
    }
    report.push(Check::from_witness("components are well-typed", typed.clone()));
    if typed.is_some() {
        return report;
    }
    report.push(Check::from_witness("base-invariant", invariant));

    let mut respects = None;
    let mut count = 0usize;
    'rel: for nx in 1..=params.max_ground {
        for ny in 1..=params.max_ground {
            for r in relations(nx, ny, params, &mut rng) {
                count += 1;
                let leaf = r.as_leaf_relation();
                for a in &carriers[nx] {
                    for b in &carriers[ny] {
                        if related(src, a, b, &leaf) {
                            let (ra, rb) = (rho.apply(a).expect("typed"), rho.apply(b).expect("typed"));
                            if !related(tgt, &ra, &rb, &leaf) {
                                respects = Some(format!("R = {:?}: {a} and {b} related, {ra} and {rb} not", r.pairs()));
                                break 'rel;
                            }
                        }
                    }
                }
            }
        }
    }
    report.push(Check::from_witness("respects relation lifting", respects).with_detail(format!("{count} relations")));

    let mut natural = None;
    let small = params.max_ground.min(2);
    'nat: for (nx, carrier) in carriers.iter().enumerate().take(small + 1) {
        for ny in 0..=small {
            for f in functions(nx, ny) {
                for v in carrier {
                    let left = fmap_table(src, v, &f).and_then(|w| rho.apply(&w));
                    let right = rho.apply(v).and_then(|w| fmap_table(tgt, &w, &f));
                    if left.as_ref().ok() != right.as_ref().ok() || left.is_err() {
                        natural = Some(format!("f = {f:?} at {v}"));
                        break 'nat;
                    }
                }
            }
        }
    }
    report.push(Check::from_witness("naturality for maps between sets of size ≤ 2", natural));
    report
}

/// `ρ̂: V_T L → V_{T′} L`, the join-extension of
/// `α ↦ ⋁{∇α′ | α′ ∈ T′L, ρ(α′) T̄≤ α}`, checked to be a frame homomorphism.
/// `pt` is `V_T L` and `pt_src` is `V_{T′} L`.
pub fn hat_rho(rho: &NatTrans, pt: &Powerlocale, pt_src: &Powerlocale) -> Result<FrameHom> {
    if pt.functor != rho.target || pt_src.functor != rho.source {
        return Err(Error::NtConditionsFailed(format!("{rho:?} does not fit V_{} and V_{}", pt.functor, pt_src.functor)));
    }
    if pt.base_frame.fingerprint() != pt_src.base_frame.fingerprint() {
        return Err(Error::NtConditionsFailed("the two powerlocales have different base frames".into()));
    }
    let l = &*pt.base_frame;
    let leq = leq_relation(l);
    let images = pt_src
        .generators()
        .iter()
        .map(|a| rho.apply(a).map_err(|e| Error::NtConditionsFailed(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    // the conditions on this frame: base-invariance and the lifted order
    for (a, ra) in pt_src.generators().iter().zip(&images) {
        if base(&rho.source, a).ok() != base(&rho.target, ra).ok() {
            return Err(Error::NtConditionsFailed(format!("not base-invariant at {}", pt_src.show(a))));
        }
    }
    for (a, ra) in pt_src.generators().iter().zip(&images) {
        for (b, rb) in pt_src.generators().iter().zip(&images) {
            if related(&rho.source, a, b, &leq) && !related(&rho.target, ra, rb, &leq) {
                return Err(Error::NtConditionsFailed(format!("lifted order not respected at {} ≤ {}", pt_src.show(a), pt_src.show(b))));
            }
        }
    }
    let (fv, fs) = (&pt.frame, &pt_src.frame);
    let g: Vec<usize> = pt
        .generators()
        .iter()
        .map(|alpha| fs.join((0..images.len()).filter(|&i| related(&rho.target, &images[i], alpha, &leq)).map(|i| pt_src.nabla_at(i))))
        .collect();
    let map = (0..fv.len()).map(|e| fs.join(pt.site_frame.ideals[e].ones().map(|x| g[x]))).collect();
    let h = FrameHom::new(fv.clone(), fs.clone(), map)?;
    h.check().map_err(|v| Error::NtConditionsFailed(format!("ρ̂ fails {} at {:?}", v.law, v.arguments)))?;
    Ok(h)
}

/// `ε: V_P L → L`, `∇A ↦ ⋀A`: `σ̂` followed by the isomorphism
/// `V_Id L ≅ L`. `pp` is `V_P L` and `pid` is `V_Id L`.
pub fn counit(pp: &Powerlocale, pid: &Powerlocale) -> Result<FrameHom> {
    let to_base = id_iso(pid)?;
    hat_rho(&NatTrans::singleton(), pp, pid)?.then(&to_base)
}

/// The isomorphism `V_Id L → L` extending `∇a ↦ a`.
fn id_iso(pid: &Powerlocale) -> Result<FrameHom> {
    let g = pid
        .generators()
        .iter()
        .map(|a| a.as_atom().ok_or_else(|| Error::Input("V_Id generators are atoms".into())))
        .collect::<Result<Vec<_>>>()?;
    let h = extend_hom(&pid.site, &pid.site_frame, &pid.base_frame, &g, HomMode::Frame)?;
    if !h.is_bijective() {
        return Err(Error::Input("V_Id L → L is not bijective".into()));
    }
    Ok(h)
}

/// Checks the counit on every generator, compares it with the direct
/// extension of `A ↦ ⋀A` (with `∅ ↦ 0`), and confirms that the literal
/// value `⋀∅ = 1` is rejected by the site conditions on non-trivial frames.
pub fn counit_audit(pp: &Powerlocale, pid: &Powerlocale) -> Report {
    let l = &pp.base_frame;
    let mut report = Report::new(format!("counit of a {}-element frame", l.len()));
    let eps = match counit(pp, pid) {
        Ok(h) => h,
        Err(e) => {
            report.push(Check::fail("construction", e.to_string()));
            return report;
        }
    };
    report.push(Check::from_witness("counit is a frame homomorphism", eps.check().err().map(|v| v.law.to_string())));
    let meet_of = |alpha: &TValue| -> usize {
        let atoms: Vec<usize> = alpha.as_set().unwrap_or(&[]).iter().filter_map(TValue::as_atom).collect();
        if atoms.is_empty() {
            l.bottom()
        } else {
            l.meet(atoms)
        }
    };
    let w = pp.generators().iter().enumerate().find_map(|(i, alpha)| {
        let got = eps.apply(pp.nabla_at(i));
        (got != meet_of(alpha)).then(|| format!("ε(∇{}) = {}", pp.show(alpha), l.name(got)))
    });
    report.push(Check::from_witness("ε(∇A) = ⋀A for A ≠ ∅ and ε(∇∅) = 0", w));

    let g: Vec<usize> = pp.generators().iter().map(meet_of).collect();
    report.push(match extend_hom(&pp.site, &pp.site_frame, l, &g, HomMode::Frame) {
        Ok(direct) => {
            Check::from_witness("agrees with the extension of A ↦ ⋀A", (direct.map() != eps.map()).then(|| "maps differ".to_string()))
        }
        Err(e) => Check::fail("agrees with the extension of A ↦ ⋀A", e.to_string()),
    });
    if l.len() > 1 {
        let literal: Vec<usize> =
            pp.generators().iter().map(|a| if a.as_set().is_some_and(|s| s.is_empty()) { l.top() } else { meet_of(a) }).collect();
        let rejected = extend_hom(&pp.site, &pp.site_frame, l, &literal, HomMode::Frame).is_err();
        report.push(Check::from_witness(
            "∇∅ ↦ ⋀∅ = 1 violates the site conditions",
            (!rejected).then(|| "the literal assignment extends".to_string()),
        ));
    }
    report
}

/// `V_{T′} f ∘ ρ̂_L = ρ̂_M ∘ V_T f` for each hom `f: L → M`.
pub fn naturality_audit(rho: &NatTrans, homs: &[FrameHom], cache: &PowerlocaleCache, cfg: &Config) -> Report {
    let mut report = Report::new(format!("naturality of ρ̂ for {rho:?}"));
    for (k, f) in homs.iter().enumerate() {
        let name = format!("square {k} ({} → {} elements)", f.source().len(), f.target().len());
        let run = || -> Result<Option<String>> {
            let (l, m) = (f.source(), f.target());
            let (tl, tm) = (cache.get(&rho.target, l, cfg)?, cache.get(&rho.target, m, cfg)?);
            let (sl, sm) = (cache.get(&rho.source, l, cfg)?, cache.get(&rho.source, m, cfg)?);
            let left = hat_rho(rho, &tl, &sl)?.then(&t_powerlocale_hom(&sl, &sm, f)?)?;
            let right = t_powerlocale_hom(&tl, &tm, f)?.then(&hat_rho(rho, &tm, &sm)?)?;
            Ok((0..tl.frame.len()).find(|&e| left.apply(e) != right.apply(e)).map(|e| format!("at {}", tl.frame.name(e))))
        };
        report.push(match run() {
            Ok(w) => Check::from_witness(name, w),
            Err(e) if e.is_cap() => Check::skipped(name, e.to_string()),
            Err(e) => Check::fail(name, e.to_string()),
        });
    }
    report
}

/// Draws `count` homomorphisms between the given frames with a seeded
/// generator, from the full list of homs for random source/target pairs.
pub fn sample_homs(frames: &[Arc<FiniteFrame>], count: usize, seed: u64) -> Vec<FrameHom> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count && !frames.is_empty() {
        let (l, m) = (&frames[rng.gen_range(0..frames.len())], &frames[rng.gen_range(0..frames.len())]);
        let homs = l.all_homs_to(m);
        if homs.is_empty() {
            continue;
        }
        let map = homs[rng.gen_range(0..homs.len())].clone();
        out.push(FrameHom::new(l.clone(), m.clone(), map).expect("enumerated hom"));
    }
    out
}
