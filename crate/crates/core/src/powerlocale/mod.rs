//! The T-powerlocale `V_T L`: the frame generated by `∇α` for `α ∈ T L`,
//! computed as the C-ideal frame of the ∇-site, together with its action on
//! homomorphisms, natural transformations, the counit, the clopen variant
//! `V_T^C L`, and audits of the defining relations.
//!
//! For a finite frame `P L = Pfin L`, so the covers range over `T Pfin L`.

mod audit;
mod clopen;
mod hom;
mod lemmas;
mod nat;
mod ops;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;

use crate::functor::{carrier, carrier_over, carrier_size, lifted_members, related, FunctorExpr, TValue};
use crate::lattice::FiniteFrame;
use crate::presentation::{check_insertion, frame_of_flat_site, FlatSite, SiteFrame};
use crate::{Config, Error, Exec, Result};

pub use audit::{basic_facts_audit, carioca_audit, normal_form_audit, structure_audit};
pub use clopen::{clopen_powerlocale, joins_finite_audit, preservation_audit};
pub use hom::{functoriality_audit, t_powerlocale_hom};
pub use lemmas::{bl1_audit, lifted_downset_audit, stability_lemma_audit};
pub use nat::{counit, counit_audit, hat_rho, naturality_audit, sample_homs, verify_nt, NatTrans, NtCheck};
pub use ops::{leq_relation, t_down, t_eta, t_join, t_meet, well_inside_relation};

/// Whether the generators range over all of `L` or only over its clopens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorBase {
    Full,
    Clopen,
}

#[derive(Debug, Clone)]
pub struct Powerlocale {
    pub functor: FunctorExpr,
    pub base_frame: Arc<FiniteFrame>,
    pub generator_base: GeneratorBase,
    /// Atoms of `L` the generators are built from: all of `L`, or `C_L`.
    pub atoms: Vec<usize>,
    pub site: FlatSite,
    pub site_frame: SiteFrame,
    pub frame: Arc<FiniteFrame>,
    /// Number of distinct `(T⋁Φ, λ(Φ))` pairs the covers were built from.
    pub cover_sources: usize,
    index: HashMap<TValue, usize>,
}

impl Powerlocale {
    pub fn generators(&self) -> &[TValue] {
        self.site.generators()
    }

    pub fn generator_index(&self, alpha: &TValue) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    /// `∇α` as a frame element.
    pub fn nabla(&self, alpha: &TValue) -> Result<usize> {
        self.generator_index(alpha)
            .map(|i| self.site_frame.insertion[i])
            .ok_or_else(|| Error::ShapeMismatch { functor: format!("{} over the generator atoms", self.functor), value: alpha.to_string() })
    }

    /// `∇` of the `i`-th generator.
    pub fn nabla_at(&self, i: usize) -> usize {
        self.site_frame.insertion[i]
    }

    /// `⋁{∇α | α ∈ alphas}`.
    pub fn nabla_join<'a>(&self, alphas: impl IntoIterator<Item = &'a TValue>) -> Result<usize> {
        let elems = alphas.into_iter().map(|a| self.nabla(a)).collect::<Result<Vec<_>>>()?;
        Ok(self.frame.join(elems))
    }

    /// A generator rendered with the frame's element names.
    pub fn show(&self, alpha: &TValue) -> String {
        alpha.display_with(&|a| self.base_frame.name(a).to_string())
    }

    pub fn label(&self, i: usize) -> String {
        format!("∇{}", self.show(&self.generators()[i]))
    }

    /// Hasse diagram; elements are named by their maximal ∇-generators.
    pub fn to_dot(&self) -> String {
        let title = match self.generator_base {
            GeneratorBase::Full => format!("V_{}", self.functor),
            GeneratorBase::Clopen => format!("V^C_{}", self.functor),
        };
        self.frame.to_dot(&title)
    }
}

/// The ∇-site of `(T, L)`: generators `T L`, pre-order the lifted order,
/// and `α ◁₀ λ(Φ)` whenever `α` lies below `T⋁(Φ)`, for `Φ ∈ T Pfin L`.
pub fn nabla_site(t: &FunctorExpr, l: &FiniteFrame, cfg: &Config) -> Result<FlatSite> {
    let atoms: Vec<usize> = (0..l.len()).collect();
    Ok(build_site(t, l, &atoms, cfg)?.0)
}

/// The ∇-site with generators and covers restricted to `atoms`, which must
/// be closed under finite joins and meets of `L`.
pub(crate) fn build_site(t: &FunctorExpr, l: &FiniteFrame, atoms: &[usize], cfg: &Config) -> Result<(FlatSite, usize)> {
    if !t.finite_to_finite() {
        return Err(Error::NotFiniteToFinite(t.to_string()));
    }
    let subsets_len = 1u128.checked_shl(atoms.len() as u32).filter(|_| atoms.len() < 127);
    cfg.check_carrier(&format!("{t} over the subsets of the frame"), subsets_len.and_then(|s| carrier_size(t, s)))?;

    let generators = carrier(t, atoms, cfg)?;
    let n = generators.len();
    let index: HashMap<&TValue, usize> = generators.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let leq = leq_relation(l);
    let below: Vec<FixedBitSet> = cfg.exec.range_map(n, |a| {
        let mut row = FixedBitSet::with_capacity(n);
        row.extend((0..n).filter(|&b| related(t, &generators[b], &generators[a], &leq)));
        row
    });

    let subsets = carrier(&FunctorExpr::Pfin, atoms, cfg)?;
    let phis = carrier_over(t, &subsets, cfg)?;
    let inner = cfg.with_exec(Exec::Sequential);
    let sources: Vec<Result<(usize, Vec<usize>)>> = cfg.exec.map(&phis, |phi| {
        let top = t_join(t, l, phi)?;
        let top = *index.get(&top).ok_or_else(|| Error::Input(format!("{top} is not a generator")))?;
        let mut lam: Vec<usize> = lifted_members(t, phi, &inner)?
            .iter()
            .map(|m| index.get(m).copied().ok_or_else(|| Error::Input(format!("lifted member {m} is not a generator"))))
            .collect::<Result<_>>()?;
        lam.sort_unstable();
        Ok((top, lam))
    });
    let mut distinct = BTreeSet::new();
    for s in sources {
        distinct.insert(s?);
    }
    let cover_sources = distinct.len();
    let covers: Vec<(usize, FixedBitSet)> = reduce_covers(&below, &distinct, n);
    Ok((FlatSite::from_parts(generators, below, covers), cover_sources))
}

/// Expands each `(β, Γ)` to `α ◁₀ Γ` for all `α ≲ β`, dropping `α ◁₀ Γ`
/// when a kept `α ◁₀ Δ` has `Δ ⊆ ↓Γ`. Such a cover fires on no C-ideal
/// that `Δ` does not already fire on, and stability passes from `Γ` to `Δ`,
/// so the site stays flat with the same C-ideals. Since `α ◁₀ {α}` is always
/// present (take `Φ = Tη(α)`), this also removes every cover with `α ∈ ↓Γ`.
fn reduce_covers(below: &[FixedBitSet], sources: &BTreeSet<(usize, Vec<usize>)>, n: usize) -> Vec<(usize, FixedBitSet)> {
    let down_of = |s: &[usize]| {
        let mut out = FixedBitSet::with_capacity(n);
        for &a in s {
            out.union_with(&below[a]);
        }
        out
    };
    let mut per_generator: Vec<Vec<(FixedBitSet, FixedBitSet)>> = vec![Vec::new(); n];
    for (top, lam) in sources {
        let mut set = FixedBitSet::with_capacity(n);
        set.extend(lam.iter().copied());
        let down = down_of(lam);
        for alpha in below[*top].ones() {
            per_generator[alpha].push((set.clone(), down.clone()));
        }
    }
    let mut out = Vec::new();
    for (alpha, mut candidates) in per_generator.into_iter().enumerate() {
        // smaller down-closures first, so a dominating cover is kept before
        // anything it makes redundant
        candidates.sort_by_key(|(_, down)| (down.count_ones(..), down.ones().collect::<Vec<_>>()));
        let mut kept: Vec<(FixedBitSet, FixedBitSet)> = Vec::new();
        for (set, down) in candidates {
            if !kept.iter().any(|(k, _)| k.is_subset(&down)) {
                kept.push((set, down));
            }
        }
        out.extend(kept.into_iter().map(|(set, _)| (alpha, set)));
    }
    out
}

/// Builds `V_T L`; construction fails loudly if the insertion does not
/// satisfy the presented-frame conditions.
pub fn t_powerlocale(t: &FunctorExpr, l: &Arc<FiniteFrame>, cfg: &Config) -> Result<Powerlocale> {
    let atoms: Vec<usize> = (0..l.len()).collect();
    assemble(t, l, atoms, GeneratorBase::Full, cfg)
}

pub(crate) fn assemble(
    t: &FunctorExpr,
    l: &Arc<FiniteFrame>,
    atoms: Vec<usize>,
    generator_base: GeneratorBase,
    cfg: &Config,
) -> Result<Powerlocale> {
    let (site, cover_sources) = build_site(t, l, &atoms, cfg)?;
    let label = |i: usize| format!("∇{}", site.generators()[i].display_with(&|a| l.name(a).to_string()));
    let site_frame = frame_of_flat_site(&site, &label, cfg)?;
    check_insertion(&site, &site_frame)?;
    let index = site.generators().iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    Ok(Powerlocale {
        functor: t.clone(),
        base_frame: l.clone(),
        generator_base,
        atoms,
        frame: site_frame.frame.clone(),
        site,
        site_frame,
        cover_sources,
        index,
    })
}

type CacheKey = (String, String, GeneratorBase);

/// Memoizes `V_T L` per functor text, frame fingerprint and generator base.
#[derive(Debug, Default)]
pub struct PowerlocaleCache {
    entries: Mutex<HashMap<CacheKey, Arc<Powerlocale>>>,
}

impl PowerlocaleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, t: &FunctorExpr, l: &Arc<FiniteFrame>, cfg: &Config) -> Result<Arc<Powerlocale>> {
        self.get_with(t, l, GeneratorBase::Full, cfg)
    }

    pub fn get_clopen(&self, t: &FunctorExpr, l: &Arc<FiniteFrame>, cfg: &Config) -> Result<Arc<Powerlocale>> {
        self.get_with(t, l, GeneratorBase::Clopen, cfg)
    }

    fn get_with(&self, t: &FunctorExpr, l: &Arc<FiniteFrame>, b: GeneratorBase, cfg: &Config) -> Result<Arc<Powerlocale>> {
        let key = (t.to_string(), l.fingerprint(), b);
        if let Some(p) = self.entries.lock().expect("cache lock").get(&key) {
            return Ok(p.clone());
        }
        // built outside the lock; a racing builder produces an equal value
        let built = Arc::new(match b {
            GeneratorBase::Full => t_powerlocale(t, l, cfg)?,
            GeneratorBase::Clopen => clopen_powerlocale(t, l, cfg)?,
        });
        Ok(self.entries.lock().expect("cache lock").entry(key).or_insert(built).clone())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
