use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::functor::TValue;
use crate::lattice::{FiniteFrame, FrameHom};
use crate::{Config, Error, Result};

/// `⟨X, ≲, ◁₀⟩`: a pre-ordered generator set with a finite list of basic
/// covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatSite {
    generators: Vec<TValue>,
    /// `below[a] = {b | b ≲ a}`.
    below: Vec<FixedBitSet>,
    covers: Vec<(usize, FixedBitSet)>,
    /// Indices into `covers`, grouped by covered generator.
    covers_of: Vec<Vec<usize>>,
}

/// A stability failure: `b ≲ a ◁₀ A` but no basic cover of `b` lies inside
/// `↓A ∩ ↓b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityViolation {
    pub b: usize,
    pub a: usize,
    pub cover: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatSiteJson {
    pub generators: Vec<TValue>,
    pub lesssim: Vec<(usize, usize)>,
    pub covers: Vec<(usize, Vec<usize>)>,
}

impl FlatSite {
    /// `lesssim` may be any generating set of the pre-order; the reflexive
    /// transitive closure is taken.
    pub fn new(generators: Vec<TValue>, lesssim: &[(usize, usize)], covers: &[(usize, Vec<usize>)]) -> Result<Self> {
        let n = generators.len();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in below.iter_mut().enumerate() {
            row.insert(a);
        }
        for &(b, a) in lesssim {
            if a >= n || b >= n {
                return Err(Error::Input(format!("pre-order pair ({b},{a}) outside {n} generators")));
            }
            below[a].insert(b);
        }
        for k in 0..n {
            for a in 0..n {
                if a != k && below[a].contains(k) {
                    let row = below[k].clone();
                    below[a].union_with(&row);
                }
            }
        }
        let mut sets = Vec::with_capacity(covers.len());
        for (a, cover) in covers {
            let mut s = FixedBitSet::with_capacity(n);
            for &c in cover.iter().chain(std::iter::once(a)) {
                if c >= n {
                    return Err(Error::Input(format!("cover mentions generator {c} outside {n}")));
                }
            }
            s.extend(cover.iter().copied());
            sets.push((*a, s));
        }
        Ok(Self::from_parts(generators, below, sets))
    }

    /// Assumes `below` is already a closed pre-order.
    pub(crate) fn from_parts(generators: Vec<TValue>, below: Vec<FixedBitSet>, mut covers: Vec<(usize, FixedBitSet)>) -> Self {
        covers.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.ones().cmp(y.1.ones())));
        covers.dedup();
        let mut covers_of = vec![Vec::new(); generators.len()];
        for (i, (a, _)) in covers.iter().enumerate() {
            covers_of[*a].push(i);
        }
        FlatSite { generators, below, covers, covers_of }
    }

    pub fn from_json(json: &FlatSiteJson) -> Result<Self> {
        Self::new(json.generators.clone(), &json.lesssim, &json.covers)
    }

    pub fn to_json(&self) -> FlatSiteJson {
        FlatSiteJson {
            generators: self.generators.clone(),
            lesssim: (0..self.len()).flat_map(|a| self.below[a].ones().map(move |b| (b, a))).collect(),
            covers: self.covers.iter().map(|(a, s)| (*a, s.ones().collect())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[TValue] {
        &self.generators
    }

    pub fn lesssim(&self, b: usize, a: usize) -> bool {
        self.below[a].contains(b)
    }

    /// `↓a`.
    pub fn down(&self, a: usize) -> &FixedBitSet {
        &self.below[a]
    }

    /// `↓S`.
    pub fn down_of(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for a in s.ones() {
            out.union_with(&self.below[a]);
        }
        out
    }

    pub fn covers(&self) -> &[(usize, FixedBitSet)] {
        &self.covers
    }

    pub fn covers_of(&self, a: usize) -> impl Iterator<Item = &FixedBitSet> {
        self.covers_of[a].iter().map(|&i| &self.covers[i].1)
    }

    pub fn bitset<I: IntoIterator<Item = usize>>(&self, items: I) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        s.extend(items);
        s
    }

    /// Checks the stability condition over every `b ≲ a ◁₀ A`; returns the
    /// first violation in cover order.
    pub fn verify(&self, cfg: &Config) -> std::result::Result<(), StabilityViolation> {
        let found = cfg.exec.find_first(self.covers.len(), |i| {
            let (a, cover) = &self.covers[i];
            let down_cover = self.down_of(cover);
            self.below[*a].ones().find_map(|b| {
                let mut allowed = down_cover.clone();
                allowed.intersect_with(&self.below[b]);
                let stable = self.covers_of(b).any(|bs| bs.is_subset(&allowed));
                (!stable).then(|| StabilityViolation { b, a: *a, cover: cover.ones().collect() })
            })
        });
        found.map_or(Ok(()), Err)
    }

    /// The least C-ideal containing `s`: down-closure, then cover passes,
    /// repeated to a fixpoint.
    pub fn saturate(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut ideal = self.down_of(s);
        loop {
            let mut changed = false;
            for (a, cover) in &self.covers {
                if !ideal.contains(*a) && cover.is_subset(&ideal) {
                    ideal.union_with(&self.below[*a]);
                    changed = true;
                }
            }
            if !changed {
                return ideal;
            }
        }
    }

    pub fn is_c_ideal(&self, s: &FixedBitSet) -> bool {
        s.ones().all(|a| self.below[a].is_subset(s)) && self.covers.iter().all(|(a, cover)| s.contains(*a) || !cover.is_subset(s))
    }
}

/// The frame presented by a flat site: its C-ideals ordered by inclusion.
#[derive(Debug, Clone)]
pub struct SiteFrame {
    pub frame: Arc<FiniteFrame>,
    /// The C-ideal of each frame element.
    pub ideals: Vec<FixedBitSet>,
    /// Generator `x ↦ saturate({x})`.
    pub insertion: Vec<usize>,
    lookup: HashMap<FixedBitSet, usize>,
}

impl SiteFrame {
    pub fn element_of(&self, ideal: &FixedBitSet) -> Option<usize> {
        self.lookup.get(ideal).copied()
    }

    /// `⋁ f[S]` for a set of generators.
    pub fn join_of(&self, gens: impl IntoIterator<Item = usize>) -> usize {
        self.frame.join(gens.into_iter().map(|x| self.insertion[x]))
    }
}

/// Enumerates the C-ideals as joins of principal saturations and checks that
/// binary intersections stay inside the family.
pub fn frame_of_flat_site(site: &FlatSite, label: &dyn Fn(usize) -> String, cfg: &Config) -> Result<SiteFrame> {
    if let Err(v) = site.verify(cfg) {
        return Err(Error::NotFlat(format!("generator {} ≲ {} ◁₀ {:?} has no stable refinement", v.b, v.a, v.cover)));
    }
    let n = site.len();
    let bottom = site.saturate(&FixedBitSet::with_capacity(n));
    let principal: Vec<FixedBitSet> = cfg.exec.range_map(n, |x| site.saturate(&site.bitset([x])));
    let mut distinct: Vec<&FixedBitSet> = principal.iter().collect();
    distinct.sort_by(|a, b| a.ones().cmp(b.ones()));
    distinct.dedup();

    let mut ideals = vec![bottom.clone()];
    let mut lookup: HashMap<FixedBitSet, usize> = HashMap::from([(bottom.clone(), 0)]);
    let mut next = 0;
    while next < ideals.len() {
        let current = ideals[next].clone();
        next += 1;
        for p in &distinct {
            if p.is_subset(&current) {
                continue;
            }
            let mut union = current.clone();
            union.union_with(p);
            let joined = site.saturate(&union);
            if !lookup.contains_key(&joined) {
                if ideals.len() >= cfg.site_frame_cap {
                    return Err(Error::cap("frame of flat site", None, cfg.site_frame_cap));
                }
                lookup.insert(joined.clone(), ideals.len());
                ideals.push(joined);
            }
        }
    }
    for i in 0..ideals.len() {
        for j in i + 1..ideals.len() {
            let mut meet = ideals[i].clone();
            meet.intersect_with(&ideals[j]);
            if !lookup.contains_key(&meet) {
                return Err(Error::NotFlat("intersection of two C-ideals is not generated".into()));
            }
        }
    }

    let names: Vec<String> = ideals.iter().map(|ideal| ideal_name(site, ideal, &bottom, label)).collect();
    let m = ideals.len();
    let mut up = vec![FixedBitSet::with_capacity(m); m];
    for i in 0..m {
        for j in 0..m {
            if ideals[i].is_subset(&ideals[j]) {
                up[i].insert(j);
            }
        }
    }
    let frame = FiniteFrame::from_order(names.clone(), up, cfg)?;
    let mut ordered = vec![FixedBitSet::new(); m];
    for (i, ideal) in ideals.into_iter().enumerate() {
        ordered[frame.elem(&names[i])?] = ideal;
    }
    let lookup: HashMap<FixedBitSet, usize> = ordered.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let insertion = principal.iter().map(|p| lookup[p]).collect();
    Ok(SiteFrame { frame: Arc::new(frame), ideals: ordered, insertion, lookup })
}

/// Names an ideal by the maximal generators outside the bottom ideal.
fn ideal_name(site: &FlatSite, ideal: &FixedBitSet, bottom: &FixedBitSet, label: &dyn Fn(usize) -> String) -> String {
    if ideal == bottom {
        return "0".into();
    }
    if ideal.count_ones(..) == site.len() {
        return "1".into();
    }
    let live: Vec<usize> = ideal.ones().filter(|&x| !bottom.contains(x)).collect();
    let maximal: Vec<usize> = live.iter().copied().filter(|&x| !live.iter().any(|&y| site.lesssim(x, y) && !site.lesssim(y, x))).collect();
    // one representative per ≲-equivalence class
    let reps: Vec<usize> =
        maximal.iter().copied().filter(|&x| !maximal.iter().any(|&y| y < x && site.lesssim(x, y) && site.lesssim(y, x))).collect();
    reps.iter().map(|&x| label(x)).collect::<Vec<_>>().join(" ∨ ")
}

/// Checks, for the insertion `f`, the four presented-frame equations:
/// monotonicity, `1 = ⋁f[X]`, `f(a) ∧ f(b) = ⋁f[↓a ∩ ↓b]`, and
/// `f(a) ≤ ⋁f[A]` for `a ◁₀ A`.
pub fn check_insertion(site: &FlatSite, sf: &SiteFrame) -> Result<()> {
    let (fr, f) = (&sf.frame, &sf.insertion);
    let fail = |condition, witness: String| Err(Error::SideConditionViolated { condition, witness });
    for a in 0..site.len() {
        for b in site.down(a).ones() {
            if !fr.leq(f[b], f[a]) {
                return fail("order-preserving", format!("{b} ≲ {a}"));
            }
        }
    }
    if sf.join_of(0..site.len()) != fr.top() {
        return fail("top", "1 ≠ ⋁f[X]".into());
    }
    for a in 0..site.len() {
        for b in a + 1..site.len() {
            let mut common = site.down(a).clone();
            common.intersect_with(site.down(b));
            if fr.meet2(f[a], f[b]) != sf.join_of(common.ones()) {
                return fail("meet", format!("generators {a}, {b}"));
            }
        }
    }
    for (a, cover) in site.covers() {
        if !fr.leq(f[*a], sf.join_of(cover.ones())) {
            return fail("cover", format!("{a} ◁₀ {:?}", cover.ones().collect::<Vec<_>>()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomMode {
    Suplattice,
    Frame,
}

/// Extends `g: X → target` to `g'(I) = ⋁{g(x) | x ∈ I}` after checking the
/// side conditions for `mode`. In suplattice mode only join preservation is
/// guaranteed for the result.
pub fn extend_hom(site: &FlatSite, sf: &SiteFrame, target: &Arc<FiniteFrame>, g: &[usize], mode: HomMode) -> Result<FrameHom> {
    if g.len() != site.len() || g.iter().any(|&y| y >= target.len()) {
        return Err(Error::Input("generator assignment does not fit the site and target".into()));
    }
    let fail = |condition, witness: String| Err(Error::SideConditionViolated { condition, witness });
    let label = |x: usize| site.generators()[x].to_string();
    for a in 0..site.len() {
        for b in site.down(a).ones() {
            if !target.leq(g[b], g[a]) {
                return fail("order-preserving", format!("{} ≲ {}", label(b), label(a)));
            }
        }
    }
    for (a, cover) in site.covers() {
        if !target.leq(g[*a], target.join(cover.ones().map(|x| g[x]))) {
            let names: Vec<String> = cover.ones().map(label).collect();
            return fail("cover", format!("{} ◁₀ {{{}}}", label(*a), names.join(", ")));
        }
    }
    if mode == HomMode::Frame {
        if target.join(g.iter().copied()) != target.top() {
            return fail("top", "1 ≰ ⋁g[X]".into());
        }
        for a in 0..site.len() {
            for b in a + 1..site.len() {
                let mut common = site.down(a).clone();
                common.intersect_with(site.down(b));
                if !target.leq(target.meet2(g[a], g[b]), target.join(common.ones().map(|x| g[x]))) {
                    return fail("meet", format!("g({}) ∧ g({}) ≰ ⋁g[↓∩↓]", label(a), label(b)));
                }
            }
        }
    }
    let map = sf.ideals.iter().map(|ideal| target.join(ideal.ones().map(|x| g[x]))).collect();
    let h = FrameHom::new(sf.frame.clone(), target.clone(), map)?;
    let checked = match mode {
        HomMode::Suplattice => h.check_joins(),
        HomMode::Frame => h.check(),
    };
    match checked {
        Ok(()) => Ok(h),
        Err(v) => fail("extension is a homomorphism", format!("{} at {:?}", v.law, v.arguments)),
    }
}
