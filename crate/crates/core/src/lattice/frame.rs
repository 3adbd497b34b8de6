use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::{Config, Error, Result};

/// A finite distributive lattice, which is automatically a frame.
///
/// Elements are indexed `0..len()` in canonical order: sorted by rank
/// (length of the longest chain from the bottom), ties broken by input
/// position. Hence the bottom is always `0` and the top is `len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFrame {
    names: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    rank: Vec<usize>,
    join: Vec<usize>,
    meet: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub regular: bool,
    pub zero_dimensional: bool,
    /// Always true: every finite frame is compact.
    pub compact: bool,
}

/// On-disk frame format: `leq` may be any generating set of the order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameJson {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
}

impl FiniteFrame {
    /// Validates `leq_pairs` (closed reflexively and transitively) as a
    /// distributive lattice order on `elements`.
    pub fn build<S: AsRef<str>>(elements: &[S], leq_pairs: &[(S, S)], cfg: &Config) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Input("a frame needs at least one element".into()));
        }
        if elements.len() > cfg.frame_cap {
            return Err(Error::cap("frame", Some(elements.len() as u128), cfg.frame_cap));
        }
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate element `{name}`")));
            }
        }
        let n = names.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            row.insert(i);
        }
        for (a, b) in leq_pairs {
            let lookup = |s: &S| index.get(s.as_ref()).copied().ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()));
            let (a, b) = (lookup(a)?, lookup(b)?);
            up[a].insert(b);
        }
        Self::from_up_sets(names, up, true)
    }

    pub fn from_json(json: &FrameJson, cfg: &Config) -> Result<Self> {
        Self::build(&json.elements, &json.leq, cfg)
    }

    pub fn to_json(&self) -> FrameJson {
        FrameJson {
            elements: self.names.clone(),
            leq: self.hasse().into_iter().map(|(a, b)| (self.names[a].clone(), self.names[b].clone())).collect(),
        }
    }

    /// Builds a frame from a (not necessarily closed) order given as
    /// up-sets. Used by constructions whose output is a frame by theory;
    /// the lattice laws are still verified, distributivity up to the cap.
    pub(crate) fn from_order(names: Vec<String>, up: Vec<FixedBitSet>, cfg: &Config) -> Result<Self> {
        if names.len() > cfg.site_frame_cap {
            return Err(Error::cap("derived frame", Some(names.len() as u128), cfg.site_frame_cap));
        }
        let check = names.len() <= cfg.distributivity_check_cap;
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect::<HashMap<_, _>>();
        if index.len() != names.len() {
            return Err(Error::Input("duplicate element names in derived frame".into()));
        }
        Self::from_up_sets(names, up, check)
    }

    fn from_up_sets(names: Vec<String>, mut up: Vec<FixedBitSet>, check_distributive: bool) -> Result<Self> {
        let n = names.len();
        for k in 0..n {
            for i in 0..n {
                if i != k && up[i].contains(k) {
                    let row = up[k].clone();
                    up[i].union_with(&row);
                }
            }
        }
        for i in 0..n {
            for j in up[i].ones() {
                if j != i && up[j].contains(i) {
                    return Err(Error::NotAPoset(format!("{} and {} lie on a cycle", names[i], names[j])));
                }
            }
        }
        if !(0..n).any(|i| up[i].count_ones(..) == n) {
            return Err(Error::NoBottom);
        }
        if !(0..n).any(|t| (0..n).all(|i| up[i].contains(t))) {
            return Err(Error::NoTop);
        }

        // rank = longest chain from the bottom; process by down-set size.
        let mut down_count = vec![0usize; n];
        for row in &up {
            for j in row.ones() {
                down_count[j] += 1;
            }
        }
        let mut by_size: Vec<usize> = (0..n).collect();
        by_size.sort_by_key(|&i| down_count[i]);
        let mut rank = vec![0usize; n];
        for &b in &by_size {
            for a in 0..n {
                if a != b && up[a].contains(b) {
                    rank[b] = rank[b].max(rank[a] + 1);
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (rank[i], i));
        let mut pos = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }

        let mut new_up = vec![FixedBitSet::with_capacity(n); n];
        let mut new_down = vec![FixedBitSet::with_capacity(n); n];
        for old in 0..n {
            for j in up[old].ones() {
                new_up[pos[old]].insert(pos[j]);
                new_down[pos[j]].insert(pos[old]);
            }
        }
        let names: Vec<String> = order.iter().map(|&o| names[o].clone()).collect();
        let rank: Vec<usize> = order.iter().map(|&o| rank[o]).collect();
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();

        let mut join = vec![0usize; n * n];
        let mut meet = vec![0usize; n * n];
        for a in 0..n {
            for b in a..n {
                let mut common = new_up[a].clone();
                common.intersect_with(&new_up[b]);
                let least = common.ones().next().filter(|&c| common.is_subset(&new_up[c]));
                let Some(j) = least else {
                    return Err(Error::NotALattice { a: names[a].clone(), b: names[b].clone(), missing: "join" });
                };
                let mut common = new_down[a].clone();
                common.intersect_with(&new_down[b]);
                let greatest = common.ones().next_back().filter(|&c| common.is_subset(&new_down[c]));
                let Some(m) = greatest else {
                    return Err(Error::NotALattice { a: names[a].clone(), b: names[b].clone(), missing: "meet" });
                };
                join[a * n + b] = j;
                join[b * n + a] = j;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        let frame = FiniteFrame { names, index, up: new_up, down: new_down, rank, join, meet };
        if check_distributive {
            if let Some((a, b, c)) = frame.distributivity_failure() {
                return Err(Error::NotDistributive { a: frame.names[a].clone(), b: frame.names[b].clone(), c: frame.names[c].clone() });
            }
        }
        Ok(frame)
    }

    fn distributivity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in b + 1..n {
                    let lhs = self.meet2(a, self.join2(b, c));
                    let rhs = self.join2(self.meet2(a, b), self.meet2(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.len() - 1
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn elem(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn elems(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|s| self.elem(s)).collect()
    }

    pub fn rank(&self, a: usize) -> usize {
        self.rank[a]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// `{b | a ≤ b}`.
    pub fn up_set(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    /// `{b | b ≤ a}`.
    pub fn down_set(&self, a: usize) -> &FixedBitSet {
        &self.down[a]
    }

    pub fn join2(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet2(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join<I: IntoIterator<Item = usize>>(&self, s: I) -> usize {
        s.into_iter().fold(self.bottom(), |acc, x| self.join2(acc, x))
    }

    pub fn meet<I: IntoIterator<Item = usize>>(&self, s: I) -> usize {
        s.into_iter().fold(self.top(), |acc, x| self.meet2(acc, x))
    }

    pub fn join_named(&self, s: &[&str]) -> Result<usize> {
        Ok(self.join(self.elems(s)?))
    }

    pub fn meet_named(&self, s: &[&str]) -> Result<usize> {
        Ok(self.meet(self.elems(s)?))
    }

    pub fn negation(&self, a: usize) -> usize {
        self.join((0..self.len()).filter(|&c| self.meet2(a, c) == self.bottom()))
    }

    /// `a ⋖ b` iff `b ∨ ¬a = 1`.
    pub fn well_inside(&self, a: usize, b: usize) -> bool {
        self.join2(b, self.negation(a)) == self.top()
    }

    pub fn is_clopen(&self, a: usize) -> bool {
        self.well_inside(a, a)
    }

    pub fn clopens(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.is_clopen(a)).collect()
    }

    /// `↓A ∩ C_L`.
    pub fn down_clopen(&self, a: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.is_clopen(c) && a.iter().any(|&x| self.leq(c, x))).collect()
    }

    pub fn classify(&self) -> Classification {
        let n = self.len();
        let regular = (0..n).all(|a| self.join((0..n).filter(|&b| self.well_inside(b, a))) == a);
        let zero_dimensional = (0..n).all(|a| self.join(self.down[a].ones().filter(|&b| self.is_clopen(b))) == a);
        Classification { regular, zero_dimensional, compact: true }
    }

    pub fn is_boolean(&self) -> bool {
        (0..self.len()).all(|a| self.is_clopen(a))
    }

    /// Covering pairs `a ⋖· b` of the Hasse diagram.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up[a].ones() {
                if b != a && !self.up[a].ones().any(|c| c != a && c != b && self.leq(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_dot(&self, title: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", escape(title));
        let _ = writeln!(s, "  rankdir=BT;");
        for (i, name) in self.names.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", escape(name));
        }
        for (a, b) in self.hasse() {
            let _ = writeln!(s, "  n{a} -> n{b} [arrowhead=none];");
        }
        s.push_str("}\n");
        s
    }

    /// Canonical text identifying the frame up to equality (names and order).
    pub fn fingerprint(&self) -> String {
        let mut s = self.names.join(",");
        for (a, b) in self.hasse() {
            let _ = write!(s, ";{a}<{b}");
        }
        s
    }

    /// Cartesian product, ordered componentwise; names are `(a,b)`.
    pub fn product(l: &FiniteFrame, m: &FiniteFrame) -> FiniteFrame {
        let (n, k) = (l.len(), m.len());
        let names = (0..n * k).map(|i| format!("({},{})", l.name(i / k), m.name(i % k))).collect();
        let mut up = vec![FixedBitSet::with_capacity(n * k); n * k];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..n * k {
                if l.leq(i / k, j / k) && m.leq(i % k, j % k) {
                    row.insert(j);
                }
            }
        }
        Self::from_up_sets(names, up, true).expect("product of frames is a frame")
    }

    /// The chain `0 < 1 < ... < n-1`, named by its indices.
    pub fn chain(n: usize) -> FiniteFrame {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            row.insert_range(i..n);
        }
        Self::from_up_sets(names, up, true).expect("chains are frames")
    }

    /// The frame `𝟚` with elements `0 < 1`.
    pub fn two() -> FiniteFrame {
        Self::chain(2)
    }

    /// The chain `0 < m < 1`.
    pub fn c3() -> FiniteFrame {
        Self::build(&["0", "m", "1"], &[("0", "m"), ("m", "1")], &Config::default()).expect("C3")
    }

    /// The four-element Boolean frame on atoms `a`, `b`.
    pub fn b2() -> FiniteFrame {
        Self::build(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], &Config::default()).expect("B2")
    }

    /// Every frame homomorphism `self → target`, in lexicographic order of
    /// the element map.
    pub fn all_homs_to(&self, target: &FiniteFrame) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut map = vec![usize::MAX; n];
        fn go(src: &FiniteFrame, tgt: &FiniteFrame, i: usize, map: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == src.len() {
                out.push(map.clone());
                return;
            }
            let forced = if i == src.bottom() {
                Some(tgt.bottom())
            } else if i == src.top() {
                Some(tgt.top())
            } else {
                None
            };
            for y in 0..tgt.len() {
                if forced.is_some_and(|f| f != y) {
                    continue;
                }
                map[i] = y;
                let ok = (0..i).all(|j| {
                    let (a, b) = (src.join2(i, j), src.meet2(i, j));
                    (a > i || map[a] == tgt.join2(y, map[j])) && (b > i || map[b] == tgt.meet2(y, map[j]))
                });
                if ok {
                    go(src, tgt, i + 1, map, out);
                }
            }
            map[i] = usize::MAX;
        }
        go(self, target, 0, &mut map, &mut out);
        // Entries whose join/meet index exceeded `i` were deferred; verify fully.
        out.retain(|m| {
            (0..n)
                .all(|a| (0..n).all(|b| m[self.join2(a, b)] == target.join2(m[a], m[b]) && m[self.meet2(a, b)] == target.meet2(m[a], m[b])))
        });
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
