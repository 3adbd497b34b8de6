use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A canonical inhabitant of `T X`.
///
/// The shape follows the functor expression: at an `Id` position sits a leaf,
/// which is an `Atom` at ground level and an inner value under composition
/// (`(T0 ∘ T1) X` stores `T1 X` values as the leaves of a `T0` value).
/// Sets are sorted and deduplicated and multisets sorted with merged
/// multiplicities, so structural equality is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TValue {
    Atom(usize),
    Const(usize),
    Set(Vec<TValue>),
    Pair(Box<TValue>, Box<TValue>),
    Inl(Box<TValue>),
    Inr(Box<TValue>),
    Fun(Vec<TValue>),
    Mset(Vec<(TValue, u32)>),
}

use TValue::*;

impl TValue {
    pub fn set<I: IntoIterator<Item = TValue>>(items: I) -> TValue {
        let mut v: Vec<TValue> = items.into_iter().collect();
        v.sort();
        v.dedup();
        Set(v)
    }

    pub fn atoms<I: IntoIterator<Item = usize>>(atoms: I) -> TValue {
        TValue::set(atoms.into_iter().map(Atom))
    }

    /// Multiset with multiplicities summed per leaf; zero entries dropped.
    pub fn mset<I: IntoIterator<Item = (TValue, u32)>>(items: I) -> TValue {
        let mut v: Vec<(TValue, u32)> = items.into_iter().filter(|(_, m)| *m > 0).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(TValue, u32)> = Vec::with_capacity(v.len());
        for (x, m) in v {
            match out.last_mut() {
                Some((y, k)) if *y == x => *k += m,
                _ => out.push((x, m)),
            }
        }
        Mset(out)
    }

    pub fn pair(l: TValue, r: TValue) -> TValue {
        Pair(Box::new(l), Box::new(r))
    }

    pub fn inl(v: TValue) -> TValue {
        Inl(Box::new(v))
    }

    pub fn inr(v: TValue) -> TValue {
        Inr(Box::new(v))
    }

    pub fn as_atom(&self) -> Option<usize> {
        match self {
            Atom(a) => Some(*a),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&[TValue]> {
        match self {
            Set(v) => Some(v),
            _ => None,
        }
    }

    /// Membership for canonical sets.
    pub fn contains(&self, x: &TValue) -> bool {
        matches!(self, Set(v) if v.binary_search(x).is_ok())
    }

    fn tag(&self) -> u8 {
        match self {
            Atom(_) => 0,
            Const(_) => 1,
            Set(_) => 2,
            Pair(..) => 3,
            Inl(_) => 4,
            Inr(_) => 5,
            Fun(_) => 6,
            Mset(_) => 7,
        }
    }

    /// Renders with a custom atom printer (typically frame element names).
    pub fn display_with(&self, atom: &dyn Fn(usize) -> String) -> String {
        let mut s = String::new();
        self.render(&mut s, atom);
        s
    }

    fn render(&self, out: &mut String, atom: &dyn Fn(usize) -> String) {
        let list = |out: &mut String, items: &[TValue], open: char, close: char| {
            out.push(open);
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                x.render(out, atom);
            }
            out.push(close);
        };
        match self {
            Atom(a) => out.push_str(&atom(*a)),
            Const(c) => out.push_str(&format!("c{c}")),
            Set(v) if v.is_empty() => out.push('∅'),
            Set(v) => list(out, v, '{', '}'),
            Pair(l, r) => {
                out.push('(');
                l.render(out, atom);
                out.push(',');
                r.render(out, atom);
                out.push(')');
            }
            Inl(v) => {
                out.push_str("inl ");
                v.render(out, atom);
            }
            Inr(v) => {
                out.push_str("inr ");
                v.render(out, atom);
            }
            Fun(v) => list(out, v, '[', ']'),
            Mset(v) => {
                out.push('⟨');
                for (i, (x, m)) in v.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    x.render(out, atom);
                    out.push_str(&format!(":{m}"));
                }
                out.push('⟩');
            }
        }
    }
}

impl Ord for TValue {
    /// Variant first; sets and multisets by size, then lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Atom(a), Atom(b)) | (Const(a), Const(b)) => a.cmp(b),
            (Set(a), Set(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Mset(a), Mset(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Pair(a, b), Pair(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
            (Inl(a), Inl(b)) | (Inr(a), Inr(b)) => a.cmp(b),
            (Fun(a), Fun(b)) => a.cmp(b),
            _ => self.tag().cmp(&other.tag()),
        }
    }
}

impl PartialOrd for TValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&|a| a.to_string()))
    }
}
