use crate::functor::{map_leaves, FunctorExpr, TValue};
use crate::lattice::FiniteFrame;
use crate::{Error, Result};

fn atom(x: &TValue) -> Result<usize> {
    x.as_atom().ok_or_else(|| Error::ShapeMismatch { functor: "Id".into(), value: x.to_string() })
}

fn atoms_of(s: &TValue) -> Result<Vec<usize>> {
    s.as_set().ok_or_else(|| Error::ShapeMismatch { functor: "P".into(), value: s.to_string() })?.iter().map(atom).collect()
}

/// The frame order as a relation between atom leaves.
pub fn leq_relation(l: &FiniteFrame) -> impl Fn(&TValue, &TValue) -> bool + Sync + '_ {
    move |x, y| matches!((x, y), (TValue::Atom(a), TValue::Atom(b)) if l.leq(*a, *b))
}

/// The well-inside relation `⋖` between atom leaves.
pub fn well_inside_relation(l: &FiniteFrame) -> impl Fn(&TValue, &TValue) -> bool + Sync + '_ {
    move |x, y| matches!((x, y), (TValue::Atom(a), TValue::Atom(b)) if l.well_inside(*a, *b))
}

/// `T⋁`: replaces every set leaf by its join.
pub fn t_join(t: &FunctorExpr, l: &FiniteFrame, phi: &TValue) -> Result<TValue> {
    map_leaves(t, phi, &mut |s| Ok(TValue::Atom(l.join(atoms_of(s)?))))
}

/// `T⋀`: replaces every set leaf by its meet.
pub fn t_meet(t: &FunctorExpr, l: &FiniteFrame, psi: &TValue) -> Result<TValue> {
    map_leaves(t, psi, &mut |s| Ok(TValue::Atom(l.meet(atoms_of(s)?))))
}

/// `Tη`: replaces every leaf `x` by `{x}`.
pub fn t_eta(t: &FunctorExpr, alpha: &TValue) -> Result<TValue> {
    map_leaves(t, alpha, &mut |x| Ok(TValue::set([x.clone()])))
}

/// `T↓`: replaces every set leaf by its down-closure in `L`.
pub fn t_down(t: &FunctorExpr, l: &FiniteFrame, phi: &TValue) -> Result<TValue> {
    map_leaves(t, phi, &mut |s| {
        let mut down = Vec::new();
        for a in atoms_of(s)? {
            down.extend(l.down_set(a).ones());
        }
        Ok(TValue::atoms(down))
    })
}
