use std::collections::VecDeque;

use super::TValue;
use crate::{Error, Result};

/// Entries `(i, j, ρ(i, j))` of an integer coupling between two multisets,
/// indexed into their support lists.
pub type Coupling = Vec<(usize, usize, u32)>;

/// Finds an integer coupling `ρ` supported on `r` whose marginals are `xs`
/// and `ys`, by max-flow feasibility (source → xs → ys → sink).
pub fn coupling(xs: &[(TValue, u32)], ys: &[(TValue, u32)], r: &dyn Fn(&TValue, &TValue) -> bool) -> Option<Coupling> {
    let supply: u64 = xs.iter().map(|(_, m)| *m as u64).sum();
    let demand: u64 = ys.iter().map(|(_, m)| *m as u64).sum();
    if supply != demand {
        return None;
    }
    let (m, k) = (xs.len(), ys.len());
    let (source, sink) = (m + k, m + k + 1);
    let mut net = Network::new(m + k + 2);
    for (i, (_, mult)) in xs.iter().enumerate() {
        net.add(source, i, *mult as u64);
    }
    for (j, (_, mult)) in ys.iter().enumerate() {
        net.add(m + j, sink, *mult as u64);
    }
    let mut middle = Vec::new();
    for (i, (x, _)) in xs.iter().enumerate() {
        for (j, (y, _)) in ys.iter().enumerate() {
            if r(x, y) {
                middle.push((i, j, net.add(i, m + j, supply)));
            }
        }
    }
    if net.max_flow(source, sink) != supply {
        return None;
    }
    Some(
        middle
            .into_iter()
            .filter_map(|(i, j, e)| {
                let f = net.flow(e);
                (f > 0).then(|| (i, j, u32::try_from(f).expect("flow bounded by a multiplicity")))
            })
            .collect(),
    )
}

/// Entries `((x, y), ρ(x, y))` of a coupling of atom multisets.
pub type AtomCoupling = Vec<((usize, usize), u32)>;

/// Decides `μ M̄R μ'` for multisets of atoms, returning the coupling as
/// `((x, y), ρ(x, y))` entries.
pub fn multiset_lift(r: &super::Relation, mu: &TValue, mu_prime: &TValue) -> Result<Option<AtomCoupling>> {
    let (TValue::Mset(xs), TValue::Mset(ys)) = (mu, mu_prime) else {
        return Err(Error::Input("multiset_lift expects two multisets".into()));
    };
    let atom = |v: &TValue| v.as_atom().ok_or_else(|| Error::Input(format!("multiset entry {v} is not an atom")));
    for (x, _) in xs {
        if atom(x)? >= r.left() {
            return Err(Error::AtomOutsideDomain(atom(x)?));
        }
    }
    for (y, _) in ys {
        if atom(y)? >= r.right() {
            return Err(Error::AtomOutsideDomain(atom(y)?));
        }
    }
    let rel = |x: &TValue, y: &TValue| r.contains(x.as_atom().unwrap_or(usize::MAX), y.as_atom().unwrap_or(usize::MAX));
    Ok(coupling(xs, ys, &rel)
        .map(|c| c.into_iter().map(|(i, j, f)| ((xs[i].0.as_atom().unwrap_or(0), ys[j].0.as_atom().unwrap_or(0)), f)).collect()))
}

/// Edmonds–Karp on a residual edge list.
struct Network {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize, c: u64) -> usize {
        let e = self.to.len();
        self.adj[u].push(e);
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(e + 1);
        self.to.push(u);
        self.cap.push(0);
        e
    }

    fn flow(&self, e: usize) -> u64 {
        self.cap[e ^ 1]
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0;
        loop {
            let mut pred = vec![usize::MAX; self.adj.len()];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && v != s && pred[v] == usize::MAX {
                        pred[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if pred[t] == usize::MAX {
                return total;
            }
            let mut bottleneck = u64::MAX;
            let mut v = t;
            while v != s {
                let e = pred[v];
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = pred[v];
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                v = self.to[e ^ 1];
            }
            total += bottleneck;
        }
    }
}
