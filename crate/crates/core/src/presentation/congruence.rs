use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::lattice::{FiniteFrame, FrameHom};
use crate::{Config, Error, Result};

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut x = x;
        while self.0[x] != root {
            let next = self.0[x];
            self.0[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
        ra != rb
    }
}

/// The quotient of `f` by the least lattice congruence containing `pairs`.
/// On a finite frame every join is finite, so this is also the least frame
/// congruence.
pub fn quotient_by_congruence(f: &Arc<FiniteFrame>, pairs: &[(usize, usize)], cfg: &Config) -> Result<(Arc<FiniteFrame>, FrameHom)> {
    let n = f.len();
    if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::Input(format!("pair ({a},{b}) outside the frame")));
    }
    let mut uf = UnionFind((0..n).collect());
    let mut work: Vec<(usize, usize)> = pairs.to_vec();
    // Every pair processed has all its translates x ↦ x∨c, x ↦ x∧c pushed,
    // so the final partition is closed under unary polynomials.
    while let Some((a, b)) = work.pop() {
        if !uf.union(a, b) {
            continue;
        }
        for c in 0..n {
            let (ja, jb) = (f.join2(a, c), f.join2(b, c));
            if uf.find(ja) != uf.find(jb) {
                work.push((ja, jb));
            }
            let (ma, mb) = (f.meet2(a, c), f.meet2(b, c));
            if uf.find(ma) != uf.find(mb) {
                work.push((ma, mb));
            }
        }
    }
    let class: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    // name each class after its largest element
    let mut top_of = vec![f.bottom(); n];
    for x in 0..n {
        top_of[class[x]] = f.join2(top_of[class[x]], x);
    }
    let reps: Vec<usize> = (0..n).filter(|&x| class[x] == x).collect();
    let names: Vec<String> = reps.iter().map(|&r| f.name(top_of[r]).to_string()).collect();
    let m = reps.len();
    let mut up = vec![FixedBitSet::with_capacity(m); m];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            if class[f.join2(a, b)] == class[b] {
                up[i].insert(j);
            }
        }
    }
    let q = Arc::new(FiniteFrame::from_order(names, up, cfg)?);
    let map = (0..n).map(|x| q.elem(f.name(top_of[class[x]]))).collect::<Result<Vec<_>>>()?;
    let h = FrameHom::new(f.clone(), q.clone(), map)?;
    if let Err(v) = h.check() {
        return Err(Error::Input(format!("quotient map is not a homomorphism ({} at {:?})", v.law, v.arguments)));
    }
    Ok((q, h))
}
