use std::sync::Arc;

use super::{FiniteFrame, FrameHom};

fn signature(f: &FiniteFrame, a: usize) -> (usize, usize, usize) {
    (f.rank(a), f.up_set(a).count_ones(..), f.down_set(a).count_ones(..))
}

/// The first order isomorphism `l → m` in canonical order, if any. An order
/// isomorphism between lattices preserves all joins and meets, so it is a
/// frame isomorphism; the result is nevertheless re-checked.
pub fn find_iso(l: &Arc<FiniteFrame>, m: &Arc<FiniteFrame>) -> Option<FrameHom> {
    let n = l.len();
    if n != m.len() {
        return None;
    }
    let mut ls: Vec<_> = (0..n).map(|a| signature(l, a)).collect();
    let mut ms: Vec<_> = (0..n).map(|a| signature(m, a)).collect();
    let (lsig, msig) = (ls.clone(), ms.clone());
    ls.sort_unstable();
    ms.sort_unstable();
    if ls != ms {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        l: &FiniteFrame,
        m: &FiniteFrame,
        lsig: &[(usize, usize, usize)],
        msig: &[(usize, usize, usize)],
        i: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == l.len() {
            return true;
        }
        for y in 0..m.len() {
            if used[y] || lsig[i] != msig[y] {
                continue;
            }
            let consistent = (0..i).all(|j| l.leq(i, j) == m.leq(y, map[j]) && l.leq(j, i) == m.leq(map[j], y));
            if !consistent {
                continue;
            }
            map[i] = y;
            used[y] = true;
            if go(l, m, lsig, msig, i + 1, map, used) {
                return true;
            }
            used[y] = false;
        }
        false
    }
    if !go(l, m, &lsig, &msig, 0, &mut map, &mut used) {
        return None;
    }
    let h = FrameHom::new(l.clone(), m.clone(), map).ok()?;
    h.check().ok()?;
    Some(h)
}
