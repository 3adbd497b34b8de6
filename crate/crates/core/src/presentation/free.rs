use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::lattice::{FiniteFrame, FrameHom};
use crate::{Config, Error, Result};

/// The free frame on finitely many generators: families of subsets of `G`
/// closed upward under `⊆` (down-sets of `(Pfin G, ⊇)`), where a subset `S`
/// stands for the meet `⋀S`.
#[derive(Debug, Clone)]
pub struct FreeFrame {
    pub generators: Vec<String>,
    pub frame: Arc<FiniteFrame>,
    /// Bit `s` of `families[e]` is set iff subset `s` (as a bitmask over
    /// generators) belongs to element `e`.
    pub families: Vec<u64>,
    pub embedding: Vec<usize>,
}

/// Six generators already give 7 828 354 elements; no override goes past this.
pub const FREE_FRAME_HARD_CAP: usize = 5;

pub fn free_frame(generators: &[String], cfg: &Config) -> Result<FreeFrame> {
    let k = generators.len();
    if k > cfg.free_frame_cap.min(FREE_FRAME_HARD_CAP) {
        return Err(Error::cap("free frame generators", Some(k as u128), cfg.free_frame_cap.min(FREE_FRAME_HARD_CAP)));
    }
    let subsets = 1usize << k;
    let mut order: Vec<u64> = (0..subsets as u64).collect();
    order.sort_by_key(|s| (std::cmp::Reverse(s.count_ones()), *s));
    let mut families = Vec::new();
    fn go(order: &[u64], k: usize, i: usize, family: u64, out: &mut Vec<u64>) {
        if i == order.len() {
            out.push(family);
            return;
        }
        let s = order[i];
        go(order, k, i + 1, family, out);
        let supersets_in = (0..k).filter(|g| s >> g & 1 == 0).all(|g| family >> (s | 1 << g) & 1 == 1);
        if supersets_in {
            go(order, k, i + 1, family | 1 << s, out);
        }
    }
    go(&order, k, 0, 0, &mut families);

    let names: Vec<String> = families.iter().map(|&fam| family_name(fam, generators)).collect();
    let m = families.len();
    let mut up = vec![FixedBitSet::with_capacity(m); m];
    for i in 0..m {
        for j in 0..m {
            if families[i] & !families[j] == 0 {
                up[i].insert(j);
            }
        }
    }
    let frame = FiniteFrame::from_order(names.clone(), up, cfg)?;
    let mut ordered = vec![0u64; m];
    for (i, fam) in families.iter().enumerate() {
        ordered[frame.elem(&names[i])?] = *fam;
    }
    let index: HashMap<u64, usize> = ordered.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let embedding = (0..k)
        .map(|g| {
            let fam = (0..subsets as u64).filter(|s| s >> g & 1 == 1).fold(0u64, |acc, s| acc | 1 << s);
            index[&fam]
        })
        .collect();
    Ok(FreeFrame { generators: generators.to_vec(), frame: Arc::new(frame), families: ordered, embedding })
}

fn family_name(family: u64, generators: &[String]) -> String {
    if family == 0 {
        return "0".into();
    }
    if family & 1 == 1 {
        return "1".into();
    }
    let members: Vec<u64> = (0..64).filter(|s| family >> s & 1 == 1).collect();
    let minimal = members.iter().filter(|&&s| !members.iter().any(|&t| t != s && t & s == t));
    minimal
        .map(|&s| {
            let gens: Vec<&str> = (0..generators.len()).filter(|g| s >> g & 1 == 1).map(|g| generators[g].as_str()).collect();
            gens.join("∧")
        })
        .collect::<Vec<_>>()
        .join(" ∨ ")
}

impl FreeFrame {
    /// `⋁ᵢ ⋀ Aᵢ` with generators given by index.
    pub fn eval(&self, join_of_meets: &[Vec<usize>]) -> usize {
        let f = &self.frame;
        f.join(join_of_meets.iter().map(|meet| f.meet(meet.iter().map(|&g| self.embedding[g]))))
    }

    /// The unique frame homomorphism sending generator `g` to `images[g]`:
    /// each family goes to the join over its members `S` of `⋀ images[S]`.
    pub fn extend(&self, target: &Arc<FiniteFrame>, images: &[usize]) -> Result<FrameHom> {
        let k = self.generators.len();
        let map = self
            .families
            .iter()
            .map(|&fam| {
                target.join(
                    (0..1u64 << k)
                        .filter(|s| fam >> s & 1 == 1)
                        .map(|s| target.meet((0..k).filter(|g| s >> g & 1 == 1).map(|g| images[g]))),
                )
            })
            .collect();
        FrameHom::new(self.frame.clone(), target.clone(), map)
    }
}
