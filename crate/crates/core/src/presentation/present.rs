use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::congruence::quotient_by_congruence;
use super::free::{free_frame, FreeFrame};
use super::site::FlatSite;
use crate::lattice::{FiniteFrame, FrameHom};
use crate::{Config, Error, Result};

/// A join of meets of generators: `[[a, b], [c]]` is `(a ∧ b) ∨ c`; `[]` is
/// `0` and `[[]]` is `1`.
pub type JoinOfMeets = Vec<Vec<usize>>;

/// `⟨G | R⟩` with every relation an equation between joins of meets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<(JoinOfMeets, JoinOfMeets)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub lhs: Vec<Vec<String>>,
    pub rhs: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub relations: Vec<RelationJson>,
}

impl Presentation {
    pub fn new(generators: Vec<String>) -> Self {
        Presentation { generators, relations: Vec::new() }
    }

    pub fn equation(&mut self, lhs: JoinOfMeets, rhs: JoinOfMeets) {
        self.relations.push((lhs, rhs));
    }

    /// `lhs ≤ rhs`, stored as `lhs ∨ rhs = rhs`.
    pub fn inequation(&mut self, lhs: JoinOfMeets, rhs: JoinOfMeets) {
        let joined = lhs.into_iter().chain(rhs.iter().cloned()).collect();
        self.relations.push((joined, rhs));
    }

    pub fn from_json(json: &PresentationJson) -> Result<Self> {
        let index = |g: &String| json.generators.iter().position(|h| h == g).ok_or_else(|| Error::UnknownElement(g.clone()));
        let side = |s: &Vec<Vec<String>>| -> Result<JoinOfMeets> { s.iter().map(|meet| meet.iter().map(index).collect()).collect() };
        let relations = json.relations.iter().map(|r| Ok((side(&r.lhs)?, side(&r.rhs)?))).collect::<Result<_>>()?;
        Ok(Presentation { generators: json.generators.clone(), relations })
    }

    pub fn to_json(&self) -> PresentationJson {
        let side = |s: &JoinOfMeets| s.iter().map(|m| m.iter().map(|&g| self.generators[g].clone()).collect()).collect();
        PresentationJson {
            generators: self.generators.clone(),
            relations: self.relations.iter().map(|(l, r)| RelationJson { lhs: side(l), rhs: side(r) }).collect(),
        }
    }
}

/// The frame presented by `⟨G | R⟩`, computed as a quotient of the free
/// frame on `G`.
#[derive(Debug, Clone)]
pub struct PresentedFrame {
    pub frame: Arc<FiniteFrame>,
    pub free: FreeFrame,
    pub quotient: FrameHom,
    pub insertion: Vec<usize>,
}

pub fn frame_of_presentation(p: &Presentation, cfg: &Config) -> Result<PresentedFrame> {
    let free = free_frame(&p.generators, cfg)?;
    let pairs: Vec<(usize, usize)> = p.relations.iter().map(|(l, r)| (free.eval(l), free.eval(r))).collect();
    let (frame, quotient) = quotient_by_congruence(&free.frame, &pairs, cfg)?;
    let insertion: Vec<usize> = free.embedding.iter().map(|&e| quotient.apply(e)).collect();
    let out = PresentedFrame { frame, free, quotient, insertion };
    for (i, (l, r)) in p.relations.iter().enumerate() {
        if out.eval(l) != out.eval(r) {
            return Err(Error::Input(format!("relation {i} fails in the quotient")));
        }
    }
    Ok(out)
}

impl PresentedFrame {
    pub fn eval(&self, join_of_meets: &[Vec<usize>]) -> usize {
        let f = &self.frame;
        f.join(join_of_meets.iter().map(|meet| f.meet(meet.iter().map(|&g| self.insertion[g]))))
    }

    /// The unique frame homomorphism with `generator g ↦ images[g]`, provided
    /// the images satisfy every relation of `p`.
    pub fn extend(&self, p: &Presentation, target: &Arc<FiniteFrame>, images: &[usize]) -> Result<FrameHom> {
        let eval = |jm: &JoinOfMeets| target.join(jm.iter().map(|m| target.meet(m.iter().map(|&g| images[g]))));
        for (l, r) in &p.relations {
            if eval(l) != eval(r) {
                let show = |jm: &JoinOfMeets| {
                    jm.iter()
                        .map(|m| m.iter().map(|&g| p.generators[g].as_str()).collect::<Vec<_>>().join("∧"))
                        .collect::<Vec<_>>()
                        .join(" ∨ ")
                };
                return Err(Error::SideConditionViolated { condition: "relation", witness: format!("{} = {}", show(l), show(r)) });
            }
        }
        let on_free = self.free.extend(target, images)?;
        let mut map = vec![usize::MAX; self.frame.len()];
        for x in 0..self.free.frame.len() {
            let class = self.quotient.apply(x);
            if map[class] == usize::MAX {
                map[class] = on_free.apply(x);
            } else if map[class] != on_free.apply(x) {
                return Err(Error::Input("images do not respect the congruence".into()));
            }
        }
        let h = FrameHom::new(self.frame.clone(), target.clone(), map)?;
        h.check().map_err(|v| Error::SideConditionViolated { condition: "homomorphism", witness: v.law.to_string() })?;
        Ok(h)
    }
}

impl FlatSite {
    /// The frame presentation of a flat site: `a ≤ b` for `a ≲ b`,
    /// `a ≤ ⋁A` for `a ◁₀ A`, `1 = ⋁X`, and `a ∧ b = ⋁(↓a ∩ ↓b)`.
    pub fn to_presentation(&self, label: &dyn Fn(usize) -> String) -> Presentation {
        let n = self.len();
        let mut p = Presentation::new((0..n).map(label).collect());
        for a in 0..n {
            for b in self.down(a).ones().filter(|&b| b != a) {
                p.inequation(vec![vec![b]], vec![vec![a]]);
            }
        }
        for (a, cover) in self.covers() {
            p.inequation(vec![vec![*a]], cover.ones().map(|c| vec![c]).collect());
        }
        p.equation(vec![vec![]], (0..n).map(|x| vec![x]).collect());
        for a in 0..n {
            for b in a + 1..n {
                let mut common = self.down(a).clone();
                common.intersect_with(self.down(b));
                p.equation(vec![vec![a, b]], common.ones().map(|c| vec![c]).collect());
            }
        }
        p
    }
}
