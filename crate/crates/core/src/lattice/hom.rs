use std::sync::Arc;

use serde::Serialize;

use super::FiniteFrame;
use crate::{Error, Result};

/// A total map between finite frames. Construction checks only totality;
/// [`FrameHom::check`] decides the preservation laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameHom {
    source: Arc<FiniteFrame>,
    target: Arc<FiniteFrame>,
    map: Vec<usize>,
}

/// The first preservation law a map breaks, with the offending arguments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomViolation {
    pub law: &'static str,
    pub arguments: Vec<String>,
}

impl FrameHom {
    pub fn new(source: Arc<FiniteFrame>, target: Arc<FiniteFrame>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::Input(format!("map has {} entries, source has {} elements", map.len(), source.len())));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::Input(format!("image {bad} outside the target frame")));
        }
        Ok(FrameHom { source, target, map })
    }

    pub fn identity(frame: Arc<FiniteFrame>) -> Self {
        let map = (0..frame.len()).collect();
        FrameHom { source: frame.clone(), target: frame, map }
    }

    /// The unique homomorphism out of `𝟚`.
    pub fn initial(target: Arc<FiniteFrame>) -> Self {
        let map = vec![target.bottom(), target.top()];
        FrameHom { source: Arc::new(FiniteFrame::two()), target, map }
    }

    pub fn source(&self) -> &Arc<FiniteFrame> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteFrame> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FrameHom) -> Result<FrameHom> {
        if *self.target != *other.source {
            return Err(Error::Input("composing homs with mismatched frames".into()));
        }
        let map = self.map.iter().map(|&x| other.map[x]).collect();
        Ok(FrameHom { source: self.source.clone(), target: other.target.clone(), map })
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.source.len() == self.target.len() && self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// Checks 0, 1, binary meets and binary joins; on a finite frame binary
    /// joins plus the empty join give all joins.
    pub fn check(&self) -> std::result::Result<(), HomViolation> {
        let (s, t, f) = (&*self.source, &*self.target, &self.map);
        if f[s.bottom()] != t.bottom() {
            return Err(HomViolation { law: "bottom", arguments: vec![] });
        }
        if f[s.top()] != t.top() {
            return Err(HomViolation { law: "top", arguments: vec![] });
        }
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                let args = || vec![s.name(a).to_string(), s.name(b).to_string()];
                if f[s.meet2(a, b)] != t.meet2(f[a], f[b]) {
                    return Err(HomViolation { law: "meet", arguments: args() });
                }
                if f[s.join2(a, b)] != t.join2(f[a], f[b]) {
                    return Err(HomViolation { law: "join", arguments: args() });
                }
            }
        }
        Ok(())
    }

    /// Checks joins only (suplattice homomorphism).
    pub fn check_joins(&self) -> std::result::Result<(), HomViolation> {
        let (s, t, f) = (&*self.source, &*self.target, &self.map);
        if f[s.bottom()] != t.bottom() {
            return Err(HomViolation { law: "bottom", arguments: vec![] });
        }
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                if f[s.join2(a, b)] != t.join2(f[a], f[b]) {
                    return Err(HomViolation { law: "join", arguments: vec![s.name(a).to_string(), s.name(b).to_string()] });
                }
            }
        }
        Ok(())
    }

    pub fn is_frame_hom(&self) -> bool {
        self.check().is_ok()
    }
}

/// Checks `h` and reports the violating subset, if any.
pub fn check_frame_hom(h: &FrameHom) -> std::result::Result<(), HomViolation> {
    h.check()
}
