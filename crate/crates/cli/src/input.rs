//! Input files: frames, relations with optional membership queries, and
//! inline `TValue` JSON.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use powerlocale_core::functor::{Relation, TValue};
use powerlocale_core::lattice::{FiniteFrame, FrameJson};
use powerlocale_core::Config;
use serde::Deserialize;

/// `two`, `c3`, `b2` and `chainN` name built-in frames; anything else is a
/// path to frame JSON.
pub fn load_frame(spec: &str, cfg: &Config) -> Result<Arc<FiniteFrame>> {
    let builtin = match spec {
        "two" => Some(FiniteFrame::two()),
        "c3" => Some(FiniteFrame::c3()),
        "b2" => Some(FiniteFrame::b2()),
        s => s.strip_prefix("chain").and_then(|n| n.parse().ok()).filter(|&n| (1..=cfg.frame_cap).contains(&n)).map(FiniteFrame::chain),
    };
    if let Some(f) = builtin.filter(|_| !Path::new(spec).exists()) {
        return Ok(Arc::new(f));
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    let json: FrameJson = serde_json::from_str(&text).with_context(|| format!("parsing {spec}"))?;
    Ok(Arc::new(FiniteFrame::from_json(&json, cfg)?))
}

/// A relation between two named ground sets. Queries are pairs of values
/// whose atoms index into `left` and `right`.
#[derive(Debug, Deserialize)]
pub struct RelationFile {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub pairs: Vec<(String, String)>,
    #[serde(default)]
    pub queries: Vec<(TValue, TValue)>,
}

impl RelationFile {
    pub fn load(path: &str) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {path}"))
    }

    pub fn relation(&self) -> Result<Relation> {
        let index = |names: &[String], x: &str| names.iter().position(|n| n == x).ok_or_else(|| anyhow!("unknown element `{x}`"));
        let pairs = self.pairs.iter().map(|(x, y)| Ok((index(&self.left, x)?, index(&self.right, y)?))).collect::<Result<Vec<_>>>()?;
        Ok(Relation::new(self.left.len(), self.right.len(), pairs)?)
    }
}

/// Inline JSON, or `@path` for a file.
pub fn read_json<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).with_context(|| format!("parsing value {arg}"))
}
