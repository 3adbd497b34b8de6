use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("no top element")]
    NoTop,
    #[error("no bottom element")]
    NoBottom,
    #[error("not a lattice: {a} and {b} have no {missing}")]
    NotALattice { a: String, b: String, missing: &'static str },
    #[error("not distributive: {a} ∧ ({b} ∨ {c}) differs from ({a} ∧ {b}) ∨ ({a} ∧ {c})")]
    NotDistributive { a: String, b: String, c: String },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("functor `{0}` is not finite-to-finite")]
    NotFiniteToFinite(String),
    #[error("{what}: estimated size {estimate} exceeds cap {cap}")]
    SizeCapExceeded { what: String, estimate: String, cap: String },
    #[error("atom {0} outside the domain of the map")]
    AtomOutsideDomain(usize),
    #[error("value {value} does not have the shape of {functor}")]
    ShapeMismatch { functor: String, value: String },
    #[error("not a flat site: {0}")]
    NotFlat(String),
    #[error("side condition `{condition}` violated: {witness}")]
    SideConditionViolated { condition: &'static str, witness: String },
    #[error("natural transformation conditions failed: {0}")]
    NtConditionsFailed(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, estimate: Option<u128>, cap: impl ToString) -> Self {
        Error::SizeCapExceeded {
            what: what.into(),
            estimate: estimate.map_or_else(|| "more than 2^128".to_string(), |e| e.to_string()),
            cap: cap.to_string(),
        }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::SizeCapExceeded { .. })
    }
}
