//! Finite frames, frame homomorphisms, and the order-theoretic predicates
//! (negation, well-inside, clopens, regularity, zero-dimensionality).

mod frame;
mod hom;
mod iso;

pub use frame::{Classification, FiniteFrame, FrameJson};
pub use hom::{check_frame_hom, FrameHom, HomViolation};
pub use iso::find_iso;

#[cfg(test)]
mod tests;
