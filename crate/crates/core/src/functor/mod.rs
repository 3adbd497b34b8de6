//! Finitary Kripke-polynomial functors: carriers, functorial action,
//! relation lifting, base, lifted members and slim redistributions.

mod expr;
mod lift;
mod members;
mod multiset;
mod ops;
mod value;

pub use expr::{parse_functor, FunctorExpr};
pub use lift::{lift_relation, lift_relation_span_oracle, lift_witness, project, related, LiftedRelation, Relation};
pub use members::{lifted_members, member, slim_redistributions, slim_redistributions_by_enumeration, subset};
pub use multiset::{coupling, multiset_lift, AtomCoupling, Coupling};
pub use ops::{base, carrier, carrier_over, carrier_size, fmap, fmap_table, leaves, map_leaves, well_formed};
pub use value::TValue;

#[cfg(test)]
mod tests;
