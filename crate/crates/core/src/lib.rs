//! T-powerlocales of finite frames.

pub mod checks;
pub mod config;
pub mod error;
pub mod functor;
pub mod lattice;
pub mod powerlocale;
pub mod presentation;
pub mod report;
pub mod vietoris;

pub use config::{Config, Exec};
pub use error::{Error, Result};
