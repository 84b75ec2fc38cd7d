//! Finite-field tower GF(q0) ⊆ GF(q = q0^s) ⊆ GF(q^m).

pub mod count;
pub(crate) mod poly;
mod subfield;
mod tower;

pub use subfield::{Fq, Subfield, MAX_Q};
pub use tower::{FieldTower, Fqm, TowerParams, MAX_M};
