//! Linearized Reed-Solomon codes over GF(q^m) and their use for multishot
//! network coding.
//!
//! The crate is layered bottom-up:
//!
//! * [`gf`] — the tower GF(q0) ⊆ GF(q) ⊆ GF(q^m) with the Frobenius
//!   automorphism σ(a) = a^{q^r} and its norms.
//! * [`linalg`] — dense Gaussian elimination over any [`Field`].
//! * [`skewpoly`] — the skew polynomial ring GF(q^m)[x; σ].
//! * [`sumrank`] — sum-rank, sum-subspace and sum-injection metrics.
//! * [`lrs`] — code construction, duals, nested coset schemes and bounds.
//! * [`wbdecoder`] — the quadratic Welch-Berlekamp decoder and its
//!   erasure, wiretap and non-coherent front-ends.
//! * [`channel`] — the adversarial multishot matrix channel.

pub mod bounds;
pub mod channel;
pub mod error;
pub mod field;
pub mod gf;
pub mod linalg;
pub mod lrs;
pub mod skewpoly;
pub mod sumrank;
pub mod wbdecoder;

pub use error::{Error, Result};
pub use field::Field;
pub use gf::{Fq, Fqm, FieldTower, Subfield};
