//! Linear and group codes over finite chain rings.
//!
//! The crate builds codes over `Z_{p^v}` and `F_{p^m}[u]/(u^v)`, works in group
//! algebras `R[G]`, enumerates linear complementary pairs of two-sided group
//! codes through central idempotents, and checks that the inversion map
//! `g ↦ g⁻¹` carries `C` onto `D⊥` for each such pair.

pub mod algebra;
pub mod code;
mod error;
pub mod group;
pub mod lcp;
pub mod oracle;
pub mod props;
pub mod ring;
pub mod verify;
pub mod wire;

pub use error::{Error, Result};
