//! Exact coefficient rings: ℚ, ℚ(q_1,…,q_s), and polynomial or Laurent
//! polynomial rings over them.
//!
//! The tower is stored flattened. An element of `QQ(q)[t][z^+-]` is a map
//! from exponent vectors over `(t, z)` to reduced fractions in `q`.

pub mod frac;
pub mod mpoly;
pub mod ring;
pub mod text;

pub use frac::Frac;
pub use mpoly::{MPoly, Q};
pub use ring::{ArithOp, CoeffError, Ring, RingDesc, RingElem, RingKind};
