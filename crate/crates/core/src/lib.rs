//! Exact symbolic computation for the Yangian of gl_N, its dual, and the
//! double Yangian: normal forms, Hopf structure maps, the canonical
//! R-matrix pairing, a truncated universal R-matrix, central series, and
//! matrix representations, together with a verification harness for the
//! identities the construction satisfies.
//!
//! Everything is computed over exact rationals; identities are checked as
//! exact equalities (within the stated series and dual-degree
//! truncations), never numerically.

pub mod algebra;
pub mod json;
pub mod pairing;
pub mod parse;
pub mod rat;
pub mod reps;
pub mod series;
pub mod hopf;
pub mod tensor;
pub mod verify;

pub use algebra::{AlgElement, AlgebraTag, DualTrunc, GenId, Monomial};
pub use rat::Rational;
pub use series::{Direction, PolySeries, VariableSpec};
