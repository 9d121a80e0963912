//! Rank-metric, matrix and lifted subspace codes over finite-field towers,
//! together with their equivalence maps and automorphism groups.

pub mod automorphisms;
pub mod codes;
pub mod equivalence;
pub mod error;
pub mod expansion;
pub mod field;
pub mod matrix;
pub mod subspace;
pub mod verify;

pub use error::{Error, Result};
pub use field::{make_tower, Elem, Op, Tower};
pub use matrix::{FieldTag, Mat, RrefResult};
