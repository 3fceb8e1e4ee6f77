//! Linear codes from the point-hyperplane geometry of PG(n,q).
//!
//! The flags `(p, H)` of PG(n,q), mapped to rank-1 trace-zero matrices
//! `x ξ`, form a projective system; the associated code has one coordinate
//! per flag and one codeword `(Tr(X_i M))_i` per matrix `M` up to scalar
//! matrices. This crate builds the system over any GF(p^e), computes the
//! code's parameters and weights by direct evaluation and from eigenspace
//! counts, and checks minimality and the geometric classification of
//! codewords by exhaustive enumeration at small sizes.

pub mod analysis;
pub mod code;
pub mod field;
pub mod flags;
pub mod matrix;
pub mod parallel;
pub mod rng;
pub mod verify;

pub use code::{CodeSummary, Codeword, SpectrumMode, SpectrumReport};
pub use field::{Field, FieldElement};
pub use flags::{Flag, FlagSystem, PointKind, ProjPoint, Variant};
pub use matrix::{EigenProfile, Matrix};
