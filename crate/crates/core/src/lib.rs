//! Exact computations behind left-orderability certificates for graph
//! manifolds: orderings of the braid group B3 and the Klein bottle group,
//! slope calculus on boundary tori, finitely presented groups, splice-tree
//! certificate search, and Fox's formula for cyclic branched covers.
//!
//! Integer linear algebra and polynomial arithmetic are generic over
//! [`scalar::ExactInt`]; the aliases below fix the big-integer instances used
//! for certificates.

pub mod alexander;
pub mod braid3;
pub mod compat;
pub mod fpgroup;
pub mod klein;
pub mod linalg;
pub mod sampling;
pub mod scalar;
pub mod seifert;
pub mod slopes;

pub use braid3::{BraidWord, Sign3};
pub use klein::KleinElement;
pub use slopes::{GluingMatrix, Slope};

/// Arbitrary precision integer used for certificates.
pub type Integer = num_bigint::BigInt;
/// Integer Laurent polynomial with big coefficients.
pub type IntLaurentPoly = alexander::LaurentPoly<Integer>;
/// Integer matrix with big entries.
pub type BigMatrix = linalg::IntMatrix<Integer>;
/// |H1| of a cyclic branched cover.
pub type CoverOrder = alexander::BranchedCoverOrder<Integer>;
