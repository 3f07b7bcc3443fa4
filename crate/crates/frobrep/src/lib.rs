//! Exact-arithmetic computer algebra for representations of Frobenius-type
//! triangular matrix algebras.
//!
//! The library builds symmetrizable Cartan matrices and their Weyl-group
//! combinatorics, constructs triangular algebras whose diagonal cores are
//! truncated polynomial rings and whose off-diagonal bimodules are free on
//! both sides, and implements reflection functors, Coxeter functors, and the
//! Auslander-Reiten translation on the category of representations.  On top
//! of that sit enumeration of the indecomposable tau-locally-free modules in
//! Dynkin type (in bijection with positive roots), homological checks
//! (Ext groups, projective/injective dimension bounds, the Gorenstein
//! property), and an APR-style tilting module with its endomorphism-algebra
//! comparison.
//!
//! All arithmetic is exact: either arbitrary-precision rationals or a prime
//! field, selected at runtime.

pub mod bimod;
pub mod cartan;
pub mod dynkin;
pub mod field;
pub mod frobcore;
pub mod functors;
pub mod homology;
pub mod json;
pub mod matrix;
pub mod repcat;
pub mod tilting;
pub mod triangalg;
pub mod weyl;
