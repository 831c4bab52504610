//! Exact symbolic computation of braided groups and their double-bosonisation
//! quantum groups U(C̄, H, B).
//!
//! Layers, bottom up: [`scalars`] (coefficients in Q(q^{1/2}) or at a root of
//! unity), [`freealg`] (words and noncommutative polynomials), [`rmatrix`]
//! (braidings and braided integers), [`braidedgroup`], [`cartan`],
//! [`doublebos`] and [`pbw`].

pub mod braidedgroup;
pub mod cartan;
pub mod freealg;
pub mod doublebos;
pub mod linalg;
pub mod pbw;
pub mod rmatrix;
pub mod report;
pub mod scalars;

pub use linalg::Matrix;
pub use scalars::{Mode, Scalar, ScalarError};
