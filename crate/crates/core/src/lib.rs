//! Exact, degree-truncated computations with twisted graded algebras.
//!
//! Algebras are given by finite presentations over a field of rational
//! functions in named parameters. Every quotient is realised degree by degree
//! up to a cutoff by exact row reduction, and the twisting constructions
//! (Zhang twists, twisting systems, twisted tensor products, twisted Segre
//! products, cocycle twists of quantum matrices) are built and verified on top
//! of those truncations.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod freealg;
pub mod linalg;
pub mod morphisms;
pub mod presentation;
pub mod quantum;
pub mod scalars;
pub mod segre;
pub mod text;
pub mod truncated;
pub mod ttp;

pub use error::{Error, Result};
pub use freealg::{Alphabet, NcPoly, Word};
pub use linalg::Matrix;
pub use presentation::GradedPresentation;
pub use scalars::{FieldElement, ParamSpace, Poly};
pub use truncated::{GradedAlgebra, TruncatedAlgebraModel};
