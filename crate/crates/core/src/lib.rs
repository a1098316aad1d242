//! Genus-zero mirror-symmetry computations for the crepant resolution pairs
//! ℙ(1,1,2) ← 𝔽₂ and ℙ(1,1,1,3) ← 𝔽₃.
//!
//! The crate is organised bottom-up:
//! - [`scalar`] and [`mp`]: exact, symbolic and high-precision coefficient fields;
//! - [`coh`]: the four cohomology algebras and functional calculus on nilpotents;
//! - [`series`]: truncated series in base coordinates with Laurent-in-z coefficients;
//! - [`models`]: I-functions, Picard–Fuchs operators and their annihilation checks;
//! - [`mirror`]: mirror maps and flat-coordinate comparison series;
//! - [`barnes`]: Mellin–Barnes continuation of the 𝔽₃ and 𝔽₂ I-functions;
//! - [`givental`]: the symplectic transformations 𝕌 and their properties;
//! - [`lg`]: Landau–Ginzburg superpotentials and Jacobi rings;
//! - [`compare`]: the maps Θ between quantum products.

pub mod barnes;
pub mod coh;
pub mod compare;
pub mod givental;
pub mod error;
pub mod lg;
pub mod linalg;
pub mod mirror;
pub mod models;
pub mod mp;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use mp::Cx;
pub use coh::{Analytic, GradedAlgebra, ModelId};
pub use scalar::{Const, Scalar, SpecialField, K, Q};
pub use series::{CohSeries, LaurentZ, Var};
