//! Executable constructions for noncommutative differential geometry at desk
//! scale: truncated differential graded algebras, graded centers,
//! connections and curvature on projective modules, the pseudoinverse
//! behind abelianness, parallel transport over the interval, and
//! noncommutative-torus lattice invariants.

pub mod abelian;
pub mod algebra;
pub mod connection;
pub mod error;
pub mod fuzz;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod sparse;
pub mod torus;
pub mod transport;

pub use algebra::{AlgebraElement, AlgebraHandle, CenterBasis, GradedBasisAlgebra, Truncation};
pub use error::{Error, Result};
pub use scalar::{Exact, PhaseExponent, QExt, Scalar, ScalarMode};
pub use sparse::SparseVec;
