//! Exact scalars, polynomials, affine maps of R⁴, and integer linear algebra.

pub mod affine;
pub mod dioph;
pub mod linalg;
pub mod poly;
pub mod rat;
pub mod subspace;

pub use affine::{AffineError, AffineMap4, PolyAffine, RatAffine, Scalar};
pub use dioph::{DiophError, DiophSolution, DiophSystem};
pub use poly::{Monomial, Poly, Var};
pub use rat::{fmt_rat, int, parse_rat, rat, Rat};
pub use subspace::{fixed_locus, AffineSubspace};
