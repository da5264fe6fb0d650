//! Exact-arithmetic toolkit for rational elliptic surfaces: ADE lattices,
//! Kodaira fiber types, Weierstrass models over Q(t), the Oguiso-Shioda
//! classification data, gap-number decision procedures and conic-bundle
//! fiber classification.
//!
//! All computations are exact; the scalar type everywhere is an
//! arbitrary-precision rational. The dense linear algebra in [`matrix`] is
//! generic over a scalar via `num-traits`, with the concrete aliases
//! [`Rational`] and [`RationalMatrix`] exported at the crate root.

pub mod conic;
pub mod error;
pub mod gaps;
pub mod kodaira;
pub mod lattice;
pub mod matrix;
pub mod mwl;
pub mod num;
pub mod poly;
pub mod rational;
pub mod weierstrass;

pub use error::Error;
pub use lattice::{Lattice, LatticeBlock, LatticeExpr};
pub use matrix::Matrix;

/// Exact arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;

/// Dense matrix over [`Rational`].
pub type RationalMatrix = Matrix<Rational>;

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
