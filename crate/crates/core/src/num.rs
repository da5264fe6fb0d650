//! Scalar traits for the dense linear algebra.
//!
//! [`Scalar`] is the bound used by [`crate::matrix::Matrix`]; it is satisfied
//! by `f32`/`f64` and by the exact rational type. The lattice enumeration in
//! [`crate::lattice`] additionally needs exact floor/ceil and total order,
//! which only the rational type provides ([`ExactScalar`]).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt::{Debug, Display};
use std::ops::Div;

/// Field-like scalar for generic matrix algebra.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + Zero + One + Signed + Div<Output = Self> + Debug + Display
{
}

impl<T> Scalar for T where
    T: Clone + PartialEq + PartialOrd + Zero + One + Signed + Div<Output = T> + Debug + Display
{
}

/// Scalars over which lattice enumeration is exact.
pub trait ExactScalar: Scalar + Ord {
    fn floor_int(&self) -> BigInt;
    fn from_int(n: &BigInt) -> Self;
    fn from_i64(n: i64) -> Self;
}

impl ExactScalar for num_rational::BigRational {
    fn floor_int(&self) -> BigInt {
        self.floor().to_integer()
    }

    fn from_int(n: &BigInt) -> Self {
        num_rational::BigRational::from_integer(n.clone())
    }

    fn from_i64(n: i64) -> Self {
        num_rational::BigRational::from_integer(BigInt::from(n))
    }
}
