//! Exact integer scalars.
//!
//! The linear algebra and polynomial kernels are written once against
//! [`ExactInt`] and instantiated with machine integers for speed or with
//! [`num_bigint::BigInt`] when certificate-grade exactness is required.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

/// An exact Euclidean ring of integers.
pub trait ExactInt: Clone + Debug + Display + Integer + Signed + ToPrimitive + From<i32> {
    fn from_i64(v: i64) -> Self;
}

impl ExactInt for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
}

impl ExactInt for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}
