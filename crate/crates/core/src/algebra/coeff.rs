use std::fmt::Debug;

use num_traits::{One, Zero};

use super::Scalar;

/// Coefficient ring for [`Poly3`](super::Poly3).
///
/// Implemented for the exact field [`Scalar`], for `f64`, and for the
/// unknown-coefficient ring used by the ansatz search.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + Zero + One {
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// The rational `n/d` embedded in the ring.
    fn from_ratio(n: i64, d: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

/// Coefficients that have a real value.
pub trait RealCoeff: Coeff {
    fn to_f64(&self) -> f64;
}

impl Coeff for Scalar {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::ratio(n, d)
    }
}

impl RealCoeff for Scalar {
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(self)
    }
}

impl Coeff for f64 {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
}

impl RealCoeff for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}
