//! Exact arithmetic over `Q(sqrt 3)` and sparse polynomial calculus in three variables.

mod coeff;
mod mat3;
mod parse;
mod poly;
mod scalar;

pub use coeff::{Coeff, RealCoeff};
pub use mat3::{adj3, det3, hessian, polarized_det, Mat3};
pub use parse::{parse_poly, ParseError};
pub use poly::{Monomial, Poly3};
pub use scalar::Scalar;

/// The cubic potential `3 + |mu|^2 + mu1 mu2 mu3 / sqrt(3)` of the homogeneous
/// structure on `S^3 x S^3`.
pub fn phi0() -> Poly3 {
    let mut p = sum_of_squares();
    p.add_term(Monomial::ONE, Scalar::int(3));
    p.add_term(Monomial([1, 1, 1]), Scalar::from_parts(0, 1, 1, 3));
    p
}

/// `mu1^2 + mu2^2 + mu3^2`.
pub fn sum_of_squares<C: Coeff>() -> Poly3<C> {
    Poly3::from_terms((0..3).map(|i| {
        let mut e = [0; 3];
        e[i] = 2;
        (Monomial(e), C::one())
    }))
}
