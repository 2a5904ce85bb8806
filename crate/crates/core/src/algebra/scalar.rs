//! Exact elements of the quadratic field `Q(sqrt 3)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact number `a + b*sqrt(3)` with rational `a` and `b`.
///
/// Both parts are kept as reduced [`BigRational`]s, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Scalar { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Scalar { a, b: BigRational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n/d`; panics when `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(rat(n, d))
    }

    /// `(a_num/a_den) + (b_num/b_den) * sqrt(3)`.
    pub fn from_parts(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Self {
        Scalar { a: rat(a_num, a_den), b: rat(b_num, b_den) }
    }

    pub fn sqrt3() -> Self {
        Scalar { a: BigRational::zero(), b: BigRational::one() }
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `sqrt(3)`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b*sqrt(3)`.
    pub fn conjugate(&self) -> Self {
        Scalar { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a^2 - 3 b^2`; nonzero for every nonzero element since sqrt(3) is irrational.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - rat(3, 1) * &self.b * &self.b
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Scalar { a: &self.a / &n, b: -(&self.b / &n) })
    }

    /// Exact sign of the real number `a + b*sqrt(3)`.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // Opposite signs: compare a^2 with 3 b^2.
        let lhs = &self.a * &self.a;
        let rhs = rat(3, 1) * &self.b * &self.b;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 3f64.sqrt()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar { a: BigRational::zero(), b: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::int(1)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        // (a + b r)(c + d r) = (ac + 3bd) + (ad + bc) r
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad = &self.a * &rhs.b;
        let bc = &self.b * &rhs.a;
        Scalar { a: ac + rat(3, 1) * bd, b: ad + bc }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        let inv = rhs.inverse().expect("division by zero in Q(sqrt 3)");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a, b: -self.b }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a.clone(), b: -self.b.clone() }
    }
}

pub(crate) fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Prints in the polynomial text grammar: `a`, `b*s`, or `a + b*s`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut wrote = false;
        if !self.a.is_zero() {
            fmt_rational(&self.a, f)?;
            wrote = true;
        }
        if !self.b.is_zero() {
            let mag = self.b.abs();
            if wrote {
                write!(f, " {} ", if self.b.is_negative() { '-' } else { '+' })?;
            } else if self.b.is_negative() {
                write!(f, "-")?;
            }
            if mag.is_one() {
                write!(f, "s")?;
            } else {
                fmt_rational(&mag, f)?;
                write!(f, "*s")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt3_squares_to_three() {
        let s = Scalar::sqrt3();
        assert_eq!(&s * &s, Scalar::int(3));
    }

    #[test]
    fn lambda_squared_is_one_third() {
        // 1/sqrt(3) = sqrt(3)/3
        let lambda = Scalar::from_parts(0, 1, 1, 3);
        assert_eq!(&lambda * &lambda, Scalar::ratio(1, 3));
        assert_eq!(Scalar::sqrt3().inverse().unwrap(), lambda);
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(Scalar::zero().inverse().is_none());
    }

    #[test]
    fn exact_sign() {
        assert_eq!(Scalar::from_parts(2, 1, -1, 1).signum(), 1); // 2 - 1.732
        assert_eq!(Scalar::from_parts(1, 1, -1, 1).signum(), -1);
        assert_eq!(Scalar::from_parts(-3, 1, 1, 1).signum(), -1);
        assert_eq!(Scalar::from_parts(-1, 1, 1, 1).signum(), 1);
        assert_eq!(Scalar::zero().signum(), 0);
        assert!(Scalar::ratio(7, 4) > Scalar::sqrt3());
        assert!(Scalar::ratio(17, 10) < Scalar::sqrt3());
    }

    #[test]
    fn lowest_terms() {
        let x = Scalar::ratio(6, -4);
        assert_eq!(x.a().numer(), &BigInt::from(-3));
        assert_eq!(x.a().denom(), &BigInt::from(2));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::from_parts(0, 1, 1, 3).to_string(), "1/3*s");
        assert_eq!(Scalar::from_parts(3, 1, -1, 1).to_string(), "3 - s");
        assert_eq!(Scalar::ratio(-5, 2).to_string(), "-5/2");
        assert_eq!(Scalar::zero().to_string(), "0");
    }
}
