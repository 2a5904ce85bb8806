//! Sparse polynomials in `mu1, mu2, mu3`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::coeff::{Coeff, RealCoeff};
use super::scalar::{fmt_rational, Scalar};

/// Exponent triple of a monomial `mu1^e1 mu2^e2 mu3^e3`.
///
/// Ordered graded-lexicographically: lower total degree first, then larger
/// `e1`, then larger `e2`. This is the canonical print order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn var(i: usize) -> Monomial {
        let mut e = [0; 3];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    pub fn eval_f64(&self, p: [f64; 3]) -> f64 {
        p[0].powi(self.0[0] as i32) * p[1].powi(self.0[1] as i32) * p[2].powi(self.0[2] as i32)
    }

    /// All monomials of total degree `d`, in canonical order.
    pub fn of_degree(d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for e1 in (0..=d).rev() {
            for e2 in (0..=d - e1).rev() {
                out.push(Monomial([e1, e2, d - e1 - e2]));
            }
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0[0].cmp(&self.0[0]))
            .then_with(|| other.0[1].cmp(&self.0[1]))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "mu{}", i + 1)?;
            } else {
                write!(f, "mu{}^{}", i + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A polynomial in `(mu1, mu2, mu3)` stored as a sparse monomial map.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Clone, PartialEq)]
pub struct Poly3<C = Scalar> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for Poly3<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Poly3<C> {
    pub fn zero() -> Self {
        Poly3 { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// The coordinate `mu_{i+1}` (0-based index).
    pub fn var(i: usize) -> Self {
        Self::term(C::one(), Monomial::var(i))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.add_ref(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree `-1`.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(-1)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// True when every term has the same total degree (the zero polynomial counts).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// The degree-`k` homogeneous component.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Poly3 { terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|_, c| c.neg_ref())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        self.map_terms(|_, c| c.mul_ref(k))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn map_terms(&self, f: impl Fn(&Monomial, &C) -> C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, f(m, c))))
    }

    /// Exact partial derivative with respect to `mu_{i+1}` (0-based index).
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < 3, "axis index must be 0, 1 or 2");
        Self::from_terms(self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0;
            let k = e[i];
            e[i] -= 1;
            (Monomial(e), c.mul_ref(&C::from_int(k as i64)))
        }))
    }

    /// Euler operator `sum_i mu_i d/dmu_i`: scales each monomial by its degree.
    pub fn euler(&self) -> Self {
        self.map_terms(|m, c| c.mul_ref(&C::from_int(m.degree() as i64)))
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }

    /// Evaluates at a point whose coordinates live in the coefficient ring.
    pub fn eval_in(&self, point: &[C; 3]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul_ref(&point[i]);
                }
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// Substitutes `mu -> T mu`, i.e. returns `p(T mu)` for a 3x3 matrix `T`.
    pub fn compose_linear(&self, t: &[[C; 3]; 3]) -> Self {
        let images: Vec<Self> =
            (0..3).map(|i| Self::from_terms((0..3).map(|j| (Monomial::var(j), t[i][j].clone())))).collect();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&images[i]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly3<D> {
        Poly3::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> f64
    where
        C: RealCoeff,
    {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl<C: RealCoeff> Poly3<C> {
    /// Floating-point evaluation (term sum).
    pub fn eval(&self, point: [f64; 3]) -> f64 {
        self.terms.iter().map(|(m, c)| c.to_f64() * m.eval_f64(point)).sum()
    }

    pub fn to_f64(&self) -> Poly3<f64> {
        self.map_coeffs(|c| c.to_f64())
    }
}

impl Poly3<Scalar> {
    /// Exact evaluation over `Q(sqrt 3)`.
    pub fn eval_exact(&self, point: &[Scalar; 3]) -> Scalar {
        self.eval_in(point)
    }
}

impl<C: Coeff> std::ops::Add for &Poly3<C> {
    type Output = Poly3<C>;
    fn add(self, rhs: Self) -> Poly3<C> {
        Poly3::add(self, rhs)
    }
}

impl<C: Coeff> std::ops::Sub for &Poly3<C> {
    type Output = Poly3<C>;
    fn sub(self, rhs: Self) -> Poly3<C> {
        Poly3::sub(self, rhs)
    }
}

impl<C: Coeff> std::ops::Mul for &Poly3<C> {
    type Output = Poly3<C>;
    fn mul(self, rhs: Self) -> Poly3<C> {
        Poly3::mul(self, rhs)
    }
}

impl<C: Coeff> std::ops::Neg for &Poly3<C> {
    type Output = Poly3<C>;
    fn neg(self) -> Poly3<C> {
        Poly3::neg(self)
    }
}

/// Canonical text form, readable back by [`parse_poly`](super::parse_poly).
///
/// Terms follow the graded-lex order of [`Monomial`]; a coefficient
/// `a + b*sqrt(3)` with both parts nonzero prints as two terms.
impl fmt::Display for Poly3<Scalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            for (part, with_s) in [(c.a(), false), (c.b(), true)] {
                if part.is_zero() {
                    continue;
                }
                let negative = part < &num_rational::BigRational::zero();
                let mag = if negative { -part.clone() } else { part.clone() };
                if first {
                    if negative {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if negative { '-' } else { '+' })?;
                }
                first = false;
                let constant = *m == Monomial::ONE;
                let mut need_star = false;
                if !mag.is_one() || (constant && !with_s) {
                    fmt_rational(&mag, f)?;
                    need_star = true;
                }
                if with_s {
                    if need_star {
                        write!(f, "*")?;
                    }
                    write!(f, "s")?;
                    need_star = true;
                }
                if !constant {
                    if need_star {
                        write!(f, "*")?;
                    }
                    write!(f, "{m}")?;
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Poly3<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(m, c)| (m.0, c))).finish()
    }
}

impl fmt::Display for Poly3<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *m == Monomial::ONE {
                write!(f, "{c:?}")?;
            } else {
                write!(f, "{c:?}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, phi0};

    fn p(s: &str) -> Poly3 {
        parse_poly(s).unwrap()
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(Poly3::<Scalar>::zero().degree(), -1);
        assert_eq!(p("7").degree(), 0);
        assert_eq!(p("mu1^2*mu3 + mu2").degree(), 3);
    }

    #[test]
    fn partial_power_rule() {
        assert_eq!(p("mu1^2*mu2").partial(0), p("2*mu1*mu2"));
        assert!(p("5").partial(2).is_zero());
    }

    #[test]
    fn partial_of_phi0() {
        // d/dmu2 of 3 + |mu|^2 + mu1 mu2 mu3/sqrt(3)
        assert_eq!(phi0().partial(1), p("2*mu2 + 1/3*s*mu1*mu3"));
    }

    #[test]
    fn euler_examples() {
        assert_eq!(p("mu1^2*mu2").euler(), p("3*mu1^2*mu2"));
        assert!(p("4").euler().is_zero());
        // 2|mu|^2 + (3/sqrt 3) mu1 mu2 mu3 = 2|mu|^2 + sqrt(3) mu1 mu2 mu3
        assert_eq!(phi0().euler(), p("2*mu1^2 + 2*mu2^2 + 2*mu3^2 + s*mu1*mu2*mu3"));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(phi0().eval([0.0, 0.0, 0.0]), 3.0);
        let r3 = Scalar::sqrt3();
        assert_eq!(phi0().eval_exact(&[r3.clone(), r3.clone(), r3]), Scalar::int(15));
        assert_eq!(Poly3::<Scalar>::zero().eval([1.5, -2.0, 7.0]), 0.0);
    }

    #[test]
    fn canonical_order() {
        let q = p("mu3 + mu2^2 + 1 + mu1*mu2 + mu1");
        assert_eq!(q.to_string(), "1 + mu1 + mu3 + mu1*mu2 + mu2^2");
    }

    #[test]
    fn compose_with_permutation() {
        let perm = [
            [Scalar::zero(), Scalar::one(), Scalar::zero()],
            [Scalar::zero(), Scalar::zero(), Scalar::one()],
            [Scalar::one(), Scalar::zero(), Scalar::zero()],
        ];
        // mu1 -> mu2, mu2 -> mu3, mu3 -> mu1
        assert_eq!(p("mu1^2*mu3").compose_linear(&perm), p("mu2^2*mu1"));
    }

    #[test]
    fn monomials_of_degree() {
        assert_eq!(Monomial::of_degree(3).len(), 10);
        assert_eq!(Monomial::of_degree(5).len(), 21);
        let m = Monomial::of_degree(2);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
    }
}
