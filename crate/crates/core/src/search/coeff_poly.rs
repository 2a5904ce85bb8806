use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{Coeff, Scalar};

/// A polynomial with rational coefficients in the ansatz unknowns `c_0, c_1, ...`.
///
/// Keys are sorted lists of unknown indices, so `c_0 c_2^2` is `[0, 2, 2]`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl CoeffPoly {
    pub fn var(i: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![i], BigRational::one());
        CoeffPoly { terms }
    }

    pub fn constant(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Vec::new(), q);
        }
        CoeffPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    /// Total degree in the unknowns, `-1` for zero.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|k| k.len() as i64).max().unwrap_or(-1)
    }

    fn insert(&mut self, key: Vec<u32>, q: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                if !q.is_zero() {
                    v.insert(q);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(k, q)| q.to_f64().unwrap_or(f64::NAN) * k.iter().map(|&i| x[i as usize]).product::<f64>())
            .sum()
    }

    pub fn eval_exact(&self, x: &[Scalar]) -> Scalar {
        let mut acc = Scalar::default();
        for (k, q) in &self.terms {
            let mut t = Scalar::from(q.clone());
            for &i in k {
                t = &t * &x[i as usize];
            }
            acc += &t;
        }
        acc
    }
}

impl Add for CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl Mul for CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Zero for CoeffPoly {
    fn zero() -> Self {
        CoeffPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for CoeffPoly {
    fn one() -> Self {
        CoeffPoly::constant(BigRational::one())
    }
}

impl Coeff for CoeffPoly {
    fn add_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, q) in &rhs.terms {
            out.insert(k.clone(), q.clone());
        }
        out
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, q) in &rhs.terms {
            out.insert(k.clone(), -q);
        }
        out
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = CoeffPoly::default();
        for (ka, qa) in &self.terms {
            for (kb, qb) in &rhs.terms {
                let mut k = Vec::with_capacity(ka.len() + kb.len());
                k.extend_from_slice(ka);
                k.extend_from_slice(kb);
                k.sort_unstable();
                out.insert(k, qa * qb);
            }
        }
        out
    }

    fn neg_ref(&self) -> Self {
        CoeffPoly { terms: self.terms.iter().map(|(k, q)| (k.clone(), -q)).collect() }
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        CoeffPoly::constant(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}
