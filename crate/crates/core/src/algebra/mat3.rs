use nalgebra::Matrix3;

use super::coeff::{Coeff, RealCoeff};
use super::Poly3;

/// A 3x3 matrix of polynomials.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat3<C: Coeff = super::Scalar> {
    entries: [[Poly3<C>; 3]; 3],
    symmetric: bool,
}

impl<C: Coeff> Mat3<C> {
    pub fn new(entries: [[Poly3<C>; 3]; 3]) -> Self {
        let symmetric = (0..3).all(|i| (0..i).all(|j| entries[i][j] == entries[j][i]));
        Mat3 { entries, symmetric }
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Poly3<C>) -> Self {
        Self::new(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| Poly3::zero())
    }

    pub fn identity() -> Self {
        Self::scalar_identity(C::one())
    }

    /// `c * I`.
    pub fn scalar_identity(c: C) -> Self {
        Self::from_fn(|i, j| if i == j { Poly3::constant(c.clone()) } else { Poly3::zero() })
    }

    /// Matrix of second partials `d_i d_j p`.
    pub fn hessian(p: &Poly3<C>) -> Self {
        let grad = p.gradient();
        let mut entries: [[Poly3<C>; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in i..3 {
                let h = grad[i].partial(j);
                entries[j][i] = h.clone();
                entries[i][j] = h;
            }
        }
        Mat3 { entries, symmetric: true }
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly3<C> {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[[Poly3<C>; 3]; 3] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Poly3::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].add(&rhs.entries[i][j]))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].sub(&rhs.entries[i][j]))
    }

    pub fn scale(&self, k: &Poly3<C>) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].mul(k))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| {
            let mut acc = Poly3::zero();
            for k in 0..3 {
                acc = acc.add(&self.entries[i][k].mul(&rhs.entries[k][j]));
            }
            acc
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].clone())
    }

    pub fn trace(&self) -> Poly3<C> {
        self.entries[0][0].add(&self.entries[1][1]).add(&self.entries[2][2])
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Poly3<C> {
        let m = &self.entries;
        let c0 = m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1]));
        let c1 = m[1][2].mul(&m[2][0]).sub(&m[1][0].mul(&m[2][2]));
        let c2 = m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0]));
        m[0][0].mul(&c0).add(&m[0][1].mul(&c1)).add(&m[0][2].mul(&c2))
    }

    /// Adjugate (transposed cofactor matrix), so `M * adj(M) = det(M) * I`.
    pub fn adj(&self) -> Self {
        let m = &self.entries;
        let minor =
            |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0].mul(&m[r1][c1]).sub(&m[r0][c1].mul(&m[r1][c0]));
        // cofactor(i, j) uses rows != i, cols != j with cyclic ordering so the sign is built in.
        let cof = |i: usize, j: usize| minor((i + 1) % 3, (i + 2) % 3, (j + 1) % 3, (j + 2) % 3);
        Self::from_fn(|i, j| cof(j, i))
    }

    /// First-order coefficient of `det(N + t M)` in `t`, i.e. `trace(adj(N) M)`.
    pub fn polarized_det(&self, m: &Self) -> Poly3<C> {
        // Sum over columns k of det(N with column k replaced by M's column k).
        let mut acc = Poly3::zero();
        for k in 0..3 {
            let replaced =
                Self::from_fn(|i, j| if j == k { m.entries[i][j].clone() } else { self.entries[i][j].clone() });
            acc = acc.add(&replaced.det());
        }
        acc
    }

    /// Quadratic form `v^T M v` with a polynomial vector `v`.
    pub fn quadratic_form(&self, v: &[Poly3<C>; 3]) -> Poly3<C> {
        let mut acc = Poly3::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc.add(&self.entries[i][j].mul(&v[i]).mul(&v[j]));
            }
        }
        acc
    }
}

impl<C: RealCoeff> Mat3<C> {
    /// Numeric matrix at a point.
    pub fn eval(&self, point: [f64; 3]) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.entries[i][j].eval(point))
    }
}

pub fn det3<C: Coeff>(m: &Mat3<C>) -> Poly3<C> {
    m.det()
}

pub fn adj3<C: Coeff>(m: &Mat3<C>) -> Mat3<C> {
    m.adj()
}

pub fn hessian<C: Coeff>(p: &Poly3<C>) -> Mat3<C> {
    Mat3::hessian(p)
}

pub fn polarized_det<C: Coeff>(n: &Mat3<C>, m: &Mat3<C>) -> Poly3<C> {
    n.polarized_det(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, phi0, Scalar};

    fn p(s: &str) -> Poly3 {
        parse_poly(s).unwrap()
    }

    #[test]
    fn hessian_of_sum_of_squares() {
        let h = hessian(&p("mu1^2 + mu2^2 + mu3^2"));
        assert_eq!(h, Mat3::scalar_identity(Scalar::int(2)));
        assert!(h.is_symmetric());
    }

    #[test]
    fn hessian_of_triple_product() {
        let h = hessian(&p("mu1*mu2*mu3"));
        for i in 0..3 {
            assert!(h.get(i, i).is_zero());
        }
        assert_eq!(h.get(0, 1), &p("mu3"));
        assert_eq!(h.get(0, 2), &p("mu2"));
        assert_eq!(h.get(1, 2), &p("mu1"));
    }

    #[test]
    fn hessian_of_phi0() {
        let expected = Mat3::from_fn(|i, j| {
            if i == j {
                p("2")
            } else {
                // the remaining index k gives the entry mu_k / sqrt(3)
                let k = 3 - i - j;
                p(&format!("1/s*mu{}", k + 1))
            }
        });
        assert_eq!(hessian(&phi0()), expected);
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det3(&Mat3::<Scalar>::identity()), p("1"));
        assert_eq!(det3(&hessian(&phi0())), p("8 - 2/3*mu1^2 - 2/3*mu2^2 - 2/3*mu3^2 + 2/9*s*mu1*mu2*mu3"));
    }

    #[test]
    fn adjugate_examples() {
        let two = Mat3::scalar_identity(Scalar::int(2));
        assert_eq!(adj3(&two), Mat3::scalar_identity(Scalar::int(4)));
        let h = hessian(&phi0());
        let prod = h.mul(&adj3(&h));
        assert_eq!(prod, Mat3::identity().scale(&det3(&h)));
    }

    #[test]
    fn polarized_examples() {
        let i = Mat3::<Scalar>::identity();
        assert_eq!(polarized_det(&i, &i), p("3"));
        assert!(polarized_det(&hessian(&phi0()), &Mat3::zero()).is_zero());
        assert!(polarized_det(&hessian(&p("mu1^3")), &hessian(&p("mu2^3"))).is_zero());
        // matches trace(adj(N) M)
        let n = hessian(&phi0());
        let m = hessian(&p("mu1^2*mu2 - s*mu3^3"));
        assert_eq!(polarized_det(&n, &m), n.adj().mul(&m).trace());
    }
}
