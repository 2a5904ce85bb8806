//! Factoring a ternary cubic into real linear forms.
//!
//! A cubic whose Hessian determinant is a nonzero multiple of itself and that
//! meets two generic lines in three real points each is a triangle of lines.
//! Each line through one intersection point of the first probe line and one of
//! the second has normal `p x q`; the pairing with the best fit is kept.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Mat3, Monomial, Poly3};

/// Relative residual allowed in the proportionality and factor fits.
const FIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cubic is not a product of three independent real linear forms: {0}")]
pub struct NotFactorable(pub String);

/// `phi^3(mu) = lambda * prod_i (row_i . mu)` with unit rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalCubic {
    pub lambda: f64,
    /// Rows are the unit linear forms; `nu = T mu` turns the cubic into `lambda nu1 nu2 nu3`.
    pub transform: [[f64; 3]; 3],
    /// `k` with `det Hess phi^3 = k phi^3`; equals `2 lambda^2 det(T)^2`.
    pub hessian_ratio: f64,
}

fn coeff_vec(p: &Poly3<f64>) -> Vec<f64> {
    Monomial::of_degree(3).iter().map(|m| p.coeff(m)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Best `k` with `a ~ k b` and the relative residual of that fit.
fn proportional(a: &[f64], b: &[f64]) -> (f64, f64) {
    let bb = dot(b, b);
    if bb == 0.0 {
        return (0.0, f64::INFINITY);
    }
    let k = dot(a, b) / bb;
    let r: f64 = a.iter().zip(b).map(|(x, y)| (x - k * y).powi(2)).sum::<f64>().sqrt();
    (k, r / dot(a, a).sqrt().max(bb.sqrt() * k.abs()).max(f64::MIN_POSITIVE))
}

fn product_of_forms(rows: &[Vector3<f64>; 3]) -> Poly3<f64> {
    let lin = |v: &Vector3<f64>| Poly3::from_terms((0..3).map(|i| (Monomial::var(i), v[i])));
    lin(&rows[0]).mul(&lin(&rows[1])).mul(&lin(&rows[2]))
}

/// Real roots of `c3 s^3 + c2 s^2 + c1 s + c0`, polished by Newton.
fn real_cubic_roots(c: [f64; 4]) -> Vec<f64> {
    let [c0, c1, c2, c3] = c;
    let comp = Matrix3::new(0.0, 0.0, -c0 / c3, 1.0, 0.0, -c1 / c3, 0.0, 1.0, -c2 / c3);
    let f = |s: f64| ((c3 * s + c2) * s + c1) * s + c0;
    let df = |s: f64| (3.0 * c3 * s + 2.0 * c2) * s + c1;
    comp.complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-6 * (1.0 + z.re.abs()))
        .map(|z| {
            let mut s = z.re;
            for _ in 0..8 {
                let d = df(s);
                if d == 0.0 {
                    break;
                }
                s -= f(s) / d;
            }
            s
        })
        .collect()
}

/// Points where the cubic meets the projective line through `a` and `b`.
fn line_points(p: &Poly3<f64>, a: Vector3<f64>, b: Vector3<f64>) -> Vec<Vector3<f64>> {
    let at = |s: f64| p.eval((a + b * s).into());
    // coefficients from exact interpolation at four nodes
    let (f0, f1, fm, f2) = (at(0.0), at(1.0), at(-1.0), at(2.0));
    let c0 = f0;
    let c2 = (f1 + fm) / 2.0 - f0;
    let odd = (f1 - fm) / 2.0; // c1 + c3
                               // f2 = c0 + 2c1 + 4c2 + 8c3
    let c3 = ((f2 - c0 - 4.0 * c2) / 2.0 - odd) / 3.0;
    let c1 = odd - c3;
    real_cubic_roots([c0, c1, c2, c3]).into_iter().map(|s| a + b * s).collect()
}

fn normalize_row(v: Vector3<f64>) -> Vector3<f64> {
    let v = v.normalize();
    let big = (0..3).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs())).unwrap();
    if v[big] < 0.0 {
        -v
    } else {
        v
    }
}

/// Canonical form of a cubic given by its 10 coefficients in graded-lex order.
pub fn canonicalize_cubic(c: &[f64]) -> Result<CanonicalCubic, NotFactorable> {
    let mons = Monomial::of_degree(3);
    if c.len() != mons.len() {
        return Err(NotFactorable(format!("expected 10 coefficients, got {}", c.len())));
    }
    canonicalize_cubic_poly(&Poly3::from_terms(mons.into_iter().zip(c.iter().copied())))
}

pub fn canonicalize_cubic_poly(p: &Poly3<f64>) -> Result<CanonicalCubic, NotFactorable> {
    if p.is_zero() || !p.is_homogeneous() || p.degree() != 3 {
        return Err(NotFactorable("not a nonzero homogeneous cubic".into()));
    }
    let cv = coeff_vec(p);
    let (ratio, rel) = proportional(&coeff_vec(&Mat3::hessian(p).det()), &cv);
    if rel > FIT_TOL || ratio.abs() < FIT_TOL {
        return Err(NotFactorable("Hessian determinant is not a nonzero multiple of the cubic".into()));
    }
    // two fixed generic probe lines
    let la = line_points(p, Vector3::new(0.31, -0.57, 0.76), Vector3::new(0.83, 0.41, -0.22));
    let lb = line_points(p, Vector3::new(-0.64, 0.29, 0.48), Vector3::new(0.17, 0.92, 0.35));
    if la.len() != 3 || lb.len() != 3 {
        return Err(NotFactorable("curve has non-real components".into()));
    }
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut best: Option<(f64, [Vector3<f64>; 3], f64)> = None;
    for perm in PERMS {
        let rows: [Vector3<f64>; 3] = std::array::from_fn(|i| la[i].cross(&lb[perm[i]]));
        if rows.iter().any(|r| r.norm() < 1e-12) {
            continue;
        }
        let rows = rows.map(normalize_row);
        let (k, rel) = proportional(&cv, &coeff_vec(&product_of_forms(&rows)));
        if best.as_ref().is_none_or(|b| rel < b.0) {
            best = Some((rel, rows, k));
        }
    }
    let Some((rel, mut rows, mut lambda)) = best else {
        return Err(NotFactorable("degenerate probe intersections".into()));
    };
    if rel > FIT_TOL {
        return Err(NotFactorable(format!("linear factor fit residual {rel:.3e}")));
    }
    rows.sort_by(|a, b| {
        let key = |v: &Vector3<f64>| (0..3).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs())).unwrap();
        key(a).cmp(&key(b)).then_with(|| {
            a.iter().zip(b.iter()).map(|(x, y)| y.total_cmp(x)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    if lambda < 0.0 {
        lambda = -lambda;
        rows[2] = -rows[2];
    }
    let t = Matrix3::from_rows(&[rows[0].transpose(), rows[1].transpose(), rows[2].transpose()]);
    if t.determinant().abs() < 1e-6 {
        return Err(NotFactorable("linear forms are dependent".into()));
    }
    Ok(CanonicalCubic {
        lambda,
        transform: std::array::from_fn(|i| std::array::from_fn(|j| t[(i, j)])),
        hessian_ratio: ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::phi0;

    const L: f64 = 0.5773502691896258; // 1/sqrt 3

    #[test]
    fn phi0_cubic_is_identity() {
        let c = canonicalize_cubic_poly(&phi0().homogeneous_part(3).to_f64()).unwrap();
        assert!((c.lambda - L).abs() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((c.transform[i][j] - e).abs() < 1e-12, "{:?}", c.transform);
            }
        }
        assert!((c.hessian_ratio - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rotated_phi0_cubic() {
        // (mu1+mu2)/sqrt2 * (mu1-mu2)/sqrt2 * mu3 / sqrt3 keeps |mu|^2 fixed
        let p = crate::algebra::parse_poly("1/(2*s)*mu1^2*mu3 - 1/(2*s)*mu2^2*mu3").unwrap();
        let c = canonicalize_cubic_poly(&p.to_f64()).unwrap();
        assert!((c.lambda * c.lambda - 1.0 / 3.0).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((c.transform[0][0].abs() - h).abs() < 1e-12);
    }

    #[test]
    fn fermat_cubic_is_not_factorable() {
        let p = crate::algebra::parse_poly("mu1^3 + mu2^3 + mu3^3").unwrap();
        assert!(canonicalize_cubic_poly(&p.to_f64()).is_err());
    }

    #[test]
    fn line_times_conic_is_not_factorable() {
        // mu1 (mu2^2 + mu3^2): complex lines
        let p = crate::algebra::parse_poly("mu1*mu2^2 + mu1*mu3^2").unwrap();
        assert!(canonicalize_cubic_poly(&p.to_f64()).is_err());
    }

    #[test]
    fn negative_product_flips_a_row() {
        let p = crate::algebra::parse_poly("-2*mu1*mu2*mu3").unwrap();
        let c = canonicalize_cubic_poly(&p.to_f64()).unwrap();
        assert!((c.lambda - 2.0).abs() < 1e-12);
        let back = product_of_forms(&c.transform.map(Vector3::from)).scale(&c.lambda);
        assert!(back.sub(&p.to_f64()).max_abs_coeff() < 1e-12);
    }

    #[test]
    fn wrong_length() {
        assert!(canonicalize_cubic(&[1.0; 9]).is_err());
    }
}
