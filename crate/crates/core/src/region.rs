//! Pointwise geometry of a potential on the moment image.
//!
//! All point evaluations use floating-point copies of the exact polynomials;
//! the `*_exact` variants evaluate over `Q(sqrt 3)` instead.

use nalgebra::{DMatrix, Matrix3, SMatrix, Vector3};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Mat3, Poly3, Scalar};
use crate::potential::NkPotential;
use crate::sampling;

/// Threshold for leading principal minors of max-normalized matrices.
pub const PD_TOL: f64 = 1e-10;
/// `(1 - d_r) phi` must exceed this for a float point to count as interior.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Newton residual tolerance for singular-orbit refinement.
pub const ORBIT_NEWTON_TOL: f64 = 1e-10;
/// Points closer than this are the same orbit.
pub const ORBIT_DEDUP_DIST: f64 = 1e-4;

pub type Matrix6 = SMatrix<f64, 6, 6>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("Hessian is singular at {0:?}")]
    SingularHessian([f64; 3]),
    #[error("point {0:?} is outside the region where Hess(phi) is positive definite and eps^2 > 0")]
    OutsideU0Hat([f64; 3]),
    #[error("eps^2 at the origin is {0}, boundary search needs it positive")]
    NonPositiveAtOrigin(f64),
    #[error("no zero of eps^2 along direction {direction:?} within radius {max_radius}")]
    NoBoundaryCrossing { direction: [f64; 3], max_radius: f64 },
}

/// Antisymmetric matrix with entry `(j,k) = sum_i sign(ijk) mu_i`; its kernel is spanned by `mu`.
pub fn mu_hat(mu: [f64; 3]) -> Matrix3<f64> {
    Matrix3::new(0.0, mu[2], -mu[1], -mu[2], 0.0, mu[0], mu[1], -mu[0], 0.0)
}

fn mu_hat_exact(mu: &[Scalar; 3]) -> [[Scalar; 3]; 3] {
    let z = Scalar::default();
    [[z.clone(), mu[2].clone(), -&mu[1]], [-&mu[2], z.clone(), mu[0].clone()], [mu[1].clone(), -&mu[0], z]]
}

/// Sylvester's criterion on the max-normalized matrix.
pub fn is_positive_definite(m: &DMatrix<f64>) -> bool {
    let scale = m.amax();
    if scale == 0.0 || !scale.is_finite() {
        return false;
    }
    let m = m / scale;
    (1..=m.nrows()).all(|k| m.view((0, 0), (k, k)).clone_owned().determinant() > PD_TOL)
}

fn det_exact(mut a: Vec<Vec<Scalar>>) -> Scalar {
    let n = a.len();
    let mut det = Scalar::from(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !num_traits::Zero::is_zero(&a[r][col])) else {
            return Scalar::default();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = &det * &p;
        let inv = p.inverse().expect("nonzero pivot");
        for r in col + 1..n {
            let f = &a[r][col] * &inv;
            if num_traits::Zero::is_zero(&f) {
                continue;
            }
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] = &a[r][c] - &d;
            }
        }
    }
    det
}

fn is_positive_definite_exact(m: &[Vec<Scalar>]) -> bool {
    (1..=m.len()).all(|k| {
        let sub: Vec<Vec<Scalar>> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        det_exact(sub).is_positive()
    })
}

/// Eigenvalues of `j^2` next to the value predicted from the potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spectrum {
    /// Sorted descending: the kernel eigenvalue first.
    pub eigs: [f64; 3],
    /// `-C(V,V) / det C`, the expected double eigenvalue.
    pub predicted: f64,
}

impl Spectrum {
    pub fn mismatch(&self) -> f64 {
        let expect = [0.0, self.predicted, self.predicted];
        self.eigs.iter().zip(expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularOrbit {
    pub point: [f64; 3],
    /// Unit vector along `mu`, the collapsing circle's generator.
    pub collapse_direction: [f64; 3],
    pub eps2: f64,
    pub cvv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub direction: [f64; 3],
    pub radius: f64,
    pub point: [f64; 3],
    /// Whether `eps^2` strictly decreased along the sampled ray up to `radius`.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryOptions {
    pub directions: usize,
    /// Also probe the six coordinate half-axes.
    pub include_axes: bool,
    /// Also probe the directions of singular orbits, where the surface has nodes.
    pub include_singular: bool,
    pub max_radius: f64,
    pub march_step: f64,
    pub bisection_tol: f64,
    /// A local minimum of `eps^2` at most this large counts as a tangential zero.
    pub touch_tol: f64,
    pub monotone_samples: usize,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        BoundaryOptions {
            directions: 2000,
            include_axes: true,
            include_singular: true,
            max_radius: 10.0,
            march_step: 1e-2,
            bisection_tol: 1e-13,
            touch_tol: 1e-12,
            monotone_samples: 64,
        }
    }
}

/// Floating-point evaluator for a potential's derived quantities.
#[derive(Clone, Debug)]
pub struct Region {
    potential: NkPotential,
    phi: Poly3<f64>,
    eps2: Poly3<f64>,
    euler_eps2: Poly3<f64>,
    cvv: Poly3<f64>,
    det_hess: Poly3<f64>,
    hess: Mat3<f64>,
    grad_eps2: [Poly3<f64>; 3],
    grad_cvv: [Poly3<f64>; 3],
    hess_eps2: Mat3<f64>,
    hess_cvv: Mat3<f64>,
}

fn grad_at(g: &[Poly3<f64>; 3], p: [f64; 3]) -> Vector3<f64> {
    Vector3::new(g[0].eval(p), g[1].eval(p), g[2].eval(p))
}

fn scale3(u: [f64; 3], r: f64) -> [f64; 3] {
    [u[0] * r, u[1] * r, u[2] * r]
}

impl Region {
    pub fn new(phi: &Poly3) -> Self {
        let potential = NkPotential::new(phi.clone());
        let eps2 = potential.eps2().to_f64();
        let cvv = potential.cvv().to_f64();
        Region {
            phi: phi.to_f64(),
            euler_eps2: eps2.euler(),
            det_hess: potential.hessian().det().to_f64(),
            hess: Mat3::hessian(&phi.to_f64()),
            grad_eps2: eps2.gradient(),
            grad_cvv: cvv.gradient(),
            hess_eps2: Mat3::hessian(&eps2),
            hess_cvv: Mat3::hessian(&cvv),
            eps2,
            cvv,
            potential,
        }
    }

    pub fn potential(&self) -> &NkPotential {
        &self.potential
    }

    pub fn phi_at(&self, mu: [f64; 3]) -> f64 {
        self.phi.eval(mu)
    }

    pub fn eps2_at(&self, mu: [f64; 3]) -> f64 {
        self.eps2.eval(mu)
    }

    pub fn cvv_at(&self, mu: [f64; 3]) -> f64 {
        self.cvv.eval(mu)
    }

    /// `det C` from the determinant polynomial.
    pub fn det_c_at(&self, mu: [f64; 3]) -> f64 {
        self.det_hess.eval(mu)
    }

    pub fn hessian_at(&self, mu: [f64; 3]) -> Matrix3<f64> {
        self.hess.eval(mu)
    }

    /// The 6x6 metric matrix `[[C, -mu_hat], [mu_hat, C]]`.
    pub fn metric_d(&self, mu: [f64; 3]) -> Matrix6 {
        let c = self.hessian_at(mu);
        let m = mu_hat(mu);
        let mut d = Matrix6::zeros();
        d.fixed_view_mut::<3, 3>(0, 0).copy_from(&c);
        d.fixed_view_mut::<3, 3>(3, 3).copy_from(&c);
        d.fixed_view_mut::<3, 3>(0, 3).copy_from(&(-m));
        d.fixed_view_mut::<3, 3>(3, 0).copy_from(&m);
        d
    }

    /// `mu` in U0: `eps^2 > 0` and `D` positive definite.
    pub fn in_u0(&self, mu: [f64; 3]) -> bool {
        self.eps2_at(mu) > POSITIVITY_TOL
            && is_positive_definite(&DMatrix::from_iterator(6, 6, self.metric_d(mu).iter().copied()))
    }

    /// `mu` in U0-hat: `eps^2 > 0` and `Hess phi` positive definite.
    pub fn in_u0_hat(&self, mu: [f64; 3]) -> bool {
        self.eps2_at(mu) > POSITIVITY_TOL
            && is_positive_definite(&DMatrix::from_iterator(3, 3, self.hessian_at(mu).iter().copied()))
    }

    fn exact_c(&self, mu: &[Scalar; 3]) -> [[Scalar; 3]; 3] {
        let h = self.potential.hessian();
        std::array::from_fn(|i| std::array::from_fn(|j| h.get(i, j).eval_exact(mu)))
    }

    pub fn in_u0_exact(&self, mu: &[Scalar; 3]) -> bool {
        if !self.potential.eps2().eval_exact(mu).is_positive() {
            return false;
        }
        let c = self.exact_c(mu);
        let m = mu_hat_exact(mu);
        let d: Vec<Vec<Scalar>> = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| match (i < 3, j < 3) {
                        (true, true) => c[i][j].clone(),
                        (false, false) => c[i - 3][j - 3].clone(),
                        (true, false) => -&m[i][j - 3],
                        (false, true) => m[i - 3][j].clone(),
                    })
                    .collect()
            })
            .collect();
        is_positive_definite_exact(&d)
    }

    pub fn in_u0_hat_exact(&self, mu: &[Scalar; 3]) -> bool {
        if !self.potential.eps2().eval_exact(mu).is_positive() {
            return false;
        }
        let c = self.exact_c(mu);
        is_positive_definite_exact(&c.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    /// `j = C^{-1} mu_hat`.
    pub fn j_operator(&self, mu: [f64; 3]) -> Result<Matrix3<f64>, RegionError> {
        let c = self.hessian_at(mu);
        let scale = c.amax().max(1.0);
        if c.determinant().abs() <= 1e-14 * scale.powi(3) {
            return Err(RegionError::SingularHessian(mu));
        }
        let inv = c.try_inverse().ok_or(RegionError::SingularHessian(mu))?;
        Ok(inv * mu_hat(mu))
    }

    /// Eigenvalues of `j^2` compared with `-C(V,V)/det C`.
    ///
    /// With `C = S^2`, `j^2` is similar to the symmetric `(S^-1 mu_hat S^-1)^2`,
    /// which is diagonalized by a symmetric eigensolver.
    pub fn j_squared_spectrum(&self, mu: [f64; 3]) -> Result<Spectrum, RegionError> {
        if !self.in_u0_hat(mu) {
            return Err(RegionError::OutsideU0Hat(mu));
        }
        let c = self.hessian_at(mu);
        let eig = c.symmetric_eigen();
        let inv_sqrt = Matrix3::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
        let s_inv = eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
        let a = s_inv * mu_hat(mu) * s_inv;
        let a2 = a * a;
        let a2 = (a2 + a2.transpose()) * 0.5;
        let mut eigs: Vec<f64> = a2.symmetric_eigenvalues().iter().copied().collect();
        eigs.sort_by(|x, y| y.total_cmp(x));
        let predicted = -self.cvv_at(mu) / self.det_c_at(mu);
        Ok(Spectrum { eigs: [eigs[0], eigs[1], eigs[2]], predicted })
    }

    /// Residuals of `{eps^2 = 0, C(V,V) = 0, grad eps^2 x grad C(V,V) = 0}`.
    ///
    /// `C(V,V) >= 0` on the closed image and vanishes on its boundary only at
    /// singular orbits, so those points are constrained minima of `C(V,V)` on
    /// the surface `eps^2 = 0`; the cross product is that stationarity
    /// condition. It makes the nodes regular roots of the augmented system.
    fn orbit_system(&self, p: [f64; 3]) -> (SMatrix<f64, 5, 1>, SMatrix<f64, 5, 3>) {
        let ge = grad_at(&self.grad_eps2, p);
        let gc = grad_at(&self.grad_cvv, p);
        let he = self.hess_eps2.eval(p);
        let hc = self.hess_cvv.eval(p);
        let cross = ge.cross(&gc);
        let g =
            SMatrix::<f64, 5, 1>::from_column_slice(&[self.eps2_at(p), self.cvv_at(p), cross[0], cross[1], cross[2]]);
        let mut jac = SMatrix::<f64, 5, 3>::zeros();
        for k in 0..3 {
            jac[(0, k)] = ge[k];
            jac[(1, k)] = gc[k];
            let dc = he.column(k).into_owned().cross(&gc) + ge.cross(&hc.column(k).into_owned());
            for r in 0..3 {
                jac[(2 + r, k)] = dc[r];
            }
        }
        (g, jac)
    }

    fn refine_orbit(&self, start: [f64; 3]) -> Option<[f64; 3]> {
        let mut p = Vector3::from(start);
        let norm = |p: &Vector3<f64>| self.orbit_system([p[0], p[1], p[2]]).0.amax();
        let mut res = norm(&p);
        for _ in 0..100 {
            if res < ORBIT_NEWTON_TOL * 1e-3 {
                break;
            }
            let (g, jac) = self.orbit_system([p[0], p[1], p[2]]);
            let step = jac.svd(true, true).solve(&(-g), 1e-14).ok()?;
            let mut lambda = 1.0;
            loop {
                let cand = p + step * lambda;
                let r = norm(&cand);
                if r < res {
                    p = cand;
                    res = r;
                    break;
                }
                lambda *= 0.5;
                if lambda < 1e-6 {
                    return (res < ORBIT_NEWTON_TOL).then_some([p[0], p[1], p[2]]);
                }
            }
        }
        (res < ORBIT_NEWTON_TOL).then_some([p[0], p[1], p[2]])
    }

    /// Newton search for singular orbits from `seeds` quasi-random starts in the ball.
    pub fn find_singular_orbits(&self, radius: f64, seeds: usize) -> Vec<SingularOrbit> {
        let mut starts = Vec::with_capacity(seeds);
        let mut i = 1u64;
        while starts.len() < seeds {
            let h = sampling::halton3(i);
            i += 1;
            let p = [radius * (2.0 * h[0] - 1.0), radius * (2.0 * h[1] - 1.0), radius * (2.0 * h[2] - 1.0)];
            if p.iter().map(|x| x * x).sum::<f64>() <= radius * radius {
                starts.push(p);
            }
        }
        let mut found: Vec<[f64; 3]> = Vec::new();
        for s in starts {
            let Some(p) = self.refine_orbit(s) else { continue };
            if p.iter().map(|x| x * x).sum::<f64>().sqrt() > radius {
                continue;
            }
            let dup = found.iter().any(|q| {
                ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt() < ORBIT_DEDUP_DIST
            });
            if !dup {
                found.push(p);
            }
        }
        found.sort_by(|a, b| {
            a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        found
            .into_iter()
            .map(|p| {
                let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                let dir = if n > 0.0 { [p[0] / n, p[1] / n, p[2] / n] } else { [0.0; 3] };
                SingularOrbit { point: p, collapse_direction: dir, eps2: self.eps2_at(p), cvv: self.cvv_at(p) }
            })
            .collect()
    }

    /// Smallest `r > 0` with `eps^2(r u) = 0`, for a unit vector `u`.
    ///
    /// Marches outward and bisects the first sign change. A local minimum of
    /// `eps^2` that touches zero (a node of the boundary surface) is located by
    /// bisecting the sign change of the radial derivative instead.
    pub fn boundary_ray(&self, u: [f64; 3], opts: &BoundaryOptions) -> Result<f64, RegionError> {
        let e0 = self.eps2_at([0.0; 3]);
        if !(e0 > 0.0) {
            return Err(RegionError::NonPositiveAtOrigin(e0));
        }
        let f = |r: f64| self.eps2_at(scale3(u, r));
        // r * d/dr eps^2(r u) = (E eps^2)(r u)
        let df = |r: f64| self.euler_eps2.eval(scale3(u, r));
        let bisect = |mut lo: f64, mut hi: f64, inside: &dyn Fn(f64) -> bool| {
            while hi - lo > opts.bisection_tol * hi.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if inside(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        // Rounding hides the sign of eps^2 within ~sqrt(eps) of a double zero,
        // so a root with vanishing slope is moved to the nearby minimum.
        let slope_tol = 1e-6 * e0.max(1.0);
        let polish = |lo: f64, root: f64| -> f64 {
            if df(root).abs() > slope_tol || df(lo) >= 0.0 {
                return root;
            }
            let mut hi = root;
            let mut dh = 1e-9 * root.max(1.0);
            while df(hi) < 0.0 {
                hi = root + dh;
                dh *= 2.0;
                if dh > opts.march_step {
                    return root;
                }
            }
            let rmin = bisect(lo, hi, &|s| df(s) < 0.0);
            if f(rmin).abs() <= opts.touch_tol {
                rmin
            } else {
                root
            }
        };
        let mut r_prev: f64 = 0.0;
        let mut d_prev = -1.0;
        let mut r = opts.march_step;
        while r <= opts.max_radius + opts.march_step {
            let v = f(r);
            let d = df(r);
            if v <= 0.0 {
                if d < 0.0 {
                    return Ok(polish(r_prev.max(opts.march_step * 0.5), bisect(r_prev, r, &|s| f(s) > 0.0)));
                }
                // eps^2 turned around inside the bracket: a touching zero unless
                // the minimum is clearly negative
                let rmin = bisect(r_prev, r, &|s| df(s) < 0.0);
                if f(rmin) >= -opts.touch_tol {
                    return Ok(rmin);
                }
                return Ok(bisect(r_prev, rmin, &|s| f(s) > 0.0));
            }
            if d_prev < 0.0 && d >= 0.0 {
                let rmin = bisect(r_prev, r, &|s| df(s) < 0.0);
                if f(rmin) <= opts.touch_tol {
                    return Ok(rmin);
                }
            }
            r_prev = r;
            d_prev = d;
            r += opts.march_step;
        }
        Err(RegionError::NoBoundaryCrossing { direction: u, max_radius: opts.max_radius })
    }

    /// `eps^2` strictly decreases on `samples` equally spaced points of `[0, r]` along `u`.
    pub fn ray_is_monotone(&self, u: [f64; 3], r: f64, samples: usize) -> bool {
        let mut prev = self.eps2_at([0.0; 3]);
        (1..=samples).all(|k| {
            let v = self.eps2_at(scale3(u, r * k as f64 / samples as f64));
            let ok = v < prev;
            prev = v;
            ok
        })
    }

    pub fn boundary_surface(&self, opts: &BoundaryOptions) -> Result<Vec<BoundaryPoint>, RegionError> {
        let mut dirs = sampling::fibonacci_sphere(opts.directions);
        if opts.include_axes {
            for i in 0..3 {
                for s in [1.0, -1.0] {
                    let mut e = [0.0; 3];
                    e[i] = s;
                    dirs.push(e);
                }
            }
        }
        if opts.include_singular {
            for o in self.find_singular_orbits(opts.max_radius, 256) {
                if o.collapse_direction != [0.0; 3] {
                    dirs.push(o.collapse_direction);
                }
            }
        }
        dirs.iter()
            .map(|&u| {
                let r = self.boundary_ray(u, opts)?;
                Ok(BoundaryPoint {
                    direction: u,
                    radius: r,
                    point: scale3(u, r),
                    monotone: self.ray_is_monotone(u, r, opts.monotone_samples),
                })
            })
            .collect()
    }
}

pub fn in_u0(phi: &Poly3, point: [f64; 3]) -> bool {
    Region::new(phi).in_u0(point)
}

pub fn in_u0_hat(phi: &Poly3, point: [f64; 3]) -> bool {
    Region::new(phi).in_u0_hat(point)
}

pub fn j_operator(phi: &Poly3, point: [f64; 3]) -> Result<Matrix3<f64>, RegionError> {
    Region::new(phi).j_operator(point)
}

pub fn j_squared_spectrum_check(phi: &Poly3, point: [f64; 3]) -> Result<Spectrum, RegionError> {
    Region::new(phi).j_squared_spectrum(point)
}

pub fn find_singular_orbits(phi: &Poly3, radius: f64, seeds: usize) -> Vec<SingularOrbit> {
    Region::new(phi).find_singular_orbits(radius, seeds)
}

pub fn boundary_surface(phi: &Poly3, directions: usize) -> Result<Vec<BoundaryPoint>, RegionError> {
    Region::new(phi).boundary_surface(&BoundaryOptions { directions, ..Default::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, phi0};

    const R3: f64 = 1.7320508075688772;

    #[test]
    fn mu_hat_kernel() {
        let mu = [0.3, -1.2, 2.5];
        let m = mu_hat(mu);
        assert_eq!(m.transpose(), -m);
        assert!((m * Vector3::from(mu)).amax() < 1e-15);
    }

    #[test]
    fn metric_is_symmetric() {
        let reg = Region::new(&phi0());
        let d = reg.metric_d([0.4, -0.7, 0.2]);
        assert_eq!(d, d.transpose());
    }

    #[test]
    fn membership_examples() {
        let reg = Region::new(&phi0());
        assert!(reg.in_u0([0.0; 3]) && reg.in_u0_hat([0.0; 3]));
        assert_eq!(reg.metric_d([0.0; 3]), Matrix6::identity() * 2.0);
        assert!(!reg.in_u0([2.0, 0.0, 0.0]) && !reg.in_u0_hat([2.0, 0.0, 0.0]));
        let z = Scalar::default();
        let edge = [Scalar::sqrt3(), z.clone(), z.clone()];
        assert!(!reg.in_u0_exact(&edge) && !reg.in_u0_hat_exact(&edge));
        assert!(reg.in_u0_exact(&[z.clone(), z.clone(), z]));
        assert!(!reg.in_u0([R3, 0.0, 0.0]) && !reg.in_u0_hat([R3, 0.0, 0.0]));
    }

    #[test]
    fn exact_determinant_matches_float() {
        let m: Vec<Vec<Scalar>> = vec![
            vec![Scalar::int(2), Scalar::int(1), Scalar::int(0)],
            vec![Scalar::int(1), Scalar::int(3), Scalar::sqrt3()],
            vec![Scalar::int(0), Scalar::sqrt3(), Scalar::int(5)],
        ];
        // 2(15 - 3) - 1(5) = 19
        assert_eq!(det_exact(m), Scalar::int(19));
    }

    #[test]
    fn j_kernel_and_origin() {
        let reg = Region::new(&phi0());
        assert_eq!(reg.j_operator([0.0; 3]).unwrap(), Matrix3::zeros());
        for mu in [[1.0, 0.0, 0.0], [0.3, 0.4, -0.5], [-0.9, 0.1, 0.2]] {
            let j = reg.j_operator(mu).unwrap();
            assert!((j * Vector3::from(mu)).amax() < 1e-14);
        }
    }

    #[test]
    fn j_singular_hessian_is_an_error() {
        // Hess of mu1^3 vanishes at the origin
        let reg = Region::new(&parse_poly("mu1^3").unwrap());
        assert!(matches!(reg.j_operator([0.0; 3]), Err(RegionError::SingularHessian(_))));
    }

    #[test]
    fn spectrum_on_axis() {
        let reg = Region::new(&phi0());
        let s = reg.j_squared_spectrum([1.0, 0.0, 0.0]).unwrap();
        assert!((s.predicted + 3.0 / 11.0).abs() < 1e-12);
        assert!(s.mismatch() < 1e-12);
        let s0 = reg.j_squared_spectrum([0.0; 3]).unwrap();
        assert_eq!(s0.predicted, 0.0);
        assert!(s0.eigs.iter().all(|e| e.abs() < 1e-15));
        assert!(matches!(reg.j_squared_spectrum([2.0, 0.0, 0.0]), Err(RegionError::OutsideU0Hat(_))));
    }

    #[test]
    fn singular_orbits_of_non_solution_are_empty() {
        let orbits = find_singular_orbits(&parse_poly("3 + mu1^2 + mu2^2 + mu3^2").unwrap(), 4.0, 64);
        assert!(orbits.is_empty());
    }

    #[test]
    fn boundary_rays() {
        let reg = Region::new(&phi0());
        let o = BoundaryOptions::default();
        assert!((reg.boundary_ray([1.0, 0.0, 0.0], &o).unwrap() - R3).abs() < 1e-12);
        // along (1,1,1): 27 - 9 r^2 - 2 r^3 = 0 has the root 3/2
        let d = 1.0 / 3f64.sqrt();
        assert!((reg.boundary_ray([d, d, d], &o).unwrap() - 1.5).abs() < 1e-12);
        // toward a node eps^2 has a double zero at r = 3
        assert!((reg.boundary_ray([-d, -d, -d], &o).unwrap() - 3.0).abs() < 1e-9);
        let sphere = Region::new(&parse_poly("3 + mu1^2 + mu2^2 + mu3^2").unwrap());
        for u in sampling::fibonacci_sphere(20) {
            assert!((sphere.boundary_ray(u, &o).unwrap() - R3).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_errors() {
        let o = BoundaryOptions::default();
        let neg = Region::new(&parse_poly("-1 + mu1^2").unwrap());
        assert!(matches!(neg.boundary_ray([1.0, 0.0, 0.0], &o), Err(RegionError::NonPositiveAtOrigin(_))));
        // eps^2 = 8/3 (3 + mu1^2) never vanishes
        let open = Region::new(&parse_poly("3 - mu1^2").unwrap());
        assert!(matches!(open.boundary_ray([1.0, 0.0, 0.0], &o), Err(RegionError::NoBoundaryCrossing { .. })));
    }
}
