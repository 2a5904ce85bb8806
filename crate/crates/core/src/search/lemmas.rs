//! Hesse cone detection and exact identities used in the degree 4/5 arguments.

use nalgebra::{DMatrix, Vector3};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Mat3, Monomial, Poly3, Scalar};
use crate::sampling;

/// Singular values below this fraction of the largest count as zero.
const RANK_TOL: f64 = 1e-8;
const GRADIENT_SAMPLES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial is not homogeneous")]
pub struct NotHomogeneous;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HesseCone {
    /// `det Hess f` is the zero polynomial.
    pub is_cone: bool,
    /// Orthonormal basis of the directions `f` does not depend on; empty unless a cone.
    pub kernel_directions: Vec<[f64; 3]>,
}

/// Decides exactly whether `det Hess f = 0`. For cones, the kernel directions
/// annihilate the span of sampled gradients.
pub fn hesse_cone_test(f: &Poly3) -> Result<HesseCone, NotHomogeneous> {
    if !f.is_homogeneous() {
        return Err(NotHomogeneous);
    }
    let is_cone = Mat3::hessian(f).det().is_zero();
    if !is_cone {
        return Ok(HesseCone { is_cone, kernel_directions: Vec::new() });
    }
    let grads = f.to_f64().gradient();
    let mut rng = sampling::rng(0x4e55e);
    let mut g = DMatrix::zeros(GRADIENT_SAMPLES, 3);
    for r in 0..GRADIENT_SAMPLES {
        let p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let row: Vec<f64> = grads.iter().map(|d| d.eval(p)).collect();
        let n = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        for c in 0..3 {
            g[(r, c)] = if n > 0.0 { row[c] / n } else { 0.0 };
        }
    }
    let svd = g.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let smax = svd.singular_values.max();
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let kernel_directions = order
        .into_iter()
        .filter(|&i| smax == 0.0 || svd.singular_values[i] <= RANK_TOL * smax)
        .map(|i| [v_t[(i, 0)], v_t[(i, 1)], v_t[(i, 2)]])
        .collect();
    Ok(HesseCone { is_cone, kernel_directions })
}

/// Max over sample points of `|f(p + s k) - f(p)|`, relative to `max |f(p)| + 1`.
pub fn kernel_substitution_residual(f: &Poly3, k: [f64; 3]) -> f64 {
    let f = f.to_f64();
    let mut rng = sampling::rng(17);
    let mut worst = 0.0f64;
    for _ in 0..16 {
        let p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let s: f64 = rng.random_range(-2.0..2.0);
        let q = [p[0] + s * k[0], p[1] + s * k[1], p[2] + s * k[2]];
        let (a, b) = (f.eval(p), f.eval(q));
        worst = worst.max((a - b).abs() / (a.abs() + 1.0));
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub quadratics_checked: usize,
    /// Failures of `det Hess(x B^2) = -2 x B^2 det Hess_yz(B^2)`.
    pub quadratic_identity_failures: usize,
    /// `det Hess_yz` of `yz`, `y^2`, `yz/sqrt 3`.
    pub example_yz_dets: [String; 3],
    pub polarized_identity_trace: bool,
    pub polarized_zero: bool,
    pub polarized_bilinear: bool,
    pub polarized_self: bool,
    pub expansion_checked: usize,
    pub expansion_failures: usize,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.quadratic_identity_failures == 0
            && self.expansion_failures == 0
            && self.polarized_identity_trace
            && self.polarized_zero
            && self.polarized_bilinear
            && self.polarized_self
    }
}

fn x() -> Poly3 {
    Poly3::var(0)
}

/// Random homogeneous polynomial of degree `d` in `y, z` with small rational coefficients.
fn random_yz<R: Rng>(rng: &mut R, d: u32) -> Poly3 {
    Poly3::from_terms((0..=d).map(|k| {
        let q = Scalar::ratio(rng.random_range(-9..=9), rng.random_range(1..=6));
        let r = if rng.random_bool(0.25) { &q * &Scalar::sqrt3() } else { q };
        (Monomial([0, k, d - k]), r)
    }))
}

/// The `(y, z)` Hessian embedded in a 3x3 matrix with `corner` at `(0, 0)`.
fn yz_hessian(p: &Poly3, corner: Scalar) -> Mat3 {
    let h = Mat3::hessian(p);
    Mat3::from_fn(|i, j| match (i, j) {
        (0, 0) => Poly3::constant(corner.clone()),
        (0, _) | (_, 0) => Poly3::zero(),
        _ => h.get(i, j).clone(),
    })
}

/// `det Hess_yz(B^2)` for a quadratic in `y, z`.
pub fn yz_det(b2: &Poly3) -> Poly3 {
    yz_hessian(b2, Scalar::from(1)).det()
}

/// `det Hess(x B^2) + 2 x B^2 det Hess_yz(B^2)`, which must vanish.
pub fn quadratic_identity_defect(b2: &Poly3) -> Poly3 {
    let lhs = Mat3::hessian(&x().mul(b2)).det();
    let rhs = x().mul(b2).mul(&yz_det(b2)).scale(&Scalar::from(-2));
    lhs.sub(&rhs)
}

/// Checks the exact identities behind the higher-degree nonexistence arguments.
pub fn lemma_identity_checks(quadratics: usize, seed: u64) -> LemmaReport {
    let mut rng = sampling::rng(seed);
    let quadratic_identity_failures =
        (0..quadratics).filter(|_| !quadratic_identity_defect(&random_yz(&mut rng, 2)).is_zero()).count();
    let p = |s: &str| crate::algebra::parse_poly(s).expect("literal");
    let example_yz_dets = ["mu2*mu3", "mu2^2", "1/s*mu2*mu3"].map(|s| {
        let b2 = p(s);
        debug_assert!(quadratic_identity_defect(&b2).is_zero());
        yz_det(&b2).to_string()
    });

    let id = Mat3::<Scalar>::identity();
    let h = |s: &str| Mat3::hessian(&p(s));
    let (n, m1, m2) = (h("mu1^3 - 2*mu1*mu2*mu3 + s*mu3^3"), h("mu1^2*mu2 + 1/3*mu2^3"), h("mu2*mu3^2 - mu1^3"));
    let polarized_identity_trace = id.polarized_det(&id) == p("3") && n.polarized_det(&m1) == n.adj().mul(&m1).trace();
    let polarized_zero = n.polarized_det(&Mat3::zero()).is_zero();
    let (a, b) = (p("2 - mu1"), p("s*mu3"));
    let polarized_bilinear = n.polarized_det(&m1.scale(&a).add(&m2.scale(&b)))
        == n.polarized_det(&m1).mul(&a).add(&n.polarized_det(&m2).mul(&b));
    let polarized_self = n.polarized_det(&n) == n.det().scale(&Scalar::from(3));

    // det(A + x B + x^2 C) on (y, z)-Hessians, expanded by polarization
    let expansion_checked = 50;
    let expansion_failures = (0..expansion_checked)
        .filter(|_| {
            let degs: [u32; 3] = std::array::from_fn(|_| rng.random_range(2..=5));
            let [a, b, c] = degs.map(|d| random_yz(&mut rng, d));
            let x2 = x().mul(&x());
            let combined = a.add(&x().mul(&b)).add(&x2.mul(&c));
            let lhs = yz_hessian(&combined, Scalar::from(1)).det();
            let one = |q: &Poly3| yz_hessian(q, Scalar::from(1));
            let zero = |q: &Poly3| yz_hessian(q, Scalar::default());
            let pol = |n: &Poly3, m: &Poly3| one(n).polarized_det(&zero(m));
            let rhs = one(&a)
                .det()
                .add(&x().mul(&pol(&a, &b)))
                .add(&x2.mul(&one(&b).det().add(&pol(&a, &c))))
                .add(&x2.mul(&x()).mul(&pol(&b, &c)))
                .add(&x2.mul(&x2).mul(&one(&c).det()));
            lhs != rhs
        })
        .count();

    LemmaReport {
        quadratics_checked: quadratics,
        quadratic_identity_failures,
        example_yz_dets,
        polarized_identity_trace,
        polarized_zero,
        polarized_bilinear,
        polarized_self,
        expansion_checked,
        expansion_failures,
    }
}

/// Random cone `g(l1, l2)` for linear forms `l1, l2` and binary form `g` of degree `d`.
pub fn random_cone<R: Rng>(rng: &mut R, d: u32) -> (Poly3, [Vector3<f64>; 2]) {
    let lin = |rng: &mut R| -> ([Scalar; 3], Poly3) {
        let c: [Scalar; 3] = std::array::from_fn(|_| Scalar::from(rng.random_range(-4i64..=4)));
        let p = Poly3::from_terms((0..3).map(|i| (Monomial::var(i), c[i].clone())));
        (c, p)
    };
    let (c1, l1) = lin(rng);
    let (c2, l2) = lin(rng);
    let mut g = Poly3::zero();
    for k in 0..=d {
        let q = Scalar::from(rng.random_range(-5i64..=5));
        g = g.add(&l1.pow(k).mul(&l2.pow(d - k)).scale(&q));
    }
    let v = |c: &[Scalar; 3]| Vector3::new(c[0].to_f64(), c[1].to_f64(), c[2].to_f64());
    (g, [v(&c1), v(&c2)])
}
