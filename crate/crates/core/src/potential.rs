//! The toric nearly Kähler equation and its companion quantities.
//!
//! For a potential `phi` on the multi-moment coordinates, with `E` the Euler
//! operator:
//!
//! * `eps^2   = 8/3 (phi - E phi)`
//! * `C(V,V)  = E(E phi) - E phi`
//! * residual = `det Hess phi - (8/3 - 11/3 E + E^2) phi`
//!
//! The pointwise identity `det C = eps^2 + C(V,V)` is the same equation.

use thiserror::Error;

use crate::algebra::{Coeff, Mat3, Poly3};

/// `8/3 (phi - E phi)`.
pub fn epsilon_squared<C: Coeff>(phi: &Poly3<C>) -> Poly3<C> {
    phi.sub(&phi.euler()).scale(&C::from_ratio(8, 3))
}

/// `(E^2 - E) phi`, the squared length of the collapsing field `V = mu`.
pub fn c_vv<C: Coeff>(phi: &Poly3<C>) -> Poly3<C> {
    let e = phi.euler();
    e.euler().sub(&e)
}

/// `(8/3 - 11/3 E + E^2) phi`.
pub fn star_operator<C: Coeff>(phi: &Poly3<C>) -> Poly3<C> {
    let e = phi.euler();
    let ee = e.euler();
    phi.scale(&C::from_ratio(8, 3)).sub(&e.scale(&C::from_ratio(11, 3))).add(&ee)
}

/// `det Hess phi - (8/3 - 11/3 E + E^2) phi`; zero exactly when `phi` solves the equation.
pub fn star_residual<C: Coeff>(phi: &Poly3<C>) -> Poly3<C> {
    Mat3::hessian(phi).det().sub(&star_operator(phi))
}

/// `det Hess phi - eps^2 - C(V,V)`.
pub fn su3_identity_check<C: Coeff>(phi: &Poly3<C>) -> Poly3<C> {
    Mat3::hessian(phi).det().sub(&epsilon_squared(phi)).sub(&c_vv(phi))
}

/// The collapsing direction `V` at `mu`; in these coordinates `V = mu`.
pub fn v_vector(mu: [f64; 3]) -> [f64; 3] {
    mu
}

/// A potential together with its derived polynomials.
#[derive(Clone, Debug)]
pub struct NkPotential<C: Coeff = crate::Scalar> {
    phi: Poly3<C>,
    eps2: Poly3<C>,
    cvv: Poly3<C>,
    hess: Mat3<C>,
    residual: Poly3<C>,
}

impl<C: Coeff> NkPotential<C> {
    pub fn new(phi: Poly3<C>) -> Self {
        let hess = Mat3::hessian(&phi);
        let residual = hess.det().sub(&star_operator(&phi));
        NkPotential { eps2: epsilon_squared(&phi), cvv: c_vv(&phi), hess, residual, phi }
    }

    pub fn phi(&self) -> &Poly3<C> {
        &self.phi
    }

    pub fn eps2(&self) -> &Poly3<C> {
        &self.eps2
    }

    pub fn cvv(&self) -> &Poly3<C> {
        &self.cvv
    }

    pub fn hessian(&self) -> &Mat3<C> {
        &self.hess
    }

    pub fn residual(&self) -> &Poly3<C> {
        &self.residual
    }

    pub fn is_solution(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("cone radius must be positive, got {0}")]
    NonPositiveRadius(f64),
}

/// A point of the cone `M x (0, inf)` in multi-moment coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConePoint {
    pub r: f64,
    pub mu: [f64; 3],
    pub eps: f64,
}

/// Multi-moment maps of the cone: `nu = r^3 mu / 3`, `eps_N = -r^4 eps / 4`.
pub fn cone_moments(p: &ConePoint) -> Result<([f64; 3], f64), ConeError> {
    if !(p.r > 0.0) {
        return Err(ConeError::NonPositiveRadius(p.r));
    }
    let r3 = p.r.powi(3) / 3.0;
    let nu = [r3 * p.mu[0], r3 * p.mu[1], r3 * p.mu[2]];
    Ok((nu, -p.r.powi(4) * p.eps / 4.0))
}
