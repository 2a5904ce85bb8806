//! Symbolic and numeric tools for the toric nearly Kähler equation
//!
//! ```text
//! det Hess(phi) = (8/3 - 11/3 d_r + d_r^2) phi
//! ```
//!
//! where `d_r` is the Euler vector field in the multi-moment coordinates
//! `mu = (mu1, mu2, mu3)`.
//!
//! * [`algebra`]: exact polynomials over `Q(sqrt 3)`, Hessians, determinants.
//! * [`potential`]: the equation's residual, `eps^2`, `C(V,V)` and cone moments.
//! * [`region`]: pointwise metric geometry, singular orbits, boundary surface.
//! * [`radial`]: the radial ODE reduction and its integrator.
//! * [`search`]: polynomial ansatz systems, Newton search, Hesse cones.

pub mod algebra;
pub mod export;
pub mod potential;
pub mod radial;
pub mod region;
pub mod sampling;
pub mod search;

pub use algebra::{parse_poly, phi0, Mat3, Monomial, Poly3, Scalar};
pub use potential::NkPotential;
