//! Shared fixtures for the criterion benchmarks.

use toric_nk::radial::RadialState;
use toric_nk::{phi0, Poly3};

/// The cubic solution, parsed once per benchmark group.
pub fn cubic_solution() -> Poly3 {
    phi0()
}

/// The reference admissible start `(t, x, x') = (1, 5, 2)`.
pub fn reference_start() -> RadialState {
    RadialState::new(1.0, 5.0, 2.0)
}
