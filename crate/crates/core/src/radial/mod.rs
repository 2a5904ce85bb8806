//! Radial reduction: potentials depending only on `t = |mu|^2 / 2`.
//!
//! Writing the potential as `x(t)`, the equation becomes
//! `2t x'' = eps^2 / (x'^2 - 2t) - x'` with `eps^2 = 8/3 (x - 2t x')`,
//! subject to `x > 2t x' > 2t sqrt(2t)`. Along solutions
//! `(eps^2)' = -8/3 eps^2 / (x'^2 - 2t)`, so `eps^2` decreases and the forward
//! solution ends where it reaches zero.

mod integrator;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use integrator::{integrate, integrate_with, Direction, IntegrateOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadialError {
    #[error("t = {0} is not positive; t = 0 is the singular point of the radial equation")]
    SingularPoint(f64),
    #[error("x'^2 - 2t = {0} is not positive at t = {1}; the equation degenerates")]
    Degenerate(f64, f64),
    #[error("start state {0:?} violates x > 2t x' > 2t sqrt(2t)")]
    Inadmissible(RadialState),
    #[error("step size fell below {h_min} at t = {t} with eps^2 = {eps2}")]
    StepUnderflow { t: f64, eps2: f64, h_min: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialState {
    pub t: f64,
    pub x: f64,
    pub xp: f64,
}

impl RadialState {
    pub fn new(t: f64, x: f64, xp: f64) -> Self {
        RadialState { t, x, xp }
    }

    /// `8/3 (x - 2t x')`.
    pub fn eps2(&self) -> f64 {
        8.0 / 3.0 * (self.x - 2.0 * self.t * self.xp)
    }

    /// `x'^2 - 2t`, which must stay positive for the equation to be regular.
    pub fn u(&self) -> f64 {
        self.xp * self.xp - 2.0 * self.t
    }

    /// `x > 2t x' > 2t sqrt(2t)` with `t > 0`.
    pub fn is_admissible(&self) -> bool {
        self.t > 0.0 && self.eps2() > 0.0 && self.xp > (2.0 * self.t).sqrt()
    }
}

/// `x''` from the radial equation.
pub fn rhs(t: f64, x: f64, xp: f64) -> Result<f64, RadialError> {
    if !(t > 0.0) {
        return Err(RadialError::SingularPoint(t));
    }
    let u = xp * xp - 2.0 * t;
    if !(u > 0.0) {
        return Err(RadialError::Degenerate(u, t));
    }
    // (eps^2/u - x')/(2t) over a common denominator, which keeps rational inputs exact
    Ok((8.0 * (x - 2.0 * t * xp) - 3.0 * xp * u) / (6.0 * t * u))
}

/// The residual `3(x'^2 - 2t)(x' + 2t x'') - 8(x - 2t x')` of the second-order form.
pub fn ode_residual(t: f64, x: f64, xp: f64, xpp: f64) -> f64 {
    3.0 * (xp * xp - 2.0 * t) * (xp + 2.0 * t * xpp) - 8.0 * (x - 2.0 * t * xp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Termination {
    /// Forward run reached `eps^2 = 0`.
    Eps2Zero,
    /// Backward run reached the floor near `t = 0`.
    TZeroSingularity,
    MaxSteps,
    ConstraintViolation,
    /// Reached the requested stop time.
    StopTime,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Eps2Zero => "EPS2_ZERO",
            Termination::TZeroSingularity => "T_ZERO_SINGULARITY",
            Termination::MaxSteps => "MAX_STEPS",
            Termination::ConstraintViolation => "CONSTRAINT_VIOLATION",
            Termination::StopTime => "STOP_TIME",
        }
    }
}

/// An integrated solution segment.
///
/// `states` holds the accepted steps in increasing `t`, without the steps
/// taken while closing in on the `eps^2 = 0` event; the located endpoint
/// is `end`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub states: Vec<RadialState>,
    pub end: RadialState,
    pub t_minus: f64,
    pub t_plus: f64,
    pub termination: Termination,
}

impl Trajectory {
    /// A trajectory made of given states, for checks on external data.
    pub fn from_states(states: Vec<RadialState>, termination: Termination) -> Self {
        let end = *states.last().expect("nonempty");
        Trajectory { t_minus: states[0].t, t_plus: end.t, end, states, termination }
    }

    /// `states` together with `end`, in increasing `t`.
    pub fn all_states(&self) -> Vec<RadialState> {
        let mut all = self.states.clone();
        if !all.iter().any(|s| s == &self.end) {
            if all.first().is_some_and(|s| self.end.t < s.t) {
                all.insert(0, self.end);
            } else {
                all.push(self.end);
            }
        }
        all
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub checked: usize,
    pub upper_ok: bool,
    pub lower_ok: bool,
    /// `min (x0 sqrt(t/t0) - x)` over the checked states.
    pub upper_slack: f64,
    /// `min (x - x0 - ((2t)^{3/2} - (2t0)^{3/2})/3)` over the checked states.
    pub lower_slack: f64,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.upper_ok && self.lower_ok
    }
}

/// Growth bounds relative to the first state, checked at every later state
/// including the endpoint.
pub fn check_bounds(traj: &Trajectory) -> BoundsReport {
    check_bounds_states(&traj.all_states())
}

pub fn check_bounds_states(states: &[RadialState]) -> BoundsReport {
    let mut rep = BoundsReport {
        checked: 0,
        upper_ok: true,
        lower_ok: true,
        upper_slack: f64::INFINITY,
        lower_slack: f64::INFINITY,
    };
    let Some(first) = states.first() else { return rep };
    let (t0, x0) = (first.t, first.x);
    for s in &states[1..] {
        let up = x0 * (s.t / t0).sqrt() - s.x;
        let lo = s.x - x0 - ((2.0 * s.t).powf(1.5) - (2.0 * t0).powf(1.5)) / 3.0;
        rep.checked += 1;
        rep.upper_slack = rep.upper_slack.min(up);
        rep.lower_slack = rep.lower_slack.min(lo);
        rep.upper_ok &= up > 0.0;
        rep.lower_ok &= lo > 0.0;
    }
    rep
}

/// Max over interior states of `|FD(eps^2)' + 8/3 eps^2/(x'^2 - 2t)| / (|eps^2| + 1)`
/// with second-order central differences on the nonuniform grid. Uses `states` only.
pub fn decay_identity_check(traj: &Trajectory) -> f64 {
    decay_identity_states(&traj.states)
}

pub fn decay_identity_states(s: &[RadialState]) -> f64 {
    let mut worst = 0.0f64;
    for w in s.windows(3) {
        let (h1, h2) = (w[1].t - w[0].t, w[2].t - w[1].t);
        let (e0, e1, e2) = (w[0].eps2(), w[1].eps2(), w[2].eps2());
        let fd = -h2 / (h1 * (h1 + h2)) * e0 + (h2 - h1) / (h1 * h2) * e1 + h1 / (h2 * (h1 + h2)) * e2;
        let analytic = -8.0 / 3.0 * e1 / w[1].u();
        worst = worst.max((fd - analytic).abs() / (e1.abs() + 1.0));
    }
    worst
}

/// An `n x n` grid of admissible starts at `t0`: `x0` spans `2t0 sqrt(2t0) (1.25 .. 4.25)`,
/// `x0'` sits at fractions `0.05 .. 0.95` of the admissible interval `(sqrt(2t0), x0/(2t0))`.
pub fn admissible_grid(t0: f64, n: usize) -> Vec<RadialState> {
    let s = (2.0 * t0).sqrt();
    let lin = |a: f64, b: f64, i: usize| if n > 1 { a + (b - a) * i as f64 / (n - 1) as f64 } else { a };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let x0 = 2.0 * t0 * s * lin(1.25, 4.25, i);
        for j in 0..n {
            let f = lin(0.05, 0.95, j);
            out.push(RadialState::new(t0, x0, s + f * (x0 / (2.0 * t0) - s)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub t0: f64,
    pub x0: f64,
    pub xp0: f64,
    pub t_plus: Option<f64>,
    pub termination: Option<Termination>,
    pub error: Option<String>,
}

/// Forward-integrates every start in parallel; rows keep the input order.
pub fn sweep(starts: &[RadialState], tol: f64) -> Vec<SweepRow> {
    starts
        .par_iter()
        .map(|s| {
            let r = integrate(*s, Direction::Forward, tol);
            SweepRow {
                t0: s.t,
                x0: s.x,
                xp0: s.xp,
                t_plus: r.as_ref().ok().map(|t| t.t_plus),
                termination: r.as_ref().ok().map(|t| t.termination),
                error: r.err().map(|e| e.to_string()),
            }
        })
        .collect()
}
