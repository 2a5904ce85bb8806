//! Dormand-Prince 5(4) stepping with admissibility-aware event handling.
//!
//! Near `t_+` the solution behaves like `eps^2 ~ b s + c s^{3/2}` in
//! `s = t_+ - t`, so the right-hand side loses smoothness there. Regular steps
//! are capped to a fraction of the predicted distance `eps^2 / |(eps^2)'|`;
//! once that distance is tiny the integrator switches to an event phase that
//! halves rejected (inadmissible) steps until `eps^2` is below the event
//! threshold, which amounts to bisecting the step onto the zero of `eps^2`.

use serde::Serialize;

use super::{rhs, RadialError, RadialState, Termination, Trajectory};

/// Event phase ends once `eps^2` is at most this.
pub const EVENT_EPS2: f64 = 1e-10;
/// Underflow with `eps^2` below this still counts as reaching the event.
const EVENT_ACCEPT_EPS2: f64 = 1e-8;
/// Floor on the `eps^2` error scale, so the relative control does not stall at the event.
const EPS2_SCALE_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub tol: f64,
    /// Backward runs stop at this `t`.
    pub t_floor: f64,
    /// Optional stop time, on the side of the start given by the direction.
    pub t_stop: Option<f64>,
    pub max_steps: usize,
    pub h_min: f64,
    pub h_init: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions { tol: 1e-10, t_floor: 1e-8, t_stop: None, max_steps: 2_000_000, h_min: 1e-14, h_init: 1e-3 }
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

type Y = [f64; 2];

fn field(t: f64, y: Y) -> Option<Y> {
    rhs(t, y[0], y[1]).ok().map(|xpp| [y[1], xpp])
}

/// One DP5(4) step; `None` if a stage leaves the regular domain.
fn dp_step(t: f64, y: Y, h: f64) -> Option<(Y, Y)> {
    let mut k = [[0.0; 2]; 7];
    for i in 0..7 {
        let mut yi = y;
        for j in 0..i {
            yi[0] += h * A[i][j] * k[j][0];
            yi[1] += h * A[i][j] * k[j][1];
        }
        k[i] = field(t + C[i] * h, yi)?;
    }
    let mut y5 = y;
    let mut err = [0.0; 2];
    for i in 0..7 {
        for c in 0..2 {
            y5[c] += h * B5[i] * k[i][c];
            err[c] += h * (B5[i] - B4[i]) * k[i][c];
        }
    }
    Some((y5, err))
}

pub fn integrate(start: RadialState, direction: Direction, tol: f64) -> Result<Trajectory, RadialError> {
    integrate_with(start, direction, &IntegrateOptions { tol, ..Default::default() })
}

pub fn integrate_with(
    start: RadialState,
    direction: Direction,
    opts: &IntegrateOptions,
) -> Result<Trajectory, RadialError> {
    if !start.is_admissible() {
        return Err(RadialError::Inadmissible(start));
    }
    let forward = direction == Direction::Forward;
    let sign = if forward { 1.0 } else { -1.0 };
    let tol = opts.tol;
    let kappa = tol.powf(0.25) / 2.0;
    let event_zone = 2e-8 / kappa;
    // the time the run must not pass, if any
    let limit = match (forward, opts.t_stop) {
        (true, s) => s,
        (false, Some(s)) => Some(s.max(opts.t_floor)),
        (false, None) => Some(opts.t_floor),
    };
    let at_limit = |t: f64| limit.is_some_and(|l| (l - t) * sign <= 1e-14 * l.abs().max(1.0));

    let (mut t, mut y) = (start.t, [start.x, start.xp]);
    let mut h = opts.h_init;
    let mut event = false;
    let mut states = vec![start];
    let mut steps = 0usize;

    let termination = loop {
        let cur = RadialState::new(t, y[0], y[1]);
        if at_limit(t) {
            break if !forward && opts.t_stop.is_none_or(|s| s <= opts.t_floor) {
                Termination::TZeroSingularity
            } else {
                Termination::StopTime
            };
        }
        if steps >= opts.max_steps {
            break Termination::MaxSteps;
        }
        let e = cur.eps2();
        if forward {
            let dist = e / (8.0 / 3.0 * e / cur.u());
            if !event && dist < event_zone {
                event = true;
            }
            if event && e <= EVENT_EPS2 {
                break Termination::Eps2Zero;
            }
            if !event {
                h = h.min(kappa * dist);
            }
        }
        let mut step = h;
        if let Some(l) = limit {
            step = step.min((l - t) * sign);
        }
        let attempt = dp_step(t, y, sign * step).and_then(|(yn, err)| {
            let next = RadialState::new(t + sign * step, yn[0], yn[1]);
            next.is_admissible().then_some((yn, err, next))
        });
        let Some((yn, err, next)) = attempt else {
            h = step / 2.0;
            if h < opts.h_min {
                if forward && e < EVENT_ACCEPT_EPS2 {
                    break Termination::Eps2Zero;
                }
                if forward {
                    return Err(RadialError::StepUnderflow { t, eps2: e, h_min: opts.h_min });
                }
                break Termination::ConstraintViolation;
            }
            continue;
        };
        steps += 1;
        let de = 8.0 / 3.0 * (err[0] - 2.0 * next.t * err[1]);
        let ratio = [
            err[0].abs() / (tol * (1.0 + yn[0].abs())),
            err[1].abs() / (tol * (1.0 + yn[1].abs())),
            de.abs() / (tol * next.eps2().abs().max(EPS2_SCALE_FLOOR)),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if ratio <= 1.0 {
            t = next.t;
            y = yn;
            if !event {
                states.push(next);
            }
        }
        let grow = if ratio > 0.0 { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) } else { 5.0 };
        h = step * grow;
        if h < opts.h_min && !at_limit(t) {
            if forward && e < EVENT_ACCEPT_EPS2 {
                break Termination::Eps2Zero;
            }
            return Err(RadialError::StepUnderflow { t, eps2: e, h_min: opts.h_min });
        }
    };

    let end = RadialState::new(t, y[0], y[1]);
    if !forward {
        states.reverse();
    }
    let (t_minus, t_plus) = if forward { (start.t, end.t) } else { (end.t, start.t) };
    Ok(Trajectory { states, end, t_minus, t_plus, termination })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{check_bounds, decay_identity_check};

    /// Regression value for the forward endpoint from `(1, 5, 2)`.
    const T_PLUS_REF: f64 = 1.72010571190;

    fn reference() -> RadialState {
        RadialState::new(1.0, 5.0, 2.0)
    }

    #[test]
    fn forward_reaches_eps2_zero() {
        let traj = integrate(reference(), Direction::Forward, 1e-10).unwrap();
        assert_eq!(traj.termination, Termination::Eps2Zero);
        assert!(traj.end.eps2() < 1e-8 && traj.end.eps2() >= 0.0);
        assert!((traj.t_plus - T_PLUS_REF).abs() < 1e-8, "t_plus = {}", traj.t_plus);
        assert!(traj.states.windows(2).all(|w| w[1].t > w[0].t && w[1].eps2() < w[0].eps2()));
        assert!(decay_identity_check(&traj) < 1e-6);
        assert!(check_bounds(&traj).passed());
    }

    #[test]
    fn inadmissible_start() {
        assert!(matches!(
            integrate(RadialState::new(1.0, 4.0, 2.0), Direction::Forward, 1e-10),
            Err(RadialError::Inadmissible(_))
        ));
    }

    #[test]
    fn backward_reaches_floor() {
        let traj = integrate(reference(), Direction::Backward, 1e-10).unwrap();
        assert_eq!(traj.termination, Termination::TZeroSingularity);
        assert!((traj.t_minus - 1e-8).abs() < 1e-15);
        // near t = 0 the decay rate is below rounding, so eps^2 is only non-increasing
        assert!(traj.states.windows(2).all(|w| w[1].t > w[0].t && w[1].eps2() <= w[0].eps2() * (1.0 + 1e-14)));
        assert!(traj.states[0].eps2() > traj.states.last().unwrap().eps2());
        assert!(traj.end.x.is_finite() && traj.end.x.abs() < 10.0);
    }

    #[test]
    fn decay_error_shrinks_with_tolerance() {
        let errs: Vec<f64> = [1e-8, 1e-9, 1e-10]
            .iter()
            .map(|&tol| decay_identity_check(&integrate(reference(), Direction::Forward, tol).unwrap()))
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn forward_then_backward_returns() {
        let tol = 1e-10;
        let fwd = IntegrateOptions { tol, t_stop: Some(1.5), ..Default::default() };
        let a = integrate_with(reference(), Direction::Forward, &fwd).unwrap();
        assert_eq!(a.termination, Termination::StopTime);
        assert_eq!(a.end.t, 1.5);
        let bwd = IntegrateOptions { tol, t_stop: Some(1.0), ..Default::default() };
        let b = integrate_with(a.end, Direction::Backward, &bwd).unwrap();
        assert_eq!(b.termination, Termination::StopTime);
        assert_eq!(b.end.t, 1.0);
        assert!((b.end.x - 5.0).abs() < 10.0 * tol, "{}", b.end.x - 5.0);
        assert!((b.end.xp - 2.0).abs() < 10.0 * tol, "{}", b.end.xp - 2.0);
    }
}
