//! Delay-ODE oracle for spatially constant solutions.
//!
//! With constant data the Laplacian and the cross-diffusion flux vanish, so
//! every node follows the two-equation delay ODE `u' = f, v' = g`. This
//! integrator shares only the step snapping and stage rule with the PDE
//! solver; it keeps its own full history.

use super::{run, snap_step, InitialCondition, SimConfig};
use crate::error::Result;
use crate::model::{reaction_rhs, ModelParams};

/// Solution of the delay ODE on the snapped step grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayOdeSolution {
    pub dt: f64,
    pub t: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// RK4 for the delay ODE with constant history `(u0, v0)` on `[−τ, 0]`.
pub fn integrate_delay_ode(
    params: &ModelParams,
    tau: f64,
    dt: f64,
    t_end: f64,
    u0: f64,
    v0: f64,
) -> Result<DelayOdeSolution> {
    let (lag, dt) = snap_step(tau, dt);
    let steps = ((t_end / dt).round() as usize).max(1);
    let mut t = Vec::with_capacity(steps + 1);
    let mut u = Vec::with_capacity(steps + 1);
    let mut v = Vec::with_capacity(steps + 1);
    t.push(0.0);
    u.push(u0);
    v.push(v0);
    let past = |u: &[f64], i: isize| if i < 0 { u0 } else { u[i as usize] };
    for s in 0..steps {
        let (un, vn) = (u[s], v[s]);
        let b = s as isize - lag as isize;
        let (d0, dh, d1) = if lag == 0 {
            (f64::NAN, f64::NAN, f64::NAN)
        } else if lag == 1 {
            (
                past(&u, b),
                0.5 * (past(&u, b) + past(&u, b + 1)),
                past(&u, b + 1),
            )
        } else {
            let mid = (-past(&u, b - 1) + 9.0 * past(&u, b) + 9.0 * past(&u, b + 1)
                - past(&u, b + 2))
                / 16.0;
            (past(&u, b), mid, past(&u, b + 1))
        };
        let pick = |d: f64, cur: f64| if lag == 0 { cur } else { d };
        let (k1u, k1v) = reaction_rhs(un, vn, pick(d0, un), params)?;
        let (u2, v2) = (un + 0.5 * dt * k1u, vn + 0.5 * dt * k1v);
        let (k2u, k2v) = reaction_rhs(u2, v2, pick(dh, u2), params)?;
        let (u3, v3) = (un + 0.5 * dt * k2u, vn + 0.5 * dt * k2v);
        let (k3u, k3v) = reaction_rhs(u3, v3, pick(dh, u3), params)?;
        let (u4, v4) = (un + dt * k3u, vn + dt * k3v);
        let (k4u, k4v) = reaction_rhs(u4, v4, pick(d1, u4), params)?;
        u.push(un + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u));
        v.push(vn + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v));
        t.push((s + 1) as f64 * dt);
    }
    Ok(DelayOdeSolution { dt, t, u, v })
}

/// Runs the PDE from the constant history `(u0, v0)` and returns the
/// largest nodal deviation from the delay-ODE solution over `[0, horizon]`.
pub fn homogeneous_reduction_check(
    params: &ModelParams,
    tau: f64,
    horizon: f64,
    u0: f64,
    v0: f64,
    cfg: &SimConfig,
) -> Result<f64> {
    let cfg = SimConfig {
        t_end: horizon,
        ..*cfg
    };
    let traj = run(params, tau, &cfg, &InitialCondition::constant(u0, v0))?;
    let ode = integrate_delay_ode(params, tau, cfg.dt, horizon, u0, v0)?;
    let dt = traj.grid.dt;
    let mut worst: f64 = 0.0;
    for (s, (pu, pv)) in traj.probe_u.iter().zip(&traj.probe_v).enumerate() {
        worst = worst.max((pu - ode.u[s]).abs()).max((pv - ode.v[s]).abs());
    }
    for (k, t) in traj.times.iter().enumerate() {
        let s = (t / dt).round() as usize;
        for (a, b) in traj.u[k].iter().zip(&traj.v[k]) {
            worst = worst.max((a - ode.u[s]).abs()).max((b - ode.v[s]).abs());
        }
    }
    Ok(worst)
}
