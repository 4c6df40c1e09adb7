//! Method-of-lines integrator on `(0, ℓπ)` with homogeneous Neumann
//! boundaries and a memory-delayed cross-diffusion flux.
//!
//! Nodes sit at `x_i = i·dx`, `dx = ℓπ/(n_x − 1)`, and the boundary closure
//! uses mirrored ghost nodes. The cross-diffusion term `−d21 (v u_x(t−τ))_x`
//! is discretised in flux form with interface values `v_{i+1/2}` taken as
//! arithmetic means, so the physical boundary flux is exactly zero.
//!
//! The time step is snapped so that `τ/dt` is an integer. Stage values at
//! `t − τ + dt/2` use four-point cubic interpolation of the stored history.

pub mod diagnostics;
pub mod export;
pub mod history;
pub mod reduction;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{reaction_rhs, steady_state, ModelParams, DIVISION_FLOOR};

pub use diagnostics::{diagnose, AmplitudeTrend, PeriodDiagnostics};
pub use history::HistoryBuffer;
pub use reduction::homogeneous_reduction_check;

/// Any field magnitude above this aborts the run.
pub const BLOWUP_LIMIT: f64 = 1e6;

/// Safety factor of the diffusive CFL bound for the explicit scheme.
pub const CFL_SAFETY: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeScheme {
    /// Classical RK4 on the full right-hand side, guarded by the diffusive CFL bound.
    Rk4,
    /// Strang splitting: exact propagation of the discrete diffusion
    /// half-steps, RK4 for reaction plus cross-diffusion in between.
    SplitExactDiffusion,
}

impl TimeScheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            TimeScheme::Rk4 => "rk4",
            TimeScheme::SplitExactDiffusion => "split",
        }
    }
}

impl std::str::FromStr for TimeScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rk4" | "explicit" => Ok(TimeScheme::Rk4),
            "split" | "imex" | "split_exact_diffusion" => Ok(TimeScheme::SplitExactDiffusion),
            other => Err(format!(
                "unknown scheme `{other}` (expected `rk4` or `split`)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub n_x: usize,
    pub dx: f64,
    pub dt: f64,
    pub t_end: f64,
    pub length: f64,
}

impl Grid {
    pub fn new(ell: f64, n_x: usize, dt: f64, t_end: f64) -> Result<Self> {
        if n_x < 3 {
            return Err(Error::InvalidParameter {
                name: "n_x",
                value: n_x as f64,
                reason: "need at least 3 nodes",
            });
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: dt,
                reason: "must be positive",
            });
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "t_end",
                value: t_end,
                reason: "must be positive",
            });
        }
        let length = ell * PI;
        Ok(Grid {
            n_x,
            dx: length / (n_x - 1) as f64,
            dt,
            t_end,
            length,
        })
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_x).map(|i| self.x(i)).collect()
    }

    /// Trapezoid quadrature weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n_x {
            0.5 * self.dx
        } else {
            self.dx
        }
    }

    /// Trapezoid integral of a nodal field.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().enumerate().map(|(i, v)| self.weight(i) * v).sum()
    }

    /// Largest explicit step allowed by the diffusive CFL bound.
    pub fn cfl_limit(&self, params: &ModelParams) -> f64 {
        let d = params.d11.max(params.d22);
        if d > 0.0 {
            CFL_SAFETY * self.dx * self.dx / (2.0 * d)
        } else {
            f64::INFINITY
        }
    }
}

/// `base + amplitude · cos(wavenumber · x)`, constant on the history interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub base: f64,
    pub amplitude: f64,
    pub wavenumber: f64,
}

impl Profile {
    pub fn constant(base: f64) -> Self {
        Profile {
            base,
            amplitude: 0.0,
            wavenumber: 0.0,
        }
    }

    pub fn cosine(base: f64, amplitude: f64, wavenumber: f64) -> Self {
        Profile {
            base,
            amplitude,
            wavenumber,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.base + self.amplitude * (self.wavenumber * x).cos()
    }

    /// Parses the menu forms `c`, `c±d`, `c+a*cos(x)`, `c-acos(kx)` and
    /// `c+acos(px/q)` (also `p/qx`). Whitespace and `*` are ignored.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let s: String = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*')
            .collect();
        let bad = || format!("initial profile `{text}` is not `c`, `c+a cos(x)` or `c+a cos(kx)`");
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
        let Some(cpos) = s.find("cos(") else {
            // A constant, optionally written as `c+d` or `c-d`.
            let b = s.as_bytes();
            let split = (1..b.len())
                .rev()
                .find(|&i| matches!(b[i], b'+' | b'-') && !matches!(b[i - 1], b'e' | b'E'));
            return match split {
                Some(i) => Ok(Profile::constant(num(&s[..i])? + num(&s[i..])?)),
                None => num(&s).map(Profile::constant),
            };
        };
        if !s.ends_with(')') {
            return Err(bad());
        }
        let head = &s[..cpos];
        let arg = &s[cpos + 4..s.len() - 1];
        let split = head[1..].rfind(['+', '-']).map(|i| i + 1).ok_or_else(bad)?;
        let base = num(&head[..split])?;
        let amp_text = &head[split..];
        let amplitude = match amp_text {
            "+" => 1.0,
            "-" => -1.0,
            t => num(t)?,
        };
        let xpos = arg.find('x').ok_or_else(bad)?;
        let (before, after) = (&arg[..xpos], &arg[xpos + 1..]);
        let ratio = |t: &str| -> std::result::Result<f64, String> {
            match t.split_once('/') {
                Some((p, q)) => Ok(num(p)? / num(q)?),
                None => num(t),
            }
        };
        let mut k = if before.is_empty() {
            1.0
        } else {
            ratio(before)?
        };
        if let Some(q) = after.strip_prefix('/') {
            k /= num(q)?;
        } else if !after.is_empty() {
            return Err(bad());
        }
        Ok(Profile::cosine(base, amplitude, k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition {
    pub u: Profile,
    pub v: Profile,
}

impl InitialCondition {
    pub fn constant(u: f64, v: f64) -> Self {
        InitialCondition {
            u: Profile::constant(u),
            v: Profile::constant(v),
        }
    }

    /// The exact steady state as a constant history.
    pub fn steady(params: &ModelParams) -> Result<Self> {
        let ss = steady_state(params)?;
        Ok(Self::constant(ss.u_star, ss.v_star))
    }

    pub fn sample(&self, grid: &Grid) -> (Vec<f64>, Vec<f64>) {
        let x = grid.nodes();
        (
            x.iter().map(|&x| self.u.eval(x)).collect(),
            x.iter().map(|&x| self.v.eval(x)).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_x: usize,
    /// Requested step; reduced so that `τ/dt` is an integer.
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_every: f64,
    pub scheme: TimeScheme,
    /// Node whose values are recorded at every step.
    pub probe: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_x: 201,
            dt: 0.05,
            t_end: 3000.0,
            snapshot_every: 1.0,
            scheme: TimeScheme::Rk4,
            probe: 0,
        }
    }
}

/// Which parts of the right-hand side to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Terms {
    pub diffusion: bool,
    pub reaction: bool,
    pub cross: bool,
}

impl Terms {
    pub const ALL: Terms = Terms {
        diffusion: true,
        reaction: true,
        cross: true,
    };
    pub const DIFFUSION_ONLY: Terms = Terms {
        diffusion: true,
        reaction: false,
        cross: false,
    };
    pub const WITHOUT_DIFFUSION: Terms = Terms {
        diffusion: false,
        reaction: true,
        cross: true,
    };
}

/// Discrete Neumann Laplacian with ghost-node closure, added into `out` times `coef`.
pub fn add_laplacian(f: &[f64], dx: f64, coef: f64, out: &mut [f64]) {
    let n = f.len();
    let s = coef / (dx * dx);
    out[0] += s * 2.0 * (f[1] - f[0]);
    for i in 1..n - 1 {
        out[i] += s * (f[i + 1] - 2.0 * f[i] + f[i - 1]);
    }
    out[n - 1] += s * 2.0 * (f[n - 2] - f[n - 1]);
}

/// Flux-form divergence `(v ∂x ud)_x`, added into `out` times `coef`.
/// Mirrored ghost nodes give `F_{−1/2} = −F_{1/2}` at each end.
pub fn add_cross_divergence(v: &[f64], ud: &[f64], dx: f64, coef: f64, out: &mut [f64]) {
    let n = v.len();
    let flux = |i: usize| 0.5 * (v[i] + v[i + 1]) * (ud[i + 1] - ud[i]) / dx;
    let s = coef / dx;
    let mut left = flux(0);
    out[0] += s * 2.0 * left;
    for i in 1..n - 1 {
        let right = flux(i);
        out[i] += s * (right - left);
        left = right;
    }
    out[n - 1] += s * (-2.0 * left);
}

/// Right-hand side of the semi-discrete system.
#[allow(clippy::too_many_arguments)]
pub fn spatial_rhs(
    grid: &Grid,
    params: &ModelParams,
    terms: Terms,
    u: &[f64],
    v: &[f64],
    ud: &[f64],
    du: &mut [f64],
    dv: &mut [f64],
) -> Result<()> {
    du.iter_mut().for_each(|x| *x = 0.0);
    dv.iter_mut().for_each(|x| *x = 0.0);
    if terms.reaction {
        for i in 0..grid.n_x {
            let (f, g) = reaction_rhs(u[i], v[i], ud[i], params)?;
            du[i] = f;
            dv[i] = g;
        }
    }
    if terms.diffusion {
        add_laplacian(u, grid.dx, params.d11, du);
        add_laplacian(v, grid.dx, params.d22, dv);
    }
    if terms.cross && params.d21 != 0.0 {
        add_cross_divergence(v, ud, grid.dx, -params.d21, dv);
    }
    Ok(())
}

/// Exact propagator `exp(s·d·L)` of the discrete Neumann diffusion operator,
/// built from its cosine eigenbasis `cos(πij/(n−1))` with eigenvalues
/// `−(4/dx²) sin²(jπ/(2(n−1)))`.
#[derive(Debug, Clone)]
pub struct DiffusionPropagator {
    n: usize,
    matrix: Option<Vec<f64>>,
}

impl DiffusionPropagator {
    pub fn new(n: usize, dx: f64, diffusivity: f64, s: f64) -> Self {
        if diffusivity == 0.0 || s == 0.0 {
            return DiffusionPropagator { n, matrix: None };
        }
        let m = n - 1;
        let basis = |i: usize, j: usize| (PI * ((i * j) % (2 * m)) as f64 / m as f64).cos();
        let w = |j: usize| if j == 0 || j == m { 0.5 } else { 1.0 };
        let decay: Vec<f64> = (0..n)
            .map(|j| {
                let sn = (j as f64 * PI / (2.0 * m as f64)).sin();
                (-diffusivity * s * 4.0 / (dx * dx) * sn * sn).exp()
            })
            .collect();
        let mut mat = vec![0.0; n * n];
        for i in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for j in 0..n {
                    acc += w(j) * decay[j] * basis(i, j) * basis(l, j);
                }
                mat[i * n + l] = acc * w(l) * 2.0 / m as f64;
            }
        }
        DiffusionPropagator {
            n,
            matrix: Some(mat),
        }
    }

    pub fn apply(&self, f: &mut [f64], scratch: &mut [f64]) {
        let Some(mat) = &self.matrix else { return };
        for i in 0..self.n {
            let row = &mat[i * self.n..(i + 1) * self.n];
            scratch[i] = row.iter().zip(f.iter()).map(|(a, b)| a * b).sum();
        }
        f.copy_from_slice(&scratch[..self.n]);
    }
}

/// Discretised space–time solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: ModelParams,
    pub tau: f64,
    pub grid: Grid,
    pub scheme: TimeScheme,
    pub x: Vec<f64>,
    /// Snapshot times (stride plus the final time).
    pub times: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub probe: usize,
    /// Probe series recorded at every step, starting at `t = 0`.
    pub probe_times: Vec<f64>,
    pub probe_u: Vec<f64>,
    pub probe_v: Vec<f64>,
    /// Spatial mean of `u` at every step.
    pub mean_u: Vec<f64>,
}

impl Trajectory {
    pub fn final_u(&self) -> &[f64] {
        self.u.last().expect("trajectory has at least one snapshot")
    }

    pub fn final_v(&self) -> &[f64] {
        self.v.last().expect("trajectory has at least one snapshot")
    }
}

/// Number of steps per delay and the snapped time step.
pub fn snap_step(tau: f64, dt: f64) -> (usize, f64) {
    if tau > 0.0 {
        let lag = ((tau / dt) - 1e-9).ceil().max(1.0) as usize;
        (lag, tau / lag as f64)
    } else {
        (0, dt)
    }
}

/// Delayed prey field at `t_s + θ dt − τ` for `θ ∈ {0, ½, 1}`.
pub(crate) enum Stage {
    Start,
    Mid,
    End,
}

pub(crate) fn delayed_into(
    h: &HistoryBuffer,
    step: i64,
    lag: usize,
    stage: Stage,
    out: &mut [f64],
) {
    let base = step - lag as i64;
    match stage {
        Stage::Start => out.copy_from_slice(h.get(base)),
        Stage::End => out.copy_from_slice(h.get(base + 1)),
        Stage::Mid if lag >= 2 => {
            let (a, b, c, d) = (
                h.get(base - 1),
                h.get(base),
                h.get(base + 1),
                h.get(base + 2),
            );
            for i in 0..out.len() {
                out[i] = (-a[i] + 9.0 * b[i] + 9.0 * c[i] - d[i]) / 16.0;
            }
        }
        Stage::Mid => {
            let (b, c) = (h.get(base), h.get(base + 1));
            for i in 0..out.len() {
                out[i] = 0.5 * (b[i] + c[i]);
            }
        }
    }
}

fn check_fields(t: f64, u: &[f64], v: &[f64]) -> Result<()> {
    for &x in u.iter().chain(v.iter()) {
        if !x.is_finite() {
            return Err(Error::NonFinite { t });
        }
        if x.abs() > BLOWUP_LIMIT {
            return Err(Error::BlowUp { t, value: x.abs() });
        }
    }
    Ok(())
}

struct Workspace {
    k: [(Vec<f64>, Vec<f64>); 4],
    us: Vec<f64>,
    vs: Vec<f64>,
    ud: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        let z = || (vec![0.0; n], vec![0.0; n]);
        Workspace {
            k: [z(), z(), z(), z()],
            us: vec![0.0; n],
            vs: vec![0.0; n],
            ud: vec![0.0; n],
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn rk4_step(
    grid: &Grid,
    params: &ModelParams,
    terms: Terms,
    hist: &HistoryBuffer,
    step: i64,
    lag: usize,
    u: &mut [f64],
    v: &mut [f64],
    ws: &mut Workspace,
) -> Result<()> {
    let dt = grid.dt;
    let n = grid.n_x;
    let stages = [
        (0.0, Stage::Start),
        (0.5, Stage::Mid),
        (0.5, Stage::Mid),
        (1.0, Stage::End),
    ];
    for (s, (frac, stage)) in stages.into_iter().enumerate() {
        if s == 0 {
            ws.us.copy_from_slice(u);
            ws.vs.copy_from_slice(v);
        } else {
            let (pu, pv) = &ws.k[s - 1];
            for i in 0..n {
                ws.us[i] = u[i] + frac * dt * pu[i];
                ws.vs[i] = v[i] + frac * dt * pv[i];
            }
        }
        if lag == 0 {
            ws.ud.copy_from_slice(&ws.us);
        } else {
            delayed_into(hist, step, lag, stage, &mut ws.ud);
        }
        let (du, dv) = &mut ws.k[s];
        spatial_rhs(grid, params, terms, &ws.us, &ws.vs, &ws.ud, du, dv)?;
    }
    for i in 0..n {
        u[i] += dt / 6.0 * (ws.k[0].0[i] + 2.0 * ws.k[1].0[i] + 2.0 * ws.k[2].0[i] + ws.k[3].0[i]);
        v[i] += dt / 6.0 * (ws.k[0].1[i] + 2.0 * ws.k[1].1[i] + 2.0 * ws.k[2].1[i] + ws.k[3].1[i]);
    }
    Ok(())
}

/// Integrates from the constant history `initial` on `[−τ, 0]` to `cfg.t_end`.
pub fn run(
    params: &ModelParams,
    tau: f64,
    cfg: &SimConfig,
    initial: &InitialCondition,
) -> Result<Trajectory> {
    params.validate()?;
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::NonPositiveDelay(tau));
    }
    if !(cfg.dt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: cfg.dt,
            reason: "must be positive",
        });
    }
    let (lag, dt) = snap_step(tau, cfg.dt);
    let grid = Grid::new(params.ell, cfg.n_x, dt, cfg.t_end)?;
    if cfg.probe >= grid.n_x {
        return Err(Error::InvalidParameter {
            name: "probe",
            value: cfg.probe as f64,
            reason: "outside the grid",
        });
    }
    if cfg.scheme == TimeScheme::Rk4 {
        let limit = grid.cfl_limit(params);
        if dt > limit {
            return Err(Error::CflViolation {
                dt,
                suggested: limit,
            });
        }
    }
    let steps = ((cfg.t_end / dt).round() as i64).max(1);
    let stride = ((cfg.snapshot_every / dt).round() as i64).max(1);

    let (mut u, mut v) = initial.sample(&grid);
    for &x in &u {
        if !(x > DIVISION_FLOOR) {
            return Err(Error::DivisionHazard {
                value: x,
                floor: DIVISION_FLOOR,
            });
        }
    }
    let mut hist = HistoryBuffer::new(u.clone(), lag + 3);
    hist.push(0, &u);

    let n = grid.n_x;
    let half = 0.5 * dt;
    let (pu, pv) = match cfg.scheme {
        TimeScheme::SplitExactDiffusion => (
            Some(DiffusionPropagator::new(n, grid.dx, params.d11, half)),
            Some(DiffusionPropagator::new(n, grid.dx, params.d22, half)),
        ),
        TimeScheme::Rk4 => (None, None),
    };
    let terms = if cfg.scheme == TimeScheme::Rk4 {
        Terms::ALL
    } else {
        Terms::WITHOUT_DIFFUSION
    };
    let mut ws = Workspace::new(n);
    let mut scratch = vec![0.0; n];

    let mut traj = Trajectory {
        params: *params,
        tau,
        grid,
        scheme: cfg.scheme,
        x: grid.nodes(),
        times: vec![0.0],
        u: vec![u.clone()],
        v: vec![v.clone()],
        probe: cfg.probe,
        probe_times: Vec::with_capacity(steps as usize + 1),
        probe_u: Vec::with_capacity(steps as usize + 1),
        probe_v: Vec::with_capacity(steps as usize + 1),
        mean_u: Vec::with_capacity(steps as usize + 1),
    };
    traj.probe_times.push(0.0);
    traj.probe_u.push(u[cfg.probe]);
    traj.probe_v.push(v[cfg.probe]);
    traj.mean_u.push(grid.integrate(&u) / grid.length);

    for step in 0..steps {
        if let (Some(pu), Some(pv)) = (&pu, &pv) {
            pu.apply(&mut u, &mut scratch);
            pv.apply(&mut v, &mut scratch);
        }
        rk4_step(
            &grid, params, terms, &hist, step, lag, &mut u, &mut v, &mut ws,
        )?;
        if let (Some(pu), Some(pv)) = (&pu, &pv) {
            pu.apply(&mut u, &mut scratch);
            pv.apply(&mut v, &mut scratch);
        }
        let t = (step + 1) as f64 * dt;
        check_fields(t, &u, &v)?;
        hist.push(step + 1, &u);
        traj.probe_times.push(t);
        traj.probe_u.push(u[cfg.probe]);
        traj.probe_v.push(v[cfg.probe]);
        traj.mean_u.push(grid.integrate(&u) / grid.length);
        if (step + 1) % stride == 0 || step + 1 == steps {
            traj.times.push(t);
            traj.u.push(u.clone());
            traj.v.push(v.clone());
        }
    }
    Ok(traj)
}
