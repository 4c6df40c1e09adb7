//! Independent reference computations used by the test suites.
//!
//! Nothing here calls the crate's derivative tables, eigenvectors or
//! normal-form code. The reaction terms are restated from the model
//! equations and every derivative is taken by finite differences.

use memhopf::model::{ModelParams, Variant};
use num_complex::Complex64 as C;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Prey and predator reaction terms with the delayed prey density `ud`.
pub fn reaction(p: &ModelParams, u: f64, v: f64, ud: f64) -> [f64; 2] {
    let f = u * (1.0 - u) - p.beta * u * u * v / (u * u + p.m * v * v);
    let r = if p.variant == Variant::MemoryOnly {
        u
    } else {
        ud
    };
    [f, p.gamma * v * (1.0 - v / r)]
}

pub fn steady(p: &ModelParams) -> f64 {
    1.0 - p.beta / (p.m + 1.0)
}

/// Dense complex solve by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<C>>, mut b: Vec<C>) -> Vec<C> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / d;
            if f == C::new(0.0, 0.0) {
                continue;
            }
            let pivot_row = a[col].clone();
            for (x, t) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= f * t;
            }
            let t = b[col];
            b[r] -= f * t;
        }
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: C = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

pub fn transpose(a: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

pub fn mat_vec(a: &[Vec<C>], x: &[C]) -> Vec<C> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Null vector of a numerically singular matrix by two inverse iterations.
pub fn null_vector(a: &[Vec<C>]) -> Vec<C> {
    let n = a.len();
    let mut x: Vec<C> = (0..n)
        .map(|i| c(1.0 + 0.1 * i as f64, 0.3 - 0.05 * i as f64))
        .collect();
    for _ in 0..3 {
        x = solve(a.to_vec(), x);
        let s = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        x.iter_mut().for_each(|z| *z /= s);
    }
    x
}

/// Galerkin reduction of the reaction-diffusion system onto the cosine modes
/// in `modes`, evaluated by midpoint quadrature. The state is the list of
/// modal deviations of `u` followed by those of `v`.
pub struct Galerkin {
    pub p: ModelParams,
    pub modes: Vec<u32>,
    pub nodes: Vec<f64>,
}

impl Galerkin {
    pub fn new(p: ModelParams, n_c: u32) -> Self {
        let mut modes = vec![0, n_c, 2 * n_c];
        modes.dedup();
        let m = 256;
        let len = p.ell * std::f64::consts::PI;
        let nodes = (0..m).map(|i| (i as f64 + 0.5) * len / m as f64).collect();
        Galerkin { p, modes, nodes }
    }

    pub fn dim(&self) -> usize {
        2 * self.modes.len()
    }

    pub fn index_u(&self, n: u32) -> usize {
        self.modes.iter().position(|&k| k == n).unwrap()
    }

    /// Field value and its first two x-derivatives at `x`.
    fn field(&self, coef: &[f64], base: f64, x: f64) -> [f64; 3] {
        let ell = self.p.ell;
        let mut out = [base, 0.0, 0.0];
        for (a, &k) in coef.iter().zip(&self.modes) {
            let q = k as f64 / ell;
            out[0] += a * (q * x).cos();
            out[1] -= a * q * (q * x).sin();
            out[2] -= a * q * q * (q * x).cos();
        }
        out
    }

    /// Right-hand side from the current state `z` and the delayed state `zd`.
    pub fn rhs(&self, z: &[f64], zd: &[f64]) -> Vec<f64> {
        let k = self.modes.len();
        let s = steady(&self.p);
        let p = &self.p;
        let mut out = vec![0.0; 2 * k];
        let m = self.nodes.len() as f64;
        for &x in &self.nodes {
            let u = self.field(&z[..k], s, x);
            let v = self.field(&z[k..], s, x);
            let ud = self.field(&zd[..k], s, x);
            let [f, g] = reaction(p, u[0], v[0], ud[0]);
            let du = p.d11 * u[2] + f;
            let dv = p.d22 * v[2] - p.d21 * (v[1] * ud[1] + v[0] * ud[2]) + g;
            for (i, &kk) in self.modes.iter().enumerate() {
                let w = if kk == 0 { 1.0 } else { 2.0 } * (kk as f64 * x / p.ell).cos() / m;
                out[i] += w * du;
                out[k + i] += w * dv;
            }
        }
        out
    }

    fn rhs_joint(&self, y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        self.rhs(&y[..d], &y[d..])
    }

    /// Jacobians with respect to the current and the delayed state.
    pub fn jacobians(&self) -> (Vec<Vec<C>>, Vec<Vec<C>>) {
        let d = self.dim();
        let h = 1e-6;
        let mut l0 = vec![vec![c(0.0, 0.0); d]; d];
        let mut l1 = vec![vec![c(0.0, 0.0); d]; d];
        for j in 0..2 * d {
            let mut yp = vec![0.0; 2 * d];
            let mut ym = vec![0.0; 2 * d];
            yp[j] = h;
            ym[j] = -h;
            let (a, b) = (self.rhs_joint(&yp), self.rhs_joint(&ym));
            for i in 0..d {
                let val = c((a[i] - b[i]) / (2.0 * h), 0.0);
                if j < d {
                    l0[i][j] = val;
                } else {
                    l1[i][j - d] = val;
                }
            }
        }
        (l0, l1)
    }

    fn b_real(&self, a: &[f64], b: &[f64], h: f64) -> Vec<f64> {
        let comb = |sa: f64, sb: f64| -> Vec<f64> {
            let y: Vec<f64> = a
                .iter()
                .zip(b)
                .map(|(x, y)| h * (sa * x + sb * y))
                .collect();
            self.rhs_joint(&y)
        };
        let (pp, pm, mp, mm) = (
            comb(1.0, 1.0),
            comb(1.0, -1.0),
            comb(-1.0, 1.0),
            comb(-1.0, -1.0),
        );
        (0..pp.len())
            .map(|i| (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h * h))
            .collect()
    }

    fn c_real_h(&self, a: &[f64], b: &[f64], cc: &[f64], h: f64) -> Vec<f64> {
        let mut acc = vec![0.0; self.dim()];
        for sa in [-1.0, 1.0] {
            for sb in [-1.0, 1.0] {
                for sc in [-1.0, 1.0] {
                    let y: Vec<f64> = (0..a.len())
                        .map(|i| h * (sa * a[i] + sb * b[i] + sc * cc[i]))
                        .collect();
                    let g = self.rhs_joint(&y);
                    let sgn = sa * sb * sc;
                    acc.iter_mut().zip(&g).for_each(|(s, g)| *s += sgn * g);
                }
            }
        }
        acc.iter().map(|s| s / (8.0 * h * h * h)).collect()
    }

    fn c_real(&self, a: &[f64], b: &[f64], cc: &[f64]) -> Vec<f64> {
        let (sa, sb, sc) = (unit_scale(a), unit_scale(b), unit_scale(cc));
        let norm = |x: &[f64], s: f64| -> Vec<f64> { x.iter().map(|v| v / s).collect() };
        let (a, b, cc) = (norm(a, sa), norm(b, sb), norm(cc, sc));
        let h = 4e-3;
        let big = self.c_real_h(&a, &b, &cc, h);
        let small = self.c_real_h(&a, &b, &cc, h / 2.0);
        big.iter()
            .zip(&small)
            .map(|(b, s)| sa * sb * sc * (4.0 * s - b) / 3.0)
            .collect()
    }

    /// Symmetric bilinear form on complex joint arguments.
    pub fn b(&self, a: &[C], b: &[C]) -> Vec<C> {
        let (ar, ai): (Vec<f64>, Vec<f64>) = a.iter().map(|z| (z.re, z.im)).unzip();
        let (br, bi): (Vec<f64>, Vec<f64>) = b.iter().map(|z| (z.re, z.im)).unzip();
        let b_rich = |x: &[f64], y: &[f64]| -> Vec<f64> {
            let (sx, sy) = (unit_scale(x), unit_scale(y));
            let (xs, ys): (Vec<f64>, Vec<f64>) = (
                x.iter().map(|v| v / sx).collect(),
                y.iter().map(|v| v / sy).collect(),
            );
            let h = 4e-3;
            let big = self.b_real(&xs, &ys, h);
            let small = self.b_real(&xs, &ys, h / 2.0);
            big.iter()
                .zip(&small)
                .map(|(b, s)| sx * sy * (4.0 * s - b) / 3.0)
                .collect()
        };
        let rr = b_rich(&ar, &br);
        let ii = b_rich(&ai, &bi);
        let ri = b_rich(&ar, &bi);
        let ir = b_rich(&ai, &br);
        (0..rr.len())
            .map(|k| c(rr[k] - ii[k], ri[k] + ir[k]))
            .collect()
    }

    /// Symmetric trilinear form on complex joint arguments.
    pub fn c3(&self, a: &[C], b: &[C], cc: &[C]) -> Vec<C> {
        let parts = |v: &[C]| -> [Vec<f64>; 2] {
            [
                v.iter().map(|z| z.re).collect(),
                v.iter().map(|z| z.im).collect(),
            ]
        };
        let (pa, pb, pc) = (parts(a), parts(b), parts(cc));
        let mut out = vec![c(0.0, 0.0); self.dim()];
        for (ia, xa) in pa.iter().enumerate() {
            for (ib, xb) in pb.iter().enumerate() {
                for (ic, xc) in pc.iter().enumerate() {
                    let w = C::i().powu((ia + ib + ic) as u32);
                    let t = self.c_real(xa, xb, xc);
                    out.iter_mut().zip(&t).for_each(|(o, t)| *o += w * t);
                }
            }
        }
        out
    }
}

/// Max-norm used to rescale finite-difference directions, 1 for a zero vector.
fn unit_scale(x: &[f64]) -> f64 {
    let m = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        1.0
    } else {
        m
    }
}

/// Characteristic matrix `Δ(λ) = λI − L0 − L1 e^{−λτ}`.
pub fn delta(l0: &[Vec<C>], l1: &[Vec<C>], tau: f64, lambda: C) -> Vec<Vec<C>> {
    let e = (-lambda * tau).exp();
    let n = l0.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { lambda } else { c(0.0, 0.0) } - l0[i][j] - l1[i][j] * e)
                .collect()
        })
        .collect()
}

/// Cubic normal-form data of the Galerkin delay system at a Hopf point.
pub struct LyapunovOracle {
    pub c1: C,
    /// `dλ/dτ` of the critical root.
    pub dlambda_dtau: C,
    /// Squared amplitude of the `cos(n x/ℓ)` coefficient of `u` per unit
    /// delay offset `τ − τ_c` on the bifurcating orbit.
    pub amplitude_sq_per_delay: f64,
}

pub fn lyapunov_oracle(p: &ModelParams, n_c: u32, omega: f64, tau: f64) -> LyapunovOracle {
    let g = Galerkin::new(*p, n_c);
    let (l0, l1) = g.jacobians();
    let d = g.dim();
    let iw = c(0.0, omega);
    let e1 = (-iw * tau).exp();
    let q = null_vector(&delta(&l0, &l1, tau, iw));
    let pl = null_vector(&transpose(&delta(&l0, &l1, tau, iw)));
    let dprime: Vec<Vec<C>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) } + l1[i][j] * (tau * e1))
                .collect()
        })
        .collect();
    let norm = dot(&pl, &mat_vec(&dprime, &q));
    let pn: Vec<C> = pl.iter().map(|z| z / norm).collect();

    let joint = |w: &[C], shift: C| -> Vec<C> {
        w.iter()
            .copied()
            .chain(w.iter().map(|z| z * shift))
            .collect()
    };
    let phi = joint(&q, e1);
    let phib: Vec<C> = phi.iter().map(|z| z.conj()).collect();
    let w20 = solve(delta(&l0, &l1, tau, 2.0 * iw), g.b(&phi, &phi));
    let w11 = solve(delta(&l0, &l1, tau, c(0.0, 0.0)), g.b(&phi, &phib));
    let h20 = joint(&w20, e1 * e1);
    let h11 = joint(&w11, c(1.0, 0.0));
    let cubic = g.c3(&phi, &phi, &phib);
    let t2 = g.b(&phib, &h20);
    let t3 = g.b(&phi, &h11);
    let total: Vec<C> = (0..d).map(|i| cubic[i] + t2[i] + 2.0 * t3[i]).collect();
    let c1 = 0.5 * dot(&pn, &total);

    let dtau: Vec<Vec<C>> = l1
        .iter()
        .map(|row| row.iter().map(|x| x * iw * e1).collect())
        .collect();
    let dlambda_dtau = -dot(&pn, &mat_vec(&dtau, &q));
    let qu = q[g.index_u(n_c)].norm();
    let amplitude_sq_per_delay = 4.0 * qu * qu * (-dlambda_dtau.re / c1.re);
    LyapunovOracle {
        c1,
        dlambda_dtau,
        amplitude_sq_per_delay,
    }
}

/// Same amplitude law from `ρ̇ = K1 μ ρ + K2 ρ³` with the orthonormal cosine basis.
pub fn amplitude_sq_from_normal_form(p: &ModelParams, n_c: u32, k1: f64, k2: f64) -> f64 {
    let len = p.ell * std::f64::consts::PI;
    let basis_sq = if n_c == 0 { 1.0 / len } else { 2.0 / len };
    4.0 * basis_sq * (-k1 / k2)
}

/// Central-difference mixed partial of `F(u(0), v(0), u(−1))` at the steady
/// state, two Richardson steps deep. `idx` lists the differentiated arguments.
pub fn fd_partial(p: &ModelParams, idx: &[usize]) -> [f64; 2] {
    let s = steady(p);
    let at = |h: f64| -> [f64; 2] {
        let k = idx.len();
        let mut acc = [0.0; 2];
        for mask in 0..(1u32 << k) {
            let mut y = [s, s, s];
            let mut sign = 1.0;
            for (bit, &i) in idx.iter().enumerate() {
                let sg = if mask & (1 << bit) != 0 { 1.0 } else { -1.0 };
                y[i] += sg * h;
                sign *= sg;
            }
            let r = reaction(p, y[0], y[1], y[2]);
            acc[0] += sign * r[0];
            acc[1] += sign * r[1];
        }
        let d = (2.0 * h).powi(k as i32);
        [acc[0] / d, acc[1] / d]
    };
    let h = 2e-2 * s;
    let (d1, d2, d4) = (at(h), at(h / 2.0), at(h / 4.0));
    let mut out = [0.0; 2];
    for k in 0..2 {
        let r1 = (4.0 * d2[k] - d1[k]) / 3.0;
        let r2 = (4.0 * d4[k] - d2[k]) / 3.0;
        out[k] = (16.0 * r2 - r1) / 15.0;
    }
    out
}

/// Random parameter set with a positive steady state bounded away from zero.
pub fn random_params<R: rand::Rng>(rng: &mut R, variant: Variant) -> ModelParams {
    let m = rng.random_range(0.2..0.95);
    ModelParams {
        beta: rng.random_range(0.2..0.85) * (m + 1.0),
        m,
        gamma: rng.random_range(0.2..1.5),
        d11: rng.random_range(0.2..1.5),
        d22: rng.random_range(0.2..1.5),
        d21: rng.random_range(0.0..80.0),
        ell: rng.random_range(1.0..3.0),
        variant,
    }
}

/// Random parameter set satisfying (C0) whose steady state has a Hopf point.
pub fn random_admissible<R: rand::Rng>(rng: &mut R) -> (ModelParams, memhopf::HopfPoint) {
    loop {
        let variant = if rng.random_bool(0.5) {
            Variant::MemoryOnly
        } else {
            Variant::MemoryPlusGestation
        };
        let p = random_params(rng, variant);
        if p.validate().is_err() || !p.satisfies_c0() {
            continue;
        }
        if let Ok(set) = memhopf::spectral::critical_set(&p) {
            return (p, set.points[0]);
        }
    }
}

/// Relative agreement with an absolute floor for entries near zero.
pub fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(floor)
}
