//! Predator–prey reaction terms, steady state, linearisation and the
//! derivative tables used by the normal-form computation.
//!
//! Prey: `f = u(1−u) − βu²v/(u²+mv²)`.
//! Predator: `g = γv(1 − v/r)` where `r = u(t)` for [`Variant::MemoryOnly`]
//! and `r = u(t−τ)` for [`Variant::MemoryPlusGestation`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Prey densities at or below this value are treated as a division hazard.
pub const DIVISION_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Memory delay only in the cross-diffusion flux.
    MemoryOnly,
    /// Memory delay plus a gestation delay in the predator growth term.
    MemoryPlusGestation,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::MemoryOnly => "memory",
            Variant::MemoryPlusGestation => "memory+gestation",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "memory" | "memory_only" | "memoryonly" => Ok(Variant::MemoryOnly),
            "memory+gestation" | "memory_plus_gestation" | "memoryplusgestation" | "gestation" => {
                Ok(Variant::MemoryPlusGestation)
            }
            other => Err(format!(
                "unknown variant `{other}` (expected `memory` or `memory+gestation`)"
            )),
        }
    }
}

/// Biological and diffusion parameters. The domain is `(0, ℓπ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub beta: f64,
    pub m: f64,
    pub gamma: f64,
    pub d11: f64,
    pub d22: f64,
    pub d21: f64,
    pub ell: f64,
    pub variant: Variant,
}

impl ModelParams {
    /// Builds and validates a parameter set.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        variant: Variant,
        beta: f64,
        m: f64,
        gamma: f64,
        d11: f64,
        d22: f64,
        d21: f64,
        ell: f64,
    ) -> Result<Self> {
        let p = ModelParams {
            beta,
            m,
            gamma,
            d11,
            d22,
            d21,
            ell,
            variant,
        };
        p.validate()?;
        Ok(p)
    }

    /// The worked parameter set `β=1, m=0.5, γ=0.5, d11=0.6, d22=0.8, ℓ=2`
    /// with the given cross-diffusion rate.
    pub fn baseline(variant: Variant, d21: f64) -> Self {
        ModelParams {
            beta: 1.0,
            m: 0.5,
            gamma: 0.5,
            d11: 0.6,
            d22: 0.8,
            d21,
            ell: 2.0,
            variant,
        }
    }

    pub fn with_d21(&self, d21: f64) -> Result<Self> {
        let p = ModelParams { d21, ..*self };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("beta", self.beta),
            ("m", self.m),
            ("gamma", self.gamma),
            ("ell", self.ell),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be positive and finite",
                });
            }
        }
        let nonneg = [("d11", self.d11), ("d22", self.d22), ("d21", self.d21)];
        for (name, value) in nonneg {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be non-negative and finite",
                });
            }
        }
        if self.beta >= self.m + 1.0 {
            return Err(Error::NoPositiveSteadyState {
                beta: self.beta,
                m: self.m,
            });
        }
        Ok(())
    }

    /// Condition (C0). The memory-only analysis uses the closed bounds
    /// `0<β≤(m+1)²/2, 0<m≤1`; the gestation analysis uses strict bounds.
    pub fn satisfies_c0(&self) -> bool {
        let half = (self.m + 1.0).powi(2) / 2.0;
        match self.variant {
            Variant::MemoryOnly => {
                self.beta > 0.0 && self.beta <= half && self.m > 0.0 && self.m <= 1.0
            }
            Variant::MemoryPlusGestation => {
                self.beta > 0.0 && self.beta < half && self.m > 0.0 && self.m < 1.0
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub u_star: f64,
    pub v_star: f64,
}

/// Positive constant steady state `u* = v* = 1 − β/(m+1)`.
pub fn steady_state(p: &ModelParams) -> Result<SteadyState> {
    if !(p.beta < p.m + 1.0) {
        return Err(Error::NoPositiveSteadyState {
            beta: p.beta,
            m: p.m,
        });
    }
    let s = 1.0 - p.beta / (p.m + 1.0);
    Ok(SteadyState {
        u_star: s,
        v_star: s,
    })
}

/// Jacobian blocks at the steady state.
///
/// `A1` collects derivatives with respect to the current state, `A2` those
/// with respect to `u(t−τ)`. The diffusion blocks are `D1 = diag(d11, d22)`
/// and `D2 = [[0, 0], [−d21 v*, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linearization {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub b11: f64,
    pub b12: f64,
    pub b21: f64,
    pub b22: f64,
    pub d11: f64,
    pub d22: f64,
    pub d21: f64,
    pub u_star: f64,
    pub v_star: f64,
    pub ell: f64,
    pub variant: Variant,
}

impl Linearization {
    pub fn a1(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn a2(&self) -> [[f64; 2]; 2] {
        [[self.b11, self.b12], [self.b21, self.b22]]
    }

    pub fn d1(&self) -> [[f64; 2]; 2] {
        [[self.d11, 0.0], [0.0, self.d22]]
    }

    pub fn d2(&self) -> [[f64; 2]; 2] {
        [[0.0, 0.0], [-self.d21 * self.v_star, 0.0]]
    }

    /// Squared wave number `(n/ℓ)²`.
    pub fn k(&self, n: u32) -> f64 {
        let q = n as f64 / self.ell;
        q * q
    }

    pub fn det_a1(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Coupling through the delayed terms at wave number `n`:
    /// `d21 a12 v* (n/ℓ)² + a12 b21`.
    pub fn delayed_coupling(&self, n: u32) -> f64 {
        self.d21 * self.a12 * self.v_star * self.k(n) + self.a12 * self.b21
    }

    /// Moves the delayed predator-growth coupling into the instantaneous block
    /// (`b_ij → a_ij`), leaving `A2 = 0`.
    pub fn with_delay_coupling_instantaneous(&self) -> Linearization {
        Linearization {
            a11: self.a11 + self.b11,
            a12: self.a12 + self.b12,
            a21: self.a21 + self.b21,
            a22: self.a22 + self.b22,
            b11: 0.0,
            b12: 0.0,
            b21: 0.0,
            b22: 0.0,
            ..*self
        }
    }
}

pub fn linearize(p: &ModelParams) -> Result<Linearization> {
    p.validate()?;
    let ss = steady_state(p)?;
    let mp1 = p.m + 1.0;
    let a11 = 2.0 * p.beta / (mp1 * mp1) - 1.0;
    let a12 = p.beta * (p.m - 1.0) / (mp1 * mp1);
    let (a21, b21) = match p.variant {
        Variant::MemoryOnly => (p.gamma, 0.0),
        Variant::MemoryPlusGestation => (0.0, p.gamma),
    };
    Ok(Linearization {
        a11,
        a12,
        a21,
        a22: -p.gamma,
        b11: 0.0,
        b12: 0.0,
        b21,
        b22: 0.0,
        d11: p.d11,
        d22: p.d22,
        d21: p.d21,
        u_star: ss.u_star,
        v_star: ss.v_star,
        ell: p.ell,
        variant: p.variant,
    })
}

/// Reaction terms `(f, g)` without the positivity check.
#[inline]
pub fn reaction(u: f64, v: f64, u_delayed: f64, p: &ModelParams) -> (f64, f64) {
    let f = u * (1.0 - u) - p.beta * u * u * v / (u * u + p.m * v * v);
    let r = match p.variant {
        Variant::MemoryOnly => u,
        Variant::MemoryPlusGestation => u_delayed,
    };
    (f, p.gamma * v * (1.0 - v / r))
}

/// Reaction terms `(f, g)`, refusing prey densities at or below [`DIVISION_FLOOR`].
pub fn reaction_rhs(u: f64, v: f64, u_delayed: f64, p: &ModelParams) -> Result<(f64, f64)> {
    if !(u > DIVISION_FLOOR) {
        return Err(Error::DivisionHazard {
            value: u,
            floor: DIVISION_FLOOR,
        });
    }
    if p.variant == Variant::MemoryPlusGestation && !(u_delayed > DIVISION_FLOOR) {
        return Err(Error::DivisionHazard {
            value: u_delayed,
            floor: DIVISION_FLOOR,
        });
    }
    Ok(reaction(u, v, u_delayed, p))
}

/// Arguments of the reaction terms in the order used by [`DerivativeTable`]:
/// `u(0)`, `v(0)`, `u(−1)` (time rescaled so the delay is 1).
pub const ARG_U: usize = 0;
pub const ARG_V: usize = 1;
pub const ARG_U_DELAYED: usize = 2;

/// Second and third partial derivatives of both reaction terms with respect
/// to `(u(0), v(0), u(−1))`, multiplied by `τ_c`.
///
/// `second[i][j][k]` is `τ_c ∂²F^(k)/∂x_i∂x_j`; `third[i][j][l][k]` likewise.
/// Both are fully symmetric in the argument indices.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTable {
    pub tau_c: f64,
    pub second: [[[f64; 2]; 3]; 3],
    pub third: [[[[f64; 2]; 3]; 3]; 3],
}

impl DerivativeTable {
    /// Coefficient `f_{j1 j2 j3}`: `j1` derivatives in `u(0)`, `j2` in `v(0)`,
    /// `j3` in `u(−1)`. Only orders 2 and 3 are stored.
    pub fn f(&self, j1: usize, j2: usize, j3: usize) -> [f64; 2] {
        let mut idx = Vec::with_capacity(3);
        idx.extend(std::iter::repeat(ARG_U).take(j1));
        idx.extend(std::iter::repeat(ARG_V).take(j2));
        idx.extend(std::iter::repeat(ARG_U_DELAYED).take(j3));
        match idx.len() {
            2 => self.second[idx[0]][idx[1]],
            3 => self.third[idx[0]][idx[1]][idx[2]],
            n => panic!("derivative order {n} is not stored"),
        }
    }

    /// Table of `F(u, v, u)`: the delayed prey argument is identified with
    /// the current one by the chain rule, leaving zeros in the delayed slots.
    pub fn fold_delayed_into_current(&self) -> DerivativeTable {
        let map = |i: usize| if i == ARG_U_DELAYED { ARG_U } else { i };
        let mut second = [[[0.0; 2]; 3]; 3];
        let mut third = [[[[0.0; 2]; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let s = &mut second[map(i)][map(j)];
                s[0] += self.second[i][j][0];
                s[1] += self.second[i][j][1];
                for l in 0..3 {
                    let t = &mut third[map(i)][map(j)][map(l)];
                    t[0] += self.third[i][j][l][0];
                    t[1] += self.third[i][j][l][1];
                }
            }
        }
        DerivativeTable {
            tau_c: self.tau_c,
            second,
            third,
        }
    }
}

/// Unscaled partial of `h = u²v/(u²+mv²)` with `a` derivatives in `u` and
/// `b` in `v` (orders 2 and 3).
fn holling_partial(u: f64, v: f64, m: f64, a: usize, b: usize) -> f64 {
    let s = u * u + m * v * v;
    let w = 3.0 * u * u - m * v * v;
    let (u2, v2) = (u * u, v * v);
    let quartic =
        |c1: f64, c2: f64, c3: f64| c1 * m * m * v2 * v2 + c2 * m * u2 * v2 + c3 * u2 * u2;
    match (a, b) {
        (2, 0) => -2.0 * m * v2 * v * w / s.powi(3),
        (1, 1) => 2.0 * m * u * v2 * w / s.powi(3),
        (0, 2) => -2.0 * m * u2 * v * w / s.powi(3),
        (3, 0) => 24.0 * m * u * v2 * v * (u2 - m * v2) / s.powi(4),
        (2, 1) => -2.0 * m * v2 * quartic(1.0, -14.0, 9.0) / s.powi(4),
        (1, 2) => 4.0 * m * u * v * quartic(1.0, -8.0, 3.0) / s.powi(4),
        (0, 3) => -6.0 * m * u2 * quartic(1.0, -6.0, 1.0) / s.powi(4),
        _ => unreachable!("holling_partial order"),
    }
}

/// Unscaled partial of `g = γv(1 − v/r)` with `a` derivatives in `r` and `b` in `v`.
fn growth_partial(r: f64, v: f64, gamma: f64, a: usize, b: usize) -> f64 {
    match (a, b) {
        (2, 0) => -2.0 * gamma * v * v / r.powi(3),
        (1, 1) => 2.0 * gamma * v / (r * r),
        (0, 2) => -2.0 * gamma / r,
        (3, 0) => 6.0 * gamma * v * v / r.powi(4),
        (2, 1) => -4.0 * gamma * v / r.powi(3),
        (1, 2) => 2.0 * gamma / (r * r),
        (0, 3) => 0.0,
        _ => unreachable!("growth_partial order"),
    }
}

/// Unscaled partial of both reaction terms; `counts[i]` derivatives in argument `i`.
fn reaction_partial(p: &ModelParams, ss: &SteadyState, counts: [usize; 3]) -> [f64; 2] {
    let (u, v) = (ss.u_star, ss.v_star);
    let [cu, cv, cd] = counts;
    let order = cu + cv + cd;
    let prey = if cd > 0 {
        0.0
    } else {
        let diag = if cu == order && order == 2 { -2.0 } else { 0.0 };
        diag - p.beta * holling_partial(u, v, p.m, cu, cv)
    };
    let (cr, other) = match p.variant {
        Variant::MemoryOnly => (cu, cd),
        Variant::MemoryPlusGestation => (cd, cu),
    };
    let predator = if other > 0 {
        0.0
    } else {
        growth_partial(u, v, p.gamma, cr, cv)
    };
    [prey, predator]
}

/// Derivative table of the general three-argument form.
pub fn derivative_table(p: &ModelParams, tau_c: f64) -> Result<DerivativeTable> {
    if !(tau_c > 0.0) {
        return Err(Error::NonPositiveDelay(tau_c));
    }
    let ss = steady_state(p)?;
    let scaled = |idx: &[usize]| {
        let mut counts = [0usize; 3];
        for &i in idx {
            counts[i] += 1;
        }
        let d = reaction_partial(p, &ss, counts);
        [tau_c * d[0], tau_c * d[1]]
    };
    let mut second = [[[0.0; 2]; 3]; 3];
    let mut third = [[[[0.0; 2]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            second[i][j] = scaled(&[i, j]);
            for l in 0..3 {
                third[i][j][l] = scaled(&[i, j, l]);
            }
        }
    }
    Ok(DerivativeTable {
        tau_c,
        second,
        third,
    })
}

/// Two-argument derivative table of the memory-only system, with entries
/// `f_jk = τ_c ∂^{j+k}F/∂u^j∂v^k` written out as explicit closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryOnlyTable {
    pub tau_c: f64,
    pub f20: [f64; 2],
    pub f11: [f64; 2],
    pub f02: [f64; 2],
    pub f30: [f64; 2],
    pub f21: [f64; 2],
    pub f12: [f64; 2],
    pub f03: [f64; 2],
}

pub fn memory_only_table(p: &ModelParams, tau_c: f64) -> Result<MemoryOnlyTable> {
    if p.variant != Variant::MemoryOnly {
        return Err(Error::WrongVariant {
            expected: "memory-only",
        });
    }
    if !(tau_c > 0.0) {
        return Err(Error::NonPositiveDelay(tau_c));
    }
    let ss = steady_state(p)?;
    let (u, v, b, m, g, t) = (ss.u_star, ss.v_star, p.beta, p.m, p.gamma, tau_c);
    let s = u * u + m * v * v;
    let (s2, s3, s4) = (s * s, s * s * s, s * s * s * s);
    let (u2, u3, u4, u5) = (u * u, u.powi(3), u.powi(4), u.powi(5));
    let (v2, v3, v4) = (v * v, v.powi(3), v.powi(4));
    let (m2, m3) = (m * m, m * m * m);

    let f20 = t * (-2.0 - 2.0 * b * v / s + 10.0 * b * u2 * v / s2 - 8.0 * b * u4 * v / s3);
    let f11 = t
        * (-2.0 * b * u / s + 2.0 * b * u3 / s2 + 4.0 * b * m * u * v2 / s2
            - 8.0 * b * m * u3 * v2 / s3);
    let f02 = t * (6.0 * b * m * u2 * v / s2 - 8.0 * b * m2 * u2 * v3 / s3);
    let f30 = t * (24.0 * b * u * v / s2 - 72.0 * b * u3 * v / s3 + 48.0 * b * u5 * v / s4);
    let f21 = t
        * (-2.0 * b / s + 4.0 * b * m * v2 / s2 + 10.0 * b * u2 / s2
            - 40.0 * b * m * u2 * v2 / s3
            - 8.0 * b * u4 / s3
            + 48.0 * b * m * u4 * v2 / s4);
    let f12 = t
        * (12.0 * b * m * u * v / s2 - 24.0 * b * m * u3 * v / s3 - 16.0 * b * m2 * u * v3 / s3
            + 48.0 * b * m2 * u3 * v3 / s4);
    let f03 =
        t * (6.0 * b * m * u2 / s2 - 48.0 * b * m2 * u2 * v2 / s3 + 48.0 * b * m3 * u2 * v4 / s4);

    Ok(MemoryOnlyTable {
        tau_c,
        f20: [f20, -2.0 * t * g * v2 / u3],
        f11: [f11, 2.0 * t * g * v / u2],
        f02: [f02, -2.0 * t * g / u],
        f30: [f30, 6.0 * t * g * v2 / u4],
        f21: [f21, -4.0 * t * g * v / u3],
        f12: [f12, 2.0 * t * g / u2],
        f03: [f03, 0.0],
    })
}
