//! Per-wave-number characteristic analysis of the linearised delay system.
//!
//! For mode `cos(nx/ℓ)` with `k = (n/ℓ)²` the characteristic function is
//! `Γ_n(λ) = λ² − T_n λ + J_n − c_n e^{−λτ}`, where `c_n = a12 (b21 + d21 v* k)`
//! collects everything that enters through the delay.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{re, CMat2};
use crate::model::{linearize, Linearization, ModelParams, Variant};

/// Distance in τ below which a delay is reported as lying on a Hopf curve.
pub const ON_CURVE_TOL: f64 = 1e-9;

/// Relative gap below which two critical delays of different modes count as a tie.
pub const TIE_TOL: f64 = 1e-9;

/// Bisection tolerance in `d21` for Hopf–Hopf crossings.
pub const CROSSING_TOL: f64 = 1e-6;

/// Characteristic quantities of one spatial mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSlice {
    pub n: u32,
    /// Squared wave number `(n/ℓ)²`.
    pub k: f64,
    pub t: f64,
    pub j: f64,
    pub p: f64,
    pub q: f64,
    /// Delayed coupling `c_n = d21 a12 v* k + a12 b21`.
    pub coupling: f64,
    pub omega: Option<f64>,
}

impl SpectralSlice {
    /// `Γ_n(0) = J_n − c_n`.
    pub fn gamma_at_zero(&self) -> f64 {
        self.j - self.coupling
    }

    /// `Q̃_n = J_n + c_n`, which carries the sign of `Q_n` whenever `Γ_n(0) > 0`.
    pub fn q_tilde(&self) -> f64 {
        self.j + self.coupling
    }
}

/// Purely imaginary root `±iω_{n_c}` of `Γ_{n_c}` at `τ = τ_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfPoint {
    pub n_c: u32,
    pub j: u32,
    pub omega_nc: f64,
    pub tau_c: f64,
    /// Frequency after rescaling time by `τ_c`: `ω_c = τ_c ω_{n_c}`.
    pub omega_c: f64,
    pub transversality: f64,
}

/// `det M_n(λ)` with `M_n = λI + kD1 + k e^{−λτ} D2 − A1 − A2 e^{−λτ}`.
pub fn char_residual(lin: &Linearization, n: u32, tau: f64, lambda: Complex64) -> Complex64 {
    char_matrix(lin, n, tau, lambda).det()
}

/// The matrix `M_n(λ)` whose determinant is the characteristic function.
pub fn char_matrix(lin: &Linearization, n: u32, tau: f64, lambda: Complex64) -> CMat2 {
    let k = lin.k(n);
    let e = (-lambda * tau).exp();
    let (a1, a2, d1, d2) = (lin.a1(), lin.a2(), lin.d1(), lin.d2());
    let mut m = CMat2::default();
    for r in 0..2 {
        for c in 0..2 {
            let diag = if r == c { lambda } else { re(0.0) };
            m.0[r][c] = diag + re(k * d1[r][c] - a1[r][c]) + e * (k * d2[r][c] - a2[r][c]);
        }
    }
    m
}

/// ∂Γ_n/∂λ, used by Newton root tracking.
pub fn char_residual_dlambda(
    lin: &Linearization,
    n: u32,
    tau: f64,
    lambda: Complex64,
) -> Complex64 {
    let sl = slice(lin, n);
    re(2.0) * lambda - sl.t + sl.coupling * tau * (-lambda * tau).exp()
}

pub fn slice(lin: &Linearization, n: u32) -> SpectralSlice {
    let k = lin.k(n);
    let t = lin.a11 + lin.a22 - (lin.d11 + lin.d22) * k;
    let j = lin.d11 * lin.d22 * k * k - (lin.d11 * lin.a22 + lin.d22 * lin.a11) * k + lin.det_a1();
    let coupling = lin.delayed_coupling(n);
    let p = t * t - 2.0 * j;
    let q = (j + coupling) * (j - coupling);
    let mut sl = SpectralSlice {
        n,
        k,
        t,
        j,
        p,
        q,
        coupling,
        omega: None,
    };
    sl.omega = hopf_frequency(&sl);
    sl
}

/// Positive root of `ω⁴ + P_n ω² + Q_n = 0`, present only when `Q_n < 0`.
/// `Q_n = 0` is treated as having no frequency since `λ = 0` is never a root.
pub fn hopf_frequency(sl: &SpectralSlice) -> Option<f64> {
    if !(sl.q < 0.0) {
        return None;
    }
    let disc = (sl.p * sl.p - 4.0 * sl.q).sqrt();
    // The root (−P + √disc)/2 cancels badly when P ≫ |Q|; use the product form.
    let w2 = if sl.p > 0.0 {
        -2.0 * sl.q / (sl.p + disc)
    } else {
        (-sl.p + disc) / 2.0
    };
    Some(w2.sqrt())
}

/// Coefficients `(c4, c2, c0)` of `P_n = c4 n⁴ + c2 n² + c0`.
pub fn p_polynomial(lin: &Linearization) -> [f64; 3] {
    let l2 = lin.ell * lin.ell;
    let s = lin.d11 + lin.d22;
    let t0 = lin.a11 + lin.a22;
    let b = lin.d11 * lin.a22 + lin.d22 * lin.a11;
    let c4 = (s * s - 2.0 * lin.d11 * lin.d22) / (l2 * l2);
    let c2 = (-2.0 * s * t0 + 2.0 * b) / l2;
    let c0 = t0 * t0 - 2.0 * lin.det_a1();
    [c4, c2, c0]
}

/// Critical delays `τ_{n,0} < τ_{n,1} < … < τ_{n,j_max}`.
pub fn critical_delays(sl: &SpectralSlice, j_max: u32) -> Result<Vec<f64>> {
    let omega = sl.omega.ok_or(Error::NoHopfFrequency { n: sl.n })?;
    let sin = sl.t * omega / sl.coupling;
    if !(sin > 0.0) {
        return Err(Error::BranchViolation { n: sl.n, sin });
    }
    let cos = ((sl.j - omega * omega) / sl.coupling).clamp(-1.0, 1.0);
    let base = cos.acos();
    Ok((0..=j_max)
        .map(|j| (base + 2.0 * PI * j as f64) / omega)
        .collect())
}

/// Closed-form transversality value `√(P_n² − 4Q_n)/c_n²`. Its sign is that of
/// `d Re λ/dτ` at every `τ_{n,j}`.
pub fn transversality(sl: &SpectralSlice) -> f64 {
    (sl.p * sl.p - 4.0 * sl.q).max(0.0).sqrt() / (sl.coupling * sl.coupling)
}

/// Hopf point of mode `n` on branch `j`.
pub fn hopf_point(lin: &Linearization, n: u32, j: u32) -> Result<HopfPoint> {
    let sl = slice(lin, n);
    let taus = critical_delays(&sl, j)?;
    let tau_c = taus[j as usize];
    let omega_nc = sl.omega.expect("critical_delays checked the frequency");
    Ok(HopfPoint {
        n_c: n,
        j,
        omega_nc,
        tau_c,
        omega_c: tau_c * omega_nc,
        transversality: transversality(&sl),
    })
}

/// Continuous minimiser `ℓ (det A1/(d11 d22))^{1/4}` of `n ↦ d21^(n)`.
pub fn threshold_turning_index(lin: &Linearization) -> f64 {
    lin.ell * (lin.det_a1() / (lin.d11 * lin.d22)).powf(0.25)
}

/// Default mode window `max(32, 4·⌈turning index⌉)`.
pub fn default_n_max(lin: &Linearization) -> u32 {
    let turn = threshold_turning_index(lin);
    if turn.is_finite() {
        32.max(4 * turn.ceil() as u32)
    } else {
        32
    }
}

/// Threshold `d21^(n) = −J_n/(a12 v* k)` for `n ≥ 1`.
pub fn d21_threshold(lin: &Linearization, n: u32) -> f64 {
    let sl = slice(lin, n);
    -sl.j / (lin.a12 * lin.v_star * sl.k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds {
    /// `(n, d21^(n))` for `n = 1..=n_max`.
    pub by_mode: Vec<(u32, f64)>,
    pub d21_star: f64,
    /// Modes attaining the minimum (more than one on a tie).
    pub argmin: Vec<u32>,
}

pub fn d21_thresholds(lin: &Linearization, n_max: u32) -> Result<Thresholds> {
    if lin.variant != Variant::MemoryOnly {
        return Err(Error::WrongVariant {
            expected: "memory-only",
        });
    }
    if !(lin.a12 < 0.0) {
        return Err(Error::InvalidParameter {
            name: "m",
            value: lin.a12,
            reason: "thresholds need a12 < 0, i.e. m < 1",
        });
    }
    let turn = threshold_turning_index(lin);
    let needed = if turn.is_finite() {
        (turn.ceil() as u32).max(1)
    } else {
        u32::MAX
    };
    if n_max < needed {
        return Err(Error::ThresholdWindow { n_max, needed });
    }
    let by_mode: Vec<(u32, f64)> = (1..=n_max).map(|n| (n, d21_threshold(lin, n))).collect();
    let d21_star = by_mode
        .iter()
        .map(|&(_, d)| d)
        .fold(f64::INFINITY, f64::min);
    let argmin = by_mode
        .iter()
        .filter(|&&(_, d)| d - d21_star <= TIE_TOL * d21_star.abs())
        .map(|&(n, _)| n)
        .collect();
    Ok(Thresholds {
        by_mode,
        d21_star,
        argmin,
    })
}

/// `U(d21) = {n ≥ 1 : d21^(n) < d21}`. The thresholds decrease up to the
/// turning index and increase afterwards, so the scan stops at the first
/// mode past the turning index that is not below `d21`.
pub fn index_set(lin: &Linearization) -> Vec<u32> {
    let turn = threshold_turning_index(lin);
    let mut out = Vec::new();
    let mut n = 1u32;
    loop {
        let below = d21_threshold(lin, n) < lin.d21;
        if below {
            out.push(n);
        } else if n as f64 > turn {
            break;
        }
        if n == u32::MAX / 2 {
            break;
        }
        n += 1;
    }
    out
}

/// Literal inequalities of the gestation-delay case analysis, with
/// `B = d11 a22 + d22 a11 − d21 a12 v*` and `C = a11 a22 + a12 b21`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GestationCases {
    pub b: f64,
    pub c: f64,
    /// `B² − 4 d11 d22 C`.
    pub disc: f64,
    pub c1: bool,
    pub c11: bool,
    pub c2: bool,
    pub c21: bool,
    pub c3: bool,
    /// Positive root `x̃_*` of `Q̃(x̃) = 0` when one exists.
    pub x_star: Option<f64>,
    pub n0: Option<f64>,
    pub n_star: Option<u32>,
    /// Mode bounds `n1 = ℓ√x̃_1`, `n2 = ℓ√x̃_2` under (C3).
    pub n1: Option<f64>,
    pub n2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub variant: Variant,
    pub c0: bool,
    /// `a11² + a22² + 2 a12 a21`.
    pub c_star: f64,
    pub thresholds: Option<Thresholds>,
    pub gestation: Option<GestationCases>,
    /// Modes carrying a Hopf frequency under the applicable case.
    pub index_set: Vec<u32>,
}

/// `n_*` from `n0`: `n0 − 1` when `n0` is a whole number, else `⌊n0⌋`.
pub fn n_star_from(n0: f64) -> u32 {
    let r = n0.round();
    if (n0 - r).abs() <= 1e-12 * n0.max(1.0) && r >= 1.0 {
        (r - 1.0) as u32
    } else {
        n0.floor() as u32
    }
}

pub fn gestation_cases(lin: &Linearization) -> GestationCases {
    let dd = lin.d11 * lin.d22;
    let b = lin.d11 * lin.a22 + lin.d22 * lin.a11 - lin.d21 * lin.a12 * lin.v_star;
    let c = lin.a11 * lin.a22 + lin.a12 * lin.b21;
    let disc = b * b - 4.0 * dd * c;
    let c1 = b < 0.0 && c > 0.0;
    let c11 = disc < 0.0;
    let c2 = c < 0.0;
    let c21 = b > 0.0 && disc == 0.0;
    let c3 = b > 0.0 && c > 0.0 && disc > 0.0;
    let root = |sign: f64| (b + sign * disc.max(0.0).sqrt()) / (2.0 * dd);
    let x_star = if (c2 || c21) && dd > 0.0 {
        Some(root(1.0))
    } else {
        None
    };
    let n0 = x_star.map(|x| lin.ell * x.max(0.0).sqrt());
    let n_star = if c2 { n0.map(n_star_from) } else { None };
    let (n1, n2) = if c3 && dd > 0.0 {
        (
            Some(lin.ell * root(-1.0).sqrt()),
            Some(lin.ell * root(1.0).sqrt()),
        )
    } else {
        (None, None)
    };
    GestationCases {
        b,
        c,
        disc,
        c1,
        c11,
        c2,
        c21,
        c3,
        x_star,
        n0,
        n_star,
        n1,
        n2,
    }
}

pub fn classify_conditions(lin: &Linearization, params: &ModelParams) -> ConditionReport {
    let c_star = lin.a11 * lin.a11 + lin.a22 * lin.a22 + 2.0 * lin.a12 * lin.a21;
    match lin.variant {
        Variant::MemoryOnly => {
            let thresholds = d21_thresholds(lin, default_n_max(lin)).ok();
            let index_set = if thresholds.is_some() {
                index_set(lin)
            } else {
                Vec::new()
            };
            ConditionReport {
                variant: lin.variant,
                c0: params.satisfies_c0(),
                c_star,
                thresholds,
                gestation: None,
                index_set,
            }
        }
        Variant::MemoryPlusGestation => {
            let g = gestation_cases(lin);
            let index_set = if g.c1 || g.c11 {
                Vec::new()
            } else if g.c2 {
                (0..=g.n_star.unwrap_or(0)).collect()
            } else if g.c3 {
                let (lo, hi) = (g.n1.unwrap_or(0.0), g.n2.unwrap_or(0.0));
                (lo.floor() as u32..=hi.ceil() as u32)
                    .filter(|&n| (n as f64) > lo && (n as f64) < hi)
                    .collect()
            } else {
                Vec::new()
            };
            ConditionReport {
                variant: lin.variant,
                c0: params.satisfies_c0(),
                c_star,
                thresholds: None,
                gestation: Some(g),
                index_set,
            }
        }
    }
}

/// First Hopf points along increasing τ: every mode attaining `τ_*`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalSet {
    pub tau_star: f64,
    pub points: Vec<HopfPoint>,
}

impl CriticalSet {
    pub fn is_double_hopf(&self) -> bool {
        self.points.len() > 1
    }
}

/// Minimum of `τ_{n,0}` over the given modes, with ties reported together.
pub fn first_crossing(lin: &Linearization, modes: &[u32]) -> Result<CriticalSet> {
    let mut pts = Vec::with_capacity(modes.len());
    for &n in modes {
        pts.push(hopf_point(lin, n, 0)?);
    }
    let tau_star = pts.iter().map(|p| p.tau_c).fold(f64::INFINITY, f64::min);
    if !tau_star.is_finite() {
        return Err(Error::NoHopfPoint);
    }
    pts.retain(|p| p.tau_c - tau_star <= TIE_TOL * tau_star);
    Ok(CriticalSet {
        tau_star,
        points: pts,
    })
}

/// First Hopf point(s) of the steady state as τ increases from 0.
pub fn critical_set(params: &ModelParams) -> Result<CriticalSet> {
    let lin = linearize(params)?;
    let report = classify_conditions(&lin, params);
    first_crossing(&lin, &report.index_set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Unstable,
    OnHopfCurve { n: u32, j: u32 },
}

/// Stability of the steady state at delay τ from the threshold/critical-delay
/// theory of each variant.
pub fn stability_verdict(params: &ModelParams, tau: f64) -> Result<Verdict> {
    if !(tau >= 0.0) {
        return Err(Error::NonPositiveDelay(tau));
    }
    let lin = linearize(params)?;
    if !params.satisfies_c0() {
        return Err(Error::Inconclusive("parameters violate (C0)".into()));
    }
    let report = classify_conditions(&lin, params);
    let modes = match params.variant {
        Variant::MemoryOnly => {
            if !(report.c_star > 0.0) {
                return Err(Error::Inconclusive("c_* <= 0".into()));
            }
            let th = report
                .thresholds
                .as_ref()
                .ok_or_else(|| Error::Inconclusive("no thresholds".into()))?;
            if params.d21 <= th.d21_star {
                return Ok(Verdict::Stable);
            }
            report.index_set.clone()
        }
        Variant::MemoryPlusGestation => {
            let g = report.gestation.expect("gestation report");
            if g.c1 || g.c11 {
                return Ok(Verdict::Stable);
            }
            if !(g.c2 || g.c3) {
                return Err(Error::Inconclusive(
                    "none of (C1), (C11), (C2), (C3) holds".into(),
                ));
            }
            report.index_set.clone()
        }
    };
    if modes.is_empty() {
        return Ok(Verdict::Stable);
    }
    let set = first_crossing(&lin, &modes)?;
    if (tau - set.tau_star).abs() <= ON_CURVE_TOL {
        let p = set.points[0];
        return Ok(Verdict::OnHopfCurve { n: p.n_c, j: 0 });
    }
    Ok(if tau < set.tau_star {
        Verdict::Stable
    } else {
        Verdict::Unstable
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub d21: f64,
    pub n: u32,
    pub tau_n0: f64,
}

/// Parameter point where the first critical delays of two modes coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub d21: f64,
    pub tau: f64,
    pub n_a: u32,
    pub n_b: u32,
    /// The two curves meet at `τ_* = min_n τ_{n,0}`, i.e. on the stability boundary.
    pub on_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveScan {
    pub points: Vec<CurvePoint>,
    pub crossings: Vec<Crossing>,
}

fn tau_n0_at(params: &ModelParams, d21: f64, n: u32) -> Option<f64> {
    let lin = linearize(&params.with_d21(d21).ok()?).ok()?;
    critical_delays(&slice(&lin, n), 0).ok().map(|t| t[0])
}

/// Samples the curves `τ_{n,0}(d21)`, `n ∈ U(d21)`, on `[lo, hi]` and refines
/// every sign change of `τ_{a,0} − τ_{b,0}` between neighbouring samples by bisection.
pub fn hopf_curve_scan(params: &ModelParams, lo: f64, hi: f64, step: f64) -> Result<CurveScan> {
    if params.variant != Variant::MemoryOnly {
        return Err(Error::WrongVariant {
            expected: "memory-only",
        });
    }
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter {
            name: "step",
            value: step,
            reason: "need step > 0 and lo <= hi",
        });
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    let samples: Vec<Vec<CurvePoint>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let d21 = lo + step * i as f64;
            let Ok(p) = params.with_d21(d21) else {
                return Vec::new();
            };
            let Ok(lin) = linearize(&p) else {
                return Vec::new();
            };
            index_set(&lin)
                .into_iter()
                .filter_map(|n| {
                    critical_delays(&slice(&lin, n), 0)
                        .ok()
                        .map(|t| CurvePoint {
                            d21,
                            n,
                            tau_n0: t[0],
                        })
                })
                .collect()
        })
        .collect();

    let mut crossings = Vec::new();
    for w in samples.windows(2) {
        let (left, right) = (&w[0], &w[1]);
        for (ia, a) in left.iter().enumerate() {
            for b in &left[ia + 1..] {
                let (Some(ra), Some(rb)) = (
                    right.iter().find(|p| p.n == a.n),
                    right.iter().find(|p| p.n == b.n),
                ) else {
                    continue;
                };
                let g0 = a.tau_n0 - b.tau_n0;
                let g1 = ra.tau_n0 - rb.tau_n0;
                if g0 == 0.0 || g0.signum() != g1.signum() {
                    if let Some(c) = refine_crossing(params, a.d21, ra.d21, a.n, b.n) {
                        crossings.push(c);
                    }
                }
            }
        }
    }
    Ok(CurveScan {
        points: samples.into_iter().flatten().collect(),
        crossings,
    })
}

fn refine_crossing(
    params: &ModelParams,
    mut lo: f64,
    mut hi: f64,
    n_a: u32,
    n_b: u32,
) -> Option<Crossing> {
    let gap = |d: f64| Some(tau_n0_at(params, d, n_a)? - tau_n0_at(params, d, n_b)?);
    let mut g_lo = gap(lo)?;
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        let g_mid = gap(mid)?;
        if g_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    let d21 = 0.5 * (lo + hi);
    let tau = 0.5 * (tau_n0_at(params, d21, n_a)? + tau_n0_at(params, d21, n_b)?);
    let lin = linearize(&params.with_d21(d21).ok()?).ok()?;
    let tau_star = first_crossing(&lin, &index_set(&lin)).ok()?.tau_star;
    let on_boundary = tau <= tau_star + CROSSING_TOL * tau_star.max(1.0);
    Some(Crossing {
        d21,
        tau,
        n_a: n_a.min(n_b),
        n_b: n_a.max(n_b),
        on_boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn memory(d21: f64) -> Linearization {
        linearize(&ModelParams::baseline(Variant::MemoryOnly, d21)).unwrap()
    }

    #[test]
    fn zero_mode_without_delay_is_trace_determinant_form() {
        let lin = linearize(&ModelParams::baseline(Variant::MemoryPlusGestation, 3.0)).unwrap();
        let lam = c(0.3, -0.7);
        let a = lin.with_delay_coupling_instantaneous();
        let expect = lam * lam - lam * (a.a11 + a.a22) + a.det_a1();
        assert!((char_residual(&lin, 0, 0.0, lam) - expect).norm() < 1e-14);
    }

    #[test]
    fn zero_coupling_has_no_frequency() {
        let sl = slice(&memory(0.0), 2);
        assert!((sl.q - sl.j * sl.j).abs() < 1e-15);
        assert!(sl.omega.is_none());
    }

    #[test]
    fn frequency_solves_quartic() {
        let sl = slice(&memory(21.0), 2);
        let w = sl.omega.unwrap();
        let w2 = w * w;
        assert!((w2 * w2 + sl.p * w2 + sl.q).abs() < 1e-12);
    }

    #[test]
    fn delay_ladder_spacing() {
        let sl = slice(&memory(21.0), 2);
        let taus = critical_delays(&sl, 4).unwrap();
        let gap = 2.0 * PI / sl.omega.unwrap();
        for w in taus.windows(2) {
            assert!((w[1] - w[0] - gap).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_frequency_is_an_error() {
        let sl = slice(&memory(1.0), 2);
        assert!(matches!(
            critical_delays(&sl, 0),
            Err(Error::NoHopfFrequency { n: 2 })
        ));
    }

    #[test]
    fn window_too_small_is_rejected() {
        let lin = memory(21.0);
        assert!(matches!(
            d21_thresholds(&lin, 1),
            Err(Error::ThresholdWindow { .. })
        ));
        assert!(d21_thresholds(&lin, 2).is_ok());
    }

    #[test]
    fn thresholds_refuse_gestation_variant() {
        let lin = linearize(&ModelParams::baseline(Variant::MemoryPlusGestation, 3.0)).unwrap();
        assert!(matches!(
            d21_thresholds(&lin, 32),
            Err(Error::WrongVariant { .. })
        ));
    }

    #[test]
    fn index_set_matches_negative_q() {
        let lin = memory(43.0);
        let set = index_set(&lin);
        for n in 1..40 {
            assert_eq!(set.contains(&n), slice(&lin, n).q < 0.0, "n = {n}");
        }
    }

    #[test]
    fn n_star_rule() {
        assert_eq!(n_star_from(3.0), 2);
        assert_eq!(n_star_from(3.4), 3);
        assert_eq!(n_star_from(0.6), 0);
    }

    #[test]
    fn discriminant_boundary_is_not_c11() {
        let lin = Linearization {
            a11: -1.0,
            a12: -1.0,
            a21: 0.0,
            a22: -1.0,
            b11: 0.0,
            b12: 0.0,
            b21: 0.0,
            b22: 0.0,
            d11: 1.0,
            d22: 1.0,
            d21: 4.0,
            u_star: 1.0,
            v_star: 1.0,
            ell: 1.0,
            variant: Variant::MemoryPlusGestation,
        };
        let g = gestation_cases(&lin);
        assert_eq!(g.disc, 0.0);
        assert!(!g.c11 && g.c21);
    }

    #[test]
    fn scan_below_threshold_is_empty() {
        let p = ModelParams::baseline(Variant::MemoryOnly, 0.0);
        let scan = hopf_curve_scan(&p, 5.0, 10.0, 0.5).unwrap();
        assert!(scan.points.is_empty() && scan.crossings.is_empty());
    }
}
