//! Third-order Hopf normal form on the center manifold.
//!
//! Time is rescaled by `τ_c`, so the delay becomes 1 and the critical
//! eigenvalues are `±iω_c` with `ω_c = τ_c ω_{n_c}`. Functions on `[−1, 0]`
//! are exponential sums, so only their values at `θ = 0` and `θ = −1`
//! enter the coefficients.
//!
//! The reduced flow in polar form is `ρ̇ = K1 μ ρ + K2 ρ³` with
//! `K1 = Re B1 / 2` and `K2 = Re B2 / 6`.

pub mod memory_only;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, re, CMat2, CVec2};
use crate::model::{derivative_table, linearize, DerivativeTable, Linearization, ModelParams};
use crate::spectral::HopfPoint;

/// Floor on eigenvector denominators.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// A function on `[−1, 0]` sampled at `θ = 0` and `θ = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sampled {
    pub at0: CVec2,
    pub at_m1: CVec2,
}

impl Sampled {
    pub const ZERO: Sampled = Sampled {
        at0: CVec2::ZERO,
        at_m1: CVec2::ZERO,
    };

    pub fn conj(&self) -> Sampled {
        Sampled {
            at0: self.at0.conj(),
            at_m1: self.at_m1.conj(),
        }
    }

    /// Arguments of the reaction terms: `(x1(0), x2(0), x1(−1))`.
    pub fn args(&self) -> [Complex64; 3] {
        [self.at0.x(), self.at0.y(), self.at_m1.x()]
    }
}

/// One term `coeff · e^{rate θ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coeff: CVec2,
    pub rate: Complex64,
}

/// Finite sum of vector exponentials in `θ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpSum {
    pub terms: Vec<ExpTerm>,
}

impl ExpSum {
    pub fn zero() -> Self {
        ExpSum { terms: Vec::new() }
    }

    pub fn single(coeff: CVec2, rate: Complex64) -> Self {
        ExpSum {
            terms: vec![ExpTerm { coeff, rate }],
        }
    }

    pub fn push(&mut self, coeff: CVec2, rate: Complex64) {
        self.terms.push(ExpTerm { coeff, rate });
    }

    pub fn eval(&self, theta: f64) -> CVec2 {
        self.terms
            .iter()
            .fold(CVec2::ZERO, |acc, t| acc + t.coeff * (t.rate * theta).exp())
    }

    pub fn derivative(&self, theta: f64) -> CVec2 {
        self.terms.iter().fold(CVec2::ZERO, |acc, t| {
            acc + t.coeff * (t.rate * (t.rate * theta).exp())
        })
    }

    pub fn sampled(&self) -> Sampled {
        Sampled {
            at0: self.eval(0.0),
            at_m1: self.eval(-1.0),
        }
    }

    /// θ-independent when every term has zero rate.
    pub fn is_flat(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.rate == re(0.0) || t.coeff.norm_inf() == 0.0)
    }
}

/// `∫_{−1}^{0} e^{rate·t} dt`.
pub fn exp_integral(rate: Complex64) -> Complex64 {
    if rate.norm() == 0.0 {
        return re(1.0);
    }
    (re(1.0) - (-rate).exp()) / rate
}

/// `M̃_n(λ) = λI + τ(n/ℓ)²(D1 + e^{−λ}D2) − τA1 − τA2 e^{−λ}`.
pub fn rescaled_matrix(lin: &Linearization, tau: f64, n: u32, lambda: Complex64) -> CMat2 {
    let k = lin.k(n);
    let e = (-lambda).exp();
    let (a1, a2, d1, d2) = (lin.a1(), lin.a2(), lin.d1(), lin.d2());
    let mut m = CMat2::default();
    for r in 0..2 {
        for col in 0..2 {
            let diag = if r == col { lambda } else { re(0.0) };
            m.0[r][col] = diag
                + re(tau * (k * d1[r][col] - a1[r][col]))
                + e * (tau * (k * d2[r][col] - a2[r][col]));
        }
    }
    m
}

fn mat_vec(m: [[f64; 2]; 2], v: CVec2) -> CVec2 {
    CMat2::from_real(m).mul_vec(&v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenData {
    /// Right eigenvector with `φ1 = 1`.
    pub phi: CVec2,
    /// Adjoint eigenvector scaled by `η`.
    pub psi: CVec2,
    pub eta: Complex64,
    /// `φ2`.
    pub k1: Complex64,
    /// Second component of the unscaled adjoint vector.
    pub k2: Complex64,
    pub omega_c: f64,
    pub tau_c: f64,
    pub n_c: u32,
}

impl EigenData {
    /// `φ(θ) = φ e^{iω_c θ}` at `θ = 0, −1`.
    pub fn phi_sampled(&self) -> Sampled {
        Sampled {
            at0: self.phi,
            at_m1: self.phi * c(0.0, -self.omega_c).exp(),
        }
    }

    pub fn phi_at(&self, theta: f64) -> CVec2 {
        self.phi * c(0.0, self.omega_c * theta).exp()
    }

    pub fn psi_at(&self, s: f64) -> CVec2 {
        self.psi * c(0.0, -self.omega_c * s).exp()
    }
}

pub fn eigen_data(lin: &Linearization, hp: &HopfPoint) -> Result<EigenData> {
    let (n, tau, w) = (hp.n_c, hp.tau_c, hp.omega_nc);
    let k = lin.k(n);
    let e = c(0.0, -hp.omega_c).exp();
    let iw = c(0.0, w);
    let den1 = re(lin.a12) + e * lin.b12;
    if den1.norm() < EIGEN_FLOOR {
        return Err(Error::NearSingularEigen {
            magnitude: den1.norm(),
        });
    }
    let den2 = iw + lin.d22 * k - lin.a22 - e * lin.b22;
    if den2.norm() < EIGEN_FLOOR {
        return Err(Error::NearSingularEigen {
            magnitude: den2.norm(),
        });
    }
    let k1 = (iw + lin.d11 * k - lin.a11 - e * lin.b11) / den1;
    let k2 = den1 / den2;
    let phi = CVec2::new(re(1.0), k1);
    let psi0 = CVec2::new(re(1.0), k2);
    // ⟨ψ, φ⟩ = ψ·φ + e^{−iω_c} ψᵀ(τA2 − τkD2)φ for exponential eigenfunctions.
    let a2 = lin.a2();
    let d2 = lin.d2();
    let delayed = [
        [
            tau * (a2[0][0] - k * d2[0][0]),
            tau * (a2[0][1] - k * d2[0][1]),
        ],
        [
            tau * (a2[1][0] - k * d2[1][0]),
            tau * (a2[1][1] - k * d2[1][1]),
        ],
    ];
    let eta = re(1.0) / (psi0.dot(&phi) + e * psi0.dot(&mat_vec(delayed, phi)));
    Ok(EigenData {
        phi,
        psi: psi0 * eta,
        eta,
        k1,
        k2,
        omega_c: hp.omega_c,
        tau_c: tau,
        n_c: n,
    })
}

/// `D²F(a, b)` over the arguments `(x1(0), x2(0), x1(−1))`.
pub fn f2(table: &DerivativeTable, a: &Sampled, b: &Sampled) -> CVec2 {
    let (x, y) = (a.args(), b.args());
    let mut out = CVec2::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            let d = table.second[i][j];
            let w = x[i] * y[j];
            out = out + CVec2::new(w * d[0], w * d[1]);
        }
    }
    out
}

/// `D³F(a, b, c)` over the arguments `(x1(0), x2(0), x1(−1))`.
pub fn f3(table: &DerivativeTable, a: &Sampled, b: &Sampled, cc: &Sampled) -> CVec2 {
    let (x, y, z) = (a.args(), b.args(), cc.args());
    let mut out = CVec2::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                let d = table.third[i][j][l];
                let w = x[i] * y[j] * z[l];
                out = out + CVec2::new(w * d[0], w * d[1]);
            }
        }
    }
    out
}

/// `S2(a, b) = 2 D²F(a, b)`.
pub fn s2_products(table: &DerivativeTable, a: &Sampled, b: &Sampled) -> CVec2 {
    f2(table, a, b) * 2.0
}

/// Cross-diffusion products `S2^(d,j)` for `j ∈ {1, 2, 3}`:
/// `j = 1` pairs `a1(−1) b2(0)`, `j = 3` pairs `a2(0) b1(−1)`, `j = 2` is their sum.
pub fn s2_cross(d21: f64, tau: f64, j: u8, a: &Sampled, b: &Sampled) -> CVec2 {
    let first = a.at_m1.x() * b.at0.y();
    let third = a.at0.y() * b.at_m1.x();
    let s = match j {
        1 => first,
        2 => first + third,
        3 => third,
        _ => panic!("cross-diffusion product index {j} is not 1, 2 or 3"),
    };
    CVec2::new(re(0.0), s * (-2.0 * d21 * tau))
}

/// Coefficient vectors of the quadratic and cubic terms on the center manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffSet {
    pub a20: CVec2,
    pub a02: CVec2,
    pub a11: CVec2,
    pub a30: CVec2,
    pub a03: CVec2,
    pub a21: CVec2,
    pub a12: CVec2,
    pub a20_d: CVec2,
    pub a11_d: CVec2,
    pub a02_d: CVec2,
    pub atilde20: CVec2,
    pub atilde11: CVec2,
}

pub fn coeff_set(table: &DerivativeTable, ed: &EigenData, lin: &Linearization) -> CoeffSet {
    let p = ed.phi_sampled();
    let q = p.conj();
    let a20 = f2(table, &p, &p);
    let a02 = f2(table, &q, &q);
    let a11 = f2(table, &p, &q) * 2.0;
    let a30 = f3(table, &p, &p, &p);
    let a03 = f3(table, &q, &q, &q);
    let a21 = f3(table, &p, &p, &q) * 3.0;
    let a12 = f3(table, &p, &q, &q) * 3.0;
    let s = -2.0 * lin.d21 * ed.tau_c;
    let a20_d = CVec2::new(re(0.0), p.at_m1.x() * p.at0.y() * s);
    let a02_d = a20_d.conj();
    let a11_d = CVec2::new(re(0.0), re(s * 2.0 * (p.at_m1.x() * p.at0.y().conj()).re));
    let k = lin.k(ed.n_c);
    CoeffSet {
        a20,
        a02,
        a11,
        a30,
        a03,
        a21,
        a12,
        a20_d,
        a11_d,
        a02_d,
        atilde20: a20 - a20_d * (2.0 * k),
        atilde11: a11 - a11_d * (2.0 * k),
    }
}

/// Quadratic center-manifold corrections for modes `0` and `2n_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterManifoldH {
    pub h020: ExpSum,
    pub h011: ExpSum,
    pub h2n20: ExpSum,
    pub h2n11: ExpSum,
    /// Constants `C1..C6`; `C1..C4` for `n_c ≥ 1`, `C5, C6` for `n_c = 0`.
    pub constants: [Option<CVec2>; 6],
}

/// `∫_{−1}^{0} e^{−2iω_c t} Φ(t)Ψ(0) A dt` split over the `φ` and `φ̄` parts.
pub fn projection_integral_20(ed: &EigenData, a: &CVec2) -> CVec2 {
    let w = ed.omega_c;
    let g = ed.psi.dot(a);
    let gb = ed.psi.conj().dot(a);
    ed.phi * (g * exp_integral(c(0.0, -w))) + ed.phi.conj() * (gb * exp_integral(c(0.0, -3.0 * w)))
}

/// `∫_{−1}^{0} Φ(t)Ψ(0) A dt`.
pub fn projection_integral_11(ed: &EigenData, a: &CVec2) -> CVec2 {
    let w = ed.omega_c;
    let g = ed.psi.dot(a);
    let gb = ed.psi.conj().dot(a);
    ed.phi * (g * exp_integral(c(0.0, w))) + ed.phi.conj() * (gb * exp_integral(c(0.0, -w)))
}

pub fn center_manifold_h(
    cs: &CoeffSet,
    ed: &EigenData,
    lin: &Linearization,
) -> Result<CenterManifoldH> {
    let (tau, w, n) = (ed.tau_c, ed.omega_c, ed.n_c);
    let lp = lin.ell * PI;
    let (r1, r2) = (lp.sqrt().recip(), (2.0 * lp).sqrt().recip());
    let two_iw = c(0.0, 2.0 * w);
    let zero = re(0.0);
    if n >= 1 {
        let c1 = rescaled_matrix(lin, tau, 0, two_iw).solve(&(cs.a20 * r1))?;
        let c2 = rescaled_matrix(lin, tau, 0, zero).solve(&(cs.a11 * r1))?;
        let c3 = rescaled_matrix(lin, tau, 2 * n, two_iw).solve(&(cs.atilde20 * r2))?;
        let c4 = rescaled_matrix(lin, tau, 2 * n, zero).solve(&(cs.atilde11 * r2))?;
        return Ok(CenterManifoldH {
            h020: ExpSum::single(c1, two_iw),
            h011: ExpSum::single(c2, zero),
            h2n20: ExpSum::single(c3, two_iw),
            h2n11: ExpSum::single(c4, zero),
            constants: [Some(c1), Some(c2), Some(c3), Some(c4), None, None],
        });
    }

    let iw = c(0.0, w);
    let (phi, phib) = (ed.phi, ed.phi.conj());
    let (psi, psib) = (ed.psi, ed.psi.conj());
    let a2 = CMat2::from_real(lin.a2());

    // h_{0,20}: particular solution of ḣ = 2iω_c h − Φ(θ)Ψ(0)A20/√(ℓπ).
    let g20 = psi.dot(&cs.a20);
    let g02b = psib.dot(&cs.a20);
    let proj20 = phi * g20 + phib * g02b;
    let i20 = projection_integral_20(ed, &cs.a20);
    let rhs5 = (cs.a20 - proj20) * r1 - a2.mul_vec(&i20) * (c(0.0, -2.0 * w).exp() * tau * r1);
    let c5 = rescaled_matrix(lin, tau, 0, two_iw).solve(&rhs5)?;
    let p20 = phi * (g20 * r1 / iw);
    let q20 = phib * (g02b * r1 / (3.0 * iw));
    let mut h020 = ExpSum::single(c5 + p20 + q20, two_iw);
    h020.push(-p20, iw);
    h020.push(-q20, -iw);

    // h_{0,11}: particular solution of ḣ = −Φ(θ)Ψ(0)A11/√(ℓπ).
    let g11 = psi.dot(&cs.a11);
    let g11b = psib.dot(&cs.a11);
    let proj11 = phi * g11 + phib * g11b;
    let i11 = projection_integral_11(ed, &cs.a11);
    let rhs6 = (cs.a11 - proj11) * r1 - a2.mul_vec(&i11) * (tau * r1);
    let c6 = rescaled_matrix(lin, tau, 0, zero).solve(&rhs6)?;
    let p11 = phi * (g11 * r1 / iw);
    let q11 = phib * (g11b * r1 / (-iw));
    let mut h011 = ExpSum::single(c6 - p11 - q11, zero);
    h011.push(p11, iw);
    h011.push(q11, -iw);

    Ok(CenterManifoldH {
        h020,
        h011,
        h2n20: ExpSum::zero(),
        h2n11: ExpSum::zero(),
        constants: [None, None, None, None, Some(c5), Some(c6)],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Supercritical,
    Subcritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStability {
    Stable,
    Unstable,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Supercritical => "supercritical",
            Direction::Subcritical => "subcritical",
        }
    }
}

impl OrbitStability {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrbitStability::Stable => "stable",
            OrbitStability::Unstable => "unstable",
        }
    }
}

/// Supercritical iff `K1 K2 < 0`; the orbit is stable iff `K2 < 0`.
pub fn classify(k1: f64, k2: f64) -> (Direction, OrbitStability) {
    let dir = if k1 * k2 < 0.0 {
        Direction::Supercritical
    } else {
        Direction::Subcritical
    };
    let stab = if k2 < 0.0 {
        OrbitStability::Stable
    } else {
        OrbitStability::Unstable
    };
    (dir, stab)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFormResult {
    pub b1: Complex64,
    pub b21: Complex64,
    pub b22: Complex64,
    pub b23: Complex64,
    pub b24: Complex64,
    pub b2: Complex64,
    pub k1: f64,
    pub k2: f64,
    pub direction: Direction,
    pub orbit_stability: OrbitStability,
}

impl NormalFormResult {
    pub fn from_parts(
        b1: Complex64,
        b21: Complex64,
        b22: Complex64,
        b23: Complex64,
        b24: Complex64,
    ) -> Self {
        let b2 = b21 + (b22 + b23 + b24) * 1.5;
        let k1 = b1.re / 2.0;
        let k2 = b2.re / 6.0;
        let (direction, orbit_stability) = classify(k1, k2);
        NormalFormResult {
            b1,
            b21,
            b22,
            b23,
            b24,
            b2,
            k1,
            k2,
            direction,
            orbit_stability,
        }
    }

    /// Label such as `subcritical-unstable`.
    pub fn class_label(&self) -> String {
        format!(
            "{}-{}",
            self.direction.as_str(),
            self.orbit_stability.as_str()
        )
    }
}

/// `B1 = 2ψᵀ(A1φ + A2φ(−1) − (n_c/ℓ)²(D1φ + D2φ(−1)))`.
pub fn b1_coefficient(ed: &EigenData, lin: &Linearization) -> Complex64 {
    let p = ed.phi_sampled();
    let k = lin.k(ed.n_c);
    let lin_part = mat_vec(lin.a1(), p.at0) + mat_vec(lin.a2(), p.at_m1)
        - (mat_vec(lin.d1(), p.at0) + mat_vec(lin.d2(), p.at_m1)) * k;
    ed.psi.dot(&lin_part) * 2.0
}

pub fn b_coefficients(
    cs: &CoeffSet,
    hh: &CenterManifoldH,
    ed: &EigenData,
    lin: &Linearization,
    table: &DerivativeTable,
) -> NormalFormResult {
    let lp = lin.ell * PI;
    let (r1, r2) = (lp.sqrt().recip(), (2.0 * lp).sqrt().recip());
    let psi = ed.psi;
    let p = ed.phi_sampled();
    let q = p.conj();
    let (h020, h011) = (hh.h020.sampled(), hh.h011.sampled());
    let b1 = b1_coefficient(ed, lin);

    if ed.n_c == 0 {
        let b21 = psi.dot(&cs.a21) / lp;
        let g20 = psi.dot(&cs.a20);
        let g11 = psi.dot(&cs.a11);
        let g02 = psi.dot(&cs.a02);
        let b22 = (-g20 * g11 + g11.norm_sqr() + (2.0 / 3.0) * g02.norm_sqr())
            / (c(0.0, ed.omega_c) * lp);
        let b23 = psi.dot(&(s2_products(table, &p, &h011) + s2_products(table, &q, &h020))) * r1;
        return NormalFormResult::from_parts(b1, b21, b22, b23, re(0.0));
    }

    let k = lin.k(ed.n_c);
    let (h2n20, h2n11) = (hh.h2n20.sampled(), hh.h2n11.sampled());
    let (d21, tau) = (lin.d21, ed.tau_c);
    let b21 = psi.dot(&cs.a21) * (3.0 / (2.0 * lp));
    let b23 = psi.dot(&(s2_products(table, &p, &h011) + s2_products(table, &q, &h020))) * r1
        + psi.dot(&(s2_products(table, &p, &h2n11) + s2_products(table, &q, &h2n20))) * r2;
    let low =
        psi.dot(&(s2_cross(d21, tau, 1, &p, &h011) + s2_cross(d21, tau, 1, &q, &h020))) * (-k * r1);
    let weights = [-k, 2.0 * k, -4.0 * k];
    let high = (1u8..=3)
        .zip(weights)
        .map(|(j, b)| {
            psi.dot(&(s2_cross(d21, tau, j, &p, &h2n11) + s2_cross(d21, tau, j, &q, &h2n20))) * b
        })
        .sum::<Complex64>()
        * r2;
    NormalFormResult::from_parts(b1, b21, re(0.0), b23, low + high)
}

/// Every intermediate of one normal-form computation.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormDetail {
    pub hopf: HopfPoint,
    pub eigen: EigenData,
    pub coeffs: CoeffSet,
    pub h: CenterManifoldH,
    pub result: NormalFormResult,
}

/// Runs the general path from a linearisation and a matching derivative table.
pub fn compute(
    lin: &Linearization,
    table: &DerivativeTable,
    hp: &HopfPoint,
) -> Result<NormalFormDetail> {
    let eigen = eigen_data(lin, hp)?;
    let coeffs = coeff_set(table, &eigen, lin);
    let h = center_manifold_h(&coeffs, &eigen, lin)?;
    let result = b_coefficients(&coeffs, &h, &eigen, lin, table);
    Ok(NormalFormDetail {
        hopf: *hp,
        eigen,
        coeffs,
        h,
        result,
    })
}

/// Normal form of the model at the given Hopf point.
pub fn normal_form(params: &ModelParams, hp: &HopfPoint) -> Result<NormalFormDetail> {
    let lin = linearize(params)?;
    let table = derivative_table(params, hp.tau_c)?;
    compute(&lin, &table, hp)
}
