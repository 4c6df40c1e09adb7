//! Normal form of the memory-only system written out term by term.
//!
//! This path uses the two-index derivative table `f_jk` in `(u, v)`, has no
//! delayed reaction argument (`A2 = 0`) and requires `n_c ≥ 1`. It is kept
//! independent of the general path so the two can be cross-checked.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{NormalFormResult, Sampled};
use crate::error::{Error, Result};
use crate::linalg::{c, re, CMat2, CVec2};
use crate::model::{
    linearize, memory_only_table, Linearization, MemoryOnlyTable, ModelParams, Variant,
};
use crate::spectral::HopfPoint;

/// Intermediates of the memory-only computation.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryOnlyDetail {
    pub phi: CVec2,
    pub psi: CVec2,
    pub eta: Complex64,
    pub a20: CVec2,
    pub a11: CVec2,
    pub a21: CVec2,
    pub h020: Sampled,
    pub h011: Sampled,
    pub h2n20: Sampled,
    pub h2n11: Sampled,
    pub result: NormalFormResult,
}

/// `M̃_n(λ) = λI + τ(n/ℓ)²D1 + τ(n/ℓ)²e^{−λ}D2 − τA1`.
fn m_tilde(lin: &Linearization, tau: f64, n: u32, lambda: Complex64) -> CMat2 {
    let k = lin.k(n);
    let e = (-lambda).exp();
    let dv = lin.d21 * lin.v_star;
    CMat2([
        [lambda + tau * (k * lin.d11 - lin.a11), re(-tau * lin.a12)],
        [
            re(-tau * lin.a21) - e * (tau * k * dv),
            lambda + tau * (k * lin.d22 - lin.a22),
        ],
    ])
}

/// `S2(x, h) = 2f20 x1 h1 + 2f02 x2 h2 + 2f11 (x1 h2 + x2 h1)`, all at `θ = 0`.
fn s2(t: &MemoryOnlyTable, x: CVec2, h: CVec2) -> CVec2 {
    let (x1, x2, h1, h2) = (x.x(), x.y(), h.x(), h.y());
    let comp =
        |i: usize| (x1 * h1 * t.f20[i] + x2 * h2 * t.f02[i] + (x1 * h2 + x2 * h1) * t.f11[i]) * 2.0;
    CVec2::new(comp(0), comp(1))
}

pub fn compute(
    lin: &Linearization,
    table: &MemoryOnlyTable,
    hp: &HopfPoint,
) -> Result<MemoryOnlyDetail> {
    if lin.variant != Variant::MemoryOnly {
        return Err(Error::WrongVariant {
            expected: "memory-only",
        });
    }
    if hp.n_c == 0 {
        return Err(Error::InvalidParameter {
            name: "n_c",
            value: 0.0,
            reason: "the memory-only path needs n_c >= 1",
        });
    }
    let (n, tau, w, wc) = (hp.n_c, hp.tau_c, hp.omega_nc, hp.omega_c);
    let k = lin.k(n);
    let iw = c(0.0, w);
    let e = c(0.0, -wc).exp();
    let dv = lin.d21 * lin.v_star;
    let lp = lin.ell * PI;
    let (r1, r2) = (lp.sqrt().recip(), (2.0 * lp).sqrt().recip());

    if lin.a12.abs() < super::EIGEN_FLOOR {
        return Err(Error::NearSingularEigen {
            magnitude: lin.a12.abs(),
        });
    }
    let phi = CVec2::new(re(1.0), (iw + k * lin.d11 - lin.a11) / lin.a12);
    let top = iw + k * lin.d22 - lin.a22;
    let eta = top
        / (2.0 * iw + k * lin.d11 - lin.a11 + k * lin.d22 - lin.a22 + e * (tau * lin.a12 * dv * k));
    let psi = CVec2::new(eta, eta * lin.a12 / top);

    let (p1, p2) = (phi.x(), phi.y());
    let (q1, q2) = (p1.conj(), p2.conj());
    let p1m = p1 * e;
    let t = table;

    let comp20 = |i: usize| p1 * p1 * t.f20[i] + p2 * p2 * t.f02[i] + p1 * p2 * (2.0 * t.f11[i]);
    let a20 = CVec2::new(comp20(0), comp20(1));
    let comp11 = |i: usize| {
        p1 * q1 * (2.0 * t.f20[i])
            + p2 * q2 * (2.0 * t.f02[i])
            + (p1 * q2 + q1 * p2) * (2.0 * t.f11[i])
    };
    let a11 = CVec2::new(comp11(0), comp11(1));
    let comp21 = |i: usize| {
        (p1 * p1 * q1 * t.f30[i]
            + p2 * p2 * q2 * t.f03[i]
            + (p1 * p1 * q2 + p1 * q1 * p2 * 2.0) * t.f21[i]
            + (p1 * p2 * q2 * 2.0 + q1 * p2 * p2) * t.f12[i])
            * 3.0
    };
    let a21 = CVec2::new(comp21(0), comp21(1));

    let a20_d = CVec2::new(re(0.0), p1m * p2 * (-2.0 * lin.d21 * tau));
    let a11_d = CVec2::new(re(0.0), re(-2.0 * lin.d21 * tau * 2.0 * (p1m * q2).re));
    let at20 = a20 - a20_d * (2.0 * k);
    let at11 = a11 - a11_d * (2.0 * k);

    let two_iwc = c(0.0, 2.0 * wc);
    let e2 = c(0.0, -2.0 * wc).exp();
    let c1 = m_tilde(lin, tau, 0, two_iwc).solve(&(a20 * r1))?;
    let c2 = m_tilde(lin, tau, 0, re(0.0)).solve(&(a11 * r1))?;
    let c3 = m_tilde(lin, tau, 2 * n, two_iwc).solve(&(at20 * r2))?;
    let c4 = m_tilde(lin, tau, 2 * n, re(0.0)).solve(&(at11 * r2))?;
    let h020 = Sampled {
        at0: c1,
        at_m1: c1 * e2,
    };
    let h011 = Sampled { at0: c2, at_m1: c2 };
    let h2n20 = Sampled {
        at0: c3,
        at_m1: c3 * e2,
    };
    let h2n11 = Sampled { at0: c4, at_m1: c4 };

    let b1 = psi.dot(
        &(CMat2::from_real(lin.a1()).mul_vec(&phi)
            - (CMat2::from_real(lin.d1()).mul_vec(&phi)
                + CMat2::from_real(lin.d2()).mul_vec(&(phi * e)))
                * k),
    ) * 2.0;
    let b21 = psi.dot(&a21) * (3.0 / (2.0 * lp));
    let phib = phi.conj();
    let b23 = psi.dot(&(s2(t, phi, h011.at0) + s2(t, phib, h020.at0))) * r1
        + psi.dot(&(s2(t, phi, h2n11.at0) + s2(t, phib, h2n20.at0))) * r2;

    let s = -2.0 * lin.d21 * tau;
    let q1m = p1m.conj();
    let d1_phi = |h: &Sampled| h.at0.y() * p1m * s;
    let d1_phib = |h: &Sampled| h.at0.y() * q1m * s;
    let d3_phi = |h: &Sampled| p2 * h.at_m1.x() * s;
    let d3_phib = |h: &Sampled| q2 * h.at_m1.x() * s;
    let psi2 = psi.y();
    let low = psi2 * (d1_phi(&h011) + d1_phib(&h020)) * (-k * r1);
    let j1 = d1_phi(&h2n11) + d1_phib(&h2n20);
    let j3 = d3_phi(&h2n11) + d3_phib(&h2n20);
    let j2 = j1 + j3;
    let high = psi2 * (j1 * (-k) + j2 * (2.0 * k) + j3 * (-4.0 * k)) * r2;
    let result = NormalFormResult::from_parts(b1, b21, re(0.0), b23, low + high);

    Ok(MemoryOnlyDetail {
        phi,
        psi,
        eta,
        a20,
        a11,
        a21,
        h020,
        h011,
        h2n20,
        h2n11,
        result,
    })
}

/// Memory-only normal form at the given Hopf point.
pub fn normal_form(params: &ModelParams, hp: &HopfPoint) -> Result<MemoryOnlyDetail> {
    let lin = linearize(params)?;
    let table = memory_only_table(params, hp.tau_c)?;
    compute(&lin, &table, hp)
}
