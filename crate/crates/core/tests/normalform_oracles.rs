//! Adjoint pairing, projection integrals and the cubic coefficient checked
//! against quadrature and an independent Galerkin/Lyapunov computation.

use memhopf::linalg::CVec2;
use memhopf::model::*;
use memhopf::normalform::{
    self, eigen_data, memory_only, projection_integral_11, projection_integral_20, EigenData,
};
use memhopf::spectral::*;
use memhopf::HopfPoint;
use memhopf_validation::{amplitude_sq_from_normal_form, lyapunov_oracle, random_admissible};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Composite Simpson rule on `[−1, 0]`.
fn simpson<F: Fn(f64) -> Complex64>(f: F) -> Complex64 {
    let n = 2000;
    let h = 1.0 / n as f64;
    let mut acc = f(-1.0) + f(0.0);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(-1.0 + i as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// `⟨ψ, φ⟩ = ψ(0)·φ(0) + ∫_{−1}^0 ψ(ξ+1)ᵀ τ(A2 − kD2) φ(ξ) dξ` with `ψ`, `φ`
/// given as functions on their own intervals.
fn pairing(
    lin: &Linearization,
    ed: &EigenData,
    psi: impl Fn(f64) -> CVec2,
    phi: impl Fn(f64) -> CVec2,
) -> Complex64 {
    let k = lin.k(ed.n_c);
    let (a2, d2) = (lin.a2(), lin.d2());
    let m = |r: usize, c: usize| ed.tau_c * (a2[r][c] - k * d2[r][c]);
    psi(0.0).dot(&phi(0.0))
        + simpson(|xi| {
            let (s, f) = (psi(xi + 1.0), phi(xi));
            let mf = CVec2::new(
                f.x() * m(0, 0) + f.y() * m(0, 1),
                f.x() * m(1, 0) + f.y() * m(1, 1),
            );
            s.dot(&mf)
        })
}

fn assert_biorthonormal(lin: &Linearization, hp: &HopfPoint) {
    let ed = eigen_data(lin, hp).unwrap();
    let psi = |s: f64| ed.psi_at(s);
    let psib = |s: f64| ed.psi_at(s).conj();
    let phi = |t: f64| ed.phi_at(t);
    let phib = |t: f64| ed.phi_at(t).conj();
    let g = [
        [pairing(lin, &ed, psi, phi), pairing(lin, &ed, psi, phib)],
        [pairing(lin, &ed, psib, phi), pairing(lin, &ed, psib, phib)],
    ];
    for (r, row) in g.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let want = if r == c { 1.0 } else { 0.0 };
            assert!(
                (v - want).norm() <= 1e-8,
                "⟨Ψ,Φ⟩[{r}][{c}] = {v} at n={} tau={}",
                hp.n_c,
                hp.tau_c
            );
        }
    }
}

#[test]
fn adjoint_pairing_is_identity_at_anchor_points() {
    for (variant, d21) in [
        (Variant::MemoryOnly, 21.0),
        (Variant::MemoryOnly, 43.0),
        (Variant::MemoryPlusGestation, 3.6),
    ] {
        let p = ModelParams::baseline(variant, d21);
        let lin = linearize(&p).unwrap();
        for hp in critical_set(&p).unwrap().points {
            assert_biorthonormal(&lin, &hp);
        }
        for n in index_set(&lin).into_iter().take(4) {
            assert_biorthonormal(&lin, &hopf_point(&lin, n, 1).unwrap());
        }
    }
}

#[test]
fn adjoint_pairing_is_identity_on_random_sets() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..30 {
        let (p, hp) = random_admissible(&mut rng);
        assert_biorthonormal(&linearize(&p).unwrap(), &hp);
    }
}

#[test]
fn projection_integrals_match_quadrature() {
    let p = ModelParams::baseline(Variant::MemoryOnly, 21.0);
    let lin = linearize(&p).unwrap();
    let hp = hopf_point(&lin, 2, 0).unwrap();
    let ed = eigen_data(&lin, &hp).unwrap();
    let a = CVec2::new(Complex64::new(0.3, -1.2), Complex64::new(-0.7, 0.4));
    let w = ed.omega_c;
    let kernel =
        |t: f64| ed.phi_at(t) * ed.psi.dot(&a) + ed.phi_at(t).conj() * ed.psi.conj().dot(&a);
    let i20 = [0, 1].map(|c| {
        simpson(|t| {
            let v = kernel(t) * Complex64::new(0.0, -2.0 * w * t).exp();
            if c == 0 {
                v.x()
            } else {
                v.y()
            }
        })
    });
    let i11 = [0, 1].map(|c| {
        simpson(|t| {
            let v = kernel(t);
            if c == 0 {
                v.x()
            } else {
                v.y()
            }
        })
    });
    let (g20, g11) = (
        projection_integral_20(&ed, &a),
        projection_integral_11(&ed, &a),
    );
    assert!((g20.x() - i20[0]).norm() < 1e-10 && (g20.y() - i20[1]).norm() < 1e-10);
    assert!((g11.x() - i11[0]).norm() < 1e-10 && (g11.y() - i11[1]).norm() < 1e-10);
}

/// Bifurcating amplitude² per unit delay offset from the normal form must
/// match the Galerkin/Lyapunov oracle, which fixes both `K2/K1` and its sign.
fn amplitude_ratio(p: &ModelParams, hp: &HopfPoint) -> f64 {
    let nf = normalform::normal_form(p, hp).unwrap().result;
    let oracle = lyapunov_oracle(p, hp.n_c, hp.omega_nc, hp.tau_c);
    amplitude_sq_from_normal_form(p, hp.n_c, nf.k1, nf.k2) / oracle.amplitude_sq_per_delay
}

#[test]
fn cubic_coefficient_matches_lyapunov_oracle_at_anchors() {
    for (variant, d21, n) in [
        (Variant::MemoryOnly, 21.0, 2),
        (Variant::MemoryOnly, 43.0, 3),
        (Variant::MemoryOnly, 43.0, 2),
        (Variant::MemoryPlusGestation, 3.6, 0),
    ] {
        let p = ModelParams::baseline(variant, d21);
        let hp = hopf_point(&linearize(&p).unwrap(), n, 0).unwrap();
        let r = amplitude_ratio(&p, &hp);
        assert!(
            (r - 1.0).abs() < 1e-5,
            "{variant:?} d21={d21} n={n}: ratio {r}"
        );
    }
}

#[test]
fn cubic_coefficient_matches_lyapunov_oracle_on_random_sets() {
    let mut rng = StdRng::seed_from_u64(99);
    for case in 0..12 {
        let (p, hp) = random_admissible(&mut rng);
        let r = amplitude_ratio(&p, &hp);
        assert!(
            (r - 1.0).abs() < 1e-5,
            "case {case} {p:?} n={}: ratio {r}",
            hp.n_c
        );
    }
}

#[test]
fn general_and_memory_only_paths_agree() {
    for d21 in [21.0, 43.0, 60.0] {
        let p = ModelParams::baseline(Variant::MemoryOnly, d21);
        for hp in critical_set(&p).unwrap().points {
            let g = normalform::normal_form(&p, &hp).unwrap().result;
            let m = memory_only::normal_form(&p, &hp).unwrap().result;
            for (a, b) in [
                (g.b1, m.b1),
                (g.b21, m.b21),
                (g.b22, m.b22),
                (g.b23, m.b23),
                (g.b24, m.b24),
            ] {
                assert!(
                    (a - b).norm() <= 1e-9 * b.norm().max(1.0),
                    "d21={d21}: {a} vs {b}"
                );
            }
        }
    }
}

#[test]
fn memory_only_path_rejects_other_inputs() {
    let p = ModelParams::baseline(Variant::MemoryPlusGestation, 3.6);
    let hp = critical_set(&p).unwrap().points[0];
    assert!(memory_only::normal_form(&p, &hp).is_err());
}
