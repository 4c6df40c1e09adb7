//! Steady state, linearisation and derivative tables against finite differences.

use memhopf::model::*;
use memhopf_validation::{close, fd_partial, random_params, reaction, steady};
use proptest::prelude::*;

const ARGS: [usize; 3] = [ARG_U, ARG_V, ARG_U_DELAYED];

fn jacobian_fd(p: &ModelParams) -> [[[f64; 2]; 3]; 1] {
    let s = steady(p);
    let h = 1e-6;
    let mut out = [[[0.0; 2]; 3]; 1];
    for i in 0..3 {
        let mut yp = [s, s, s];
        let mut ym = [s, s, s];
        yp[i] += h;
        ym[i] -= h;
        let (a, b) = (
            reaction(p, yp[0], yp[1], yp[2]),
            reaction(p, ym[0], ym[1], ym[2]),
        );
        out[0][i] = [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)];
    }
    out
}

#[allow(clippy::needless_range_loop)]
fn table_matches_fd(p: &ModelParams, tau: f64, rel: f64) -> Result<(), String> {
    let t = derivative_table(p, tau).unwrap();
    let scale = t
        .second
        .iter()
        .flatten()
        .flatten()
        .chain(t.third.iter().flatten().flatten().flatten())
        .fold(0.0f64, |a, b| a.max(b.abs()));
    for i in ARGS {
        for j in ARGS {
            let fd = fd_partial(p, &[i, j]);
            for k in 0..2 {
                if !close(t.second[i][j][k], tau * fd[k], rel, 1e-3 * scale) {
                    return Err(format!(
                        "second[{i}][{j}][{k}] = {} vs {}",
                        t.second[i][j][k],
                        tau * fd[k]
                    ));
                }
            }
            for l in ARGS {
                let fd = fd_partial(p, &[i, j, l]);
                for k in 0..2 {
                    if !close(t.third[i][j][l][k], tau * fd[k], rel, 1e-3 * scale) {
                        return Err(format!(
                            "third[{i}][{j}][{l}][{k}] = {} vs {}",
                            t.third[i][j][l][k],
                            tau * fd[k]
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

#[test]
fn worked_example_linearisation() {
    let lin = linearize(&ModelParams::baseline(Variant::MemoryOnly, 21.0)).unwrap();
    assert!((lin.u_star - 1.0 / 3.0).abs() < 1e-15);
    assert!((lin.a11 + 1.0 / 9.0).abs() < 1e-14);
    assert!((lin.a12 + 2.0 / 9.0).abs() < 1e-14);
    assert_eq!((lin.a21, lin.a22), (0.5, -0.5));
    assert!((lin.d2()[1][0] + 7.0).abs() < 1e-14);
}

#[test]
fn linearisation_matches_finite_differences() {
    for variant in [Variant::MemoryOnly, Variant::MemoryPlusGestation] {
        let p = ModelParams::baseline(variant, 3.6);
        let lin = linearize(&p).unwrap();
        let [jac] = jacobian_fd(&p);
        let analytic = [[lin.a11, lin.a21], [lin.a12, lin.a22], [lin.b11, lin.b21]];
        for i in 0..3 {
            for k in 0..2 {
                assert!(
                    (jac[i][k] - analytic[i][k]).abs() < 1e-8,
                    "{variant:?} arg {i} comp {k}"
                );
            }
        }
    }
}

#[test]
fn memory_only_closed_forms_match_general_table() {
    let p = ModelParams::baseline(Variant::MemoryOnly, 21.0);
    let g = derivative_table(&p, 2.5)
        .unwrap()
        .fold_delayed_into_current();
    let m = memory_only_table(&p, 2.5).unwrap();
    let pairs = [
        (m.f20, g.f(2, 0, 0)),
        (m.f11, g.f(1, 1, 0)),
        (m.f02, g.f(0, 2, 0)),
        (m.f30, g.f(3, 0, 0)),
        (m.f21, g.f(2, 1, 0)),
        (m.f12, g.f(1, 2, 0)),
        (m.f03, g.f(0, 3, 0)),
    ];
    for (a, b) in pairs {
        for k in 0..2 {
            assert!(
                (a[k] - b[k]).abs() <= 1e-12 * b[k].abs().max(1.0),
                "{a:?} vs {b:?}"
            );
        }
    }
}

#[test]
fn predator_second_derivative_in_gestation_variant() {
    // g = γ v (1 − v/r) gives ∂²g/∂r² = −2γ v²/r³, which is −3 at r = v = 1/3, γ = 1/2.
    let p = ModelParams {
        beta: 1.0,
        m: 0.5,
        gamma: 0.5,
        ..ModelParams::baseline(Variant::MemoryPlusGestation, 0.0)
    };
    let t = derivative_table(&p, 1.0).unwrap();
    assert!((t.f(0, 0, 2)[1] + 3.0).abs() < 1e-12);
    assert!((fd_partial(&p, &[ARG_U_DELAYED, ARG_U_DELAYED])[1] + 3.0).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(100) })]

    #[test]
    fn derivative_tables_match_finite_differences(seed in any::<u64>(), gest in any::<bool>(), tau in 0.1f64..20.0) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let variant = if gest { Variant::MemoryPlusGestation } else { Variant::MemoryOnly };
        let p = random_params(&mut rng, variant);
        prop_assume!(p.validate().is_ok());
        prop_assert!(table_matches_fd(&p, tau, 1e-6).is_ok(), "{:?}", table_matches_fd(&p, tau, 1e-6));
    }

    #[test]
    fn steady_state_zeroes_the_reaction(seed in any::<u64>(), gest in any::<bool>()) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let variant = if gest { Variant::MemoryPlusGestation } else { Variant::MemoryOnly };
        let p = random_params(&mut rng, variant);
        let s = steady_state(&p).unwrap();
        let (f, g) = memhopf::model::reaction(s.u_star, s.v_star, s.u_star, &p);
        prop_assert!(f.abs() < 1e-14 && g.abs() < 1e-14);
    }

    #[test]
    fn a12_sign_follows_m(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut p = random_params(&mut rng, Variant::MemoryOnly);
        p.m = 0.2 + 2.0 * (seed % 1000) as f64 / 1000.0;
        prop_assume!(p.beta < p.m + 1.0);
        let lin = linearize(&p).unwrap();
        prop_assert_eq!(lin.a12 <= 0.0, p.m <= 1.0);
    }

    #[test]
    fn invalid_parameters_are_rejected(beta in -1.0f64..0.0, m in 0.1f64..2.0) {
        prop_assert!(ModelParams::new(Variant::MemoryOnly, beta, m, 0.5, 0.6, 0.8, 1.0, 2.0).is_err());
        prop_assert!(ModelParams::new(Variant::MemoryOnly, m + 1.0, m, 0.5, 0.6, 0.8, 1.0, 2.0).is_err());
    }
}
