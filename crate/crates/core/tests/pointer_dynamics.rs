mod common;

use common::{c, random_hermitian, random_state, rng};
use rand::Rng;
use std::f64::consts::FRAC_PI_8;
use weakval_core::pointer::{
    exact_pointer, gaussian_pointer, moment_functionals, pointer_moments, predict_mean, predict_variance,
    weak_approx_pointer, GaussianPointer, PointerGrid, PointerObservable, PointerState,
};
use weakval_core::{evolve_pps, inner, weak_value, Observable, PpsScenario, StateVector, C64};

fn grid() -> PointerGrid {
    PointerGrid::spanning(-40.0, 40.0, 4096).unwrap()
}

fn gaussian(center_p: f64) -> PointerState {
    gaussian_pointer(
        GaussianPointer {
            center_p,
            ..Default::default()
        },
        grid(),
    )
    .unwrap()
}

/// `(1 + beta q) exp(-q^2/4)`, normalized on the standard grid.
fn skewed(beta: C64) -> PointerState {
    let g = grid();
    let psi = g.positions().map(|q| (c(1.0, 0.0) + beta * q) * (-q * q / 4.0).exp()).collect();
    PointerState::normalized(g, psi, 1.0, 1.0).unwrap()
}

fn qubit(pre: [C64; 2], post: [C64; 2], a: Observable) -> PpsScenario {
    PpsScenario::new(
        StateVector::new(pre.to_vec()).unwrap(),
        StateVector::new(post.to_vec()).unwrap(),
        Observable::zeros(2),
        Observable::zeros(2),
        a,
    )
    .unwrap()
}

/// `A_w = 1 / cos(pi/4)`, real.
fn amplified() -> PpsScenario {
    let (ca, sa) = (FRAC_PI_8.cos(), FRAC_PI_8.sin());
    qubit([c(ca, 0.0), c(sa, 0.0)], [c(ca, 0.0), c(-sa, 0.0)], Observable::pauli_z())
}

/// `A_w = 0.6 + 0.8i`.
fn complex_weak_value() -> PpsScenario {
    qubit([c(1.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.5)], Observable::pauli_z())
}

/// `A_w = i`.
fn imaginary_weak_value() -> PpsScenario {
    qubit([c(0.0, 1.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)], Observable::pauli_x())
}

/// Oracle-minus-first-order residual of `<M>` at coupling `gamma0`.
fn mean_residual(s: &PpsScenario, phi: &PointerState, m: PointerObservable, gamma0: f64) -> f64 {
    let aw = weak_value(s, 0.0).unwrap();
    let exact = pointer_moments(&exact_pointer(s, 0.0, gamma0, phi).unwrap().state).unwrap();
    let measured = match m {
        PointerObservable::Q => exact.mean_q,
        PointerObservable::P => exact.mean_p,
    };
    measured - predict_mean(phi, m, gamma0, aw).unwrap()
}

#[test]
fn scenario_weak_values() {
    assert!((weak_value(&amplified(), 0.0).unwrap() - c(2f64.sqrt(), 0.0)).norm() < 1e-12);
    assert!((weak_value(&complex_weak_value(), 0.0).unwrap() - c(0.6, 0.8)).norm() < 1e-12);
    assert!((weak_value(&imaginary_weak_value(), 0.0).unwrap() - c(0.0, 1.0)).norm() < 1e-12);
}

#[test]
fn amplified_mean_shift() {
    let phi = gaussian(0.0);
    let shifted = pointer_moments(&exact_pointer(&amplified(), 0.0, 0.01, &phi).unwrap().state).unwrap();
    assert!((shifted.mean_q - 0.0141421).abs() < 1e-5);
    assert!(mean_residual(&amplified(), &phi, PointerObservable::Q, 0.01).abs() <= 0.05 * 0.01);
}

/// With a pointer lacking parity symmetry the exact shift carries a `gamma0^2`
/// term, so halving the coupling quarters the residual.
#[test]
fn first_order_residual_is_quadratic_for_asymmetric_pointers() {
    let cases = [
        (complex_weak_value(), gaussian(1.0), PointerObservable::Q),
        (complex_weak_value(), gaussian(1.0), PointerObservable::P),
        (amplified(), skewed(c(0.3, 0.0)), PointerObservable::Q),
        (imaginary_weak_value(), skewed(c(0.0, 0.3)), PointerObservable::P),
    ];
    for (i, (s, phi, m)) in cases.iter().enumerate() {
        let r1 = mean_residual(s, phi, *m, 0.01);
        let r2 = mean_residual(s, phi, *m, 0.005);
        let ratio = r1.abs() / r2.abs();
        assert!((ratio - 4.0).abs() <= 0.8, "case {i}: ratio {ratio}");
    }
}

/// A parity-symmetric pointer makes the exact mean shift odd in `gamma0`
/// (`q -> -q` maps the `+gamma0` pointer onto the `-gamma0` one), so the
/// first-order residual is cubic and halving the coupling divides it by 8.
#[test]
fn first_order_residual_is_cubic_for_symmetric_pointers() {
    let phi = gaussian(0.0);
    for (s, m) in [
        (amplified(), PointerObservable::Q),
        (complex_weak_value(), PointerObservable::P),
    ] {
        let r1 = mean_residual(&s, &phi, m, 0.02);
        let r2 = mean_residual(&s, &phi, m, 0.01);
        assert!(r2.abs() <= 0.05 * 0.01);
        assert!((r1 / r2 - 8.0).abs() < 0.1, "ratio {}", r1 / r2);
        let plus = mean_residual(&s, &phi, m, 0.01);
        let minus = mean_residual(&s, &phi, m, -0.01);
        assert!((plus + minus).abs() < 1e-12 + 1e-6 * plus.abs());
    }
}

#[test]
fn postselection_probability_without_coupling() {
    let mut r = rng(51);
    let phi = gaussian(0.0);
    for _ in 0..20 {
        let dim = r.gen_range(2..=4);
        let s = PpsScenario::new(
            random_state(&mut r, dim),
            random_state(&mut r, dim),
            random_hermitian(&mut r, dim, 1.0),
            random_hermitian(&mut r, dim, 1.0),
            random_hermitian(&mut r, dim, 1.0),
        )
        .unwrap()
        .with_overlap_floor(1e-12)
        .unwrap();
        let t = r.gen_range(-2.0..2.0);
        let (pre, post) = evolve_pps(&s, t).unwrap();
        let expected = inner(&post, &pre).unwrap().norm_sqr();
        let out = exact_pointer(&s, t, 0.0, &phi).unwrap();
        assert!((out.postselection_probability - expected).abs() <= 1e-12);
        assert_eq!(out.state.psi().len(), phi.psi().len());
    }
}

#[test]
fn skewed_third_moment_matches_closed_form() {
    // (1 + beta q) e^{-q^2/4}, beta = 0.1: moments from the Gaussian integrals
    // <1> = 1 + beta^2, <q> = 2 beta, <q^2> = 1 + 3 beta^2, <q^3> = 6 beta
    let m = pointer_moments(&skewed(c(0.1, 0.0))).unwrap();
    assert!((m.mean_q - 0.19801980198019803).abs() < 1e-12);
    assert!((m.var_q - 0.980590138221743).abs() < 1e-12);
    assert!((m.third_q - 0.0037658897739592263).abs() < 1e-12);
    assert!(m.third_p.abs() < 1e-12);
    assert!(m.satisfies_uncertainty(1.0));
}

#[test]
fn momentum_variance_follows_third_moment() {
    let s = imaginary_weak_value();
    let phi = skewed(c(0.0, 0.3));
    let m0 = pointer_moments(&phi).unwrap();
    assert!(m0.third_p.abs() > 5e-3);
    let gamma0 = 0.01;
    let predicted = predict_variance(&phi, PointerObservable::P, gamma0, c(0.0, 1.0)).unwrap();
    assert!((predicted - m0.var_p - 2.0 * gamma0 * m0.third_p).abs() < 1e-12);
    let exact = pointer_moments(&exact_pointer(&s, 0.0, gamma0, &phi).unwrap().state).unwrap();
    let change = exact.var_p - m0.var_p;
    let residual = change - (predicted - m0.var_p);
    assert!(change > 0.0);
    assert!(residual.abs() <= gamma0 * gamma0, "residual {residual:e}");
    let half = pointer_moments(&exact_pointer(&s, 0.0, gamma0 / 2.0, &phi).unwrap().state).unwrap();
    let residual_half = half.var_p - predict_variance(&phi, PointerObservable::P, gamma0 / 2.0, c(0.0, 1.0)).unwrap();
    assert!((residual / residual_half - 4.0).abs() <= 0.8, "ratio {}", residual / residual_half);
}

#[test]
fn real_weak_value_leaves_variances() {
    let phi = gaussian(0.0);
    let m0 = pointer_moments(&phi).unwrap();
    let gamma0 = 0.01;
    let exact = pointer_moments(&exact_pointer(&amplified(), 0.0, gamma0, &phi).unwrap().state).unwrap();
    for (before, after, m) in [(m0.var_q, exact.var_q, PointerObservable::Q), (m0.var_p, exact.var_p, PointerObservable::P)] {
        let predicted = predict_variance(&phi, m, gamma0, c(2f64.sqrt(), 0.0)).unwrap();
        assert!((predicted - before).abs() < 1e-12);
        assert!((after - before).abs() <= 0.05 * gamma0 * before);
    }
}

#[test]
fn weak_approximation_matches_prediction() {
    let phi = gaussian(0.0);
    let approx = pointer_moments(&weak_approx_pointer(c(0.0, 1.0), 0.01, &phi).unwrap()).unwrap();
    let predicted = predict_mean(&phi, PointerObservable::P, 0.01, c(0.0, 1.0)).unwrap();
    assert!((predicted - 0.005).abs() < 1e-12);
    assert!((approx.mean_p - predicted).abs() < 1e-10);
    let moved = pointer_moments(&weak_approx_pointer(c(0.6, 0.8), 0.01, &phi).unwrap()).unwrap();
    assert!((moved.mean_q - 0.006).abs() < 1e-10);
}

/// Free evolution checks of `<{q,p}> - 2<q><p> = m dVar(q)/dt` and
/// `G(q) = (2m/3) d(q_3)/dt`.
#[test]
fn free_particle_identities() {
    for mass in [1.0, 2.5] {
        let g = grid();
        let psi = g
            .positions()
            .map(|q| (c(1.0, 0.0) + c(0.2, 0.1) * q) * C64::from_polar((-q * q / 4.0).exp(), 0.15 * q * q))
            .collect();
        let phi = PointerState::normalized(g, psi, mass, 1.0).unwrap();
        let m = pointer_moments(&phi).unwrap();
        let g_q = moment_functionals(&phi, PointerObservable::Q).unwrap().g();
        let h = 1e-3;
        let ahead = pointer_moments(&phi.free_evolve(h).unwrap()).unwrap();
        let behind = pointer_moments(&phi.free_evolve(-h).unwrap()).unwrap();
        let d_var = (ahead.var_q - behind.var_q) / (2.0 * h);
        let d_third = (ahead.third_q - behind.third_q) / (2.0 * h);
        assert!(m.anticomm_qp.abs() > 0.1 && g_q.abs() > 0.01);
        assert!((m.anticomm_qp - mass * d_var).abs() < 1e-6, "{} vs {}", m.anticomm_qp, mass * d_var);
        assert!((g_q - 2.0 * mass / 3.0 * d_third).abs() < 1e-6, "{g_q} vs {}", 2.0 * mass / 3.0 * d_third);
    }
}
