mod common;

use common::{c, random_hermitian, random_state, rng};
use nalgebra::DMatrix;
use rand::Rng;
use std::f64::consts::{FRAC_PI_8, PI};
use weakval_core::{
    evolve, inner, sandwich, weak_value, weak_value_central_difference, weak_value_derivative, weak_value_series,
    Error, Observable, PpsScenario, StateVector, TimeGrid, C64,
};

/// Random scenario whose boundary states overlap by at least 0.2 at `t`, far
/// from any weak-value asymptote.
fn random_scenario(r: &mut impl Rng, dim: usize) -> (PpsScenario, f64) {
    loop {
        let s = PpsScenario::new(
            random_state(r, dim),
            random_state(r, dim),
            random_hermitian(r, dim, 1.0),
            random_hermitian(r, dim, 1.0),
            random_hermitian(r, dim, 1.0),
        )
        .unwrap()
        .with_offsets(r.gen_range(0.0..1.0), r.gen_range(0.0..1.0))
        .unwrap()
        .with_hbar(r.gen_range(0.5..2.0))
        .unwrap();
        let t = r.gen_range(-2.0..2.0);
        let (pre, post) = weakval_core::evolve_pps(&s, t).unwrap();
        if inner(&post, &pre).unwrap().norm() >= 0.2 {
            return (s, t);
        }
    }
}

#[test]
fn derivative_matches_central_difference_at_second_order() {
    let mut r = rng(21);
    let mut worst_ratio = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..50 {
        let dim = if k % 2 == 0 { 2 } else { 3 };
        let (s, t) = random_scenario(&mut r, dim);
        let d = weak_value_derivative(&s, t).unwrap();
        let e1 = (d - weak_value_central_difference(&s, t, 1e-4).unwrap()).norm();
        let e2 = (d - weak_value_central_difference(&s, t, 5e-5).unwrap()).norm();
        assert!(e1 / (1.0 + d.norm()) <= 1e-6, "scenario {k}: relative error {}", e1 / (1.0 + d.norm()));
        let ratio = e1 / e2;
        worst_ratio = (worst_ratio.0.min(ratio), worst_ratio.1.max(ratio));
        assert!((3.5..=4.5).contains(&ratio), "scenario {k}: halving ratio {ratio}");
    }
    eprintln!("halving ratios within [{:.3}, {:.3}]", worst_ratio.0, worst_ratio.1);
}

#[test]
fn contemporaneous_derivative_is_commutator_expectation() {
    let mut r = rng(22);
    for _ in 0..20 {
        let dim = r.gen_range(2..=4);
        let h = random_hermitian(&mut r, dim, 1.5);
        let a = random_hermitian(&mut r, dim, 1.5);
        let psi = random_state(&mut r, dim);
        let hbar = r.gen_range(0.5..2.0);
        let s = PpsScenario::new(psi.clone(), psi.clone(), h.clone(), h.clone(), a.clone())
            .unwrap()
            .with_hbar(hbar)
            .unwrap();
        let t = r.gen_range(-3.0..3.0);
        let now = evolve(&psi, &h, t, hbar).unwrap();
        let comm = h.matrix() * a.matrix() - a.matrix() * h.matrix();
        let expected = c(0.0, 1.0 / hbar) * sandwich(&now, &comm, &now).unwrap();
        let d = weak_value_derivative(&s, t).unwrap();
        assert!((d - expected).norm() <= 1e-10, "{d} vs {expected}");
        assert!(d.im.abs() <= 1e-10);
    }
}

#[test]
fn commuting_observable_gives_eigenvalue_at_all_times() {
    let mut r = rng(23);
    for _ in 0..20 {
        let dim = r.gen_range(2..=5);
        let basis = random_hermitian(&mut r, dim, 1.0);
        let v = basis.eigenvectors().clone();
        let diag = |vals: &[f64]| -> Observable {
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(dim, vals.iter().map(|&x| c(x, 0.0))));
            Observable::new(&v * d * v.adjoint()).unwrap()
        };
        let e: Vec<f64> = (0..dim).map(|_| r.gen_range(-2.0..2.0)).collect();
        let a: Vec<f64> = (0..dim).map(|_| r.gen_range(-2.0..2.0)).collect();
        let k = r.gen_range(0..dim);
        let eig = StateVector::new(v.column(k).iter().cloned().collect()).unwrap();
        let h = diag(&e);
        let s = PpsScenario::new(eig.clone(), eig, h.clone(), h, diag(&a))
            .unwrap()
            .with_offsets(r.gen_range(0.0..2.0), r.gen_range(0.0..2.0))
            .unwrap();
        let grid = TimeGrid::new(0.0, 5.0, 41).unwrap();
        for w in weak_value_series(&s, &grid).unwrap().values() {
            assert!((w - c(a[k], 0.0)).norm() <= 1e-12, "{w} vs {}", a[k]);
        }
    }
}

#[test]
fn global_phases_cancel() {
    let mut r = rng(24);
    for _ in 0..50 {
        let (s, t) = random_scenario(&mut r, 3);
        let base = weak_value(&s, t).unwrap();
        let (p1, p2) = (C64::from_polar(1.0, r.gen_range(0.0..2.0 * PI)), C64::from_polar(1.0, r.gen_range(0.0..2.0 * PI)));
        let rotated = s
            .with_boundaries(s.pre().with_global_phase(p1), s.post().with_global_phase(p2))
            .unwrap();
        let w = weak_value(&rotated, t).unwrap();
        assert!((w - base).norm() <= 1e-12 * base.norm().max(1.0));
    }
}

#[test]
fn amplified_qubit_weak_value() {
    let (ca, sa) = (FRAC_PI_8.cos(), FRAC_PI_8.sin());
    let s = PpsScenario::new(
        StateVector::new(vec![c(ca, 0.0), c(sa, 0.0)]).unwrap(),
        StateVector::new(vec![c(ca, 0.0), c(-sa, 0.0)]).unwrap(),
        Observable::zeros(2),
        Observable::zeros(2),
        Observable::pauli_z(),
    )
    .unwrap();
    let w = weak_value(&s, 0.0).unwrap();
    assert!((w - c(std::f64::consts::SQRT_2, 0.0)).norm() <= 1e-12);
    assert!(w.re > 1.0, "outside the eigenvalue range");
}

#[test]
fn orthogonal_boundaries_are_refused() {
    let s = PpsScenario::new(
        StateVector::basis(2, 0).unwrap(),
        StateVector::basis(2, 1).unwrap(),
        Observable::zeros(2),
        Observable::zeros(2),
        Observable::pauli_x(),
    )
    .unwrap();
    match weak_value(&s, 1.0) {
        Err(Error::NearOrthogonal { t, overlap }) => {
            assert_eq!(t, 1.0);
            assert!(overlap < 1e-8);
        }
        other => panic!("expected near-orthogonality error, got {other:?}"),
    }
}
