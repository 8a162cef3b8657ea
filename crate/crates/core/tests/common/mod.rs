#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use weakval_core::{Observable, StateVector, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_complex(r: &mut impl Rng) -> C64 {
    c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// `(M + M^dagger) / 2` for a matrix with uniform entries in the unit square,
/// scaled by `scale`.
pub fn random_hermitian(r: &mut impl Rng, dim: usize, scale: f64) -> Observable {
    let m = DMatrix::from_fn(dim, dim, |_, _| random_complex(r));
    let h = (&m + m.adjoint()) * c(0.5 * scale, 0.0);
    Observable::new(h).unwrap()
}

pub fn random_state(r: &mut impl Rng, dim: usize) -> StateVector {
    StateVector::new((0..dim).map(|_| random_complex(r)).collect()).unwrap()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    /// `A(-tau)* = A(tau)`: even real part, odd imaginary part.
    EvenHermitian,
    /// `A(-tau)* = -A(tau)`: odd real part, even imaginary part.
    OddHermitian,
}

/// Random Fourier sum in `tau` with the requested Hermitian time parity.
pub fn random_parity_fn(r: &mut impl Rng, parity: Parity) -> impl Fn(f64) -> C64 {
    let terms: Vec<(f64, f64, f64)> = (0..r.gen_range(1..=5))
        .map(|_| (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(0.1..6.0)))
        .collect();
    let offset = r.gen_range(-1.0..1.0);
    move |tau: f64| {
        let mut even = offset;
        let mut odd = 0.0;
        for &(a, b, w) in &terms {
            even += a * (w * tau).cos();
            odd += b * (w * tau).sin();
        }
        match parity {
            Parity::EvenHermitian => c(even, odd),
            Parity::OddHermitian => c(odd, even),
        }
    }
}
