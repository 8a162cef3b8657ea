use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

/// DFT machinery for a periodic grid of `n` points spaced `step` apart.
pub(crate) struct Spectral {
    n: usize,
    momenta: Vec<f64>,
}

impl Spectral {
    pub(crate) fn new(n: usize, step: f64, hbar: f64) -> Self {
        let scale = 2.0 * PI * hbar / (n as f64 * step);
        let momenta = (0..n)
            .map(|j| {
                let f = if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 };
                f * scale
            })
            .collect();
        Self { n, momenta }
    }

    /// Momentum of each DFT bin, in FFT order.
    pub(crate) fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    /// Unnormalized forward transform `sum_k psi_k e^{-2 pi i jk/n}`.
    pub(crate) fn forward(&self, psi: &[C64]) -> Vec<C64> {
        let mut buf = psi.to_vec();
        FftPlanner::new().plan_fft_forward(self.n).process(&mut buf);
        buf
    }

    /// Inverse of [`Spectral::forward`], including the `1/n`.
    pub(crate) fn inverse(&self, spectrum: &[C64]) -> Vec<C64> {
        let mut buf = spectrum.to_vec();
        FftPlanner::new().plan_fft_inverse(self.n).process(&mut buf);
        let inv = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|z| *z *= inv);
        buf
    }

    /// Applies a diagonal operator `f(p)` in momentum space.
    pub(crate) fn multiply(&self, psi: &[C64], f: impl Fn(f64) -> C64) -> Vec<C64> {
        let mut spec = self.forward(psi);
        for (z, &p) in spec.iter_mut().zip(&self.momenta) {
            *z *= f(p);
        }
        self.inverse(&spec)
    }

    /// `p psi` by spectral differentiation.
    pub(crate) fn momentum(&self, psi: &[C64]) -> Vec<C64> {
        self.multiply(psi, |p| C64::new(p, 0.0))
    }

    /// `psi(q - shift)` for a band-limited periodic `psi`.
    pub(crate) fn translate(&self, psi: &[C64], shift: f64, hbar: f64) -> Vec<C64> {
        self.multiply(psi, |p| C64::from_polar(1.0, -p * shift / hbar))
    }
}
