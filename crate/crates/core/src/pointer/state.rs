use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::spectral::Spectral;
use crate::error::{Error, Result};
use crate::tolerances;

/// Uniform periodic position grid `q_k = min + k step`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerGrid {
    pub min: f64,
    pub step: f64,
    pub n: usize,
}

impl PointerGrid {
    pub fn new(min: f64, step: f64, n: usize) -> Result<Self> {
        if !min.is_finite() {
            return Err(Error::NonFinite("pointer grid min"));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::PointerGrid(format!("step must be positive, got {step}")));
        }
        if n < 8 {
            return Err(Error::PointerGrid(format!("need at least 8 points, got {n}")));
        }
        Ok(Self { min, step, n })
    }

    /// `n` points covering `[min, max)`.
    pub fn spanning(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(max > min) {
            return Err(Error::PointerGrid(format!("empty range [{min}, {max})")));
        }
        Self::new(min, (max - min) / n as f64, n)
    }

    pub fn position(&self, k: usize) -> f64 {
        self.min + k as f64 * self.step
    }

    pub fn max(&self) -> f64 {
        self.position(self.n - 1)
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        (0..self.n).map(move |k| self.position(k))
    }
}

/// A pointer wavefunction sampled on a [`PointerGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PointerState {
    grid: PointerGrid,
    psi: Vec<C64>,
    mass: f64,
    hbar: f64,
}

impl PointerState {
    /// Validates normalization and edge decay of already-normalized samples.
    pub fn new(grid: PointerGrid, psi: Vec<C64>, mass: f64, hbar: f64) -> Result<Self> {
        if psi.len() != grid.n {
            return Err(Error::DimensionMismatch {
                expected: grid.n,
                found: psi.len(),
            });
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mass",
                reason: format!("must be positive, got {mass}"),
            });
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidParameter {
                name: "hbar",
                reason: format!("must be positive, got {hbar}"),
            });
        }
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("pointer wavefunction"));
        }
        let norm2 = norm_squared(&psi, grid.step);
        if (norm2 - 1.0).abs() > tolerances::POINTER_NORM {
            return Err(Error::PointerNotNormalized(norm2));
        }
        let edge = psi[0].norm().max(psi[grid.n - 1].norm());
        if edge >= tolerances::POINTER_BOUNDARY {
            return Err(Error::PointerGrid(format!(
                "boundary amplitude {edge:e} not below {:e}",
                tolerances::POINTER_BOUNDARY
            )));
        }
        Ok(Self { grid, psi, mass, hbar })
    }

    /// Normalizes `psi` on the grid, then validates as [`PointerState::new`].
    pub fn normalized(grid: PointerGrid, mut psi: Vec<C64>, mass: f64, hbar: f64) -> Result<Self> {
        let norm2 = norm_squared(&psi, grid.step);
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(Error::PointerNotNormalized(norm2));
        }
        let inv = norm2.sqrt().recip();
        psi.iter_mut().for_each(|z| *z *= inv);
        Self::new(grid, psi, mass, hbar)
    }

    pub fn grid(&self) -> &PointerGrid {
        &self.grid
    }
    pub fn psi(&self) -> &[C64] {
        &self.psi
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub(crate) fn spectral(&self) -> Spectral {
        Spectral::new(self.grid.n, self.grid.step, self.hbar)
    }

    /// Momenta of the DFT bins, in FFT order.
    pub fn momenta(&self) -> Vec<f64> {
        self.spectral().momenta().to_vec()
    }

    /// Continuum-normalized momentum wavefunction at [`PointerState::momenta`]:
    /// `(2 pi hbar)^{-1/2} ∫ psi(q) e^{-ipq/hbar} dq`.
    pub fn momentum_amplitudes(&self) -> Vec<C64> {
        self.momentum_representation(&self.psi)
    }

    /// Same transform as [`PointerState::momentum_amplitudes`] applied to
    /// arbitrary samples on this state's grid.
    pub fn momentum_representation(&self, samples: &[C64]) -> Vec<C64> {
        let sp = self.spectral();
        let pref = self.grid.step / (2.0 * PI * self.hbar).sqrt();
        sp.forward(samples)
            .into_iter()
            .zip(sp.momenta())
            .map(|(z, &p)| z * C64::from_polar(pref, -p * self.grid.min / self.hbar))
            .collect()
    }

    /// Free evolution `exp(-i p^2 t / (2 m hbar))` over `dt`.
    pub fn free_evolve(&self, dt: f64) -> Result<Self> {
        let k = dt / (2.0 * self.mass * self.hbar);
        let psi = self.spectral().multiply(&self.psi, |p| C64::from_polar(1.0, -p * p * k));
        Self::normalized(self.grid, psi, self.mass, self.hbar)
    }

    /// Inner product `<self|other>` on the grid.
    pub fn overlap(&self, other: &PointerState) -> Result<C64> {
        if self.grid != other.grid {
            return Err(Error::PointerGrid("states live on different grids".into()));
        }
        Ok(inner(&self.psi, &other.psi, self.grid.step))
    }
}

pub(crate) fn norm_squared(psi: &[C64], step: f64) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * step
}

pub(crate) fn inner(a: &[C64], b: &[C64], step: f64) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>() * step
}

/// Parameters of a Gaussian wavepacket
/// `psi(q) ∝ exp(-(q - center_q)^2 / (4 var_q) + i center_p q / hbar)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPointer {
    pub center_q: f64,
    pub center_p: f64,
    pub var_q: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl Default for GaussianPointer {
    fn default() -> Self {
        Self {
            center_q: 0.0,
            center_p: 0.0,
            var_q: 1.0,
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

/// Minimum-uncertainty Gaussian sampled on `grid`.
///
/// The grid must extend eight position standard deviations either side of
/// `center_q` and resolve momenta up to `|center_p|` plus eight momentum
/// standard deviations with `step <= hbar / (8 p_max)`.
pub fn gaussian_pointer(params: GaussianPointer, grid: PointerGrid) -> Result<PointerState> {
    let GaussianPointer {
        center_q,
        center_p,
        var_q,
        mass,
        hbar,
    } = params;
    if !(var_q > 0.0) || !var_q.is_finite() {
        return Err(Error::InvalidParameter {
            name: "var_q",
            reason: format!("must be positive, got {var_q}"),
        });
    }
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter {
            name: "hbar",
            reason: format!("must be positive, got {hbar}"),
        });
    }
    let sigma = var_q.sqrt();
    let reach = tolerances::POINTER_COVERAGE_SIGMAS * sigma;
    if center_q - reach < grid.min || center_q + reach > grid.max() {
        return Err(Error::PointerGrid(format!(
            "grid [{}, {}] does not cover centre {center_q} +- {reach}",
            grid.min,
            grid.max()
        )));
    }
    let sigma_p = hbar / (2.0 * sigma);
    let p_needed = center_p.abs() + tolerances::POINTER_COVERAGE_SIGMAS * sigma_p;
    let max_step = hbar / (tolerances::POINTER_BAND_FACTOR * p_needed);
    if grid.step > max_step {
        return Err(Error::PointerGrid(format!(
            "step {} too coarse for momenta up to {p_needed}; need <= {max_step}",
            grid.step
        )));
    }
    let psi = grid
        .positions()
        .map(|q| {
            let x = q - center_q;
            C64::from_polar((-x * x / (4.0 * var_q)).exp(), center_p * q / hbar)
        })
        .collect();
    PointerState::normalized(grid, psi, mass, hbar)
}

/// First three moments of `q` and `p` and the symmetrized covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerMomentReport {
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
    pub third_q: f64,
    pub third_p: f64,
    /// `<{q, p}> - 2 <q><p>`
    pub anticomm_qp: f64,
}

impl PointerMomentReport {
    pub fn satisfies_uncertainty(&self, hbar: f64) -> bool {
        self.var_q * self.var_p >= 0.25 * hbar * hbar - tolerances::UNCERTAINTY_SLACK
    }
}

fn central_moments(xs: impl Iterator<Item = (f64, f64)> + Clone) -> (f64, f64, f64) {
    let mean: f64 = xs.clone().map(|(x, w)| x * w).sum();
    let (mut m2, mut m3) = (0.0, 0.0);
    for (x, w) in xs {
        let d = x - mean;
        m2 += d * d * w;
        m3 += d * d * d * w;
    }
    (mean, m2, m3)
}

/// Position moments by grid quadrature, momentum moments from the DFT
/// spectrum, and `<{q,p}>` with `p` applied spectrally.
pub fn pointer_moments(phi: &PointerState) -> Result<PointerMomentReport> {
    let grid = phi.grid;
    let norm2 = norm_squared(&phi.psi, grid.step);
    if (norm2 - 1.0).abs() > tolerances::POINTER_NORM {
        return Err(Error::PointerNotNormalized(norm2));
    }
    let (mean_q, var_q, third_q) = central_moments(
        grid.positions()
            .zip(&phi.psi)
            .map(|(q, z)| (q, z.norm_sqr() * grid.step)),
    );

    let sp = phi.spectral();
    let spectrum = sp.forward(&phi.psi);
    let total: f64 = spectrum.iter().map(|z| z.norm_sqr()).sum();
    let (mean_p, var_p, third_p) = central_moments(
        sp.momenta()
            .iter()
            .zip(&spectrum)
            .map(|(&p, z)| (p, z.norm_sqr() / total)),
    );

    let p_psi = sp.momentum(&phi.psi);
    let q_psi: Vec<C64> = grid.positions().zip(&phi.psi).map(|(q, z)| z * q).collect();
    let qp = inner(&q_psi, &p_psi, grid.step);
    let anticomm_qp = 2.0 * qp.re - 2.0 * mean_q * mean_p;

    Ok(PointerMomentReport {
        mean_q,
        mean_p,
        var_q,
        var_p,
        third_q,
        third_p,
        anticomm_qp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> PointerGrid {
        PointerGrid::spanning(-40.0, 40.0, 4096).unwrap()
    }

    #[test]
    fn gaussian_analytics() {
        let phi = gaussian_pointer(GaussianPointer::default(), grid()).unwrap();
        let m = pointer_moments(&phi).unwrap();
        assert!((m.var_q - 1.0).abs() < 1e-10);
        assert!((m.var_p - 0.25).abs() < 1e-10);
        assert!(m.third_q.abs() < 1e-8);
        assert!(m.third_p.abs() < 1e-8);
        assert!(m.anticomm_qp.abs() < 1e-10);
        assert!(m.satisfies_uncertainty(1.0));
    }

    #[test]
    fn displaced_and_boosted() {
        let params = GaussianPointer {
            center_q: 3.0,
            center_p: 2.0,
            ..Default::default()
        };
        let m = pointer_moments(&gaussian_pointer(params, grid()).unwrap()).unwrap();
        assert!((m.mean_q - 3.0).abs() < 1e-10);
        assert!((m.mean_p - 2.0).abs() < 1e-8);
        assert!((m.var_p - 0.25).abs() < 1e-10);
    }

    #[test]
    fn coverage_and_band_errors() {
        let narrow = PointerGrid::spanning(-5.0, 5.0, 1024).unwrap();
        assert!(matches!(
            gaussian_pointer(GaussianPointer::default(), narrow),
            Err(Error::PointerGrid(_))
        ));
        let coarse = PointerGrid::spanning(-40.0, 40.0, 256).unwrap();
        assert!(matches!(
            gaussian_pointer(GaussianPointer::default(), coarse),
            Err(Error::PointerGrid(_))
        ));
    }

    #[test]
    fn unnormalized_state_rejected() {
        let g = grid();
        let psi: Vec<C64> = g.positions().map(|q| C64::new((-q * q).exp(), 0.0)).collect();
        assert!(matches!(
            PointerState::new(g, psi, 1.0, 1.0),
            Err(Error::PointerNotNormalized(_))
        ));
    }

    #[test]
    fn momentum_amplitudes_of_gaussian() {
        // phi~(p) = (2 var_p / pi)^{1/4}... for var_q = 1: (2/pi)^{1/4} e^{-p^2}
        let phi = gaussian_pointer(GaussianPointer::default(), grid()).unwrap();
        let amps = phi.momentum_amplitudes();
        for (p, z) in phi.momenta().iter().zip(&amps) {
            let exact = (2.0 / PI).powf(0.25) * (-p * p).exp();
            assert!((z - C64::new(exact, 0.0)).norm() < 1e-12, "p = {p}");
        }
    }
}
