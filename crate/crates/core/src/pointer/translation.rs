//! Weak pointer translations `q_w = ∫ gamma(t) A_w(t) dt` (momentum coupling)
//! and `p_w = ∫ theta(t) A_w(t) dt` (position coupling).

use num_complex::Complex64 as C64;

use super::coupling::{CouplingKind, CouplingProfile};
use crate::error::{Error, Result};
use crate::pps::WeakValueSeries;
use crate::quadrature::simpson;
use crate::tolerances;

/// The two analytic weak values used to illustrate even and odd time symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Illustration {
    /// `A_w = cos 2w(t-t0) + i sin 2w(t-t0)`
    PtExample,
    /// `A_w = sin 2w(t-t0) + i cos 2w(t-t0)`
    AntiPtExample,
}

impl Illustration {
    pub fn as_str(&self) -> &'static str {
        match self {
            Illustration::PtExample => "PT_EXAMPLE",
            Illustration::AntiPtExample => "ANTI_PT_EXAMPLE",
        }
    }

    /// The analytic weak value at offset `tau = t - t0`.
    pub fn weak_value(&self, omega: f64, tau: f64) -> C64 {
        let (s, c) = (2.0 * omega * tau).sin_cos();
        match self {
            Illustration::PtExample => C64::new(c, s),
            Illustration::AntiPtExample => C64::new(s, c),
        }
    }
}

/// Boxcar translation of an illustration in closed form:
/// `(gamma0 / (w eps)) sin(w eps)`, real for the PT example and imaginary for
/// the anti-PT one.
pub fn closed_form_translation(example: Illustration, gamma0: f64, omega: f64, epsilon: f64) -> Result<C64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("must be positive, got {epsilon}"),
        });
    }
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::InvalidParameter {
            name: "omega",
            reason: format!("must be finite and non-zero, got {omega}"),
        });
    }
    let x = omega * epsilon;
    let magnitude = gamma0 * x.sin() / x;
    Ok(match example {
        Illustration::PtExample => C64::new(magnitude, 0.0),
        Illustration::AntiPtExample => C64::new(0.0, magnitude),
    })
}

/// `∫ gamma(t) A_w(t) dt` over the sampled series.
///
/// Boxcar windows must start and end on grid nodes and are integrated with
/// Simpson's rule over the window only; Gaussian profiles are integrated over
/// the whole grid, which must reach six standard deviations either side; an
/// impulse takes the centre sample.
pub fn pointer_translation(series: &WeakValueSeries, coupling: &CouplingProfile) -> Result<C64> {
    let grid = series.grid();
    let step = grid.step();
    let values = series.values();
    let center = grid.center_index();
    if (coupling.t0() - grid.t0()).abs() > tolerances::GRID_ALIGNMENT * step {
        return Err(Error::GridMisaligned(format!(
            "coupling centred at {} but grid centred at {}",
            coupling.t0(),
            grid.t0()
        )));
    }
    match coupling.kind() {
        CouplingKind::Impulse => Ok(values[center] * coupling.strength()),
        CouplingKind::Boxcar => {
            let eps = coupling.epsilon();
            let steps = 0.5 * eps / step;
            let m = steps.round();
            if m < 1.0 || (steps - m).abs() > tolerances::GRID_ALIGNMENT * steps.max(1.0) {
                return Err(Error::GridMisaligned(format!(
                    "half width {} is {steps} grid steps",
                    0.5 * eps
                )));
            }
            let m = m as usize;
            if m > center {
                return Err(Error::SupportNotCovered(format!(
                    "boxcar of width {eps} needs {m} steps per side, grid has {center}"
                )));
            }
            let window = &values[center - m..=center + m];
            Ok(simpson(window, step)? * (coupling.strength() / eps))
        }
        CouplingKind::Gaussian => {
            let reach = tolerances::GAUSSIAN_COUPLING_SIGMAS * coupling.epsilon();
            if grid.half_width() < reach * (1.0 - tolerances::GRID_ALIGNMENT) {
                return Err(Error::SupportNotCovered(format!(
                    "Gaussian coupling needs half width {reach}, grid has {}",
                    grid.half_width()
                )));
            }
            let integrand = (0..grid.len())
                .zip(values)
                .map(|(k, a)| Ok(*a * coupling.eval_offset(grid.offset(k))?))
                .collect::<Result<Vec<_>>>()?;
            simpson(&integrand, step)
        }
    }
}
