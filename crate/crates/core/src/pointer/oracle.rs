use num_complex::Complex64 as C64;

use super::coupling::Picture;
use super::state::{norm_squared, PointerState};
use crate::error::{Error, Result};
use crate::pps::{evolve_pps, PpsScenario};
use crate::tolerances;

/// Post-selected pointer together with the probability of the post-selection.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPointer {
    pub state: PointerState,
    pub postselection_probability: f64,
}

/// Exact pointer after the impulsive interaction `exp(-(i/hbar) gamma0 A p)`
/// at time `t`, projected on the post-selected state:
/// `Phi(q) ∝ sum_a <psi_f|a><a|psi_i> phi(q - gamma0 a)`.
pub fn exact_pointer(s: &PpsScenario, t: f64, gamma0: f64, phi: &PointerState) -> Result<ExactPointer> {
    if !gamma0.is_finite() {
        return Err(Error::NonFinite("gamma0"));
    }
    let (psi_i, psi_f) = evolve_pps(s, t)?;
    let obs = s.observable();
    let vecs = obs.eigenvectors();
    let grid = *phi.grid();
    let span = grid.step * grid.n as f64;
    let sp = phi.spectral();

    let mut out = vec![C64::new(0.0, 0.0); grid.n];
    for (k, &a) in obs.eigenvalues().iter().enumerate() {
        let v = vecs.column(k);
        let post_a: C64 = psi_f.amplitudes().iter().zip(v.iter()).map(|(f, x)| f.conj() * x).sum();
        let a_pre: C64 = v.iter().zip(psi_i.amplitudes()).map(|(x, i)| x.conj() * i).sum();
        let w = post_a * a_pre;
        if w.norm() == 0.0 {
            continue;
        }
        let shift = gamma0 * a;
        if shift.abs() >= 0.5 * span {
            return Err(Error::ShiftOutOfGrid(format!(
                "shift {shift} against grid length {span}"
            )));
        }
        let moved = sp.translate(phi.psi(), shift, phi.hbar());
        let edge = moved[0].norm().max(moved[grid.n - 1].norm());
        if edge >= tolerances::POINTER_BOUNDARY {
            return Err(Error::ShiftOutOfGrid(format!(
                "eigenvalue {a}: shifted pointer has edge amplitude {edge:e}"
            )));
        }
        for (o, m) in out.iter_mut().zip(moved) {
            *o += w * m;
        }
    }
    let probability = norm_squared(&out, grid.step);
    let state = PointerState::normalized(grid, out, phi.mass(), phi.hbar())?;
    Ok(ExactPointer {
        state,
        postselection_probability: probability,
    })
}

/// First-order pointer `exp(-(i/hbar) gamma0 aw0 p) phi`, renormalized.
///
/// An imaginary weak value reweights momenta by `exp(gamma0 Im(aw0) p / hbar)`;
/// the reweighted spectrum must still vanish at the band edge.
pub fn weak_approx_pointer(aw0: C64, gamma0: f64, phi: &PointerState) -> Result<PointerState> {
    if !gamma0.is_finite() || !aw0.re.is_finite() || !aw0.im.is_finite() {
        return Err(Error::NonFinite("weak approximation parameters"));
    }
    let sp = phi.spectral();
    let k = -C64::i() * gamma0 * aw0 / phi.hbar();
    let mut spec = sp.forward(phi.psi());
    for (z, &p) in spec.iter_mut().zip(sp.momenta()) {
        *z *= (k * p).exp();
    }
    if spec.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::MomentumBand("reweighting overflows".into()));
    }
    let peak = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::MomentumBand(format!("reweighted spectrum peak {peak}")));
    }
    // the band edge sits at the middle of the FFT ordering
    let n = spec.len();
    let edge = spec[n / 2].norm().max(spec[(n - 1) / 2].norm()) / peak;
    if edge >= tolerances::POINTER_BOUNDARY {
        return Err(Error::MomentumBand(format!(
            "relative amplitude {edge:e} at the band edge"
        )));
    }
    PointerState::normalized(*phi.grid(), sp.inverse(&spec), phi.mass(), phi.hbar())
}

/// Position samples of `H_w phi` for the weak interaction Hamiltonian with
/// coefficient `rate`: `rate p phi` (momentum coupling) or `-rate q phi`
/// (position coupling).
pub fn apply_weak_hamiltonian(phi: &PointerState, rate: C64, picture: Picture) -> Vec<C64> {
    match picture {
        Picture::MomentumCoupling => phi.spectral().momentum(phi.psi()).into_iter().map(|z| z * rate).collect(),
        Picture::PositionCoupling => phi
            .grid()
            .positions()
            .zip(phi.psi())
            .map(|(q, z)| -rate * q * z)
            .collect(),
    }
}
