//! First-order moment predictions for an impulsive momentum coupling
//! `gamma0 delta(t - t0) A p`.
//!
//! To first order in `gamma0` the pointer becomes `(1 - i (gamma0/hbar) Aw0 p) phi`,
//! so with `Aw0 = a + ib`
//!
//! ```text
//! <M>_Phi    = <M> - i (gamma0/hbar) a <[M,p]> + (gamma0/hbar) b (<{M,p}> - 2<M><p>)
//! Var_Phi(M) = Var(M) - i (gamma0/hbar) a F(M) + (gamma0/hbar) b G(M)
//! F(M) = <[M^2,p]> - 2<M><[M,p]>
//! G(M) = <{M^2,p}> - 2<M><{M,p}> - 2<p>(<M^2> - 2<M>^2)
//! ```

use num_complex::Complex64 as C64;

use super::state::{inner, PointerState};
use crate::error::{Error, Result};
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointerObservable {
    Q,
    P,
}

impl PointerObservable {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointerObservable::Q => "Q",
            PointerObservable::P => "P",
        }
    }
}

/// Grid expectations entering the first-order mean and variance.
///
/// Commutator expectations are stored as their imaginary parts, after the
/// real part has been checked to vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentFunctionals {
    pub mean: f64,
    pub second: f64,
    pub mean_p: f64,
    /// `Im <[M, p]>`
    pub comm: f64,
    /// `<{M, p}>`
    pub anticomm: f64,
    /// `Im <[M^2, p]>`
    pub comm_sq: f64,
    /// `<{M^2, p}>`
    pub anticomm_sq: f64,
}

impl MomentFunctionals {
    pub fn variance(&self) -> f64 {
        self.second - self.mean * self.mean
    }

    /// `<{M,p}> - 2<M><p>`
    pub fn covariance(&self) -> f64 {
        self.anticomm - 2.0 * self.mean * self.mean_p
    }

    /// `Im F(M)`; `F` is purely imaginary.
    pub fn f(&self) -> f64 {
        self.comm_sq - 2.0 * self.mean * self.comm
    }

    pub fn g(&self) -> f64 {
        self.anticomm_sq
            - 2.0 * self.mean * self.anticomm
            - 2.0 * self.mean_p * (self.second - 2.0 * self.mean * self.mean)
    }
}

/// `<psi| X Y |psi>` and `<psi| Y X |psi>` for Hermitian X and Y, returned as
/// the imaginary part of the commutator and the anticommutator.
fn orderings(psi: &[C64], x_of: &dyn Fn(&[C64]) -> Vec<C64>, p_of: &dyn Fn(&[C64]) -> Vec<C64>, dq: f64) -> Result<(f64, f64)> {
    let xp = inner(psi, &x_of(&p_of(psi)), dq);
    let px = inner(psi, &p_of(&x_of(psi)), dq);
    let comm = xp - px;
    let anti = xp + px;
    let scale = xp.norm() + px.norm();
    if comm.re.abs() > tolerances::COMMUTATOR_REAL * scale.max(1.0) {
        return Err(Error::CommutatorNotImaginary(comm.re));
    }
    if anti.im.abs() > tolerances::COMMUTATOR_REAL * scale.max(1.0) {
        return Err(Error::ImaginaryResidue(anti.im));
    }
    Ok((comm.im, anti.re))
}

/// Evaluates the mean/variance functionals of `M` on `phi`.
///
/// Each operator product is applied in the order written, `M` pointwise (Q)
/// or spectrally (P) and `p` spectrally, so both orderings are independent
/// numerical evaluations.
pub fn moment_functionals(phi: &PointerState, m: PointerObservable) -> Result<MomentFunctionals> {
    let grid = *phi.grid();
    let dq = grid.step;
    let psi = phi.psi();
    let sp = phi.spectral();
    let p_of = |v: &[C64]| sp.momentum(v);
    let q_of = |v: &[C64]| -> Vec<C64> { grid.positions().zip(v).map(|(q, z)| z * q).collect() };
    let m_of: Box<dyn Fn(&[C64]) -> Vec<C64>> = match m {
        PointerObservable::Q => Box::new(q_of),
        PointerObservable::P => Box::new(p_of),
    };
    let m2_of = |v: &[C64]| m_of(&m_of(v));

    let m_psi = m_of(psi);
    let mean_c = inner(psi, &m_psi, dq);
    let second_c = inner(&m_psi, &m_psi, dq);
    let mean_p = inner(psi, &p_of(psi), dq);
    for z in [mean_c, mean_p] {
        if z.im.abs() > tolerances::COMMUTATOR_REAL * z.norm().max(1.0) {
            return Err(Error::ImaginaryResidue(z.im));
        }
    }
    let (comm, anticomm) = orderings(psi, &*m_of, &p_of, dq)?;
    let (comm_sq, anticomm_sq) = orderings(psi, &m2_of, &p_of, dq)?;
    Ok(MomentFunctionals {
        mean: mean_c.re,
        second: second_c.re,
        mean_p: mean_p.re,
        comm,
        anticomm,
        comm_sq,
        anticomm_sq,
    })
}

/// First-order `<M>` after an impulsive momentum coupling of strength `gamma0`
/// to an observable with weak value `aw0`.
pub fn predict_mean(phi: &PointerState, m: PointerObservable, gamma0: f64, aw0: C64) -> Result<f64> {
    let f = moment_functionals(phi, m)?;
    let k = gamma0 / phi.hbar();
    // -i a <[M,p]> with <[M,p]> = i comm
    Ok(f.mean + k * aw0.re * f.comm + k * aw0.im * f.covariance())
}

/// First-order `Var(M)` after the same coupling.
pub fn predict_variance(phi: &PointerState, m: PointerObservable, gamma0: f64, aw0: C64) -> Result<f64> {
    let f = moment_functionals(phi, m)?;
    let k = gamma0 / phi.hbar();
    Ok(f.variance() + k * aw0.re * f.f() + k * aw0.im * f.g())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointer::state::{gaussian_pointer, pointer_moments, GaussianPointer, PointerGrid};

    fn gaussian(center_p: f64) -> PointerState {
        let grid = PointerGrid::spanning(-40.0, 40.0, 4096).unwrap();
        gaussian_pointer(
            GaussianPointer {
                center_p,
                ..Default::default()
            },
            grid,
        )
        .unwrap()
    }

    #[test]
    fn canonical_commutators() {
        let phi = gaussian(0.5);
        let q = moment_functionals(&phi, PointerObservable::Q).unwrap();
        let p = moment_functionals(&phi, PointerObservable::P).unwrap();
        assert!((q.comm - 1.0).abs() < 1e-10);
        assert!(p.comm.abs() < 1e-10);
        assert!(q.f().abs() < 1e-9);
        assert!(p.f().abs() < 1e-9);
    }

    #[test]
    fn real_weak_value_translates_position_only() {
        let phi = gaussian(0.0);
        let m = pointer_moments(&phi).unwrap();
        let aw = C64::new(1.25, 0.0);
        let q = predict_mean(&phi, PointerObservable::Q, 0.01, aw).unwrap();
        let p = predict_mean(&phi, PointerObservable::P, 0.01, aw).unwrap();
        assert!((q - m.mean_q - 0.0125).abs() < 1e-12);
        assert!((p - m.mean_p).abs() < 1e-12);
        let vq = predict_variance(&phi, PointerObservable::Q, 0.01, aw).unwrap();
        assert!((vq - m.var_q).abs() < 1e-12);
    }

    #[test]
    fn imaginary_weak_value_kicks_momentum() {
        let phi = gaussian(0.0);
        let m = pointer_moments(&phi).unwrap();
        let p = predict_mean(&phi, PointerObservable::P, 0.01, C64::i()).unwrap();
        assert!((p - m.mean_p - 0.005).abs() < 1e-12);
        let vp = predict_variance(&phi, PointerObservable::P, 0.01, C64::i()).unwrap();
        assert!((vp - m.var_p).abs() < 1e-12);
    }

    #[test]
    fn g_of_p_is_twice_third_moment() {
        let grid = PointerGrid::spanning(-40.0, 40.0, 4096).unwrap();
        let psi = grid
            .positions()
            .map(|q| C64::new(1.0, 0.3 * q) * (-q * q / 4.0).exp())
            .collect();
        let phi = PointerState::normalized(grid, psi, 1.0, 1.0).unwrap();
        let m = pointer_moments(&phi).unwrap();
        let f = moment_functionals(&phi, PointerObservable::P).unwrap();
        assert!(m.third_p.abs() > 1e-3);
        assert!((f.g() - 2.0 * m.third_p).abs() < 1e-10);
        assert!((f.covariance() - 2.0 * m.var_p).abs() < 1e-10);
    }
}
