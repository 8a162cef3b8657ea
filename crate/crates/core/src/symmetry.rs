//! Time-symmetry certification of sampled weak values and of the coefficient
//! `c(t) = gamma(t) A_w(t)` of the non-Hermitian weak interaction Hamiltonians.
//!
//! A series is *even Hermitian* about `t0` when `A_w(t0 - tau)* = A_w(t0 + tau)`
//! and *odd Hermitian* when `A_w(t0 - tau)* = -A_w(t0 + tau)`. The former is
//! equivalent to PT symmetry of `gamma A_w p` and `-theta A_w q`, and to
//! `Re A_w` even with `Im A_w` odd; the latter to anti-PT symmetry and to
//! `Re A_w` odd with `Im A_w` even.
//!
//! Residuals are sup-norms over mirrored sample pairs, taken over the real and
//! imaginary components separately (the sup-norm of the series viewed as a
//! real vector) and normalized by `sup |A_w|`. With this norm the Hermitian
//! residual is exactly the larger of the two component residuals, so the
//! Hermitian and component-wise verdicts coincide at equal tolerance.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::pointer::coupling::{CouplingKind, CouplingProfile, Picture};
use crate::pps::{TimeGrid, WeakValueSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pt,
    AntiPt,
    Both,
    Neither,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pt => "PT",
            Verdict::AntiPt => "ANTI_PT",
            Verdict::Both => "BOTH",
            Verdict::Neither => "NEITHER",
        }
    }

    fn from_flags(pt: bool, anti: bool) -> Self {
        match (pt, anti) {
            (true, true) => Verdict::Both,
            (true, false) => Verdict::Pt,
            (false, true) => Verdict::AntiPt,
            (false, false) => Verdict::Neither,
        }
    }

    /// Which part of the pointer translations `q_w`, `p_w` must vanish.
    pub fn predicted_vanishing(&self) -> Vanishing {
        match self {
            Verdict::Pt => Vanishing::ImaginaryPart,
            Verdict::AntiPt => Vanishing::RealPart,
            Verdict::Both => Vanishing::Both,
            Verdict::Neither => Vanishing::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vanishing {
    ImaginaryPart,
    RealPart,
    Both,
    None,
}

impl Vanishing {
    pub fn as_str(&self) -> &'static str {
        match self {
            Vanishing::ImaginaryPart => "IMAGINARY_PART",
            Vanishing::RealPart => "REAL_PART",
            Vanishing::Both => "BOTH",
            Vanishing::None => "NONE",
        }
    }

    /// Whether a measured translation is consistent with this prediction, with
    /// `tol` an absolute bound on the parts predicted to vanish.
    pub fn holds_for(&self, translation: C64, tol: f64) -> bool {
        match self {
            Vanishing::ImaginaryPart => translation.im.abs() <= tol,
            Vanishing::RealPart => translation.re.abs() <= tol,
            Vanishing::Both => translation.re.abs() <= tol && translation.im.abs() <= tol,
            Vanishing::None => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub verdict: Verdict,
    pub pt_residual: f64,
    pub anti_pt_residual: f64,
    pub re_even_residual: f64,
    pub re_odd_residual: f64,
    pub im_even_residual: f64,
    pub im_odd_residual: f64,
    pub predicted_vanishing: Vanishing,
    pub tolerance: f64,
}

impl SymmetryReport {
    /// Verdict reached from the real/imaginary parity residuals alone.
    pub fn component_verdict(&self) -> Verdict {
        let tol = self.tolerance;
        Verdict::from_flags(
            self.re_even_residual <= tol && self.im_odd_residual <= tol,
            self.re_odd_residual <= tol && self.im_even_residual <= tol,
        )
    }
}

/// Mirror decomposition `v = even + odd` about the grid centre.
pub fn even_odd_decompose(series: &WeakValueSeries) -> (WeakValueSeries, WeakValueSeries) {
    let grid = *series.grid();
    let v = series.values();
    let even = (0..v.len())
        .map(|k| (v[k] + v[grid.mirror(k)]) * 0.5)
        .collect();
    let odd = (0..v.len())
        .map(|k| (v[k] - v[grid.mirror(k)]) * 0.5)
        .collect();
    (
        WeakValueSeries::new(grid, even).expect("same length"),
        WeakValueSeries::new(grid, odd).expect("same length"),
    )
}

fn component_sup(z: C64) -> f64 {
    z.re.abs().max(z.im.abs())
}

fn check_tolerance(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tolerance",
            reason: format!("must be positive, got {tol}"),
        });
    }
    Ok(())
}

pub fn classify(series: &WeakValueSeries, tolerance: f64) -> Result<SymmetryReport> {
    check_tolerance(tolerance)?;
    let grid = series.grid();
    let v = series.values();
    let scale = series.sup_norm();
    if !scale.is_finite() {
        return Err(Error::NonFinite("weak value series"));
    }
    if scale == 0.0 {
        return Ok(SymmetryReport {
            verdict: Verdict::Both,
            pt_residual: 0.0,
            anti_pt_residual: 0.0,
            re_even_residual: 0.0,
            re_odd_residual: 0.0,
            im_even_residual: 0.0,
            im_odd_residual: 0.0,
            predicted_vanishing: Vanishing::Both,
            tolerance,
        });
    }

    let mut r = [0.0f64; 6];
    for k in 0..v.len() {
        let (here, there) = (v[k], v[grid.mirror(k)]);
        r[0] = r[0].max(component_sup(there.conj() - here));
        r[1] = r[1].max(component_sup(there.conj() + here));
        r[2] = r[2].max((there.re - here.re).abs());
        r[3] = r[3].max((there.re + here.re).abs());
        r[4] = r[4].max((there.im - here.im).abs());
        r[5] = r[5].max((there.im + here.im).abs());
    }
    let [pt, anti, re_even, re_odd, im_even, im_odd] = r.map(|x| x / scale);
    let verdict = Verdict::from_flags(pt <= tolerance, anti <= tolerance);
    let report = SymmetryReport {
        verdict,
        pt_residual: pt,
        anti_pt_residual: anti,
        re_even_residual: re_even,
        re_odd_residual: re_odd,
        im_even_residual: im_even,
        im_odd_residual: im_odd,
        predicted_vanishing: verdict.predicted_vanishing(),
        tolerance,
    };
    debug_assert_eq!(report.verdict, report.component_verdict());
    Ok(report)
}

/// Samples of the weak-Hamiltonian coefficient `c(t) = gamma(t) A_w(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    grid: TimeGrid,
    coeff: Vec<C64>,
    picture: Picture,
}

impl CoefficientSeries {
    pub fn new(grid: TimeGrid, coeff: Vec<C64>, picture: Picture) -> Result<Self> {
        if coeff.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: coeff.len(),
            });
        }
        Ok(Self {
            grid,
            coeff,
            picture,
        })
    }

    /// `gamma(t) A_w(t)` sampled on the series grid.
    pub fn from_coupling(series: &WeakValueSeries, coupling: &CouplingProfile) -> Result<Self> {
        if coupling.kind() == CouplingKind::Impulse {
            return Err(Error::ImpulseEvaluation);
        }
        let grid = series.grid();
        let coeff = (0..grid.len())
            .zip(series.values())
            .map(|(k, a)| Ok(*a * coupling.eval_offset(grid.offset(k))?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(*series.grid(), coeff, coupling.picture())
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }
    pub fn coefficients(&self) -> &[C64] {
        &self.coeff
    }
    pub fn picture(&self) -> Picture {
        self.picture
    }
}

/// Coefficients of the PT-transformed weak Hamiltonian,
/// `c_PT(t0 + tau) = c(t0 - tau)*`.
///
/// Valid only for an even coupling; the caller certifies this. Parity and
/// time reversal both flip the sign of `p` (and of `q`), so the operator part
/// is unchanged.
pub fn pt_transform(coeff: &CoefficientSeries, coupling_even_certified: bool) -> Result<CoefficientSeries> {
    if !coupling_even_certified {
        return Err(Error::CouplingNotCertified);
    }
    let grid = coeff.grid;
    let c = &coeff.coeff;
    let transformed = (0..c.len()).map(|k| c[grid.mirror(k)].conj()).collect();
    CoefficientSeries::new(grid, transformed, coeff.picture)
}

fn pt_defect(coeff: &CoefficientSeries, sign: f64) -> Result<(f64, f64)> {
    let transformed = pt_transform(coeff, true)?;
    let defect = transformed
        .coeff
        .iter()
        .zip(&coeff.coeff)
        .fold(0.0f64, |m, (a, b)| m.max(component_sup(a - b * sign)));
    let scale = coeff.coeff.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    Ok((defect, scale))
}

/// `H_PT == H` within `tol` relative to `sup |c|`.
pub fn is_pt_symmetric(coeff: &CoefficientSeries, tol: f64) -> Result<bool> {
    check_tolerance(tol)?;
    let (defect, scale) = pt_defect(coeff, 1.0)?;
    Ok(defect <= tol * scale)
}

/// `H_PT == -H` within `tol` relative to `sup |c|`.
pub fn is_anti_pt_symmetric(coeff: &CoefficientSeries, tol: f64) -> Result<bool> {
    check_tolerance(tol)?;
    let (defect, scale) = pt_defect(coeff, -1.0)?;
    Ok(defect <= tol * scale)
}
