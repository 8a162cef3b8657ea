//! Finite-dimensional Hilbert-space primitives: pure states, Hermitian
//! observables and unitary propagation by exact spectral exponentiation.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tolerances;

/// A normalized pure state of dimension at least two.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::normalize(amplitudes).map(|(s, _)| s)
    }

    /// Like [`StateVector::new`], also returning the norm of the raw input.
    pub fn normalize(amplitudes: Vec<C64>) -> Result<(Self, f64)> {
        let dim = amplitudes.len();
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok((Self { amps: v.unscale(norm) }, norm))
    }

    /// Computational basis state `|k>`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: format!("basis index {k} out of range for dimension {dim}"),
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub(crate) fn from_vector_unchecked(amps: DVector<C64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// Multiplies every amplitude by `phase` (expected unimodular).
    pub fn with_global_phase(&self, phase: C64) -> Self {
        Self {
            amps: self.amps.map(|z| z * phase),
        }
    }
}

/// A Hermitian operator together with its spectral decomposition.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: DMatrix<C64>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C64>,
}

impl Observable {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("observable matrix"));
        }
        let max_deviation = hermitian_deviation(&matrix);
        if max_deviation > tolerances::HERMITIAN {
            return Err(Error::NotHermitian { max_deviation });
        }
        let symmetric = (&matrix + matrix.adjoint()).scale(0.5);
        let eig = SymmetricEigen::new(symmetric);
        Ok(Self {
            matrix,
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let n = rows.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, z) in row.iter().enumerate() {
                m[(i, j)] = *z;
            }
        }
        Self::new(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(DMatrix::zeros(dim, dim)).expect("zero matrix is Hermitian")
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim)).expect("identity is Hermitian")
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self::from_rows(&[&[o, l], &[l, o]]).expect("sigma_x is Hermitian")
    }

    pub fn pauli_y() -> Self {
        let (o, i) = (C64::new(0.0, 0.0), C64::new(0.0, 1.0));
        Self::from_rows(&[&[o, -i], &[i, o]]).expect("sigma_y is Hermitian")
    }

    pub fn pauli_z() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self::from_rows(&[&[l, o], &[o, -l]]).expect("sigma_z is Hermitian")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Eigenvalues in the order matching the columns of [`Observable::eigenvectors`].
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.matrix.scale(factor)).expect("real scaling keeps Hermiticity")
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, e| m.max(e.abs()))
    }
}

/// Largest elementwise modulus of `M - M†`.
pub fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `<bra|ket>`, conjugating the bra.
pub fn inner(bra: &StateVector, ket: &StateVector) -> Result<C64> {
    check_dim(bra.dim(), ket.dim())?;
    Ok(bra.amps.dotc(&ket.amps))
}

/// `<bra|X|ket>` for an arbitrary (not necessarily Hermitian) matrix `X`.
pub fn sandwich(bra: &StateVector, op: &DMatrix<C64>, ket: &StateVector) -> Result<C64> {
    check_dim(bra.dim(), ket.dim())?;
    check_dim(bra.dim(), op.nrows())?;
    check_dim(op.nrows(), op.ncols())?;
    Ok(bra.amps.dotc(&(op * &ket.amps)))
}

/// `<psi|A|psi>`; the imaginary residue is checked and discarded.
pub fn expectation(state: &StateVector, obs: &Observable) -> Result<f64> {
    let z = sandwich(state, obs.matrix(), state)?;
    let scale = 1.0f64.max(obs.max_abs_eigenvalue());
    if z.im.abs() > tolerances::EXPECTATION_IMAG * scale {
        return Err(Error::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

/// `exp(-i H dt / hbar) |state>`. Negative `dt` propagates backwards.
pub fn evolve(state: &StateVector, h: &Observable, dt: f64, hbar: f64) -> Result<StateVector> {
    check_dim(h.dim(), state.dim())?;
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter {
            name: "hbar",
            reason: format!("must be positive, got {hbar}"),
        });
    }
    if !dt.is_finite() {
        return Err(Error::NonFinite("dt"));
    }
    if dt == 0.0 {
        return Ok(state.clone());
    }
    let v = h.eigenvectors();
    let mut coeffs = v.ad_mul(&state.amps);
    for (c, &e) in coeffs.iter_mut().zip(h.eigenvalues()) {
        *c *= C64::from_polar(1.0, -e * dt / hbar);
    }
    Ok(StateVector::from_vector_unchecked(v * coeffs))
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
