//! Pre- and post-selected (PPS) boundary propagation and time-dependent weak
//! values.
//!
//! A scenario fixes a reference time `t_ref`. The pre-selected state is given at
//! `t_ref - dt_pre` and the post-selected state at `t_ref + dt_post`. Sweeping the
//! measurement time `t` slides the whole window: both boundary states are carried
//! along by their own generators, so at time `t`
//!
//! ```text
//! |psi_i(t)> = exp(-i H_i (t - t_ref + dt_pre) / hbar) |pre>
//! |psi_f(t)> = exp(-i H_f (t - t_ref - dt_post) / hbar) |post>
//! ```
//!
//! and `A_w(t) = <psi_f(t)|A|psi_i(t)> / <psi_f(t)|psi_i(t)>`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::quantum::{evolve, inner, sandwich, Observable, StateVector};
use crate::tolerances;

#[derive(Debug, Clone)]
pub struct PpsScenario {
    pre: StateVector,
    post: StateVector,
    h_pre: Observable,
    h_post: Observable,
    observable: Observable,
    dt_pre: f64,
    dt_post: f64,
    hbar: f64,
    overlap_floor: f64,
    t_ref: f64,
}

impl PpsScenario {
    /// Scenario with zero offsets, `hbar = 1`, `t_ref = 0` and the default
    /// overlap floor.
    pub fn new(
        pre: StateVector,
        post: StateVector,
        h_pre: Observable,
        h_post: Observable,
        observable: Observable,
    ) -> Result<Self> {
        let dim = pre.dim();
        for found in [post.dim(), h_pre.dim(), h_post.dim(), observable.dim()] {
            if found != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found,
                });
            }
        }
        Ok(Self {
            pre,
            post,
            h_pre,
            h_post,
            observable,
            dt_pre: 0.0,
            dt_post: 0.0,
            hbar: 1.0,
            overlap_floor: tolerances::DEFAULT_OVERLAP_FLOOR,
            t_ref: 0.0,
        })
    }

    pub fn with_offsets(mut self, dt_pre: f64, dt_post: f64) -> Result<Self> {
        for (name, v) in [("dt_i", dt_pre), ("dt_f", dt_post)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("offset must be finite and >= 0, got {v}"),
                });
            }
        }
        self.dt_pre = dt_pre;
        self.dt_post = dt_post;
        Ok(self)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidParameter {
                name: "hbar",
                reason: format!("must be positive, got {hbar}"),
            });
        }
        self.hbar = hbar;
        Ok(self)
    }

    pub fn with_overlap_floor(mut self, floor: f64) -> Result<Self> {
        if !(floor > 0.0) || !floor.is_finite() {
            return Err(Error::InvalidParameter {
                name: "overlap_floor",
                reason: format!("must be positive, got {floor}"),
            });
        }
        self.overlap_floor = floor;
        Ok(self)
    }

    /// Time at which the boundary states sit exactly `dt_pre` before and
    /// `dt_post` after the measurement.
    pub fn with_reference_time(mut self, t_ref: f64) -> Self {
        self.t_ref = t_ref;
        self
    }

    pub fn pre(&self) -> &StateVector {
        &self.pre
    }
    pub fn post(&self) -> &StateVector {
        &self.post
    }
    pub fn h_pre(&self) -> &Observable {
        &self.h_pre
    }
    pub fn h_post(&self) -> &Observable {
        &self.h_post
    }
    pub fn observable(&self) -> &Observable {
        &self.observable
    }
    pub fn dt_pre(&self) -> f64 {
        self.dt_pre
    }
    pub fn dt_post(&self) -> f64 {
        self.dt_post
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn overlap_floor(&self) -> f64 {
        self.overlap_floor
    }
    pub fn reference_time(&self) -> f64 {
        self.t_ref
    }
    pub fn dim(&self) -> usize {
        self.pre.dim()
    }

    /// Copy with the measured observable replaced.
    pub fn with_observable(&self, observable: Observable) -> Result<Self> {
        if observable.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: observable.dim(),
            });
        }
        Ok(Self {
            observable,
            ..self.clone()
        })
    }

    /// Copy with both boundary generators multiplied by `factor`.
    pub fn with_generators_scaled(&self, factor: f64) -> Self {
        Self {
            h_pre: self.h_pre.scaled(factor),
            h_post: self.h_post.scaled(factor),
            ..self.clone()
        }
    }

    /// Copy with the boundary states replaced by `(pre, post)`.
    pub fn with_boundaries(&self, pre: StateVector, post: StateVector) -> Result<Self> {
        Self::new(
            pre,
            post,
            self.h_pre.clone(),
            self.h_post.clone(),
            self.observable.clone(),
        )
        .map(|s| Self {
            pre: s.pre,
            post: s.post,
            ..self.clone()
        })
    }
}

/// Both boundary states propagated to the measurement time `t`.
pub fn evolve_pps(s: &PpsScenario, t: f64) -> Result<(StateVector, StateVector)> {
    let tau = t - s.t_ref;
    let pre = evolve(&s.pre, &s.h_pre, tau + s.dt_pre, s.hbar)?;
    let post = evolve(&s.post, &s.h_post, tau - s.dt_post, s.hbar)?;
    Ok((pre, post))
}

/// Weak value `<psi_f|X|psi_i> / <psi_f|psi_i>` of an arbitrary matrix at time `t`.
pub fn weak_value_of(s: &PpsScenario, op: &DMatrix<C64>, t: f64) -> Result<C64> {
    let (pre, post) = evolve_pps(s, t)?;
    let overlap = checked_overlap(s, &pre, &post, t)?;
    Ok(sandwich(&post, op, &pre)? / overlap)
}

pub fn weak_value(s: &PpsScenario, t: f64) -> Result<C64> {
    weak_value_of(s, s.observable.matrix(), t)
}

/// Weak value of `H_f - H_i`.
pub fn weak_energy(s: &PpsScenario, t: f64) -> Result<C64> {
    let diff = s.h_post.matrix() - s.h_pre.matrix();
    weak_value_of(s, &diff, t)
}

/// Analytic `dA_w/dt = (i/hbar) [ (H_f A - A H_i)_w - (H_f - H_i)_w A_w ]`.
pub fn weak_value_derivative(s: &PpsScenario, t: f64) -> Result<C64> {
    let (pre, post) = evolve_pps(s, t)?;
    let overlap = checked_overlap(s, &pre, &post, t)?;
    let a = s.observable.matrix();
    let hf = s.h_post.matrix();
    let hi = s.h_pre.matrix();
    let w = |op: &DMatrix<C64>| -> Result<C64> { Ok(sandwich(&post, op, &pre)? / overlap) };
    let transport = w(&(hf * a - a * hi))?;
    let energy = w(&(hf - hi))?;
    let aw = w(a)?;
    Ok(C64::new(0.0, 1.0 / s.hbar) * (transport - energy * aw))
}

/// Default central-difference step at time `t`.
pub fn default_fd_step(t: f64) -> f64 {
    tolerances::FD_STEP * t.abs().max(1.0)
}

/// Central difference `(A_w(t+h) - A_w(t-h)) / 2h`.
pub fn weak_value_central_difference(s: &PpsScenario, t: f64, h: f64) -> Result<C64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter {
            name: "h",
            reason: format!("finite-difference step must be positive, got {h}"),
        });
    }
    let up = weak_value(s, t + h)?;
    let down = weak_value(s, t - h)?;
    Ok((up - down) / (2.0 * h))
}

fn checked_overlap(s: &PpsScenario, pre: &StateVector, post: &StateVector, t: f64) -> Result<C64> {
    let overlap = inner(post, pre)?;
    if overlap.norm() < s.overlap_floor {
        return Err(Error::NearOrthogonal {
            t,
            overlap: overlap.norm(),
        });
    }
    Ok(overlap)
}

/// Uniform odd-length sampling symmetric about `t0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    half_width: f64,
    n: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, half_width: f64, n: usize) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::NonFinite("t0"));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter {
                name: "half_width",
                reason: format!("must be positive, got {half_width}"),
            });
        }
        if n < 3 || n % 2 == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("sample count must be odd and >= 3, got {n}"),
            });
        }
        Ok(Self { t0, half_width, n })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }
    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }
    pub fn center_index(&self) -> usize {
        (self.n - 1) / 2
    }
    /// Index of the sample mirrored through `t0`.
    pub fn mirror(&self, k: usize) -> usize {
        self.n - 1 - k
    }
    /// `t_k - t0`; exactly antisymmetric under [`TimeGrid::mirror`].
    pub fn offset(&self, k: usize) -> f64 {
        (k as f64 - self.center_index() as f64) * self.step()
    }
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + self.offset(k)
    }
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.time(k))
    }
}

/// Complex samples of a weak value (or any complex profile) on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeakValueSeries {
    grid: TimeGrid,
    values: Vec<C64>,
}

impl WeakValueSeries {
    pub fn new(grid: TimeGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(t - t0)` on the grid.
    pub fn from_offsets(grid: TimeGrid, f: impl Fn(f64) -> C64) -> Self {
        let values = (0..grid.len()).map(|k| f(grid.offset(k))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }
    pub fn values(&self) -> &[C64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    /// Position profile `Re A_w(t)`.
    pub fn re_profile(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }
    /// Momentum profile `Im A_w(t)`.
    pub fn im_profile(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.im).collect()
    }
    /// Value at the grid centre `t0`.
    pub fn at_center(&self) -> C64 {
        self.values[self.grid.center_index()]
    }
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

fn series_of(
    grid: &TimeGrid,
    f: impl Fn(f64) -> Result<C64>,
) -> Result<WeakValueSeries> {
    let values = grid.times().map(f).collect::<Result<Vec<_>>>()?;
    WeakValueSeries::new(*grid, values)
}

pub fn weak_value_series(s: &PpsScenario, grid: &TimeGrid) -> Result<WeakValueSeries> {
    series_of(grid, |t| weak_value(s, t))
}

pub fn weak_value_derivative_series(s: &PpsScenario, grid: &TimeGrid) -> Result<WeakValueSeries> {
    series_of(grid, |t| weak_value_derivative(s, t))
}

pub fn weak_energy_series(s: &PpsScenario, grid: &TimeGrid) -> Result<WeakValueSeries> {
    series_of(grid, |t| weak_energy(s, t))
}
