use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::pps::TimeGrid;
use crate::tolerances;

/// Which pointer variable the observable couples to.
///
/// Coupling to momentum (`gamma A p`) translates the pointer position and
/// yields `q_w`; coupling to position (`-theta A q`) translates the momentum
/// and yields `p_w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Picture {
    MomentumCoupling,
    PositionCoupling,
}

impl Picture {
    pub fn as_str(&self) -> &'static str {
        match self {
            Picture::MomentumCoupling => "MOMENTUM_COUPLING",
            Picture::PositionCoupling => "POSITION_COUPLING",
        }
    }

    /// Name of the translation this coupling produces.
    pub fn translation_name(&self) -> &'static str {
        match self {
            Picture::MomentumCoupling => "q_w",
            Picture::PositionCoupling => "p_w",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingKind {
    Boxcar,
    Gaussian,
    Impulse,
}

impl CouplingKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CouplingKind::Boxcar => "BOXCAR",
            CouplingKind::Gaussian => "GAUSSIAN",
            CouplingKind::Impulse => "IMPULSE",
        }
    }
}

/// Real coupling strength `gamma(t)`, even about `t0`, whose time integral is
/// `strength`.
///
/// `epsilon` is the full width of a boxcar or the standard deviation of a
/// Gaussian; it is unused for an impulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingProfile {
    kind: CouplingKind,
    strength: f64,
    t0: f64,
    epsilon: f64,
    picture: Picture,
}

impl CouplingProfile {
    pub fn boxcar(strength: f64, t0: f64, width: f64, picture: Picture) -> Result<Self> {
        Self::build(CouplingKind::Boxcar, strength, t0, width, picture)
    }

    pub fn gaussian(strength: f64, t0: f64, sigma: f64, picture: Picture) -> Result<Self> {
        Self::build(CouplingKind::Gaussian, strength, t0, sigma, picture)
    }

    pub fn impulse(strength: f64, t0: f64, picture: Picture) -> Result<Self> {
        Self::build(CouplingKind::Impulse, strength, t0, 0.0, picture)
    }

    fn build(kind: CouplingKind, strength: f64, t0: f64, epsilon: f64, picture: Picture) -> Result<Self> {
        if !strength.is_finite() {
            return Err(Error::NonFinite("coupling strength"));
        }
        if !t0.is_finite() {
            return Err(Error::NonFinite("coupling t0"));
        }
        if kind != CouplingKind::Impulse && (!(epsilon > 0.0) || !epsilon.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("coupling width must be positive, got {epsilon}"),
            });
        }
        Ok(Self {
            kind,
            strength,
            t0,
            epsilon,
            picture,
        })
    }

    pub fn kind(&self) -> CouplingKind {
        self.kind
    }
    pub fn strength(&self) -> f64 {
        self.strength
    }
    pub fn t0(&self) -> f64 {
        self.t0
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn with_strength(self, strength: f64) -> Result<Self> {
        Self::build(self.kind, strength, self.t0, self.epsilon, self.picture)
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        Self::build(self.kind, self.strength, self.t0, epsilon, self.picture)
    }

    /// `gamma(t)`. Boxcar edges are inclusive.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.eval_offset(t - self.t0)
    }

    /// `gamma(t0 + tau)`; exactly even in `tau`.
    pub fn eval_offset(&self, tau: f64) -> Result<f64> {
        let tau = tau.abs();
        match self.kind {
            CouplingKind::Boxcar => {
                let half = 0.5 * self.epsilon;
                // slack keeps mirrored edge nodes on the same side after rounding
                if tau <= half * (1.0 + tolerances::GRID_ALIGNMENT) {
                    Ok(self.strength / self.epsilon)
                } else {
                    Ok(0.0)
                }
            }
            CouplingKind::Gaussian => {
                let s = self.epsilon;
                Ok(self.strength * (-0.5 * (tau / s).powi(2)).exp() / (s * (2.0 * PI).sqrt()))
            }
            CouplingKind::Impulse => Err(Error::ImpulseEvaluation),
        }
    }
}

/// Builds a grid centred on `t0` whose nodes include the boxcar edges
/// `t0 +- width/2`.
///
/// The requested step `half_width / ((n-1)/2)` is shrunk, if needed, to the
/// largest step dividing `width/2` evenly, and the half width is widened to a
/// whole number of such steps. Returns the grid and whether it differs from
/// the requested one.
pub fn align_grid_for_boxcar(t0: f64, half_width: f64, n: usize, width: f64) -> Result<(TimeGrid, bool)> {
    let requested = TimeGrid::new(t0, half_width, n)?;
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("boxcar width must be positive, got {width}"),
        });
    }
    let half = 0.5 * width;
    if half > half_width * (1.0 + tolerances::GRID_ALIGNMENT) {
        return Err(Error::SupportNotCovered(format!(
            "boxcar half width {half} exceeds grid half width {half_width}"
        )));
    }
    let steps = half / requested.step();
    if (steps - steps.round()).abs() <= tolerances::GRID_ALIGNMENT * steps.max(1.0) && steps.round() >= 1.0 {
        return Ok((requested, false));
    }
    let m = steps.ceil().max(1.0);
    let step = half / m;
    let per_side = (half_width / step * (1.0 - tolerances::GRID_ALIGNMENT)).ceil();
    let grid = TimeGrid::new(t0, per_side * step, 2 * per_side as usize + 1)?;
    Ok((grid, true))
}
