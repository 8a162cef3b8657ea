//! Scenario files.
//!
//! A scenario is a JSON document with five sections. Complex entries are
//! written either as a bare real number or as a `[re, im]` pair; matrices are
//! arrays of rows.
//!
//! ```json
//! {
//!   "system":   { "hbar": 1, "omega": 1, "pre": [...], "post": [...],
//!                 "H_i": [[...]], "H_f": [[...]], "A": [[...]] },
//!   "timing":   { "t0": 2, "dt_i": 0, "dt_f": 0.5, "half_width": 0.5, "n": 1001 },
//!   "coupling": { "kind": "BOXCAR", "gamma0": 1, "epsilon": 0.1, "picture": "MOMENTUM_COUPLING" },
//!   "pointer":  { "var_q": 1, "center_q": 0, "center_p": 0, "mass": 1, "gamma0": 0.01,
//!                 "grid": { "min": -40, "max": 40, "n": 4096 } },
//!   "run":      { "outputs": ["SERIES_CSV", "SYMMETRY_JSON", "POINTER_JSON"],
//!                 "tolerance": 1e-9, "reference": "PT_EXAMPLE",
//!                 "sweeps": { "gamma0": [...], "epsilon": [...], "omega": [...] } }
//! }
//! ```
//!
//! Only `system.pre`, `system.post`, `system.A` and `timing.t0` are required.

use std::path::Path;

use log::warn;
use nalgebra::DMatrix;
use serde::Deserialize;
use weakval_core::pointer::{
    align_grid_for_boxcar, CouplingKind, CouplingProfile, GaussianPointer, Illustration, Picture, PointerGrid,
};
use weakval_core::{tolerances, Observable, PpsScenario, StateVector, TimeGrid, C64};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Output {
    SeriesCsv,
    SymmetryJson,
    PointerJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Gamma0,
    Epsilon,
    Omega,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::Gamma0 => "gamma0",
            SweepParam::Epsilon => "epsilon",
            SweepParam::Omega => "omega",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn value(&self) -> C64 {
        match *self {
            Entry::Real(re) => C64::new(re, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    system: RawSystem,
    timing: RawTiming,
    #[serde(default)]
    coupling: RawCoupling,
    #[serde(default)]
    pointer: RawPointer,
    #[serde(default)]
    run: RawRun,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    dim: Option<usize>,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default = "one")]
    omega: f64,
    pre: Vec<Entry>,
    post: Vec<Entry>,
    #[serde(rename = "H_i")]
    h_i: Option<Vec<Vec<Entry>>>,
    #[serde(rename = "H_f")]
    h_f: Option<Vec<Vec<Entry>>>,
    #[serde(rename = "A")]
    a: Vec<Vec<Entry>>,
    overlap_floor: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTiming {
    t0: f64,
    #[serde(default)]
    dt_i: f64,
    #[serde(default)]
    dt_f: f64,
    #[serde(default = "one")]
    half_width: f64,
    #[serde(default = "default_n")]
    n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoupling {
    #[serde(default = "default_kind")]
    kind: String,
    #[serde(default = "default_gamma0")]
    gamma0: f64,
    epsilon: Option<f64>,
    #[serde(default = "default_picture")]
    picture: String,
}

impl Default for RawCoupling {
    fn default() -> Self {
        Self {
            kind: default_kind(),
            gamma0: default_gamma0(),
            epsilon: None,
            picture: default_picture(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPointer {
    #[serde(default = "one")]
    var_q: f64,
    #[serde(default)]
    center_q: f64,
    #[serde(default)]
    center_p: f64,
    #[serde(default = "one")]
    mass: f64,
    #[serde(default = "default_gamma0")]
    gamma0: f64,
    #[serde(default)]
    grid: RawPointerGrid,
}

impl Default for RawPointer {
    fn default() -> Self {
        Self {
            var_q: 1.0,
            center_q: 0.0,
            center_p: 0.0,
            mass: 1.0,
            gamma0: default_gamma0(),
            grid: RawPointerGrid::default(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPointerGrid {
    min: f64,
    max: f64,
    n: usize,
}

impl Default for RawPointerGrid {
    fn default() -> Self {
        Self {
            min: -40.0,
            max: 40.0,
            n: 4096,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    outputs: Option<Vec<Output>>,
    tolerance: Option<f64>,
    reference: Option<String>,
    #[serde(default)]
    sweeps: RawSweeps,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweeps {
    gamma0: Option<Vec<f64>>,
    epsilon: Option<Vec<f64>>,
    omega: Option<Vec<f64>>,
}

fn one() -> f64 {
    1.0
}
fn default_n() -> usize {
    1001
}
fn default_kind() -> String {
    "IMPULSE".into()
}
fn default_gamma0() -> f64 {
    0.01
}
fn default_picture() -> String {
    "MOMENTUM_COUPLING".into()
}

/// Timing section as written, kept so sweeps can rebuild aligned grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub t0: f64,
    pub half_width: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sweeps {
    pub gamma0: Option<Vec<f64>>,
    pub epsilon: Option<Vec<f64>>,
    pub omega: Option<Vec<f64>>,
}

impl Sweeps {
    pub fn get(&self, p: SweepParam) -> Option<&[f64]> {
        match p {
            SweepParam::Gamma0 => self.gamma0.as_deref(),
            SweepParam::Epsilon => self.epsilon.as_deref(),
            SweepParam::Omega => self.omega.as_deref(),
        }
    }
}

/// Validated scenario.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Scenario with unscaled generators; see [`RunConfig::scenario_at`].
    pub base: PpsScenario,
    pub omega: f64,
    pub timing: Timing,
    pub grid: TimeGrid,
    pub grid_refined: bool,
    pub coupling: CouplingProfile,
    pub pointer: GaussianPointer,
    pub pointer_grid: PointerGrid,
    pub pointer_gamma0: f64,
    pub sweeps: Sweeps,
    pub outputs: Vec<Output>,
    pub tolerance: f64,
    pub reference: Option<Illustration>,
    pub notes: Vec<String>,
}

impl RunConfig {
    /// Scenario with generators scaled by `omega`.
    pub fn scenario_at(&self, omega: f64) -> PpsScenario {
        self.base.with_generators_scaled(omega)
    }

    pub fn scenario(&self) -> PpsScenario {
        self.scenario_at(self.omega)
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }

    /// Time grid for a coupling, aligned to boxcar edges when needed.
    pub fn grid_for(&self, coupling: &CouplingProfile) -> Result<(TimeGrid, bool), weakval_core::Error> {
        let Timing { t0, half_width, n } = self.timing;
        match coupling.kind() {
            CouplingKind::Boxcar => align_grid_for_boxcar(t0, half_width, n, coupling.epsilon()),
            _ => Ok((TimeGrid::new(t0, half_width, n)?, false)),
        }
    }
}

pub fn parse_scenario(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<RunConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Config {
            field: path,
            line: inner.line(),
            message: inner.to_string(),
        }
    })?;
    Builder { text, notes: vec![] }.build(raw)
}

struct Builder<'a> {
    text: &'a str,
    notes: Vec<String>,
}

impl Builder<'_> {
    /// First line mentioning `"key"`, for semantic errors.
    fn line_of(&self, key: &str) -> usize {
        let needle = format!("\"{key}\"");
        self.text
            .lines()
            .position(|l| l.contains(&needle))
            .map_or(0, |i| i + 1)
    }

    fn fail(&self, field: &str, message: impl Into<String>) -> CliError {
        let key = field.rsplit('.').next().unwrap_or(field);
        CliError::Config {
            field: field.to_string(),
            line: self.line_of(key),
            message: message.into(),
        }
    }

    fn state(&mut self, field: &str, entries: &[Entry], dim: usize) -> Result<StateVector, CliError> {
        if entries.len() != dim {
            return Err(self.fail(field, format!("expected {dim} amplitudes, found {}", entries.len())));
        }
        let (state, norm) = StateVector::normalize(entries.iter().map(Entry::value).collect())
            .map_err(|e| self.fail(field, e.to_string()))?;
        if (norm - 1.0).abs() > tolerances::RENORMALIZATION_WARNING {
            warn!("{field} renormalized from norm {norm}");
            self.notes.push(format!("{field} renormalized from norm {norm:.6}"));
        }
        Ok(state)
    }

    fn matrix(&self, field: &str, rows: &[Vec<Entry>], dim: usize) -> Result<Observable, CliError> {
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(self.fail(field, format!("expected a {dim}x{dim} matrix")));
        }
        let m = DMatrix::from_fn(dim, dim, |i, j| rows[i][j].value());
        Observable::new(m).map_err(|e| self.fail(field, e.to_string()))
    }

    fn positive(&self, field: &str, x: f64) -> Result<f64, CliError> {
        if x > 0.0 && x.is_finite() {
            Ok(x)
        } else {
            Err(self.fail(field, format!("must be positive, got {x}")))
        }
    }

    fn sweep(&self, field: &str, values: Option<Vec<f64>>) -> Result<Option<Vec<f64>>, CliError> {
        match values {
            Some(v) if v.is_empty() => Err(self.fail(field, "sweep list is empty")),
            Some(v) if v.iter().any(|x| !x.is_finite()) => Err(self.fail(field, "sweep values must be finite")),
            other => Ok(other),
        }
    }

    fn build(mut self, raw: RawFile) -> Result<RunConfig, CliError> {
        let sys = raw.system;
        let dim = sys.dim.unwrap_or(sys.pre.len());
        if dim < 2 {
            return Err(self.fail("system.dim", format!("dimension must be at least 2, got {dim}")));
        }
        let hbar = self.positive("system.hbar", sys.hbar)?;
        if !sys.omega.is_finite() {
            return Err(self.fail("system.omega", "must be finite"));
        }
        let pre = self.state("system.pre", &sys.pre, dim)?;
        let post = self.state("system.post", &sys.post, dim)?;
        let zeros = || Observable::zeros(dim);
        let h_i = match &sys.h_i {
            Some(rows) => self.matrix("system.H_i", rows, dim)?,
            None => zeros(),
        };
        let h_f = match &sys.h_f {
            Some(rows) => self.matrix("system.H_f", rows, dim)?,
            None => zeros(),
        };
        let a = self.matrix("system.A", &sys.a, dim)?;

        let t = raw.timing;
        if !t.t0.is_finite() {
            return Err(self.fail("timing.t0", "must be finite"));
        }
        let mut base = PpsScenario::new(pre, post, h_i, h_f, a)
            .and_then(|s| s.with_offsets(t.dt_i, t.dt_f))
            .map_err(|e| self.fail("timing.dt_i", e.to_string()))?
            .with_hbar(hbar)
            .map_err(|e| self.fail("system.hbar", e.to_string()))?
            .with_reference_time(t.t0);
        if let Some(floor) = sys.overlap_floor {
            base = base
                .with_overlap_floor(floor)
                .map_err(|e| self.fail("system.overlap_floor", e.to_string()))?;
        }

        let c = raw.coupling;
        let picture = match c.picture.as_str() {
            "MOMENTUM_COUPLING" => Picture::MomentumCoupling,
            "POSITION_COUPLING" => Picture::PositionCoupling,
            other => return Err(self.fail("coupling.picture", format!("unknown picture {other:?}"))),
        };
        let need_eps = |b: &Self| {
            c.epsilon
                .ok_or_else(|| b.fail("coupling.epsilon", format!("required for {} coupling", c.kind)))
        };
        let coupling = match c.kind.as_str() {
            "BOXCAR" => CouplingProfile::boxcar(c.gamma0, t.t0, need_eps(&self)?, picture),
            "GAUSSIAN" => CouplingProfile::gaussian(c.gamma0, t.t0, need_eps(&self)?, picture),
            "IMPULSE" => CouplingProfile::impulse(c.gamma0, t.t0, picture),
            other => return Err(self.fail("coupling.kind", format!("unknown coupling kind {other:?}"))),
        }
        .map_err(|e| self.fail("coupling", e.to_string()))?;

        let timing = Timing {
            t0: t.t0,
            half_width: t.half_width,
            n: t.n,
        };

        let p = raw.pointer;
        let pointer = GaussianPointer {
            center_q: p.center_q,
            center_p: p.center_p,
            var_q: self.positive("pointer.var_q", p.var_q)?,
            mass: self.positive("pointer.mass", p.mass)?,
            hbar,
        };
        let pointer_grid = PointerGrid::spanning(p.grid.min, p.grid.max, p.grid.n)
            .map_err(|e| self.fail("pointer.grid", e.to_string()))?;
        weakval_core::pointer::gaussian_pointer(pointer, pointer_grid)
            .map_err(|e| self.fail("pointer.grid", e.to_string()))?;
        if !p.gamma0.is_finite() {
            return Err(self.fail("pointer.gamma0", "must be finite"));
        }

        let r = raw.run;
        let tolerance = self.positive("run.tolerance", r.tolerance.unwrap_or(tolerances::DEFAULT_SYMMETRY))?;
        let mut outputs = r
            .outputs
            .unwrap_or_else(|| vec![Output::SeriesCsv, Output::SymmetryJson, Output::PointerJson]);
        outputs.sort();
        outputs.dedup();
        let reference = match r.reference.as_deref() {
            None => None,
            Some("PT_EXAMPLE") => Some(Illustration::PtExample),
            Some("ANTI_PT_EXAMPLE") => Some(Illustration::AntiPtExample),
            Some(other) => return Err(self.fail("run.reference", format!("unknown reference {other:?}"))),
        };
        if reference.is_some() && coupling.kind() != CouplingKind::Boxcar {
            return Err(self.fail("run.reference", "closed forms exist for BOXCAR coupling only"));
        }
        let sweeps = Sweeps {
            gamma0: self.sweep("run.sweeps.gamma0", r.sweeps.gamma0)?,
            epsilon: self.sweep("run.sweeps.epsilon", r.sweeps.epsilon)?,
            omega: self.sweep("run.sweeps.omega", r.sweeps.omega)?,
        };

        let mut config = RunConfig {
            base,
            omega: sys.omega,
            timing,
            grid: TimeGrid::new(t.t0, 1.0, 3).expect("placeholder grid"),
            grid_refined: false,
            coupling,
            pointer,
            pointer_grid,
            pointer_gamma0: p.gamma0,
            sweeps,
            outputs,
            tolerance,
            reference,
            notes: vec![],
        };
        let (grid, refined) = config
            .grid_for(&coupling)
            .map_err(|e| self.fail("timing", e.to_string()))?;
        if refined {
            self.notes.push(format!(
                "time grid refined to step {:.6e} and {} samples so boxcar edges land on nodes",
                grid.step(),
                grid.len()
            ));
        }
        config.grid = grid;
        config.grid_refined = refined;
        config.notes = self.notes;
        Ok(config)
    }
}
