use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::Value;
use weakval_core::pointer::{
    closed_form_translation, exact_pointer, gaussian_pointer, pointer_moments, pointer_translation, predict_mean,
    predict_variance, CouplingKind, PointerMomentReport, PointerObservable, PointerState,
};
use weakval_core::{
    classify, weak_energy_series, weak_value_derivative_series, weak_value_series, SymmetryReport, TimeGrid,
    WeakValueSeries, C64,
};

use crate::config::{Output, RunConfig, SweepParam};
use crate::error::CliError;
use crate::report::{complex, csv_field, num, object, ratio, to_json_text, write_all};

pub const SERIES_HEADER: [&str; 7] = [
    "t",
    "re_Aw",
    "im_Aw",
    "re_Aw_dot",
    "im_Aw_dot",
    "re_weak_energy",
    "im_weak_energy",
];

/// Absolute bound on a translation component predicted to vanish.
pub fn vanishing_bound(gamma0: f64, series: &WeakValueSeries) -> f64 {
    1e-10 * gamma0.abs() * series.sup_norm()
}

fn symmetry_fields(r: &SymmetryReport) -> Vec<(&'static str, Value)> {
    vec![
        ("verdict", Value::from(r.verdict.as_str())),
        ("tolerance", num(r.tolerance)),
        ("pt_residual", num(r.pt_residual)),
        ("anti_pt_residual", num(r.anti_pt_residual)),
        ("re_even_residual", num(r.re_even_residual)),
        ("re_odd_residual", num(r.re_odd_residual)),
        ("im_even_residual", num(r.im_even_residual)),
        ("im_odd_residual", num(r.im_odd_residual)),
        ("predicted_vanishing", Value::from(r.predicted_vanishing.as_str())),
    ]
}

fn extend(mut v: Value, fields: Vec<(&'static str, Value)>) -> Value {
    let m = v.as_object_mut().expect("object");
    for (k, x) in fields {
        m.insert(k.to_string(), x);
    }
    v
}

fn series_csv(series: &WeakValueSeries, deriv: &WeakValueSeries, energy: &WeakValueSeries) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SERIES_HEADER)?;
    for (k, t) in series.grid().times().enumerate() {
        let (a, d, e) = (series.values()[k], deriv.values()[k], energy.values()[k]);
        w.write_record([t, a.re, a.im, d.re, d.im, e.re, e.im].map(csv_field))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

fn moments(m: &PointerMomentReport) -> Value {
    object([
        ("mean_q", num(m.mean_q)),
        ("mean_p", num(m.mean_p)),
        ("var_q", num(m.var_q)),
        ("var_p", num(m.var_p)),
        ("third_q", num(m.third_q)),
        ("third_p", num(m.third_p)),
        ("anticomm_qp", num(m.anticomm_qp)),
    ])
}

/// Predicted and oracle moments after an impulsive momentum coupling.
struct PointerPoint {
    gamma0: f64,
    probability: f64,
    predicted: [f64; 4],
    oracle: [f64; 4],
}

impl PointerPoint {
    fn residual(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.oracle[i] - self.predicted[i])
    }
}

const MOMENT_NAMES: [&str; 4] = ["mean_q", "mean_p", "var_q", "var_p"];

fn four(v: [f64; 4]) -> Value {
    object::<4>(std::array::from_fn(|i| (MOMENT_NAMES[i], num(v[i]))))
}

fn pointer_point(config: &RunConfig, phi: &PointerState, aw: C64, gamma0: f64) -> Result<PointerPoint, CliError> {
    let s = config.scenario();
    let exact = exact_pointer(&s, config.timing.t0, gamma0, phi)?;
    let m = pointer_moments(&exact.state)?;
    use PointerObservable::{P, Q};
    Ok(PointerPoint {
        gamma0,
        probability: exact.postselection_probability,
        predicted: [
            predict_mean(phi, Q, gamma0, aw)?,
            predict_mean(phi, P, gamma0, aw)?,
            predict_variance(phi, Q, gamma0, aw)?,
            predict_variance(phi, P, gamma0, aw)?,
        ],
        oracle: [m.mean_q, m.mean_p, m.var_q, m.var_p],
    })
}

fn pointer_json(config: &RunConfig, aw: C64) -> Result<Value, CliError> {
    let phi = gaussian_pointer(config.pointer, config.pointer_grid)?;
    let initial = pointer_moments(&phi)?;
    let mut gammas = config
        .sweeps
        .gamma0
        .clone()
        .unwrap_or_else(|| vec![config.pointer_gamma0, 0.5 * config.pointer_gamma0]);
    gammas.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let points = gammas
        .iter()
        .map(|&g| pointer_point(config, &phi, aw, g))
        .collect::<Result<Vec<_>, _>>()?;
    let ratios: Vec<Value> = points
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].residual(), w[1].residual());
            let mut fields = vec![("gamma0", Value::Array(vec![num(w[0].gamma0), num(w[1].gamma0)]))];
            for i in 0..4 {
                fields.push((MOMENT_NAMES[i], ratio(a[i], b[i])));
            }
            extend(object([]), fields)
        })
        .collect();
    let g = config.pointer_grid;
    Ok(object([
        ("coupling", Value::from("IMPULSE")),
        ("picture", Value::from("MOMENTUM_COUPLING")),
        ("t0", num(config.timing.t0)),
        ("weak_value", complex(aw)),
        (
            "pointer",
            object([
                ("var_q", num(config.pointer.var_q)),
                ("center_q", num(config.pointer.center_q)),
                ("center_p", num(config.pointer.center_p)),
                ("mass", num(config.pointer.mass)),
                ("grid_min", num(g.min)),
                ("grid_step", num(g.step)),
                ("grid_n", Value::from(g.n)),
            ]),
        ),
        ("initial", moments(&initial)),
        (
            "points",
            Value::Array(
                points
                    .iter()
                    .map(|p| {
                        object([
                            ("gamma0", num(p.gamma0)),
                            ("postselection_probability", num(p.probability)),
                            ("predicted", four(p.predicted)),
                            ("oracle", four(p.oracle)),
                            ("residual", four(p.residual())),
                        ])
                    })
                    .collect(),
            ),
        ),
        ("residual_ratios", Value::Array(ratios)),
    ]))
}

fn translation_json(config: &RunConfig, series: &WeakValueSeries, report: &SymmetryReport) -> Result<Value, CliError> {
    let c = &config.coupling;
    let x = pointer_translation(series, c)?;
    let bound = vanishing_bound(c.strength(), series);
    let mut fields = vec![
        ("name", Value::from(c.picture().translation_name())),
        ("picture", Value::from(c.picture().as_str())),
        ("coupling", Value::from(c.kind().as_str())),
        ("gamma0", num(c.strength())),
        (
            "epsilon",
            if c.kind() == CouplingKind::Impulse {
                Value::Null
            } else {
                num(c.epsilon())
            },
        ),
        ("re", num(x.re)),
        ("im", num(x.im)),
        ("abs_im_over_abs_re", ratio(x.im, x.re)),
        ("abs_re_over_abs_im", ratio(x.re, x.im)),
        ("vanishing_bound", num(bound)),
        ("prediction_holds", Value::from(report.predicted_vanishing.holds_for(x, bound))),
    ];
    if let Some(ex) = config.reference {
        let cf = closed_form_translation(ex, c.strength(), config.omega, c.epsilon())?;
        fields.push((
            "closed_form",
            object([
                ("reference", Value::from(ex.as_str())),
                ("re", num(cf.re)),
                ("im", num(cf.im)),
                ("relative_error", num((x - cf).norm() / cf.norm())),
            ]),
        ));
    }
    Ok(extend(object([]), fields))
}

/// Runs the full pipeline and writes the requested outputs into `out`.
pub fn run(config: &RunConfig, out: &Path, seed: Option<u64>) -> Result<Vec<PathBuf>, CliError> {
    let s = config.scenario();
    let grid = &config.grid;
    let series = weak_value_series(&s, grid)?;
    let mut files = Vec::new();

    if config.wants(Output::SeriesCsv) {
        let deriv = weak_value_derivative_series(&s, grid)?;
        let energy = weak_energy_series(&s, grid)?;
        files.push(("series.csv".to_string(), series_csv(&series, &deriv, &energy)?));
    }

    if config.wants(Output::SymmetryJson) {
        let report = classify(&series, config.tolerance)?;
        let mut fields = symmetry_fields(&report);
        fields.push(("weak_value_at_t0", complex(series.at_center())));
        fields.push(("translation", translation_json(config, &series, &report)?));
        fields.push((
            "metadata",
            object([
                ("t0", num(grid.t0())),
                ("half_width", num(grid.half_width())),
                ("n", Value::from(grid.len())),
                ("step", num(grid.step())),
                ("grid_refined", Value::from(config.grid_refined)),
                ("hbar", num(s.hbar())),
                ("omega", num(config.omega)),
                ("seed", seed.map_or(Value::Null, Value::from)),
                ("notes", Value::Array(config.notes.iter().map(|n| Value::from(n.as_str())).collect())),
            ]),
        ));
        files.push(("symmetry.json".to_string(), to_json_text(&extend(object([]), fields))));
    }

    if config.wants(Output::PointerJson) {
        let aw = weakval_core::weak_value(&s, config.timing.t0)?;
        files.push(("pointer.json".to_string(), to_json_text(&pointer_json(config, aw)?)));
    }

    write_all(out, &files)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub translation: C64,
    pub closed_form: Option<C64>,
    pub oracle_shift: f64,
    pub predicted_shift: f64,
}

impl SweepRow {
    pub fn residual(&self) -> f64 {
        self.oracle_shift - self.predicted_shift
    }
}

fn sweep_point(config: &RunConfig, param: SweepParam, value: f64) -> Result<SweepRow, CliError> {
    let mut coupling = config.coupling;
    let mut omega = config.omega;
    let mut oracle_gamma = config.pointer_gamma0;
    match param {
        SweepParam::Gamma0 => {
            coupling = coupling.with_strength(value)?;
            oracle_gamma = value;
        }
        SweepParam::Epsilon => {
            if coupling.kind() == CouplingKind::Impulse {
                return Err(CliError::Invalid("epsilon sweep needs a BOXCAR or GAUSSIAN coupling".into()));
            }
            coupling = coupling
                .with_epsilon(value)
                .map_err(|e| CliError::Invalid(format!("epsilon = {value}: {e}")))?;
        }
        SweepParam::Omega => omega = value,
    }
    let (grid, _): (TimeGrid, bool) = config
        .grid_for(&coupling)
        .map_err(|e| CliError::Invalid(format!("{} = {value}: {e}", param.as_str())))?;
    let s = config.scenario_at(omega);
    let series = weak_value_series(&s, &grid)?;
    let translation = pointer_translation(&series, &coupling)?;
    let closed_form = match config.reference {
        Some(ex) => Some(closed_form_translation(ex, coupling.strength(), omega, coupling.epsilon())?),
        None => None,
    };
    let phi = gaussian_pointer(config.pointer, config.pointer_grid)?;
    let before = pointer_moments(&phi)?.mean_q;
    let t0 = config.timing.t0;
    let exact = pointer_moments(&exact_pointer(&s, t0, oracle_gamma, &phi)?.state)?;
    let aw = weakval_core::weak_value(&s, t0)?;
    let predicted = predict_mean(&phi, PointerObservable::Q, oracle_gamma, aw)?;
    Ok(SweepRow {
        param: value,
        translation,
        closed_form,
        oracle_shift: exact.mean_q - before,
        predicted_shift: predicted - before,
    })
}

/// Sweep points computed in parallel, returned in ascending parameter order.
pub fn sweep_rows(config: &RunConfig, param: SweepParam, values: &[f64]) -> Result<Vec<SweepRow>, CliError> {
    if values.is_empty() {
        return Err(CliError::Invalid(format!("{} sweep list is empty", param.as_str())));
    }
    let mut rows = values
        .par_iter()
        .map(|&v| sweep_point(config, param, v))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| a.param.total_cmp(&b.param));
    Ok(rows)
}

pub fn sweep(config: &RunConfig, param: SweepParam, values: &[f64], out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let rows = sweep_rows(config, param, values)?;
    let name = config.coupling.picture().translation_name();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        param.as_str().to_string(),
        format!("re_{name}"),
        format!("im_{name}"),
        "re_closed_form".into(),
        "im_closed_form".into(),
        "oracle_shift_q".into(),
        "predicted_shift_q".into(),
        "first_order_residual".into(),
    ])?;
    for r in &rows {
        let (cre, cim) = match r.closed_form {
            Some(z) => (csv_field(z.re), csv_field(z.im)),
            None => (String::new(), String::new()),
        };
        w.write_record([
            csv_field(r.param),
            csv_field(r.translation.re),
            csv_field(r.translation.im),
            cre,
            cim,
            csv_field(r.oracle_shift),
            csv_field(r.predicted_shift),
            csv_field(r.residual()),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let body = String::from_utf8(bytes).expect("ascii");
    write_all(out, &[(format!("sweep_{}.csv", param.as_str()), body)])
}

/// Reads a `t,re_Aw,im_Aw,...` series, checks it lies on a uniform grid
/// symmetric about `t0`.
pub fn read_series(path: &Path, t0: f64) -> Result<WeakValueSeries, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::Invalid(format!("{}: missing column {name}", path.display())))
    };
    let (it, ire, iim) = (col("t")?, col("re_Aw")?, col("im_Aw")?);
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64, CliError> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| CliError::Invalid(format!("{}: bad number on data row {}", path.display(), line + 1)))
        };
        times.push(field(it)?);
        values.push(C64::new(field(ire)?, field(iim)?));
    }
    let n = times.len();
    if n < 3 || n % 2 == 0 {
        return Err(CliError::Invalid(format!("need an odd number of samples (at least 3), found {n}")));
    }
    let half_width = 0.5 * (times[n - 1] - times[0]);
    let grid = TimeGrid::new(t0, half_width, n).map_err(|e| CliError::Invalid(e.to_string()))?;
    let slack = 1e-6 * grid.step();
    for (k, &t) in times.iter().enumerate() {
        if (t - grid.time(k)).abs() > slack {
            return Err(CliError::Invalid(format!(
                "sample {k} at t = {t} is off the uniform grid symmetric about t0 = {t0}"
            )));
        }
    }
    Ok(WeakValueSeries::new(grid, values)?)
}

pub fn classify_file(path: &Path, t0: f64, tolerance: f64, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !(tolerance > 0.0) {
        return Err(CliError::Invalid(format!("tolerance must be positive, got {tolerance}")));
    }
    let series = read_series(path, t0)?;
    let report = classify(&series, tolerance)?;
    let grid = series.grid();
    let mut fields = symmetry_fields(&report);
    fields.push((
        "metadata",
        object([
            (
                "source",
                Value::from(path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()),
            ),
            ("t0", num(grid.t0())),
            ("n", Value::from(grid.len())),
            ("step", num(grid.step())),
        ]),
    ));
    write_all(out, &[("classify.json".to_string(), to_json_text(&extend(object([]), fields)))])
}
