//! Pattern sweeps, figure presets, CSV output and the configuration file.

use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{classify_region, region_boundaries, ArrayConfig, PolarPoint};
use crate::patterns::{
    gain_to_db, pattern_exact, pattern_fresnel_closed, pattern_subarray_common, pattern_subarray_diff,
    pattern_upw_closed, FocusSpec,
};
use crate::steering::Model;

/// Exact CSV header.
pub const CSV_HEADER: &str = "sweep_variable,x,model,gain_linear,gain_db";

/// Default number of points per sweep.
pub const DEFAULT_STEPS: usize = 2001;

/// Pattern evaluator used for one series of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternModel {
    /// Inner product of NUSW vectors.
    Nusw,
    /// Inner product of USW vectors.
    Usw,
    /// Far-field closed form.
    Upw,
    /// Per-module angle sum.
    SubarrayDiff,
    /// Common-angle sum.
    SubarrayCommon,
    /// Fresnel-integral closed form of the common-angle sum.
    Fresnel,
}

impl PatternModel {
    pub const ALL: [PatternModel; 6] = [
        PatternModel::Nusw,
        PatternModel::Usw,
        PatternModel::Upw,
        PatternModel::SubarrayDiff,
        PatternModel::SubarrayCommon,
        PatternModel::Fresnel,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PatternModel::Nusw => "nusw",
            PatternModel::Usw => "usw",
            PatternModel::Upw => "upw",
            PatternModel::SubarrayDiff => "subarray_diff",
            PatternModel::SubarrayCommon => "subarray_common",
            PatternModel::Fresnel => "fresnel",
        }
    }

    /// Gain at one focus/observation pair.
    pub fn evaluate(&self, config: &ArrayConfig, spec: &FocusSpec) -> Result<f64> {
        match self {
            PatternModel::Nusw => pattern_exact(config, spec, Model::Nusw),
            PatternModel::Usw => pattern_exact(config, spec, Model::Usw),
            PatternModel::Upw => Ok(pattern_upw_closed(config, spec.delta_theta())),
            PatternModel::SubarrayDiff => pattern_subarray_diff(config, spec),
            PatternModel::SubarrayCommon => pattern_subarray_common(config, spec),
            PatternModel::Fresnel => Ok(pattern_fresnel_closed(config, spec)),
        }
    }
}

impl fmt::Display for PatternModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PatternModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternModel::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown model '{s}' (expected one of nusw, usw, upw, subarray_diff, subarray_common, fresnel)"
                ))
            })
    }
}

/// Swept quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    /// `sin(theta) - sin(theta')`.
    SpatialFreqDiff,
    /// Observation distance in meters.
    Distance,
    /// Observation angle in degrees.
    Angle,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::SpatialFreqDiff => "dtheta",
            SweepVariable::Distance => "distance",
            SweepVariable::Angle => "angle",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dtheta" => Ok(SweepVariable::SpatialFreqDiff),
            "distance" => Ok(SweepVariable::Distance),
            "angle" => Ok(SweepVariable::Angle),
            other => Err(Error::Usage(format!(
                "unknown sweep variable '{other}' (expected dtheta, distance or angle)"
            ))),
        }
    }
}

/// Sweep axis and the fixed focus/observation coordinates.
///
/// `observation_distance` is used by the `dtheta` and `angle` sweeps,
/// `observation_angle` (radians) by the `distance` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub focus: PolarPoint,
    pub observation_distance: f64,
    pub observation_angle: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::InvalidConfig(format!(
                "sweep range {}:{} must be finite and increasing",
                self.start, self.stop
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidConfig(format!(
                "sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        match self.variable {
            SweepVariable::SpatialFreqDiff => {
                let s0 = self.focus.spatial_frequency();
                if s0 + self.start < -1.0 || s0 + self.stop > 1.0 {
                    return Err(Error::InvalidConfig(format!(
                        "spatial frequency range {}:{} leaves the visible region for focus angle {} rad",
                        self.start,
                        self.stop,
                        self.focus.angle()
                    )));
                }
                PolarPoint::new(self.observation_distance, 0.0).map(|_| ())
            }
            SweepVariable::Distance => {
                if self.start <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "distance sweep must start above 0 m, got {}",
                        self.start
                    )));
                }
                PolarPoint::new(1.0, self.observation_angle).map(|_| ())
            }
            SweepVariable::Angle => {
                if self.start < -90.0 || self.stop > 90.0 {
                    return Err(Error::InvalidConfig(format!(
                        "angle sweep {}:{} deg outside [-90, 90]",
                        self.start, self.stop
                    )));
                }
                PolarPoint::new(self.observation_distance, 0.0).map(|_| ())
            }
        }
    }

    /// Sample abscissae, ending exactly at `stop`.
    pub fn abscissae(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }

    /// Focus/observation pair at abscissa `x`.
    pub fn focus_at(&self, x: f64) -> Result<FocusSpec> {
        let observed = match self.variable {
            SweepVariable::SpatialFreqDiff => {
                let s = (self.focus.spatial_frequency() + x).clamp(-1.0, 1.0);
                PolarPoint::new(self.observation_distance, s.asin())?
            }
            SweepVariable::Distance => PolarPoint::new(x, self.observation_angle)?,
            SweepVariable::Angle => PolarPoint::from_degrees(self.observation_distance, x)?,
        };
        Ok(FocusSpec::new(self.focus, observed))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub gain_linear: f64,
    pub gain_db: f64,
}

/// One evaluated series.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSweep {
    pub spec: SweepSpec,
    pub model: PatternModel,
    /// Series name written to the CSV `model` column.
    pub label: String,
    pub samples: Vec<Sample>,
}

/// Evaluates `spec` for every model. Points are computed in parallel; the
/// output does not depend on scheduling.
pub fn run_sweep(config: &ArrayConfig, spec: &SweepSpec, models: &[PatternModel]) -> Result<Vec<PatternSweep>> {
    spec.validate()?;
    let xs = spec.abscissae();
    models
        .iter()
        .map(|&model| {
            let samples = xs
                .par_iter()
                .map(|&x| {
                    let gain = model.evaluate(config, &spec.focus_at(x)?)?;
                    Ok(Sample {
                        x,
                        gain_linear: gain,
                        gain_db: gain_to_db(gain),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(PatternSweep {
                spec: *spec,
                model,
                label: model.name().to_string(),
                samples,
            })
        })
        .collect()
}

/// Named reproductions of the published figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig3, Figure::Fig4a, Figure::Fig4b, Figure::Fig4c];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
            Figure::Fig4c => "fig4c",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Usage(format!("unknown figure '{s}' (expected fig3, fig4a, fig4b or fig4c)")))
    }
}

pub const PRESET_WAVELENGTH: f64 = 0.1256;
pub const PRESET_SPACING: f64 = 0.0628;
pub const PRESET_FOCUS_DISTANCE: f64 = 200.0;
pub const PRESET_MODULES_FIG3: usize = 4;
pub const PRESET_MODULES_FIG4: usize = 32;
pub const PRESET_ANTENNAS: usize = 4;
pub const PRESET_GAMMA: f64 = 13.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub figure: Figure,
    /// `("modular", ...)` followed by `("collocated", ...)`.
    pub arrays: Vec<(String, ArrayConfig)>,
    pub spec: SweepSpec,
    pub models: Vec<PatternModel>,
}

impl FigurePreset {
    pub fn modular(&self) -> &ArrayConfig {
        &self.arrays[0].1
    }
}

/// Array, axis and models for a figure.
///
/// Axis windows: `fig3` spans `dtheta` in [-1, 1]; `fig4a` and `fig4c` span
/// [-0.5, 0.5]; `fig4b` runs from the common-angle region boundary of the
/// modular array (about 153 m) to 1000 m.
pub fn figure_preset(figure: Figure) -> FigurePreset {
    let modules = match figure {
        Figure::Fig3 => PRESET_MODULES_FIG3,
        _ => PRESET_MODULES_FIG4,
    };
    let modular = ArrayConfig::new(modules, PRESET_ANTENNAS, PRESET_GAMMA, PRESET_SPACING, PRESET_WAVELENGTH)
        .expect("preset configuration is valid");
    let arrays = vec![
        ("modular".to_string(), modular),
        ("collocated".to_string(), modular.collocated()),
    ];
    let focus = PolarPoint::new(PRESET_FOCUS_DISTANCE, 0.0).expect("preset focus is valid");
    let near_field = vec![
        PatternModel::Usw,
        PatternModel::Upw,
        PatternModel::SubarrayDiff,
        PatternModel::SubarrayCommon,
    ];
    let with_fresnel = {
        let mut m = near_field.clone();
        m.push(PatternModel::Fresnel);
        m
    };
    let dtheta = |start: f64, stop: f64, observation_distance: f64| SweepSpec {
        variable: SweepVariable::SpatialFreqDiff,
        start,
        stop,
        steps: DEFAULT_STEPS,
        focus,
        observation_distance,
        observation_angle: 0.0,
    };
    let (spec, models) = match figure {
        Figure::Fig3 => (dtheta(-1.0, 1.0, PRESET_FOCUS_DISTANCE), vec![PatternModel::Upw]),
        Figure::Fig4a => (dtheta(-0.5, 0.5, PRESET_FOCUS_DISTANCE), near_field),
        Figure::Fig4b => (
            SweepSpec {
                variable: SweepVariable::Distance,
                start: region_boundaries(&modular).extended_far_field_bound,
                stop: 1000.0,
                steps: DEFAULT_STEPS,
                focus,
                observation_distance: PRESET_FOCUS_DISTANCE,
                observation_angle: 0.0,
            },
            with_fresnel,
        ),
        Figure::Fig4c => (dtheta(-0.5, 0.5, 800.0), with_fresnel),
    };
    FigurePreset {
        figure,
        arrays,
        spec,
        models,
    }
}

/// Runs every array of a preset; series are labelled `<array>_<model>`.
pub fn run_figure(preset: &FigurePreset) -> Result<Vec<PatternSweep>> {
    let mut out = Vec::new();
    for (name, config) in &preset.arrays {
        for mut sweep in run_sweep(config, &preset.spec, &preset.models)? {
            sweep.label = format!("{name}_{}", sweep.model.name());
            out.push(sweep);
        }
    }
    Ok(out)
}

/// Writes the CSV form of `sweeps`: one row per sample, series in the given
/// order, `x` ascending within a series.
pub fn write_csv<W: Write>(sweeps: &[PatternSweep], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for sweep in sweeps {
        let var = sweep.spec.variable.name();
        for s in &sweep.samples {
            writeln!(
                out,
                "{var},{:.8e},{},{:.11e},{:.11e}",
                s.x, sweep.label, s.gain_linear, s.gain_db
            )?;
        }
    }
    Ok(())
}

pub fn csv_string(sweeps: &[PatternSweep]) -> String {
    let mut buf = Vec::new();
    write_csv(sweeps, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}

pub fn emit_csv(sweeps: &[PatternSweep], path: &Path) -> Result<()> {
    fs::write(path, csv_string(sweeps)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Boundary table plus the regime of each listed distance.
pub fn report_regions(config: &ArrayConfig, distances: &[f64]) -> Result<String> {
    let b = region_boundaries(config);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "array: N={} M={} gamma={} d={} m lambda={} m",
        config.num_modules(),
        config.antennas_per_module(),
        config.module_separation_factor(),
        config.element_spacing(),
        config.wavelength()
    );
    let _ = writeln!(
        out,
        "apertures: S={:.6} m D={:.6} m",
        config.module_aperture(),
        config.total_aperture()
    );
    let _ = writeln!(out, "{:<40}{:>16}", "boundary", "distance_m");
    for (name, value) in [
        ("amplitude_uniform_bound (1.2D)", b.amplitude_uniform_bound),
        ("module_rayleigh (2S^2/lambda)", b.module_rayleigh),
        ("extended_far_field_bound", b.extended_far_field_bound),
        ("array_rayleigh (2D^2/lambda)", b.array_rayleigh),
    ] {
        let _ = writeln!(out, "{name:<40}{value:>16.6}");
    }
    if !distances.is_empty() {
        let _ = writeln!(out, "{:<16}regime", "r_m");
        for &r in distances {
            let report = classify_region(config, r)?;
            let regime = report.regime.expect("classified");
            let _ = writeln!(out, "{r:<16}{regime}");
        }
    }
    Ok(out)
}

/// Parses the `key = value` configuration format.
///
/// Keys: `n_modules`, `antennas_per_module`, `gamma`, `element_spacing_m`,
/// `wavelength_m`. `#` starts a comment.
pub fn parse_config(text: &str) -> Result<ArrayConfig> {
    let mut n_modules = None;
    let mut antennas = None;
    let mut gamma = None;
    let mut spacing = None;
    let mut wavelength = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("line {}: expected 'key = value'", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| Error::InvalidConfig(format!("line {}: {key} must be {what}, got '{value}'", lineno + 1));
        let slot_set = match key {
            "n_modules" => n_modules.replace(value.parse::<usize>().map_err(|_| bad("a positive integer"))?).is_some(),
            "antennas_per_module" => antennas.replace(value.parse::<usize>().map_err(|_| bad("a positive integer"))?).is_some(),
            "gamma" => gamma.replace(value.parse::<f64>().map_err(|_| bad("a number"))?).is_some(),
            "element_spacing_m" => spacing.replace(value.parse::<f64>().map_err(|_| bad("a number"))?).is_some(),
            "wavelength_m" => wavelength.replace(value.parse::<f64>().map_err(|_| bad("a number"))?).is_some(),
            other => {
                return Err(Error::InvalidConfig(format!(
                    "line {}: unknown key '{other}'",
                    lineno + 1
                )))
            }
        };
        if slot_set {
            return Err(Error::InvalidConfig(format!("line {}: duplicate key '{key}'", lineno + 1)));
        }
    }
    let missing = |k: &str| Error::InvalidConfig(format!("missing key '{k}'"));
    ArrayConfig::new(
        n_modules.ok_or_else(|| missing("n_modules"))?,
        antennas.ok_or_else(|| missing("antennas_per_module"))?,
        gamma.ok_or_else(|| missing("gamma"))?,
        spacing.ok_or_else(|| missing("element_spacing_m"))?,
        wavelength.ok_or_else(|| missing("wavelength_m"))?,
    )
}

pub fn load_config(path: &Path) -> Result<ArrayConfig> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

/// Inverse of [`parse_config`].
pub fn format_config(config: &ArrayConfig) -> String {
    format!(
        "n_modules = {}\nantennas_per_module = {}\ngamma = {}\nelement_spacing_m = {}\nwavelength_m = {}\n",
        config.num_modules(),
        config.antennas_per_module(),
        config.module_separation_factor(),
        config.element_spacing(),
        config.wavelength()
    )
}
