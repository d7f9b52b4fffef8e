//! Lobe structure of the far-field pattern and peak extraction from sweeps.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::{ArrayConfig, PolarPoint};
use crate::patterns::pattern_upw_closed;
use crate::sweep::PatternSweep;

/// Default detection threshold for [`sweep_peaks`].
pub const DEFAULT_MIN_LEVEL: f64 = 0.05;

/// Spatial frequency differences are physical only within this range.
pub const VISIBLE_LIMIT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GratingLobe {
    pub delta_theta: f64,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LobeReport {
    /// Null-to-null main-lobe width in spatial frequency, `2 / (N gamma dbar)`.
    pub main_lobe_null_to_null: f64,
    pub angular_resolution_sparse: f64,
    pub angular_resolution_collocated_factor: f64,
    /// `1 / (gamma dbar)`.
    pub grating_lobe_period: f64,
    /// Grating lobes `k / (gamma dbar)`, `0 < |k| <= k_max`, inside the visible range, ascending.
    pub grating_lobes: Vec<GratingLobe>,
}

/// Main-lobe width, resolutions and grating lobes of the far-field pattern.
pub fn lobe_report_upw(config: &ArrayConfig, k_max: usize) -> LobeReport {
    let dbar = config.normalized_spacing();
    let gamma_dbar = config.module_separation_factor() * dbar;
    let n = config.num_modules() as f64;
    let m = config.antennas_per_module() as f64;
    let period = 1.0 / gamma_dbar;
    let k_max = k_max as i64;
    let grating_lobes = (-k_max..=k_max)
        .filter(|&k| k != 0)
        .map(|k| k as f64 * period)
        .filter(|x| x.abs() <= VISIBLE_LIMIT)
        .map(|x| GratingLobe {
            delta_theta: x,
            level: pattern_upw_closed(config, x),
        })
        .collect();
    LobeReport {
        main_lobe_null_to_null: 2.0 / (n * gamma_dbar),
        angular_resolution_sparse: 2.0 / (gamma_dbar * n),
        angular_resolution_collocated_factor: 2.0 / (m * dbar),
        grating_lobe_period: period,
        grating_lobes,
    }
}

/// Angular resolution of the modular array and of the collocated array with
/// the same element count: `(2 / (gamma N dbar), 2 / (M N dbar))`.
pub fn resolution_compare(config: &ArrayConfig) -> (f64, f64) {
    let dbar = config.normalized_spacing();
    let n = config.num_modules() as f64;
    let m = config.antennas_per_module() as f64;
    (
        2.0 / (config.module_separation_factor() * n * dbar),
        2.0 / (m * n * dbar),
    )
}

/// Half the grating-lobe period, the default peak separation.
pub fn default_min_separation(config: &ArrayConfig) -> f64 {
    0.5 / (config.module_separation_factor() * config.normalized_spacing())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub location: f64,
    pub level: f64,
}

/// Local maxima of a sweep above `min_level`, at least `min_separation`
/// apart, refined by a three-point parabola.
pub fn sweep_peaks(sweep: &PatternSweep, min_level: f64, min_separation: f64) -> Result<Vec<Peak>> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = sweep.samples.iter().map(|s| (s.x, s.gain_linear)).unzip();
    find_peaks(&xs, &ys, min_level, min_separation)
}

/// Slice form of [`sweep_peaks`]; `xs` must be increasing.
pub fn find_peaks(xs: &[f64], ys: &[f64], min_level: f64, min_separation: f64) -> Result<Vec<Peak>> {
    if xs.len() != ys.len() {
        return Err(Error::Domain(format!(
            "{} abscissae for {} samples",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: xs.len(),
        });
    }
    let mut candidates: Vec<Peak> = (1..xs.len() - 1)
        .filter(|&i| ys[i] > ys[i - 1] && ys[i] >= ys[i + 1] && ys[i] >= min_level)
        .map(|i| refine_parabolic(&xs[i - 1..=i + 1], &ys[i - 1..=i + 1]))
        .collect();
    candidates.sort_by(|a, b| b.level.total_cmp(&a.level));

    let mut kept: Vec<Peak> = Vec::new();
    for p in candidates {
        if kept
            .iter()
            .all(|q| (q.location - p.location).abs() >= min_separation)
        {
            kept.push(p);
        }
    }
    kept.sort_by(|a, b| a.location.total_cmp(&b.location));
    Ok(kept)
}

fn refine_parabolic(x: &[f64], y: &[f64]) -> Peak {
    let (x0, x1, x2) = (x[0], x[1], x[2]);
    let (y0, y1, y2) = (y[0], y[1], y[2]);
    let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    if !a.is_finite() || !b.is_finite() || a >= 0.0 {
        return Peak { location: x1, level: y1 };
    }
    let xv = (-b / (2.0 * a)).clamp(x0, x2);
    let level = y1 + (xv - x1) * (a * (xv + x1) + b);
    Peak {
        location: xv,
        level: level.max(y1),
    }
}

/// Null-to-null width of the lobe around the global maximum of a sampled
/// pattern. Each null is located by intersecting the two flanks.
pub fn main_lobe_width(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 5 {
        return Err(Error::InsufficientData {
            needed: 5,
            got: xs.len().min(ys.len()),
        });
    }
    let peak = (0..ys.len())
        .max_by(|&a, &b| ys[a].total_cmp(&ys[b]))
        .unwrap_or(0);
    let mut left = peak;
    while left > 0 && ys[left - 1] < ys[left] {
        left -= 1;
    }
    let mut right = peak;
    while right + 1 < ys.len() && ys[right + 1] < ys[right] {
        right += 1;
    }
    if left == 0 || right == ys.len() - 1 {
        return Err(Error::Domain(
            "main lobe nulls fall outside the sampled range".into(),
        ));
    }
    Ok(refine_null(xs, ys, right) - refine_null(xs, ys, left))
}

fn refine_null(xs: &[f64], ys: &[f64], i: usize) -> f64 {
    if i < 2 || i + 2 >= xs.len() {
        return xs[i];
    }
    let s_left = (ys[i - 1] - ys[i - 2]) / (xs[i - 1] - xs[i - 2]);
    let s_right = (ys[i + 2] - ys[i + 1]) / (xs[i + 2] - xs[i + 1]);
    if !(s_left < 0.0 && s_right > 0.0) {
        return xs[i];
    }
    let x = (ys[i + 1] - ys[i - 1] + s_left * xs[i - 1] - s_right * xs[i + 1]) / (s_left - s_right);
    x.clamp(xs[i - 1], xs[i + 1])
}

/// Distance-ring radius `xi = r / cos^2(theta)`.
pub fn distance_ring(point: &PolarPoint) -> Result<f64> {
    if point.angle().abs() >= FRAC_PI_2 {
        return Err(Error::Domain(
            "distance ring undefined along the array axis".into(),
        ));
    }
    Ok(point.distance() / point.angle().cos().powi(2))
}
