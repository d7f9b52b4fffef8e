//! Array response (steering) vectors under the five propagation models.
//!
//! Entries are ordered module-major: all antennas of the first module, then
//! the next module, with indices ascending. Vectors carry absolute phases,
//! including the common `exp(-j k r)` factor of the plane-wave model.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{axis_distance, local_sine, ArrayConfig, PolarPoint};

/// Propagation model used to build a steering vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Non-uniform spherical wave: exact distances in amplitude and phase.
    Nusw,
    /// Uniform spherical wave: exact distances in phase only.
    Usw,
    /// Uniform plane wave.
    Upw,
    /// Plane wave per module with per-module angles.
    SubarrayDiff,
    /// Plane wave per module with a common angle.
    SubarrayCommon,
}

impl Model {
    pub const ALL: [Model; 5] = [
        Model::Nusw,
        Model::Usw,
        Model::Upw,
        Model::SubarrayDiff,
        Model::SubarrayCommon,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Model::Nusw => "nusw",
            Model::Usw => "usw",
            Model::Upw => "upw",
            Model::SubarrayDiff => "subarray_diff",
            Model::SubarrayCommon => "subarray_common",
        }
    }

    /// Whether every entry has unit magnitude.
    pub fn is_unit_magnitude(&self) -> bool {
        !matches!(self, Model::Nusw)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Usage(format!("unknown model '{s}'")))
    }
}

/// Reference channel gain at 1 m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    reference_gain: f64,
}

impl ChannelParams {
    pub fn new(reference_gain: f64) -> Result<Self> {
        if !(reference_gain.is_finite() && reference_gain > 0.0) {
            return Err(Error::Domain(format!(
                "reference gain {reference_gain} must be positive"
            )));
        }
        Ok(Self { reference_gain })
    }

    pub fn reference_gain(&self) -> f64 {
        self.reference_gain
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    entries: Vec<Complex64>,
    model: Model,
    source: PolarPoint,
    num_modules: usize,
    antennas_per_module: usize,
}

impl SteeringVector {
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn source(&self) -> PolarPoint {
        self.source
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_modules(&self) -> usize {
        self.num_modules
    }

    pub fn antennas_per_module(&self) -> usize {
        self.antennas_per_module
    }

    /// Entry for the `module`-th module and `antenna`-th antenna (0-based).
    pub fn get(&self, module: usize, antenna: usize) -> Complex64 {
        self.entries[module * self.antennas_per_module + antenna]
    }

    /// `a^H b`.
    pub fn inner(&self, other: &SteeringVector) -> Complex64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn build(config: &ArrayConfig, point: &PolarPoint, model: Model, entries: Vec<Complex64>) -> SteeringVector {
    debug_assert_eq!(entries.len(), config.num_elements());
    SteeringVector {
        entries,
        model,
        source: *point,
        num_modules: config.num_modules(),
        antennas_per_module: config.antennas_per_module(),
    }
}

fn phasor(phase: f64) -> Complex64 {
    Complex64::new(phase.cos(), phase.sin())
}

/// Builds the steering vector of `model` for a source at `point`.
pub fn steer(config: &ArrayConfig, point: &PolarPoint, model: Model) -> Result<SteeringVector> {
    match model {
        Model::Nusw => steer_nusw(config, point),
        Model::Usw => steer_usw(config, point),
        Model::Upw => Ok(steer_upw(config, point)),
        Model::SubarrayDiff => steer_subarray_diff(config, point),
        Model::SubarrayCommon => steer_subarray_common(config, point),
    }
}

/// Entries `(r / r_nm) exp(-j k r_nm)`.
pub fn steer_nusw(config: &ArrayConfig, point: &PolarPoint) -> Result<SteeringVector> {
    let k = config.wavenumber();
    let r = point.distance();
    let entries = config
        .element_indices()
        .map(|idx| {
            let rnm = axis_distance(point, config.position_unchecked(idx));
            if rnm == 0.0 {
                return Err(Error::SingularGeometry(format!(
                    "source coincides with element ({}, {})",
                    idx.module, idx.antenna
                )));
            }
            Ok(Complex64::from_polar(r / rnm, -k * rnm))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(build(config, point, Model::Nusw, entries))
}

/// Channel vector `(sqrt(beta0) / r) a(r, theta)` with the NUSW response.
pub fn channel_vector(config: &ArrayConfig, point: &PolarPoint, params: ChannelParams) -> Result<Vec<Complex64>> {
    let scale = params.reference_gain.sqrt() / point.distance();
    Ok(steer_nusw(config, point)?
        .into_entries()
        .into_iter()
        .map(|a| a * scale)
        .collect())
}

/// Entries `exp(-j k r_nm)`.
pub fn steer_usw(config: &ArrayConfig, point: &PolarPoint) -> Result<SteeringVector> {
    let k = config.wavenumber();
    let entries = config
        .element_indices()
        .map(|idx| phasor(-k * axis_distance(point, config.position_unchecked(idx))))
        .collect();
    Ok(build(config, point, Model::Usw, entries))
}

/// Far-field factor of an `M`-element module, `[exp(j k m d s)]_m`.
fn collocated_factor(config: &ArrayConfig, sin_theta: f64) -> Vec<Complex64> {
    let kd = config.wavenumber() * config.element_spacing();
    config
        .antenna_indices()
        .map(|m| phasor(kd * m * sin_theta))
        .collect()
}

fn kron(outer: &[Complex64], inner: &[Complex64]) -> Vec<Complex64> {
    outer
        .iter()
        .flat_map(|o| inner.iter().map(move |i| o * i))
        .collect()
}

/// `exp(-j k r) p(theta) (x) b(theta)`.
pub fn steer_upw(config: &ArrayConfig, point: &PolarPoint) -> SteeringVector {
    let k = config.wavenumber();
    let s = point.spatial_frequency();
    let global = phasor(-k * point.distance());
    let sparse: Vec<Complex64> = config
        .module_indices()
        .map(|n| global * phasor(k * config.module_center(n) * s))
        .collect();
    let entries = kron(&sparse, &collocated_factor(config, s));
    build(config, point, Model::Upw, entries)
}

/// Blocks `exp(-j k r_n) b(theta_n)` using exact module distances and angles.
pub fn steer_subarray_diff(config: &ArrayConfig, point: &PolarPoint) -> Result<SteeringVector> {
    let k = config.wavenumber();
    let mut entries = Vec::with_capacity(config.num_elements());
    for n in config.module_indices() {
        let y = config.module_center(n);
        let weight = phasor(-k * axis_distance(point, y));
        let sin_n = local_sine(point, y)?;
        entries.extend(collocated_factor(config, sin_n).into_iter().map(|b| weight * b));
    }
    Ok(build(config, point, Model::SubarrayDiff, entries))
}

/// Near-field factor of the sparse module grid, `[exp(-j k r_n)]_n`.
pub fn sparse_near_field_factor(config: &ArrayConfig, point: &PolarPoint) -> Vec<Complex64> {
    let k = config.wavenumber();
    config
        .module_indices()
        .map(|n| phasor(-k * axis_distance(point, config.module_center(n))))
        .collect()
}

/// `e(r, theta) (x) b(theta)`.
pub fn steer_subarray_common(config: &ArrayConfig, point: &PolarPoint) -> Result<SteeringVector> {
    let entries = kron(
        &sparse_near_field_factor(config, point),
        &collocated_factor(config, point.spatial_frequency()),
    );
    Ok(build(config, point, Model::SubarrayCommon, entries))
}

/// Rank-one split of a steering vector over the module x antenna grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerFactors {
    /// Length `N`.
    pub sparse: Vec<Complex64>,
    /// Length `M`, with zero phase at the module centre.
    pub collocated: Vec<Complex64>,
}

impl KroneckerFactors {
    pub fn reconstruct(&self) -> Vec<Complex64> {
        kron(&self.sparse, &self.collocated)
    }
}

const RECONSTRUCTION_TOL: f64 = 1e-12;
const RANK_RATIO_TOL: f64 = 1e-8;

/// Splits `v` into `sparse (x) collocated`.
///
/// Plane-wave and common-angle vectors are rank one by construction. Any
/// other vector is accepted only if the second singular value of its
/// `N x M` reshaping is negligible.
pub fn kronecker_factor(v: &SteeringVector) -> Result<KroneckerFactors> {
    let (n_rows, n_cols) = (v.num_modules, v.antennas_per_module);
    let row = |i: usize| &v.entries[i * n_cols..(i + 1) * n_cols];

    let pivot = (0..n_rows)
        .max_by(|&a, &b| {
            let na: f64 = row(a).iter().map(|z| z.norm_sqr()).sum();
            let nb: f64 = row(b).iter().map(|z| z.norm_sqr()).sum();
            na.total_cmp(&nb)
        })
        .unwrap_or(0);

    let pivot_row = row(pivot);
    let centre_phase = if n_cols % 2 == 1 {
        pivot_row[n_cols / 2].arg()
    } else {
        (pivot_row[n_cols / 2 - 1] * pivot_row[n_cols / 2]).arg() / 2.0
    };
    let rotate = phasor(-centre_phase);
    let collocated: Vec<Complex64> = pivot_row.iter().map(|z| z * rotate).collect();
    let energy: f64 = collocated.iter().map(|z| z.norm_sqr()).sum();
    if energy == 0.0 {
        return Err(Error::NotFactorizable { ratio: f64::NAN });
    }
    let sparse: Vec<Complex64> = (0..n_rows)
        .map(|i| {
            row(i)
                .iter()
                .zip(&collocated)
                .map(|(a, b)| a * b.conj())
                .sum::<Complex64>()
                / energy
        })
        .collect();
    let factors = KroneckerFactors { sparse, collocated };

    let scale = v.entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let residual = factors
        .reconstruct()
        .iter()
        .zip(&v.entries)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if residual <= RECONSTRUCTION_TOL * scale.max(1.0) {
        return Ok(factors);
    }

    let ratio = singular_value_ratio(v);
    if ratio < RANK_RATIO_TOL {
        Ok(factors)
    } else {
        Err(Error::NotFactorizable { ratio })
    }
}

/// `sigma_2 / sigma_1` of the `N x M` reshaping (0 when it has one column or row).
pub fn singular_value_ratio(v: &SteeringVector) -> f64 {
    let (n_rows, n_cols) = (v.num_modules, v.antennas_per_module);
    if n_rows < 2 || n_cols < 2 {
        return 0.0;
    }
    let m = DMatrix::from_fn(n_rows, n_cols, |i, j| v.entries[i * n_cols + j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    if sv[0] == 0.0 {
        0.0
    } else {
        sv[1] / sv[0]
    }
}
