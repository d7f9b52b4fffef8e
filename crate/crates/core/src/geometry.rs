//! Array layout, exact element distances and propagation-region boundaries.
//!
//! Modules and antennas are indexed on a symmetric grid centred on the
//! origin: for `K` items the indices are `-(K-1)/2, ..., (K-1)/2` with unit
//! step, which gives half-integer indices when `K` is even. Element `(n, m)`
//! sits at `y = (n * gamma + m) * d` on the array axis.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::{Error, Result};

/// Geometry of a modular uniform linear array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    num_modules: usize,
    antennas_per_module: usize,
    module_separation_factor: f64,
    element_spacing: f64,
    wavelength: f64,
}

impl ArrayConfig {
    /// Builds a configuration.
    ///
    /// `module_separation_factor` is the distance between the reference
    /// elements of adjacent modules in units of `element_spacing` and must be
    /// at least `antennas_per_module` (equality gives a collocated array).
    pub fn new(
        num_modules: usize,
        antennas_per_module: usize,
        module_separation_factor: f64,
        element_spacing: f64,
        wavelength: f64,
    ) -> Result<Self> {
        if num_modules == 0 {
            return Err(Error::InvalidConfig("num_modules must be positive".into()));
        }
        if antennas_per_module == 0 {
            return Err(Error::InvalidConfig(
                "antennas_per_module must be positive".into(),
            ));
        }
        if !module_separation_factor.is_finite()
            || module_separation_factor < antennas_per_module as f64
        {
            return Err(Error::InvalidConfig(format!(
                "module separation factor {module_separation_factor} must be >= antennas_per_module ({antennas_per_module})"
            )));
        }
        if !(element_spacing.is_finite() && element_spacing > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "element spacing {element_spacing} must be positive"
            )));
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "wavelength {wavelength} must be positive"
            )));
        }
        Ok(Self {
            num_modules,
            antennas_per_module,
            module_separation_factor,
            element_spacing,
            wavelength,
        })
    }

    /// The collocated array with the same element count: `gamma = M`.
    pub fn collocated(&self) -> Self {
        Self {
            module_separation_factor: self.antennas_per_module as f64,
            ..*self
        }
    }

    /// Same array with a different number of modules.
    pub fn with_num_modules(&self, num_modules: usize) -> Result<Self> {
        Self::new(
            num_modules,
            self.antennas_per_module,
            self.module_separation_factor,
            self.element_spacing,
            self.wavelength,
        )
    }

    /// Same array with a different module separation factor.
    pub fn with_separation_factor(&self, gamma: f64) -> Result<Self> {
        Self::new(
            self.num_modules,
            self.antennas_per_module,
            gamma,
            self.element_spacing,
            self.wavelength,
        )
    }

    pub fn num_modules(&self) -> usize {
        self.num_modules
    }

    pub fn antennas_per_module(&self) -> usize {
        self.antennas_per_module
    }

    pub fn module_separation_factor(&self) -> f64 {
        self.module_separation_factor
    }

    pub fn element_spacing(&self) -> f64 {
        self.element_spacing
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn num_elements(&self) -> usize {
        self.num_modules * self.antennas_per_module
    }

    /// Element spacing in wavelengths.
    pub fn normalized_spacing(&self) -> f64 {
        self.element_spacing / self.wavelength
    }

    /// Wavenumber `2 pi / lambda`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Physical size of one module, `(M - 1) d`.
    pub fn module_aperture(&self) -> f64 {
        (self.antennas_per_module as f64 - 1.0) * self.element_spacing
    }

    /// Physical size of the whole array, `((N - 1) gamma + (M - 1)) d`.
    pub fn total_aperture(&self) -> f64 {
        ((self.num_modules as f64 - 1.0) * self.module_separation_factor
            + (self.antennas_per_module as f64 - 1.0))
            * self.element_spacing
    }

    pub fn is_collocated(&self) -> bool {
        self.module_separation_factor == self.antennas_per_module as f64
    }

    /// Module indices in ascending order.
    pub fn module_indices(&self) -> impl ExactSizeIterator<Item = f64> + Clone {
        symmetric_indices(self.num_modules)
    }

    /// Antenna indices within a module in ascending order.
    pub fn antenna_indices(&self) -> impl ExactSizeIterator<Item = f64> + Clone {
        symmetric_indices(self.antennas_per_module)
    }

    /// All element indices in module-major order.
    pub fn element_indices(&self) -> impl Iterator<Item = ElementIndex> + '_ {
        self.module_indices().flat_map(move |n| {
            self.antenna_indices()
                .map(move |m| ElementIndex { module: n, antenna: m })
        })
    }

    /// Axis position of module `n`'s reference point, `n gamma d`.
    pub(crate) fn module_center(&self, module: f64) -> f64 {
        module * self.module_separation_factor * self.element_spacing
    }

    pub(crate) fn position_unchecked(&self, idx: ElementIndex) -> f64 {
        (idx.module * self.module_separation_factor + idx.antenna) * self.element_spacing
    }

    fn check_module(&self, module: f64) -> Result<()> {
        if is_grid_index(module, self.num_modules) {
            Ok(())
        } else {
            Err(self.invalid_index(module, 0.0))
        }
    }

    fn check_index(&self, idx: ElementIndex) -> Result<()> {
        if is_grid_index(idx.module, self.num_modules)
            && is_grid_index(idx.antenna, self.antennas_per_module)
        {
            Ok(())
        } else {
            Err(self.invalid_index(idx.module, idx.antenna))
        }
    }

    fn invalid_index(&self, module: f64, antenna: f64) -> Error {
        Error::InvalidIndex {
            module,
            antenna,
            num_modules: self.num_modules,
            antennas_per_module: self.antennas_per_module,
        }
    }
}

/// `-(k-1)/2, ..., (k-1)/2` with unit step.
pub fn symmetric_indices(k: usize) -> impl ExactSizeIterator<Item = f64> + Clone {
    let offset = (k as f64 - 1.0) / 2.0;
    (0..k).map(move |i| i as f64 - offset)
}

fn is_grid_index(value: f64, count: usize) -> bool {
    let shifted = value + (count as f64 - 1.0) / 2.0;
    shifted.is_finite()
        && shifted.fract() == 0.0
        && shifted >= 0.0
        && shifted <= count as f64 - 1.0
}

/// Module index `n` and antenna index `m` on the symmetric grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementIndex {
    pub module: f64,
    pub antenna: f64,
}

impl ElementIndex {
    pub fn new(module: f64, antenna: f64) -> Self {
        Self { module, antenna }
    }
}

/// A location in the array's polar frame: distance from the array centre and
/// angle from broadside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    distance: f64,
    angle: f64,
}

impl PolarPoint {
    /// `distance` in meters (> 0), `angle` in radians within `[-pi/2, pi/2]`.
    pub fn new(distance: f64, angle: f64) -> Result<Self> {
        if !(distance.is_finite() && distance > 0.0) {
            return Err(Error::Domain(format!(
                "distance {distance} must be positive and finite"
            )));
        }
        if !(angle.is_finite() && (-FRAC_PI_2..=FRAC_PI_2).contains(&angle)) {
            return Err(Error::Domain(format!(
                "angle {angle} rad outside [-pi/2, pi/2]"
            )));
        }
        Ok(Self { distance, angle })
    }

    pub fn from_degrees(distance: f64, angle_deg: f64) -> Result<Self> {
        Self::new(distance, angle_deg.to_radians())
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Spatial frequency `sin(theta)`.
    ///
    /// Never inlined: fused `sin`/`cos` lowering at a call site can change the
    /// last bit, and closed forms must agree exactly across callers.
    #[inline(never)]
    pub fn spatial_frequency(&self) -> f64 {
        self.angle.sin()
    }

    /// Cartesian coordinates `[r cos(theta), r sin(theta)]`.
    pub fn cartesian(&self) -> [f64; 2] {
        [
            self.distance * self.angle.cos(),
            self.distance * self.angle.sin(),
        ]
    }
}

/// Position of element `(n, m)` on the array axis, in meters.
pub fn element_position(config: &ArrayConfig, idx: ElementIndex) -> Result<f64> {
    config.check_index(idx)?;
    Ok(config.position_unchecked(idx))
}

/// Distance between a point at axis coordinate `y` and `point`.
pub(crate) fn axis_distance(point: &PolarPoint, y: f64) -> f64 {
    let r = point.distance;
    (r * r - 2.0 * r * y * point.angle.sin() + y * y).sqrt()
}

/// Exact distance from element `(n, m)` to `point`.
pub fn element_distance(config: &ArrayConfig, idx: ElementIndex, point: &PolarPoint) -> Result<f64> {
    let y = element_position(config, idx)?;
    Ok(axis_distance(point, y))
}

/// Distance from the reference point (centre) of module `n` to `point`.
pub fn module_reference_distance(config: &ArrayConfig, module: f64, point: &PolarPoint) -> Result<f64> {
    config.check_module(module)?;
    Ok(axis_distance(point, config.module_center(module)))
}

/// Sine of the direction of `point` as seen from the centre of module `n`.
pub fn module_local_angle(config: &ArrayConfig, module: f64, point: &PolarPoint) -> Result<f64> {
    config.check_module(module)?;
    local_sine(point, config.module_center(module))
}

pub(crate) fn local_sine(point: &PolarPoint, y: f64) -> Result<f64> {
    let rn = axis_distance(point, y);
    if rn == 0.0 {
        return Err(Error::SingularGeometry(format!(
            "point coincides with the module reference at y = {y} m"
        )));
    }
    Ok(((point.distance * point.angle.sin() - y) / rn).clamp(-1.0, 1.0))
}

/// Propagation regime of a source, from nearest to farthest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    /// Amplitude variations across the aperture matter.
    NuswRequired,
    /// Uniform amplitude, exact spherical phase on every element.
    UswExact,
    /// Plane wave within each module, per-module angles.
    SubarrayDifferentAngles,
    /// Plane wave within each module, one common angle.
    SubarrayCommonAngle,
    /// Far field of the whole array.
    UpwFarField,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::NuswRequired => "NUSW_REQUIRED",
            Regime::UswExact => "USW_EXACT",
            Regime::SubarrayDifferentAngles => "SUBARRAY_DIFFERENT_ANGLES",
            Regime::SubarrayCommonAngle => "SUBARRAY_COMMON_ANGLE",
            Regime::UpwFarField => "UPW_FAR_FIELD",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Region boundary distances (meters) and, when classified, the regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionReport {
    /// `1.2 D`: below this the amplitude variation cannot be ignored.
    pub amplitude_uniform_bound: f64,
    /// `2 S^2 / lambda`.
    pub module_rayleigh: f64,
    /// `max(5 D, 4 S D / lambda)`.
    pub extended_far_field_bound: f64,
    /// `2 D^2 / lambda`.
    pub array_rayleigh: f64,
    pub regime: Option<Regime>,
}

pub fn region_boundaries(config: &ArrayConfig) -> RegionReport {
    let lambda = config.wavelength;
    let s = config.module_aperture();
    let d = config.total_aperture();
    RegionReport {
        amplitude_uniform_bound: 1.2 * d,
        module_rayleigh: 2.0 * s * s / lambda,
        extended_far_field_bound: (5.0 * d).max(4.0 * s * d / lambda),
        array_rayleigh: 2.0 * d * d / lambda,
        regime: None,
    }
}

/// Classifies a source distance. Windows are half-open `[lower, upper)`;
/// the far field is inclusive at `2 D^2 / lambda`. Below `1.2 D` the
/// non-uniform amplitude model is always required; above it the most
/// simplified model whose lower bound is reached wins.
pub fn classify_region(config: &ArrayConfig, r: f64) -> Result<RegionReport> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("distance {r} must be positive")));
    }
    let mut report = region_boundaries(config);
    let regime = if r < report.amplitude_uniform_bound {
        Regime::NuswRequired
    } else if r >= report.array_rayleigh {
        Regime::UpwFarField
    } else if r >= report.extended_far_field_bound {
        Regime::SubarrayCommonAngle
    } else if r >= report.module_rayleigh {
        Regime::SubarrayDifferentAngles
    } else {
        Regime::UswExact
    };
    report.regime = Some(regime);
    Ok(report)
}

/// Worst-case phase (radians) neglected when every module is steered with
/// the common angle instead of its own: `max (2 pi / lambda) |m d (sin theta_n - sin theta)|`.
pub fn common_angle_phase_error(config: &ArrayConfig, point: &PolarPoint) -> Result<f64> {
    let sin_theta = point.angle.sin();
    let max_antenna = (config.antennas_per_module as f64 - 1.0) / 2.0;
    let mut worst = 0.0_f64;
    for n in config.module_indices() {
        let sin_n = local_sine(point, config.module_center(n))?;
        worst = worst.max((sin_n - sin_theta).abs());
    }
    Ok(config.wavenumber() * max_antenna * config.element_spacing * worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_6;

    fn fig4() -> ArrayConfig {
        ArrayConfig::new(32, 4, 13.0, 0.0628, 0.1256).unwrap()
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ArrayConfig::new(0, 4, 13.0, 0.1, 0.2).is_err());
        assert!(ArrayConfig::new(4, 0, 13.0, 0.1, 0.2).is_err());
        assert!(ArrayConfig::new(4, 4, 3.5, 0.1, 0.2).is_err());
        assert!(ArrayConfig::new(4, 4, 4.0, 0.0, 0.2).is_err());
        assert!(ArrayConfig::new(4, 4, 4.0, 0.1, f64::NAN).is_err());
        assert!(ArrayConfig::new(4, 4, 4.0, 0.1, 0.2).unwrap().is_collocated());
    }

    #[test]
    fn positions() {
        let c = ArrayConfig::new(4, 4, 13.0, 0.0628, 0.1256).unwrap();
        let y = element_position(&c, ElementIndex::new(0.5, 0.5)).unwrap();
        assert_relative_eq!(y, 7.0 * 0.0628, max_relative = 1e-14);
        assert_relative_eq!(y, 0.4396, max_relative = 1e-12);

        let c = ArrayConfig::new(3, 3, 13.0, 0.0628, 0.1256).unwrap();
        assert_eq!(element_position(&c, ElementIndex::new(0.0, 0.0)).unwrap(), 0.0);
        let y = element_position(&c, ElementIndex::new(1.0, 1.0)).unwrap();
        assert_relative_eq!(y, 0.8792, max_relative = 1e-12);
    }

    #[test]
    fn position_symmetry() {
        let c = fig4();
        for idx in c.element_indices() {
            let a = element_position(&c, idx).unwrap();
            let b = element_position(&c, ElementIndex::new(-idx.module, -idx.antenna)).unwrap();
            assert_eq!(a, -b);
        }
    }

    #[test]
    fn invalid_indices() {
        let c = ArrayConfig::new(3, 4, 13.0, 0.0628, 0.1256).unwrap();
        // odd count: integers only; even count: half-integers only
        assert!(element_position(&c, ElementIndex::new(0.5, 0.5)).is_err());
        assert!(element_position(&c, ElementIndex::new(1.0, 0.0)).is_err());
        assert!(element_position(&c, ElementIndex::new(2.0, 0.5)).is_err());
        assert!(element_position(&c, ElementIndex::new(-1.0, -1.5)).is_ok());
        assert!(matches!(
            module_reference_distance(&c, 1.5, &PolarPoint::new(1.0, 0.0).unwrap()),
            Err(Error::InvalidIndex { .. })
        ));
    }

    #[test]
    fn indices_are_module_major() {
        let c = ArrayConfig::new(2, 3, 3.0, 1.0, 2.0).unwrap();
        let got: Vec<(f64, f64)> = c.element_indices().map(|i| (i.module, i.antenna)).collect();
        assert_eq!(
            got,
            vec![(-0.5, -1.0), (-0.5, 0.0), (-0.5, 1.0), (0.5, -1.0), (0.5, 0.0), (0.5, 1.0)]
        );
    }

    #[test]
    fn distances() {
        let c = fig4();
        let p = PolarPoint::new(200.0, 0.0).unwrap();
        let idx = ElementIndex::new(15.5, 1.5);
        let y = element_position(&c, idx).unwrap();
        assert_relative_eq!(
            element_distance(&c, idx, &p).unwrap(),
            (200.0f64 * 200.0 + y * y).sqrt(),
            max_relative = 1e-14
        );

        let p = PolarPoint::new(200.0, FRAC_PI_6).unwrap();
        let [qx, qy] = p.cartesian();
        let oracle = (qx * qx + (qy - y) * (qy - y)).sqrt();
        assert_relative_eq!(element_distance(&c, idx, &p).unwrap(), oracle, max_relative = 1e-13);
    }

    #[test]
    fn module_reference() {
        let c = fig4();
        let p = PolarPoint::new(200.0, 0.0).unwrap();
        let rn = module_reference_distance(&c, 0.5, &p).unwrap();
        assert_relative_eq!(rn, (200.0f64.powi(2) + 0.40820f64.powi(2)).sqrt(), max_relative = 1e-14);

        let odd = ArrayConfig::new(5, 3, 7.0, 0.05, 0.1).unwrap();
        let p = PolarPoint::new(17.0, 0.4).unwrap();
        assert_eq!(
            module_reference_distance(&odd, 2.0, &p).unwrap(),
            element_distance(&odd, ElementIndex::new(2.0, 0.0), &p).unwrap()
        );
        assert_eq!(module_reference_distance(&odd, 0.0, &p).unwrap(), 17.0);
    }

    #[test]
    fn local_angles() {
        let c = fig4();
        let p = PolarPoint::new(200.0, 0.3).unwrap();
        assert_relative_eq!(module_local_angle(&c, 0.5, &p).unwrap(), {
            let y = 0.5 * 13.0 * 0.0628;
            (200.0 * 0.3f64.sin() - y) / module_reference_distance(&c, 0.5, &p).unwrap()
        });

        let p = PolarPoint::new(200.0, 0.0).unwrap();
        let yn = 15.5 * 13.0 * 0.0628;
        let expected = -yn / (200.0f64 * 200.0 + yn * yn).sqrt();
        assert_relative_eq!(module_local_angle(&c, 15.5, &p).unwrap(), expected, max_relative = 1e-14);

        let far = PolarPoint::new(1e12, 0.7).unwrap();
        for n in c.module_indices() {
            assert_relative_eq!(module_local_angle(&c, n, &far).unwrap(), 0.7f64.sin(), epsilon = 1e-10);
        }

        let odd = ArrayConfig::new(3, 1, 1.0, 1.0, 1.0).unwrap();
        let on_module = PolarPoint::new(1.0, FRAC_PI_2).unwrap();
        assert!(matches!(
            module_local_angle(&odd, 1.0, &on_module),
            Err(Error::SingularGeometry(_))
        ));
    }

    #[test]
    fn fig4_boundaries() {
        let c = fig4();
        let d = c.total_aperture();
        assert_relative_eq!(d, 25.4968, max_relative = 1e-12);
        assert_relative_eq!(c.module_aperture(), 0.1884, max_relative = 1e-12);
        let b = region_boundaries(&c);
        assert_relative_eq!(b.array_rayleigh, 2.0 * d * d / 0.1256, max_relative = 1e-14);
        assert!((b.array_rayleigh - 10351.7).abs() < 0.1);
        assert!((b.module_rayleigh - 0.5652).abs() < 1e-4);
        assert!((b.extended_far_field_bound - 152.98).abs() < 0.01);
        assert!((b.amplitude_uniform_bound - 30.596).abs() < 1e-3);
        assert!(b.regime.is_none());
    }

    #[test]
    fn degenerate_apertures() {
        let c = ArrayConfig::new(6, 4, 4.0, 0.01, 0.02).unwrap();
        assert_relative_eq!(c.total_aperture(), 23.0 * 0.01, max_relative = 1e-14);
        let single = ArrayConfig::new(1, 4, 9.0, 0.01, 0.02).unwrap();
        assert_eq!(single.total_aperture(), single.module_aperture());
    }

    #[test]
    fn classification() {
        let c = fig4();
        let b = region_boundaries(&c);
        assert_eq!(classify_region(&c, 200.0).unwrap().regime, Some(Regime::SubarrayCommonAngle));
        assert_eq!(classify_region(&c, b.array_rayleigh).unwrap().regime, Some(Regime::UpwFarField));
        assert_eq!(classify_region(&c, 0.5).unwrap().regime, Some(Regime::NuswRequired));
        assert_eq!(classify_region(&c, 100.0).unwrap().regime, Some(Regime::SubarrayDifferentAngles));
        assert!(matches!(classify_region(&c, 0.0), Err(Error::Domain(_))));
        assert!(classify_region(&c, -3.0).is_err());

        // module Rayleigh distance above 1.2 D leaves room for the exact USW window
        let wide = ArrayConfig::new(2, 64, 64.0, 0.5, 1.0).unwrap();
        let b = region_boundaries(&wide);
        assert!(b.amplitude_uniform_bound < b.module_rayleigh);
        let mid = 0.5 * (b.amplitude_uniform_bound + b.module_rayleigh);
        assert_eq!(classify_region(&wide, mid).unwrap().regime, Some(Regime::UswExact));
    }

    #[test]
    fn classification_is_monotone() {
        for c in [fig4(), ArrayConfig::new(2, 64, 64.0, 0.5, 1.0).unwrap(), ArrayConfig::new(3, 2, 2.0, 0.1, 1.0).unwrap()] {
            let mut prev = Regime::NuswRequired;
            let mut r = 1e-3;
            while r < 1e6 {
                let regime = classify_region(&c, r).unwrap().regime.unwrap();
                assert!(regime >= prev, "{regime} after {prev} at r = {r}");
                prev = regime;
                r *= 1.01;
            }
            assert_eq!(prev, Regime::UpwFarField);
        }
    }

    #[test]
    fn phase_error_examples() {
        let single = ArrayConfig::new(1, 5, 5.0, 0.05, 0.1).unwrap();
        let p = PolarPoint::new(3.0, 0.9).unwrap();
        assert_eq!(common_angle_phase_error(&single, &p).unwrap(), 0.0);

        let c = fig4();
        let far = PolarPoint::new(1e12, 0.2).unwrap();
        assert!(common_angle_phase_error(&c, &far).unwrap() < 1e-9);

        // exhaustive max over (n, m) using exact local angles
        let bound = region_boundaries(&c).extended_far_field_bound;
        let p = PolarPoint::new(bound, 0.0).unwrap();
        let mut oracle = 0.0_f64;
        for idx in c.element_indices() {
            let [qx, qy] = p.cartesian();
            let yn = idx.module * 13.0 * 0.0628;
            let sin_n = (qy - yn) / (qx * qx + (qy - yn).powi(2)).sqrt();
            let phase = 2.0 * PI / 0.1256 * (idx.antenna * 0.0628 * (sin_n - 0.0)).abs();
            oracle = oracle.max(phase);
        }
        let got = common_angle_phase_error(&c, &p).unwrap();
        assert_relative_eq!(got, oracle, max_relative = 1e-12);
        assert!((got - PI / 8.0).abs() < 0.05 * PI / 8.0, "{got}");
    }
}
