//! Beam focusing patterns: the exact inner-product definition and the
//! closed forms for the plane-wave, collocated, sub-array and Fresnel cases.
//!
//! All gains are linear amplitude ratios; see [`gain_to_db`] for the dB scale.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{axis_distance, local_sine, ArrayConfig, PolarPoint};
use crate::special::{dirichlet_kernel, fresnel_f};
use crate::steering::{steer, Model};

/// A beam focused on `intended`, evaluated at `observed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocusSpec {
    pub intended: PolarPoint,
    pub observed: PolarPoint,
}

impl FocusSpec {
    pub fn new(intended: PolarPoint, observed: PolarPoint) -> Self {
        Self { intended, observed }
    }

    /// Spatial frequency difference `sin(theta) - sin(theta')`.
    pub fn delta_theta(&self) -> f64 {
        self.observed.spatial_frequency() - self.intended.spatial_frequency()
    }

    /// `r - r'`.
    pub fn delta_r(&self) -> f64 {
        self.observed.distance() - self.intended.distance()
    }
}

/// Coefficients of the quadratic phase `nu n^2 + mu n` across modules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormTerms {
    /// `-pi dbar gamma^2 d delta_ring`.
    pub nu: f64,
    /// `2 pi dbar gamma delta_theta`.
    pub mu: f64,
    /// `cos^2(theta) / r - cos^2(theta') / r'`, in 1/m.
    pub delta_ring: f64,
}

/// Below this `|nu|` the Fresnel form is replaced by its equal-ring limit.
pub const NU_DEGENERATE: f64 = 1e-14;

/// Lowest reported gain on the dB scale (-100 dB).
pub const GAIN_FLOOR: f64 = 1e-5;

/// `20 log10(G)`, floored at -100 dB.
pub fn gain_to_db(gain: f64) -> f64 {
    20.0 * gain.max(GAIN_FLOOR).log10()
}

/// `G = |a(r', theta')^H a(r, theta)| / (M N)` with both vectors built by `model`.
pub fn pattern_exact(config: &ArrayConfig, spec: &FocusSpec, model: Model) -> Result<f64> {
    let intended = steer(config, &spec.intended, model)?;
    let observed = steer(config, &spec.observed, model)?;
    Ok(intended.inner(&observed).norm() / config.num_elements() as f64)
}

/// Far-field pattern `|H_{N, gamma dbar}| |H_{M, dbar}|`.
pub fn pattern_upw_closed(config: &ArrayConfig, delta_theta: f64) -> f64 {
    let dbar = config.normalized_spacing();
    let sparse = dirichlet_kernel(
        config.num_modules(),
        config.module_separation_factor() * dbar,
        delta_theta,
    );
    let module = dirichlet_kernel(config.antennas_per_module(), dbar, delta_theta);
    sparse.abs() * module.abs()
}

/// Pattern of the collocated array with the same element count, `|H_{MN, dbar}|`.
pub fn pattern_collocated_closed(config: &ArrayConfig, delta_theta: f64) -> f64 {
    dirichlet_kernel(config.num_elements(), config.normalized_spacing(), delta_theta).abs()
}

struct ModuleTerm {
    delta_r: f64,
    delta_sin: f64,
}

fn module_terms(config: &ArrayConfig, spec: &FocusSpec) -> Result<Vec<ModuleTerm>> {
    config
        .module_indices()
        .map(|n| {
            let y = config.module_center(n);
            let r_obs = axis_distance(&spec.observed, y);
            let r_int = axis_distance(&spec.intended, y);
            Ok(ModuleTerm {
                delta_r: r_obs - r_int,
                delta_sin: local_sine(&spec.observed, y)? - local_sine(&spec.intended, y)?,
            })
        })
        .collect()
}

/// Weighted sum of per-module patterns with per-module angle differences.
pub fn pattern_subarray_diff(config: &ArrayConfig, spec: &FocusSpec) -> Result<f64> {
    let k = config.wavenumber();
    let dbar = config.normalized_spacing();
    let m = config.antennas_per_module();
    let (re, im) = module_terms(config, spec)?
        .iter()
        .fold((0.0, 0.0), |(re, im), t| {
            let h = dirichlet_kernel(m, dbar, t.delta_sin);
            let phase = -k * t.delta_r;
            (re + h * phase.cos(), im + h * phase.sin())
        });
    Ok(re.hypot(im) / config.num_modules() as f64)
}

/// Sparse near-field sum times the common-angle module pattern.
pub fn pattern_subarray_common(config: &ArrayConfig, spec: &FocusSpec) -> Result<f64> {
    let k = config.wavenumber();
    let (re, im) = module_terms(config, spec)?
        .iter()
        .fold((0.0, 0.0), |(re, im), t| {
            let phase = -k * t.delta_r;
            (re + phase.cos(), im + phase.sin())
        });
    let sparse = re.hypot(im) / config.num_modules() as f64;
    let module = dirichlet_kernel(
        config.antennas_per_module(),
        config.normalized_spacing(),
        spec.delta_theta(),
    );
    Ok(sparse * module.abs())
}

pub fn closed_form_terms(config: &ArrayConfig, spec: &FocusSpec) -> ClosedFormTerms {
    let dbar = config.normalized_spacing();
    let gamma = config.module_separation_factor();
    let delta_ring = ring_curvature(&spec.observed) - ring_curvature(&spec.intended);
    ClosedFormTerms {
        nu: -PI * dbar * gamma * gamma * config.element_spacing() * delta_ring,
        mu: 2.0 * PI * dbar * gamma * spec.delta_theta(),
        delta_ring,
    }
}

/// `cos^2(theta) / r`.
fn ring_curvature(p: &PolarPoint) -> f64 {
    let c = p.angle().cos();
    c * c / p.distance()
}

/// Large-`N` Fresnel-integral approximation of the common-angle pattern.
///
/// On equal distance rings (or when `|nu|` underflows the threshold) this is
/// exactly the far-field pattern. Otherwise both signs of `nu` reduce to
/// `|F(A + B) + F(A - B)| / (sqrt|nu| N) |H_{M, dbar}|` with
/// `A = sqrt|nu| N / 2`, `B = mu / (2 sqrt|nu|)`.
pub fn pattern_fresnel_closed(config: &ArrayConfig, spec: &FocusSpec) -> f64 {
    let terms = closed_form_terms(config, spec);
    let delta_theta = spec.delta_theta();
    if terms.delta_ring == 0.0 || terms.nu.abs() < NU_DEGENERATE {
        return pattern_upw_closed(config, delta_theta);
    }
    let root = terms.nu.abs().sqrt();
    let n = config.num_modules() as f64;
    let a = root * n / 2.0;
    let b = terms.mu / (2.0 * root);
    let sparse = (fresnel_f(a + b) + fresnel_f(a - b)).norm() / (root * n);
    let module = dirichlet_kernel(
        config.antennas_per_module(),
        config.normalized_spacing(),
        delta_theta,
    );
    sparse * module.abs()
}

/// Same-direction gain `|F(x)| / x`, `x = sqrt|nu_r| N / 2`, between
/// distances `r` and `r_prime` along `theta`. With `collocated` set the
/// module separation factor is replaced by `M`.
pub fn same_direction_gain(
    config: &ArrayConfig,
    r: f64,
    r_prime: f64,
    theta: f64,
    collocated: bool,
) -> Result<f64> {
    for (name, v) in [("r", r), ("r_prime", r_prime)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!("{name} = {v} must be positive")));
        }
    }
    if !theta.is_finite() {
        return Err(Error::Domain(format!("angle {theta} is not finite")));
    }
    if r == r_prime {
        return Ok(1.0);
    }
    let g = if collocated {
        config.antennas_per_module() as f64
    } else {
        config.module_separation_factor()
    };
    let cos2 = theta.cos().powi(2);
    let nu = -PI * config.normalized_spacing() * g * g * config.element_spacing() * (cos2 / r - cos2 / r_prime);
    let x = nu.abs().sqrt() * config.num_modules() as f64 / 2.0;
    if x < 1e-8 {
        return Ok(1.0);
    }
    Ok((fresnel_f(x).norm() / x).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn fig3() -> ArrayConfig {
        ArrayConfig::new(4, 4, 13.0, 0.0628, 0.1256).unwrap()
    }

    fn fig4() -> ArrayConfig {
        ArrayConfig::new(32, 4, 13.0, 0.0628, 0.1256).unwrap()
    }

    fn pt(r: f64, theta: f64) -> PolarPoint {
        PolarPoint::new(r, theta).unwrap()
    }

    /// Independent double sum over element coordinates.
    fn brute_usw(n_mod: usize, m_ant: usize, gamma: f64, d: f64, lambda: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n_mod {
            let n = i as f64 - (n_mod as f64 - 1.0) / 2.0;
            for j in 0..m_ant {
                let m = j as f64 - (m_ant as f64 - 1.0) / 2.0;
                let y = (n * gamma + m) * d;
                let dist = |(r, t): (f64, f64)| (r * t.cos()).hypot(r * t.sin() - y);
                let phase = -2.0 * PI / lambda * (dist(b) - dist(a));
                acc += Complex64::new(phase.cos(), phase.sin());
            }
        }
        acc.norm() / (n_mod * m_ant) as f64
    }

    #[test]
    fn self_focus_is_unity() {
        let c = fig4();
        let p = pt(200.0, 0.3);
        let spec = FocusSpec::new(p, p);
        for model in [Model::Usw, Model::Upw, Model::SubarrayDiff, Model::SubarrayCommon] {
            assert!((pattern_exact(&c, &spec, model).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((pattern_subarray_diff(&c, &spec).unwrap() - 1.0).abs() < 1e-12);
        assert!((pattern_subarray_common(&c, &spec).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(pattern_fresnel_closed(&c, &spec), 1.0);
    }

    #[test]
    fn single_element_is_flat() {
        let c = ArrayConfig::new(1, 1, 1.0, 0.05, 0.1).unwrap();
        let spec = FocusSpec::new(pt(3.0, 0.1), pt(17.0, -1.2));
        for model in [Model::Usw, Model::Upw, Model::SubarrayDiff, Model::SubarrayCommon] {
            assert!((pattern_exact(&c, &spec, model).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn usw_matches_brute_force() {
        let c = fig4();
        let spec = FocusSpec::new(pt(200.0, 0.0), pt(200.0, 0.05f64.asin()));
        let brute = brute_usw(32, 4, 13.0, 0.0628, 0.1256, (200.0, 0.0), (200.0, 0.05f64.asin()));
        assert!((pattern_exact(&c, &spec, Model::Usw).unwrap() - brute).abs() < 1e-10);
    }

    #[test]
    fn upw_closed_examples() {
        let c = fig3();
        assert_eq!(pattern_upw_closed(&c, 0.0), 1.0);
        let g = pattern_upw_closed(&c, 2.0 / 13.0);
        assert_relative_eq!(g, dirichlet_kernel(4, 0.5, 2.0 / 13.0).abs(), max_relative = 1e-12);
        let exact = pattern_exact(
            &c,
            &FocusSpec::new(pt(200.0, 0.0), pt(200.0, (2.0f64 / 13.0).asin())),
            Model::Upw,
        )
        .unwrap();
        assert!((g - exact).abs() < 1e-10);

        assert!(pattern_upw_closed(&c, 1.0 / 13.0) < 1e-10);
        let exact = pattern_exact(
            &c,
            &FocusSpec::new(pt(200.0, 0.0), pt(900.0, (1.0f64 / 13.0).asin())),
            Model::Upw,
        )
        .unwrap();
        assert!(exact < 1e-10);
    }

    #[test]
    fn collocated_closed() {
        let c = fig3();
        let col = c.collocated();
        for i in 0..=400 {
            let x = -1.0 + i as f64 * 0.005;
            assert_eq!(pattern_collocated_closed(&c, x), pattern_collocated_closed(&col, x));
            let product = dirichlet_kernel(4, 2.0, x).abs() * dirichlet_kernel(4, 0.5, x).abs();
            assert!((pattern_collocated_closed(&c, x) - product).abs() < 1e-10);
            assert!((pattern_upw_closed(&col, x) - pattern_collocated_closed(&c, x)).abs() < 1e-12);
        }
        assert_eq!(pattern_collocated_closed(&c, 0.0), 1.0);
        assert!(pattern_collocated_closed(&c, 0.25) < 1e-12);
    }

    #[test]
    fn subarray_diff_examples() {
        let c = fig4();
        let spec = FocusSpec::new(pt(200.0, 0.0), pt(200.0, 0.1f64.asin()));
        let direct = pattern_exact(&c, &spec, Model::SubarrayDiff).unwrap();
        assert!((pattern_subarray_diff(&c, &spec).unwrap() - direct).abs() < 1e-10);

        let single = ArrayConfig::new(1, 6, 6.0, 0.05, 0.1).unwrap();
        let spec = FocusSpec::new(pt(30.0, 0.2), pt(45.0, -0.1));
        let expected = dirichlet_kernel(6, 0.5, spec.delta_theta()).abs();
        assert!((pattern_subarray_diff(&single, &spec).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn subarray_common_examples() {
        let c = fig4();
        let spec = FocusSpec::new(pt(200.0, 0.0), pt(800.0, 0.0));
        let direct = pattern_exact(&c, &spec, Model::SubarrayCommon).unwrap();
        assert!((pattern_subarray_common(&c, &spec).unwrap() - direct).abs() < 1e-10);

        // module kernel period 1 / dbar
        let spec = FocusSpec::new(pt(50.0, 0.0), pt(50.0, 0.5f64.asin()));
        let module = dirichlet_kernel(4, 2.0, spec.delta_theta());
        assert_eq!(module.abs(), 1.0);
    }

    #[test]
    fn terms() {
        let c = fig4();
        let p = pt(200.0, 0.4);
        let t = closed_form_terms(&c, &FocusSpec::new(p, p));
        assert_eq!((t.nu, t.mu, t.delta_ring), (0.0, 0.0, 0.0));

        let xi: f64 = 300.0;
        let a = pt(xi * 0.2f64.cos().powi(2), 0.2);
        let b = pt(xi * 0.5f64.cos().powi(2), -0.5);
        let t = closed_form_terms(&c, &FocusSpec::new(a, b));
        assert!(t.delta_ring.abs() < 1e-15);
        assert!(t.mu != 0.0);

        let t = closed_form_terms(&c, &FocusSpec::new(pt(200.0, 0.0), pt(800.0, 0.0)));
        assert_relative_eq!(t.delta_ring, -3.75e-3, max_relative = 1e-12);
        let expected = PI * 0.5 * 169.0 * 0.0628 * 3.75e-3;
        assert_relative_eq!(t.nu, expected, max_relative = 1e-12);
        assert!((t.nu - 0.0625167).abs() < 1e-6);
        assert_eq!(t.mu, 0.0);
    }

    #[test]
    fn fresnel_closed_examples() {
        let c = fig4();
        let spec = FocusSpec::new(pt(200.0, 0.0), pt(800.0, 0.0));
        let terms = closed_form_terms(&c, &spec);
        let x = terms.nu.sqrt() * 16.0;
        let g0 = crate::special::fresnel(x).unwrap().f_magnitude / x;
        let g = pattern_fresnel_closed(&c, &spec);
        assert_relative_eq!(g, g0, max_relative = 1e-12);
        assert!((g - pattern_subarray_common(&c, &spec).unwrap()).abs() < 0.02);

        // both signs of delta against the sum
        for (r, theta) in [(800.0, 0.02), (120.0, 0.02), (160.0, -0.03), (500.0, 0.05)] {
            let spec = FocusSpec::new(pt(200.0, 0.0), pt(r, theta));
            let sum = pattern_subarray_common(&c, &spec).unwrap();
            let closed = pattern_fresnel_closed(&c, &spec);
            assert!((sum - closed).abs() < 0.02, "r = {r}: {sum} vs {closed}");
        }
    }

    #[test]
    fn fresnel_closed_mirror_symmetry() {
        // flipping the sign of nu leaves the magnitude unchanged
        let c = fig4();
        let a = FocusSpec::new(pt(200.0, 0.0), pt(800.0, 0.03));
        let ta = closed_form_terms(&c, &a);
        let root = ta.nu.abs().sqrt();
        let n = 32.0;
        let direct = (fresnel_f(root * n / 2.0 + ta.mu / (2.0 * root))
            + fresnel_f(root * n / 2.0 - ta.mu / (2.0 * root)))
        .norm()
            / (root * n)
            * dirichlet_kernel(4, 0.5, a.delta_theta()).abs();
        assert_relative_eq!(pattern_fresnel_closed(&c, &a), direct, max_relative = 1e-12);
        let swapped = FocusSpec::new(a.observed, a.intended);
        assert!(closed_form_terms(&c, &swapped).nu < 0.0);
        assert_relative_eq!(
            pattern_fresnel_closed(&c, &swapped),
            pattern_fresnel_closed(&c, &a),
            max_relative = 1e-12
        );
    }

    #[test]
    fn equal_ring_routes_to_far_field() {
        let c = fig4();
        let xi: f64 = 400.0;
        let a = pt(xi * 0.1f64.cos().powi(2), 0.1);
        let b = pt(xi * 0.3f64.cos().powi(2), 0.3);
        let spec = FocusSpec::new(a, b);
        assert_eq!(
            pattern_fresnel_closed(&c, &spec),
            pattern_upw_closed(&c, spec.delta_theta())
        );
    }

    #[test]
    fn same_direction() {
        let c = fig4();
        assert_eq!(same_direction_gain(&c, 200.0, 200.0, 0.0, false).unwrap(), 1.0);
        let g0 = same_direction_gain(&c, 800.0, 200.0, 0.0, false).unwrap();
        let g1 = same_direction_gain(&c, 800.0, 200.0, 0.0, true).unwrap();
        assert!(g0 <= g1, "{g0} {g1}");
        let spec = FocusSpec::new(pt(200.0, 0.0), pt(800.0, 0.0));
        assert_relative_eq!(g0, pattern_fresnel_closed(&c, &spec), max_relative = 1e-12);
        assert!(same_direction_gain(&c, 0.0, 200.0, 0.0, false).is_err());

        // |F(x)| stays below 1.2, so the gain is bounded by 1.2 / x
        let mut r = 190.0;
        while r > 0.01 {
            let g = same_direction_gain(&c, r, 200.0, 0.0, false).unwrap();
            let nu = PI * 0.5 * 169.0 * 0.0628 * (1.0 / r - 1.0 / 200.0);
            let x = nu.sqrt() * 16.0;
            assert!(g <= (1.2 / x).min(1.0) + 1e-12);
            r *= 0.8;
        }
        assert!(same_direction_gain(&c, 0.2, 200.0, 0.0, false).unwrap() < 0.02);
    }

    #[test]
    fn db_scale() {
        assert_eq!(gain_to_db(1.0), 0.0);
        assert_eq!(gain_to_db(0.0), -100.0);
        assert_relative_eq!(gain_to_db(0.1), -20.0, max_relative = 1e-12);
    }
}
