//! C interface to `modarray`.
//!
//! Every fallible function returns a [`ModarrayStatus`]; on failure the
//! message is available from [`modarray_last_error`] on the same thread.
//! Angles are in radians. Array configurations are opaque handles created by
//! [`modarray_config_new`] or [`modarray_config_load`] and released with
//! [`modarray_config_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use modarray::sweep::{emit_csv, load_config};
use modarray::{
    classify_region, dirichlet_kernel, figure_preset, fresnel, region_boundaries, run_figure, same_direction_gain,
    steer, ArrayConfig, Error, Figure, FocusSpec, Model, PatternModel, PolarPoint, Regime, RegionReport,
};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModarrayStatus {
    Ok = 0,
    InvalidConfig = 1,
    InvalidIndex = 2,
    Domain = 3,
    SingularGeometry = 4,
    NotFactorizable = 5,
    InsufficientData = 6,
    Usage = 7,
    Io = 8,
    NullPointer = 9,
    BufferTooSmall = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

/// Channel models for steering vectors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModarrayModel {
    Nusw = 0,
    Usw = 1,
    Upw = 2,
    SubarrayDiff = 3,
    SubarrayCommon = 4,
}

/// Beam pattern evaluators.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModarrayPattern {
    Nusw = 0,
    Usw = 1,
    Upw = 2,
    SubarrayDiff = 3,
    SubarrayCommon = 4,
    Fresnel = 5,
}

/// Propagation regime; `None` when no distance was classified.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModarrayRegime {
    None = -1,
    NuswRequired = 0,
    UswExact = 1,
    SubarrayDifferentAngles = 2,
    SubarrayCommonAngle = 3,
    UpwFarField = 4,
}

/// Region boundaries in meters.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModarrayRegions {
    pub amplitude_uniform_bound: f64,
    pub module_rayleigh: f64,
    pub extended_far_field_bound: f64,
    pub array_rayleigh: f64,
    pub regime: ModarrayRegime,
}

/// Opaque array configuration.
pub struct ModarrayConfig {
    inner: ArrayConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(err: &Error) -> ModarrayStatus {
    match err {
        Error::InvalidConfig(_) => ModarrayStatus::InvalidConfig,
        Error::InvalidIndex { .. } => ModarrayStatus::InvalidIndex,
        Error::Domain(_) => ModarrayStatus::Domain,
        Error::SingularGeometry(_) => ModarrayStatus::SingularGeometry,
        Error::NotFactorizable { .. } => ModarrayStatus::NotFactorizable,
        Error::InsufficientData { .. } => ModarrayStatus::InsufficientData,
        Error::Usage(_) => ModarrayStatus::Usage,
        Error::Io { .. } => ModarrayStatus::Io,
    }
}

struct Failure(ModarrayStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ModarrayStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording any failure or panic.
fn guard<F>(body: F) -> ModarrayStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            ModarrayStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            ModarrayStatus::Panic
        }
    }
}

unsafe fn config_ref<'a>(config: *const ModarrayConfig) -> Result<&'a ArrayConfig, Failure> {
    config.as_ref().map(|c| &c.inner).ok_or_else(|| null("config"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(ModarrayStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn regime_code(regime: Option<Regime>) -> ModarrayRegime {
    match regime {
        None => ModarrayRegime::None,
        Some(Regime::NuswRequired) => ModarrayRegime::NuswRequired,
        Some(Regime::UswExact) => ModarrayRegime::UswExact,
        Some(Regime::SubarrayDifferentAngles) => ModarrayRegime::SubarrayDifferentAngles,
        Some(Regime::SubarrayCommonAngle) => ModarrayRegime::SubarrayCommonAngle,
        Some(Regime::UpwFarField) => ModarrayRegime::UpwFarField,
    }
}

fn regions_of(report: RegionReport) -> ModarrayRegions {
    ModarrayRegions {
        amplitude_uniform_bound: report.amplitude_uniform_bound,
        module_rayleigh: report.module_rayleigh,
        extended_far_field_bound: report.extended_far_field_bound,
        array_rayleigh: report.array_rayleigh,
        regime: regime_code(report.regime),
    }
}

fn model_of(model: ModarrayModel) -> Model {
    match model {
        ModarrayModel::Nusw => Model::Nusw,
        ModarrayModel::Usw => Model::Usw,
        ModarrayModel::Upw => Model::Upw,
        ModarrayModel::SubarrayDiff => Model::SubarrayDiff,
        ModarrayModel::SubarrayCommon => Model::SubarrayCommon,
    }
}

fn pattern_of(pattern: ModarrayPattern) -> PatternModel {
    match pattern {
        ModarrayPattern::Nusw => PatternModel::Nusw,
        ModarrayPattern::Usw => PatternModel::Usw,
        ModarrayPattern::Upw => PatternModel::Upw,
        ModarrayPattern::SubarrayDiff => PatternModel::SubarrayDiff,
        ModarrayPattern::SubarrayCommon => PatternModel::SubarrayCommon,
        ModarrayPattern::Fresnel => PatternModel::Fresnel,
    }
}

/// Creates a configuration of `num_modules` modules with
/// `antennas_per_module` elements each.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn modarray_config_new(
    num_modules: usize,
    antennas_per_module: usize,
    gamma: f64,
    element_spacing: f64,
    wavelength: f64,
    out: *mut *mut ModarrayConfig,
) -> ModarrayStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = ArrayConfig::new(num_modules, antennas_per_module, gamma, element_spacing, wavelength)?;
        out.write(Box::into_raw(Box::new(ModarrayConfig { inner })));
        Ok(())
    })
}

/// Reads a `key = value` configuration file.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` must be valid for writing
/// one pointer.
#[no_mangle]
pub unsafe extern "C" fn modarray_config_load(path: *const c_char, out: *mut *mut ModarrayConfig) -> ModarrayStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = load_config(Path::new(path))?;
        out.write(Box::into_raw(Box::new(ModarrayConfig { inner })));
        Ok(())
    })
}

/// Releases a configuration. Null is ignored.
///
/// # Safety
/// `config` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn modarray_config_free(config: *mut ModarrayConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Number of elements `N M`, or 0 for a null handle.
///
/// # Safety
/// `config` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn modarray_config_num_elements(config: *const ModarrayConfig) -> usize {
    config.as_ref().map_or(0, |c| c.inner.num_elements())
}

/// Region boundaries without classification (`regime` is `None`).
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modarray_region_boundaries(
    config: *const ModarrayConfig,
    out: *mut ModarrayRegions,
) -> ModarrayStatus {
    guard(|| {
        let config = config_ref(config)?;
        write_out(out, regions_of(region_boundaries(config)), "out")
    })
}

/// Region boundaries and the regime of a source at distance `r`.
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modarray_classify_region(
    config: *const ModarrayConfig,
    r: f64,
    out: *mut ModarrayRegions,
) -> ModarrayStatus {
    guard(|| {
        let config = config_ref(config)?;
        let report = classify_region(config, r)?;
        write_out(out, regions_of(report), "out")
    })
}

/// Writes the steering vector for a source at `(r, theta)` into `re` and
/// `im`, module-major. `len` must be at least the element count.
///
/// # Safety
/// `re` and `im` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn modarray_steering_vector(
    config: *const ModarrayConfig,
    model: ModarrayModel,
    r: f64,
    theta: f64,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> ModarrayStatus {
    guard(|| {
        let config = config_ref(config)?;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        let needed = config.num_elements();
        if len < needed {
            return Err(Failure(
                ModarrayStatus::BufferTooSmall,
                format!("buffer holds {len} entries, {needed} needed"),
            ));
        }
        let v = steer(config, &PolarPoint::new(r, theta)?, model_of(model))?;
        for (i, z) in v.entries().iter().enumerate() {
            re.add(i).write(z.re);
            im.add(i).write(z.im);
        }
        Ok(())
    })
}

/// Beam pattern gain at `(r, theta)` for a beam focused on
/// `(r_focus, theta_focus)`.
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modarray_pattern(
    config: *const ModarrayConfig,
    pattern: ModarrayPattern,
    r_focus: f64,
    theta_focus: f64,
    r: f64,
    theta: f64,
    out: *mut f64,
) -> ModarrayStatus {
    guard(|| {
        let config = config_ref(config)?;
        let spec = FocusSpec::new(PolarPoint::new(r_focus, theta_focus)?, PolarPoint::new(r, theta)?);
        let gain = pattern_of(pattern).evaluate(config, &spec)?;
        write_out(out, gain, "out")
    })
}

/// Gain between two distances along the same direction.
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modarray_same_direction_gain(
    config: *const ModarrayConfig,
    r: f64,
    r_prime: f64,
    theta: f64,
    collocated: bool,
    out: *mut f64,
) -> ModarrayStatus {
    guard(|| {
        let config = config_ref(config)?;
        let gain = same_direction_gain(config, r, r_prime, theta, collocated)?;
        write_out(out, gain, "out")
    })
}

/// Fresnel integrals `C(x) = int_0^x cos(t^2) dt` and `S(x)`.
///
/// # Safety
/// `c` and `s` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modarray_fresnel(x: f64, c: *mut f64, s: *mut f64) -> ModarrayStatus {
    guard(|| {
        if c.is_null() || s.is_null() {
            return Err(null("output"));
        }
        let v = fresnel(x)?;
        c.write(v.c);
        s.write(v.s);
        Ok(())
    })
}

/// Dirichlet kernel `sin(pi M d x) / (M sin(pi d x))`; NaN when `count` is 0.
#[no_mangle]
pub extern "C" fn modarray_dirichlet(count: usize, spacing: f64, delta: f64) -> f64 {
    if count == 0 {
        return f64::NAN;
    }
    dirichlet_kernel(count, spacing, delta)
}

/// Writes the CSV of a figure preset (`"fig3"`, `"fig4a"`, `"fig4b"`,
/// `"fig4c"`) to `path`.
///
/// # Safety
/// `name` and `path` must be nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn modarray_figure_csv(name: *const c_char, path: *const c_char) -> ModarrayStatus {
    guard(|| {
        let figure: Figure = c_str(name, "name")?.parse()?;
        let path = c_str(path, "path")?;
        let sweeps = run_figure(&figure_preset(figure))?;
        emit_csv(&sweeps, Path::new(path))?;
        Ok(())
    })
}

/// Message of the last failure on this thread, or null after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn modarray_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn modarray_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
