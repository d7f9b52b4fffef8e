//! Near-field channel and beam-pattern models for modular extremely large
//! uniform linear arrays.
//!
//! A modular array has `N` modules of `M` antennas with spacing `d`; module
//! centres are `gamma M d` apart. Steering vectors are available for five
//! channel models, from the exact spherical wave down to the plane-wave far
//! field, together with the beam patterns they produce and closed forms for
//! those patterns.
//!
//! ```
//! use modarray::{classify_region, ArrayConfig, Regime};
//!
//! let array = ArrayConfig::new(32, 4, 13.0, 0.0628, 0.1256).unwrap();
//! let report = classify_region(&array, 200.0).unwrap();
//! assert_eq!(report.regime, Some(Regime::SubarrayCommonAngle));
//! ```

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod patterns;
pub mod special;
pub mod steering;
pub mod sweep;

pub use analysis::{
    find_peaks, lobe_report_upw, main_lobe_width, resolution_compare, sweep_peaks, GratingLobe, LobeReport, Peak,
};
pub use error::{Error, Result};
pub use geometry::{
    classify_region, common_angle_phase_error, element_distance, element_position, module_local_angle,
    module_reference_distance, region_boundaries, symmetric_indices, ArrayConfig, ElementIndex, PolarPoint, Regime,
    RegionReport,
};
pub use patterns::{
    closed_form_terms, gain_to_db, pattern_collocated_closed, pattern_exact, pattern_fresnel_closed,
    pattern_subarray_common, pattern_subarray_diff, pattern_upw_closed, same_direction_gain, ClosedFormTerms,
    FocusSpec,
};
pub use special::{dirichlet_kernel, fresnel, FresnelValue};
pub use steering::{
    channel_vector, kronecker_factor, sparse_near_field_factor, steer, steer_nusw, steer_subarray_common,
    steer_subarray_diff, steer_upw, steer_usw, ChannelParams, KroneckerFactors, Model, SteeringVector,
};
pub use sweep::{
    figure_preset, parse_config, run_figure, run_sweep, Figure, FigurePreset, PatternModel, PatternSweep, Sample,
    SweepSpec, SweepVariable,
};
