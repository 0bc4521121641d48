//! Explicit small-amplitude solitary waves on a two-layer, piecewise-constant
//! vorticity flow in a channel: construction, validation, and qualitative
//! flow-structure analysis (critical layers, stagnation points, streamlines).
//!
//! All lengths are scaled by the channel depth, so the strip is `0 ≤ Y ≤ 1`,
//! and vorticities by the jump `ω₀ − ω₁ = 1`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod flowfield;
pub mod mobius;
pub mod params;
pub mod reduced_ode;
pub mod spectral;
pub mod wave;

pub use diagnostics::{diagnose, DiagnosticsConfig, DiagnosticsReport};
pub use error::{Error, Result};
pub use flowfield::{find_stagnation, normalize_orientation, StagnationReport, Streamline};
pub use params::{
    classify_region, critical_speed, equilibrium_interfaces, Equilibrium, Layer, Params, Region, RegionLabel,
    ShearFlow, StagnationNature, WaveProfile,
};
pub use reduced_ode::ReducedTrajectory;
pub use wave::{build_wave, WaveField};
