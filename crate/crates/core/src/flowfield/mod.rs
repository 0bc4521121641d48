//! Qualitative flow structure: critical layers, stagnation points,
//! streamlines, contour portraits and sign laws.
//!
//! The analysis runs in a normalized frame where `ω₀ ≤ 1−h`, so that the
//! critical layer sits in the upper layer; results are mapped back before
//! they are returned.

pub mod contour;
pub mod critical;
pub mod streamline;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mobius::flatten;
use crate::params::{Layer, Params};
use crate::wave::{build_wave, WaveField};

pub use contour::{contour_lines, portrait, Contour, Portrait, PortraitOptions, ScalarGrid};
pub use critical::{
    critical_curve, critical_layer, find_stagnation, find_x_star, stagnation_sweep, CriticalCurve,
    PointNature, StagnationPoint, StagnationReport, SweepCount,
};
pub use streamline::{
    attached_streamline, trace_many, trace_streamline, Field, Streamline, Termination, TraceOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Orientation {
    pub params: Params,
    pub reflected: bool,
}

/// Reflects `Y ↦ 1−Y` when `ω₀ > 1−h`, and also in the bounded case
/// `ω₀ = 1−h` with `h < 1/2`, so the bounded critical layer always meets the
/// top wall.
pub fn normalize_orientation(p: &Params) -> Orientation {
    let reflect = if p.is_bounded_case() {
        p.h() < 0.5
    } else {
        p.omega0() > 1.0 - p.h()
    };
    Orientation {
        params: if reflect { p.reflected() } else { *p },
        reflected: reflect,
    }
}

/// A wave together with its normalized mirror image.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub original: WaveField,
    pub normal: WaveField,
    pub reflected: bool,
}

impl Frame {
    pub fn new(w: &WaveField) -> Result<Frame> {
        let o = normalize_orientation(w.params());
        Ok(Frame {
            original: *w,
            normal: if o.reflected { build_wave(&o.params)? } else { *w },
            reflected: o.reflected,
        })
    }

    /// Maps a normalized-frame point to the original frame (an involution).
    pub fn to_original(&self, (x, y): (f64, f64)) -> (f64, f64) {
        if self.reflected {
            (x, 1.0 - y)
        } else {
            (x, y)
        }
    }

    pub fn layer_to_original(&self, l: Layer) -> Layer {
        if self.reflected {
            l.flipped()
        } else {
            l
        }
    }

    /// `Ψ` of the original wave from a value in the normalized frame.
    pub fn psi_to_original(&self, psi: f64) -> f64 {
        if self.reflected {
            -psi
        } else {
            psi
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub eta_points: usize,
    pub eta_violations: usize,
    pub v_points: usize,
    pub v_violations: usize,
    /// Largest `Y` at which a `V̄` violation occurred (NaN if none).
    pub v_violation_min_y: f64,
    /// Same test applied to the flat-coordinate field `b(x)v*(y)`;
    /// informational.
    pub flat_v_violations: usize,
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Checks `sign η̄′(X) = sign(θX)` on `nx` cell-centred abscissae and
/// `sign V̄(X, Y) = sign(θX)` on the `nx × ny` interior grid.
pub fn sign_checks(w: &WaveField, nx: usize, ny: usize, x_window: f64) -> SignReport {
    let p = w.params();
    let half = x_window * w.length_scale();
    let dx = 2.0 * half / nx as f64;
    let xs: Vec<f64> = (0..nx).map(|i| -half + (i as f64 + 0.5) * dx).collect();
    let ys: Vec<f64> = (1..=ny).map(|j| j as f64 / (ny + 1) as f64).collect();
    let mut r = SignReport {
        eta_points: nx,
        eta_violations: 0,
        v_points: nx * ny,
        v_violations: 0,
        v_violation_min_y: f64::NAN,
        flat_v_violations: 0,
    };
    for &x in &xs {
        let want = sign(p.theta() * x);
        if sign(w.eta_x(x)) != want {
            r.eta_violations += 1;
        }
        for &y in &ys {
            let (_, v) = w.velocity_branch(x, y, w.layer_at(x, y));
            if sign(v) != want {
                r.v_violations += 1;
                r.v_violation_min_y = if r.v_violation_min_y.is_nan() {
                    y
                } else {
                    r.v_violation_min_y.min(y)
                };
            }
            let flat = flatten(x, y, w.eta(x), w.eta_x(x), p.h())
                .map(|(fp, _)| w.flat_leading(x, fp.y).1)
                .unwrap_or(f64::NAN);
            if sign(flat) != want {
                r.flat_v_violations += 1;
            }
        }
    }
    r
}
