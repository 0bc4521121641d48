//! Streamline tracing by fixed-step RK4 in arclength.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::critical::{critical_layer, find_x_star};
use super::Frame;
use crate::error::{Error, Result};
use crate::params::Layer;
use crate::wave::WaveField;

/// Speeds below this count as a stagnation point.
pub const SPEED_FLOOR: f64 = 1e-8;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const MAX_STEPS: usize = 1_000_000;

/// Vector field being integrated.
///
/// `Hamiltonian` is `(Ψ_Y, −Ψ_X)`, whose orbits are exactly the level sets of
/// `Ψ`. `Velocity` is `(Ū, V̄)`; for the approximate wave the two differ by
/// the interface kinematic residual, `O(ε^{5/2})`, so `Ψ` drifts by `O(ε²)`
/// along velocity orbits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Hamiltonian,
    Velocity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ClosedOrbit,
    DomainExit,
    StagnationApproach,
    WallAttachment,
    /// The arclength budget ran out first.
    LengthLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    pub step: f64,
    /// Arclength budget; capped at `MAX_STEPS` steps.
    pub max_len: f64,
    /// `|X|` beyond which the trace stops; `None` means `10/κ`.
    pub x_cut: Option<f64>,
    pub field: Field,
    /// Integrate against the field.
    pub reverse: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: DEFAULT_STEP,
            max_len: DEFAULT_STEP * MAX_STEPS as f64,
            x_cut: None,
            field: Field::Hamiltonian,
            reverse: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Streamline {
    pub points: Vec<(f64, f64)>,
    pub psi_level: f64,
    pub termination: Termination,
    /// Largest `|Ψ − psi_level|` over the points.
    pub max_drift: f64,
}

fn field_at(w: &WaveField, field: Field, x: f64, y: f64) -> (f64, f64) {
    let layer = w.layer_at(x, y);
    match field {
        Field::Hamiltonian => {
            let (px, py) = w.stream_gradient_branch(x, y, layer);
            (py, -px)
        }
        Field::Velocity => w.velocity_branch(x, y, layer),
    }
}

fn psi_at(w: &WaveField, x: f64, y: f64) -> f64 {
    w.stream_branch(x, y, w.layer_at(x, y))
}

fn seg_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ((a.0 + t * dx - p.0).powi(2) + (a.1 + t * dy - p.1).powi(2)).sqrt()
}

pub fn trace_streamline(w: &WaveField, seed: (f64, f64), opts: &TraceOptions) -> Result<Streamline> {
    if !(0.0..=1.0).contains(&seed.1) || !seed.0.is_finite() {
        return Err(Error::Domain {
            what: "seed Y",
            value: seed.1,
            allowed: "[0, 1]",
        });
    }
    if !(opts.step > 0.0 && opts.max_len > 0.0) {
        return Err(Error::Domain {
            what: "step",
            value: opts.step,
            allowed: "step > 0 and max_len > 0",
        });
    }
    let dir = if opts.reverse { -1.0 } else { 1.0 };
    let unit = |x: f64, y: f64| -> Option<(f64, f64)> {
        let (a, b) = field_at(w, opts.field, x, y);
        let s = a.hypot(b);
        (s >= SPEED_FLOOR).then(|| (dir * a / s, dir * b / s))
    };
    if unit(seed.0, seed.1).is_none() {
        let (a, b) = field_at(w, opts.field, seed.0, seed.1);
        return Err(Error::Domain {
            what: "seed speed",
            value: a.hypot(b),
            allowed: ">= 1e-8",
        });
    }
    let x_cut = opts.x_cut.unwrap_or(10.0 * w.length_scale());
    let h = opts.step;
    let psi_level = psi_at(w, seed.0, seed.1);
    let n_steps = ((opts.max_len / h).ceil() as usize).min(MAX_STEPS);
    let mut points = vec![seed];
    let mut max_drift = 0.0f64;
    let mut far = false;
    let mut p = seed;
    let mut termination = Termination::LengthLimit;
    for _ in 0..n_steps {
        let Some(k1) = unit(p.0, p.1) else {
            termination = Termination::StagnationApproach;
            break;
        };
        let stage = |k: (f64, f64), c: f64| unit(p.0 + c * h * k.0, p.1 + c * h * k.1);
        let Some(k2) = stage(k1, 0.5) else {
            termination = Termination::StagnationApproach;
            break;
        };
        let Some(k3) = stage(k2, 0.5) else {
            termination = Termination::StagnationApproach;
            break;
        };
        let Some(k4) = stage(k3, 1.0) else {
            termination = Termination::StagnationApproach;
            break;
        };
        let next = (
            p.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            p.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        );
        if next.1 < 0.0 || next.1 > 1.0 {
            let wall = if next.1 < 0.0 { 0.0 } else { 1.0 };
            let t = (wall - p.1) / (next.1 - p.1);
            points.push((p.0 + t * (next.0 - p.0), wall));
            termination = Termination::WallAttachment;
            break;
        }
        if far && seg_dist(seed, p, next) <= 0.5 * h {
            points.push(next);
            termination = Termination::ClosedOrbit;
            break;
        }
        max_drift = max_drift.max((psi_at(w, next.0, next.1) - psi_level).abs());
        points.push(next);
        p = next;
        if p.0.abs() > x_cut {
            termination = Termination::DomainExit;
            break;
        }
        if !far && (p.0 - seed.0).hypot(p.1 - seed.1) > 4.0 * h {
            far = true;
        }
    }
    Ok(Streamline {
        points,
        psi_level,
        termination,
        max_drift,
    })
}

/// Traces independent seeds in parallel; output order follows `seeds`.
pub fn trace_many(w: &WaveField, seeds: &[(f64, f64)], opts: &TraceOptions) -> Vec<Result<Streamline>> {
    seeds.par_iter().map(|&s| trace_streamline(w, s, opts)).collect()
}

/// Samples along the attached streamline.
pub const ATTACHED_SAMPLES: usize = 2001;

/// The streamline joining the two wall stagnation points of the bounded
/// case, in the original frame.
///
/// In the normalized frame `ω₁ = −h`, and completing the square gives, in
/// the upper layer, `Ψ = c²/(2h) − (h/2)(Y − Y*(X))²`. The level
/// `Ψ = Ψ(X*, 1)` is therefore the critical layer itself, a ridge on which
/// `∇Ψ` vanishes identically, so it cannot be integrated; it is assembled
/// from critical-layer roots instead, with the endpoints `(±X*, 1)`.
pub fn attached_streamline(w: &WaveField) -> Result<Streamline> {
    let frame = Frame::new(w)?;
    let n = &frame.normal;
    if !n.params().is_bounded_case() {
        return Err(Error::NotApplicable("attached streamline needs omega0 = 1 - h"));
    }
    let x_star = find_x_star(n)?;
    let level = n.stream_branch(x_star, 1.0, Layer::Upper);
    let m = ATTACHED_SAMPLES - 1;
    let mut pts = Vec::with_capacity(ATTACHED_SAMPLES);
    pts.push((-x_star, 1.0));
    for i in 1..m {
        let x = x_star * ((2 * i) as f64 / m as f64 - 1.0);
        let y = critical_layer(n, x).ok_or(Error::Bracket("critical layer lost inside (-X*, X*)"))?;
        pts.push((x, y));
    }
    pts.push((x_star, 1.0));
    let max_drift = pts
        .iter()
        .map(|&(x, y)| (n.stream_branch(x, y, Layer::Upper) - level).abs())
        .fold(0.0, f64::max);
    Ok(Streamline {
        points: pts.into_iter().map(|p| frame.to_original(p)).collect(),
        psi_level: frame.psi_to_original(level),
        termination: Termination::WallAttachment,
        max_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Params;
    use crate::wave::build_wave;

    fn wave(h: f64, w0: f64, eps: f64) -> WaveField {
        build_wave(&Params::new(h, w0, eps).unwrap()).unwrap()
    }

    #[test]
    fn interface_is_a_streamline() {
        let w = wave(0.5, 0.25, 1e-3);
        let s = trace_streamline(&w, (-20.0, w.interface(-20.0)), &TraceOptions::default()).unwrap();
        assert_eq!(s.termination, Termination::DomainExit);
        let worst = s
            .points
            .iter()
            .map(|&(x, y)| (y - w.interface(x)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn wall_seed_runs_along_wall() {
        let w = wave(0.5, 0.25, 1e-3);
        let opts = TraceOptions {
            field: Field::Velocity,
            max_len: 5.0,
            ..TraceOptions::default()
        };
        let s = trace_streamline(&w, (0.0, 0.0), &opts).unwrap();
        assert!(s.points.iter().all(|p| p.1 == 0.0));
        assert!(s.points.last().unwrap().0 > 4.9);
    }

    #[test]
    fn zero_speed_seed_rejected() {
        let w = wave(0.5, 0.25, 0.0);
        let y = 0.5 + 0.25 / 0.75;
        assert!(trace_streamline(&w, (0.0, y), &TraceOptions::default()).is_err());
    }

    #[test]
    fn attached_endpoints_reach_wall_stagnation_points() {
        let w = wave(0.75, 0.25, 1e-3);
        let x_star = find_x_star(&w).unwrap();
        let s = attached_streamline(&w).unwrap();
        assert!(s.max_drift < 1e-12);
        assert_eq!(s.termination, Termination::WallAttachment);
        let (start, end) = (s.points[0], *s.points.last().unwrap());
        assert!(
            (end.0 - x_star).abs() < 1e-4 && end.1 == 1.0,
            "{end:?} vs {x_star}"
        );
        assert!(
            (start.0 + x_star).abs() < 1e-4 && start.1 == 1.0,
            "{start:?} vs {x_star}"
        );
    }
}
