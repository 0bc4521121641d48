//! The reduced planar dynamics `ã′ = b̃`, `b̃′ = ã + ã²` (the ε = 0
//! truncation of the centre-manifold equation), its explicit homoclinic
//! orbit, and the rescaling back to physical amplitudes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Params;

/// `|ã|` beyond which a trajectory is declared divergent.
pub const DIVERGENCE_BOUND: f64 = 1e3;
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedSample {
    pub x_tilde: f64,
    pub a_tilde: f64,
    pub b_tilde: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedTrajectory {
    /// Ordered by increasing `x̃`.
    pub samples: Vec<ReducedSample>,
    pub step: f64,
    /// The truncated system carries no ε dependence; kept for provenance.
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSample {
    pub x: f64,
    pub a: f64,
    pub b: f64,
}

fn sech2(z: f64) -> f64 {
    let c = z.cosh();
    1.0 / (c * c)
}

/// `(−(3/2)sech²(x̃/2), (3/2)tanh(x̃/2)sech²(x̃/2))`.
pub fn kdv_homoclinic_exact(x_tilde: f64) -> (f64, f64) {
    let z = 0.5 * x_tilde;
    let s2 = sech2(z);
    (-1.5 * s2, 1.5 * z.tanh() * s2)
}

/// First integral of the truncated system; zero on the homoclinic orbit.
pub fn energy(a: f64, b: f64) -> f64 {
    0.5 * b * b - 0.5 * a * a - a * a * a / 3.0
}

fn rhs(a: f64, b: f64) -> (f64, f64) {
    (b, a + a * a)
}

fn rk4_step(a: f64, b: f64, dx: f64) -> (f64, f64) {
    let (k1a, k1b) = rhs(a, b);
    let (k2a, k2b) = rhs(a + 0.5 * dx * k1a, b + 0.5 * dx * k1b);
    let (k3a, k3b) = rhs(a + 0.5 * dx * k2a, b + 0.5 * dx * k2b);
    let (k4a, k4b) = rhs(a + dx * k3a, b + dx * k3b);
    (
        a + dx / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
        b + dx / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b),
    )
}

/// Classical RK4 on `[−x_max, x_max]`, marching outward from `x̃ = 0` in both
/// directions so the sample grid is symmetric.
pub fn integrate_reduced(a0: f64, b0: f64, x_max: f64, step: f64) -> Result<ReducedTrajectory> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain {
            what: "step",
            value: step,
            allowed: "(0, inf)",
        });
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::Domain {
            what: "x_max",
            value: x_max,
            allowed: "(0, inf)",
        });
    }
    let n = (x_max / step).round().max(1.0) as usize;
    let dx = x_max / n as f64;
    let march = |sign: f64| -> Result<Vec<ReducedSample>> {
        let (mut a, mut b) = (a0, b0);
        let mut out = Vec::with_capacity(n);
        for i in 1..=n {
            (a, b) = rk4_step(a, b, sign * dx);
            let x = sign * dx * i as f64;
            if !(a.abs() <= DIVERGENCE_BOUND) {
                return Err(Error::Divergence(x));
            }
            out.push(ReducedSample {
                x_tilde: x,
                a_tilde: a,
                b_tilde: b,
            });
        }
        Ok(out)
    };
    let mut samples = march(-1.0)?;
    samples.reverse();
    samples.push(ReducedSample {
        x_tilde: 0.0,
        a_tilde: a0,
        b_tilde: b0,
    });
    samples.extend(march(1.0)?);
    Ok(ReducedTrajectory {
        samples,
        step: dx,
        eps: 0.0,
    })
}

fn require_eps(p: &Params) -> Result<()> {
    if p.eps() > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "eps",
            value: p.eps(),
            allowed: "(0, eps_max) for the rescaling",
        })
    }
}

/// Maps one rescaled sample to `(x, a, b)`.
pub fn unscale_point(s: &ReducedSample, p: &Params) -> Result<PhysicalSample> {
    require_eps(p)?;
    let (hh, eps, th) = (p.c_star(), p.eps(), p.theta());
    Ok(PhysicalSample {
        x: hh * s.x_tilde / (3.0 * eps).sqrt(),
        a: 2.0 * eps / th * s.a_tilde,
        b: 2.0 * 3f64.sqrt() * eps.powf(1.5) / (hh * th) * s.b_tilde,
    })
}

pub fn unscale(traj: &ReducedTrajectory, p: &Params) -> Result<Vec<PhysicalSample>> {
    traj.samples.iter().map(|s| unscale_point(s, p)).collect()
}

/// The leading-order amplitudes `(aᵉ(x), bᵉ(x))`: the exact homoclinic mapped
/// through the rescaling.
pub fn leading_amplitudes(p: &Params, x: f64) -> (f64, f64) {
    if p.eps() == 0.0 {
        return (0.0, 0.0);
    }
    let (hh, eps, th) = (p.c_star(), p.eps(), p.theta());
    let xt = (3.0 * eps).sqrt() * x / hh;
    let (at, bt) = kdv_homoclinic_exact(xt);
    (
        2.0 * eps / th * at,
        2.0 * 3f64.sqrt() * eps.powf(1.5) / (hh * th) * bt,
    )
}
