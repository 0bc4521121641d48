//! Quantitative checks of a constructed wave: conserved quantities, PDE
//! residuals, their ε-scaling, and the vorticity-function probe.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Layer, Params, BOUNDED_TOL};
use crate::spectral::{layer_integrals, quadrature};
use crate::wave::{build_wave, WaveField};

/// Residual grids skip points this close to the interface.
pub const INTERFACE_GUARD: f64 = 1e-6;
/// Residuals below this are reported as numerically zero.
pub const RESIDUAL_FLOOR: f64 = 1e-12;
/// Agreement required of the two Ψ values in a non-existence witness.
pub const WITNESS_TOL: f64 = 1e-6;
/// Default proximity ceiling for the vorticity-function probe.
pub const DEFAULT_PROXIMITY: f64 = 0.05;

/// Sampling of `[−W/κ, W/κ] × [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    /// Half-width in units of `1/κ`.
    pub x_window: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            nx: 401,
            ny: 201,
            x_window: 10.0,
        }
    }
}

impl Grid {
    fn xs(&self, w: &WaveField) -> Vec<f64> {
        symmetric_samples(self.x_window * w.length_scale(), self.nx)
    }

    fn ys(&self) -> Vec<f64> {
        (0..self.ny)
            .map(|j| j as f64 / (self.ny - 1).max(1) as f64)
            .collect()
    }
}

/// `n` points evenly spread over `[−half, half]`, exactly symmetric.
pub fn symmetric_samples(half: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0];
    }
    (0..n)
        .map(|i| {
            let t = (2 * i) as f64 / (n - 1) as f64 - 1.0;
            let j = n - 1 - i;
            let t_mirror = (2 * j) as f64 / (n - 1) as f64 - 1.0;
            // Average with the mirrored node so that x(i) = −x(n−1−i) bit for bit.
            half * 0.5 * (t - t_mirror)
        })
        .collect()
}

/// `(Q₀, Q₁)`: the fluxes below and above the interface, exact for the
/// piecewise-linear `Ū`.
pub fn mass_fluxes(w: &WaveField, x: f64) -> (f64, f64) {
    let p = w.params();
    let h = p.h();
    let eta = w.eta(x);
    let s = h + eta;
    // ∫ ω(Y−h) + k dY between a and b.
    let flux = |layer: Layer, a: f64, b: f64| {
        let k = w.velocity_branch(x, h, layer).0;
        0.5 * p.omega(layer) * ((b - h).powi(2) - (a - h).powi(2)) + k * (b - a)
    };
    (flux(Layer::Lower, 0.0, s), flux(Layer::Upper, s, 1.0))
}

/// `S = ∫₀¹ ((V² − U²)/2 + ωYU) dY`, by Gauss–Legendre per layer (exact: the
/// integrand is quadratic in Y on each layer).
pub fn flow_force(w: &WaveField, x: f64) -> Result<f64> {
    let p = w.params();
    let s = w.interface(x);
    let part = |layer: Layer, a: f64, b: f64| {
        quadrature::composite(
            |y| {
                let (u, v) = w.velocity_branch(x, y, layer);
                0.5 * (v * v - u * u) + p.omega(layer) * y * u
            },
            a,
            b,
            1,
        )
    };
    let total = part(Layer::Lower, 0.0, s) + part(Layer::Upper, s, 1.0);
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::Quadrature {
            estimate: total,
            change: f64::NAN,
        })
    }
}

/// `(q₀, q₁) = (∫₀ʰ u dy, ∫ₕ¹ u dy)` of the flat leading-order field.
pub fn pseudofluxes(w: &WaveField, x: f64) -> Result<(f64, f64)> {
    layer_integrals(|y| w.flat_leading(x, y).0, w.params().h())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub divergence: f64,
    pub vorticity: f64,
    pub kinematic: f64,
    pub top_wall: f64,
    pub bottom_wall: f64,
}

/// Sup-norm residuals of the governing equations on a grid.
pub fn pde_residuals(w: &WaveField, grid: &Grid) -> Residuals {
    let p = w.params();
    let ys = grid.ys();
    let mut r = Residuals {
        divergence: 0.0,
        vorticity: 0.0,
        kinematic: 0.0,
        top_wall: 0.0,
        bottom_wall: 0.0,
    };
    for x in grid.xs(w) {
        let s = w.interface(x);
        for &y in &ys {
            if (y - s).abs() < INTERFACE_GUARD {
                continue;
            }
            let layer = w.layer_at(x, y);
            let g = w.velocity_gradient_branch(x, y, layer);
            r.divergence = r.divergence.max((g.u_x + g.v_y).abs());
            r.vorticity = r.vorticity.max((g.u_y - g.v_x - p.omega(layer)).abs());
        }
        let (u_s, v_s) = w.velocity_branch(x, s, Layer::Lower);
        r.kinematic = r.kinematic.max((w.eta_x(x) * u_s - v_s).abs());
        r.top_wall = r.top_wall.max(w.velocity_branch(x, 1.0, Layer::Upper).1.abs());
        r.bottom_wall = r.bottom_wall.max(w.velocity_branch(x, 0.0, Layer::Lower).1.abs());
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedDrift {
    #[serde(rename = "Q0_drift")]
    pub q0_drift: f64,
    #[serde(rename = "Q1_drift")]
    pub q1_drift: f64,
    #[serde(rename = "S_drift")]
    pub s_drift: f64,
}

fn relative(dev: f64, base: f64) -> f64 {
    if base == 0.0 {
        dev
    } else {
        dev / base.abs()
    }
}

/// Maximum relative deviation of `Q₀, Q₁, S` from their values at `X = 0`
/// over `[−W/κ, W/κ]`.
pub fn conserved_drift(w: &WaveField, x_window: f64, samples: usize) -> Result<ConservedDrift> {
    let (q0_ref, q1_ref) = mass_fluxes(w, 0.0);
    let s_ref = flow_force(w, 0.0)?;
    let (mut d0, mut d1, mut ds) = (0.0f64, 0.0f64, 0.0f64);
    for x in symmetric_samples(x_window * w.length_scale(), samples) {
        let (q0, q1) = mass_fluxes(w, x);
        d0 = d0.max((q0 - q0_ref).abs());
        d1 = d1.max((q1 - q1_ref).abs());
        ds = ds.max((flow_force(w, x)? - s_ref).abs());
    }
    Ok(ConservedDrift {
        q0_drift: relative(d0, q0_ref),
        q1_drift: relative(d1, q1_ref),
        s_drift: relative(ds, s_ref),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudofluxMax {
    pub q0_max: f64,
    pub q1_max: f64,
}

pub fn pseudoflux_max(w: &WaveField, x_window: f64, samples: usize) -> Result<PseudofluxMax> {
    let mut m = PseudofluxMax {
        q0_max: 0.0,
        q1_max: 0.0,
    };
    for x in symmetric_samples(x_window * w.length_scale(), samples) {
        let (q0, q1) = pseudofluxes(w, x)?;
        m.q0_max = m.q0_max.max(q0.abs());
        m.q1_max = m.q1_max.max(q1.abs());
    }
    Ok(m)
}

/// A fitted exponent, or a marker that the channel sits at the rounding floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Slope {
    Fitted(f64),
    BelowFloor(FloorMarker),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloorMarker {
    BelowFloor,
}

impl Slope {
    pub fn value(&self) -> Option<f64> {
        match self {
            Slope::Fitted(v) => Some(*v),
            Slope::BelowFloor(_) => None,
        }
    }
}

/// Least-squares slope of `ln v` against `ln ε`.
pub fn fit_slope(eps: &[f64], values: &[f64]) -> Slope {
    if values.iter().any(|&v| !(v >= RESIDUAL_FLOOR)) {
        return Slope::BelowFloor(FloorMarker::BelowFloor);
    }
    let n = eps.len() as f64;
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Slope::Fitted(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingOrders {
    pub divergence: Slope,
    pub vorticity: Slope,
    pub kinematic: Slope,
    pub top_wall: Slope,
    #[serde(rename = "Q0_drift")]
    pub q0_drift: Slope,
    #[serde(rename = "Q1_drift")]
    pub q1_drift: Slope,
    #[serde(rename = "S_drift")]
    pub s_drift: Slope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingStudy {
    pub eps: Vec<f64>,
    pub residuals: Vec<Residuals>,
    pub conserved: Vec<ConservedDrift>,
    pub slopes: ScalingOrders,
}

/// X half-width, in units of `1/κ`, of the conserved-quantity sweep.
pub const DRIFT_WINDOW: f64 = 20.0;
pub const DRIFT_SAMPLES: usize = 801;

/// Residuals and conserved-quantity drift at each ε, with fitted exponents.
/// The grid is measured in units of `1/κ(ε)` so every ε samples the same
/// points of the wave profile.
pub fn scaling_study(p: &Params, eps_list: &[f64], grid: &Grid) -> Result<ScalingStudy> {
    if eps_list.len() < 3 {
        return Err(Error::Domain {
            what: "eps_list length",
            value: eps_list.len() as f64,
            allowed: ">= 3",
        });
    }
    let ratio = eps_list[1] / eps_list[0];
    let geometric = eps_list.iter().all(|&e| e > 0.0)
        && eps_list
            .windows(2)
            .all(|w| ((w[1] / w[0]) / ratio - 1.0).abs() < 1e-9)
        && (ratio - 1.0).abs() > 1e-9;
    if !geometric {
        return Err(Error::Domain {
            what: "eps_list ratio",
            value: ratio,
            allowed: "a positive geometric progression",
        });
    }
    let mut residuals = Vec::with_capacity(eps_list.len());
    let mut conserved = Vec::with_capacity(eps_list.len());
    for &e in eps_list {
        let w = build_wave(&Params::with_ceiling(p.h(), p.omega0(), e, f64::INFINITY)?)?;
        residuals.push(pde_residuals(&w, grid));
        conserved.push(conserved_drift(&w, DRIFT_WINDOW, DRIFT_SAMPLES)?);
    }
    let fit = |f: &dyn Fn(usize) -> f64| {
        let v: Vec<f64> = (0..eps_list.len()).map(f).collect();
        fit_slope(eps_list, &v)
    };
    let slopes = ScalingOrders {
        divergence: fit(&|i| residuals[i].divergence),
        vorticity: fit(&|i| residuals[i].vorticity),
        kinematic: fit(&|i| residuals[i].kinematic),
        top_wall: fit(&|i| residuals[i].top_wall),
        q0_drift: fit(&|i| conserved[i].q0_drift),
        q1_drift: fit(&|i| conserved[i].q1_drift),
        s_drift: fit(&|i| conserved[i].s_drift),
    };
    Ok(ScalingStudy {
        eps: eps_list.to_vec(),
        residuals,
        conserved,
        slopes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoVorticityFunction,
    Exists,
    Indeterminate,
}

/// Two points in different layers on one streamline level: `Ψ` agrees but
/// the vorticity does not, so no single-valued `γ` with `ω = γ(Ψ)` exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub lower: (f64, f64),
    pub upper: (f64, f64),
    pub psi_lower: f64,
    pub psi_upper: f64,
    pub omega_lower: f64,
    pub omega_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VorticityFunctionRecord {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// `γ(t)` as `(value for t < 0, value for t > 0)`, i.e. `ω₀ − H(t)`.
    pub gamma: Option<(f64, f64)>,
    /// Measured distance of the wave from the shear flow.
    pub proximity: f64,
    pub note: Option<String>,
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Distance of the wave from its underlying shear: the larger of
/// `‖η̄‖(1 + ‖U*‖)` and `‖Ū − U*‖`, sampled on a grid.
pub fn proximity(w: &WaveField, samples: usize) -> f64 {
    let p = w.params();
    let u_star = |layer: Layer, y: f64| p.omega(layer) * (y - p.h()) + p.c_star();
    let ustar_sup = [0.0, p.h(), 1.0]
        .iter()
        .map(|&y| {
            let l = if y <= p.h() { Layer::Lower } else { Layer::Upper };
            u_star(l, y).abs()
        })
        .fold(0.0, f64::max);
    let n = samples.max(2);
    let mut du = 0.0f64;
    for x in symmetric_samples(10.0 * w.length_scale(), n) {
        for j in 0..n {
            let y = j as f64 / (n - 1) as f64;
            let l = if y <= p.h() { Layer::Lower } else { Layer::Upper };
            let u = w.velocity(x, y).map(|v| v.0).unwrap_or(f64::NAN);
            du = du.max((u - u_star(l, y)).abs());
        }
    }
    (w.amplitude().abs() * (1.0 + ustar_sup)).max(du)
}

/// Decides whether the vorticity is a function of the stream function.
pub fn vorticity_function_probe(w: &WaveField, samples: usize, delta: f64) -> VorticityFunctionRecord {
    let p = *w.params();
    let (h, w0) = (p.h(), p.omega0());
    let prox = proximity(w, samples.min(200));
    let indeterminate = |note: &str| VorticityFunctionRecord {
        verdict: Verdict::Indeterminate,
        witness: None,
        gamma: None,
        proximity: prox,
        note: Some(note.to_string()),
    };
    if prox > delta {
        return indeterminate("wave too far from the shear flow for the proximity argument");
    }
    let (b1, b2) = (1.0 - 2.0 * h, 2.0 - 2.0 * h);
    if (w0 - b1).abs() < BOUNDED_TOL || (w0 - b2).abs() < BOUNDED_TOL {
        return indeterminate("omega0 on a boundary case 1-2h or 2-2h");
    }
    let psi = |y: f64| w.stream(0.0, y).unwrap_or(f64::NAN);
    let s = w.interface(0.0);
    if w0 < b1 || w0 > b2 {
        let (p_bot, p_top) = (psi(0.0), psi(1.0));
        if p_bot.signum() != p_top.signum() || p_bot == 0.0 || p_top == 0.0 {
            return indeterminate("wall values of the stream function do not share a sign");
        }
        let target = 0.5
            * if p_bot > 0.0 {
                p_bot.min(p_top)
            } else {
                p_bot.max(p_top)
            };
        let y0 = bisect(|y| psi(y) - target, 0.0, s, 1e-14);
        let y1 = bisect(|y| w.stream_branch(0.0, y, Layer::Upper) - target, s, 1.0, 1e-14);
        return match (y0, y1) {
            (Some(y0), Some(y1)) => {
                let (a, b) = (psi(y0), w.stream_branch(0.0, y1, Layer::Upper));
                if (a - b).abs() < WITNESS_TOL {
                    VorticityFunctionRecord {
                        verdict: Verdict::NoVorticityFunction,
                        witness: Some(Witness {
                            lower: (0.0, y0),
                            upper: (0.0, y1),
                            psi_lower: a,
                            psi_upper: b,
                            omega_lower: p.omega0(),
                            omega_upper: p.omega1(),
                        }),
                        gamma: None,
                        proximity: prox,
                        note: None,
                    }
                } else {
                    indeterminate("witness values failed to match")
                }
            }
            _ => indeterminate("could not bracket a common stream-function level"),
        };
    }
    // 1−2h < ω₀ < 2−2h: Ψ must be negative below the interface and positive above.
    let n = samples.max(2);
    for x in symmetric_samples(10.0 * w.length_scale(), n) {
        let s = w.interface(x);
        for j in 0..n {
            let y = j as f64 / (n - 1) as f64;
            if y == s {
                continue;
            }
            let v = w.stream(x, y).unwrap_or(f64::NAN);
            let ok = if y < s { v < 0.0 } else { v > 0.0 };
            if !ok {
                return indeterminate("stream-function sign pattern violated");
            }
        }
    }
    VorticityFunctionRecord {
        verdict: Verdict::Exists,
        witness: None,
        gamma: Some((p.omega0(), p.omega1())),
        proximity: prox,
        note: None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsConfig {
    pub grid: Grid,
    pub drift_samples: usize,
    pub pseudoflux_samples: usize,
    pub probe_samples: usize,
    pub proximity: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            grid: Grid::default(),
            drift_samples: DRIFT_SAMPLES,
            pseudoflux_samples: 201,
            probe_samples: 200,
            proximity: DEFAULT_PROXIMITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub params: Params,
    /// True when ε = 0 and the report describes the exact shear flow.
    pub exact_shear: bool,
    pub residuals: Residuals,
    pub conserved: ConservedDrift,
    pub pseudoflux: PseudofluxMax,
    pub scaling: Option<ScalingOrders>,
    pub vorticity_function: VorticityFunctionRecord,
    pub errors: Vec<String>,
}

/// Full pipeline: residuals, drift, pseudofluxes, scaling over `ε, ε/2, ε/4`
/// and the vorticity-function probe. Stage failures are collected in
/// `errors` rather than aborting the report.
pub fn diagnose(p: &Params, cfg: &DiagnosticsConfig) -> Result<DiagnosticsReport> {
    let w = build_wave(p)?;
    let mut errors = Vec::new();
    let residuals = pde_residuals(&w, &cfg.grid);
    let conserved = conserved_drift(&w, DRIFT_WINDOW, cfg.drift_samples).unwrap_or_else(|e| {
        errors.push(format!("conserved: {e}"));
        ConservedDrift {
            q0_drift: f64::NAN,
            q1_drift: f64::NAN,
            s_drift: f64::NAN,
        }
    });
    let pseudoflux = pseudoflux_max(&w, cfg.grid.x_window, cfg.pseudoflux_samples).unwrap_or_else(|e| {
        errors.push(format!("pseudoflux: {e}"));
        PseudofluxMax {
            q0_max: f64::NAN,
            q1_max: f64::NAN,
        }
    });
    let scaling = if w.is_shear() {
        None
    } else {
        let eps = [p.eps(), p.eps() / 2.0, p.eps() / 4.0];
        match scaling_study(p, &eps, &cfg.grid) {
            Ok(s) => Some(s.slopes),
            Err(e) => {
                errors.push(format!("scaling: {e}"));
                None
            }
        }
    };
    Ok(DiagnosticsReport {
        params: *p,
        exact_shear: w.is_shear(),
        residuals,
        conserved,
        pseudoflux,
        scaling,
        vorticity_function: vorticity_function_probe(&w, cfg.probe_samples, cfg.proximity),
        errors,
    })
}
