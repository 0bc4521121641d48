//! Critical layer `Ū = 0`, the interior stagnation point and, in the bounded
//! case, the wall stagnation points at `±X*`.

use serde::{Deserialize, Serialize};

use super::Frame;
use crate::error::{Error, Result};
use crate::params::Layer;
use crate::wave::WaveField;

/// Bisection tolerance in `Y` and `X`.
pub const ROOT_TOL: f64 = 1e-12;
/// `X*` is searched for in `(0, X_CUT/κ]`.
pub const X_CUT: f64 = 10.0;
const X_SCAN: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointNature {
    Centre,
    Saddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StagnationPoint {
    pub x: f64,
    pub y: f64,
    pub nature: PointNature,
    pub layer: Layer,
}

/// Samples of `Y*(X)`; `None` where `Ū(X, ·)` has no zero in the layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalCurve {
    pub points: Vec<(f64, Option<f64>)>,
    pub bounded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCount {
    pub interior_clusters: usize,
    pub wall_clusters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagnationReport {
    pub interior: StagnationPoint,
    /// `−V_X(ω₁+V_X)` in the normalized frame from the flat-coordinate
    /// velocity; positive for a centre. This decides `interior.nature`.
    pub determinant: f64,
    /// The same determinant from `V̄`. Near the top wall `V̄` carries the
    /// residual `η̄η̄′`, which flips its sign in the bounded case.
    pub determinant_bar: f64,
    /// `V̄_X` at the point by centred differences and in closed form.
    pub v_x_fd: f64,
    pub v_x_exact: f64,
    pub x_star: Option<f64>,
    pub boundary_saddles: Option<[(f64, f64); 2]>,
    pub critical_layer: CriticalCurve,
    pub reflected: bool,
    pub sweep: SweepCount,
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Zero of `Ū(X, ·)` in the upper layer of a normalized wave (`ω₀ ≤ 1−h`),
/// where `Ū` decreases in `Y`.
pub fn critical_layer(w: &WaveField, x: f64) -> Option<f64> {
    let s = w.interface(x);
    let u = |y: f64| w.velocity_branch(x, y, Layer::Upper).0;
    let (top, bottom) = (u(1.0), u(s));
    if top > 0.0 || bottom < 0.0 {
        return None;
    }
    Some(bisect(u, s, 1.0))
}

/// `Y*(X)` sampled at `n` points over `[−X_CUT/κ, X_CUT/κ]`, in the
/// original frame.
pub fn critical_curve(frame: &Frame, n: usize) -> CriticalCurve {
    let w = &frame.normal;
    let half = X_CUT * w.length_scale();
    let points = crate::diagnostics::symmetric_samples(half, n)
        .into_iter()
        .map(|x| (x, critical_layer(w, x).map(|y| frame.to_original((x, y)).1)))
        .collect();
    CriticalCurve {
        points,
        bounded: w.params().is_bounded_case(),
    }
}

/// `X* > 0` with `Ū(X*, 1) = 0` in a normalized bounded wave.
pub fn find_x_star(w: &WaveField) -> Result<f64> {
    let u = |x: f64| w.velocity_branch(x, 1.0, Layer::Upper).0;
    if !(u(0.0) < 0.0) {
        return Err(Error::Bracket("U(0, wall) is not negative"));
    }
    let x_cut = X_CUT * w.length_scale();
    let mut prev = 0.0;
    for i in 1..=X_SCAN {
        let x = x_cut * i as f64 / X_SCAN as f64;
        if u(x) > 0.0 {
            return Ok(bisect(u, prev, x));
        }
        prev = x;
    }
    Err(Error::Bracket("no sign change of U(X, wall) within the cut-off"))
}

/// Connected clusters of grid cells on which both velocity components change
/// sign, and wall intervals on which `U` changes sign.
///
/// The velocity is the flat-coordinate one: `V̄` has spurious zeros in the
/// band below the top wall where `η̄η̄′` dominates. In the bounded case the
/// critical layer is a ridge of `Ψ`, both components are tiny along all of
/// it, and the interior count is not meaningful.
pub fn stagnation_sweep(w: &WaveField, nx: usize, ny: usize, x_window: f64) -> SweepCount {
    // An odd number of cells keeps X = 0 at a cell centre, away from the
    // exact zeros of V̄ on the axis.
    let nx = nx | 1;
    let half = x_window * w.length_scale();
    let xs: Vec<f64> = (0..=nx)
        .map(|i| -half + 2.0 * half * i as f64 / nx as f64)
        .collect();
    let ys: Vec<f64> = (0..=ny).map(|j| j as f64 / ny as f64).collect();
    let mut uv = vec![(0.0, 0.0); (nx + 1) * (ny + 1)];
    for (j, &y) in ys.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            uv[j * (nx + 1) + i] = w
                .velocity_via_flat(x, y)
                .unwrap_or_else(|_| w.velocity_branch(x, y, w.layer_at(x, y)));
        }
    }
    let at = |i: usize, j: usize| uv[j * (nx + 1) + i];
    let straddles = |vals: [f64; 4]| {
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        lo < 0.0 && hi > 0.0
    };
    let mut hit = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let c = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            hit[j * nx + i] = straddles(c.map(|p| p.0)) && straddles(c.map(|p| p.1));
        }
    }
    let mut seen = vec![false; nx * ny];
    let mut interior = 0;
    for start in 0..nx * ny {
        if !hit[start] || seen[start] {
            continue;
        }
        interior += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(k) = stack.pop() {
            let (i, j) = ((k % nx) as i64, (k / nx) as i64);
            for dj in -1..=1 {
                for di in -1..=1 {
                    let (a, b) = (i + di, j + dj);
                    if a < 0 || b < 0 || a >= nx as i64 || b >= ny as i64 {
                        continue;
                    }
                    let q = b as usize * nx + a as usize;
                    if hit[q] && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
    }
    let mut wall = 0;
    for j in [0, ny] {
        for i in 0..nx {
            let (a, b) = (at(i, j).0, at(i + 1, j).0);
            if (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0) {
                wall += 1;
            }
        }
    }
    SweepCount {
        interior_clusters: interior,
        wall_clusters: wall,
    }
}

/// Grid used by [`find_stagnation`] for its uniqueness sweep.
pub const SWEEP_GRID: (usize, usize) = (400, 400);

/// Interior stagnation point on the symmetry axis, its type, and (bounded
/// case) the two wall stagnation points.
pub fn find_stagnation(w: &WaveField) -> Result<StagnationReport> {
    if w.params().theta_is_zero() {
        return Err(Error::ThetaZero(w.params().theta()));
    }
    if w.is_shear() {
        return Err(Error::NotApplicable(
            "the shear flow has a stagnation line, not a point",
        ));
    }
    let frame = Frame::new(w)?;
    let n = &frame.normal;
    let y0 = critical_layer(n, 0.0).ok_or(Error::Bracket("no zero of U on the symmetry axis"))?;
    let d = 1e-6;
    let w1 = n.params().omega1();
    let v = |x: f64| n.velocity_branch(x, y0, Layer::Upper).1;
    let v_x_fd = (v(d) - v(-d)) / (2.0 * d);
    let v_x_exact = n.velocity_gradient_branch(0.0, y0, Layer::Upper).v_x;
    let determinant_bar = -v_x_fd * (w1 + v_x_fd);
    // The flat-coordinate velocity vanishes on both walls, like the true
    // solution, so it stays sign-correct where the critical layer hugs the wall.
    let vf = |x: f64| n.velocity_via_flat(x, y0).map(|v| v.1);
    let vf_x = (vf(d)? - vf(-d)?) / (2.0 * d);
    let determinant = -vf_x * (w1 + vf_x);
    let nature = if determinant > 0.0 {
        PointNature::Centre
    } else {
        PointNature::Saddle
    };
    let (x, y) = frame.to_original((0.0, y0));
    let bounded = n.params().is_bounded_case();
    let x_star = if bounded { Some(find_x_star(n)?) } else { None };
    let boundary_saddles = x_star.map(|xs| [frame.to_original((-xs, 1.0)), frame.to_original((xs, 1.0))]);
    Ok(StagnationReport {
        interior: StagnationPoint {
            x,
            y,
            nature,
            layer: frame.layer_to_original(Layer::Upper),
        },
        determinant,
        determinant_bar,
        v_x_fd,
        v_x_exact,
        x_star,
        boundary_saddles,
        critical_layer: critical_curve(&frame, 401),
        reflected: frame.reflected,
        sweep: stagnation_sweep(w, SWEEP_GRID.0, SWEEP_GRID.1, X_CUT),
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
    fn critical_level_hand_value() {
        let w = wave(0.5, 0.25, 1e-3);
        let y = critical_layer(&w, 0.0).unwrap();
        assert!((y - (0.5 + 0.25 / 0.75)).abs() < 0.02);
        let shear = wave(0.5, 0.25, 0.0);
        let y = critical_layer(&shear, 0.0).unwrap();
        assert!((y - (0.5 + 0.25 / 0.75)).abs() < 1e-11);
    }

    #[test]
    fn bounded_wall_velocity_is_negative_on_axis() {
        let w = wave(0.75, 0.25, 1e-3);
        let u = w.velocity(0.0, 1.0).unwrap().0;
        assert!((u - (-3.5e-3)).abs() < 1e-4, "{u}");
        let xs = find_x_star(&w).unwrap();
        assert!(w.velocity(xs, 1.0).unwrap().0.abs() < 1e-12);
        assert!(critical_layer(&w, 1.01 * xs).is_none());
    }

    #[test]
    fn stagnation_rejects_degenerate_input() {
        assert!(find_stagnation(&wave(0.5, 0.25, 0.0)).is_err());
    }

    #[test]
    fn region_one_saddle_upper() {
        let r = find_stagnation(&wave(0.5, 0.25, 1e-3)).unwrap();
        assert_eq!(r.interior.nature, PointNature::Saddle);
        assert_eq!(r.interior.layer, Layer::Upper);
        assert_eq!(r.interior.x, 0.0);
        assert!((r.v_x_fd - r.v_x_exact).abs() < 1e-8);
        assert_eq!(
            r.sweep,
            SweepCount {
                interior_clusters: 1,
                wall_clusters: 0
            }
        );
    }
}
