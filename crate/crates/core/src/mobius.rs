//! Möbius flattening of the strip: the fractional-linear change of vertical
//! coordinate sending `{0, h+η, 1}` to `{0, h, 1}`, its inverse and metric
//! derivatives, and the velocity change of variables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Layer, Params};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatPoint {
    pub x: f64,
    pub y: f64,
}

/// Partial derivatives of `y(X, Y)` with respect to the physical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricDerivatives {
    pub y_x: f64,
    pub y_y: f64,
    pub y_xy: f64,
    pub y_yy: f64,
}

fn interface_height(eta: f64, h: f64) -> Result<f64> {
    let s = h + eta;
    if s > 0.0 && s < 1.0 {
        Ok(s)
    } else {
        Err(Error::DegenerateInterface(s))
    }
}

pub fn flatten(
    x_phys: f64,
    y_phys: f64,
    eta: f64,
    eta_x: f64,
    h: f64,
) -> Result<(FlatPoint, MetricDerivatives)> {
    let s = interface_height(eta, h)?;
    let y = h * (1.0 - s) * y_phys / ((1.0 - h) * s - eta * y_phys);
    // K = h(1−s) + ηy; every derivative is a power of K over powers of s(1−s).
    let k = eta * y - eta * h + h * (1.0 - h);
    let hh = h * (1.0 - h);
    let ss = s * (1.0 - s);
    let m = MetricDerivatives {
        y_x: -eta_x * y * (1.0 - y) / ss,
        y_y: k * k / (hh * ss),
        y_xy: eta_x * k * k * (2.0 * y - 1.0) / (hh * ss * ss),
        y_yy: 2.0 * eta * k * k * k / (hh * hh * ss * ss),
    };
    Ok((FlatPoint { x: x_phys, y }, m))
}

/// Exact inverse of [`flatten`]; returns the physical `(X, Y)`.
pub fn unflatten(x: f64, y: f64, eta: f64, h: f64) -> Result<(f64, f64)> {
    let s = interface_height(eta, h)?;
    let y_phys = (1.0 - h) * s * y / (h * (1.0 - s) + eta * y);
    Ok((x, y_phys))
}

/// `U = y_Y (u + ω(y−h) + c)` with `c = h(1−h) + ε` and the vorticity of the
/// layer containing `y` (the lower one at `y = h`).
pub fn velocity_flat_to_phys(u: f64, y: f64, metric: &MetricDerivatives, p: &Params) -> Result<f64> {
    if !(metric.y_y > 0.0) {
        return Err(Error::DegenerateMap(metric.y_y));
    }
    let layer = if y <= p.h() { Layer::Lower } else { Layer::Upper };
    Ok(metric.y_y * (u + p.omega(layer) * (y - p.h()) + p.speed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_at_zero_perturbation() {
        for &yy in &[0.0, 0.1, 0.5, 0.93, 1.0] {
            let (fp, m) = flatten(2.0, yy, 0.0, 0.0, 0.4).unwrap();
            assert_abs_diff_eq!(fp.y, yy, epsilon = 1e-15);
            assert_abs_diff_eq!(m.y_y, 1.0, epsilon = 1e-15);
            assert_eq!((m.y_x, m.y_xy, m.y_yy), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn pins_interface_and_walls() {
        let (h, eta) = (0.5, 0.1);
        assert_abs_diff_eq!(
            flatten(0.0, h + eta, eta, 0.0, h).unwrap().0.y,
            h,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(flatten(0.0, 1.0, eta, 0.0, h).unwrap().0.y, 1.0, epsilon = 1e-15);
        assert_eq!(flatten(0.0, 0.0, eta, 0.0, h).unwrap().0.y, 0.0);
    }

    #[test]
    fn y_y_at_top_matches_finite_difference() {
        let (h, eta, d) = (0.5, 0.1, 1e-6);
        let (_, m) = flatten(0.0, 1.0, eta, 0.0, h).unwrap();
        let f = |yy: f64| flatten(0.0, yy, eta, 0.0, h).unwrap().0.y;
        let fd = (f(1.0 + d) - f(1.0 - d)) / (2.0 * d);
        assert!((m.y_y - fd).abs() < 1e-8);
    }

    #[test]
    fn inverse_hand_value() {
        let (_, yy) = unflatten(0.0, 0.25, 0.1, 0.5).unwrap();
        assert_abs_diff_eq!(yy, 1.0 / 3.0, epsilon = 1e-15);
        let (_, yy) = unflatten(0.0, 0.5, 0.1, 0.5).unwrap();
        assert_abs_diff_eq!(yy, 0.6, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_interface_rejected() {
        assert!(flatten(0.0, 0.5, 0.6, 0.0, 0.5).is_err());
        assert!(unflatten(0.0, 0.5, -0.5, 0.5).is_err());
    }

    #[test]
    fn velocity_reduces_to_shear() {
        let p = Params::new(0.5, 1.0, 0.0).unwrap();
        let (_, m) = flatten(0.0, 0.0, 0.0, 0.0, 0.5).unwrap();
        assert_abs_diff_eq!(
            velocity_flat_to_phys(0.0, 0.0, &m, &p).unwrap(),
            -0.25,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            velocity_flat_to_phys(0.0, 0.5, &m, &p).unwrap(),
            0.25,
            epsilon = 1e-15
        );
        let bad = MetricDerivatives { y_y: 0.0, ..m };
        assert!(velocity_flat_to_phys(0.0, 0.5, &bad, &p).is_err());
    }
}
