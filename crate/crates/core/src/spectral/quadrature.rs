//! Composite Gauss–Legendre quadrature with panel doubling.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

const ORDER: usize = 12;
const MAX_PANELS: usize = 1 << 12;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(ORDER).unwrap()))
}

/// Fixed composite rule on `[a, b]` with `panels` equal panels.
pub fn composite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let gl = rule();
    let w = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + w * i as f64;
            gl.integrate(lo, lo + w, &f)
        })
        .sum()
}

/// Doubles the panel count until successive estimates agree to
/// `tol·(1 + |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut panels = 2;
    let mut prev = composite(&f, a, b, panels);
    loop {
        panels *= 2;
        let next = composite(&f, a, b, panels);
        let change = (next - prev).abs();
        if !next.is_finite() || panels > MAX_PANELS {
            return Err(Error::Quadrature {
                estimate: next,
                change,
            });
        }
        if change <= tol * (1.0 + next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = composite(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1);
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn smooth_integrand_converges() {
        let v = integrate(|x: f64| x.exp() * x.sin(), 0.0, 3.0, 1e-14).unwrap();
        let exact = 0.5 * (3.0f64.exp() * (3.0f64.sin() - 3.0f64.cos()) + 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn non_finite_reports_failure() {
        assert!(integrate(|x: f64| 1.0 / x, 0.0, 1.0, 1e-12).is_err());
    }
}
