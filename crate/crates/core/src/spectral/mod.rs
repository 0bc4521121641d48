//! Linear theory at the bifurcation point `c = c*`: the dispersion function,
//! the coefficient `p(y)`, the linearised operator `L`, its generalised kernel
//! and the projection onto it.

pub mod discrete;
pub mod quadrature;

use crate::error::Result;
use crate::params::{Layer, Params};

pub use discrete::{centre_spectrum_check, SpectrumReport};

/// Below this `|k|` the dispersion function is evaluated by its Taylor series.
pub const SERIES_SWITCH: f64 = 1e-3;
/// Relative tolerance for the projection quadratures.
pub const QUAD_TOL: f64 = 1e-13;

/// `𝔡(k) = k(coth(kh) + coth((1−h)k))`, even and entire on the real line.
pub fn dispersion(k: f64, h: f64) -> f64 {
    if k.abs() < SERIES_SWITCH {
        dispersion_series(k, h)
    } else {
        dispersion_closed(k, h)
    }
}

pub fn dispersion_closed(k: f64, h: f64) -> f64 {
    k / (k * h).tanh() + k / (k * (1.0 - h)).tanh()
}

pub fn dispersion_series(k: f64, h: f64) -> f64 {
    let g = 1.0 - h;
    let k2 = k * k;
    1.0 / (h * g) + k2 / 3.0 - k2 * k2 * (h.powi(3) + g.powi(3)) / 45.0
}

/// `𝔡′(k)`; each layer contributes `(sinh(2hk) − 2hk) / (2 sinh²(hk))`.
pub fn dispersion_derivative(k: f64, h: f64) -> f64 {
    let g = 1.0 - h;
    if k.abs() < SERIES_SWITCH {
        return 2.0 * k / 3.0 - 4.0 * k.powi(3) * (h.powi(3) + g.powi(3)) / 45.0;
    }
    let term = |d: f64| {
        let z = d * k;
        let sh = z.sinh();
        ((2.0 * z).sinh() - 2.0 * z) / (2.0 * sh * sh)
    };
    term(h) + term(g)
}

/// `(k, 𝔡(k))` on `n` evenly spaced points of `[k_min, k_max]`.
pub fn dispersion_samples(h: f64, k_min: f64, k_max: f64, n: usize) -> Vec<(f64, f64)> {
    let step = if n > 1 {
        (k_max - k_min) / (n - 1) as f64
    } else {
        0.0
    };
    (0..n)
        .map(|i| {
            let k = k_min + step * i as f64;
            (k, dispersion(k, h))
        })
        .collect()
}

fn layer_of(y: f64, h: f64) -> Layer {
    if y < h {
        Layer::Lower
    } else {
        Layer::Upper
    }
}

/// `p(y)` evaluated with the vorticity of a given layer.
pub fn p_coeff_branch(y: f64, p: &Params, layer: Layer) -> f64 {
    let (h, cs, w) = (p.h(), p.c_star(), p.omega(layer));
    ((1.0 - 2.0 * y) * (w * (y - h) + cs) + y * (1.0 - y) * w) / (h * (1.0 - h) * cs)
}

/// `p(y)` with the layer chosen by `y` (upper branch at `y = h`).
pub fn p_coeff(y: f64, p: &Params) -> f64 {
    p_coeff_branch(y, p, layer_of(y, p.h()))
}

pub fn p_coeff_prime_branch(y: f64, p: &Params, layer: Layer) -> f64 {
    let (h, cs, w) = (p.h(), p.c_star(), p.omega(layer));
    (-2.0 * (w * (y - h) + cs) + 2.0 * (1.0 - 2.0 * y) * w) / (h * (1.0 - h) * cs)
}

pub fn p_coeff_prime(y: f64, p: &Params) -> f64 {
    p_coeff_prime_branch(y, p, layer_of(y, p.h()))
}

/// An element `(u, v, η)` of the phase space.
pub trait Triple {
    fn u(&self, y: f64) -> f64;
    fn v(&self, y: f64) -> f64;
    fn eta(&self) -> f64;
}

/// A triple whose profiles can be differentiated, so that `L` applies.
pub trait SmoothTriple: Triple {
    fn du(&self, y: f64) -> f64;
    fn dv(&self, y: f64) -> f64;
}

/// The generalised kernel of `L`: `Lξ₁ = ξ₀`, `Lξ₀ = 0`, with
/// `ξ₀ = (u*, 0, 1)` and `ξ₁ = (0, v*, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelBasis {
    pub params: Params,
}

pub fn kernel_basis(p: &Params) -> KernelBasis {
    KernelBasis { params: *p }
}

impl KernelBasis {
    pub fn u_star_branch(&self, y: f64, layer: Layer) -> f64 {
        let p = &self.params;
        let (h, cs) = (p.h(), p.c_star());
        let offset = match layer {
            Layer::Lower => -1.0 / h,
            Layer::Upper => 1.0 / (1.0 - h),
        };
        cs * (p_coeff_branch(y, p, layer) + offset)
    }

    pub fn u_star(&self, y: f64) -> f64 {
        self.u_star_branch(y, layer_of(y, self.params.h()))
    }

    pub fn du_star(&self, y: f64) -> f64 {
        self.params.c_star() * p_coeff_prime(y, &self.params)
    }

    pub fn v_star(&self, y: f64) -> f64 {
        let (h, cs) = (self.params.h(), self.params.c_star());
        if y <= h {
            cs * y / h
        } else {
            cs * (1.0 - y) / (1.0 - h)
        }
    }

    pub fn dv_star(&self, y: f64) -> f64 {
        let (h, cs) = (self.params.h(), self.params.c_star());
        if y < h {
            cs / h
        } else {
            -cs / (1.0 - h)
        }
    }

    pub fn xi0(&self) -> KernelVector<'_> {
        KernelVector {
            basis: self,
            which: 0,
        }
    }

    pub fn xi1(&self) -> KernelVector<'_> {
        KernelVector {
            basis: self,
            which: 1,
        }
    }
}

/// `ξ₀` or `ξ₁` as a [`SmoothTriple`].
#[derive(Debug, Clone, Copy)]
pub struct KernelVector<'a> {
    basis: &'a KernelBasis,
    which: u8,
}

impl Triple for KernelVector<'_> {
    fn u(&self, y: f64) -> f64 {
        if self.which == 0 {
            self.basis.u_star(y)
        } else {
            0.0
        }
    }
    fn v(&self, y: f64) -> f64 {
        if self.which == 1 {
            self.basis.v_star(y)
        } else {
            0.0
        }
    }
    fn eta(&self) -> f64 {
        if self.which == 0 {
            1.0
        } else {
            0.0
        }
    }
}

impl SmoothTriple for KernelVector<'_> {
    fn du(&self, y: f64) -> f64 {
        if self.which == 0 {
            self.basis.du_star(y)
        } else {
            0.0
        }
    }
    fn dv(&self, y: f64) -> f64 {
        if self.which == 1 {
            self.basis.dv_star(y)
        } else {
            0.0
        }
    }
}

/// `L(u, v, η) = (p v(h) − v_y, u_y − c* η p′, v(h)/c*)`.
pub struct LinearImage<'a, T: SmoothTriple> {
    params: Params,
    w: &'a T,
    v_at_h: f64,
}

pub fn apply_linear_operator<'a, T: SmoothTriple>(p: &Params, w: &'a T) -> LinearImage<'a, T> {
    LinearImage {
        params: *p,
        w,
        v_at_h: w.v(p.h()),
    }
}

impl<T: SmoothTriple> Triple for LinearImage<'_, T> {
    fn u(&self, y: f64) -> f64 {
        p_coeff(y, &self.params) * self.v_at_h - self.w.dv(y)
    }
    fn v(&self, y: f64) -> f64 {
        self.w.du(y) - self.params.c_star() * self.w.eta() * p_coeff_prime(y, &self.params)
    }
    fn eta(&self) -> f64 {
        self.v_at_h / self.params.c_star()
    }
}

/// The two layer integrals of `f`, split at `y = h`.
pub fn layer_integrals<F: Fn(f64) -> f64>(f: F, h: f64) -> Result<(f64, f64)> {
    Ok((
        quadrature::integrate(&f, 0.0, h, QUAD_TOL)?,
        quadrature::integrate(&f, h, 1.0, QUAD_TOL)?,
    ))
}

/// The coordinates `(A, B)` of the spectral projection onto `span{ξ₀, ξ₁}`.
pub fn project_p0<U, V>(u: U, v: V, eta: f64, p: &Params) -> Result<(f64, f64)>
where
    U: Fn(f64) -> f64,
    V: Fn(f64) -> f64,
{
    let h = p.h();
    let g = 1.0 - h;
    let (w0, w1) = (p.omega0(), p.omega1());
    let (ua, ub) = layer_integrals(
        |y| {
            if y < h {
                y * y * u(y)
            } else {
                (1.0 - y).powi(2) * u(y)
            }
        },
        h,
    )?;
    let (va, vb) = layer_integrals(|y| if y < h { y * v(y) } else { (1.0 - y) * v(y) }, h)?;
    // Equals 3/2 − (3c*/(2h²(1−h)))∫₀ʰ y²p + (3c*/(2h(1−h)²))∫ₕ¹ (1−y)²p, which is
    // what makes A(ξ₀) = 1 and A∘L = B hold.
    let eta_coeff = ((8.0 * h.powi(4) - 15.0 * h.powi(3) + 5.0 * h) * w0
        - (8.0 * g.powi(4) - 15.0 * g.powi(3) + 5.0 * g) * w1)
        / (20.0 * h * h * g * g);
    let a = 1.5 / (h * h * g) * ua - 1.5 / (h * g * g) * ub + eta_coeff * eta;
    let b = 3.0 / (h * h * g) * va + 3.0 / (h * g * g) * vb;
    Ok((a, b))
}

/// [`project_p0`] applied to a [`Triple`].
pub fn project_triple<T: Triple>(w: &T, p: &Params) -> Result<(f64, f64)> {
    project_p0(|y| w.u(y), |y| w.v(y), w.eta(), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(h: f64, w0: f64) -> Params {
        Params::new(h, w0, 0.0).unwrap()
    }

    #[test]
    fn dispersion_values() {
        assert_abs_diff_eq!(dispersion(0.0, 0.5), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dispersion(1.0, 0.5), 2.0 / 0.5f64.tanh(), epsilon = 1e-14);
        assert_abs_diff_eq!(dispersion(1.0, 0.5), 4.327906, epsilon = 1e-6);
        assert_eq!(dispersion(-2.3, 0.3), dispersion(2.3, 0.3));
    }

    #[test]
    fn series_and_closed_form_overlap() {
        for h in [0.1, 0.25, 0.5, 0.75, 0.9] {
            for i in 0..=40 {
                let k = 10f64.powf(-5.0 + 2.0 * i as f64 / 40.0);
                let d = (dispersion_series(k, h) - dispersion_closed(k, h)).abs();
                assert!(d < 1e-10, "h={h} k={k} diff={d}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for h in [0.2, 0.5, 0.8] {
            for k in [-7.0, -1.0, -0.01, 0.0005, 0.3, 2.0, 11.0] {
                let d = 1e-6;
                let fd = (dispersion(k + d, h) - dispersion(k - d, h)) / (2.0 * d);
                let an = dispersion_derivative(k, h);
                assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()), "h={h} k={k}");
                assert!(an * k > 0.0);
            }
        }
    }

    #[test]
    fn p_hand_values() {
        let p = params(0.5, 1.0);
        assert_abs_diff_eq!(p_coeff(0.0, &p), -4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p_coeff(1.0, &p), -4.0, epsilon = 1e-14);
        let jump = p_coeff_branch(0.5, &p, Layer::Lower) - p_coeff_branch(0.5, &p, Layer::Upper);
        assert_abs_diff_eq!(jump, 1.0 / p.c_star(), epsilon = 1e-12);
    }

    #[test]
    fn p_prime_matches_finite_difference() {
        let p = params(0.3, 0.6);
        for y in [0.05, 0.2, 0.45, 0.9] {
            let d = 1e-6;
            let fd = (p_coeff(y + d, &p) - p_coeff(y - d, &p)) / (2.0 * d);
            assert!((fd - p_coeff_prime(y, &p)).abs() < 1e-6);
        }
    }

    #[test]
    fn kernel_hand_values() {
        let p = params(0.5, 1.0);
        let k = kernel_basis(&p);
        assert_abs_diff_eq!(k.u_star(0.0), -1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(k.u_star_branch(0.5, Layer::Lower), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(k.u_star_branch(0.5, Layer::Upper), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(k.v_star(0.5), 0.25, epsilon = 1e-15);
        assert_eq!((k.v_star(0.0), k.v_star(1.0)), (0.0, 0.0));
    }

    #[test]
    fn u_star_layer_means_vanish() {
        for (h, w0) in [(0.5, 1.0), (0.3, -0.4), (0.8, 2.5)] {
            let p = params(h, w0);
            let k = kernel_basis(&p);
            let (lo, hi) = layer_integrals(|y| k.u_star(y), h).unwrap();
            assert!(lo.abs() < 1e-10 && hi.abs() < 1e-10);
        }
    }

    #[test]
    fn projection_duality_on_kernel() {
        let p = params(0.5, 1.0);
        let k = kernel_basis(&p);
        let (a, b) = project_triple(&k.xi0(), &p).unwrap();
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(b, 0.0, epsilon = 1e-10);
        let (a, b) = project_triple(&k.xi1(), &p).unwrap();
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-10);
        assert_eq!(project_p0(|_| 0.0, |_| 0.0, 0.0, &p).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn jordan_chain() {
        let p = params(0.35, 0.2);
        let k = kernel_basis(&p);
        let xi1 = k.xi1();
        let img = apply_linear_operator(&p, &xi1);
        for y in [0.1, 0.3, 0.5, 0.95] {
            assert_abs_diff_eq!(img.u(y), k.u_star(y), epsilon = 1e-12);
            assert_abs_diff_eq!(img.v(y), 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(img.eta(), 1.0, epsilon = 1e-14);
        let xi0 = k.xi0();
        let img0 = apply_linear_operator(&p, &xi0);
        for y in [0.1, 0.3, 0.5, 0.95] {
            assert_abs_diff_eq!(img0.u(y), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(img0.v(y), 0.0, epsilon = 1e-12);
        }
    }
}
