//! The explicit small-amplitude solitary wave: interface, physical
//! velocities, stream function and the leading-order flat-coordinate fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mobius::{flatten, velocity_flat_to_phys};
use crate::params::{Layer, Params};
use crate::reduced_ode::leading_amplitudes;
use crate::spectral::{kernel_basis, KernelBasis};

/// Closed-form `(U_X, U_Y, V_X, V_Y)` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocityGradient {
    pub u_x: f64,
    pub u_y: f64,
    pub v_x: f64,
    pub v_y: f64,
}

/// An evaluable approximate solution. Immutable once built.
///
/// `η̄(X) = −(3ε/θ) sech²(κX)` with `κ = √(3ε)/(2h(1−h))`; the velocity is
/// the layer-wise shear `ω(Y−h) + c* + ε` shifted by `−(1−h)η̄` (lower) or
/// `hη̄` (upper), and `V̄ = −∫₀^Y Ū_X`. With ε = 0 this is the trivial shear
/// flow, which exists for every θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveField {
    params: Params,
    kernel: KernelBasis,
    kappa: f64,
    amplitude: f64,
}

pub fn build_wave(p: &Params) -> Result<WaveField> {
    if p.eps() > 0.0 && p.theta_is_zero() {
        return Err(Error::ThetaZero(p.theta()));
    }
    let (kappa, amplitude) = if p.eps() == 0.0 {
        (0.0, 0.0)
    } else {
        (
            (3.0 * p.eps()).sqrt() / (2.0 * p.c_star()),
            -3.0 * p.eps() / p.theta(),
        )
    };
    Ok(WaveField {
        params: *p,
        kernel: kernel_basis(p),
        kappa,
        amplitude,
    })
}

fn check_y(y: f64) -> Result<()> {
    if (0.0..=1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "Y",
            value: y,
            allowed: "[0, 1]",
        })
    }
}

impl WaveField {
    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Inverse decay length of the wave (zero for the shear flow).
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `η̄(0) = −3ε/θ`.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn is_shear(&self) -> bool {
        self.amplitude == 0.0
    }

    /// `1/κ`, or 1 for the shear flow; the natural horizontal length unit.
    pub fn length_scale(&self) -> f64 {
        if self.kappa > 0.0 {
            1.0 / self.kappa
        } else {
            1.0
        }
    }

    fn sech_tanh(&self, x: f64) -> (f64, f64) {
        let z = self.kappa * x;
        let c = z.cosh();
        (1.0 / (c * c), z.tanh())
    }

    pub fn eta(&self, x: f64) -> f64 {
        self.amplitude * self.sech_tanh(x).0
    }

    pub fn eta_x(&self, x: f64) -> f64 {
        let (s2, t) = self.sech_tanh(x);
        -2.0 * self.amplitude * self.kappa * s2 * t
    }

    pub fn eta_xx(&self, x: f64) -> f64 {
        let (s2, t) = self.sech_tanh(x);
        -2.0 * self.amplitude * self.kappa * self.kappa * (s2 * s2 - 2.0 * s2 * t * t)
    }

    /// Height `h + η̄(X)` of the interface.
    pub fn interface(&self, x: f64) -> f64 {
        self.params.h() + self.eta(x)
    }

    /// Layer containing `(X, Y)`; points on the interface count as lower.
    pub fn layer_at(&self, x: f64, y: f64) -> Layer {
        if y <= self.interface(x) {
            Layer::Lower
        } else {
            Layer::Upper
        }
    }

    /// Interface shift coefficient of `Ū` in each layer.
    fn beta(&self, layer: Layer) -> f64 {
        match layer {
            Layer::Lower => -(1.0 - self.params.h()),
            Layer::Upper => self.params.h(),
        }
    }

    /// `(Ū, V̄)` from the formulas of one layer, whether or not the point lies
    /// in it.
    pub fn velocity_branch(&self, x: f64, y: f64, layer: Layer) -> (f64, f64) {
        let p = &self.params;
        let h = p.h();
        let (eta, eta_x) = (self.eta(x), self.eta_x(x));
        let s = h + eta;
        let u = p.omega(layer) * (y - h) + p.speed() + self.beta(layer) * eta;
        let v = match layer {
            Layer::Lower => (1.0 - h) * eta_x * y,
            Layer::Upper => (1.0 - h) * eta_x * s - h * eta_x * (y - s),
        };
        (u, v)
    }

    pub fn velocity(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        check_y(y)?;
        Ok(self.velocity_branch(x, y, self.layer_at(x, y)))
    }

    pub fn velocity_gradient_branch(&self, x: f64, y: f64, layer: Layer) -> VelocityGradient {
        let h = self.params.h();
        let (eta, e1, e2) = (self.eta(x), self.eta_x(x), self.eta_xx(x));
        let s = h + eta;
        match layer {
            Layer::Lower => VelocityGradient {
                u_x: -(1.0 - h) * e1,
                u_y: self.params.omega0(),
                v_x: (1.0 - h) * e2 * y,
                v_y: (1.0 - h) * e1,
            },
            Layer::Upper => VelocityGradient {
                u_x: h * e1,
                u_y: self.params.omega1(),
                v_x: e2 * ((1.0 - h) * s - h * (y - s)) + e1 * e1,
                v_y: -h * e1,
            },
        }
    }

    pub fn velocity_gradient(&self, x: f64, y: f64) -> Result<VelocityGradient> {
        check_y(y)?;
        Ok(self.velocity_gradient_branch(x, y, self.layer_at(x, y)))
    }

    /// `Ψ = ∫_{h+η̄}^{Y} Ū dỸ`, exact per layer.
    pub fn stream(&self, x: f64, y: f64) -> Result<f64> {
        check_y(y)?;
        Ok(self.stream_branch(x, y, self.layer_at(x, y)))
    }

    pub fn stream_branch(&self, x: f64, y: f64, layer: Layer) -> f64 {
        let p = &self.params;
        let h = p.h();
        let eta = self.eta(x);
        let k = p.speed() + self.beta(layer) * eta;
        0.5 * p.omega(layer) * ((y - h).powi(2) - eta * eta) + k * (y - h - eta)
    }

    /// `(Ψ_X, Ψ_Y)` in closed form. `Ψ_Y = Ū` exactly; `Ψ_X` differs from `−V̄`
    /// by the (Y-independent) interface kinematic residual.
    pub fn stream_gradient(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        check_y(y)?;
        Ok(self.stream_gradient_branch(x, y, self.layer_at(x, y)))
    }

    pub fn stream_gradient_branch(&self, x: f64, y: f64, layer: Layer) -> (f64, f64) {
        let p = &self.params;
        let (h, eta, e1) = (p.h(), self.eta(x), self.eta_x(x));
        let b = self.beta(layer);
        let k = p.speed() + b * eta;
        let psi_x = e1 * (-p.omega(layer) * eta + b * (y - h - eta) - k);
        (psi_x, self.velocity_branch(x, y, layer).0)
    }

    /// Leading-order flat fields `u = aᵉ(x)u*(y)`, `v = bᵉ(x)v*(y)`.
    pub fn flat_leading(&self, x: f64, y: f64) -> (f64, f64) {
        let (a, b) = leading_amplitudes(&self.params, x);
        (a * self.kernel.u_star(y), b * self.kernel.v_star(y))
    }

    /// Physical velocity reconstructed from the flat leading-order fields
    /// through the Möbius map, an alternative to [`WaveField::velocity`].
    pub fn velocity_via_flat(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        check_y(y)?;
        let (fp, m) = flatten(x, y, self.eta(x), self.eta_x(x), self.params.h())?;
        let (u, v) = self.flat_leading(x, fp.y);
        Ok((velocity_flat_to_phys(u, fp.y, &m, &self.params)?, v))
    }

    pub fn kernel(&self) -> &KernelBasis {
        &self.kernel
    }
}

pub fn eval_velocity(w: &WaveField, x: f64, y: f64) -> Result<(f64, f64)> {
    w.velocity(x, y)
}

pub fn eval_flat_leading(w: &WaveField, x: f64, y: f64) -> (f64, f64) {
    w.flat_leading(x, y)
}

pub fn eval_stream(w: &WaveField, x: f64, y: f64) -> Result<f64> {
    w.stream(x, y)
}

/// One row of a field dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "Psi")]
    pub psi: f64,
    pub layer: u8,
}

/// Evenly spaced samples of `[−W/κ, W/κ] × [0, 1]`, row-major in `Y`.
pub fn field_grid(w: &WaveField, nx: usize, ny: usize, x_window: f64) -> Result<Vec<GridSample>> {
    if nx < 2 || ny < 2 {
        return Err(Error::Domain {
            what: "grid size",
            value: nx.min(ny) as f64,
            allowed: "nx, ny >= 2",
        });
    }
    let half = x_window * w.length_scale();
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let y = j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            let x = -half + 2.0 * half * i as f64 / (nx - 1) as f64;
            let (u, v) = w.velocity(x, y)?;
            out.push(GridSample {
                x,
                y,
                u,
                v,
                psi: w.stream(x, y)?,
                layer: match w.layer_at(x, y) {
                    Layer::Lower => 0,
                    Layer::Upper => 1,
                },
            });
        }
    }
    Ok(out)
}
