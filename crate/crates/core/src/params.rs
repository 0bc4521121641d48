//! Physical parameters, the `(θ, ω₀)` region classification and the
//! X-independent shear-flow equilibria.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default validity ceiling for ε. An engineering choice; the construction is
/// only asymptotic in ε.
pub const DEFAULT_EPS_MAX: f64 = 1e-2;
/// `|θ|` below this is treated as the degenerate line θ = 0.
pub const THETA_TOL: f64 = 1e-12;
/// `|ω₀ − (1−h)|` below this selects the bounded critical-layer case.
pub const BOUNDED_TOL: f64 = 1e-10;
/// Open-interval margin used when filtering equilibria to `(−h, 1−h)`.
pub const ROOT_MARGIN: f64 = 1e-14;

/// `θ = (3h−1)ω₀ − (3h−2)ω₁`, for arbitrary vorticities.
pub fn theta(h: f64, omega0: f64, omega1: f64) -> f64 {
    (3.0 * h - 1.0) * omega0 - (3.0 * h - 2.0) * omega1
}

/// Interface speed of the trivial solution at the bifurcation point.
pub fn critical_speed(h: f64) -> Result<f64> {
    check_h(h)?;
    Ok(h * (1.0 - h))
}

fn check_h(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "h",
            value: h,
            allowed: "(0, 1)",
        })
    }
}

/// The parameter bundle `(h, ω₀, ε)`; `ω₁ = ω₀ − 1` is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    h: f64,
    omega0: f64,
    eps: f64,
}

impl Params {
    pub fn new(h: f64, omega0: f64, eps: f64) -> Result<Self> {
        Self::with_ceiling(h, omega0, eps, DEFAULT_EPS_MAX)
    }

    /// Like [`Params::new`] but with a caller-chosen ceiling on ε.
    pub fn with_ceiling(h: f64, omega0: f64, eps: f64, eps_max: f64) -> Result<Self> {
        check_h(h)?;
        if !omega0.is_finite() {
            return Err(Error::Domain {
                what: "omega0",
                value: omega0,
                allowed: "finite reals",
            });
        }
        if !(eps.is_finite() && eps >= 0.0 && eps < eps_max) {
            return Err(Error::Domain {
                what: "eps",
                value: eps,
                allowed: "[0, eps_max)",
            });
        }
        Ok(Params { h, omega0, eps })
    }

    /// Same `(h, ω₀)` with a different ε, checked against the default ceiling.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(self.h, self.omega0, eps)
    }

    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn omega1(&self) -> f64 {
        self.omega0 - 1.0
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn theta(&self) -> f64 {
        theta(self.h, self.omega0, self.omega1())
    }

    /// `c* = h(1−h)`.
    pub fn c_star(&self) -> f64 {
        self.h * (1.0 - self.h)
    }

    /// Wave speed `c = c* + ε`.
    pub fn speed(&self) -> f64 {
        self.c_star() + self.eps
    }

    pub fn omega(&self, layer: Layer) -> f64 {
        match layer {
            Layer::Lower => self.omega0,
            Layer::Upper => self.omega1(),
        }
    }

    pub fn theta_is_zero(&self) -> bool {
        self.theta().abs() < THETA_TOL
    }

    /// `ω₀ = 1−h`: the critical layer meets the wall and is bounded.
    pub fn is_bounded_case(&self) -> bool {
        (self.omega0 - (1.0 - self.h)).abs() < BOUNDED_TOL
    }

    /// Image under the vertical reflection `Y ↦ 1−Y`, `V ↦ −V`:
    /// `(h, ω₀, ω₁) ↦ (1−h, −ω₁, −ω₀)`.
    pub fn reflected(&self) -> Params {
        Params {
            h: 1.0 - self.h,
            omega0: -self.omega1(),
            eps: self.eps,
        }
    }
}

/// One of the two constant-vorticity layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Lower,
    Upper,
}

impl Layer {
    pub fn flipped(self) -> Layer {
        match self {
            Layer::Lower => Layer::Upper,
            Layer::Upper => Layer::Lower,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "vi")]
    VI,
    #[serde(rename = "degenerate-theta-zero")]
    DegenerateThetaZero,
}

impl Region {
    pub const ALL: [Region; 6] = [
        Region::I,
        Region::II,
        Region::III,
        Region::IV,
        Region::V,
        Region::VI,
    ];

    /// The row swap induced by the vertical reflection.
    pub fn reflected(self) -> Region {
        match self {
            Region::I => Region::VI,
            Region::II => Region::V,
            Region::III => Region::IV,
            Region::IV => Region::III,
            Region::V => Region::II,
            Region::VI => Region::I,
            Region::DegenerateThetaZero => Region::DegenerateThetaZero,
        }
    }

    /// A representative `(h, ω₀)` inside the region.
    pub fn representative(self) -> Option<(f64, f64)> {
        match self {
            Region::I => Some((0.5, 0.25)),
            Region::II => Some((0.25, 0.75)),
            Region::III => Some((0.25, 1.0)),
            Region::IV => Some((0.75, 0.0)),
            Region::V => Some((0.75, 0.25)),
            Region::VI => Some((0.5, 0.75)),
            Region::DegenerateThetaZero => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Region::I => "i",
            Region::II => "ii",
            Region::III => "iii",
            Region::IV => "iv",
            Region::V => "v",
            Region::VI => "vi",
            Region::DegenerateThetaZero => "degenerate-theta-zero",
        }
    }

    pub fn from_label(s: &str) -> Option<Region> {
        Region::ALL
            .into_iter()
            .chain([Region::DegenerateThetaZero])
            .find(|r| r.label() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveProfile {
    Elevation,
    Depression,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StagnationNature {
    UniqueSaddle,
    UniqueCentre,
    NonUniqueCentre,
}

/// A row of the qualitative classification table. The descriptive fields are
/// absent on the degenerate line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub region: Region,
    pub wave_profile: Option<WaveProfile>,
    pub stagnation_layer: Option<Layer>,
    pub stagnation_nature: Option<StagnationNature>,
}

impl RegionLabel {
    pub fn for_region(region: Region) -> RegionLabel {
        use Layer::*;
        use StagnationNature::*;
        use WaveProfile::*;
        let row = match region {
            Region::I => Some((Elevation, Upper, UniqueSaddle)),
            Region::II => Some((Elevation, Lower, NonUniqueCentre)),
            Region::III => Some((Elevation, Lower, UniqueCentre)),
            Region::IV => Some((Depression, Upper, UniqueCentre)),
            Region::V => Some((Depression, Upper, NonUniqueCentre)),
            Region::VI => Some((Depression, Lower, UniqueSaddle)),
            Region::DegenerateThetaZero => None,
        };
        RegionLabel {
            region,
            wave_profile: row.map(|r| r.0),
            stagnation_layer: row.map(|r| r.1),
            stagnation_nature: row.map(|r| r.2),
        }
    }
}

pub fn classify_region(p: &Params) -> RegionLabel {
    let th = p.theta();
    let region = if th.abs() < THETA_TOL {
        Region::DegenerateThetaZero
    } else {
        let below = p.omega0() < 1.0 - p.h();
        match (th < 0.0, p.is_bounded_case(), below) {
            (true, false, true) => Region::I,
            (true, true, _) => Region::II,
            (true, false, false) => Region::III,
            (false, false, true) => Region::IV,
            (false, true, _) => Region::V,
            (false, false, false) => Region::VI,
        }
    };
    RegionLabel::for_region(region)
}

/// A real equilibrium interface offset with its multiplicity as a root of
/// `η(η² + θη + 2ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub eta: f64,
    pub multiplicity: u8,
}

/// Roots of `η(η² + θη + 2ε) = 0` inside `(−h, 1−h)`, ascending.
pub fn equilibrium_roots(h: f64, theta: f64, eps: f64) -> Vec<Equilibrium> {
    let mut roots: Vec<Equilibrium> = vec![Equilibrium {
        eta: 0.0,
        multiplicity: 1,
    }];
    let mut push = |eta: f64, m: u8| {
        if eta == 0.0 {
            roots[0].multiplicity += m;
        } else {
            roots.push(Equilibrium { eta, multiplicity: m });
        }
    };
    let disc = theta * theta - 8.0 * eps;
    if disc == 0.0 {
        push(-theta / 2.0, 2);
    } else if disc > 0.0 {
        // Cancellation-free pair: q is the larger-magnitude root, 2ε/q the other.
        let sq = disc.sqrt();
        let q = -0.5 * (theta + theta.signum() * sq);
        if q == 0.0 {
            // θ = 0 and ε = 0.
            push(0.0, 2);
        } else {
            push(q, 1);
            push(2.0 * eps / q, 1);
        }
    }
    roots.retain(|r| r.eta > -h + ROOT_MARGIN && r.eta < 1.0 - h - ROOT_MARGIN);
    roots.sort_by(|a, b| a.eta.total_cmp(&b.eta));
    roots
}

pub fn equilibrium_interfaces(p: &Params) -> Vec<Equilibrium> {
    equilibrium_roots(p.h(), p.theta(), p.eps())
}

/// An X-independent flow: interface at `h + η₀`, interface speed `c̃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShearFlow {
    pub eta0: f64,
    pub c_tilde: f64,
}

impl ShearFlow {
    pub fn new(p: &Params, eta0: f64, c_tilde: f64) -> Result<Self> {
        if !(eta0 > -p.h() && eta0 < 1.0 - p.h()) {
            return Err(Error::DegenerateInterface(p.h() + eta0));
        }
        Ok(ShearFlow { eta0, c_tilde })
    }

    /// The trivial solution travelling at speed `c* + ε`.
    pub fn trivial(p: &Params) -> Self {
        ShearFlow {
            eta0: 0.0,
            c_tilde: p.speed(),
        }
    }
}

/// `ω(Y − h − η₀) + c̃` with the vorticity of the layer containing `Y`.
pub fn shear_velocity(p: &Params, s: &ShearFlow, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain {
            what: "Y",
            value: y,
            allowed: "[0, 1]",
        });
    }
    let d = y - p.h() - s.eta0;
    let layer = if d <= 0.0 { Layer::Lower } else { Layer::Upper };
    Ok(p.omega(layer) * d + s.c_tilde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn theta_hand_values() {
        assert_abs_diff_eq!(theta(0.5, 1.0, 0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(theta(1.0 / 3.0, 0.5, -0.5), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(theta(0.5, 0.5, -0.5), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn critical_speed_values() {
        assert_eq!(critical_speed(0.25).unwrap(), 0.1875);
        assert_eq!(critical_speed(0.5).unwrap(), 0.25);
        assert!(critical_speed(1e-9).unwrap() < 1e-8);
        assert!(critical_speed(1.5).is_err());
        assert!(critical_speed(0.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(0.5, 0.25, 0.0).is_ok());
        assert!(Params::new(0.5, 0.25, 0.02).is_err());
        assert!(Params::new(0.5, 0.25, -1e-3).is_err());
        assert!(Params::new(1.0, 0.25, 1e-3).is_err());
        assert!(Params::new(0.5, f64::NAN, 1e-3).is_err());
        assert!(Params::with_ceiling(0.5, 0.25, 0.05, 0.1).is_ok());
        let p = Params::new(0.3, 0.7, 1e-3).unwrap();
        assert_eq!(p.omega0() - p.omega1(), 1.0);
    }

    #[test]
    fn classify_table_rows() {
        let cases = [
            ((0.5, 0.25), Region::I),
            ((0.25, 0.75), Region::II),
            ((0.5, 0.75), Region::VI),
        ];
        for ((h, w0), want) in cases {
            let p = Params::new(h, w0, 1e-3).unwrap();
            assert_eq!(classify_region(&p).region, want);
        }
        let l = classify_region(&Params::new(0.5, 0.25, 0.0).unwrap());
        assert_eq!(l.wave_profile, Some(WaveProfile::Elevation));
        assert_eq!(l.stagnation_layer, Some(Layer::Upper));
        assert_eq!(l.stagnation_nature, Some(StagnationNature::UniqueSaddle));
        let d = classify_region(&Params::new(0.5, 0.5, 0.0).unwrap());
        assert_eq!(d.region, Region::DegenerateThetaZero);
        assert_eq!(d.wave_profile, None);
    }

    #[test]
    fn representatives_land_in_their_regions() {
        for r in Region::ALL {
            let (h, w0) = r.representative().unwrap();
            let p = Params::new(h, w0, 1e-3).unwrap();
            assert_eq!(classify_region(&p).region, r);
            assert_eq!(classify_region(&p.reflected()).region, r.reflected());
        }
    }

    #[test]
    fn equilibria_examples() {
        // ε = 0: η = 0 doubles up, η = −θ survives when it is inside (−h, 1−h).
        let r = equilibrium_roots(0.6, 0.5, 0.0);
        assert_eq!(r.len(), 2);
        assert_abs_diff_eq!(r[0].eta, -0.5, epsilon = 1e-15);
        assert_eq!((r[0].multiplicity, r[1].eta, r[1].multiplicity), (1, 0.0, 2));
        // At h = 0.5 the root −0.5 sits on the boundary and is filtered.
        assert_eq!(equilibrium_roots(0.5, 0.5, 0.0).len(), 1);

        let r = equilibrium_roots(0.5, 0.5, 0.01);
        let etas: Vec<f64> = r.iter().map(|e| e.eta).collect();
        assert_eq!(etas.len(), 3);
        assert_abs_diff_eq!(etas[0], -0.456155, epsilon = 1e-6);
        assert_abs_diff_eq!(etas[1], -0.043845, epsilon = 1e-6);
        assert_eq!(etas[2], 0.0);

        let r = equilibrium_roots(0.5, 0.5, 0.05);
        assert_eq!(
            r,
            vec![Equilibrium {
                eta: 0.0,
                multiplicity: 1
            }]
        );
    }

    #[test]
    fn shear_examples() {
        let p = Params::new(0.5, 1.0, 0.0).unwrap();
        let s = ShearFlow::new(&p, 0.0, 0.25).unwrap();
        assert_eq!(shear_velocity(&p, &s, 0.5).unwrap(), 0.25);
        assert_eq!(shear_velocity(&p, &s, 0.0).unwrap(), -0.25);
        assert_eq!(shear_velocity(&p, &s, 1.0).unwrap(), 0.25);
        assert!(shear_velocity(&p, &s, 1.1).is_err());
        assert!(ShearFlow::new(&p, 0.5, 0.25).is_err());
    }
}
