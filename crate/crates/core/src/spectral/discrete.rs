//! Finite-difference spot-check of the spectrum of `L` near the imaginary axis.
//!
//! Staggered grid: `u` at cell midpoints, `v` at interior nodes (the wall
//! values `v(0) = v(1) = 0` are eliminated), one node pinned at `y = h`, and
//! `η` as a scalar unknown. Centred differences are second order on each
//! layer. The two layer-mean constraints on `u` are imposed by restricting to
//! their orthogonal complement (equivalent to Lagrange-multiplier rows).

use nalgebra::{Complex, DMatrix, DVector, Schur};
use serde::{Deserialize, Serialize};

use super::{dispersion, p_coeff_branch, p_coeff_prime_branch};
use crate::error::{Error, Result};
use crate::params::{Layer, Params};

/// Samples used for the dispersion-margin statistic on `[−50, 50] \ {0}`.
const MARGIN_SAMPLES: usize = 2000;
const MARGIN_K: f64 = 50.0;
/// Tolerance for recognising eigenvalues with `sin(hz) = sin((1−h)z) = 0`.
const BAD_DISPERSION_TOL: f64 = 5e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    /// The two eigenvalues of smallest modulus, as `(re, im)`.
    pub smallest: [(f64, f64); 2],
    pub smallest_modulus: [f64; 2],
    /// Minimum `|Re z|` over the remaining eigenvalues.
    pub spectral_gap: f64,
    /// Eigenvalues excluded from the gap because they solve `sin(hz) = sin((1−h)z) = 0`.
    pub bad_dispersion_excluded: usize,
    /// `min 𝔡(k) − 1/c*` over a symmetric `k`-grid avoiding zero.
    pub dispersion_margin: f64,
}

struct Grid {
    nodes: Vec<f64>,
    mids: Vec<f64>,
    widths: Vec<f64>,
    /// Index of the node at `y = h`.
    m: usize,
}

impl Grid {
    fn new(n: usize, h: f64) -> Grid {
        let nl = ((n as f64 * h).round() as usize).clamp(1, n - 1);
        let nu = n - nl;
        let mut nodes: Vec<f64> = (0..=nl).map(|i| h * i as f64 / nl as f64).collect();
        nodes.extend((1..=nu).map(|i| h + (1.0 - h) * i as f64 / nu as f64));
        nodes[nl] = h;
        nodes[n] = 1.0;
        let mids = nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let widths = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        Grid {
            nodes,
            mids,
            widths,
            m: nl,
        }
    }
}

/// Dense discretisation of `L` on `2n` unknowns: `u₀..u_{n−1}`,
/// `v₁..v_{n−1}`, `η`.
fn assemble(p: &Params, g: &Grid) -> DMatrix<f64> {
    let n = g.mids.len();
    let size = 2 * n;
    let iv = |j: usize| n + j - 1;
    let ie = size - 1;
    let (h, cs) = (p.h(), p.c_star());
    let mut a = DMatrix::<f64>::zeros(size, size);
    for j in 0..n {
        let y = g.mids[j];
        let layer = if y < h { Layer::Lower } else { Layer::Upper };
        a[(j, iv(g.m))] += p_coeff_branch(y, p, layer);
        if j < n - 1 {
            a[(j, iv(j + 1))] -= 1.0 / g.widths[j];
        }
        if j >= 1 {
            a[(j, iv(j))] += 1.0 / g.widths[j];
        }
    }
    for j in 1..n {
        let dyc = 0.5 * (g.widths[j] + g.widths[j - 1]);
        let y = g.nodes[j];
        a[(iv(j), j)] += 1.0 / dyc;
        a[(iv(j), j - 1)] -= 1.0 / dyc;
        let pp = if j == g.m {
            0.5 * (p_coeff_prime_branch(y, p, Layer::Lower) + p_coeff_prime_branch(y, p, Layer::Upper))
        } else {
            let layer = if j < g.m { Layer::Lower } else { Layer::Upper };
            p_coeff_prime_branch(y, p, layer)
        };
        a[(iv(j), ie)] -= cs * pp;
    }
    a[(ie, iv(g.m))] = 1.0 / cs;
    a
}

/// `H M H` for the Householder reflector `H` sending `c` to a multiple of
/// `e_first`. Afterwards row/column `first` carry the constrained direction.
fn reflect(mut m: DMatrix<f64>, c: &DVector<f64>, first: usize) -> DMatrix<f64> {
    let mut w = c.clone();
    w[first] -= c.norm();
    let ww = w.norm_squared();
    if ww == 0.0 {
        return m;
    }
    let beta = 2.0 / ww;
    let wt_m = w.transpose() * &m;
    m.ger(-beta, &w, &wt_m.transpose(), 1.0);
    let m_w = &m * &w;
    m.ger(-beta, &m_w, &w, 1.0);
    m
}

fn is_bad_dispersion(z: Complex<f64>, h: f64) -> bool {
    z.im.abs() < BAD_DISPERSION_TOL
        && z.re.abs() > std::f64::consts::PI
        && (h * z.re).sin().abs() < BAD_DISPERSION_TOL
        && ((1.0 - h) * z.re).sin().abs() < BAD_DISPERSION_TOL
}

pub fn dispersion_margin(h: f64) -> f64 {
    let inv_cs = 1.0 / (h * (1.0 - h));
    (0..MARGIN_SAMPLES)
        .map(|i| {
            let k = -MARGIN_K + (i as f64 + 0.5) * 2.0 * MARGIN_K / MARGIN_SAMPLES as f64;
            dispersion(k, h) - inv_cs
        })
        .fold(f64::INFINITY, f64::min)
}

/// Eigenvalues of the constrained discretisation of `L` on `n` cells.
pub fn discrete_spectrum(p: &Params, n: usize) -> Result<Vec<Complex<f64>>> {
    if n < 32 {
        return Err(Error::Domain {
            what: "n",
            value: n as f64,
            allowed: "n >= 32",
        });
    }
    let g = Grid::new(n, p.h());
    let size = 2 * n;
    let mut a = assemble(p, &g);
    let mut drop = Vec::with_capacity(2);
    for lower in [true, false] {
        let mut c = DVector::<f64>::zeros(size);
        let mut first = None;
        for j in 0..n {
            if (g.mids[j] < p.h()) == lower {
                c[j] = g.widths[j];
                first.get_or_insert(j);
            }
        }
        let first = first.expect("each layer has at least one cell");
        a = reflect(a, &c, first);
        drop.push(first);
    }
    let a = a.remove_rows_at(&drop).remove_columns_at(&drop);
    let dim = a.nrows();
    let schur = Schur::try_new(a, f64::EPSILON, 200 * dim).ok_or(Error::Eigensolver(dim))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

pub fn centre_spectrum_check(p: &Params, n: usize) -> Result<SpectrumReport> {
    let mut ev = discrete_spectrum(p, n)?;
    ev.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let (small, rest) = ev.split_at(2);
    let mut excluded = 0;
    let mut gap = f64::INFINITY;
    for z in rest {
        if is_bad_dispersion(*z, p.h()) {
            excluded += 1;
        } else {
            gap = gap.min(z.re.abs());
        }
    }
    Ok(SpectrumReport {
        n,
        smallest: [(small[0].re, small[0].im), (small[1].re, small[1].im)],
        smallest_modulus: [small[0].norm(), small[1].norm()],
        spectral_gap: gap,
        bad_dispersion_excluded: excluded,
        dispersion_margin: dispersion_margin(p.h()),
    })
}
