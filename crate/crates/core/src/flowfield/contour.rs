//! Marching-squares level sets of `Ψ` and the assembled flow portrait.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::critical::{critical_curve, find_stagnation, StagnationReport};
use super::streamline::{attached_streamline, Streamline};
use super::Frame;
use crate::error::Result;
use crate::wave::WaveField;

/// Values on a tensor grid, row-major in `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

impl ScalarGrid {
    pub fn sample<F: Fn(f64, f64) -> f64 + Sync>(xs: Vec<f64>, ys: Vec<f64>, f: F) -> ScalarGrid {
        use rayon::prelude::*;
        let nx = xs.len();
        let values = (0..xs.len() * ys.len())
            .into_par_iter()
            .map(|k| f(xs[k % nx], ys[k / nx]))
            .collect();
        ScalarGrid { xs, ys, values }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.xs.len() + i]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

// Edge ids: 2k for the horizontal edge right of node k, 2k+1 for the vertical
// edge above it.
fn h_edge(g: &ScalarGrid, i: usize, j: usize) -> usize {
    2 * (j * g.xs.len() + i)
}

fn v_edge(g: &ScalarGrid, i: usize, j: usize) -> usize {
    2 * (j * g.xs.len() + i) + 1
}

fn crossing(g: &ScalarGrid, edge: usize, level: f64) -> (f64, f64) {
    let k = edge / 2;
    let (i, j) = (k % g.xs.len(), k / g.xs.len());
    let (i2, j2) = if edge % 2 == 0 { (i + 1, j) } else { (i, j + 1) };
    let (a, b) = (g.at(i, j), g.at(i2, j2));
    let t = (level - a) / (b - a);
    (
        g.xs[i] + t * (g.xs[i2] - g.xs[i]),
        g.ys[j] + t * (g.ys[j2] - g.ys[j]),
    )
}

/// Polylines of `{value = level}`, each an ordered list of points. Closed
/// curves repeat their first point at the end.
pub fn contour_lines(g: &ScalarGrid, level: f64) -> Vec<Vec<(f64, f64)>> {
    let (nx, ny) = (g.xs.len(), g.ys.len());
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut link = |a: usize, b: usize| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let c = [g.at(i, j), g.at(i + 1, j), g.at(i + 1, j + 1), g.at(i, j + 1)];
            let case = c
                .iter()
                .enumerate()
                .fold(0usize, |acc, (n, &v)| acc | (((v >= level) as usize) << n));
            let (b, r, t, l) = (
                h_edge(g, i, j),
                v_edge(g, i + 1, j),
                h_edge(g, i, j + 1),
                v_edge(g, i, j),
            );
            let centre_above = c.iter().sum::<f64>() / 4.0 >= level;
            match case {
                1 | 14 => link(l, b),
                2 | 13 => link(b, r),
                3 | 12 => link(l, r),
                4 | 11 => link(r, t),
                6 | 9 => link(b, t),
                7 | 8 => link(l, t),
                5 => {
                    if centre_above {
                        link(b, r);
                        link(t, l);
                    } else {
                        link(l, b);
                        link(r, t);
                    }
                }
                10 => {
                    if centre_above {
                        link(l, b);
                        link(r, t);
                    } else {
                        link(b, r);
                        link(t, l);
                    }
                }
                _ => {}
            }
        }
    }
    let mut used: BTreeMap<usize, bool> = adj.keys().map(|&k| (k, false)).collect();
    let mut lines = Vec::new();
    let walk = |start: usize, used: &mut BTreeMap<usize, bool>| {
        let mut chain = vec![start];
        used.insert(start, true);
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|n| !used[n]);
            match next {
                Some(n) => {
                    used.insert(n, true);
                    chain.push(n);
                    cur = n;
                }
                None => {
                    if chain.len() > 2 && adj[&cur].contains(&start) {
                        chain.push(start);
                    }
                    break;
                }
            }
        }
        chain.iter().map(|&e| crossing(g, e, level)).collect::<Vec<_>>()
    };
    // Open chains start at degree-one edges (the grid boundary).
    let ends: Vec<usize> = adj
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(&k, _)| k)
        .collect();
    for e in ends {
        if !used[&e] {
            lines.push(walk(e, &mut used));
        }
    }
    let rest: Vec<usize> = adj.keys().copied().collect();
    for e in rest {
        if !used[&e] {
            lines.push(walk(e, &mut used));
        }
    }
    lines
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortraitOptions {
    pub nx: usize,
    pub ny: usize,
    pub levels: usize,
    /// Half-width in units of `1/κ`.
    pub x_window: f64,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        PortraitOptions {
            nx: 400,
            ny: 200,
            levels: 24,
            x_window: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub level: f64,
    pub polylines: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Portrait {
    /// Non-empty contours of the evenly spaced levels.
    pub contours: Vec<Contour>,
    /// The level through the interior stagnation point, when there is one.
    pub separatrix: Option<Contour>,
    /// Interface `Y = h + η̄(X)`, drawn dashed.
    pub interface: Vec<(f64, f64)>,
    /// Polylines of the critical layer.
    pub critical_layer: Vec<Vec<(f64, f64)>>,
    pub stagnation: Option<StagnationReport>,
    pub attached: Option<Streamline>,
}

/// Ψ contours at `levels` evenly spaced values strictly inside its range,
/// plus the interface, critical layer, stagnation points and, in the
/// bounded case, the attached streamline.
pub fn portrait(w: &WaveField, opts: &PortraitOptions) -> Result<Portrait> {
    let half = opts.x_window * w.length_scale();
    let xs: Vec<f64> = (0..opts.nx)
        .map(|i| -half + 2.0 * half * i as f64 / (opts.nx - 1).max(1) as f64)
        .collect();
    let ys: Vec<f64> = (0..opts.ny)
        .map(|j| j as f64 / (opts.ny - 1).max(1) as f64)
        .collect();
    let grid = ScalarGrid::sample(xs.clone(), ys, |x, y| w.stream_branch(x, y, w.layer_at(x, y)));
    let (lo, hi) = grid.min_max();
    let contours = (0..opts.levels)
        .map(|k| lo + (hi - lo) * (k + 1) as f64 / (opts.levels + 1) as f64)
        .map(|level| Contour {
            level,
            polylines: contour_lines(&grid, level),
        })
        .filter(|c| !c.polylines.is_empty())
        .collect();
    let stagnation = if w.is_shear() || w.params().theta_is_zero() {
        None
    } else {
        Some(find_stagnation(w)?)
    };
    let separatrix = stagnation.as_ref().map(|s| {
        let level = w.stream_branch(s.interior.x, s.interior.y, s.interior.layer);
        Contour {
            level,
            polylines: contour_lines(&grid, level),
        }
    });
    let attached = match &stagnation {
        Some(s) if s.boundary_saddles.is_some() => Some(attached_streamline(w)?),
        _ => None,
    };
    let frame = Frame::new(w)?;
    let mut critical_layer = Vec::new();
    let mut run = Vec::new();
    for (x, y) in critical_curve(&frame, opts.nx).points {
        match y {
            Some(y) => run.push((x, y)),
            None if !run.is_empty() => critical_layer.push(std::mem::take(&mut run)),
            None => {}
        }
    }
    if !run.is_empty() {
        critical_layer.push(run);
    }
    Ok(Portrait {
        contours,
        separatrix,
        interface: xs.iter().map(|&x| (x, w.interface(x))).collect(),
        critical_layer,
        stagnation,
        attached,
    })
}
