//! The six subcommands.

use serde::Serialize;
use vortfront_core::diagnostics::{DiagnosticsConfig, Grid};
use vortfront_core::flowfield::{portrait as build_portrait, PointNature, PortraitOptions, StagnationReport};
use vortfront_core::params::Equilibrium;
use vortfront_core::reduced_ode::{integrate_reduced, unscale_point};
use vortfront_core::spectral::dispersion_samples;
use vortfront_core::wave::field_grid;
use vortfront_core::{
    build_wave, classify_region, diagnose, equilibrium_interfaces, Error, Layer, Params, RegionLabel,
};

use crate::config::RunConfig;
use crate::output::{emit, to_csv, to_json};
use crate::{CliError, Outcome};

fn written(paths: &[std::path::PathBuf]) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct Written<'a> {
        written: Vec<std::borrow::Cow<'a, str>>,
    }
    let body = Written {
        written: paths.iter().map(|p| p.to_string_lossy()).collect(),
    };
    Ok(Outcome {
        stdout: serde_json::to_string(&body).map_err(|e| CliError::Io(e.to_string()))?,
        error: None,
    })
}

#[derive(Serialize)]
struct Classification {
    #[serde(flatten)]
    label: RegionLabel,
    h: f64,
    omega0: f64,
    omega1: f64,
    eps: f64,
    theta: f64,
    c_star: f64,
    speed: f64,
    equilibria: Vec<Equilibrium>,
}

/// On the θ = 0 line the label is still printed, and the command fails with
/// `THETA_ZERO`.
pub fn classify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    let label = classify_region(&p);
    let c = Classification {
        label,
        h: p.h(),
        omega0: p.omega0(),
        omega1: p.omega1(),
        eps: p.eps(),
        theta: p.theta(),
        c_star: p.c_star(),
        speed: p.speed(),
        equilibria: equilibrium_interfaces(&p),
    };
    Ok(Outcome {
        stdout: serde_json::to_string_pretty(&c).map_err(|e| CliError::Io(e.to_string()))?,
        error: p
            .theta_is_zero()
            .then(|| CliError::Core(Error::ThetaZero(p.theta()))),
    })
}

pub fn dispersion(cfg: &RunConfig, name: &str) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    #[derive(Serialize)]
    struct Row {
        k: f64,
        d: f64,
    }
    let r = cfg.k_range;
    let rows = dispersion_samples(p.h(), r.k_min, r.k_max, r.samples)
        .into_iter()
        .map(|(k, d)| Row { k, d });
    let path = emit(cfg.output_path("dispersion"), &to_csv(rows)?, name, cfg)?;
    written(&[path])
}

#[derive(Serialize)]
struct ReducedRow {
    x_tilde: f64,
    a_tilde: f64,
    b_tilde: f64,
}

#[derive(Serialize)]
struct ScaledRow {
    x_tilde: f64,
    a_tilde: f64,
    b_tilde: f64,
    x: f64,
    a: f64,
    b: f64,
}

/// Physical columns are added when ε > 0 and θ ≠ 0, where the rescaling is
/// defined.
pub fn ode(cfg: &RunConfig, name: &str) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    let o = cfg.ode;
    let traj = integrate_reduced(o.a0, o.b0, o.x_max, o.step)?;
    let bytes = if p.eps() > 0.0 && !p.theta_is_zero() {
        let rows = traj
            .samples
            .iter()
            .map(|s| {
                unscale_point(s, &p).map(|q| ScaledRow {
                    x_tilde: s.x_tilde,
                    a_tilde: s.a_tilde,
                    b_tilde: s.b_tilde,
                    x: q.x,
                    a: q.a,
                    b: q.b,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        to_csv(rows)?
    } else {
        to_csv(traj.samples.iter().map(|s| ReducedRow {
            x_tilde: s.x_tilde,
            a_tilde: s.a_tilde,
            b_tilde: s.b_tilde,
        }))?
    };
    let path = emit(cfg.output_path("trajectory"), &bytes, name, cfg)?;
    written(&[path])
}

pub fn construct(cfg: &RunConfig, name: &str) -> Result<Outcome, CliError> {
    let w = build_wave(&cfg.params()?)?;
    let rows = field_grid(&w, cfg.nx, cfg.ny, cfg.x_window)?;
    let path = emit(cfg.output_path("field"), &to_csv(rows)?, name, cfg)?;
    written(&[path])
}

/// Writes the report even when some stages failed; those failures are listed
/// in the report and turn the exit status into a numerical failure.
pub fn validate(cfg: &RunConfig, name: &str) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    let dc = DiagnosticsConfig {
        grid: Grid {
            nx: cfg.nx,
            ny: cfg.ny,
            x_window: cfg.x_window,
        },
        ..DiagnosticsConfig::default()
    };
    let report = diagnose(&p, &dc)?;
    let path = emit(cfg.output_path("report"), &to_json(&report)?, name, cfg)?;
    let mut out = written(&[path])?;
    if !report.errors.is_empty() {
        out.error = Some(CliError::Incomplete(report.errors.join("; ")));
    }
    Ok(out)
}

#[derive(Serialize)]
struct PortraitRow {
    curve_id: usize,
    kind: &'static str,
    #[serde(rename = "X")]
    x: f64,
    #[serde(rename = "Y")]
    y: f64,
    psi: f64,
}

#[derive(Serialize)]
struct Attached {
    curve_id: usize,
    start: (f64, f64),
    end: (f64, f64),
    psi_level: f64,
    max_drift: f64,
}

#[derive(Serialize)]
struct StagnationDoc<'a> {
    params: Params,
    region: RegionLabel,
    location: Option<(f64, f64)>,
    nature: Option<PointNature>,
    layer: Option<Layer>,
    boundary_saddles: Option<[(f64, f64); 2]>,
    separatrix_curve_ids: Vec<usize>,
    attached_streamline: Option<Attached>,
    detail: Option<&'a StagnationReport>,
    note: Option<&'static str>,
}

pub fn portrait(cfg: &RunConfig, name: &str) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    let w = build_wave(&p)?;
    let opts = PortraitOptions {
        nx: cfg.nx,
        ny: cfg.ny,
        levels: cfg.levels,
        x_window: cfg.x_window,
    };
    let pt = build_portrait(&w, &opts)?;
    let psi = |x: f64, y: f64| w.stream_branch(x, y, w.layer_at(x, y));
    let mut rows = Vec::new();
    let mut id = 0;
    let mut push = |kind: &'static str, line: &[(f64, f64)], rows: &mut Vec<PortraitRow>| {
        for &(x, y) in line {
            rows.push(PortraitRow {
                curve_id: id,
                kind,
                x,
                y,
                psi: psi(x, y),
            });
        }
        id += 1;
        id - 1
    };
    for c in &pt.contours {
        for l in &c.polylines {
            push("streamline", l, &mut rows);
        }
    }
    let separatrix_curve_ids = pt
        .separatrix
        .iter()
        .flat_map(|c| c.polylines.iter())
        .map(|l| push("streamline", l, &mut rows))
        .collect();
    let attached = pt.attached.as_ref().map(|s| Attached {
        curve_id: push("streamline", &s.points, &mut rows),
        start: s.points[0],
        end: *s.points.last().unwrap_or(&s.points[0]),
        psi_level: s.psi_level,
        max_drift: s.max_drift,
    });
    push("interface", &pt.interface, &mut rows);
    for l in &pt.critical_layer {
        push("critical_layer", l, &mut rows);
    }
    let s = pt.stagnation.as_ref();
    let doc = StagnationDoc {
        params: p,
        region: classify_region(&p),
        location: s.map(|s| (s.interior.x, s.interior.y)),
        nature: s.map(|s| s.interior.nature),
        layer: s.map(|s| s.interior.layer),
        boundary_saddles: s.and_then(|s| s.boundary_saddles),
        separatrix_curve_ids,
        attached_streamline: attached,
        detail: s,
        note: w
            .is_shear()
            .then_some("eps = 0: exact shear flow, the critical level is a line of stagnation points"),
    };
    let csv = emit(cfg.output_path("portrait"), &to_csv(rows)?, name, cfg)?;
    let json = emit(cfg.output_path("stagnation"), &to_json(&doc)?, name, cfg)?;
    written(&[csv, json])
}
