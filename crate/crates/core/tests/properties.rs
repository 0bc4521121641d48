//! Property tests over randomly drawn parameters.

use proptest::prelude::*;
use vortfront_core::diagnostics::{vorticity_function_probe, Verdict};
use vortfront_core::flowfield::{find_stagnation, PointNature};
use vortfront_core::mobius::{flatten, unflatten};
use vortfront_core::params::{equilibrium_roots, StagnationNature};
use vortfront_core::reduced_ode::{energy, integrate_reduced};
use vortfront_core::spectral::{dispersion, dispersion_closed, dispersion_series};
use vortfront_core::{build_wave, classify_region, Layer, Params, Region, WaveField};

fn sech2(z: f64) -> f64 {
    1.0 / z.cosh().powi(2)
}

/// `(h, ω₀, ε)` away from the θ = 0 line and the bounded line, so the
/// classification is robust to rounding.
fn generic_params() -> impl Strategy<Value = Params> {
    (0.1..0.9f64, -1.0..2.0f64, 1e-4..5e-3f64)
        .prop_filter("theta, bounded line, amplitude", |&(h, w0, e)| {
            let theta = (3.0 * h - 1.0) * w0 - (3.0 * h - 2.0) * (w0 - 1.0);
            // The crest must stay well inside the strip.
            let amp = 3.0 * e / theta.abs();
            theta.abs() > 0.05 && (w0 - (1.0 - h)).abs() > 0.02 && amp < 0.5 * h.min(1.0 - h)
        })
        .prop_map(|(h, w0, e)| Params::new(h, w0, e).unwrap())
}

fn wave(p: &Params) -> WaveField {
    build_wave(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn flatten_round_trip(h in 0.05..0.95f64, frac in -0.9..0.9f64, yp in 0.0..=1.0f64) {
        // η anywhere in (−h, 1−h).
        let eta = if frac < 0.0 { frac * h } else { frac * (1.0 - h) };
        let (fp, m) = flatten(0.0, yp, eta, 0.0, h).unwrap();
        prop_assert!(m.y_y > 0.0);
        prop_assert!((0.0..=1.0).contains(&fp.y));
        let (_, back) = unflatten(0.0, fp.y, eta, h).unwrap();
        prop_assert!((back - yp).abs() < 1e-13);
        let (fs, _) = flatten(0.0, h + eta, eta, 0.0, h).unwrap();
        prop_assert!((fs.y - h).abs() < 1e-13);
    }

    #[test]
    fn metric_derivatives_match_differences(
        h in 0.2..0.8f64, amp in -0.1..0.1f64, x in -3.0..3.0f64, yp in 0.05..0.95f64,
    ) {
        let eta = |x: f64| amp * sech2(x);
        let eta_x = |x: f64| -2.0 * amp * sech2(x) * x.tanh();
        let y = |x: f64, yp: f64| flatten(x, yp, eta(x), eta_x(x), h).unwrap().0.y;
        let (_, m) = flatten(x, yp, eta(x), eta_x(x), h).unwrap();
        let d = 1e-4;
        let y_x = (y(x + d, yp) - y(x - d, yp)) / (2.0 * d);
        let y_y = (y(x, yp + d) - y(x, yp - d)) / (2.0 * d);
        let y_yy = (y(x, yp + d) - 2.0 * y(x, yp) + y(x, yp - d)) / (d * d);
        let y_xy = (y(x + d, yp + d) - y(x + d, yp - d) - y(x - d, yp + d) + y(x - d, yp - d)) / (4.0 * d * d);
        prop_assert!((m.y_x - y_x).abs() < 1e-7, "y_x {} vs {}", m.y_x, y_x);
        prop_assert!((m.y_y - y_y).abs() < 1e-7, "y_y {} vs {}", m.y_y, y_y);
        prop_assert!((m.y_yy - y_yy).abs() < 1e-5, "y_yy {} vs {}", m.y_yy, y_yy);
        prop_assert!((m.y_xy - y_xy).abs() < 1e-5, "y_xy {} vs {}", m.y_xy, y_xy);
    }

    #[test]
    fn reflection_is_an_involution(p in generic_params()) {
        let r = p.reflected();
        let rr = r.reflected();
        prop_assert!((rr.h() - p.h()).abs() < 1e-15 && (rr.omega0() - p.omega0()).abs() < 1e-15);
        prop_assert!((r.theta() + p.theta()).abs() < 1e-13);
        prop_assert!((r.c_star() - p.c_star()).abs() < 1e-15);
        prop_assert_eq!(classify_region(&r).region, classify_region(&p).region.reflected());
    }

    #[test]
    fn equilibria_are_roots_inside_the_strip(h in 0.05..0.95f64, theta in -2.0..2.0f64, eps in 0.0..0.05f64) {
        let roots = equilibrium_roots(h, theta, eps);
        prop_assert!(roots.iter().any(|e| e.eta == 0.0));
        for e in &roots {
            let f = e.eta * (e.eta * e.eta + theta * e.eta + 2.0 * eps);
            prop_assert!(f.abs() < 1e-12, "residual {f}");
            prop_assert!(e.eta > -h && e.eta < 1.0 - h);
        }
        prop_assert!(roots.windows(2).all(|w| w[0].eta < w[1].eta));
        let total: u8 = roots.iter().map(|e| e.multiplicity).sum();
        prop_assert!(total <= 3);
    }

    #[test]
    fn wave_is_symmetric(p in generic_params(), x in 0.0..200.0f64, y in 0.0..=1.0f64) {
        let w = wave(&p);
        prop_assert_eq!(w.eta(x), w.eta(-x));
        prop_assert_eq!(w.eta_x(x), -w.eta_x(-x));
        let layer = w.layer_at(x, y);
        prop_assert_eq!(layer, w.layer_at(-x, y));
        let (u, v) = w.velocity_branch(x, y, layer);
        let (u2, v2) = w.velocity_branch(-x, y, layer);
        prop_assert!((u - u2).abs() < 1e-15 && (v + v2).abs() < 1e-15);
    }

    #[test]
    fn stream_function_identities(p in generic_params(), xk in -4.0..4.0f64, y in 0.02..0.98f64) {
        let w = wave(&p);
        let x = xk * w.length_scale();
        let layer = w.layer_at(x, y);
        // Stay on one branch for the differences.
        prop_assume!((y - w.interface(x)).abs() > 1e-3);
        let psi = |x: f64, y: f64| w.stream_branch(x, y, layer);
        let d = 1e-5;
        let psi_y = (psi(x, y + d) - psi(x, y - d)) / (2.0 * d);
        let psi_x = (psi(x + d, y) - psi(x - d, y)) / (2.0 * d);
        let (u, v) = w.velocity_branch(x, y, layer);
        prop_assert!((psi_y - u).abs() < 1e-9, "Ψ_Y {psi_y} vs U {u}");
        let (h, e) = (p.h(), w.eta(x));
        let r = -w.eta_x(x) * (p.eps() + (p.omega0() - 2.0 * (1.0 - h)) * e);
        prop_assert!((psi_x + v - r).abs() < 1e-9, "Ψ_X + V = {} vs r = {r}", psi_x + v);
        let (gx, gy) = w.stream_gradient_branch(x, y, layer);
        prop_assert!((gx - psi_x).abs() < 1e-9 && (gy - psi_y).abs() < 1e-9);
    }

    #[test]
    fn velocity_is_divergence_free(p in generic_params(), xk in -4.0..4.0f64, y in 0.02..0.98f64) {
        let w = wave(&p);
        let x = xk * w.length_scale();
        let layer = w.layer_at(x, y);
        let g = w.velocity_gradient_branch(x, y, layer);
        prop_assert!((g.u_x + g.v_y).abs() < 1e-15 * (1.0 + g.u_x.abs()));
        let d = 1e-5;
        let u = |x: f64, y: f64| w.velocity_branch(x, y, layer).0;
        let v = |x: f64, y: f64| w.velocity_branch(x, y, layer).1;
        prop_assert!((g.u_x - (u(x + d, y) - u(x - d, y)) / (2.0 * d)).abs() < 1e-9);
        prop_assert!((g.v_y - (v(x, y + d) - v(x, y - d)) / (2.0 * d)).abs() < 1e-9);
    }

    #[test]
    fn bottom_wall_is_impermeable_and_top_carries_residual(p in generic_params(), xk in -4.0..4.0f64) {
        let w = wave(&p);
        let x = xk * w.length_scale();
        prop_assert_eq!(w.velocity(x, 0.0).unwrap().1, 0.0);
        let top = w.velocity(x, 1.0).unwrap().1;
        prop_assert!((top - w.eta(x) * w.eta_x(x)).abs() < 1e-15);
    }

    #[test]
    fn flat_route_agrees_to_second_order(p in generic_params(), xk in -3.0..3.0f64, y in 0.0..=1.0f64) {
        // The second-order bound only holds for small amplitude.
        prop_assume!(3.0 * p.eps() / p.theta().abs() < 0.05);
        let w = wave(&p);
        let x = xk * w.length_scale();
        let (u, v) = w.velocity(x, y).unwrap();
        let (uf, vf) = w.velocity_via_flat(x, y).unwrap();
        // Second order in the amplitude; the map's metric brings 1/(h(1−h))².
        let e = w.amplitude().abs() / p.c_star();
        prop_assert!((u - uf).abs() < 4.0 * e * e, "{u} {uf} {e}");
        prop_assert!((v - vf).abs() < 4.0 * e * e, "{v} {vf} {e}");
    }

    #[test]
    fn dispersion_even_and_branches_agree(h in 0.05..0.95f64, k in 1e-4..50.0f64) {
        prop_assert_eq!(dispersion(k, h), dispersion(-k, h));
        prop_assert!(dispersion(k, h) > 1.0 / (h * (1.0 - h)));
        if k < 0.05 {
            let (a, b) = (dispersion_series(k, h), dispersion_closed(k, h));
            prop_assert!((a - b).abs() < 1e-10 * a, "{a} {b}");
        }
    }

    #[test]
    fn reduced_energy_conserved(a0 in -1.45..-0.05f64) {
        // Closed orbits inside the homoclinic loop.
        let t = integrate_reduced(a0, 0.0, 10.0, 1e-3).unwrap();
        let e0 = energy(a0, 0.0);
        let worst = t.samples.iter().map(|s| (energy(s.a_tilde, s.b_tilde) - e0).abs()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-10, "{worst}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stagnation_matches_the_table(p in generic_params()) {
        // Uniqueness is an asymptotic statement at fixed (h, ω₀): the wave
        // must be small, and small next to the distance δ from the bounded
        // line, or the critical layer reaches the wall (wall stagnation points
        // appear once |δ| ≲ 4|A|, and near θ = 0 it leaves the channel).
        let a = 3.0 * p.eps() / p.theta().abs();
        let delta = (p.omega0() - (1.0 - p.h())).abs();
        prop_assume!(a < 0.05 && delta > 5.0 * a);
        let label = classify_region(&p);
        let s = find_stagnation(&wave(&p)).unwrap();
        prop_assert_eq!(s.interior.x, 0.0);
        prop_assert_eq!(Some(s.interior.layer), label.stagnation_layer);
        let want = match label.stagnation_nature.unwrap() {
            StagnationNature::UniqueSaddle => PointNature::Saddle,
            _ => PointNature::Centre,
        };
        prop_assert_eq!(s.interior.nature, want);
        prop_assert!(s.boundary_saddles.is_none());
        prop_assert_eq!(s.sweep.interior_clusters, 1);
        prop_assert_eq!(s.sweep.wall_clusters, 0);
        let (u, v) = wave(&p).velocity(s.interior.x, s.interior.y).unwrap();
        prop_assert!(u.abs() < 1e-10 && v == 0.0);
    }

    #[test]
    fn probe_verdict_is_grid_invariant(h in 0.1..0.9f64, w0 in -1.0..2.0f64) {
        let p = Params::new(h, w0, 0.0).unwrap();
        let w = wave(&p);
        let coarse = vorticity_function_probe(&w, 100, 0.05).verdict;
        let fine = vorticity_function_probe(&w, 400, 0.05).verdict;
        prop_assert_eq!(coarse, fine);
    }
}

#[test]
fn bounded_regions_have_wall_saddles() {
    for r in [Region::II, Region::V] {
        let (h, w0) = r.representative().unwrap();
        let w = wave(&Params::new(h, w0, 1e-3).unwrap());
        let s = find_stagnation(&w).unwrap();
        assert_eq!(s.interior.nature, PointNature::Centre);
        let [a, b] = s.boundary_saddles.unwrap();
        assert_eq!(a.0, -b.0);
        assert_eq!(a.1, b.1);
        for (x, y) in [a, b] {
            assert!(w.velocity(x, y).unwrap().0.abs() < 1e-12);
        }
        assert_eq!(s.sweep.wall_clusters, 2);
        // The interior count is reported, not asserted: see the sweep notes.
        assert!(s.sweep.interior_clusters >= 1);
    }
}

#[test]
fn probe_cases() {
    let verdict = |h: f64, w0: f64| {
        vorticity_function_probe(&wave(&Params::new(h, w0, 0.0).unwrap()), 200, 0.05).verdict
    };
    assert_eq!(verdict(0.25, 0.0), Verdict::NoVorticityFunction);
    assert_eq!(verdict(0.25, 1.75), Verdict::NoVorticityFunction);
    assert_eq!(verdict(0.5, 0.5), Verdict::Exists);
}

#[test]
fn layer_flip_round_trip() {
    assert_eq!(Layer::Upper.flipped().flipped(), Layer::Upper);
}
