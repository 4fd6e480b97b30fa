//! Flow checks: conservation and dissipation along trajectories, fitted
//! linear decay, integrator order, trajectory equivariance, and global
//! tracking of a strongly deformed initial domain through chart switches.

use super::{tolerances as tol, CheckResult};
use crate::charts::{Chart, DomainRep};
use crate::fields::PeriodicScalarField;
use crate::flow::{area, centroid, initial_state, simulate, step, FlowConfig};
use crate::geometry::{hausdorff_distance, Collar, CurveSpec, Point, ReferenceCurve};
use crate::groups::{act, GroupElement};
use std::f64::consts::{PI, TAU};

const SUITE: &str = "flow";

fn perturbed_disk(eps: f64, k: usize, n: usize) -> DomainRep {
    let curve = ReferenceCurve::new(
        CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0, phase: 0.0 },
        n,
    )
    .unwrap();
    DomainRep::new(
        Chart::new(Collar::new(curve, 0.2).unwrap()),
        PeriodicScalarField::from_fn(n, |s| eps * (k as f64 * s).cos()),
    )
    .unwrap()
}

fn fit_log_slope(series: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(_, a)| *a > 0.0)
        .map(|(t, a)| (*t, a.ln()))
        .collect();
    let n = pts.len() as f64;
    let st: f64 = pts.iter().map(|(t, _)| t).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let stt: f64 = pts.iter().map(|(t, _)| t * t).sum();
    let sty: f64 = pts.iter().map(|(t, y)| t * y).sum();
    (n * sty - st * sy) / (n * stt - st * st)
}

pub fn run(_seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();

    // Run A: 1% mode-2 perturbed unit disk, dt = 1e-3, T = 1, n = 256.
    let dom = perturbed_disk(0.01, 2, 256);
    let area0 = area(&dom);
    let mut cfg = FlowConfig::new(1e-3, 1.0);
    cfg.snapshot_every = 1;
    let mut amps: Vec<(f64, f64)> = Vec::new();
    let mut prev_perimeter = f64::INFINITY;
    let mut max_per_increase: f64 = 0.0;
    let result = simulate(dom, &cfg, &mut |st| {
        let (a, _) = st.dom.rho().mode(2);
        amps.push((st.t, a.abs()));
        if prev_perimeter.is_finite() {
            max_per_increase = max_per_increase.max(st.perimeter - prev_perimeter);
        }
        prev_perimeter = st.perimeter;
    });
    match result {
        Ok(final_state) => {
            out.push(CheckResult::gauge(
                SUITE,
                "area conserved over unit horizon",
                (final_state.area - area0).abs() / area0,
                tol::AREA_DRIFT_REL,
                "relative drift, dt = 1e-3, n = 256",
            ));
            out.push(CheckResult::gauge(
                SUITE,
                "perimeter never increases",
                max_per_increase,
                tol::PERIMETER_STEP_INCREASE,
                "largest per-step increase",
            ));
            let rate = fit_log_slope(&amps);
            out.push(CheckResult::gauge(
                SUITE,
                "fitted mode-2 decay rate is -6",
                (rate + 6.0).abs() / 6.0,
                tol::MODE2_RATE_REL,
                format!("fitted {rate:.5}"),
            ));
        }
        Err(e) => {
            out.push(CheckResult::flag(
                SUITE,
                "area conserved over unit horizon",
                false,
                f64::NAN,
                tol::AREA_DRIFT_REL,
                format!("flow failed: {e}"),
            ));
        }
    }

    // Run B: unit-area 2:1 ellipse to T = 2 with automatic re-anchoring.
    let ellipse = ReferenceCurve::new(
        CurveSpec::Ellipse {
            center: [0.0, 0.0],
            a: std::f64::consts::SQRT_2,
            b: std::f64::consts::FRAC_1_SQRT_2,
            angle: 0.0,
        },
        64,
    )
    .unwrap();
    let dom = DomainRep::new(
        Chart::with_default_delta(ellipse).unwrap(),
        PeriodicScalarField::zeros(64),
    )
    .unwrap();
    let area0 = area(&dom);
    let cfg = FlowConfig::new(2e-4, 2.0);
    match simulate(dom, &cfg, &mut |_| {}) {
        Ok(final_state) => {
            out.push(CheckResult::flag(
                SUITE,
                "ellipse run re-anchors at least once",
                final_state.rechart_count >= 1,
                final_state.rechart_count as f64,
                1.0,
                "chart switches (must be >= 1)",
            ));
            out.push(CheckResult::gauge(
                SUITE,
                "boundary continuous across chart switches",
                final_state.max_rechart_jump,
                tol::RECHART_JUMP_REL,
                "Hausdorff jump / scale",
            ));
            out.push(CheckResult::gauge(
                SUITE,
                "ellipse area conserved to horizon",
                (final_state.area - area0).abs() / area0,
                tol::AREA_DRIFT_REL,
                "relative drift",
            ));
            let c = centroid(&final_state.dom);
            let req = (final_state.area / PI).sqrt();
            let n = final_state.dom.n();
            let disk: Vec<Point> = (0..n)
                .map(|j| {
                    let t = TAU * j as f64 / n as f64;
                    Point::new(c.x + req * t.cos(), c.y + req * t.sin())
                })
                .collect();
            let d = hausdorff_distance(&final_state.dom.boundary_samples(), &disk);
            out.push(CheckResult::gauge(
                SUITE,
                "ellipse relaxes to the equivalent disk",
                d,
                tol::FINAL_DISK_HAUSDORFF,
                "Hausdorff at T = 2",
            ));
        }
        Err(e) => {
            out.push(CheckResult::flag(
                SUITE,
                "ellipse run re-anchors at least once",
                false,
                f64::NAN,
                1.0,
                format!("flow failed: {e}"),
            ));
        }
    }

    // Integrator order: halving dt contracts the one-step error 16x; a
    // fixed rate cutoff keeps the integrated field identical across dt.
    let dom = perturbed_disk(0.01, 2, 64);
    let mut cfg = FlowConfig::new(2e-3, 1.0);
    cfg.rate_cutoff = Some(8);
    let state0 = initial_state(dom).unwrap();
    let advance = |dt: f64, steps: usize| -> PeriodicScalarField {
        let mut local = cfg.clone();
        local.dt = Some(dt);
        let mut s = state0.clone();
        for _ in 0..steps {
            s = step(&s, &local).unwrap();
        }
        s.dom.rho().clone()
    };
    let coarse = advance(2e-3, 1);
    let half = advance(1e-3, 2);
    let reference = advance(2e-3 / 16.0, 16);
    let e_coarse = (&coarse - &reference).max_abs();
    let e_half = (&half - &reference).max_abs();
    out.push(CheckResult::flag(
        SUITE,
        "halving dt contracts one-step error 12x",
        e_half * tol::RK4_HALVING_FACTOR <= e_coarse,
        e_coarse / e_half.max(1e-300),
        tol::RK4_HALVING_FACTOR,
        "observed contraction (must exceed)",
    ));

    // Trajectory equivariance under translation.
    let dom = perturbed_disk(0.01, 2, 128);
    let moved = act(&GroupElement::Translate([0.3, -0.2]), &dom);
    let mut cfg = FlowConfig::new(1e-3, 0.05);
    cfg.snapshot_every = 10;
    let mut snaps_a: Vec<Vec<Point>> = Vec::new();
    let mut snaps_b: Vec<Vec<Point>> = Vec::new();
    simulate(dom, &cfg, &mut |st| snaps_a.push(st.dom.boundary_samples())).unwrap();
    simulate(moved, &cfg, &mut |st| snaps_b.push(st.dom.boundary_samples())).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in snaps_a.iter().zip(&snaps_b) {
        let shifted: Vec<Point> = b.iter().map(|p| Point::new(p.x - 0.3, p.y + 0.2)).collect();
        worst = worst.max(hausdorff_distance(a, &shifted));
    }
    out.push(CheckResult::gauge(
        SUITE,
        "translated start yields translated trajectory",
        worst,
        tol::TRAJECTORY_EQUIVARIANCE,
        "snapshot-wise Hausdorff",
    ));

    out
}
