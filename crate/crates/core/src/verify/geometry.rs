//! Geometry and function-calculus checks: collar projection round trips,
//! orientation of the signed distance, the evaluation-map Lipschitz bound,
//! and the superposition derivative formulas against finite differences.

use super::{tolerances as tol, CheckResult};
use crate::fields::{superpose, superposition_derivative, AdditiveShift, HolderIndex, PeriodicScalarField};
use crate::geometry::{Collar, CurveSpec, ReferenceCurve};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

const SUITE: &str = "geometry";

fn test_curves() -> Vec<ReferenceCurve> {
    vec![
        ReferenceCurve::new(
            CurveSpec::Circle { center: [0.2, -0.1], radius: 1.3, phase: 0.0 },
            64,
        )
        .unwrap(),
        ReferenceCurve::new(
            CurveSpec::Ellipse { center: [0.0, 0.0], a: 2.0, b: 1.0, angle: 0.4 },
            128,
        )
        .unwrap(),
        ReferenceCurve::new(
            // gently wavy fourier curve: r = 1 + 0.08 cos 3θ in cartesian modes
            CurveSpec::Fourier {
                cx: vec![0.0, 1.0, 0.0, 0.04, 0.0, 0.0, 0.0, 0.04, 0.0],
                cy: vec![0.0, 0.0, 1.0, 0.0, -0.04, 0.0, 0.0, 0.0, 0.04],
            },
            128,
        )
        .unwrap(),
    ]
}

pub fn run(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // projection round trip and orthogonality across the test curves
    let mut worst_rt = 0.0f64;
    let mut worst_orth = 0.0f64;
    for curve in test_curves() {
        let delta = curve.reach() / 8.0;
        let collar = Collar::new(curve.clone(), delta).unwrap();
        let scale = curve.scale();
        for &s in curve.params().iter().step_by(3) {
            for &frac in &[-0.97, -0.4, 0.33, 0.97] {
                let t = frac * 4.0 * delta;
                let f = curve.frame(s).unwrap();
                let y = f.point + t * f.normal;
                let (s2, t2) = collar.project(y).unwrap();
                let ds = {
                    let raw = (s2 - s).rem_euclid(TAU);
                    raw.min(TAU - raw)
                };
                worst_rt = worst_rt.max(ds.max((t2 - t).abs()) / scale);
                let resid = (y - curve.point(s2)).dot(&curve.d1(s2)).abs();
                worst_orth = worst_orth.max(resid / (scale * scale));
            }
        }
    }
    out.push(CheckResult::gauge(
        SUITE,
        "projection round trip (s, t) recovery",
        worst_rt,
        tol::PROJECTION_ROUND_TRIP_REL,
        "relative to curve scale",
    ));
    out.push(CheckResult::gauge(
        SUITE,
        "projection orthogonality residual",
        worst_orth,
        tol::PROJECTION_ROUND_TRIP_REL,
        "relative to scale^2",
    ));

    // sign of the collar coordinate vs. a winding-number oracle
    let curve = &test_curves()[1];
    let collar = Collar::new(curve.clone(), curve.reach() / 8.0).unwrap();
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    while checked < 1000 {
        let s = rng.random_range(0.0..TAU);
        let t = rng.random_range(-0.95..0.95) * 4.0 * collar.delta();
        let f = curve.frame(s).unwrap();
        let y = f.point + t * f.normal;
        let Ok((_, lambda)) = collar.project(y) else { continue };
        if lambda.abs() < 1e-9 {
            continue;
        }
        if (lambda < 0.0) != curve.contains(y) {
            mismatches += 1;
        }
        checked += 1;
    }
    out.push(CheckResult::flag(
        SUITE,
        "signed distance agrees with winding test",
        mismatches == 0,
        mismatches as f64,
        0.0,
        "1000 random collar points",
    ));

    // circle frame exactness
    let circle = ReferenceCurve::new(
        CurveSpec::Circle { center: [0.5, 0.5], radius: 2.5, phase: 0.0 },
        64,
    )
    .unwrap();
    let mut kerr = 0.0f64;
    for &s in &circle.params() {
        kerr = kerr.max((circle.curvature(s) - 1.0 / 2.5).abs());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "circle curvature is 1/R at all samples",
        kerr,
        1e-13,
        "",
    ));
    out.push(CheckResult::gauge(
        SUITE,
        "reach of a circle equals its radius",
        (circle.reach() - 2.5).abs() / 2.5,
        1e-12,
        "relative",
    ));

    // evaluation-map Lipschitz bound: |η1(s1) - η2(s2)| is controlled by
    // (1 + max C^{0,1} norm) (arclength(s1,s2) + max-samplewise ‖η1-η2‖)
    let circle = ReferenceCurve::new(
        CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0, phase: 0.0 },
        64,
    )
    .unwrap();
    let family: Vec<PeriodicScalarField> = (0..8)
        .map(|_| {
            let a: Vec<f64> = (0..4).map(|_| rng.random_range(-0.5..0.5)).collect();
            PeriodicScalarField::from_fn(64, |s| {
                a.iter()
                    .enumerate()
                    .map(|(k, c)| c * ((k + 1) as f64 * s).cos())
                    .sum()
            })
        })
        .collect();
    let max_norm = family
        .iter()
        .map(|f| f.holder_norm(&circle, HolderIndex::new(0, 1.0)).unwrap())
        .fold(0.0f64, f64::max);
    let mut worst_ratio = 0.0f64;
    for _ in 0..200 {
        let f1 = &family[rng.random_range(0..family.len())];
        let f2 = &family[rng.random_range(0..family.len())];
        let s1 = rng.random_range(0.0..TAU);
        let s2 = rng.random_range(0.0..TAU);
        let lhs = (f1.eval(s1) - f2.eval(s2)).abs();
        let dist = circle.arclength_between(s1, s2);
        let fdiff = (0..64)
            .map(|j| (f1.value(j) - f2.value(j)).abs())
            .fold(0.0f64, f64::max);
        let rhs = (1.0 + max_norm) * (dist + fdiff);
        if rhs > 1e-14 {
            worst_ratio = worst_ratio.max(lhs / rhs);
        }
    }
    out.push(CheckResult::gauge(
        SUITE,
        "evaluation map obeys the Lipschitz bound",
        worst_ratio,
        1.0,
        "200 random pairs; ratio of bound",
    ));

    // superposition derivatives against finite differences
    let rho = PeriodicScalarField::from_fn(64, |s| 0.1 * s.cos());
    let eta = PeriodicScalarField::from_fn(64, |s| s.sin());
    let d1 = superposition_derivative(&rho, &eta, &AdditiveShift, 1).unwrap();
    let mut best1 = f64::INFINITY;
    for &h in &[1e-4, 1e-5, 1e-6] {
        let plus = superpose(&(&rho + &eta.scaled(h)), &AdditiveShift);
        let minus = superpose(&(&rho - &eta.scaled(h)), &AdditiveShift);
        let fd = (&plus - &minus).scaled(0.5 / h);
        best1 = best1.min((&fd - &d1).max_abs() / d1.max_abs());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "superposition first derivative vs differences",
        best1,
        tol::SUPERPOSITION_D1_REL,
        "h-sweep relative error",
    ));

    let d2 = superposition_derivative(&rho, &eta, &AdditiveShift, 2).unwrap();
    let mut best2 = f64::INFINITY;
    for &h in &[1e-3, 5e-4, 1e-4] {
        let plus = superpose(&(&rho + &eta.scaled(h)), &AdditiveShift);
        let minus = superpose(&(&rho - &eta.scaled(h)), &AdditiveShift);
        let mid = superpose(&rho, &AdditiveShift);
        let fd = (&(&plus + &minus) - &mid.scaled(2.0)).scaled(1.0 / (h * h));
        best2 = best2.min((&fd - &d2).max_abs() / d2.max_abs());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "superposition second derivative vs differences",
        best2,
        tol::SUPERPOSITION_D2_REL,
        "h-sweep relative error",
    ));

    out
}
