//! Hanzawa-extension checks: identity cases, exact boundary restriction,
//! sampled Jacobian positivity, and the bundle chart round trip.

use super::{tolerances as tol, CheckResult};
use crate::bundle::{bundle_transition, hanzawa_inverse, hanzawa_map, AnalyticField, InteriorField};
use crate::charts::{Chart, DomainRep};
use crate::fields::PeriodicScalarField;
use crate::geometry::{Collar, CurveSpec, Point, ReferenceCurve};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

const SUITE: &str = "bundle";

fn disk_dom(delta: f64, n: usize, rho: PeriodicScalarField) -> DomainRep {
    let curve = ReferenceCurve::new(
        CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0, phase: 0.0 },
        n,
    )
    .unwrap();
    DomainRep::new(Chart::new(Collar::new(curve, delta).unwrap()), rho).unwrap()
}

pub fn run(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 64;

    let test_doms = vec![
        disk_dom(0.1, n, PeriodicScalarField::from_fn(n, |s| 0.03 * (2.0 * s).cos())),
        disk_dom(0.15, n, PeriodicScalarField::from_fn(n, |s| {
            0.02 * (3.0 * s).sin() - 0.01 * s.cos()
        })),
    ];

    // identity map at zero graph, exact
    let zero_dom = disk_dom(0.1, n, PeriodicScalarField::zeros(n));
    let mut ident_exact = true;
    for _ in 0..100 {
        let r = rng.random_range(0.0..1.0f64).sqrt();
        let th = rng.random_range(0.0..TAU);
        let x = Point::new(r * th.cos(), r * th.sin());
        if let Ok(y) = hanzawa_map(&zero_dom, x) {
            if y != x {
                ident_exact = false;
            }
        }
    }
    out.push(CheckResult::flag(
        SUITE,
        "extension of zero graph is the identity",
        ident_exact,
        if ident_exact { 0.0 } else { 1.0 },
        0.0,
        "bitwise equality on 100 interior points",
    ));

    // exact boundary restriction and exact identity far inside
    let mut boundary_err = 0.0f64;
    let mut deep_exact = true;
    for dom in &test_doms {
        let base = dom.chart().base();
        for j in 0..n {
            let s = base.param(j);
            let mapped = hanzawa_map(dom, base.point(s)).unwrap();
            boundary_err = boundary_err.max((mapped - dom.boundary_point(s)).norm());
        }
        let delta = dom.chart().delta();
        for _ in 0..50 {
            let rmax = 1.0 - 3.2 * delta;
            let r = rng.random_range(0.0..rmax * rmax).sqrt();
            let th = rng.random_range(0.0..TAU);
            let x = Point::new(r * th.cos(), r * th.sin());
            if hanzawa_map(dom, x).unwrap() != x {
                deep_exact = false;
            }
        }
    }
    out.push(CheckResult::gauge(
        SUITE,
        "boundary restriction equals the graph map",
        boundary_err,
        0.0,
        "exact at all samples",
    ));
    out.push(CheckResult::flag(
        SUITE,
        "identity beyond the cutoff collar band",
        deep_exact,
        if deep_exact { 0.0 } else { 1.0 },
        0.0,
        "bitwise equality",
    ));

    // finite-difference Jacobian positivity at 500 interior points per domain
    let mut min_det = f64::INFINITY;
    for dom in &test_doms {
        let h = 1e-6 * dom.scale();
        let mut tested = 0;
        while tested < 500 {
            let r = rng.random_range(0.0..0.995f64).sqrt();
            let th = rng.random_range(0.0..TAU);
            let x = Point::new(r * th.cos(), r * th.sin());
            let probes = [
                Point::new(x.x + h, x.y),
                Point::new(x.x - h, x.y),
                Point::new(x.x, x.y + h),
                Point::new(x.x, x.y - h),
            ];
            let imgs: Vec<_> = probes.iter().map(|&p| hanzawa_map(dom, p)).collect();
            if imgs.iter().any(|r| r.is_err()) {
                continue;
            }
            let imgs: Vec<Point> = imgs.into_iter().map(|r| r.unwrap()).collect();
            let dxdx = (imgs[0] - imgs[1]) / (2.0 * h);
            let dxdy = (imgs[2] - imgs[3]) / (2.0 * h);
            min_det = min_det.min(dxdx.x * dxdy.y - dxdx.y * dxdy.x);
            tested += 1;
        }
    }
    out.push(CheckResult::flag(
        SUITE,
        "extension jacobian positive on 500 points",
        min_det > 0.0,
        min_det,
        0.0,
        "minimum finite-difference determinant",
    ));

    // fiber inversion round trip
    let mut rt_err = 0.0f64;
    for dom in &test_doms {
        let scale = dom.scale();
        let mut tested = 0;
        while tested < 200 {
            let r = rng.random_range(0.0..1.0f64).sqrt();
            let th = rng.random_range(0.0..TAU);
            let x = Point::new(r * th.cos(), r * th.sin());
            let Ok(y) = hanzawa_map(dom, x) else { continue };
            let back = hanzawa_inverse(dom, y).unwrap();
            rt_err = rt_err.max((back - x).norm() / scale);
            tested += 1;
        }
    }
    out.push(CheckResult::gauge(
        SUITE,
        "fiber inversion round trip",
        rt_err,
        1e-10,
        "relative to scale",
    ));

    // bundle chart round trip: transport (ρ, z) out and back
    let dom = &test_doms[0];
    let dst = {
        let curve = ReferenceCurve::new(
            CurveSpec::Circle { center: [0.01, -0.015], radius: 1.01, phase: 0.0 },
            n,
        )
        .unwrap();
        Chart::new(Collar::new(curve, 0.2).unwrap())
    };
    let z = AnalyticField(|p: Point| p.x * p.x - 0.5 * p.y + 0.2 * p.x * p.y);
    let (rho2, w) = bundle_transition(dom, z, &dst).unwrap();
    let dom2 = DomainRep::new(dst.clone(), rho2).unwrap();
    let (rho_back, w_back) = bundle_transition(&dom2, w, dom.chart()).unwrap();
    let mut bundle_err = (&rho_back - dom.rho()).max_abs();
    let mut tested = 0;
    while tested < 100 {
        let r = rng.random_range(0.0..1.0f64).sqrt();
        let th = rng.random_range(0.0..TAU);
        let p = Point::new(r * th.cos(), r * th.sin());
        let direct = p.x * p.x - 0.5 * p.y + 0.2 * p.x * p.y;
        match w_back.eval(p) {
            Ok(v) => {
                bundle_err = bundle_err.max((v - direct).abs());
                tested += 1;
            }
            Err(_) => continue,
        }
    }
    out.push(CheckResult::gauge(
        SUITE,
        "bundle chart round trip",
        bundle_err,
        tol::HANZAWA_ROUND_TRIP,
        "graph and interior values",
    ));

    out
}
