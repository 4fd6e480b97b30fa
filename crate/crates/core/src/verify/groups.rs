//! Group-action checks: group laws and quasi-commutation on
//! representations, re-expression consistency, and the rank of the
//! translation/dilation action Jacobian.

use super::{tolerances as tol, CheckResult};
use crate::charts::{Chart, DomainRep};
use crate::fields::PeriodicScalarField;
use crate::geometry::{hausdorff_distance, Collar, CurveSpec, ReferenceCurve};
use crate::groups::{act, action_jacobian, reexpress, singular_values, GroupElement};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SUITE: &str = "groups";

fn rep_distance(a: &DomainRep, b: &DomainRep) -> f64 {
    // largest discrepancy between chart parameters and graph samples
    let spec_err = match (a.chart().base().spec(), b.chart().base().spec()) {
        (
            CurveSpec::Circle { center: c1, radius: r1, phase: p1 },
            CurveSpec::Circle { center: c2, radius: r2, phase: p2 },
        ) => (c1[0] - c2[0])
            .abs()
            .max((c1[1] - c2[1]).abs())
            .max((r1 - r2).abs())
            .max((p1 - p2).abs()),
        (CurveSpec::Fourier { cx: x1, cy: y1 }, CurveSpec::Fourier { cx: x2, cy: y2 }) => {
            let d = |u: &[f64], v: &[f64]| {
                u.iter()
                    .zip(v)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            };
            d(x1, x2).max(d(y1, y2))
        }
        _ => f64::INFINITY,
    };
    let delta_err = (a.chart().delta() - b.chart().delta()).abs();
    let rho_err = (a.rho() - b.rho()).max_abs();
    spec_err.max(delta_err).max(rho_err)
}

fn disk_dom(n: usize, rho: PeriodicScalarField) -> DomainRep {
    let curve = ReferenceCurve::new(
        CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0, phase: 0.0 },
        n,
    )
    .unwrap();
    DomainRep::new(Chart::new(Collar::new(curve, 0.2).unwrap()), rho).unwrap()
}

pub fn run(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 64;
    let dom = disk_dom(n, PeriodicScalarField::from_fn(n, |s| 0.03 * (2.0 * s).cos()));

    // group laws on representations
    let mut law_err = 0.0f64;
    for _ in 0..10 {
        let z1 = [rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2)];
        let z2 = [rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2)];
        let a = act(&GroupElement::Translate(z1), &act(&GroupElement::Translate(z2), &dom));
        let b = act(&GroupElement::Translate([z1[0] + z2[0], z1[1] + z2[1]]), &dom);
        law_err = law_err.max(rep_distance(&a, &b));

        let l1 = rng.random_range(0.5..2.0);
        let l2 = rng.random_range(0.5..2.0);
        let c = act(&GroupElement::Dilate(l1), &act(&GroupElement::Dilate(l2), &dom));
        let d = act(&GroupElement::Dilate(l1 * l2), &dom);
        law_err = law_err.max(rep_distance(&c, &d));

        let t1 = rng.random_range(-1.0..1.0);
        let t2 = rng.random_range(-1.0..1.0);
        let e = act(&GroupElement::Rotate(t1), &act(&GroupElement::Rotate(t2), &dom));
        let f = act(&GroupElement::Rotate(t1 + t2), &dom);
        law_err = law_err.max(rep_distance(&e, &f));
    }
    out.push(CheckResult::gauge(
        SUITE,
        "composition laws on representations",
        law_err,
        tol::GROUP_LAW_ABS,
        "translation, dilation, rotation",
    ));

    // quasi-commutation of dilation past translation
    let mut qc_err = 0.0f64;
    for &l in &[0.5, 2.0, 1.37] {
        let z = [rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2)];
        let lhs = act(&GroupElement::Dilate(l), &act(&GroupElement::Translate(z), &dom));
        let rhs = act(
            &GroupElement::Translate([l * z[0], l * z[1]]),
            &act(&GroupElement::Dilate(l), &dom),
        );
        qc_err = qc_err.max(rep_distance(&lhs, &rhs));
    }
    out.push(CheckResult::gauge(
        SUITE,
        "dilation commutes past translation with scaled shift",
        qc_err,
        tol::GROUP_LAW_ABS,
        "",
    ));

    // re-expression consistency: moved boundary vs the graph read back in
    // the original chart
    let mut re_err = 0.0f64;
    for g in [
        GroupElement::Translate([0.15, -0.1]),
        GroupElement::Dilate(1.04),
        GroupElement::Rotate(0.3),
    ] {
        let moved = act(&g, &dom);
        let back = reexpress(&g, &dom).unwrap();
        let dom_back = DomainRep::in_collar(dom.chart().clone(), back).unwrap();
        let hd = hausdorff_distance(&moved.boundary_samples(), &dom_back.boundary_samples());
        re_err = re_err.max(hd / dom.scale());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "re-expression reproduces the moved boundary",
        re_err,
        tol::BOUNDARY_HAUSDORFF_REL,
        "Hausdorff / scale",
    ));

    // closed-form re-expression of a translated disk
    let disk = disk_dom(n, PeriodicScalarField::zeros(n));
    let shifted = reexpress(&GroupElement::Translate([0.3, 0.0]), &disk).unwrap();
    let mut cf_err = 0.0f64;
    for j in 0..n {
        let t = std::f64::consts::TAU * j as f64 / n as f64;
        let expect = 0.3 * t.cos() + (1.0 - 0.09 * t.sin().powi(2)).sqrt() - 1.0;
        cf_err = cf_err.max((shifted.value(j) - expect).abs());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "translated disk matches circle-offset closed form",
        cf_err,
        1e-10,
        "",
    ));

    // rank of the (z1, z2, λ) action Jacobian with singular-value gap
    let mut min_gap = f64::INFINITY;
    let mut ranks_ok = true;
    let ellipse_dom = {
        let curve = ReferenceCurve::new(
            CurveSpec::Ellipse { center: [0.0, 0.0], a: 1.25, b: 1.0, angle: 0.2 },
            n,
        )
        .unwrap();
        DomainRep::new(
            Chart::with_default_delta(curve).unwrap(),
            PeriodicScalarField::zeros(n),
        )
        .unwrap()
    };
    for d in [&disk, &ellipse_dom] {
        let m = action_jacobian(d).unwrap();
        let sv = singular_values(&m);
        let rank = sv.iter().filter(|&&s| s > tol::RANK_REL_TOL * sv[0]).count();
        ranks_ok &= rank == 3;
        min_gap = min_gap.min(sv[2] / (tol::RANK_REL_TOL * sv[0]));
    }
    out.push(CheckResult::flag(
        SUITE,
        "translation-dilation jacobian has rank 3",
        ranks_ok && min_gap >= tol::RANK_SV_GAP,
        min_gap,
        tol::RANK_SV_GAP,
        "smallest kept singular value over the cut (gap, must exceed)",
    ));

    // rotation leaves the curvature field of the representation unchanged
    let rotated = act(&GroupElement::Rotate(0.7), &dom);
    let mut curv_err = 0.0f64;
    for j in 0..n {
        let s = dom.chart().base().param(j);
        curv_err = curv_err.max(
            (dom.chart().base().curvature(s) - rotated.chart().base().curvature(s)).abs(),
        );
    }
    out.push(CheckResult::gauge(
        SUITE,
        "rotation preserves the curvature field",
        curv_err,
        1e-10,
        "co-rotating parameterization",
    ));

    out
}
