//! Laplace-solver and normal-velocity checks: disk harmonics, spectral
//! convergence, equilibria, linearized decay rates, conservation, and
//! equivariance of the field under rigid motions and dilation.

use super::{tolerances as tol, CheckResult};
use crate::charts::{Chart, DomainRep};
use crate::fields::PeriodicScalarField;
use crate::geometry::{Collar, CurveSpec, ReferenceCurve};
use crate::groups::{act, reexpress, GroupElement};
use crate::heleshaw::{boundary_geometry, heleshaw_field, solve_dirichlet};
use std::f64::consts::TAU;

const SUITE: &str = "field";

fn disk_dom(radius: f64, center: [f64; 2], n: usize) -> DomainRep {
    let curve = ReferenceCurve::new(CurveSpec::Circle { center, radius, phase: 0.0 }, n).unwrap();
    DomainRep::new(
        Chart::new(Collar::new(curve, radius / 8.0).unwrap()),
        PeriodicScalarField::zeros(n),
    )
    .unwrap()
}

fn perturbed_disk(eps: f64, k: usize, n: usize) -> DomainRep {
    let curve = ReferenceCurve::new(
        CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0, phase: 0.0 },
        n,
    )
    .unwrap();
    DomainRep::in_collar(
        Chart::new(Collar::new(curve, 0.2).unwrap()),
        PeriodicScalarField::from_fn(n, |s| eps * (k as f64 * s).cos()),
    )
    .unwrap()
}

pub fn run(_seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();

    // disk harmonics at n = 128: ∂ₙ(r^k cos kθ) = k cos kθ
    let n = 128;
    let dom = disk_dom(1.0, [0.0, 0.0], n);
    let bd = boundary_geometry(&dom).unwrap();
    let mut worst_harm = 0.0f64;
    for k in 1..=5usize {
        let g = PeriodicScalarField::from_fn(n, |s| (k as f64 * s).cos());
        let vn = solve_dirichlet(&bd, &g).unwrap();
        for j in 0..n {
            let s = TAU * j as f64 / n as f64;
            worst_harm = worst_harm.max((vn.value(j) - k as f64 * (k as f64 * s).cos()).abs());
        }
    }
    out.push(CheckResult::gauge(
        SUITE,
        "disk harmonics k = 1..5",
        worst_harm,
        tol::DISK_HARMONIC_ABS,
        "max abs error at n = 128",
    ));

    // spectral convergence of the disk harmonic solve, with roundoff floor
    let disk_err = |n: usize| -> f64 {
        let dom = disk_dom(1.0, [0.0, 0.0], n);
        let bd = boundary_geometry(&dom).unwrap();
        let g = PeriodicScalarField::from_fn(n, |s| (5.0 * s).cos());
        let vn = solve_dirichlet(&bd, &g).unwrap();
        let mut e: f64 = 0.0;
        for j in 0..n {
            let s = TAU * j as f64 / n as f64;
            e = e.max((vn.value(j) - 5.0 * (5.0 * s).cos()).abs());
        }
        e
    };
    let mut conv_ok = true;
    let mut worst_ratio = 0.0f64;
    let mut prev = disk_err(32);
    for n in [64usize, 128, 256] {
        let e = disk_err(n);
        let bound = (tol::CONVERGENCE_FACTOR * prev).max(tol::CONVERGENCE_FLOOR);
        conv_ok &= e <= bound;
        worst_ratio = worst_ratio.max(e / bound);
        prev = e;
    }
    // genuine exponential decay on a non-circular analytic boundary
    let pert_err = |n: usize, vn_ref: &PeriodicScalarField, nref: usize| -> f64 {
        let vn = heleshaw_field(&perturbed_disk(0.08, 2, n)).unwrap();
        let mut e: f64 = 0.0;
        for j in 0..n {
            e = e.max((vn.value(j) - vn_ref.value(j * (nref / n))).abs());
        }
        e
    };
    let vn_ref = heleshaw_field(&perturbed_disk(0.08, 2, 256)).unwrap();
    let e32 = pert_err(32, &vn_ref, 256);
    let e64 = pert_err(64, &vn_ref, 256);
    conv_ok &= e64 <= (tol::CONVERGENCE_FACTOR * e32).max(2e-9) && e32 > 1e-9;
    out.push(CheckResult::flag(
        SUITE,
        "solver error decays spectrally under refinement",
        conv_ok,
        worst_ratio.max(e64 / (tol::CONVERGENCE_FACTOR * e32).max(2e-9)),
        1.0,
        "disk ladder 32..256 with roundoff floor, plus perturbed-disk ladder",
    ));

    // disks are equilibria
    let mut worst_eq = 0.0f64;
    for (r, c) in [(1.0, [0.0, 0.0]), (0.7, [0.3, 0.1]), (2.0, [0.0, -1.0])] {
        let vn = heleshaw_field(&disk_dom(r, c, 64)).unwrap();
        worst_eq = worst_eq.max(vn.max_abs());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "disks are equilibria",
        worst_eq,
        tol::EQUILIBRIUM_SPEED_ABS,
        "max normal speed",
    ));

    // linearized decay coefficients -k(k²-1) for k = 2, 3, 4
    let eps = 1e-3;
    let mut worst_rate = 0.0f64;
    for k in [2usize, 3, 4] {
        let vn = heleshaw_field(&perturbed_disk(eps, k, 256)).unwrap();
        let (a, _) = vn.mode(k);
        let expect = -(k as f64) * ((k * k) as f64 - 1.0) * eps;
        worst_rate = worst_rate.max((a - expect).abs() / expect.abs());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "mode decay coefficients match k(k^2-1)",
        worst_rate,
        tol::MODE_RATE_REL,
        "k = 2, 3, 4 at eps = 1e-3, n = 256",
    ));

    // k = 1 is the neutral translation mode
    let vn1 = heleshaw_field(&perturbed_disk(eps, 1, 256)).unwrap();
    let (a1, _) = vn1.mode(1);
    out.push(CheckResult::gauge(
        SUITE,
        "translation mode k = 1 is neutral",
        a1.abs(),
        50.0 * eps * eps,
        "second-order remainder only",
    ));

    // mass neutrality on every test domain
    let mut worst_mass = 0.0f64;
    for dom in [perturbed_disk(5e-3, 3, 128), perturbed_disk(0.05, 2, 128)] {
        let bd = boundary_geometry(&dom).unwrap();
        let vn = heleshaw_field(&dom).unwrap();
        worst_mass = worst_mass.max(bd.integrate(vn.values()).abs());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "normal speed integrates to zero",
        worst_mass,
        tol::MASS_NEUTRAL_ABS,
        "area conservation in differential form",
    ));

    // translation equivariance: the moved domain has the same speed samples
    let base = perturbed_disk(0.05, 3, 128);
    let vn0 = heleshaw_field(&base).unwrap();
    let moved = act(&GroupElement::Translate([0.37, -0.21]), &base);
    let vn_t = heleshaw_field(&moved).unwrap();
    out.push(CheckResult::gauge(
        SUITE,
        "translation equivariance of the field",
        (&vn_t - &vn0).max_abs(),
        tol::EQUIVARIANCE_ABS,
        "sample-by-sample",
    ));

    // rotation equivariance, both in co-rotating coordinates and as a
    // parameter shift after re-expression in the original chart
    let rotated = act(&GroupElement::Rotate(0.83), &base);
    let vn_r = heleshaw_field(&rotated).unwrap();
    let mut rot_err = (&vn_r - &vn0).max_abs();
    let k0 = 16usize; // shift by exactly 16 grid nodes
    let theta = TAU * k0 as f64 / 128.0;
    let back = reexpress(&GroupElement::Rotate(theta), &base).unwrap();
    let dom_back = DomainRep::in_collar(base.chart().clone(), back).unwrap();
    let vn_shifted = heleshaw_field(&dom_back).unwrap();
    for j in 0..128 {
        // the re-expressed graph is the original shifted by θ, so the
        // speed field shifts the same way
        rot_err = rot_err.max((vn_shifted.value(j) - vn0.value(j + 128 - k0)).abs());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "rotation equivariance of the field",
        rot_err,
        tol::EQUIVARIANCE_ABS,
        "co-rotating samples and re-expressed parameter shift",
    ));

    // dilation quasi-invariance: V(λΩ) = λ⁻² V(Ω) pointwise
    let mut dil_err = 0.0f64;
    for &l in &[0.5, 2.0] {
        let scaled = act(&GroupElement::Dilate(l), &base);
        let vn_l = heleshaw_field(&scaled).unwrap();
        for j in 0..128 {
            dil_err = dil_err.max((l * l * vn_l.value(j) - vn0.value(j)).abs());
        }
    }
    out.push(CheckResult::gauge(
        SUITE,
        "dilation rescales the field by the inverse square",
        dil_err,
        tol::EQUIVARIANCE_ABS,
        "lambda in {1/2, 2}",
    ));

    out
}
