//! Chart-transition checks: randomized round trips, boundary consistency,
//! derivative formula vs. finite differences, the chain rule through an
//! intermediate chart, and the dual projector-operator assembly of the
//! standard-chart derivative.

use super::{tolerances as tol, CheckResult};
use crate::charts::{standard_chart, transition, transition_derivative, Chart, DomainRep};
use crate::fields::PeriodicScalarField;
use crate::geometry::{hausdorff_distance, rot_minus_90, CurveSpec, ReferenceCurve};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

const SUITE: &str = "charts";

/// Exact cartesian fourier coefficients of the polar curve
/// `r(θ) = r0 + Σ_k (a_k cos kθ + b_k sin kθ)` around `center`.
pub fn polar_spec(center: [f64; 2], r0: f64, harmonics: &[(usize, f64, f64)]) -> CurveSpec {
    let kmax = harmonics.iter().map(|h| h.0).max().unwrap_or(0) + 1;
    let mut ax = vec![0.0; kmax + 2];
    let mut bx = vec![0.0; kmax + 2];
    let mut ay = vec![0.0; kmax + 2];
    let mut by = vec![0.0; kmax + 2];
    ax[0] = center[0];
    ay[0] = center[1];
    ax[1] += r0;
    by[1] += r0;
    for &(k, a, b) in harmonics {
        // cos kθ cos θ = ½[cos(k-1)θ + cos(k+1)θ], etc.
        let lo = k - 1;
        let hi = k + 1;
        ax[hi] += 0.5 * a;
        bx[hi] += 0.5 * b;
        by[hi] += 0.5 * a;
        ay[hi] -= 0.5 * b;
        if lo == 0 {
            ax[0] += 0.5 * a; // cos 0 = 1
            ay[0] += 0.5 * b;
        } else {
            ax[lo] += 0.5 * a;
            bx[lo] += 0.5 * b;
            by[lo] -= 0.5 * a;
            ay[lo] += 0.5 * b;
        }
    }
    let interleave = |a: &[f64], b: &[f64]| {
        let mut v = vec![a[0]];
        for k in 1..a.len() {
            v.push(a[k]);
            v.push(b[k]);
        }
        v
    };
    CurveSpec::Fourier {
        cx: interleave(&ax, &bx),
        cy: interleave(&ay, &by),
    }
}

struct PairConfig {
    dom: DomainRep,
    chart2: Chart,
    zeta: PeriodicScalarField,
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> PairConfig {
    let center1 = [rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05)];
    let r1 = rng.random_range(0.9..1.1);
    let h1: Vec<(usize, f64, f64)> = (2..4)
        .map(|k| (k, rng.random_range(-0.015..0.015), rng.random_range(-0.015..0.015)))
        .collect();
    let base1 = ReferenceCurve::new(polar_spec(center1, r1, &h1), n).unwrap();
    let chart1 = Chart::with_default_delta(base1).unwrap();

    let amp = rng.random_range(0.002..0.01);
    let mode = rng.random_range(1..=3) as f64;
    let phase = rng.random_range(0.0..TAU);
    let rho = PeriodicScalarField::from_fn(n, |s| amp * (mode * s + phase).cos());
    let dom = DomainRep::new(chart1, rho).unwrap();

    let center2 = [
        center1[0] + rng.random_range(-0.02..0.02),
        center1[1] + rng.random_range(-0.02..0.02),
    ];
    let r2 = r1 + rng.random_range(-0.02..0.02);
    let h2: Vec<(usize, f64, f64)> = (2..4)
        .map(|k| (k, rng.random_range(-0.01..0.01), rng.random_range(-0.01..0.01)))
        .collect();
    let base2 = ReferenceCurve::new(polar_spec(center2, r2, &h2), n).unwrap();
    let chart2 = Chart::with_default_delta(base2).unwrap();

    let zmode = rng.random_range(1..=3) as f64;
    let zphase = rng.random_range(0.0..TAU);
    let zeta = PeriodicScalarField::from_fn(n, |s| (zmode * s + zphase).cos());
    PairConfig { dom, chart2, zeta }
}

pub fn run(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 64;

    // 50 randomized overlapping chart pairs: round trip and consistency
    let mut worst_rt = 0.0f64;
    let mut worst_hd = 0.0f64;
    for _ in 0..50 {
        let cfg = random_pair(&mut rng, n);
        let scale = cfg.dom.scale();
        let rho2 = transition(&cfg.dom, &cfg.chart2).unwrap();
        let dom2 = DomainRep::in_collar(cfg.chart2.clone(), rho2).unwrap();
        let back = transition(&dom2, cfg.dom.chart()).unwrap();
        worst_rt = worst_rt.max((&back - cfg.dom.rho()).max_abs());
        let hd = hausdorff_distance(&cfg.dom.boundary_samples(), &dom2.boundary_samples());
        worst_hd = worst_hd.max(hd / scale);
    }
    out.push(CheckResult::gauge(
        SUITE,
        "transition round trip (50 random pairs)",
        worst_rt,
        tol::TRANSITION_ROUND_TRIP_C0,
        "C0 error",
    ));
    out.push(CheckResult::gauge(
        SUITE,
        "boundary set consistency across transition",
        worst_hd,
        tol::BOUNDARY_HAUSDORFF_REL,
        "two-sided Hausdorff / scale",
    ));

    // derivative vs. central differences on 20 random configurations
    let mut worst_fd = 0.0f64;
    for _ in 0..20 {
        let cfg = random_pair(&mut rng, n);
        let formula = transition_derivative(&cfg.dom, &cfg.chart2, &cfg.zeta).unwrap();
        let mut best = f64::INFINITY;
        for &h in &[1e-4, 1e-5, 1e-6] {
            let chart1 = cfg.dom.chart().clone();
            let plus = transition(
                &DomainRep::in_collar(chart1.clone(), cfg.dom.rho() + &cfg.zeta.scaled(h)).unwrap(),
                &cfg.chart2,
            )
            .unwrap();
            let minus = transition(
                &DomainRep::in_collar(chart1, cfg.dom.rho() - &cfg.zeta.scaled(h)).unwrap(),
                &cfg.chart2,
            )
            .unwrap();
            let fd = (&plus - &minus).scaled(0.5 / h);
            best = best.min((&fd - &formula).max_abs() / formula.max_abs());
        }
        worst_fd = worst_fd.max(best);
    }
    out.push(CheckResult::gauge(
        SUITE,
        "transition derivative vs finite differences",
        worst_fd,
        tol::TRANSITION_DERIVATIVE_REL,
        "20 random configs, h-sweep",
    ));

    // chain rule through an intermediate chart
    let mut worst_chain = 0.0f64;
    for _ in 0..8 {
        let cfg = random_pair(&mut rng, n);
        let chart3 = {
            let c3 = [rng.random_range(-0.03..0.03), rng.random_range(-0.03..0.03)];
            let r3 = rng.random_range(0.95..1.05);
            Chart::with_default_delta(
                ReferenceCurve::new(polar_spec(c3, r3, &[(2, 0.01, -0.005)]), n).unwrap(),
            )
            .unwrap()
        };
        let direct = transition_derivative(&cfg.dom, &chart3, &cfg.zeta).unwrap();
        let rho2 = transition(&cfg.dom, &cfg.chart2).unwrap();
        let dom2 = DomainRep::in_collar(cfg.chart2.clone(), rho2).unwrap();
        let w12 = transition_derivative(&cfg.dom, &cfg.chart2, &cfg.zeta).unwrap();
        let composed = transition_derivative(&dom2, &chart3, &w12).unwrap();
        worst_chain = worst_chain.max((&composed - &direct).max_abs() / direct.max_abs());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "derivative chain rule through middle chart",
        worst_chain,
        tol::CHAIN_RULE_REL,
        "relative",
    ));

    // standard-chart derivative at ρ = 0 vs the projector-operator assembly
    let mut worst_proj = 0.0f64;
    for k in [2usize, 3] {
        let s_chart = Chart::with_default_delta(
            ReferenceCurve::new(
                CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0, phase: 0.0 },
                n,
            )
            .unwrap(),
        )
        .unwrap();
        let rho0 = PeriodicScalarField::from_fn(n, |s| 0.02 * (k as f64 * s).cos());
        let dom = DomainRep::new(s_chart.clone(), rho0).unwrap();
        let std_dom = standard_chart(&dom, n / 2).unwrap();
        let zeta = PeriodicScalarField::from_fn(n, |s| ((k + 1) as f64 * s).sin() + 0.3);
        let formula = transition_derivative(&std_dom, &s_chart, &zeta).unwrap();
        let projector = projector_route(&std_dom, &s_chart, &zeta);
        worst_proj = worst_proj.max((&formula - &projector).max_abs());
    }
    out.push(CheckResult::gauge(
        SUITE,
        "standard-chart derivative vs projector assembly",
        worst_proj,
        tol::PROJECTOR_ROUTE_ABS,
        "absolute on circle configs",
    ));

    out
}

/// Independent assembly of the transition derivative out of a standard
/// chart (graph value zero) into a regular chart, from the nearest-point
/// projection derivative written with explicit projector operators:
/// `v(x) = -⟨A⁻¹ B ζ, n(x)⟩ + ζ(y) ⟨ν(y), n(x)⟩` where `A = Π'(I - ννᵀ)`
/// on the boundary tangent and `B ζ = Π'(ζ ν)`.
fn projector_route(
    std_dom: &DomainRep,
    s_chart: &Chart,
    zeta: &PeriodicScalarField,
) -> PeriodicScalarField {
    let gamma = std_dom.chart().base(); // the domain's own boundary curve
    let s_curve = s_chart.base();
    let n = s_curve.n();
    let zi = zeta.interpolant();

    let mut vals = Vec::with_capacity(n);
    for j in 0..n {
        let sj = s_curve.param(j);
        let x = s_curve.sample_points()[j];
        let fs = s_curve.frame(sj).unwrap();

        // y ∈ Γ with Π_S(y) = x: Newton on ⟨γ_Γ(u) - x, τ_S⟩ = 0
        let mut u = {
            let mut best = 0usize;
            let mut dbest = f64::INFINITY;
            for (i, p) in gamma.sample_points().iter().enumerate() {
                let d = (p - x).norm_squared();
                if d < dbest {
                    dbest = d;
                    best = i;
                }
            }
            gamma.param(best)
        };
        for _ in 0..50 {
            let f = (gamma.point(u) - x).dot(&fs.tangent);
            let fp = gamma.d1(u).dot(&fs.tangent);
            let step = f / fp;
            u -= step;
            if step.abs() < 1e-14 {
                break;
            }
        }
        let y = gamma.point(u);
        let t_gamma = {
            let d = gamma.d1(u);
            d / d.norm()
        };
        let nu = rot_minus_90(t_gamma);
        let lambda = (y - x).dot(&fs.normal);
        let metric = 1.0 + lambda * fs.curvature;
        // Π'(y) v = τ_S ⟨v, τ_S⟩ / (1 + λ κ_S)
        let pi_prime = |v: crate::geometry::Vec2| fs.tangent * (v.dot(&fs.tangent) / metric);
        let tangential = t_gamma - nu * t_gamma.dot(&nu);
        let alpha = pi_prime(tangential).dot(&fs.tangent);
        let beta_vec = pi_prime(nu * nu.dot(&nu));
        let beta = beta_vec.dot(&fs.tangent);
        let z = zi.eval(u);
        let a_inv_b = t_gamma * (beta / alpha * z);
        vals.push(-a_inv_b.dot(&fs.normal) + z * nu.dot(&fs.normal));
    }
    PeriodicScalarField::new(vals).unwrap()
}
