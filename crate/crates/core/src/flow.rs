//! Time integration of the Hele-Shaw flow as an ODE on chart graphs, with
//! automatic re-anchoring onto the moving boundary.
//!
//! The boundary moves with normal speed `V_n`; constrained to the chart's
//! normal lines this gives `ρ̇(x) = V_n(θ_ρ(x)) / ⟨ν(θ_ρ(x)), n(x)⟩`.
//! The right-hand side is spectrally low-passed at a cutoff derived from
//! the step size (`(k/ℓ)³ dt` kept inside the explicit RK4 stability
//! interval, `ℓ` the local metric), since the field is a third-order
//! pseudodifferential operator and unfiltered roundoff in the top modes
//! would blow up within a few steps. When the graph fills its chart beyond
//! a configurable threshold, or a step leaves the chart, the state is
//! re-anchored onto a low-passed copy of its own boundary.

use crate::charts::{standard_chart, Chart, DomainRep};
use crate::error::{Error, Result};
use crate::fields::PeriodicScalarField;
use crate::geometry::hausdorff_distance;
use crate::heleshaw::{boundary_geometry, solve_dirichlet, BoundaryDiscretization, NormalVelocity};
use crate::spectral;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Real-axis stability interval of classical RK4.
const RK4_STABILITY: f64 = 2.785;

/// Smallest admissible rate cutoff: keeps enough modes that an over-large
/// step destabilizes (and surfaces as an admissibility error) instead of
/// silently freezing the dynamics.
const MIN_RATE_CUTOFF: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    #[default]
    Rk4,
    Euler,
}

/// Integration parameters. `dt` and `rate_cutoff` default to values derived
/// from the grid; see `FlowConfig::resolve`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlowConfig {
    #[serde(default)]
    pub dt: Option<f64>,
    pub t_end: f64,
    #[serde(default = "default_rechart_threshold")]
    pub rechart_threshold: f64,
    #[serde(default)]
    pub smoothing_cutoff: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default)]
    pub rate_cutoff: Option<usize>,
    #[serde(default = "default_safety")]
    pub safety: f64,
    #[serde(default = "default_snapshot_every")]
    pub snapshot_every: usize,
}

fn default_rechart_threshold() -> f64 {
    0.5
}

fn default_safety() -> f64 {
    0.5
}

fn default_snapshot_every() -> usize {
    10
}

impl FlowConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        FlowConfig {
            dt: Some(dt),
            t_end,
            rechart_threshold: default_rechart_threshold(),
            smoothing_cutoff: None,
            n: None,
            integrator: Integrator::Rk4,
            rate_cutoff: None,
            safety: default_safety(),
            snapshot_every: default_snapshot_every(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(Error::InvalidInput("dt must be positive".into()));
            }
        }
        if !(self.t_end > 0.0) {
            return Err(Error::InvalidInput("t_end must be positive".into()));
        }
        if !(self.rechart_threshold > 0.0 && self.rechart_threshold < 1.0) {
            return Err(Error::InvalidInput(
                "rechart_threshold must lie in (0, 1)".into(),
            ));
        }
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(Error::InvalidInput("safety must lie in (0, 1]".into()));
        }
        Ok(())
    }

    /// Step size: either the configured one or the value that keeps the
    /// default `n/4` mode band stable.
    pub fn resolve_dt(&self, dom: &DomainRep) -> f64 {
        if let Some(dt) = self.dt {
            return dt;
        }
        let metric = min_boundary_speed(dom);
        let k = (dom.n() / 4).max(MIN_RATE_CUTOFF) as f64;
        self.safety * RK4_STABILITY * (metric / k).powi(3)
    }

    fn resolve_cutoff(&self, dom: &DomainRep, dt: f64) -> usize {
        if let Some(k) = self.rate_cutoff {
            return k.max(1);
        }
        let metric = min_boundary_speed(dom);
        let k_stable = (metric * (self.safety * RK4_STABILITY / dt).powf(1.0 / 3.0)) as usize;
        k_stable.clamp(MIN_RATE_CUTOFF, (dom.n() / 3).max(MIN_RATE_CUTOFF))
    }

    fn smoothing_cutoff_for(&self, n: usize) -> usize {
        self.smoothing_cutoff.unwrap_or(n / 4)
    }
}

fn min_boundary_speed(dom: &DomainRep) -> f64 {
    dom.chart()
        .base()
        .sample_speeds()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// One point of the trajectory with its monitors.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub t: f64,
    pub dom: DomainRep,
    pub area: f64,
    pub perimeter: f64,
    pub max_speed: f64,
    pub c1_fill: f64,
    pub rechart_count: usize,
    /// largest boundary jump across any re-anchoring so far, relative to
    /// the chart scale at the event
    pub max_rechart_jump: f64,
    /// whether the step producing this state re-anchored
    pub recharted: bool,
}

/// Enclosed area from the spectral shoelace integral
/// `A = 1/2 ∮ (x y' - y x') ds`.
pub fn area(dom: &DomainRep) -> f64 {
    let pts = dom.boundary_samples();
    let n = pts.len();
    let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
    let dx = spectral::derivative(&xs, 1);
    let dy = spectral::derivative(&ys, 1);
    let mut acc = 0.0;
    for j in 0..n {
        acc += xs[j] * dy[j] - ys[j] * dx[j];
    }
    0.5 * acc * TAU / n as f64
}

/// Boundary length from the arclength quadrature.
pub fn perimeter(dom: &DomainRep) -> f64 {
    let pts = dom.boundary_samples();
    let n = pts.len();
    let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
    let dx = spectral::derivative(&xs, 1);
    let dy = spectral::derivative(&ys, 1);
    (0..n).map(|j| dx[j].hypot(dy[j])).sum::<f64>() * TAU / n as f64
}

/// Area centroid via the boundary form of `∬ x dA` (used by shape checks).
pub fn centroid(dom: &DomainRep) -> crate::geometry::Point {
    let pts = dom.boundary_samples();
    let n = pts.len();
    let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
    let dx = spectral::derivative(&xs, 1);
    let dy = spectral::derivative(&ys, 1);
    let mut a = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for j in 0..n {
        let w = xs[j] * dy[j] - ys[j] * dx[j];
        a += w;
        cx += (xs[j] * xs[j] + ys[j] * ys[j]).mul_add(0.0, xs[j] * w);
        cy += ys[j] * w;
    }
    // ∬ x dA = (1/3) ∮ x (x dy - y dx), same for y
    crate::geometry::Point::new(cx / (1.5 * a), cy / (1.5 * a))
}

/// Convert the intrinsic normal speed into the chart's time derivative:
/// `ρ̇(x) = V_n(θ_ρ(x)) / ⟨ν(θ_ρ(x)), n(x)⟩`.
///
/// Computes the boundary normals spectrally on its own; the cosine
/// precondition is the only gate here.
pub fn chart_rate(dom: &DomainRep, vn: &NormalVelocity) -> Result<PeriodicScalarField> {
    let pts = dom.boundary_samples();
    let n = pts.len();
    let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
    let dx = spectral::derivative(&xs, 1);
    let dy = spectral::derivative(&ys, 1);
    let normals: Vec<crate::geometry::Vec2> = (0..n)
        .map(|j| {
            let d1 = crate::geometry::Vec2::new(dx[j], dy[j]);
            crate::geometry::rot_minus_90(d1 / d1.norm())
        })
        .collect();
    chart_rate_inner(dom, &normals, vn)
}

fn chart_rate_with(
    dom: &DomainRep,
    bd: &BoundaryDiscretization,
    vn: &NormalVelocity,
) -> Result<PeriodicScalarField> {
    chart_rate_inner(dom, bd.normals(), vn)
}

fn chart_rate_inner(
    dom: &DomainRep,
    boundary_normals: &[crate::geometry::Vec2],
    vn: &NormalVelocity,
) -> Result<PeriodicScalarField> {
    let n = dom.n();
    if vn.n() != n {
        return Err(Error::InvalidInput(
            "normal velocity must be sampled on the chart grid".into(),
        ));
    }
    let base = dom.chart().base();
    let mut vals = Vec::with_capacity(n);
    for j in 0..n {
        let chart_normal = base.normal(base.param(j));
        let cosine = boundary_normals[j].dot(&chart_normal);
        if cosine < 0.1 {
            return Err(Error::ChartTangency {
                param: base.param(j),
                cosine,
            });
        }
        vals.push(vn.value(j) / cosine);
    }
    PeriodicScalarField::new(vals)
}

struct RateEval {
    rate: PeriodicScalarField,
    max_speed: f64,
}

fn eval_rate(chart: &Chart, rho: &PeriodicScalarField, cutoff: usize) -> Result<RateEval> {
    let dom = DomainRep::from_admissible(chart.clone(), rho.clone())?;
    let bd = boundary_geometry(&dom)?;
    let g = -&bd.curvature_field();
    let vn = solve_dirichlet(&bd, &g)?;
    let raw = chart_rate_with(&dom, &bd, &vn)?;
    let filtered = raw.lowpass(cutoff);

    // The enclosed area of a normal graph obeys exactly
    // dA/dt = ∮ ρ̇ (1 + ρκ) |γ'| ds, and (1 + ρκ)|γ'| = |c'| cos⟨ν, n⟩.
    // Truncating ρ̇ leaks through this form when the metric weight has
    // content above the cutoff, so project the filtered rate back onto the
    // area-neutral hyperplane with a uniform normal-speed shift.
    let base = dom.chart().base();
    let n = dom.n();
    let mut leak = 0.0;
    let mut total = 0.0;
    for j in 0..n {
        let chart_normal = base.normal(base.param(j));
        let cosine = bd.normals()[j].dot(&chart_normal);
        let w = bd.speed()[j] * cosine;
        leak += filtered.value(j) * w;
        total += w;
    }
    let correction = -leak / total;
    let rate = PeriodicScalarField::new(
        (0..n).map(|j| filtered.value(j) + correction).collect(),
    )?;
    Ok(RateEval {
        rate,
        max_speed: vn.max_abs(),
    })
}

/// One integrator step in the current chart. Every stage is evaluated in
/// that chart; leaving it surfaces as `NotInChart` for the caller to
/// handle by re-anchoring.
pub fn step(state: &FlowState, cfg: &FlowConfig) -> Result<FlowState> {
    let dt = cfg.resolve_dt(&state.dom);
    step_by(state, cfg, dt)
}

fn step_by(state: &FlowState, cfg: &FlowConfig, dt: f64) -> Result<FlowState> {
    cfg.validate()?;
    let chart = state.dom.chart().clone();
    let rho = state.dom.rho();
    let cutoff = cfg.resolve_cutoff(&state.dom, dt);

    let k1 = eval_rate(&chart, rho, cutoff)?;
    let rho_next = match cfg.integrator {
        Integrator::Euler => rho + &k1.rate.scaled(dt),
        Integrator::Rk4 => {
            let k2 = eval_rate(&chart, &(rho + &k1.rate.scaled(0.5 * dt)), cutoff)?;
            let k3 = eval_rate(&chart, &(rho + &k2.rate.scaled(0.5 * dt)), cutoff)?;
            let k4 = eval_rate(&chart, &(rho + &k3.rate.scaled(dt)), cutoff)?;
            let mut acc = k1.rate.clone();
            acc = &acc + &k2.rate.scaled(2.0);
            acc = &acc + &k3.rate.scaled(2.0);
            acc = &acc + &k4.rate;
            rho + &acc.scaled(dt / 6.0)
        }
    };
    let dom = DomainRep::from_admissible(chart, rho_next)?;
    let c1_fill = dom.c1_fill();
    Ok(FlowState {
        t: state.t + dt,
        area: area(&dom),
        perimeter: perimeter(&dom),
        max_speed: k1.max_speed,
        c1_fill,
        rechart_count: state.rechart_count,
        max_rechart_jump: state.max_rechart_jump,
        recharted: false,
        dom,
    })
}

/// Initial monitored state at `t = 0` (runs one field solve for the speed).
pub fn initial_state(dom: DomainRep) -> Result<FlowState> {
    let vn = crate::heleshaw::heleshaw_field(&dom)?;
    Ok(FlowState {
        t: 0.0,
        area: area(&dom),
        perimeter: perimeter(&dom),
        max_speed: vn.max_abs(),
        c1_fill: dom.c1_fill(),
        rechart_count: 0,
        max_rechart_jump: 0.0,
        recharted: false,
        dom,
    })
}

fn rechart(state: &mut FlowState, cfg: &FlowConfig) -> Result<()> {
    let before = state.dom.boundary_samples();
    let cutoff = cfg.smoothing_cutoff_for(state.dom.n());
    let re = standard_chart(&state.dom, cutoff).map_err(|e| Error::FlowAborted {
        t: state.t,
        source: Box::new(e),
    })?;
    let jump = hausdorff_distance(&before, &re.boundary_samples()) / re.scale();
    state.max_rechart_jump = state.max_rechart_jump.max(jump);
    state.rechart_count += 1;
    state.recharted = true;
    state.c1_fill = re.c1_fill();
    state.dom = re;
    Ok(())
}

/// Integrate to `cfg.t_end`, re-anchoring whenever the graph fills the
/// chart beyond `rechart_threshold` or a step rejects the chart. Snapshots
/// stream to `sink` every `snapshot_every` accepted steps (plus the initial
/// and final states).
pub fn simulate(
    dom0: DomainRep,
    cfg: &FlowConfig,
    sink: &mut dyn FnMut(&FlowState),
) -> Result<FlowState> {
    cfg.validate()?;
    let dom0 = match cfg.n {
        Some(n) if n != dom0.n() => {
            let curve = dom0.chart().base().resample(n)?;
            let chart = Chart::new(crate::geometry::Collar::new(curve, dom0.chart().delta())?);
            DomainRep::new(chart, dom0.rho().resample(n))?
        }
        _ => dom0,
    };
    let mut state = initial_state(dom0).map_err(|e| Error::FlowAborted {
        t: 0.0,
        source: Box::new(e),
    })?;
    sink(&state);

    let mut steps_since_snapshot = 0usize;
    while state.t < cfg.t_end - 1e-12 {
        if state.c1_fill > cfg.rechart_threshold {
            rechart(&mut state, cfg)?;
        }
        let dt_full = cfg.resolve_dt(&state.dom);
        let dt = dt_full.min(cfg.t_end - state.t);
        let next = match step_by(&state, cfg, dt) {
            Ok(next) => next,
            Err(Error::NotInChart { .. }) | Err(Error::ChartTangency { .. })
                if !state.recharted =>
            {
                // stage left the chart: re-anchor once and retry
                rechart(&mut state, cfg)?;
                step_by(&state, cfg, dt).map_err(|e| Error::FlowAborted {
                    t: state.t,
                    source: Box::new(e),
                })?
            }
            Err(e) => {
                return Err(Error::FlowAborted {
                    t: state.t,
                    source: Box::new(e),
                })
            }
        };
        let recharted_before_step = state.recharted;
        state = next;
        state.recharted = recharted_before_step;
        steps_since_snapshot += 1;
        if steps_since_snapshot >= cfg.snapshot_every || state.t >= cfg.t_end - 1e-12 {
            sink(&state);
            steps_since_snapshot = 0;
            state.recharted = false;
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Collar, CurveSpec, ReferenceCurve};
    use std::f64::consts::PI;

    fn disk_dom(n: usize) -> DomainRep {
        let curve = ReferenceCurve::new(
            CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0, phase: 0.0 },
            n,
        )
        .unwrap();
        DomainRep::new(
            Chart::new(Collar::new(curve, 0.2).unwrap()),
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
        DomainRep::new(
            Chart::new(Collar::new(curve, 0.2).unwrap()),
            PeriodicScalarField::from_fn(n, |s| eps * (k as f64 * s).cos()),
        )
        .unwrap()
    }

    #[test]
    fn area_and_perimeter_examples() {
        let dom = disk_dom(64);
        assert!((area(&dom) - PI).abs() < 1e-12);
        assert!((perimeter(&dom) - TAU).abs() < 1e-12);

        let curve = ReferenceCurve::new(
            CurveSpec::Circle { center: [0.3, -0.7], radius: 2.0, phase: 0.0 },
            64,
        )
        .unwrap();
        let dom2 = DomainRep::new(
            Chart::new(Collar::new(curve, 0.2).unwrap()),
            PeriodicScalarField::zeros(64),
        )
        .unwrap();
        assert!((area(&dom2) - 4.0 * PI).abs() < 1e-12);
        assert!((perimeter(&dom2) - 4.0 * PI).abs() < 1e-12);

        // polar area oracle: r = 1 + 0.1 cos 2θ has area π(1 + 0.1²/2)
        let dom3 = perturbed_disk(0.04, 2, 128);
        let expect = PI * (1.0 + 0.04f64.powi(2) / 2.0);
        assert!((area(&dom3) - expect).abs() < 1e-12);
    }

    #[test]
    fn centroid_of_shifted_disk() {
        let curve = ReferenceCurve::new(
            CurveSpec::Circle { center: [0.3, -0.1], radius: 1.0, phase: 0.0 },
            64,
        )
        .unwrap();
        let dom = DomainRep::new(
            Chart::new(Collar::new(curve, 0.2).unwrap()),
            PeriodicScalarField::zeros(64),
        )
        .unwrap();
        let c = centroid(&dom);
        assert!((c - crate::geometry::Point::new(0.3, -0.1)).norm() < 1e-12);
    }

    #[test]
    fn chart_rate_reduces_to_vn_on_reference() {
        let dom = disk_dom(64);
        let vn = PeriodicScalarField::from_fn(64, |s| 0.3 * (2.0 * s).cos());
        let rate = chart_rate(&dom, &vn).unwrap();
        for j in 0..64 {
            assert!((rate.value(j) - vn.value(j)).abs() < 1e-12);
        }
        let c = PeriodicScalarField::constant(64, 0.25);
        let rate_c = chart_rate(&dom, &c).unwrap();
        for j in 0..64 {
            assert!((rate_c.value(j) - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn chart_rate_matches_one_step_geometry() {
        // Oracle: move the whole boundary by ±h V ν, intersect the moved
        // (interpolated) curve with each chart normal line to recover the
        // moved graph heights, and difference centrally in h. The ellipse
        // base makes the chart and boundary normals genuinely different.
        let curve = ReferenceCurve::new(
            CurveSpec::Ellipse { center: [0.0, 0.0], a: 1.3, b: 1.0, angle: 0.0 },
            128,
        )
        .unwrap();
        let dom = DomainRep::new(
            Chart::with_default_delta(curve).unwrap(),
            PeriodicScalarField::from_fn(128, |s| 0.02 * (2.0 * s).cos()),
        )
        .unwrap();
        let bd = boundary_geometry(&dom).unwrap();
        let vn = PeriodicScalarField::from_fn(128, |s| 0.2 + 0.1 * (3.0 * s).cos());
        let rate = chart_rate(&dom, &vn).unwrap();
        let base = dom.chart().base();

        let moved_height = |h: f64, j: usize| -> f64 {
            let pts: Vec<crate::geometry::Point> = (0..128)
                .map(|i| bd.points()[i] + h * vn.value(i) * bd.normals()[i])
                .collect();
            let curve_moved = crate::geometry::SampledClosedCurve::from_points(&pts);
            let g = base.sample_points()[j];
            let tau = {
                let d = base.d1(base.param(j));
                d / d.norm()
            };
            let normal = crate::geometry::rot_minus_90(tau);
            // intersect moved curve with the normal line through γ(s_j)
            let mut sigma = base.param(j);
            for _ in 0..60 {
                let f = (curve_moved.eval(sigma) - g).dot(&tau);
                let fp = curve_moved.eval_d1(sigma).dot(&tau);
                let step = f / fp;
                sigma -= step;
                if step.abs() < 1e-14 {
                    break;
                }
            }
            (curve_moved.eval(sigma) - g).dot(&normal)
        };

        let h = 1e-5;
        for j in (0..128).step_by(11) {
            let fd = (moved_height(h, j) - moved_height(-h, j)) / (2.0 * h);
            let rel = (fd - rate.value(j)).abs() / rate.value(j).abs().max(1e-12);
            assert!(rel < 1e-6, "j = {j}: fd {fd:.10e} vs rate {:.10e}", rate.value(j));
        }
    }

    #[test]
    fn chart_tangency_detected() {
        // A deep polar graph r = 0.25 + 0.2 sin 8θ hugging the collar's
        // inner edge: where the radius is small relative to the slope the
        // boundary normal tilts past 84° from the radial chart normal
        // (min cos ≈ 0.093 < 0.1).
        let curve = ReferenceCurve::new(
            CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0, phase: 0.0 },
            512,
        )
        .unwrap();
        let chart = Chart::new(Collar::new(curve, 0.24).unwrap());
        let rho = PeriodicScalarField::from_fn(512, |s| -0.75 + 0.2 * (8.0 * s).sin());
        let dom = DomainRep::in_collar(chart, rho).unwrap();
        let vn = PeriodicScalarField::constant(512, 1.0);
        match chart_rate(&dom, &vn) {
            Err(Error::ChartTangency { cosine, .. }) => assert!(cosine < 0.1),
            other => panic!("expected tangency, got {other:?}"),
        }
    }

    #[test]
    fn disk_is_stationary() {
        let dom = disk_dom(64);
        let cfg = FlowConfig::new(1e-3, 1.0);
        let state0 = initial_state(dom.clone()).unwrap();
        let state1 = step(&state0, &cfg).unwrap();
        let d = hausdorff_distance(&dom.boundary_samples(), &state1.dom.boundary_samples());
        assert!(d < 1e-8, "one step moved the disk by {d:.2e}");
        let final_state = simulate(dom.clone(), &cfg, &mut |_| {}).unwrap();
        let d = hausdorff_distance(&dom.boundary_samples(), &final_state.dom.boundary_samples());
        assert!(d < 1e-6, "disk drifted {d:.2e} over the unit horizon");
    }

    #[test]
    fn one_step_decay_matches_linear_rate() {
        let eps = 1e-3;
        let dt = 1e-4;
        let dom = perturbed_disk(eps, 2, 128);
        let cfg = FlowConfig::new(dt, 1.0);
        let state0 = initial_state(dom).unwrap();
        let state1 = step(&state0, &cfg).unwrap();
        let (a0, _) = state0.dom.rho().mode(2);
        let (a1, _) = state1.dom.rho().mode(2);
        let expect = a0 * (-6.0 * dt).exp();
        assert!(
            (a1 - expect).abs() < 20.0 * eps * eps * dt + 1e-12,
            "a1 = {a1:.9e}, expected {expect:.9e}"
        );
    }

    #[test]
    fn huge_step_surfaces_as_chart_error() {
        let dom = perturbed_disk(5e-3, 3, 64);
        let cfg = FlowConfig::new(0.5, 1.0);
        let state0 = initial_state(dom).unwrap();
        match step(&state0, &cfg) {
            Err(Error::NotInChart { .. }) | Err(Error::DegenerateCurve(_)) => {}
            Ok(_) => panic!("a CFL-violating step must not silently succeed"),
            Err(e) => panic!("unexpected error {e:?}"),
        }
    }

    #[test]
    fn rk4_order_on_perturbed_disk() {
        // fixed rate cutoff so all step sizes integrate the same field
        let dom = perturbed_disk(0.01, 2, 64);
        let mut cfg = FlowConfig::new(2e-3, 1.0);
        cfg.rate_cutoff = Some(8);
        let state0 = initial_state(dom).unwrap();
        let advance = |dt: f64, steps: usize| -> PeriodicScalarField {
            let mut cfg_local = cfg.clone();
            cfg_local.dt = Some(dt);
            let mut s = state0.clone();
            for _ in 0..steps {
                s = step(&s, &cfg_local).unwrap();
            }
            s.dom.rho().clone()
        };
        let coarse = advance(2e-3, 1);
        let half = advance(1e-3, 2);
        let reference = advance(2e-3 / 16.0, 16);
        let e_coarse = (&coarse - &reference).max_abs();
        let e_half = (&half - &reference).max_abs();
        assert!(
            e_half * 12.0 <= e_coarse,
            "order check: e(dt) = {e_coarse:.3e}, e(dt/2) = {e_half:.3e}"
        );
    }

    #[test]
    fn simulate_decay_and_conservation_short() {
        // short version of the long-horizon acceptance run
        let dom = perturbed_disk(0.01, 2, 128);
        let cfg = FlowConfig::new(1e-3, 0.1);
        let mut amps: Vec<(f64, f64)> = Vec::new();
        let final_state = simulate(dom, &cfg, &mut |st| {
            let (a, _) = st.dom.rho().mode(2);
            amps.push((st.t, a.abs()));
        })
        .unwrap();
        let a0 = area(&perturbed_disk(0.01, 2, 128));
        assert!((final_state.area - a0).abs() / a0 < 1e-6);
        // fitted decay rate over the snapshots
        let rate = fit_log_slope(&amps);
        assert!((rate + 6.0).abs() < 0.12, "fitted rate {rate:.4}");
    }

    pub(super) fn fit_log_slope(series: &[(f64, f64)]) -> f64 {
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
}
