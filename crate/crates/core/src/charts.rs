//! Chart representations of domains over reference curves: admissibility,
//! the chart-transition operator with its directional derivative, and
//! re-anchoring onto a domain's own boundary (standard charts).
//!
//! A domain is stored as `(chart, ρ)` with boundary `{γ(s) + ρ(s) n(s)}`.
//! Re-expressing the same boundary over another base curve solves, per
//! target node `y = γ₂(t)`, the scalar equation
//! `⟨γ₁(u) + ρ₁(u) n₁(u) - y, τ₂(t)⟩ = 0` by Newton iteration, then reads
//! off `ρ₂(t) = ⟨χ - y, n₂⟩ + ρ₁(χ) ⟨n₁(χ), n₂⟩` at the solved foot `χ`.

use crate::error::{Error, Result};
use crate::fields::{HolderIndex, PeriodicScalarField};
use crate::geometry::{polygon_is_simple, Collar, Point, ReferenceCurve, Vec2};
use crate::spectral;
use std::f64::consts::TAU;

/// A collar over a base curve, viewed as a coordinate patch for nearby
/// domains: representable graphs satisfy `‖ρ‖_{C¹} < δ`.
#[derive(Clone, Debug)]
pub struct Chart {
    collar: Collar,
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.collar.curve() == other.collar.curve() && self.collar.delta() == other.collar.delta()
    }
}

impl Chart {
    pub fn new(collar: Collar) -> Self {
        Chart { collar }
    }

    /// Chart over `curve` with the default collar half-width `reach / 8`.
    pub fn with_default_delta(curve: ReferenceCurve) -> Result<Self> {
        Ok(Chart::new(Collar::with_default_delta(curve)?))
    }

    pub fn collar(&self) -> &Collar {
        &self.collar
    }

    pub fn base(&self) -> &ReferenceCurve {
        self.collar.curve()
    }

    pub fn delta(&self) -> f64 {
        self.collar.delta()
    }

    pub fn n(&self) -> usize {
        self.base().n()
    }
}

/// Diagnostics returned alongside every admissibility decision.
#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub c1_norm: f64,
    pub delta: f64,
    pub min_offset_regularity: f64,
    pub simple: bool,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.c1_norm < self.delta && self.min_offset_regularity > 0.0 && self.simple
    }
}

/// Check whether `ρ` is an admissible graph over the chart base:
/// `‖ρ‖_{C¹} < δ` and the offset curve is regular and simple.
pub fn is_admissible(chart: &Chart, rho: &PeriodicScalarField) -> Result<(bool, AdmissibilityReport)> {
    let curve = chart.base();
    let c1_norm = rho.holder_norm(curve, HolderIndex::new(1, 0.0))?;
    let pts = offset_samples(curve, rho);
    let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
    let dx = spectral::derivative(&xs, 1);
    let dy = spectral::derivative(&ys, 1);
    let mut min_reg = f64::INFINITY;
    for j in 0..pts.len() {
        min_reg = min_reg.min(dx[j].hypot(dy[j]));
    }
    let threshold = 1e-12 * curve.scale();
    let min_offset_regularity = if min_reg > threshold { min_reg } else { 0.0 };
    let simple = polygon_is_simple(&pts);
    let report = AdmissibilityReport {
        c1_norm,
        delta: chart.delta(),
        min_offset_regularity,
        simple,
    };
    Ok((report.admissible(), report))
}

fn offset_samples(curve: &ReferenceCurve, rho: &PeriodicScalarField) -> Vec<Point> {
    let n = curve.n();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let p = curve.sample_points()[j];
        let normal = {
            let d1 = curve.d1(curve.param(j));
            crate::geometry::rot_minus_90(d1 / d1.norm())
        };
        out.push(p + rho.value(j) * normal);
    }
    out
}

/// A point of the manifold: a chart together with an admissible graph `ρ`.
#[derive(Clone, Debug)]
pub struct DomainRep {
    chart: Chart,
    rho: PeriodicScalarField,
}

impl DomainRep {
    /// Validating constructor: admissibility plus the sampled simplicity test.
    pub fn new(chart: Chart, rho: PeriodicScalarField) -> Result<Self> {
        if rho.n() != chart.n() {
            return Err(Error::InvalidInput(format!(
                "rho has {} samples, chart base has {}",
                rho.n(),
                chart.n()
            )));
        }
        let (ok, report) = is_admissible(&chart, &rho)?;
        if !ok {
            return Err(Error::NotInChart {
                param: 0.0,
                reason: format!(
                    "not admissible: C1 norm {:.6e} vs delta {:.6e}, offset regularity {:.3e}, simple = {}",
                    report.c1_norm, report.delta, report.min_offset_regularity, report.simple
                ),
            });
        }
        Ok(DomainRep { chart, rho })
    }

    /// Constructor for exact representation transforms (group actions):
    /// callers guarantee geometric validity.
    pub(crate) fn new_unchecked(chart: Chart, rho: PeriodicScalarField) -> Self {
        DomainRep { chart, rho }
    }

    /// Relaxed constructor: requires the graph to stay inside the collar
    /// (`max|ρ| < 4δ`) with a regular simple offset curve, without the
    /// strict `C¹ < δ` chart bound. Suitable for boundaries produced by
    /// group motions or full-collar transitions.
    pub fn in_collar(chart: Chart, rho: PeriodicScalarField) -> Result<Self> {
        if rho.n() != chart.n() {
            return Err(Error::InvalidInput(format!(
                "rho has {} samples, chart base has {}",
                rho.n(),
                chart.n()
            )));
        }
        if rho.max_abs() >= 4.0 * chart.delta() {
            return Err(Error::NotInChart {
                param: 0.0,
                reason: format!(
                    "max|rho| = {:.6e} exceeds collar width {:.6e}",
                    rho.max_abs(),
                    4.0 * chart.delta()
                ),
            });
        }
        let (_, report) = is_admissible(&chart, &rho)?;
        if report.min_offset_regularity <= 0.0 || !report.simple {
            return Err(Error::NotInChart {
                param: 0.0,
                reason: format!(
                    "offset curve degenerate: regularity {:.3e}, simple = {}",
                    report.min_offset_regularity, report.simple
                ),
            });
        }
        Ok(DomainRep { chart, rho })
    }

    /// Fast-path constructor for integrator stages: checks the `C¹ < δ`
    /// admissibility bound only. Within a valid collar that bound already
    /// forces the offset graph to be an embedded simple curve, so the
    /// O(n²) segment test is skipped.
    pub fn from_admissible(chart: Chart, rho: PeriodicScalarField) -> Result<Self> {
        if rho.n() != chart.n() {
            return Err(Error::InvalidInput(format!(
                "rho has {} samples, chart base has {}",
                rho.n(),
                chart.n()
            )));
        }
        let c1 = rho.holder_norm(chart.base(), HolderIndex::new(1, 0.0))?;
        if !(c1 < chart.delta()) {
            return Err(Error::NotInChart {
                param: 0.0,
                reason: format!("C1 norm {:.6e} exceeds delta {:.6e}", c1, chart.delta()),
            });
        }
        Ok(DomainRep { chart, rho })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rho(&self) -> &PeriodicScalarField {
        &self.rho
    }

    pub fn into_parts(self) -> (Chart, PeriodicScalarField) {
        (self.chart, self.rho)
    }

    pub fn n(&self) -> usize {
        self.chart.n()
    }

    pub fn scale(&self) -> f64 {
        self.chart.base().scale()
    }

    /// `θ_ρ(γ(s)) = γ(s) + ρ(s) n(s)`.
    pub fn boundary_point(&self, s: f64) -> Point {
        let curve = self.chart.base();
        let d1 = curve.d1(s);
        let normal = crate::geometry::rot_minus_90(d1 / d1.norm());
        curve.point(s) + self.rho.eval(s) * normal
    }

    /// Boundary at the chart's own sample parameters.
    pub fn boundary_samples(&self) -> Vec<Point> {
        offset_samples(self.chart.base(), &self.rho)
    }

    /// `‖ρ‖_{C¹} / δ`: how much of the chart's room the graph uses.
    pub fn c1_fill(&self) -> f64 {
        self.rho
            .holder_norm(self.chart.base(), HolderIndex::new(1, 0.0))
            .map(|c1| c1 / self.chart.delta())
            .unwrap_or(f64::INFINITY)
    }
}

/// Outcome of the per-node transition solve, kept for derivative assembly.
struct TransitionFoot {
    /// target parameter on the destination base
    t: f64,
    /// solved source parameter (the foot χ)
    u: f64,
    /// destination graph value at `t`
    rho2: f64,
}

const NEWTON_MAX_ITER: usize = 50;

fn solve_feet(src: &DomainRep, dst_chart: &Chart) -> Result<Vec<TransitionFoot>> {
    let s1 = src.chart.base();
    let s2 = dst_chart.base();
    let scale = s1.scale().max(s2.scale());
    let tol = 1e-12 * scale;
    let rho_i = src.rho.interpolant();
    let boundary = src.boundary_samples();

    // Every boundary sample must lie inside the destination collar.
    for (j, b) in boundary.iter().enumerate() {
        dst_chart.collar().project(*b).map_err(|e| Error::NotInChart {
            param: s1.param(j),
            reason: format!("boundary sample outside destination collar: {e}"),
        })?;
    }

    let offset_point = |u: f64| -> (Point, Vec2, f64, f64, f64) {
        // returns (P(u), P'(u), rho, rho', kappa) on the source base
        let d1 = s1.d1(u);
        let speed = d1.norm();
        let tangent = d1 / speed;
        let normal = crate::geometry::rot_minus_90(tangent);
        let kappa = crate::geometry::cross(d1, s1.d2(u)) / speed.powi(3);
        let r = rho_i.eval(u);
        let rp = rho_i.eval_d1(u);
        let p = s1.point(u) + r * normal;
        // n'(s) = κ γ'(s), so P' = (1 + ρκ) γ' + ρ' n
        let dp = (1.0 + r * kappa) * d1 + rp * normal;
        (p, dp, r, rp, kappa)
    };

    let mut feet = Vec::with_capacity(s2.n());
    for j in 0..s2.n() {
        let t = s2.param(j);
        let y = s2.sample_points()[j];
        let d2t = s2.d1(t);
        let tau2 = d2t / d2t.norm();
        let n2 = crate::geometry::rot_minus_90(tau2);

        // Newton initialization: the nearest source boundary samples to y.
        let mut order: Vec<usize> = (0..boundary.len()).collect();
        order.sort_by(|&a, &b| {
            (boundary[a] - y)
                .norm_squared()
                .partial_cmp(&(boundary[b] - y).norm_squared())
                .unwrap()
        });

        let mut solved = None;
        for &cand in order.iter().take(3) {
            let mut u = s1.param(cand);
            for _ in 0..NEWTON_MAX_ITER {
                let (p, dp, _, _, _) = offset_point(u);
                let g = (p - y).dot(&tau2);
                let gp = dp.dot(&tau2);
                if gp.abs() < 1e-300 {
                    break;
                }
                let step = g / gp;
                u -= step;
                if g.abs() < tol && step.abs() < 1e-10 {
                    solved = Some(u.rem_euclid(TAU));
                    break;
                }
            }
            if solved.is_some() {
                break;
            }
        }
        let u = solved.ok_or_else(|| {
            Error::NewtonFailure(format!(
                "transition foot search did not converge at target parameter {t:.6}"
            ))
        })?;

        let (p, _, r, _, _) = offset_point(u);
        let chi = s1.point(u);
        let n1 = s1.normal(u);
        let rho2 = (chi - y).dot(&n2) + r * n1.dot(&n2);
        debug_assert!(((p - y).dot(&n2) - rho2).abs() < 1e-9 * scale);
        if rho2.abs() >= 4.0 * dst_chart.delta() {
            return Err(Error::NotInChart {
                param: t,
                reason: format!(
                    "graph value {rho2:.6e} outside collar width {:.6e}",
                    4.0 * dst_chart.delta()
                ),
            });
        }
        feet.push(TransitionFoot { t, u, rho2 });
    }
    Ok(feet)
}

/// Re-express `src` as a graph over `dst_chart`'s base curve.
///
/// Every foot must land inside the destination collar (`|ρ₂| < 4δ`) and the
/// resulting graph must be a regular simple curve. The strict `‖ρ‖_{C¹} < δ`
/// bound is NOT enforced here: re-expressions of moved domains (group
/// actions) legitimately use the full collar; `DomainRep::new` applies the
/// strict bound where a manifold point is required.
pub fn transition(src: &DomainRep, dst_chart: &Chart) -> Result<PeriodicScalarField> {
    let feet = solve_feet(src, dst_chart)?;
    let rho2 = PeriodicScalarField::new(feet.iter().map(|f| f.rho2).collect())?;
    let (_, report) = is_admissible(dst_chart, &rho2)?;
    if report.min_offset_regularity <= 0.0 || !report.simple {
        return Err(Error::NotInChart {
            param: 0.0,
            reason: format!(
                "transition result degenerate: offset regularity {:.3e}, simple = {}",
                report.min_offset_regularity, report.simple
            ),
        });
    }
    Ok(rho2)
}

/// Re-express `src` in `dst_chart` and wrap the result as a domain.
pub fn transition_domain(src: &DomainRep, dst_chart: &Chart) -> Result<DomainRep> {
    let rho2 = transition(src, dst_chart)?;
    DomainRep::new(dst_chart.clone(), rho2)
}

/// Directional derivative of the transition map at `src.rho` in direction
/// `zeta`, assembled from the linearized foot equation:
/// `∂_ρχ ζ = -(∂_x G)⁻¹ ∂_ρ G ζ` reduces on curves to the scalar
/// `δu = -ζ(u) ⟨n₁(u), τ₂(t)⟩ / ⟨P'(u), τ₂(t)⟩`, and
/// `(Dσ ζ)(t) = δu (1 + ρκ₁) ⟨γ₁'(u), n₂⟩ + (ρ₁'(u) δu + ζ(u)) ⟨n₁, n₂⟩`.
pub fn transition_derivative(
    src: &DomainRep,
    dst_chart: &Chart,
    zeta: &PeriodicScalarField,
) -> Result<PeriodicScalarField> {
    if zeta.n() != src.n() {
        return Err(Error::InvalidInput(
            "direction field must live on the source chart grid".into(),
        ));
    }
    let feet = solve_feet(src, dst_chart)?;
    let s1 = src.chart.base();
    let s2 = dst_chart.base();
    let rho_i = src.rho.interpolant();
    let zeta_i = zeta.interpolant();

    let mut out = Vec::with_capacity(feet.len());
    for foot in &feet {
        let u = foot.u;
        let d1 = s1.d1(u);
        let speed = d1.norm();
        let tangent = d1 / speed;
        let n1 = crate::geometry::rot_minus_90(tangent);
        let kappa1 = crate::geometry::cross(d1, s1.d2(u)) / speed.powi(3);
        let r = rho_i.eval(u);
        let rp = rho_i.eval_d1(u);
        let z = zeta_i.eval(u);

        let d2t = s2.d1(foot.t);
        let tau2 = d2t / d2t.norm();
        let n2 = crate::geometry::rot_minus_90(tau2);

        let dp = (1.0 + r * kappa1) * d1 + rp * n1;
        let denom = dp.dot(&tau2);
        if denom.abs() < 1e-8 * dp.norm() {
            return Err(Error::SingularLinearization {
                param: foot.t,
                value: denom.abs(),
            });
        }
        let du = -z * n1.dot(&tau2) / denom;
        let val = du * (1.0 + r * kappa1) * d1.dot(&n2) + (rp * du + z) * n1.dot(&n2);
        out.push(val);
    }
    PeriodicScalarField::new(out)
}

/// Build the chart anchored on the domain's own (optionally low-passed)
/// boundary and re-express the domain in it. With `smoothing_cutoff >=`
/// the boundary bandwidth the new graph is zero up to solver tolerance;
/// otherwise it carries the filtered-out remainder.
pub fn standard_chart(dom: &DomainRep, smoothing_cutoff: usize) -> Result<DomainRep> {
    let pts = dom.boundary_samples();
    let n = pts.len();
    let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
    let mut x_series = spectral::TrigSeries::from_samples(&xs);
    let mut y_series = spectral::TrigSeries::from_samples(&ys);
    if smoothing_cutoff < n / 2 {
        for k in (smoothing_cutoff + 1)..=(n / 2) {
            x_series.a[k] = 0.0;
            x_series.b[k] = 0.0;
            y_series.a[k] = 0.0;
            y_series.b[k] = 0.0;
        }
    }
    let spec = crate::geometry::CurveSpec::fourier_from_series(&x_series, &y_series);
    let base = ReferenceCurve::new(spec, n)?;
    let chart = Chart::with_default_delta(base)?;
    let rho = transition(dom, &chart)?;
    DomainRep::new(chart, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CurveSpec;
    use std::f64::consts::PI;

    fn circle_chart(center: [f64; 2], radius: f64, delta: f64, n: usize) -> Chart {
        let curve = ReferenceCurve::new(
            CurveSpec::Circle { center, radius, phase: 0.0 },
            n,
        )
        .unwrap();
        Chart::new(Collar::new(curve, delta).unwrap())
    }

    #[test]
    fn boundary_point_examples() {
        let chart = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let dom = DomainRep::new(chart.clone(), PeriodicScalarField::zeros(64)).unwrap();
        let p = dom.boundary_point(0.7);
        assert!((p - chart.base().point(0.7)).norm() < 1e-14);

        let dom2 = DomainRep::new(chart, PeriodicScalarField::constant(64, 0.1)).unwrap();
        let q = dom2.boundary_point(PI);
        assert!((q - Point::new(-1.1, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn boundary_point_on_ellipse_matches_frame() {
        let curve = ReferenceCurve::new(
            CurveSpec::Ellipse { center: [0.0, 0.0], a: 2.0, b: 1.0, angle: 0.0 },
            128,
        )
        .unwrap();
        let chart = Chart::new(Collar::new(curve.clone(), 0.05).unwrap());
        let rho = PeriodicScalarField::from_fn(128, |s| 0.02 * (2.0 * s).cos());
        let dom = DomainRep::new(chart, rho.clone()).unwrap();
        let f = curve.frame(0.0).unwrap();
        let expect = f.point + 0.02 * f.normal;
        assert!((dom.boundary_point(0.0) - expect).norm() < 1e-13);
    }

    #[test]
    fn admissibility_examples() {
        let chart = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let (ok, _) = is_admissible(&chart, &PeriodicScalarField::zeros(64)).unwrap();
        assert!(ok);

        let (ok, rep) = is_admissible(&chart, &PeriodicScalarField::constant(64, 0.3)).unwrap();
        assert!(!ok, "C0 part alone exceeds delta");
        assert!((rep.c1_norm - 0.3).abs() < 1e-12);

        // derivative term dominates: 0.15 cos 8s has C1 norm 0.15 + 1.2
        let wiggly = PeriodicScalarField::from_fn(64, |s| 0.15 * (8.0 * s).cos());
        let (ok, rep) = is_admissible(&chart, &wiggly).unwrap();
        assert!(!ok);
        assert!((rep.c1_norm - 1.35).abs() < 1e-10, "got {}", rep.c1_norm);
    }

    #[test]
    fn transition_identity_chart() {
        let chart = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let rho = PeriodicScalarField::from_fn(64, |s| 0.05 * (2.0 * s).cos() + 0.02 * s.sin());
        let dom = DomainRep::new(chart.clone(), rho.clone()).unwrap();
        let rho2 = transition(&dom, &chart).unwrap();
        for j in 0..64 {
            assert!((rho2.value(j) - rho.value(j)).abs() < 1e-12);
        }
    }

    #[test]
    fn transition_concentric_circles() {
        let src = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let dom = DomainRep::new(src, PeriodicScalarField::constant(64, 0.1)).unwrap();
        let dst = circle_chart([0.0, 0.0], 1.1, 0.2, 64);
        let rho2 = transition(&dom, &dst).unwrap();
        assert!(rho2.max_abs() < 1e-12);
    }

    #[test]
    fn transition_shifted_circle_closed_form() {
        // unit circle expressed over the circle centered at (0.05, 0):
        // ρ₂(t) = -0.05 cos t + sqrt(1 - 0.0025 sin² t) - 1
        let src = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let dom = DomainRep::new(src, PeriodicScalarField::zeros(64)).unwrap();
        let dst = circle_chart([0.05, 0.0], 1.0, 0.2, 64);
        let rho2 = transition(&dom, &dst).unwrap();
        for j in 0..64 {
            let t = TAU * j as f64 / 64.0;
            let expect = -0.05 * t.cos() + (1.0 - 0.0025 * t.sin().powi(2)).sqrt() - 1.0;
            assert!((rho2.value(j) - expect).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn transition_rejects_far_chart() {
        let src = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let dom = DomainRep::new(src, PeriodicScalarField::zeros(64)).unwrap();
        let dst = circle_chart([3.0, 0.0], 1.0, 0.2, 64);
        assert!(matches!(
            transition(&dom, &dst),
            Err(Error::NotInChart { .. })
        ));
    }

    #[test]
    fn transition_derivative_trivial_cases() {
        let chart = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let rho = PeriodicScalarField::from_fn(64, |s| 0.03 * (2.0 * s).cos());
        let dom = DomainRep::new(chart.clone(), rho).unwrap();
        let zero = PeriodicScalarField::zeros(64);
        let d = transition_derivative(&dom, &chart, &zero).unwrap();
        assert!(d.max_abs() < 1e-14);

        let zeta = PeriodicScalarField::from_fn(64, |s| (3.0 * s).cos());
        let d = transition_derivative(&dom, &chart, &zeta).unwrap();
        for j in 0..64 {
            assert!((d.value(j) - zeta.value(j)).abs() < 1e-10);
        }
    }

    #[test]
    fn transition_derivative_matches_finite_differences() {
        let src = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let rho = PeriodicScalarField::from_fn(64, |s| 0.02 * (2.0 * s).cos());
        let dom = DomainRep::new(src.clone(), rho.clone()).unwrap();
        let dst = circle_chart([0.05, 0.0], 1.0, 0.2, 64);
        let zeta = PeriodicScalarField::from_fn(64, |s| s.cos());

        let formula = transition_derivative(&dom, &dst, &zeta).unwrap();
        let mut best = f64::INFINITY;
        for &h in &[1e-4, 1e-5, 1e-6] {
            let plus = transition(
                &DomainRep::new(src.clone(), &rho + &zeta.scaled(h)).unwrap(),
                &dst,
            )
            .unwrap();
            let minus = transition(
                &DomainRep::new(src.clone(), &rho - &zeta.scaled(h)).unwrap(),
                &dst,
            )
            .unwrap();
            let fd = (&plus - &minus).scaled(0.5 / h);
            let err = (&fd - &formula).max_abs() / formula.max_abs();
            best = best.min(err);
        }
        assert!(best < 1e-6, "relative error {best:.2e}");
    }

    #[test]
    fn standard_chart_of_disk_is_exact() {
        let chart = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let dom = DomainRep::new(chart, PeriodicScalarField::zeros(64)).unwrap();
        let re = standard_chart(&dom, 32).unwrap();
        assert!(re.rho().max_abs() < 1e-10);
        let d = crate::geometry::hausdorff_distance(
            &dom.boundary_samples(),
            &re.boundary_samples(),
        );
        assert!(d < 1e-10);
    }

    #[test]
    fn standard_chart_reanchors_perturbed_disk() {
        let chart = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let rho = PeriodicScalarField::from_fn(64, |s| 0.05 * (2.0 * s).cos());
        let dom = DomainRep::new(chart, rho).unwrap();
        let re = standard_chart(&dom, 32).unwrap();
        assert!(re.rho().max_abs() < 1e-8 * dom.scale());
        let d = crate::geometry::hausdorff_distance(
            &dom.boundary_samples(),
            &re.boundary_samples(),
        );
        assert!(d < 1e-8 * dom.scale());
    }

    #[test]
    fn standard_chart_with_active_filtering() {
        let chart = circle_chart([0.0, 0.0], 1.0, 0.2, 64);
        let rho = PeriodicScalarField::from_fn(64, |s| 0.03 * (4.0 * s).cos());
        let dom = DomainRep::new(chart, rho).unwrap();
        // boundary bandwidth is 5; cutoff 4 discards the mode-5 tail
        let re = standard_chart(&dom, 4).unwrap();
        let resid = re.rho().max_abs();
        assert!(resid > 1e-6, "filtering must leave a remainder, got {resid:.2e}");
        // Hausdorff oracle: the remainder graph height matches the distance
        // between the filtered base and the true boundary.
        let d = {
            let base_pts = re.chart().base().sample_points().to_vec();
            crate::geometry::hausdorff_distance(&base_pts, &dom.boundary_samples())
        };
        assert!(resid <= 1.5 * d + 1e-12 && resid >= 0.5 * d, "resid {resid:.2e} vs hausdorff {d:.2e}");
        // and the re-expressed boundary still tracks the original
        let db = crate::geometry::hausdorff_distance(
            &dom.boundary_samples(),
            &re.boundary_samples(),
        );
        assert!(db < 1e-8 * dom.scale(), "boundary consistency {db:.2e}");
    }
}
