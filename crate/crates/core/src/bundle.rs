//! Hanzawa extension of boundary perturbations into the domain, pull-backs
//! of interior fields, and bundle chart transitions.
//!
//! The boundary graph map `θ_ρ` extends to the whole closed base domain as
//!
//! `Θ_ρ(x) = x + φ(1 + Λ(x)/(3δ)) ρ(Π(x)) n(Π(x))`
//!
//! inside the collar and the identity elsewhere, where `φ` vanishes below
//! 1/2 and equals 1 above 1. The map moves points only along normal lines
//! of the base curve, so inversion is a scalar solve per normal fiber.

use crate::charts::DomainRep;
use crate::error::{Error, Result};
use crate::fields::PeriodicScalarField;
use crate::geometry::Point;
use std::sync::OnceLock;

/// Smooth monotone profile with `φ(t) = 0` for `t <= 1/2` and `φ(t) = 1`
/// for `t >= 1`, glued from `exp(-1/t)` bumps.
#[derive(Clone, Copy, Debug, Default)]
pub struct CutoffProfile;

fn bump(w: f64) -> f64 {
    if w <= 0.0 {
        0.0
    } else {
        (-1.0 / w).exp()
    }
}

impl CutoffProfile {
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.5 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let w = 2.0 * t - 1.0;
        let g = bump(w);
        g / (g + bump(1.0 - w))
    }

    /// Derivative dφ/dt (zero outside the transition interval).
    pub fn slope(&self, t: f64) -> f64 {
        if t <= 0.5 || t >= 1.0 {
            return 0.0;
        }
        let w = 2.0 * t - 1.0;
        let g = bump(w);
        let h = bump(1.0 - w);
        let gp = g / (w * w);
        let hp = h / ((1.0 - w) * (1.0 - w));
        2.0 * (gp * h + g * hp) / (g + h).powi(2)
    }

    /// Largest slope of the profile; sampled once and cached.
    pub fn max_slope(&self) -> f64 {
        static MAX: OnceLock<f64> = OnceLock::new();
        *MAX.get_or_init(|| {
            let mut m: f64 = 0.0;
            for j in 0..=20000 {
                let t = 0.5 + 0.5 * j as f64 / 20000.0;
                m = m.max(self.slope(t));
            }
            m
        })
    }
}

/// Margin of the fiberwise injectivity bound: `‖ρ‖_∞ max|φ'| / (3δ)`.
/// Values below 1 certify that `Θ_ρ` is injective along every normal fiber.
pub fn slope_margin(dom: &DomainRep) -> f64 {
    let profile = CutoffProfile;
    dom.rho().max_abs() * profile.max_slope() / (3.0 * dom.chart().delta())
}

fn check_slope(dom: &DomainRep) -> Result<()> {
    let margin = slope_margin(dom);
    if margin >= 1.0 {
        return Err(Error::InvalidInput(format!(
            "hanzawa slope margin {margin:.3} >= 1; graph too large for the collar profile"
        )));
    }
    Ok(())
}

enum Location {
    Collar { s: f64, lambda: f64 },
    DeepInterior,
    Outside,
}

fn locate(dom: &DomainRep, x: Point) -> Location {
    match dom.chart().collar().project(x) {
        Ok((s, lambda)) => Location::Collar { s, lambda },
        Err(_) => {
            if dom.chart().base().contains(x) {
                Location::DeepInterior
            } else {
                Location::Outside
            }
        }
    }
}

/// `Θ_ρ(x)` for `x` in the closed base domain.
pub fn hanzawa_map(dom: &DomainRep, x: Point) -> Result<Point> {
    check_slope(dom)?;
    let delta = dom.chart().delta();
    let scale = dom.scale();
    match locate(dom, x) {
        Location::DeepInterior => Ok(x),
        Location::Outside => Err(Error::OutsideDomain { x: x.x, y: x.y }),
        Location::Collar { s, lambda } => {
            if lambda > 1e-12 * scale {
                return Err(Error::OutsideDomain { x: x.x, y: x.y });
            }
            let profile = CutoffProfile;
            let factor = profile.eval(1.0 + lambda / (3.0 * delta));
            if factor == 0.0 {
                return Ok(x);
            }
            let curve = dom.chart().base();
            let normal = curve.normal(s);
            Ok(x + factor * dom.rho().eval(s) * normal)
        }
    }
}

/// Inverse of `Θ_ρ`: for `y` in the closed image domain, the preimage on the
/// same normal fiber, by safeguarded Newton on
/// `t + φ(1 + t/(3δ)) ρ(s) = Λ(y)`.
pub fn hanzawa_inverse(dom: &DomainRep, y: Point) -> Result<Point> {
    check_slope(dom)?;
    let delta = dom.chart().delta();
    let scale = dom.scale();
    let profile = CutoffProfile;
    match locate(dom, y) {
        Location::DeepInterior => Ok(y),
        Location::Outside => Err(Error::OutsideDomain { x: y.x, y: y.y }),
        Location::Collar { s, lambda } => {
            let curve = dom.chart().base();
            let r = dom.rho().eval(s);
            if lambda > r + 1e-10 * scale {
                return Err(Error::OutsideDomain { x: y.x, y: y.y });
            }
            let psi = |t: f64| t + profile.eval(1.0 + t / (3.0 * delta)) * r;
            let dpsi = |t: f64| 1.0 + profile.slope(1.0 + t / (3.0 * delta)) * r / (3.0 * delta);
            // ψ is strictly increasing on [-3δ, 0] with ψ(-3δ) = -3δ and
            // ψ(0) = ρ(s); bracket, then polish.
            let mut lo = -3.0 * delta;
            let mut hi = 0.0;
            if lambda <= lo {
                return Ok(y); // identity region
            }
            let mut t = (lambda - profile.eval(1.0 + lambda / (3.0 * delta)) * r).clamp(lo, hi);
            let mut converged = false;
            for _ in 0..80 {
                let f = psi(t) - lambda;
                if f.abs() < 1e-13 * scale {
                    converged = true;
                    break;
                }
                if f > 0.0 {
                    hi = t;
                } else {
                    lo = t;
                }
                let d = dpsi(t);
                let mut next = t - f / d;
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                t = next;
            }
            if !converged {
                return Err(Error::NewtonFailure(format!(
                    "hanzawa fiber inversion stalled at s = {s:.6}"
                )));
            }
            Ok(curve.point(s) + t * curve.normal(s))
        }
    }
}

/// A queryable scalar field on (the closure of) a planar domain.
pub trait InteriorField {
    fn eval(&self, p: Point) -> Result<f64>;
}

/// Wrap a plain closure as an interior field.
pub struct AnalyticField<F: Fn(Point) -> f64>(pub F);

impl<F: Fn(Point) -> f64> InteriorField for AnalyticField<F> {
    fn eval(&self, p: Point) -> Result<f64> {
        Ok((self.0)(p))
    }
}

/// `Θ_ρ^*(v) = v ∘ Θ_ρ` evaluated at one point of the base domain.
pub fn pullback(dom: &DomainRep, v: &dyn InteriorField, x: Point) -> Result<f64> {
    v.eval(hanzawa_map(dom, x)?)
}

/// Interior component of a bundle chart change:
/// `z ∘ (Θ¹_{ρ₁})⁻¹ ∘ Θ²_{ρ₂}`, composed lazily at query points.
pub struct TransportedField<F: InteriorField> {
    src: DomainRep,
    dst: DomainRep,
    inner: F,
}

impl<F: InteriorField> InteriorField for TransportedField<F> {
    fn eval(&self, p: Point) -> Result<f64> {
        let in_omega = hanzawa_map(&self.dst, p)?;
        let back = hanzawa_inverse(&self.src, in_omega)?;
        self.inner.eval(back)
    }
}

/// Bundle chart transition: re-express `(ρ, z)` over `dst_chart`. The first
/// component is the ordinary chart transition; the second the lazily
/// composed interior map.
pub fn bundle_transition<F: InteriorField>(
    src: &DomainRep,
    z: F,
    dst_chart: &crate::charts::Chart,
) -> Result<(PeriodicScalarField, TransportedField<F>)> {
    let rho2 = crate::charts::transition(src, dst_chart)?;
    let dst = DomainRep::new(dst_chart.clone(), rho2.clone())?;
    Ok((
        rho2,
        TransportedField {
            src: src.clone(),
            dst,
            inner: z,
        },
    ))
}
