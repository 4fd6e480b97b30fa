//! Translation, dilation, and rotation actions on domain representations.
//!
//! Actions transform the chart base together with the graph, so the group
//! laws hold exactly on representations: translating moves the base curve
//! and keeps ρ; dilating about the origin scales base, δ and ρ; rotating
//! co-rotates the base parameterization (circles carry an explicit phase)
//! and keeps ρ. `reexpress` reads an action in a fixed chart by acting and
//! transitioning back.

use crate::charts::{transition, Chart, DomainRep};
use crate::error::{Error, Result};
use crate::fields::PeriodicScalarField;
use crate::geometry::{Collar, CurveSpec, ReferenceCurve};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// One element of the translation, dilation, or rotation group.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupElement {
    Translate([f64; 2]),
    Dilate(f64),
    Rotate(f64),
}

impl GroupElement {
    pub fn validate(&self) -> Result<()> {
        if let GroupElement::Dilate(l) = self {
            if !(*l > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "dilation factor must be positive, got {l}"
                )));
            }
        }
        Ok(())
    }
}

fn rotate_vec(v: [f64; 2], angle: f64) -> [f64; 2] {
    let (sn, cs) = angle.sin_cos();
    [cs * v[0] - sn * v[1], sn * v[0] + cs * v[1]]
}

fn transform_spec(spec: &CurveSpec, g: &GroupElement) -> CurveSpec {
    match (spec, g) {
        (CurveSpec::Circle { center, radius, phase }, GroupElement::Translate(z)) => {
            CurveSpec::Circle {
                center: [center[0] + z[0], center[1] + z[1]],
                radius: *radius,
                phase: *phase,
            }
        }
        (CurveSpec::Circle { center, radius, phase }, GroupElement::Dilate(l)) => {
            CurveSpec::Circle {
                center: [center[0] * l, center[1] * l],
                radius: radius * l,
                phase: *phase,
            }
        }
        (CurveSpec::Circle { center, radius, phase }, GroupElement::Rotate(th)) => {
            CurveSpec::Circle {
                center: rotate_vec(*center, *th),
                radius: *radius,
                phase: phase + th,
            }
        }
        (CurveSpec::Ellipse { center, a, b, angle }, GroupElement::Translate(z)) => {
            CurveSpec::Ellipse {
                center: [center[0] + z[0], center[1] + z[1]],
                a: *a,
                b: *b,
                angle: *angle,
            }
        }
        (CurveSpec::Ellipse { center, a, b, angle }, GroupElement::Dilate(l)) => {
            CurveSpec::Ellipse {
                center: [center[0] * l, center[1] * l],
                a: a * l,
                b: b * l,
                angle: *angle,
            }
        }
        (CurveSpec::Ellipse { center, a, b, angle }, GroupElement::Rotate(th)) => {
            CurveSpec::Ellipse {
                center: rotate_vec(*center, *th),
                a: *a,
                b: *b,
                angle: angle + th,
            }
        }
        (CurveSpec::Fourier { cx, cy }, GroupElement::Translate(z)) => {
            let mut cx = cx.clone();
            let mut cy = cy.clone();
            if cx.is_empty() {
                cx.push(0.0);
            }
            if cy.is_empty() {
                cy.push(0.0);
            }
            cx[0] += z[0];
            cy[0] += z[1];
            CurveSpec::Fourier { cx, cy }
        }
        (CurveSpec::Fourier { cx, cy }, GroupElement::Dilate(l)) => CurveSpec::Fourier {
            cx: cx.iter().map(|c| c * l).collect(),
            cy: cy.iter().map(|c| c * l).collect(),
        },
        (CurveSpec::Fourier { cx, cy }, GroupElement::Rotate(th)) => {
            // rotate each coefficient pair (cx_k, cy_k)
            let len = cx.len().max(cy.len());
            let mut nx = vec![0.0; len];
            let mut ny = vec![0.0; len];
            for k in 0..len {
                let x = cx.get(k).copied().unwrap_or(0.0);
                let y = cy.get(k).copied().unwrap_or(0.0);
                let r = rotate_vec([x, y], *th);
                nx[k] = r[0];
                ny[k] = r[1];
            }
            CurveSpec::Fourier { cx: nx, cy: ny }
        }
    }
}

/// Apply a group element to a domain representation.
///
/// Translation and rotation leave ρ untouched; dilation scales ρ and δ by
/// the factor. The transformed boundary is exactly the transformed domain's
/// boundary. Note that for a dilation with factor < 1 the arclength
/// derivative part of the `C¹` admissibility margin does not shrink with δ,
/// so a strongly oscillatory graph can exhaust its chart after contraction;
/// callers re-anchor in that case.
pub fn act(g: &GroupElement, dom: &DomainRep) -> DomainRep {
    g.validate().expect("invalid group element");
    let chart = dom.chart();
    let spec = transform_spec(chart.base().spec(), g);
    let n = chart.n();
    let curve = ReferenceCurve::new(spec, n).expect("group action preserves curve validity");
    let (delta, rho) = match g {
        GroupElement::Dilate(l) => (chart.delta() * l, dom.rho().scaled(*l)),
        _ => (chart.delta(), dom.rho().clone()),
    };
    let collar = Collar::new(curve, delta).expect("group action preserves collar validity");
    DomainRep::new_unchecked(Chart::new(collar), rho)
}

/// The action read in the domain's own chart: act, then transition back.
pub fn reexpress(g: &GroupElement, dom: &DomainRep) -> Result<PeriodicScalarField> {
    let moved = act(g, dom);
    transition(&moved, dom.chart())
}

/// Finite-difference Jacobian of `(z1, z2, λ) ↦ reexpress(p(z, q(λ, ·)))`
/// at the identity, as an `n × 3` matrix of graph samples.
pub fn action_jacobian(dom: &DomainRep) -> Result<DMatrix<f64>> {
    let n = dom.n();
    let h = 1e-5 * dom.scale();
    let hl = 1e-5;
    let column = |gp: GroupElement, gm: GroupElement| -> Result<Vec<f64>> {
        let plus = reexpress(&gp, dom)?;
        let minus = reexpress(&gm, dom)?;
        Ok((&plus - &minus)
            .values()
            .iter()
            .map(|v| v / (2.0 * h))
            .collect())
    };
    let c1 = column(
        GroupElement::Translate([h, 0.0]),
        GroupElement::Translate([-h, 0.0]),
    )?;
    let c2 = column(
        GroupElement::Translate([0.0, h]),
        GroupElement::Translate([0.0, -h]),
    )?;
    // dilation column uses its own parameter step
    let c3: Vec<f64> = {
        let plus = reexpress(&GroupElement::Dilate(1.0 + hl), dom)?;
        let minus = reexpress(&GroupElement::Dilate(1.0 - hl), dom)?;
        (&plus - &minus)
            .values()
            .iter()
            .map(|v| v / (2.0 * hl))
            .collect()
    };
    let mut m = DMatrix::zeros(n, 3);
    for j in 0..n {
        m[(j, 0)] = c1[j];
        m[(j, 1)] = c2[j];
        m[(j, 2)] = c3[j];
    }
    Ok(m)
}

/// Numerical rank of the translation/dilation action Jacobian: singular
/// values above `1e-6` of the largest are counted.
pub fn action_jacobian_rank(dom: &DomainRep) -> Result<usize> {
    let m = action_jacobian(dom)?;
    Ok(numerical_rank(&m, 1e-6))
}

pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    svd.singular_values
        .iter()
        .filter(|&&s| s > rel_tol * smax)
        .count()
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut v: Vec<f64> = svd.singular_values.iter().cloned().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}
