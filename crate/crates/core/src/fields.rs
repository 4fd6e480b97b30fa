//! Scalar fields on reference curves and their calculus.
//!
//! A field is a vector of samples at the carrying curve's uniform parameters,
//! identified with its trigonometric interpolant. Hölder norms are estimated
//! from samples (a lower bound converging under refinement); derivatives along
//! the curve are taken with respect to arclength so that norms are invariant
//! under rigid motions and behave predictably under dilation.

use crate::error::{Error, Result};
use crate::geometry::ReferenceCurve;
use crate::spectral::{self, TrigSeries};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Highest derivative order the sampling supports before noise dominates.
pub const MAX_DERIVATIVE_ORDER: usize = 4;

/// Samples of a 2π-periodic scalar function at uniform parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicScalarField {
    values: Vec<f64>,
}

impl PeriodicScalarField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 16 || values.len() % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "field sample count must be an even integer >= 16, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("field contains non-finite values".into()));
        }
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: vec![0.0; n] }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self { values: vec![c; n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: spectral::nodes(n).iter().map(|&s| f(s)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn value(&self, j: usize) -> f64 {
        self.values[j % self.values.len()]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Trigonometric interpolation at an arbitrary parameter; exact at nodes.
    pub fn eval(&self, s: f64) -> f64 {
        self.interpolant().eval(s)
    }

    /// Precompute the interpolant for repeated off-node evaluation.
    pub fn interpolant(&self) -> FieldInterpolant {
        FieldInterpolant::new(self)
    }

    /// Differentiation via Fourier multipliers `(ik)^order`, Nyquist mode
    /// zeroed for odd orders.
    pub fn derivative(&self, order: usize) -> Result<PeriodicScalarField> {
        if order > MAX_DERIVATIVE_ORDER {
            return Err(Error::OrderTooHigh { order, max: MAX_DERIVATIVE_ORDER });
        }
        Ok(PeriodicScalarField {
            values: spectral::derivative(&self.values, order),
        })
    }

    /// Zero all modes above `cutoff`.
    pub fn lowpass(&self, cutoff: usize) -> PeriodicScalarField {
        PeriodicScalarField {
            values: spectral::lowpass(&self.values, cutoff),
        }
    }

    /// Cosine/sine amplitudes of mode `k`.
    pub fn mode(&self, k: usize) -> (f64, f64) {
        spectral::mode(&self.values, k)
    }

    /// Resample onto `n` uniform nodes via the interpolant.
    pub fn resample(&self, n: usize) -> PeriodicScalarField {
        if n == self.n() {
            return self.clone();
        }
        PeriodicScalarField {
            values: TrigSeries::from_samples(&self.values).to_samples(n),
        }
    }

    pub fn pointwise_mul(&self, other: &PeriodicScalarField) -> PeriodicScalarField {
        // Products alias above Nyquist; callers keep total bandwidth < n/2.
        PeriodicScalarField {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// Sample-wise dilation of values (used by group actions).
    pub fn scaled(&self, factor: f64) -> PeriodicScalarField {
        PeriodicScalarField {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Samples of the `order`-th derivative with respect to arclength of the
    /// carrying curve, computed by repeated `(d/ds) / |γ'|`.
    pub fn arclength_derivative(
        &self,
        curve: &ReferenceCurve,
        order: usize,
    ) -> Result<PeriodicScalarField> {
        if order > MAX_DERIVATIVE_ORDER {
            return Err(Error::OrderTooHigh { order, max: MAX_DERIVATIVE_ORDER });
        }
        self.check_curve(curve)?;
        let mut vals = self.values.clone();
        for _ in 0..order {
            vals = spectral::derivative(&vals, 1);
            for (v, sp) in vals.iter_mut().zip(curve.sample_speeds()) {
                *v /= sp;
            }
        }
        Ok(PeriodicScalarField { values: vals })
    }

    /// Discrete `C^{m+μ}` norm estimate on the carrying curve:
    /// sum of sampled sup-norms of arclength derivatives up to order `m`,
    /// plus (for `μ > 0`) the sampled μ-Hölder seminorm of the m-th
    /// derivative over all node pairs with geodesic distance. A lower bound
    /// of the true norm, converging under refinement.
    pub fn holder_norm(&self, curve: &ReferenceCurve, idx: HolderIndex) -> Result<f64> {
        idx.validate()?;
        self.check_curve(curve)?;
        let mut total = 0.0;
        let mut deriv = self.clone();
        for order in 0..=idx.m {
            if order > 0 {
                deriv = deriv.arclength_derivative_step(curve);
            }
            total += deriv.max_abs();
        }
        if idx.mu > 0.0 {
            total += holder_seminorm(&deriv.values, curve, idx.mu);
        }
        Ok(total)
    }

    fn arclength_derivative_step(&self, curve: &ReferenceCurve) -> PeriodicScalarField {
        let mut vals = spectral::derivative(&self.values, 1);
        for (v, sp) in vals.iter_mut().zip(curve.sample_speeds()) {
            *v /= sp;
        }
        PeriodicScalarField { values: vals }
    }

    fn check_curve(&self, curve: &ReferenceCurve) -> Result<()> {
        if curve.n() != self.n() {
            return Err(Error::InvalidInput(format!(
                "field has {} samples but curve has {}",
                self.n(),
                curve.n()
            )));
        }
        Ok(())
    }
}

fn holder_seminorm(values: &[f64], curve: &ReferenceCurve, mu: f64) -> f64 {
    let n = values.len();
    let mut best = 0.0f64;
    if (mu - 1.0).abs() < 1e-15 {
        for i in 0..n {
            for j in (i + 1)..n {
                let d = curve.arclength_between_nodes(i, j);
                if d > 0.0 {
                    best = best.max((values[i] - values[j]).abs() / d);
                }
            }
        }
    } else {
        for i in 0..n {
            for j in (i + 1)..n {
                let d = curve.arclength_between_nodes(i, j);
                if d > 0.0 {
                    best = best.max((values[i] - values[j]).abs() / d.powf(mu));
                }
            }
        }
    }
    best
}

/// Regularity index `m + μ`; `μ = 1` is read as the Lipschitz seminorm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderIndex {
    pub m: usize,
    pub mu: f64,
}

impl HolderIndex {
    pub fn new(m: usize, mu: f64) -> Self {
        Self { m, mu }
    }

    fn validate(&self) -> Result<()> {
        if self.m > MAX_DERIVATIVE_ORDER {
            return Err(Error::OrderTooHigh { order: self.m, max: MAX_DERIVATIVE_ORDER });
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::InvalidInput(format!(
                "holder exponent must lie in [0, 1], got {}",
                self.mu
            )));
        }
        Ok(())
    }
}

/// Precomputed trig coefficients of a field and its first two derivatives.
pub struct FieldInterpolant {
    series: TrigSeries,
    d1: TrigSeries,
    d2: TrigSeries,
}

impl FieldInterpolant {
    fn new(field: &PeriodicScalarField) -> Self {
        let series = TrigSeries::from_samples(field.values());
        let d1 = series.derivative(1);
        let d2 = series.derivative(2);
        Self { series, d1, d2 }
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.series.eval(s)
    }

    pub fn eval_d1(&self, s: f64) -> f64 {
        self.d1.eval(s)
    }

    pub fn eval_d2(&self, s: f64) -> f64 {
        self.d2.eval(s)
    }
}

impl Add for &PeriodicScalarField {
    type Output = PeriodicScalarField;
    fn add(self, rhs: &PeriodicScalarField) -> PeriodicScalarField {
        PeriodicScalarField {
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &PeriodicScalarField {
    type Output = PeriodicScalarField;
    fn sub(self, rhs: &PeriodicScalarField) -> PeriodicScalarField {
        PeriodicScalarField {
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &PeriodicScalarField {
    type Output = PeriodicScalarField;
    fn mul(self, rhs: f64) -> PeriodicScalarField {
        self.scaled(rhs)
    }
}

impl Neg for &PeriodicScalarField {
    type Output = PeriodicScalarField;
    fn neg(self) -> PeriodicScalarField {
        self.scaled(-1.0)
    }
}

/// Serializable field description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Samples { n: usize, values: Vec<f64> },
    Fourier { fourier: TrigCoeffs },
}

/// Fourier description `a0 + Σ (a_k cos ks + b_k sin ks)`; `a` starts at the
/// mean term, `b` at mode 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigCoeffs {
    pub a: Vec<f64>,
    #[serde(default)]
    pub b: Vec<f64>,
}

impl FieldSpec {
    /// Realize the description as samples at `n` nodes.
    pub fn to_field(&self, n: usize) -> Result<PeriodicScalarField> {
        match self {
            FieldSpec::Samples { n: spec_n, values } => {
                if *spec_n != values.len() {
                    return Err(Error::InvalidInput(format!(
                        "field spec says n = {spec_n} but provides {} values",
                        values.len()
                    )));
                }
                Ok(PeriodicScalarField::new(values.clone())?.resample(n))
            }
            FieldSpec::Fourier { fourier } => {
                let TrigCoeffs { a, b } = fourier;
                if a.is_empty() {
                    return Ok(PeriodicScalarField::zeros(n));
                }
                if a.len() > n / 2 || b.len() >= n / 2 {
                    return Err(Error::InvalidInput(
                        "fourier field exceeds the bandwidth of the sample grid".into(),
                    ));
                }
                let f = PeriodicScalarField::from_fn(n, |s| {
                    let mut acc = a[0];
                    for (k, &ak) in a.iter().enumerate().skip(1) {
                        acc += ak * (k as f64 * s).cos();
                    }
                    for (k, &bk) in b.iter().enumerate() {
                        acc += bk * ((k + 1) as f64 * s).sin();
                    }
                    acc
                });
                Ok(f)
            }
        }
    }
}

/// A smooth shift map `f(s, r)` on parameters, with its partial derivatives
/// in the scalar slot. The composition operator below realizes
/// `F(ρ) = [s ↦ ρ(f(s, ρ(s)))]`.
pub trait ShiftMap {
    fn apply(&self, s: f64, r: f64) -> f64;
    fn d_r(&self, s: f64, r: f64) -> f64;
    fn d_rr(&self, s: f64, r: f64) -> f64;
}

/// The default test map `f(s, r) = s + r`.
pub struct AdditiveShift;

impl ShiftMap for AdditiveShift {
    fn apply(&self, s: f64, r: f64) -> f64 {
        s + r
    }
    fn d_r(&self, _s: f64, _r: f64) -> f64 {
        1.0
    }
    fn d_rr(&self, _s: f64, _r: f64) -> f64 {
        0.0
    }
}

/// `F(ρ)` sampled on the grid: `s ↦ ρ(f(s, ρ(s)))`.
pub fn superpose(rho: &PeriodicScalarField, map: &dyn ShiftMap) -> PeriodicScalarField {
    let interp = rho.interpolant();
    let n = rho.n();
    PeriodicScalarField::from_fn(n, |s| interp.eval(map.apply(s, interp.eval(s))))
}

/// Directional derivatives of the superposition operator.
///
/// Order 1: `F'(ρ)η = ρ'(f(·,ρ)) ∂_r f(·,ρ) η + η(f(·,ρ))`.
/// Order 2 (second derivative in the single direction `η`):
/// `F''(ρ)(η,η) = ρ''(f)(∂_r f η)² + ρ'(f) ∂²_r f η² + 2 η'(f) ∂_r f η`.
pub fn superposition_derivative(
    rho: &PeriodicScalarField,
    eta: &PeriodicScalarField,
    map: &dyn ShiftMap,
    order: usize,
) -> Result<PeriodicScalarField> {
    if order == 0 || order > 2 {
        return Err(Error::OrderTooHigh { order, max: 2 });
    }
    if rho.n() != eta.n() {
        return Err(Error::InvalidInput(
            "direction field must share the grid of ρ".into(),
        ));
    }
    let ri = rho.interpolant();
    let ei = eta.interpolant();
    let n = rho.n();
    let out = PeriodicScalarField::from_fn(n, |s| {
        let r = ri.eval(s);
        let fs = map.apply(s, r);
        let e = ei.eval(s);
        match order {
            1 => ri.eval_d1(fs) * map.d_r(s, r) * e + ei.eval(fs),
            _ => {
                let df = map.d_r(s, r);
                ri.eval_d2(fs) * (df * e).powi(2)
                    + ri.eval_d1(fs) * map.d_rr(s, r) * e * e
                    + 2.0 * ei.eval_d1(fs) * df * e
            }
        }
    });
    Ok(out)
}
