//! Smooth closed planar reference curves, their frames, reach, and the
//! tubular-neighborhood (collar) projection.
//!
//! Curves are 2π-periodic maps `γ: [0,2π) -> R²`, counterclockwise, sampled
//! at `n` uniform parameters. Analytic kinds (circle, ellipse) evaluate
//! exactly; `fourier` curves are band-limited trigonometric polynomials.
//! The outward unit normal is the unit tangent rotated by -90°.

use crate::error::{Error, Result};
use crate::spectral::{self, TrigSeries};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

pub type Point = nalgebra::Point2<f64>;
pub type Vec2 = nalgebra::Vector2<f64>;

/// Rotate a vector by -90°: (x, y) -> (y, -x).
#[inline]
pub fn rot_minus_90(v: Vec2) -> Vec2 {
    Vec2::new(v.y, -v.x)
}

/// 2D cross product `a × b = a.x b.y - a.y b.x`.
#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Serializable description of a reference curve.
///
/// Fourier coefficient lists use the order `a0, a1, b1, a2, b2, ...` for
/// `f(s) = a0 + Σ_k (a_k cos ks + b_k sin ks)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveSpec {
    Circle {
        center: [f64; 2],
        radius: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        phase: f64,
    },
    Ellipse {
        center: [f64; 2],
        a: f64,
        b: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        angle: f64,
    },
    Fourier { cx: Vec<f64>, cy: Vec<f64> },
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

/// Parsed per-coordinate trigonometric coefficients of a fourier curve.
#[derive(Clone, Debug)]
struct FourierCoeffs {
    ax: Vec<f64>,
    bx: Vec<f64>,
    ay: Vec<f64>,
    by: Vec<f64>,
}

fn parse_interleaved(c: &[f64]) -> (Vec<f64>, Vec<f64>) {
    // [a0, a1, b1, a2, b2, ...] -> (a, b); a trailing unmatched entry is a
    // cosine coefficient with zero sine partner.
    let modes = c.len() / 2;
    let mut a = vec![0.0; modes + 1];
    let mut b = vec![0.0; modes + 1];
    if c.is_empty() {
        return (a, b);
    }
    a[0] = c[0];
    for k in 1..=modes {
        a[k] = c.get(2 * k - 1).copied().unwrap_or(0.0);
        b[k] = c.get(2 * k).copied().unwrap_or(0.0);
    }
    (a, b)
}

fn interleave(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![a[0]];
    for k in 1..a.len() {
        out.push(a[k]);
        out.push(b[k]);
    }
    out
}

impl CurveSpec {
    fn fourier_coeffs(&self) -> Option<FourierCoeffs> {
        match self {
            CurveSpec::Fourier { cx, cy } => {
                let (ax, bx) = parse_interleaved(cx);
                let (ay, by) = parse_interleaved(cy);
                Some(FourierCoeffs { ax, bx, ay, by })
            }
            _ => None,
        }
    }

    /// Build a fourier spec from per-coordinate trig series.
    pub fn fourier_from_series(x: &TrigSeries, y: &TrigSeries) -> CurveSpec {
        CurveSpec::Fourier {
            cx: interleave(&x.a, &x.b),
            cy: interleave(&y.a, &y.b),
        }
    }
}

/// Frame of the curve at one parameter.
#[derive(Clone, Copy, Debug)]
pub struct CurveFrame {
    pub point: Point,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub curvature: f64,
}

/// A smooth closed counterclockwise planar curve with cached uniform samples.
#[derive(Clone, Debug)]
pub struct ReferenceCurve {
    spec: CurveSpec,
    n: usize,
    fourier: Option<FourierCoeffs>,
    points: Vec<Point>,
    d1: Vec<Vec2>,
    d2: Vec<Vec2>,
    speed: Vec<f64>,
    arclen: Vec<f64>,
    total_len: f64,
    diameter: f64,
    reach: OnceLock<f64>,
}

impl PartialEq for ReferenceCurve {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.n == other.n
    }
}

impl ReferenceCurve {
    pub fn new(spec: CurveSpec, n: usize) -> Result<Self> {
        if n < 16 || n % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "sample count must be an even integer >= 16, got {n}"
            )));
        }
        match &spec {
            CurveSpec::Circle { radius, .. } if *radius <= 0.0 => {
                return Err(Error::InvalidInput("circle radius must be positive".into()))
            }
            CurveSpec::Ellipse { a, b, .. } if *a <= 0.0 || *b <= 0.0 => {
                return Err(Error::InvalidInput("ellipse semi-axes must be positive".into()))
            }
            _ => {}
        }
        let fourier = spec.fourier_coeffs();
        let mut curve = ReferenceCurve {
            spec,
            n,
            fourier,
            points: Vec::new(),
            d1: Vec::new(),
            d2: Vec::new(),
            speed: Vec::new(),
            arclen: Vec::new(),
            total_len: 0.0,
            diameter: 0.0,
            reach: OnceLock::new(),
        };
        let params = spectral::nodes(n);
        curve.points = params.iter().map(|&s| curve.eval_point(s)).collect();
        curve.d1 = params.iter().map(|&s| curve.eval_d1(s)).collect();
        curve.d2 = params.iter().map(|&s| curve.eval_d2(s)).collect();
        curve.speed = curve.d1.iter().map(|v| v.norm()).collect();

        let min_speed = curve.speed.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut diameter: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                diameter = diameter.max((curve.points[i] - curve.points[j]).norm());
            }
        }
        curve.diameter = diameter;
        if !(min_speed > 1e-12 * diameter.max(1e-300)) {
            return Err(Error::DegenerateCurve(format!(
                "vanishing speed: min |γ'| = {min_speed:.3e}"
            )));
        }

        // Signed area > 0 enforces counterclockwise orientation.
        let mut area2 = 0.0;
        for i in 0..n {
            let p = curve.points[i];
            let q = curve.points[(i + 1) % n];
            area2 += p.x * q.y - q.x * p.y;
        }
        if area2 <= 0.0 {
            return Err(Error::DegenerateCurve(
                "curve is not counterclockwise (signed area <= 0)".into(),
            ));
        }

        if !polygon_is_simple(&curve.points) {
            return Err(Error::DegenerateCurve(
                "sampled curve self-intersects".into(),
            ));
        }

        // Cumulative arclength from the spectral antiderivative of |γ'|.
        let mean = curve.speed.iter().sum::<f64>() / n as f64;
        let osc: Vec<f64> = curve.speed.iter().map(|v| v - mean).collect();
        let osc_int = spectral::antiderivative(&osc);
        curve.arclen = params
            .iter()
            .zip(osc_int.iter())
            .map(|(&s, &o)| mean * s + o - osc_int[0])
            .collect();
        curve.total_len = mean * TAU;

        Ok(curve)
    }

    /// Rebuild the same curve with a different sample count.
    pub fn resample(&self, n: usize) -> Result<Self> {
        ReferenceCurve::new(self.spec.clone(), n)
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Characteristic length ("scale") used in tolerances: the sampled diameter.
    pub fn scale(&self) -> f64 {
        self.diameter
    }

    pub fn total_length(&self) -> f64 {
        self.total_len
    }

    pub fn params(&self) -> Vec<f64> {
        spectral::nodes(self.n)
    }

    pub fn param(&self, j: usize) -> f64 {
        TAU * (j % self.n) as f64 / self.n as f64
    }

    pub fn sample_points(&self) -> &[Point] {
        &self.points
    }

    pub fn sample_speeds(&self) -> &[f64] {
        &self.speed
    }

    fn eval_point(&self, s: f64) -> Point {
        match &self.spec {
            CurveSpec::Circle { center, radius, phase } => {
                let t = s + phase;
                Point::new(center[0] + radius * t.cos(), center[1] + radius * t.sin())
            }
            CurveSpec::Ellipse { center, a, b, angle } => {
                let (x, y) = (a * s.cos(), b * s.sin());
                let (sn, cs) = angle.sin_cos();
                Point::new(center[0] + cs * x - sn * y, center[1] + sn * x + cs * y)
            }
            CurveSpec::Fourier { .. } => {
                let f = self.fourier.as_ref().unwrap();
                Point::new(trig_eval(&f.ax, &f.bx, s, 0), trig_eval(&f.ay, &f.by, s, 0))
            }
        }
    }

    fn eval_d1(&self, s: f64) -> Vec2 {
        match &self.spec {
            CurveSpec::Circle { radius, phase, .. } => {
                let t = s + phase;
                Vec2::new(-radius * t.sin(), radius * t.cos())
            }
            CurveSpec::Ellipse { a, b, angle, .. } => {
                let (x, y) = (-a * s.sin(), b * s.cos());
                let (sn, cs) = angle.sin_cos();
                Vec2::new(cs * x - sn * y, sn * x + cs * y)
            }
            CurveSpec::Fourier { .. } => {
                let f = self.fourier.as_ref().unwrap();
                Vec2::new(trig_eval(&f.ax, &f.bx, s, 1), trig_eval(&f.ay, &f.by, s, 1))
            }
        }
    }

    fn eval_d2(&self, s: f64) -> Vec2 {
        match &self.spec {
            CurveSpec::Circle { radius, phase, .. } => {
                let t = s + phase;
                Vec2::new(-radius * t.cos(), -radius * t.sin())
            }
            CurveSpec::Ellipse { a, b, angle, .. } => {
                let (x, y) = (-a * s.cos(), -b * s.sin());
                let (sn, cs) = angle.sin_cos();
                Vec2::new(cs * x - sn * y, sn * x + cs * y)
            }
            CurveSpec::Fourier { .. } => {
                let f = self.fourier.as_ref().unwrap();
                Vec2::new(trig_eval(&f.ax, &f.bx, s, 2), trig_eval(&f.ay, &f.by, s, 2))
            }
        }
    }

    pub fn point(&self, s: f64) -> Point {
        self.eval_point(s)
    }

    pub fn d1(&self, s: f64) -> Vec2 {
        self.eval_d1(s)
    }

    pub fn d2(&self, s: f64) -> Vec2 {
        self.eval_d2(s)
    }

    /// Point, unit tangent, outward unit normal and curvature at `s`.
    pub fn frame(&self, s: f64) -> Result<CurveFrame> {
        let d1 = self.eval_d1(s);
        let speed = d1.norm();
        if speed < 1e-12 * self.diameter {
            return Err(Error::DegenerateCurve(format!(
                "|γ'({s:.6})| = {speed:.3e} below regularity threshold"
            )));
        }
        let d2 = self.eval_d2(s);
        let tangent = d1 / speed;
        Ok(CurveFrame {
            point: self.eval_point(s),
            tangent,
            normal: rot_minus_90(tangent),
            curvature: cross(d1, d2) / speed.powi(3),
        })
    }

    /// Unit outward normal at `s` (frame shortcut, skipping curvature).
    pub fn normal(&self, s: f64) -> Vec2 {
        let d1 = self.eval_d1(s);
        rot_minus_90(d1 / d1.norm())
    }

    pub fn curvature(&self, s: f64) -> f64 {
        let d1 = self.eval_d1(s);
        let d2 = self.eval_d2(s);
        cross(d1, d2) / d1.norm().powi(3)
    }

    /// Geodesic (along-the-curve) distance between parameters.
    pub fn arclength_between(&self, s1: f64, s2: f64) -> f64 {
        let l1 = self.arclength_at(s1);
        let l2 = self.arclength_at(s2);
        let d = (l1 - l2).abs();
        d.min(self.total_len - d)
    }

    /// Geodesic distance between sample nodes `i` and `j` (no quadrature).
    pub fn arclength_between_nodes(&self, i: usize, j: usize) -> f64 {
        let d = (self.arclen[i % self.n] - self.arclen[j % self.n]).abs();
        d.min(self.total_len - d)
    }

    fn arclength_at(&self, s: f64) -> f64 {
        // Exact for analytic kinds via quadrature-free formulas is not worth
        // the branching; the spectral cumulative arclength is node-exact and
        // band-limited between nodes.
        let s = s.rem_euclid(TAU);
        let n = self.n;
        let j = ((s / TAU * n as f64).floor() as usize).min(n - 1);
        // local refinement from the nearest node by Gauss-free midpoint steps
        let s0 = self.param(j);
        let mut acc = self.arclen[j];
        // 4-point Simpson on [s0, s]
        let h = s - s0;
        if h.abs() > 1e-15 {
            let f0 = self.eval_d1(s0).norm();
            let f1 = self.eval_d1(s0 + 0.25 * h).norm();
            let f2 = self.eval_d1(s0 + 0.5 * h).norm();
            let f3 = self.eval_d1(s0 + 0.75 * h).norm();
            let f4 = self.eval_d1(s).norm();
            acc += h / 12.0 * (f0 + 4.0 * f1 + 2.0 * f2 + 4.0 * f3 + f4);
        }
        acc
    }

    /// Winding-number containment test against the sampled polygon.
    pub fn contains(&self, p: Point) -> bool {
        winding_number(&self.points, p) != 0
    }

    /// Largest collar half-width with single-valued nearest-point projection:
    /// `min(1/max|κ|, half of the minimal doubly-critical self-distance)`,
    /// from dense sampling with local refinement.
    pub fn reach(&self) -> f64 {
        *self.reach.get_or_init(|| self.compute_reach())
    }

    fn compute_reach(&self) -> f64 {
        let m = (4 * self.n).max(256);
        let params: Vec<f64> = (0..m).map(|j| TAU * j as f64 / m as f64).collect();
        // Curvature bound with parabolic refinement around the dense argmax.
        let kappa: Vec<f64> = params.iter().map(|&s| self.curvature(s).abs()).collect();
        let mut kmax = 0.0f64;
        let mut jmax = 0;
        for (j, &k) in kappa.iter().enumerate() {
            if k > kmax {
                kmax = k;
                jmax = j;
            }
        }
        let (km, k0, kp) = (
            kappa[(jmax + m - 1) % m],
            kappa[jmax],
            kappa[(jmax + 1) % m],
        );
        let denom = km - 2.0 * k0 + kp;
        if denom < 0.0 {
            kmax = (k0 - 0.125 * (kp - km).powi(2) / denom).max(kmax);
        }
        let curv_bound = if kmax > 0.0 { 1.0 / kmax } else { f64::INFINITY };

        let dcsd = self.doubly_critical_self_distance(&params);
        curv_bound.min(dcsd / 2.0)
    }

    fn doubly_critical_self_distance(&self, params: &[f64]) -> f64 {
        let m = params.len();
        let pts: Vec<Point> = params.iter().map(|&s| self.eval_point(s)).collect();
        let band = m / 16;
        let outside_band = |i: usize, j: usize| {
            let gap = (i as isize - j as isize).rem_euclid(m as isize) as usize;
            gap.min(m - gap) > band
        };
        let mut d2 = vec![vec![f64::INFINITY; m]; m];
        for i in 0..m {
            for j in 0..m {
                if outside_band(i, j) {
                    d2[i][j] = (pts[i] - pts[j]).norm_squared();
                }
            }
        }
        let mut best = f64::INFINITY;
        for i in 0..m {
            for j in 0..m {
                let v = d2[i][j];
                if !v.is_finite() {
                    continue;
                }
                // Candidates must be interior grid minima: pairs touching the
                // excluded near-diagonal band are diagonal artifacts.
                let neigh = [
                    ((i + 1) % m, j),
                    ((i + m - 1) % m, j),
                    (i, (j + 1) % m),
                    (i, (j + m - 1) % m),
                ];
                if neigh.iter().any(|&(a, b)| !outside_band(a, b)) {
                    continue;
                }
                if !neigh.iter().all(|&(a, b)| v <= d2[a][b]) {
                    continue;
                }
                if let Some(d) = self.refine_critical_pair(params[i], params[j]) {
                    best = best.min(d);
                } else if self.pair_is_critical(params[i], params[j]) {
                    // Newton can be singular on symmetric configurations
                    // (e.g. every antipodal pair of a circle); the sampled
                    // pair is then already critical.
                    best = best.min(v.sqrt());
                }
            }
        }
        best
    }

    fn pair_is_critical(&self, s: f64, t: f64) -> bool {
        let u = self.eval_point(s) - self.eval_point(t);
        let tol = 1e-9 * self.diameter * self.diameter;
        u.dot(&self.eval_d1(s)).abs() < tol && u.dot(&self.eval_d1(t)).abs() < tol
    }

    /// Newton on the doubly-critical system
    /// `⟨γ(s)-γ(t), γ'(s)⟩ = 0`, `⟨γ(s)-γ(t), γ'(t)⟩ = 0`.
    fn refine_critical_pair(&self, mut s: f64, mut t: f64) -> Option<f64> {
        for _ in 0..30 {
            let u = self.eval_point(s) - self.eval_point(t);
            let (gs, gt) = (self.eval_d1(s), self.eval_d1(t));
            let g1 = u.dot(&gs);
            let g2 = u.dot(&gt);
            let j11 = gs.norm_squared() + u.dot(&self.eval_d2(s));
            let j12 = -gt.dot(&gs);
            let j21 = gs.dot(&gt);
            let j22 = -gt.norm_squared() + u.dot(&self.eval_d2(t));
            let det = j11 * j22 - j12 * j21;
            if det.abs() < 1e-14 * self.diameter.powi(4) {
                return None;
            }
            let ds = (g1 * j22 - g2 * j12) / det;
            let dt = (j11 * g2 - j21 * g1) / det;
            s -= ds;
            t -= dt;
            if ds.abs() + dt.abs() < 1e-13 {
                let sep = (s - t).rem_euclid(TAU);
                if sep.min(TAU - sep) < TAU / 64.0 {
                    return None;
                }
                return Some((self.eval_point(s) - self.eval_point(t)).norm());
            }
        }
        None
    }
}

/// Evaluate a trig series (or its derivative) given coefficient slices.
fn trig_eval(a: &[f64], b: &[f64], s: f64, order: usize) -> f64 {
    let mut acc = if order == 0 { a[0] } else { 0.0 };
    for k in 1..a.len() {
        let kf = k as f64;
        let (ck, sk) = ((kf * s).cos(), (kf * s).sin());
        let (ak, bk) = match order % 4 {
            0 => (a[k], b[k]),
            1 => (b[k], -a[k]),
            2 => (-a[k], -b[k]),
            3 => (-b[k], a[k]),
            _ => unreachable!(),
        };
        acc += kf.powi(order as i32) * (ak * ck + bk * sk);
    }
    acc
}

/// Crossing-number winding test against a sample polygon.
pub fn winding_number(poly: &[Point], p: Point) -> i32 {
    let mut wn = 0;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && cross(b - a, p - a) > 0.0 {
                wn += 1;
            }
        } else if b.y <= p.y && cross(b - a, p - a) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Pairwise segment test on the closed polygon, skipping adjacent segments.
pub fn polygon_is_simple(pts: &[Point]) -> bool {
    let n = pts.len();
    for i in 0..n {
        let a0 = pts[i];
        let a1 = pts[(i + 1) % n];
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue; // closing segment is adjacent to the first
            }
            let b0 = pts[j];
            let b1 = pts[(j + 1) % n];
            if segments_intersect(a0, a1, b0, b1) {
                return false;
            }
        }
    }
    true
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    false
}

/// Tubular neighborhood of a curve: the offset map `(s, t) -> γ(s) + t n(s)`
/// is injective on `|t| < 4 delta`, enforced through `4 delta < reach`.
#[derive(Clone, Debug)]
pub struct Collar {
    curve: ReferenceCurve,
    delta: f64,
}

impl Collar {
    pub fn new(curve: ReferenceCurve, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidInput("collar delta must be positive".into()));
        }
        let reach = curve.reach();
        if !(4.0 * delta < reach) {
            return Err(Error::InvalidInput(format!(
                "collar too wide: 4*delta = {:.6e} must be < reach = {:.6e}",
                4.0 * delta,
                reach
            )));
        }
        Ok(Collar { curve, delta })
    }

    /// Collar with the default half-width `reach / 8`.
    pub fn with_default_delta(curve: ReferenceCurve) -> Result<Self> {
        let delta = curve.reach() / 8.0;
        Collar::new(curve, delta)
    }

    pub fn curve(&self) -> &ReferenceCurve {
        &self.curve
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Nearest-point projection: returns `(s, λ)` with
    /// `y = γ(s) + λ n(s)`, `⟨y - γ(s), γ'(s)⟩ = 0`, `|λ| < 4 delta`,
    /// `λ < 0` iff `y` lies inside the curve.
    pub fn project(&self, y: Point) -> Result<(f64, f64)> {
        let curve = &self.curve;
        let n = curve.n();
        let scale = curve.scale();
        // Coarse argmin over cached samples; strict `<` keeps the smallest
        // parameter on ties.
        let mut jbest = 0;
        let mut dbest = f64::INFINITY;
        for (j, p) in curve.sample_points().iter().enumerate() {
            let d = (y - p).norm_squared();
            if d < dbest {
                dbest = d;
                jbest = j;
            }
        }
        let bound = 4.0 * self.delta;
        if dbest.sqrt() >= bound + curve.total_length() / n as f64 {
            return Err(Error::OutsideCollar {
                x: y.x,
                y: y.y,
                dist: dbest.sqrt(),
                bound,
            });
        }

        let mut s = curve.param(jbest);
        let tol = 1e-12 * scale;
        let mut converged = false;
        for _ in 0..50 {
            let d1 = curve.d1(s);
            let u = y - curve.point(s);
            let h = u.dot(&d1);
            let hp = -d1.norm_squared() + u.dot(&curve.d2(s));
            if hp.abs() < 1e-300 {
                break;
            }
            let step = h / hp;
            s -= step;
            if step.abs() < 1e-14 || h.abs() < tol * d1.norm() {
                converged = true;
                break;
            }
        }
        if !converged {
            // One more residual check: Newton may have landed exactly.
            let d1 = curve.d1(s);
            let u = y - curve.point(s);
            if u.dot(&d1).abs() >= tol * d1.norm() {
                return Err(Error::NewtonFailure(format!(
                    "collar projection stalled at s = {s:.6} for point ({:.6}, {:.6})",
                    y.x, y.y
                )));
            }
        }
        let s = s.rem_euclid(TAU);
        let normal = curve.normal(s);
        let lambda = (y - curve.point(s)).dot(&normal);
        if lambda.abs() >= bound {
            return Err(Error::OutsideCollar {
                x: y.x,
                y: y.y,
                dist: lambda.abs(),
                bound,
            });
        }
        Ok((s, lambda))
    }
}

/// A closed curve reconstructed from boundary samples by trigonometric
/// interpolation; used for curve-to-curve distances.
#[derive(Clone, Debug)]
pub struct SampledClosedCurve {
    x: TrigSeries,
    y: TrigSeries,
    dx: TrigSeries,
    dy: TrigSeries,
    ddx: TrigSeries,
    ddy: TrigSeries,
    points: Vec<Point>,
    /// 4x oversampled polyline for the coarse nearest-point scan
    coarse: Vec<Point>,
}

impl SampledClosedCurve {
    pub fn from_points(pts: &[Point]) -> Self {
        let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
        let x = TrigSeries::from_samples(&xs);
        let y = TrigSeries::from_samples(&ys);
        let dx = x.derivative(1);
        let dy = y.derivative(1);
        let ddx = x.derivative(2);
        let ddy = y.derivative(2);
        let fine = 4 * pts.len();
        let fx = x.to_samples(fine);
        let fy = y.to_samples(fine);
        let coarse = fx
            .iter()
            .zip(&fy)
            .map(|(&a, &b)| Point::new(a, b))
            .collect();
        SampledClosedCurve {
            x,
            y,
            dx,
            dy,
            ddx,
            ddy,
            points: pts.to_vec(),
            coarse,
        }
    }

    pub fn eval(&self, s: f64) -> Point {
        Point::new(self.x.eval(s), self.y.eval(s))
    }

    pub fn eval_d1(&self, s: f64) -> Vec2 {
        Vec2::new(self.dx.eval(s), self.dy.eval(s))
    }

    /// Distance from `p` to the interpolated curve.
    pub fn distance_to(&self, p: Point) -> f64 {
        let m = self.points.len();
        let oversample = self.coarse.len();
        let mut sbest = 0.0;
        let mut dbest = f64::INFINITY;
        for (j, q) in self.coarse.iter().enumerate() {
            let d = (p - q).norm_squared();
            if d < dbest {
                dbest = d;
                sbest = TAU * j as f64 / oversample as f64;
            }
        }
        let mut s = sbest;
        for _ in 0..60 {
            let u = p - self.eval(s);
            let d1 = self.eval_d1(s);
            let h = u.dot(&d1);
            let hp = -d1.norm_squared() + u.dot(&Vec2::new(self.ddx.eval(s), self.ddy.eval(s)));
            if hp.abs() < 1e-300 {
                break;
            }
            let step = h / hp;
            s -= step.clamp(-PI / m as f64, PI / m as f64);
            if step.abs() < 1e-14 {
                break;
            }
        }
        (p - self.eval(s)).norm().min(dbest.sqrt())
    }
}

/// Two-sided Hausdorff distance between the band-limited closed curves
/// interpolating two sample sets.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> f64 {
    let ca = SampledClosedCurve::from_points(a);
    let cb = SampledClosedCurve::from_points(b);
    let mut d: f64 = 0.0;
    for p in a {
        d = d.max(cb.distance_to(*p));
    }
    for p in b {
        d = d.max(ca.distance_to(*p));
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn unit_circle(n: usize) -> ReferenceCurve {
        ReferenceCurve::new(
            CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0, phase: 0.0 },
            n,
        )
        .unwrap()
    }

    fn ellipse_2_1(n: usize) -> ReferenceCurve {
        ReferenceCurve::new(
            CurveSpec::Ellipse { center: [0.0, 0.0], a: 2.0, b: 1.0, angle: 0.0 },
            n,
        )
        .unwrap()
    }

    #[test]
    fn frame_on_unit_circle() {
        let c = unit_circle(64);
        let f = c.frame(0.0).unwrap();
        assert!((f.point - Point::new(1.0, 0.0)).norm() < 1e-14);
        assert!((f.tangent - Vec2::new(0.0, 1.0)).norm() < 1e-14);
        assert!((f.normal - Vec2::new(1.0, 0.0)).norm() < 1e-14);
        assert!((f.curvature - 1.0).abs() < 1e-14);
    }

    #[test]
    fn circle_curvature_is_inverse_radius() {
        let c = ReferenceCurve::new(
            CurveSpec::Circle { center: [0.3, -1.0], radius: 2.5, phase: 0.0 },
            32,
        )
        .unwrap();
        for &s in &c.params() {
            assert!((c.frame(s).unwrap().curvature - 1.0 / 2.5).abs() < 1e-13);
        }
    }

    #[test]
    fn ellipse_curvature_matches_finite_differences() {
        // Independent oracle: second-order central differences of γ itself.
        let c = ellipse_2_1(64);
        let h = 1e-5;
        for &s in &[0.0, 0.7, 2.1] {
            let d1 = (c.point(s + h) - c.point(s - h)) / (2.0 * h);
            let d2 = ((c.point(s + h) - c.point(s)) - (c.point(s) - c.point(s - h))) / (h * h);
            let kappa_fd = cross(d1, d2) / d1.norm().powi(3);
            assert!(
                (c.frame(s).unwrap().curvature - kappa_fd).abs() < 1e-5,
                "s = {s}"
            );
        }
        assert!((c.frame(0.0).unwrap().curvature - 2.0).abs() < 1e-13);
    }

    #[test]
    fn reach_of_circle_is_radius() {
        let c = ReferenceCurve::new(
            CurveSpec::Circle { center: [1.0, 2.0], radius: 1.7, phase: 0.0 },
            32,
        )
        .unwrap();
        assert!((c.reach() - 1.7).abs() < 1e-9 * 1.7);
    }

    #[test]
    fn reach_of_ellipse_is_curvature_limited() {
        // max curvature 2 at the ends of the major axis -> reach 0.5
        let c = ellipse_2_1(128);
        assert!((c.reach() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn reach_of_peanut_is_bounded_by_half_gap() {
        // polar r(θ) = 1 + 0.9 cos 2θ pinches to r = 0.1 at θ = ±π/2:
        // x = 1.45 cos s + 0.45 cos 3s, y = 0.55 sin s + 0.45 sin 3s
        let c = ReferenceCurve::new(
            CurveSpec::Fourier {
                cx: vec![0.0, 1.45, 0.0, 0.0, 0.0, 0.45, 0.0],
                cy: vec![0.0, 0.0, 0.55, 0.0, 0.0, 0.0, 0.45],
            },
            256,
        )
        .unwrap();
        // Brute-force pairwise distance oracle for the neck gap: restrict to
        // the waist |x| < 0.5 where the two lobes face each other across
        // y = 0; the curve passes through (0, ±0.1), so the gap is 0.2.
        let mut gap = f64::INFINITY;
        let m = 4000;
        for i in 0..m {
            let ti = TAU * i as f64 / m as f64;
            let pi_ = c.point(ti);
            if pi_.y < 0.05 || pi_.x.abs() > 0.5 {
                continue;
            }
            for j in 0..m {
                let tj = TAU * j as f64 / m as f64;
                let pj = c.point(tj);
                if pj.y > -0.05 || pj.x.abs() > 0.5 {
                    continue;
                }
                gap = gap.min((pi_ - pj).norm());
            }
        }
        assert!((gap - 0.2).abs() < 1e-4, "gap = {gap}");
        assert!(c.reach() <= 0.5 * gap + 1e-6);
        // Independent polar-curvature oracle pins the curvature-limited value.
        let mut kmax: f64 = 0.0;
        for j in 0..8000 {
            let th = TAU * j as f64 / 8000.0;
            let r = 1.0 + 0.9 * (2.0 * th).cos();
            let rp = -1.8 * (2.0 * th).sin();
            let rpp = -3.6 * (2.0 * th).cos();
            let k = (r * r + 2.0 * rp * rp - r * rpp) / (r * r + rp * rp).powf(1.5);
            kmax = kmax.max(k.abs());
        }
        assert!(c.reach() <= 1.0 / kmax * (1.0 + 1e-6));
        assert!(c.reach() >= 0.98 / kmax, "reach {} vs 1/kmax {}", c.reach(), 1.0 / kmax);
    }

    #[test]
    fn collar_rejects_wide_delta() {
        let c = unit_circle(32);
        assert!(Collar::new(c.clone(), 0.25).err().is_some());
        assert!(Collar::new(c, 0.2).is_ok());
    }

    #[test]
    fn project_radial_point() {
        let collar = Collar::new(unit_circle(64), 0.2).unwrap();
        let (s, lambda) = collar.project(Point::new(1.1, 0.0)).unwrap();
        assert!(s.abs() < 1e-12 || (s - TAU).abs() < 1e-12);
        assert!((lambda - 0.1).abs() < 1e-12);
    }

    #[test]
    fn project_center_is_outside_collar() {
        let collar = Collar::new(unit_circle(64), 0.2).unwrap();
        match collar.project(Point::new(0.0, 0.0)) {
            Err(Error::OutsideCollar { .. }) => {}
            other => panic!("expected OutsideCollar, got {other:?}"),
        }
    }

    #[test]
    fn project_on_ellipse_minor_axis() {
        // Oracle: dense grid search over the squared distance.
        let curve = ellipse_2_1(256);
        let collar = Collar::new(curve.clone(), 0.1).unwrap();
        let y = Point::new(0.0, 1.2);
        let (s, lambda) = collar.project(y).unwrap();
        let mut sbest = 0.0;
        let mut dbest = f64::INFINITY;
        for j in 0..20000 {
            let t = TAU * j as f64 / 20000.0;
            let d = (y - curve.point(t)).norm_squared();
            if d < dbest {
                dbest = d;
                sbest = t;
            }
        }
        assert!((s - PI / 2.0).abs() < 1e-10, "s = {s}");
        assert!((sbest - PI / 2.0).abs() < 1e-3);
        assert!((lambda - 0.2).abs() < 1e-10);
    }

    #[test]
    fn projection_round_trip_and_orthogonality() {
        for curve in [unit_circle(64), ellipse_2_1(128)] {
            let delta = curve.reach() / 8.0;
            let collar = Collar::new(curve.clone(), delta).unwrap();
            let scale = curve.scale();
            for &s in curve.params().iter().step_by(5) {
                for &t in &[-3.9 * delta, -1.3 * delta, 0.0, 0.7 * delta, 3.9 * delta] {
                    let f = curve.frame(s).unwrap();
                    let y = f.point + t * f.normal;
                    let (s2, t2) = collar.project(y).unwrap();
                    let ds = (s2 - s).rem_euclid(TAU);
                    let ds = ds.min(TAU - ds);
                    assert!(ds < 1e-10, "param mismatch {ds:.2e}");
                    assert!((t2 - t).abs() < 1e-10 * scale);
                    let resid = (y - curve.point(s2)).dot(&curve.d1(s2));
                    assert!(resid.abs() < 1e-10 * scale * scale);
                }
            }
        }
    }

    #[test]
    fn lambda_sign_matches_winding_test() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let curve = ellipse_2_1(128);
        let collar = Collar::new(curve.clone(), 0.1).unwrap();
        let mut checked = 0;
        while checked < 1000 {
            let s = rng.random_range(0.0..TAU);
            let t = rng.random_range(-0.39f64..0.39);
            let f = curve.frame(s).unwrap();
            let y = f.point + t * f.normal;
            let (_, lambda) = collar.project(y).unwrap();
            if lambda.abs() < 1e-9 {
                continue;
            }
            assert_eq!(lambda < 0.0, curve.contains(y), "t = {t}");
            checked += 1;
        }
    }

    #[test]
    fn simple_test_rejects_figure_eight() {
        // figure-eight: x = sin 2s, y = sin s
        let res = ReferenceCurve::new(
            CurveSpec::Fourier {
                cx: vec![0.0, 0.0, 0.0, 0.0, 1.0],
                cy: vec![0.0, 0.0, 1.0],
            },
            64,
        );
        assert!(matches!(res, Err(Error::DegenerateCurve(_))));
    }

    #[test]
    fn clockwise_curve_rejected() {
        // clockwise circle: x = cos s, y = -sin s
        let res = ReferenceCurve::new(
            CurveSpec::Fourier { cx: vec![0.0, 1.0, 0.0], cy: vec![0.0, 0.0, -1.0] },
            32,
        );
        assert!(matches!(res, Err(Error::DegenerateCurve(_))));
    }

    #[test]
    fn hausdorff_of_resampled_curve_is_tiny() {
        let a = unit_circle(64);
        let b = unit_circle(96);
        let d = hausdorff_distance(a.sample_points(), b.sample_points());
        assert!(d < 1e-12, "d = {d:.2e}");
    }

    #[test]
    fn curve_spec_serde_round_trip() {
        let spec = CurveSpec::Fourier {
            cx: vec![0.0, 1.45, 0.0, 0.0, 0.0, 0.45, 0.0],
            cy: vec![0.0, 0.0, 0.55, 0.0, 0.0, 0.0, 0.45],
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: CurveSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
        let circle: CurveSpec =
            serde_json::from_str(r#"{"kind":"circle","center":[0.0,0.0],"radius":1.0}"#).unwrap();
        assert!(matches!(circle, CurveSpec::Circle { .. }));
    }
}
