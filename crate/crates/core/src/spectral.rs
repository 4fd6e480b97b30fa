//! Trigonometric interpolation and calculus on uniform 2π-periodic grids.
//!
//! Sample values at `s_j = 2πj/n` (n even) are identified with the unique
//! band-limited interpolant
//!
//! `f(s) = a_0 + Σ_{k=1}^{n/2-1} (a_k cos ks + b_k sin ks) + a_{n/2} cos(n s / 2)`
//!
//! which is exact at the nodes. Differentiation acts modewise; the Nyquist
//! mode is dropped for odd derivative orders since its sine partner is
//! invisible on the grid.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Forward DFT of real samples: `F_k = Σ_j f_j e^{-i k s_j}`.
pub fn dft(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    PLANNER.with(|p| {
        let fft = p.borrow_mut().plan_fft_forward(values.len());
        fft.process(&mut buf);
    });
    buf
}

/// Real cosine/sine coefficients of the interpolant of `values`.
///
/// `a` has length `n/2 + 1` (`a[0]` mean, `a[n/2]` Nyquist), `b` the same
/// length with `b[0] = b[n/2] = 0`.
#[derive(Clone, Debug)]
pub struct TrigSeries {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl TrigSeries {
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 2 && n % 2 == 0, "sample count must be even, got {n}");
        let spec = dft(values);
        let half = n / 2;
        let mut a = vec![0.0; half + 1];
        let mut b = vec![0.0; half + 1];
        a[0] = spec[0].re / n as f64;
        for k in 1..half {
            a[k] = 2.0 * spec[k].re / n as f64;
            b[k] = -2.0 * spec[k].im / n as f64;
        }
        a[half] = spec[half].re / n as f64;
        Self { a, b }
    }

    /// Build directly from coefficient lists (`a` may include the mean term).
    pub fn from_coeffs(a: Vec<f64>, b: Vec<f64>) -> Self {
        assert_eq!(a.len(), b.len());
        Self { a, b }
    }

    pub fn max_mode(&self) -> usize {
        self.a.len() - 1
    }

    /// Evaluate the interpolant at an arbitrary parameter.
    pub fn eval(&self, s: f64) -> f64 {
        let half = self.max_mode();
        // Recurrence-free direct sum; mode counts stay small (<= 256).
        let mut acc = self.a[0];
        let (sin1, cos1) = s.sin_cos();
        let mut ck = 1.0; // cos(k s), starting k = 0
        let mut sk = 0.0;
        for k in 1..half {
            let c = ck * cos1 - sk * sin1;
            let sn = sk * cos1 + ck * sin1;
            ck = c;
            sk = sn;
            acc += self.a[k] * ck + self.b[k] * sk;
        }
        if half >= 1 {
            acc += self.a[half] * (half as f64 * s).cos();
        }
        acc
    }

    /// Coefficients of the `order`-th derivative.
    pub fn derivative(&self, order: usize) -> TrigSeries {
        let half = self.max_mode();
        let mut a = vec![0.0; half + 1];
        let mut b = vec![0.0; half + 1];
        for k in 1..half {
            let kf = k as f64;
            let factor = kf.powi(order as i32);
            // each d/ds maps (a, b) -> (k b, -k a); after `order` steps:
            let (na, nb) = match order % 4 {
                0 => (self.a[k], self.b[k]),
                1 => (self.b[k], -self.a[k]),
                2 => (-self.a[k], -self.b[k]),
                3 => (-self.b[k], self.a[k]),
                _ => unreachable!(),
            };
            a[k] = factor * na;
            b[k] = factor * nb;
        }
        if order % 2 == 0 && half >= 1 {
            let kf = half as f64;
            let sign = if order % 4 == 0 { 1.0 } else { -1.0 };
            a[half] = sign * kf.powi(order as i32) * self.a[half];
        }
        TrigSeries { a, b }
    }

    /// Resample onto `n` uniform nodes.
    pub fn to_samples(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| self.eval(2.0 * std::f64::consts::PI * j as f64 / n as f64))
            .collect()
    }
}

/// Spectral derivative of uniformly sampled periodic data.
pub fn derivative(values: &[f64], order: usize) -> Vec<f64> {
    TrigSeries::from_samples(values)
        .derivative(order)
        .to_samples(values.len())
}

/// Zero all modes with wavenumber above `cutoff`. `cutoff >= n/2` is a no-op.
pub fn lowpass(values: &[f64], cutoff: usize) -> Vec<f64> {
    let n = values.len();
    if cutoff >= n / 2 {
        return values.to_vec();
    }
    let mut series = TrigSeries::from_samples(values);
    for k in (cutoff + 1)..series.a.len() {
        series.a[k] = 0.0;
        series.b[k] = 0.0;
    }
    series.to_samples(n)
}

/// Cosine/sine amplitude of mode `k`.
pub fn mode(values: &[f64], k: usize) -> (f64, f64) {
    let series = TrigSeries::from_samples(values);
    (series.a[k], series.b[k])
}

/// Mean-zero antiderivative of a mean-zero sample vector.
pub fn antiderivative(values: &[f64]) -> Vec<f64> {
    let series = TrigSeries::from_samples(values);
    let half = series.max_mode();
    let mut a = vec![0.0; half + 1];
    let mut b = vec![0.0; half + 1];
    for k in 1..half {
        let kf = k as f64;
        // integral of a cos + b sin is (a sin - b cos)/k
        a[k] = -series.b[k] / kf;
        b[k] = series.a[k] / kf;
    }
    if half >= 1 {
        // Nyquist cosine integrates to a sine invisible on the grid; drop it.
        a[half] = 0.0;
    }
    TrigSeries { a, b }.to_samples(values.len())
}

/// Uniform grid nodes `s_j = 2πj/n`.
pub fn nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n as f64)
        .collect()
}
