//! Property tests for the sampling-level invariants: norm estimates grow
//! under refinement, spectral calculus round-trips, and nearest-point
//! projection inverts the normal offset map.

use chartflow_core::fields::{HolderIndex, PeriodicScalarField};
use chartflow_core::geometry::{Collar, CurveSpec, ReferenceCurve};
use proptest::prelude::*;
use std::f64::consts::TAU;

fn band_limited_field(n: usize, coeffs: &[(f64, f64)]) -> PeriodicScalarField {
    PeriodicScalarField::from_fn(n, |s| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let kf = (k + 1) as f64;
                a * (kf * s).cos() + b * (kf * s).sin()
            })
            .sum()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn holder_norm_monotone_under_refinement(
        coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5),
        mu in 0.25f64..=1.0,
    ) {
        let curve = ReferenceCurve::new(
            CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0, phase: 0.0 },
            64,
        )
        .unwrap();
        let fine_curve = curve.resample(128).unwrap();
        let coarse = band_limited_field(64, &coeffs);
        let fine = band_limited_field(128, &coeffs);
        for idx in [HolderIndex::new(0, mu), HolderIndex::new(1, mu)] {
            let lo = coarse.holder_norm(&curve, idx).unwrap();
            let hi = fine.holder_norm(&fine_curve, idx).unwrap();
            prop_assert!(lo <= hi + 1e-10, "refinement shrank the estimate: {lo} vs {hi}");
        }
    }

    #[test]
    fn derivative_inverts_antiderivative(
        coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6),
    ) {
        // mean-zero band-limited field
        let f = band_limited_field(64, &coeffs);
        let anti = chartflow_core::spectral::antiderivative(f.values());
        let back = chartflow_core::spectral::derivative(&anti, 1);
        for (a, b) in back.iter().zip(f.values()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_inverts_normal_offset(
        r in 0.5f64..2.0,
        cx in -0.5f64..0.5,
        cy in -0.5f64..0.5,
        s in 0.0f64..TAU,
        frac in -0.95f64..0.95,
    ) {
        let curve = ReferenceCurve::new(
            CurveSpec::Circle { center: [cx, cy], radius: r, phase: 0.0 },
            64,
        )
        .unwrap();
        let delta = curve.reach() / 8.0;
        let collar = Collar::new(curve.clone(), delta).unwrap();
        let t = frac * 4.0 * delta;
        let f = curve.frame(s).unwrap();
        let (s2, t2) = collar.project(f.point + t * f.normal).unwrap();
        let ds = {
            let raw = (s2 - s).rem_euclid(TAU);
            raw.min(TAU - raw)
        };
        prop_assert!(ds < 1e-9, "parameter error {ds}");
        prop_assert!((t2 - t).abs() < 1e-10 * curve.scale());
    }

    #[test]
    fn field_arithmetic_is_samplewise(
        coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..4),
        c in -2.0f64..2.0,
    ) {
        let f = band_limited_field(32, &coeffs);
        let g = band_limited_field(32, &[(c, -c)]);
        let sum = &f + &g;
        let diff = &sum - &g;
        for j in 0..32 {
            prop_assert!((diff.value(j) - f.value(j)).abs() < 1e-12);
        }
    }
}
