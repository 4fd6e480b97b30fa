//! Charts over reference curves for planar moving-boundary problems.
//!
//! Nearby simple domains are written as normal graphs `ρ` over a fixed base
//! curve; the crate provides the collar projection machinery, chart
//! transitions and their derivatives, Hanzawa extensions of boundary
//! perturbations, Lie-group actions on domain representations, a boundary
//! integral Laplace solver, and an ODE driver that integrates the one-phase
//! Hele-Shaw flow in the current chart with automatic re-anchoring.

pub mod bundle;
pub mod charts;
pub mod error;
pub mod fields;
pub mod flow;
pub mod geometry;
pub mod groups;
pub mod heleshaw;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Collar, CurveSpec, Point, ReferenceCurve, Vec2};
