//! Pinned tolerances for the property suites. Values are part of the
//! contract; loosening one is a behavior change, not a tuning knob.

/// C⁰ error of a chart-transition round trip.
pub const TRANSITION_ROUND_TRIP_C0: f64 = 1e-8;

/// Boundary-set consistency across a transition, relative to the scale.
pub const BOUNDARY_HAUSDORFF_REL: f64 = 1e-8;

/// Transition derivative vs. central finite differences (relative, after an
/// h-sweep).
pub const TRANSITION_DERIVATIVE_REL: f64 = 1e-6;

/// Chain rule of transition derivatives through an intermediate chart
/// (relative).
pub const CHAIN_RULE_REL: f64 = 1e-6;

/// Standard-chart transition derivative vs. the projector-operator
/// assembly (absolute).
pub const PROJECTOR_ROUTE_ABS: f64 = 1e-8;

/// Group laws and quasi-commutation on representations (absolute).
pub const GROUP_LAW_ABS: f64 = 1e-12;

/// Relative singular-value cut for the numerical rank.
pub const RANK_REL_TOL: f64 = 1e-6;

/// Required separation of the smallest kept singular value above the cut.
pub const RANK_SV_GAP: f64 = 1e4;

/// Disk harmonics `∂ₙ(r^k cos kθ) = k cos kθ` at n = 128 (absolute).
pub const DISK_HARMONIC_ABS: f64 = 1e-9;

/// Per-doubling error reduction factor for the solver convergence check.
pub const CONVERGENCE_FACTOR: f64 = 0.1;

/// Roundoff floor for the convergence check (errors below it are converged).
pub const CONVERGENCE_FLOOR: f64 = 1e-12;

/// Normal speed on exact disks (absolute).
pub const EQUILIBRIUM_SPEED_ABS: f64 = 1e-8;

/// Linearized mode decay coefficient `-k(k²-1)` (relative, ε = 1e-3).
pub const MODE_RATE_REL: f64 = 0.01;

/// Translation/rotation equivariance and dilation quasi-invariance of the
/// normal speed (absolute).
pub const EQUIVARIANCE_ABS: f64 = 1e-8;

/// Mass neutrality `∮ V_n ds = 0` (absolute).
pub const MASS_NEUTRAL_ABS: f64 = 1e-8;

/// Relative area drift over a unit-horizon flow.
pub const AREA_DRIFT_REL: f64 = 1e-5;

/// Largest allowed per-step perimeter increase.
pub const PERIMETER_STEP_INCREASE: f64 = 1e-8;

/// Fitted mode-2 decay rate against -6 (relative).
pub const MODE2_RATE_REL: f64 = 0.02;

/// Boundary discontinuity across a re-anchoring, relative to the scale.
pub const RECHART_JUMP_REL: f64 = 1e-6;

/// Final distance to the area-equivalent disk for the long ellipse run.
pub const FINAL_DISK_HAUSDORFF: f64 = 1e-3;

/// Trajectory equivariance under translation (Hausdorff, absolute).
pub const TRAJECTORY_EQUIVARIANCE: f64 = 1e-6;

/// One-step error contraction required when halving dt (order check).
pub const RK4_HALVING_FACTOR: f64 = 12.0;

/// Hanzawa/bundle round trips (absolute).
pub const HANZAWA_ROUND_TRIP: f64 = 1e-8;

/// Collar projection round trip, relative to the scale.
pub const PROJECTION_ROUND_TRIP_REL: f64 = 1e-10;

/// Superposition derivative vs. finite differences: first order (relative).
pub const SUPERPOSITION_D1_REL: f64 = 1e-6;

/// Superposition derivative vs. finite differences: second order (relative).
pub const SUPERPOSITION_D2_REL: f64 = 1e-5;
