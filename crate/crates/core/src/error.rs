//! Error variants shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The curve (or an offset of it) is not usable: vanishing speed,
    /// self-intersection, wrong orientation, or a broken closed-curve invariant.
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    /// The queried point is farther than `4*delta` from the base curve.
    #[error("point ({x:.6}, {y:.6}) outside collar: distance {dist:.3e} >= {bound:.3e}")]
    OutsideCollar { x: f64, y: f64, dist: f64, bound: f64 },

    /// A Newton iteration did not converge within its iteration budget.
    #[error("newton iteration failed: {0}")]
    NewtonFailure(String),

    /// A boundary cannot be represented in the requested chart, either because a
    /// boundary point leaves the collar or because the resulting graph is not
    /// admissible. `param` is the offending parameter on the target base curve.
    #[error("boundary not representable in chart near parameter {param:.6}: {reason}")]
    NotInChart { param: f64, reason: String },

    /// The linearized transition equation is singular at `param`.
    #[error("singular transition linearization at parameter {param:.6} (|dG/dx| = {value:.3e})")]
    SingularLinearization { param: f64, value: f64 },

    /// The queried point is outside the closed domain an operation requires.
    #[error("point ({x:.6}, {y:.6}) outside domain")]
    OutsideDomain { x: f64, y: f64 },

    /// Requested derivative order exceeds what the sampling supports.
    #[error("derivative order {order} exceeds supported maximum {max}")]
    OrderTooHigh { order: usize, max: usize },

    /// The boundary-integral system is ill-conditioned past the monitor threshold.
    #[error("singular boundary-integral system (pivot ratio {pivot_ratio:.3e})")]
    SingularSystem { pivot_ratio: f64 },

    /// The chart base normal is nearly tangential to the moving boundary.
    #[error("chart tangency at parameter {param:.6} (cos angle = {cosine:.3e})")]
    ChartTangency { param: f64, cosine: f64 },

    /// Invalid construction input (bad sample count, collar too wide, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A flow integration gave up; carries the failing time.
    #[error("flow aborted at t = {t:.6}: {source}")]
    FlowAborted {
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
