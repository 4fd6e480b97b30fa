//! Named property suites: each check compares an implementation path
//! against an independent oracle (closed forms, finite differences, dual
//! assemblies, conservation laws) and reports the measured value against
//! its pinned tolerance. The CLI `check` subcommand and the acceptance
//! integration tests both run these.

pub mod bundle;
pub mod charts;
pub mod field;
pub mod flow;
pub mod geometry;
pub mod groups;
pub mod tolerances;

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    /// A check that passes when `measured <= tolerance`.
    pub fn gauge(
        suite: &'static str,
        name: &'static str,
        measured: f64,
        tolerance: f64,
        detail: impl Into<String>,
    ) -> Self {
        CheckResult {
            suite,
            name,
            passed: measured.is_finite() && measured <= tolerance,
            measured,
            tolerance,
            detail: detail.into(),
        }
    }

    /// A boolean check; `measured`/`tolerance` carry context values.
    pub fn flag(
        suite: &'static str,
        name: &'static str,
        passed: bool,
        measured: f64,
        tolerance: f64,
        detail: impl Into<String>,
    ) -> Self {
        CheckResult {
            suite,
            name,
            passed,
            measured,
            tolerance,
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:<10} {:<46} measured {:>12.4e}  tolerated {:>12.4e}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.measured,
            self.tolerance,
            if self.detail.is_empty() {
                String::new()
            } else {
                format!("  [{}]", self.detail)
            }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Geometry,
    Charts,
    Bundle,
    Groups,
    Field,
    Flow,
}

impl Suite {
    pub fn all() -> [Suite; 6] {
        [
            Suite::Geometry,
            Suite::Charts,
            Suite::Bundle,
            Suite::Groups,
            Suite::Field,
            Suite::Flow,
        ]
    }

    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        match name {
            "geometry" => Some(vec![Suite::Geometry]),
            "charts" => Some(vec![Suite::Charts]),
            "bundle" => Some(vec![Suite::Bundle]),
            "groups" => Some(vec![Suite::Groups]),
            "field" => Some(vec![Suite::Field]),
            "flow" => Some(vec![Suite::Flow]),
            "all" => Some(Suite::all().to_vec()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Charts => "charts",
            Suite::Bundle => "bundle",
            Suite::Groups => "groups",
            Suite::Field => "field",
            Suite::Flow => "flow",
        }
    }
}

/// Run one suite with a fixed seed for all randomized draws.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckResult> {
    match suite {
        Suite::Geometry => geometry::run(seed),
        Suite::Charts => charts::run(seed),
        Suite::Bundle => bundle::run(seed),
        Suite::Groups => groups::run(seed),
        Suite::Field => field::run(seed),
        Suite::Flow => flow::run(seed),
    }
}
