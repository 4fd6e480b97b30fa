//! Config file schemas for the subcommands. All files are plain JSON; field
//! names are stable so external tooling can generate and parse them.

use chartflow_core::fields::FieldSpec;
use chartflow_core::flow::Integrator;
use chartflow_core::geometry::CurveSpec;
use chartflow_core::groups::GroupElement;
use serde::Deserialize;

fn default_n() -> usize {
    128
}

/// A domain description: base curve, optional collar width (default
/// `reach / 8`), and optional graph field (default zero).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub curve: CurveSpec,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub rho: Option<FieldSpec>,
}

/// Integration parameters; `dt` and `t_end` are required, the rest default.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSection {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub rechart_threshold: Option<f64>,
    #[serde(default)]
    pub smoothing_cutoff: Option<usize>,
    #[serde(default)]
    pub rate_cutoff: Option<usize>,
    #[serde(default)]
    pub integrator: Option<Integrator>,
    #[serde(default)]
    pub safety: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// prefix for `<path>.snapshots.jsonl` and `<path>.diagnostics.csv`
    pub path: String,
    /// snapshot stride in accepted steps
    #[serde(default = "default_every")]
    pub every: usize,
}

fn default_every() -> usize {
    10
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(flatten)]
    pub domain: DomainSection,
    /// group elements applied to the initial domain, in order
    #[serde(default)]
    pub apply: Vec<GroupElement>,
    pub flow: FlowSection,
    pub output: OutputSection,
}

/// Boundary data for a Dirichlet solve: either the Hele-Shaw data `-κ`
/// (the string "curvature") or an explicit field.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum BoundaryData {
    Named(String),
    Field(FieldSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaplaceConfig {
    #[serde(flatten)]
    pub domain: DomainSection,
    pub data: BoundaryData,
    /// CSV destination; stdout when omitted
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionConfig {
    pub src: DomainSection,
    pub dst: DomainSection,
    /// group elements applied to the source domain before transitioning
    #[serde(default)]
    pub apply: Vec<GroupElement>,
}
