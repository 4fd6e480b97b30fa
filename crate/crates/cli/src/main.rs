//! Command-line driver: flow simulations, single Dirichlet solves, chart
//! transitions with round-trip reports, and the property-check suites.
//!
//! Exit codes: 0 success, 1 domain/solver error, 2 config error,
//! 3 check-suite failure.

mod config;

use chartflow_core::charts::{transition, Chart, DomainRep};
use chartflow_core::fields::PeriodicScalarField;
use chartflow_core::flow::{simulate, FlowConfig, FlowState};
use chartflow_core::geometry::{hausdorff_distance, Collar, ReferenceCurve};
use chartflow_core::groups::act;
use chartflow_core::heleshaw::{boundary_geometry, solve_dirichlet};
use chartflow_core::verify::{run_suite, Suite};
use chartflow_core::Error as CoreError;
use clap::{Parser, Subcommand};
use config::{BoundaryData, DomainSection, LaplaceConfig, SimulateConfig, TransitionConfig};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "chartflow", about = "Moving planar boundaries in charts over reference curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the Hele-Shaw flow and write snapshots + diagnostics
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// One interior Dirichlet solve; emits boundary normal derivatives as CSV
    Laplace {
        #[arg(long)]
        config: PathBuf,
    },
    /// One chart transition with a round-trip report (JSON on stdout)
    Transition {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a named property suite
    Check {
        /// geometry | charts | bundle | groups | field | flow | all
        suite: String,
        /// seed for all randomized draws
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

enum CliError {
    Config(String),
    Domain(CoreError),
    ChecksFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Config(_) => 2,
            CliError::ChecksFailed(_) => 3,
        }
    }

    fn report(&self) {
        match self {
            CliError::Config(msg) => eprintln!("config error: {msg}"),
            CliError::Domain(e) => eprintln!("error[{}]: {e}", variant_name(e)),
            CliError::ChecksFailed(k) => eprintln!("{k} check(s) failed"),
        }
    }
}

fn variant_name(e: &CoreError) -> &'static str {
    match e {
        CoreError::DegenerateCurve(_) => "DegenerateCurve",
        CoreError::OutsideCollar { .. } => "OutsideCollar",
        CoreError::NewtonFailure(_) => "NewtonFailure",
        CoreError::NotInChart { .. } => "NotInChart",
        CoreError::SingularLinearization { .. } => "SingularLinearization",
        CoreError::OutsideDomain { .. } => "OutsideDomain",
        CoreError::OrderTooHigh { .. } => "OrderTooHigh",
        CoreError::SingularSystem { .. } => "SingularSystem",
        CoreError::ChartTangency { .. } => "ChartTangency",
        CoreError::InvalidInput(_) => "InvalidInput",
        CoreError::FlowAborted { .. } => "FlowAborted",
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config } => cmd_simulate(&config),
        Command::Laplace { config } => cmd_laplace(&config),
        Command::Transition { config } => cmd_transition(&config),
        Command::Check { suite, seed } => cmd_check(&suite, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn build_domain(section: &DomainSection) -> Result<DomainRep, CliError> {
    let curve = ReferenceCurve::new(section.curve.clone(), section.n)?;
    let collar = match section.delta {
        Some(delta) => Collar::new(curve, delta)?,
        None => Collar::with_default_delta(curve)?,
    };
    let chart = Chart::new(collar);
    let rho = match &section.rho {
        Some(spec) => spec.to_field(section.n)?,
        None => PeriodicScalarField::zeros(section.n),
    };
    Ok(DomainRep::new(chart, rho)?)
}

fn format_float(v: f64) -> String {
    // shortest round-trip formatting keeps outputs byte-deterministic
    format!("{v}")
}

fn snapshot_line(state: &FlowState) -> String {
    let chart = state.dom.chart();
    let curve_json = serde_json::to_string(chart.base().spec()).expect("curve spec serializes");
    let rho_json: Vec<String> = state
        .dom
        .rho()
        .values()
        .iter()
        .map(|v| format_float(*v))
        .collect();
    format!(
        "{{\"t\":{},\"chart\":{{\"curve\":{},\"delta\":{}}},\"rho\":[{}],\"area\":{},\"perimeter\":{},\"max_speed\":{},\"rechart\":{}}}",
        format_float(state.t),
        curve_json,
        format_float(chart.delta()),
        rho_json.join(","),
        format_float(state.area),
        format_float(state.perimeter),
        format_float(state.max_speed),
        state.recharted,
    )
}

fn cmd_simulate(path: &PathBuf) -> Result<(), CliError> {
    let cfg: SimulateConfig = load_config(path)?;
    let mut dom = build_domain(&cfg.domain)?;
    for g in &cfg.apply {
        g.validate()?;
        dom = act(g, &dom);
    }

    let mut flow_cfg = FlowConfig::new(cfg.flow.dt, cfg.flow.t_end);
    if let Some(v) = cfg.flow.rechart_threshold {
        flow_cfg.rechart_threshold = v;
    }
    flow_cfg.smoothing_cutoff = cfg.flow.smoothing_cutoff;
    flow_cfg.rate_cutoff = cfg.flow.rate_cutoff;
    if let Some(v) = cfg.flow.integrator {
        flow_cfg.integrator = v;
    }
    if let Some(v) = cfg.flow.safety {
        flow_cfg.safety = v;
    }
    flow_cfg.snapshot_every = cfg.output.every.max(1);
    flow_cfg.validate()?;

    let snap_path = format!("{}.snapshots.jsonl", cfg.output.path);
    let diag_path = format!("{}.diagnostics.csv", cfg.output.path);
    let mut snaps = BufWriter::new(
        File::create(&snap_path).map_err(|e| CliError::Config(format!("{snap_path}: {e}")))?,
    );
    let mut diags = BufWriter::new(
        File::create(&diag_path).map_err(|e| CliError::Config(format!("{diag_path}: {e}")))?,
    );
    writeln!(diags, "t,area,perimeter,max_speed,c1_fill,rechart_count").ok();

    let mut io_error: Option<std::io::Error> = None;
    let final_state = simulate(dom, &flow_cfg, &mut |state| {
        if io_error.is_some() {
            return;
        }
        if let Err(e) = writeln!(snaps, "{}", snapshot_line(state)) {
            io_error = Some(e);
            return;
        }
        if let Err(e) = writeln!(
            diags,
            "{},{},{},{},{},{}",
            format_float(state.t),
            format_float(state.area),
            format_float(state.perimeter),
            format_float(state.max_speed),
            format_float(state.c1_fill),
            state.rechart_count
        ) {
            io_error = Some(e);
        }
    })?;
    if let Some(e) = io_error {
        return Err(CliError::Config(format!("write failed: {e}")));
    }
    snaps.flush().ok();
    diags.flush().ok();
    println!(
        "integrated to t = {:.6}: area {:.12}, perimeter {:.12}, {} chart switch(es)",
        final_state.t, final_state.area, final_state.perimeter, final_state.rechart_count
    );
    Ok(())
}

fn cmd_laplace(path: &PathBuf) -> Result<(), CliError> {
    let cfg: LaplaceConfig = load_config(path)?;
    let dom = build_domain(&cfg.domain)?;
    let bd = boundary_geometry(&dom)?;
    let g = match &cfg.data {
        BoundaryData::Named(name) if name == "curvature" => -&bd.curvature_field(),
        BoundaryData::Named(other) => {
            return Err(CliError::Config(format!(
                "unknown boundary data '{other}' (expected \"curvature\" or a field)"
            )))
        }
        BoundaryData::Field(spec) => spec.to_field(dom.n())?,
    };
    let vn = solve_dirichlet(&bd, &g)?;

    let mut out: Box<dyn Write> = match &cfg.output {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Config(format!("{p}: {e}")))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    writeln!(out, "s,x,y,dnu").ok();
    let base = dom.chart().base();
    for j in 0..dom.n() {
        let p = bd.points()[j];
        writeln!(
            out,
            "{},{},{},{}",
            format_float(base.param(j)),
            format_float(p.x),
            format_float(p.y),
            format_float(vn.value(j))
        )
        .ok();
    }
    out.flush().ok();
    Ok(())
}

fn cmd_transition(path: &PathBuf) -> Result<(), CliError> {
    let cfg: TransitionConfig = load_config(path)?;
    let mut src = build_domain(&cfg.src)?;
    for g in &cfg.apply {
        g.validate()?;
        src = act(g, &src);
    }
    let dst = build_domain(&cfg.dst)?;
    let dst_chart = dst.chart().clone();

    let rho2 = transition(&src, &dst_chart)?;
    let dom2 = DomainRep::in_collar(dst_chart, rho2.clone())?;
    let back = transition(&dom2, src.chart())?;
    let round_trip = (&back - src.rho()).max_abs();
    let hd = hausdorff_distance(&src.boundary_samples(), &dom2.boundary_samples());

    let rho_strs: Vec<String> = rho2.values().iter().map(|v| format_float(*v)).collect();
    println!(
        "{{\"rho2\":[{}],\"roundtrip_c0_error\":{},\"boundary_hausdorff\":{},\"scale\":{}}}",
        rho_strs.join(","),
        format_float(round_trip),
        format_float(hd),
        format_float(src.scale())
    );
    Ok(())
}

fn cmd_check(suite: &str, seed: u64) -> Result<(), CliError> {
    let suites = Suite::parse(suite).ok_or_else(|| {
        CliError::Config(format!(
            "unknown suite '{suite}' (expected geometry|charts|bundle|groups|field|flow|all)"
        ))
    })?;
    let mut failures = 0usize;
    for s in suites {
        for r in run_suite(s, seed) {
            println!("{}", r.line());
            if !r.passed {
                failures += 1;
            }
        }
    }
    if failures > 0 {
        return Err(CliError::ChecksFailed(failures));
    }
    Ok(())
}
