//! Batch CLI for the capped transmission line model.
//!
//! Exit status: 0 when all physical-consistency gates pass and all outputs
//! are written; 1 for run failures (gate violations, write errors); 2 for
//! configuration problems (bad files, bad option values).

mod units;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use capline::design_file::{load_design, load_stack};
use capline::geometry::{reflow, standoff_gap, validate, BondingSpec, BumpGeometry, PackageDesign};
use capline::materials::{collapse_stack, thickness_fraction, MaterialCatalog, MaterialLayer};
use capline::network::{magnitude_db, FrequencyGrid};
use capline::sweep::{
    bonding_comparison, evaluate_with, rank, run_sweep_with, trend_report, BondingComparisonConfig,
    DesignSpace, Metric, MetricKind, SweepAxis, SweepOptions, SweepParameter,
};
use capline::touchstone::write_touchstone;

#[derive(Parser)]
#[command(
    name = "capline",
    about = "Capped RF transmission line modeling: S-parameters and package design sweeps",
    long_about = "Models a wafer-level-packaged RF line (through-substrate vias, solder bumps, \
                  silicon cap) as a two-port cascade, computes S-parameters over frequency, and \
                  sweeps package parameters to rank designs by RF loss.\n\n\
                  Numeric option values carry explicit unit suffixes (26.3um, 5GHz, 2kohm.cm, \
                  50ohm); bare numbers are rejected. Sweep-axis values may omit the suffix and \
                  default to the axis unit (ohm.cm for cap_resistivity, um for the others)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one design over a frequency grid and write a Touchstone .s2p file
    Simulate(SimulateArgs),
    /// Evaluate the Cartesian design space and write a CSV sweep table plus trend report
    Sweep(SweepArgs),
    /// Collapse a conductive layer stack to one effective layer
    Collapse(CollapseArgs),
    /// Apply the volume-conserving bump reflow transform
    Reflow(ReflowArgs),
    /// Compare bonding variants (unbonded, reflow, adhesive) of one design
    Report(ReportArgs),
}

#[derive(Args)]
struct CommonRunArgs {
    /// Design file path, or the built-in preset name `paper-default`
    #[arg(long, value_name = "FILE|paper-default")]
    design: String,

    /// Materials catalog file overriding the built-in handbook values
    #[arg(long, value_name = "FILE")]
    materials: Option<PathBuf>,

    /// Frequency grid as start:stop:points with unit suffixes
    #[arg(
        long,
        value_name = "START:STOP:POINTS",
        default_value = "0.1GHz:10GHz:199"
    )]
    grid: String,

    /// Reference impedance, unit-suffixed
    #[arg(long, value_name = "IMPEDANCE", default_value = "50ohm")]
    zref: String,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonRunArgs,

    /// Output Touchstone file
    #[arg(long, value_name = "FILE.s2p")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonRunArgs,

    /// Sweep axis as `param=v1,v2,...` or `param=start:stop:step`; repeatable.
    /// Parameters: cap_resistivity, cap_thickness, via_diameter,
    /// oxide_thickness, bonding (values: none, reflow:RADIUS, adhesive:THICKNESS)
    #[arg(long = "axis", value_name = "PARAM=VALUES")]
    axes: Vec<String>,

    /// Metric as `return_loss@5GHz` or `insertion_loss@5GHz`; repeatable.
    /// Defaults to both kinds at 5, 6, 7 and 8 GHz.
    #[arg(long = "metric", value_name = "KIND@FREQ")]
    metrics: Vec<String>,

    /// Output CSV file
    #[arg(long, value_name = "FILE.csv")]
    out: PathBuf,

    /// Also write the trend report to this file
    #[arg(long, value_name = "FILE.txt")]
    trend_out: Option<PathBuf>,

    /// Evaluate design points serially instead of in parallel
    #[arg(long)]
    serial: bool,
}

#[derive(Args)]
struct CollapseArgs {
    /// Layer stack file
    #[arg(long, value_name = "FILE")]
    stack: PathBuf,

    /// Materials catalog file overriding the built-in handbook values
    #[arg(long, value_name = "FILE")]
    materials: Option<PathBuf>,
}

#[derive(Args)]
struct ReflowArgs {
    /// Bump height, unit-suffixed
    #[arg(long = "h", value_name = "LENGTH")]
    height: String,

    /// Bump radius, unit-suffixed
    #[arg(long = "r", value_name = "LENGTH")]
    radius: String,

    /// Post-reflow radius, unit-suffixed
    #[arg(long = "r-eff", value_name = "LENGTH")]
    r_eff: String,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    common: CommonRunArgs,

    /// Reflow target radius for the comparison
    #[arg(long, value_name = "LENGTH", default_value = "40um")]
    reflow_radius: String,

    /// Adhesive layer thicknesses, comma-separated, unit-suffixed
    #[arg(long, value_name = "LENGTHS", default_value = "5um,10um")]
    adhesive_thicknesses: String,
}

/// Configuration problems exit 2; run failures exit 1.
enum CliError {
    Config(String),
    Run(String),
}

impl CliError {
    fn config(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }

    fn run(e: impl std::fmt::Display) -> Self {
        CliError::Run(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Collapse(args) => cmd_collapse(args),
        Command::Reflow(args) => cmd_reflow(args),
        Command::Report(args) => cmd_report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Run(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Config(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

struct RunConfig {
    design: PackageDesign,
    catalog: MaterialCatalog,
    grid: FrequencyGrid,
    z_ref: f64,
}

fn load_run_config(common: &CommonRunArgs) -> Result<RunConfig, CliError> {
    let catalog = match &common.materials {
        Some(path) => MaterialCatalog::load(path).map_err(CliError::config)?,
        None => MaterialCatalog::builtin(),
    };
    let design = if common.design == "paper-default" {
        PackageDesign::paper_default()
    } else {
        load_design(&common.design, &catalog).map_err(CliError::config)?
    };
    let (start, stop, points) = units::parse_grid_spec(&common.grid).map_err(CliError::Config)?;
    let grid = FrequencyGrid::new(start, stop, points).map_err(CliError::config)?;
    let z_ref = units::parse_impedance(&common.zref).map_err(CliError::Config)?;
    if !z_ref.is_finite() || z_ref <= 0.0 {
        return Err(CliError::Config(format!(
            "reference impedance must be positive, got {z_ref}"
        )));
    }
    Ok(RunConfig {
        design,
        catalog,
        grid,
        z_ref,
    })
}

fn print_validation(design: &PackageDesign) {
    for violation in validate(design) {
        println!("warning: {violation}");
    }
}

/// Frequencies at which summaries quote losses: 5-8 GHz clipped to the grid.
fn summary_frequencies(grid: &FrequencyGrid) -> Vec<f64> {
    [5e9, 6e9, 7e9, 8e9]
        .into_iter()
        .filter(|f| *f >= grid.start() && *f <= grid.stop())
        .collect()
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let config = load_run_config(&args.common)?;
    print_validation(&config.design);

    let response =
        evaluate_with(&config.design, &config.grid, config.z_ref).map_err(CliError::run)?;
    write_touchstone(&response, &args.out).map_err(CliError::run)?;

    println!(
        "wrote {} ({} points, {:.3}-{:.3} GHz, {} ohm reference)",
        args.out.display(),
        response.len(),
        config.grid.start() / 1e9,
        config.grid.stop() / 1e9,
        config.z_ref
    );
    for f in summary_frequencies(&config.grid) {
        let i = response.nearest_index(f).expect("non-empty response");
        let point = &response.points()[i];
        println!(
            "  @{:.3} GHz  s11 {:8.3} dB   s21 {:9.4} dB",
            point.frequency / 1e9,
            magnitude_db(point.s11),
            magnitude_db(point.s21)
        );
    }
    Ok(())
}

fn parse_metric_spec(text: &str) -> Result<Metric, String> {
    let (kind, freq) = text
        .split_once('@')
        .ok_or_else(|| format!("metric {text:?} must be KIND@FREQ, e.g. insertion_loss@5GHz"))?;
    let kind = match kind {
        "return_loss" | "s11" => MetricKind::ReturnLossDb,
        "insertion_loss" | "s21" => MetricKind::InsertionLossDb,
        other => {
            return Err(format!(
                "unknown metric kind {other:?}; expected return_loss or insertion_loss"
            ))
        }
    };
    Ok(Metric {
        kind,
        frequency: units::parse_frequency(freq)?,
    })
}

/// Scalar axis values: bare numbers take the axis's canonical unit
/// (ohm.cm for resistivity, um for lengths); suffixed values are converted.
fn parse_axis_scalar(text: &str, parameter: SweepParameter) -> Result<f64, String> {
    if let Ok(bare) = text.parse::<f64>() {
        return Ok(match parameter {
            SweepParameter::CapResistivity => bare,
            _ => bare * 1e-6,
        });
    }
    match parameter {
        SweepParameter::CapResistivity => units::parse_resistivity(text),
        _ => units::parse_length(text),
    }
}

fn parse_bonding_value(text: &str, catalog: &MaterialCatalog) -> Result<BondingSpec, String> {
    if text == "none" {
        return Ok(BondingSpec::None);
    }
    if let Some(radius) = text.strip_prefix("reflow:") {
        return Ok(BondingSpec::Reflow {
            target_radius: parse_axis_scalar(radius, SweepParameter::ViaDiameter)?,
        });
    }
    if let Some(thickness) = text.strip_prefix("adhesive:") {
        return Ok(BondingSpec::Adhesive {
            conductivity: catalog
                .conductivity("conductive_adhesive")
                .map_err(|e| e.to_string())?,
            thickness: parse_axis_scalar(thickness, SweepParameter::OxideThickness)?,
        });
    }
    Err(format!(
        "bonding value {text:?} must be none, reflow:RADIUS or adhesive:THICKNESS"
    ))
}

fn parse_axis_spec(text: &str, catalog: &MaterialCatalog) -> Result<SweepAxis, String> {
    let (name, values) = text
        .split_once('=')
        .ok_or_else(|| format!("axis {text:?} must be PARAM=VALUES"))?;
    let parameter: SweepParameter = name.parse().map_err(|e| format!("{e}"))?;

    if parameter == SweepParameter::Bonding {
        let specs = values
            .split(',')
            .map(|v| parse_bonding_value(v.trim(), catalog))
            .collect::<Result<Vec<_>, _>>()?;
        return SweepAxis::bonding(specs).map_err(|e| e.to_string());
    }

    // range form start:stop:step, else comma list
    let scalars = if values.contains(':') {
        let parts: Vec<&str> = values.split(':').collect();
        if parts.len() != 3 {
            return Err(format!(
                "axis range {values:?} must be start:stop:step, e.g. 40:100:10"
            ));
        }
        let start = parse_axis_scalar(parts[0], parameter)?;
        let stop = parse_axis_scalar(parts[1], parameter)?;
        let step = parse_axis_scalar(parts[2], parameter)?;
        if !step.is_finite() || step <= 0.0 || stop < start {
            return Err(format!(
                "axis range {values:?} must ascend with a positive step"
            ));
        }
        let mut out = Vec::new();
        let mut index = 0usize;
        loop {
            let v = start + step * index as f64;
            if v > stop * (1.0 + 1e-12) {
                break;
            }
            out.push(v);
            index += 1;
        }
        out
    } else {
        values
            .split(',')
            .map(|v| parse_axis_scalar(v.trim(), parameter))
            .collect::<Result<Vec<_>, _>>()?
    };
    SweepAxis::scalar(parameter, scalars).map_err(|e| e.to_string())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let config = load_run_config(&args.common)?;

    let axes = args
        .axes
        .iter()
        .map(|spec| parse_axis_spec(spec, &config.catalog))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Config)?;
    let metrics = if args.metrics.is_empty() {
        Metric::default_set()
    } else {
        args.metrics
            .iter()
            .map(|spec| parse_metric_spec(spec))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::Config)?
    };

    let space = DesignSpace::new(config.design, axes).map_err(CliError::config)?;
    let table = run_sweep_with(
        &space,
        &config.grid,
        &metrics,
        SweepOptions {
            parallel: !args.serial,
            reference_impedance: config.z_ref,
        },
    );
    table.write_csv(&args.out).map_err(CliError::run)?;
    println!("wrote {} ({} rows)", args.out.display(), table.rows().len());

    // ranking by the first metric
    let lead_metric = &metrics[0];
    let order = rank(&table, lead_metric).map_err(CliError::run)?;
    println!("ranking by {} (best first):", lead_metric.column_name());
    for (position, &row_index) in order.iter().enumerate().take(10) {
        let row = &table.rows()[row_index];
        let coords: Vec<String> = row
            .coordinates
            .iter()
            .map(|(id, label)| format!("{id}={label}"))
            .collect();
        let value = match row.metrics[table.metric_index(lead_metric).expect("lead metric")] {
            Some(v) => format!("{v:.4} dB"),
            None => "failed".to_string(),
        };
        println!(
            "  {}. {} -> {}",
            position + 1,
            if coords.is_empty() {
                "base design".to_string()
            } else {
                coords.join(", ")
            },
            value
        );
    }

    // trends for every axis with at least two values, against every metric
    let mut trend_text = String::new();
    for axis in space.axes() {
        if axis.values().len() < 2 {
            continue;
        }
        for metric in &metrics {
            match trend_report(&table, axis.parameter(), metric) {
                Ok(report) => trend_text.push_str(&format!("{report}\n")),
                Err(e) => trend_text.push_str(&format!(
                    "{} vs {}: unavailable ({e})\n",
                    metric.column_name(),
                    axis.parameter()
                )),
            }
        }
    }
    if !trend_text.is_empty() {
        print!("{trend_text}");
    }
    if let Some(path) = &args.trend_out {
        std::fs::write(path, trend_text).map_err(CliError::run)?;
        println!("wrote {}", path.display());
    }

    let failures = table.rows().iter().filter(|r| r.error.is_some()).count();
    if failures > 0 {
        return Err(CliError::Run(format!(
            "{failures} of {} design points failed evaluation (see flags column)",
            table.rows().len()
        )));
    }
    Ok(())
}

fn cmd_collapse(args: CollapseArgs) -> Result<(), CliError> {
    let catalog = match &args.materials {
        Some(path) => MaterialCatalog::load(path).map_err(CliError::config)?,
        None => MaterialCatalog::builtin(),
    };
    let stack = load_stack(&args.stack, &catalog).map_err(CliError::config)?;

    for (index, layer) in stack.layers().iter().enumerate() {
        let x = thickness_fraction(&stack, index).map_err(CliError::run)?;
        println!(
            "layer {index}: {:<20} sigma {:.4e} S/m  thickness {:8.3} um  x = {:.4}",
            layer.name(),
            layer.conductivity(),
            layer.thickness() * 1e6,
            x
        );
    }
    let collapsed = collapse_stack(&stack);
    println!(
        "effective layer: sigma {:.6e} S/m, thickness {:.3} um",
        collapsed.conductivity(),
        collapsed.thickness() * 1e6
    );
    println!(
        "series resistance over {:.4e} m^2: {:.6e} ohm",
        stack.cross_section_area(),
        stack.series_resistance()
    );
    Ok(())
}

fn cmd_reflow(args: ReflowArgs) -> Result<(), CliError> {
    let height = units::parse_length(&args.height).map_err(CliError::Config)?;
    let radius = units::parse_length(&args.radius).map_err(CliError::Config)?;
    let r_eff = units::parse_length(&args.r_eff).map_err(CliError::Config)?;

    let bump = BumpGeometry::new(
        radius,
        vec![MaterialLayer::new("bump", 1.0, height).map_err(CliError::config)?],
    )
    .map_err(CliError::config)?;
    let spread = reflow(&bump, r_eff).map_err(CliError::config)?;

    println!(
        "before: radius {:.4} um, height {:.4} um, volume {:.6e} m^3",
        bump.radius() * 1e6,
        bump.height() * 1e6,
        bump.volume()
    );
    println!(
        "after:  radius {:.4} um, height {:.5} um, volume {:.6e} m^3 (conserved)",
        spread.radius() * 1e6,
        spread.height() * 1e6,
        spread.volume()
    );
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<(), CliError> {
    let config = load_run_config(&args.common)?;
    print_validation(&config.design);

    let reflow_target = units::parse_length(&args.reflow_radius).map_err(CliError::Config)?;
    let thicknesses = args
        .adhesive_thicknesses
        .split(',')
        .map(|t| units::parse_length(t.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Config)?;
    let comparison_config = BondingComparisonConfig {
        reflow_target_radius: reflow_target,
        adhesive_thicknesses: thicknesses,
        adhesive_conductivity: config
            .catalog
            .conductivity("conductive_adhesive")
            .map_err(CliError::config)?,
        reference_frequencies: summary_frequencies(&config.grid)
            .into_iter()
            .take(2)
            .collect(),
        reference_impedance: config.z_ref,
    };

    println!(
        "stand-off gap (as-designed): {:.4} um",
        standoff_gap(&config.design) * 1e6
    );
    let comparison = bonding_comparison(&config.design, &config.grid, &comparison_config)
        .map_err(CliError::run)?;
    print!("{comparison}");
    Ok(())
}
