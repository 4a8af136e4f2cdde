//! Design-space enumeration, evaluation, ranking and trend reports.
//!
//! A [`DesignSpace`] is a base design plus axes over the package degrees of
//! freedom. [`run_sweep`] evaluates the full Cartesian product in
//! deterministic lexicographic order (last axis fastest), gates every
//! response through the passivity and reciprocity checks, and extracts
//! per-frequency loss metrics into a [`SweepTable`] that serializes to CSV.

use std::fmt;
use std::io::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::circuit::assemble;
use crate::error::{Error, Result};
use crate::geometry::{validate, BondingSpec, PackageDesign};
use crate::network::{
    abcd_to_s, cascade, check_passivity, check_reciprocity, magnitude_db, FrequencyGrid,
    FrequencyResponse, DEFAULT_REFERENCE_IMPEDANCE,
};

const UM: f64 = 1e-6;

/// Total metric variation below which a trend counts as flat, in dB.
pub const DEFAULT_FLAT_THRESHOLD_DB: f64 = 0.05;

/// The sweepable package degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    CapResistivity,
    CapThickness,
    ViaDiameter,
    OxideThickness,
    Bonding,
}

impl SweepParameter {
    pub fn id(&self) -> &'static str {
        match self {
            SweepParameter::CapResistivity => "cap_resistivity",
            SweepParameter::CapThickness => "cap_thickness",
            SweepParameter::ViaDiameter => "via_diameter",
            SweepParameter::OxideThickness => "oxide_thickness",
            SweepParameter::Bonding => "bonding",
        }
    }

    /// Canonical unit for bare scalar values on this axis.
    pub fn canonical_unit(&self) -> &'static str {
        match self {
            SweepParameter::CapResistivity => "ohm.cm",
            SweepParameter::Bonding => "",
            _ => "um",
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cap_resistivity" => Ok(SweepParameter::CapResistivity),
            "cap_thickness" => Ok(SweepParameter::CapThickness),
            "via_diameter" => Ok(SweepParameter::ViaDiameter),
            "oxide_thickness" => Ok(SweepParameter::OxideThickness),
            "bonding" => Ok(SweepParameter::Bonding),
            other => Err(Error::domain(format!(
                "unknown sweep parameter {other:?}; expected one of cap_resistivity, \
                 cap_thickness, via_diameter, oxide_thickness, bonding"
            ))),
        }
    }
}

/// One value on a sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub enum AxisValue {
    /// Scalar in the parameter's native unit (ohm.cm for resistivity,
    /// metres for lengths).
    Scalar(f64),
    Bonding(BondingSpec),
}

impl AxisValue {
    /// Stable text label used as the CSV coordinate.
    pub fn label(&self, parameter: SweepParameter) -> String {
        match self {
            AxisValue::Scalar(v) => match parameter {
                SweepParameter::CapResistivity => format!("{v:.8e}"),
                _ => format!("{:.8e}", v / UM),
            },
            AxisValue::Bonding(spec) => spec.label(),
        }
    }
}

/// One axis: a parameter and its ordered value list.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    parameter: SweepParameter,
    values: Vec<AxisValue>,
}

impl SweepAxis {
    /// Scalar axis; values in ohm.cm for resistivity, metres otherwise.
    pub fn scalar(parameter: SweepParameter, values: Vec<f64>) -> Result<Self> {
        if parameter == SweepParameter::Bonding {
            return Err(Error::domain(
                "bonding axis takes bonding specs, not scalars",
            ));
        }
        if values.is_empty() {
            return Err(Error::domain(format!("axis {parameter} has no values")));
        }
        Ok(Self {
            parameter,
            values: values.into_iter().map(AxisValue::Scalar).collect(),
        })
    }

    pub fn bonding(values: Vec<BondingSpec>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("bonding axis has no values"));
        }
        Ok(Self {
            parameter: SweepParameter::Bonding,
            values: values.into_iter().map(AxisValue::Bonding).collect(),
        })
    }

    pub fn parameter(&self) -> SweepParameter {
        self.parameter
    }

    pub fn values(&self) -> &[AxisValue] {
        &self.values
    }

    fn apply(&self, design: &PackageDesign, index: usize) -> Result<PackageDesign> {
        match (&self.values[index], self.parameter) {
            (AxisValue::Scalar(v), SweepParameter::CapResistivity) => {
                design.with_cap_resistivity(*v)
            }
            (AxisValue::Scalar(v), SweepParameter::CapThickness) => design.with_cap_thickness(*v),
            (AxisValue::Scalar(v), SweepParameter::ViaDiameter) => design.with_via_diameter(*v),
            (AxisValue::Scalar(v), SweepParameter::OxideThickness) => {
                design.with_oxide_thickness(*v)
            }
            (AxisValue::Bonding(spec), SweepParameter::Bonding) => {
                design.with_bonding(spec.clone())
            }
            (value, parameter) => Err(Error::domain(format!(
                "axis value {value:?} does not fit parameter {parameter}"
            ))),
        }
    }
}

/// A base design and the axes swept around it.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpace {
    base: PackageDesign,
    axes: Vec<SweepAxis>,
}

impl DesignSpace {
    pub fn new(base: PackageDesign, axes: Vec<SweepAxis>) -> Result<Self> {
        let mut seen = Vec::new();
        for axis in &axes {
            if seen.contains(&axis.parameter()) {
                return Err(Error::domain(format!(
                    "duplicate sweep axis {}",
                    axis.parameter()
                )));
            }
            seen.push(axis.parameter());
        }
        Ok(Self { base, axes })
    }

    pub fn base(&self) -> &PackageDesign {
        &self.base
    }

    pub fn axes(&self) -> &[SweepAxis] {
        &self.axes
    }

    /// Number of design points: the product of axis cardinalities.
    pub fn cardinality(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }
}

/// What to extract from each response: a loss kind at one frequency
/// (nearest grid point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    pub kind: MetricKind,
    pub frequency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// 20 log10 |s11|.
    ReturnLossDb,
    /// 20 log10 |s21|.
    InsertionLossDb,
}

impl MetricKind {
    pub fn id(&self) -> &'static str {
        match self {
            MetricKind::ReturnLossDb => "return_loss_db",
            MetricKind::InsertionLossDb => "insertion_loss_db",
        }
    }
}

impl Metric {
    pub fn return_loss(frequency: f64) -> Self {
        Metric {
            kind: MetricKind::ReturnLossDb,
            frequency,
        }
    }

    pub fn insertion_loss(frequency: f64) -> Self {
        Metric {
            kind: MetricKind::InsertionLossDb,
            frequency,
        }
    }

    /// The default report set: both losses at 5, 6, 7 and 8 GHz, insertion
    /// loss first.
    pub fn default_set() -> Vec<Metric> {
        let mut metrics = Vec::new();
        for f_ghz in [5.0, 6.0, 7.0, 8.0] {
            metrics.push(Metric::insertion_loss(f_ghz * 1e9));
        }
        for f_ghz in [5.0, 6.0, 7.0, 8.0] {
            metrics.push(Metric::return_loss(f_ghz * 1e9));
        }
        metrics
    }

    /// CSV column name, e.g. `return_loss_db@5GHz`.
    pub fn column_name(&self) -> String {
        let f_ghz = self.frequency / 1e9;
        if (f_ghz - f_ghz.round()).abs() < 1e-9 {
            format!("{}@{}GHz", self.kind.id(), f_ghz.round() as i64)
        } else {
            format!("{}@{}GHz", self.kind.id(), f_ghz)
        }
    }

    /// Extracts the dB value at the nearest grid point.
    pub fn extract(&self, response: &FrequencyResponse) -> Option<f64> {
        let index = response.nearest_index(self.frequency)?;
        let point = &response.points()[index];
        Some(match self.kind {
            MetricKind::ReturnLossDb => magnitude_db(point.s11),
            MetricKind::InsertionLossDb => magnitude_db(point.s21),
        })
    }

    /// Monotone loss measure: larger means lossier. Insertion loss flips
    /// sign (s21 nearer 0 dB is better); return loss keeps it (more
    /// negative s11 is better).
    pub fn loss_measure(&self, db_value: f64) -> f64 {
        match self.kind {
            MetricKind::ReturnLossDb => db_value,
            MetricKind::InsertionLossDb => -db_value,
        }
    }
}

/// One evaluated design point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// (parameter id, value label) per axis, in axis order.
    pub coordinates: Vec<(String, String)>,
    /// One entry per requested metric; None when evaluation failed.
    pub metrics: Vec<Option<f64>>,
    /// Geometry validation warnings for this point.
    pub flags: Vec<String>,
    /// Evaluation failure, if any.
    pub error: Option<String>,
}

/// The full sweep result: axis structure, metric declarations and rows in
/// lexicographic axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    axis_parameters: Vec<SweepParameter>,
    axis_cardinalities: Vec<usize>,
    metrics: Vec<Metric>,
    rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    pub fn metrics(&self) -> &[Metric] {
        &self.metrics
    }

    pub fn axis_parameters(&self) -> &[SweepParameter] {
        &self.axis_parameters
    }

    pub fn metric_index(&self, metric: &Metric) -> Option<usize> {
        self.metrics.iter().position(|m| m == metric)
    }

    /// Row indices walking one axis while every other axis sits at its
    /// first value.
    pub fn rows_along_axis(&self, axis: usize) -> Result<Vec<usize>> {
        if axis >= self.axis_cardinalities.len() {
            return Err(Error::domain(format!("axis index {axis} out of range")));
        }
        let stride: usize = self.axis_cardinalities[axis + 1..].iter().product();
        Ok((0..self.axis_cardinalities[axis])
            .map(|i| i * stride)
            .collect())
    }

    /// Serializes the table as RFC-4180 CSV with a header row: axis ids,
    /// then metric columns, then `flags`. Numbers carry nine significant
    /// digits.
    pub fn to_csv_string(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = self
            .axis_parameters
            .iter()
            .map(|p| p.id().to_string())
            .collect();
        header.extend(self.metrics.iter().map(|m| m.column_name()));
        header.push("flags".to_string());
        writer
            .write_record(&header)
            .map_err(|e| Error::domain(format!("csv serialization failed: {e}")))?;

        for row in &self.rows {
            let mut record: Vec<String> = row
                .coordinates
                .iter()
                .map(|(_, label)| label.clone())
                .collect();
            for value in &row.metrics {
                record.push(match value {
                    Some(v) => format!("{v:.8e}"),
                    None => String::new(),
                });
            }
            let mut flags = row.flags.clone();
            if let Some(err) = &row.error {
                flags.push(format!("error: {err}"));
            }
            record.push(flags.join("; "));
            writer
                .write_record(&record)
                .map_err(|e| Error::domain(format!("csv serialization failed: {e}")))?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::domain(format!("csv serialization failed: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::domain(format!("csv not utf-8: {e}")))
    }

    pub fn write_csv(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let text = self.to_csv_string()?;
        let mut file = std::fs::File::create(path)?;
        file.write_all(text.as_bytes())?;
        Ok(())
    }
}

/// Evaluates one design over a grid at the default 50-ohm reference.
pub fn evaluate(design: &PackageDesign, grid: &FrequencyGrid) -> Result<FrequencyResponse> {
    evaluate_with(design, grid, DEFAULT_REFERENCE_IMPEDANCE)
}

/// Evaluates one design over a grid: assemble, cascade and convert at each
/// frequency, then gate the whole response through the passivity and
/// reciprocity checks.
pub fn evaluate_with(
    design: &PackageDesign,
    grid: &FrequencyGrid,
    z_ref: f64,
) -> Result<FrequencyResponse> {
    let points = grid
        .values()
        .into_iter()
        .map(|frequency| {
            let chain = assemble(design, frequency)?;
            let product = cascade(&chain.to_two_ports())?;
            abcd_to_s(&product, z_ref)
        })
        .collect::<Result<Vec<_>>>()?;
    let response = FrequencyResponse::new(points)?;

    let passivity = check_passivity(&response);
    if !passivity.pass {
        return Err(Error::CheckFailed(format!(
            "passivity violated: max singular value {:.3e} at {:.3e} Hz exceeds 1 + {:.0e}",
            passivity.worst_singular_value, passivity.worst_frequency, passivity.tolerance
        )));
    }
    let reciprocity = check_reciprocity(&response);
    if !reciprocity.pass {
        return Err(Error::CheckFailed(format!(
            "reciprocity violated: |s12 - s21| = {:.3e} at {:.3e} Hz exceeds {:.0e}",
            reciprocity.worst_defect, reciprocity.worst_frequency, reciprocity.tolerance
        )));
    }
    Ok(response)
}

/// Execution options for [`run_sweep_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub parallel: bool,
    pub reference_impedance: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            parallel: true,
            reference_impedance: DEFAULT_REFERENCE_IMPEDANCE,
        }
    }
}

/// Runs the full Cartesian sweep in parallel. Row order is lexicographic in
/// axis order (last axis fastest) regardless of scheduling.
pub fn run_sweep(space: &DesignSpace, grid: &FrequencyGrid, metrics: &[Metric]) -> SweepTable {
    run_sweep_with(space, grid, metrics, SweepOptions::default())
}

/// [`run_sweep`] with explicit options; serial and parallel execution
/// produce identical tables.
pub fn run_sweep_with(
    space: &DesignSpace,
    grid: &FrequencyGrid,
    metrics: &[Metric],
    options: SweepOptions,
) -> SweepTable {
    let cards: Vec<usize> = space.axes().iter().map(|a| a.values().len()).collect();
    let total = space.cardinality();

    let evaluate_point = |flat: usize| -> SweepRow {
        let indices = unflatten(flat, &cards);
        let mut coordinates = Vec::with_capacity(indices.len());
        let mut design = Ok(space.base().clone());
        for (axis, &value_index) in space.axes().iter().zip(&indices) {
            coordinates.push((
                axis.parameter().id().to_string(),
                axis.values()[value_index].label(axis.parameter()),
            ));
            design = design.and_then(|d| axis.apply(&d, value_index));
        }
        match design {
            Ok(design) => {
                let flags = validate(&design).iter().map(|v| v.to_string()).collect();
                match evaluate_with(&design, grid, options.reference_impedance) {
                    Ok(response) => SweepRow {
                        coordinates,
                        metrics: metrics.iter().map(|m| m.extract(&response)).collect(),
                        flags,
                        error: None,
                    },
                    Err(e) => SweepRow {
                        coordinates,
                        metrics: vec![None; metrics.len()],
                        flags,
                        error: Some(e.to_string()),
                    },
                }
            }
            Err(e) => SweepRow {
                coordinates,
                metrics: vec![None; metrics.len()],
                flags: Vec::new(),
                error: Some(e.to_string()),
            },
        }
    };

    let rows: Vec<SweepRow> = if options.parallel {
        (0..total).into_par_iter().map(evaluate_point).collect()
    } else {
        (0..total).map(evaluate_point).collect()
    };

    SweepTable {
        axis_parameters: space.axes().iter().map(|a| a.parameter()).collect(),
        axis_cardinalities: cards,
        metrics: metrics.to_vec(),
        rows,
    }
}

/// Odometer decode of a flat row index, last axis fastest.
fn unflatten(mut flat: usize, cards: &[usize]) -> Vec<usize> {
    let mut indices = vec![0; cards.len()];
    for (slot, &card) in indices.iter_mut().zip(cards).rev() {
        *slot = flat % card;
        flat /= card;
    }
    indices
}

/// Ranks table rows best (least lossy) first by the given metric. The sort
/// is stable over the lexicographic row order, which breaks ties; rows that
/// failed to evaluate sink to the end.
pub fn rank(table: &SweepTable, metric: &Metric) -> Result<Vec<usize>> {
    let column = table.metric_index(metric).ok_or_else(|| {
        Error::domain(format!("metric {} absent from table", metric.column_name()))
    })?;
    let mut order: Vec<usize> = (0..table.rows.len()).collect();
    order.sort_by(|&i, &j| {
        let loss = |row: usize| table.rows[row].metrics[column].map(|v| metric.loss_measure(v));
        match (loss(i), loss(j)) {
            (Some(a), Some(b)) => a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }
    });
    Ok(order)
}

/// Monotonicity classes for a metric along an axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    /// Total variation below the flat threshold.
    Flat,
    /// Loss grows along the axis.
    IncreasingLoss,
    /// Loss shrinks along the axis.
    DecreasingLoss,
    NonMonotonic,
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trend::Flat => write!(f, "flat"),
            Trend::IncreasingLoss => write!(f, "increasing loss"),
            Trend::DecreasingLoss => write!(f, "decreasing loss"),
            Trend::NonMonotonic => write!(f, "non-monotonic"),
        }
    }
}

/// Trend of one metric along one axis (other axes at their first value).
#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    pub parameter: SweepParameter,
    pub metric: Metric,
    pub trend: Trend,
    /// Sum of |successive differences| of the metric, dB.
    pub total_variation_db: f64,
    pub flat_threshold_db: f64,
    /// (coordinate label, metric dB) along the axis.
    pub samples: Vec<(String, f64)>,
}

impl fmt::Display for TrendReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vs {}: {} (total variation {:.4} dB)",
            self.metric.column_name(),
            self.parameter,
            self.trend,
            self.total_variation_db
        )
    }
}

/// Classifies a metric against an axis with the default flat threshold.
pub fn trend_report(
    table: &SweepTable,
    parameter: SweepParameter,
    metric: &Metric,
) -> Result<TrendReport> {
    trend_report_with(table, parameter, metric, DEFAULT_FLAT_THRESHOLD_DB)
}

/// Classifies a metric against an axis. The axis needs at least two values;
/// rows come from walking that axis with every other axis at its first
/// value.
pub fn trend_report_with(
    table: &SweepTable,
    parameter: SweepParameter,
    metric: &Metric,
    flat_threshold_db: f64,
) -> Result<TrendReport> {
    let axis = table
        .axis_parameters
        .iter()
        .position(|p| *p == parameter)
        .ok_or_else(|| Error::domain(format!("axis {parameter} absent from table")))?;
    if table.axis_cardinalities[axis] < 2 {
        return Err(Error::domain(format!(
            "axis {parameter} needs at least two values for a trend"
        )));
    }
    let column = table.metric_index(metric).ok_or_else(|| {
        Error::domain(format!("metric {} absent from table", metric.column_name()))
    })?;

    let mut samples = Vec::new();
    for row_index in table.rows_along_axis(axis)? {
        let row = &table.rows[row_index];
        let value = row.metrics[column].ok_or_else(|| {
            Error::domain(format!(
                "row {row_index} failed to evaluate; no trend available: {}",
                row.error.as_deref().unwrap_or("unknown")
            ))
        })?;
        samples.push((row.coordinates[axis].1.clone(), value));
    }

    let losses: Vec<f64> = samples
        .iter()
        .map(|(_, v)| metric.loss_measure(*v))
        .collect();
    let diffs: Vec<f64> = losses.windows(2).map(|w| w[1] - w[0]).collect();
    let total_variation_db: f64 = diffs.iter().map(|d| d.abs()).sum();

    let trend = if total_variation_db < flat_threshold_db {
        Trend::Flat
    } else if diffs.iter().all(|&d| d >= 0.0) {
        Trend::IncreasingLoss
    } else if diffs.iter().all(|&d| d <= 0.0) {
        Trend::DecreasingLoss
    } else {
        Trend::NonMonotonic
    };

    Ok(TrendReport {
        parameter,
        metric: *metric,
        trend,
        total_variation_db,
        flat_threshold_db,
        samples,
    })
}

/// Configuration for [`bonding_comparison`].
#[derive(Debug, Clone, PartialEq)]
pub struct BondingComparisonConfig {
    pub reflow_target_radius: f64,
    pub adhesive_thicknesses: Vec<f64>,
    pub adhesive_conductivity: f64,
    pub reference_frequencies: Vec<f64>,
    pub reference_impedance: f64,
}

impl Default for BondingComparisonConfig {
    /// Reflow to 40 um, glue layers of 5 and 10 um at the catalog adhesive
    /// conductivity, deltas reported at 5 and 6 GHz in a 50-ohm system.
    fn default() -> Self {
        Self {
            reflow_target_radius: 40.0 * UM,
            adhesive_thicknesses: vec![5.0 * UM, 10.0 * UM],
            adhesive_conductivity: 1.0e5,
            reference_frequencies: vec![5.0e9, 6.0e9],
            reference_impedance: DEFAULT_REFERENCE_IMPEDANCE,
        }
    }
}

/// One bonding variant's losses and offsets from the unbonded baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct BondingVariantReport {
    pub label: String,
    /// (frequency, s11 dB, s21 dB) at each reference frequency.
    pub values: Vec<(f64, f64, f64)>,
    /// (frequency, delta s11 dB, delta s21 dB) against the `none` variant.
    pub deltas: Vec<(f64, f64, f64)>,
    /// Largest |delta s21| anywhere on the evaluated grid, dB.
    pub max_abs_delta_s21_db: f64,
}

/// Bonding-step comparison: the base design evaluated unbonded, reflowed
/// and glued.
#[derive(Debug, Clone, PartialEq)]
pub struct BondingComparison {
    pub variants: Vec<BondingVariantReport>,
}

impl fmt::Display for BondingComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "bonding comparison (offsets against the unbonded design):"
        )?;
        for variant in &self.variants {
            writeln!(f, "  {}", variant.label)?;
            for ((freq, s11, s21), (_, d11, d21)) in variant.values.iter().zip(&variant.deltas) {
                writeln!(
                    f,
                    "    @{:.3} GHz  s11 {:8.3} dB (delta {:+.3})   s21 {:8.4} dB (delta {:+.4})",
                    freq / 1e9,
                    s11,
                    d11,
                    s21,
                    d21
                )?;
            }
            writeln!(
                f,
                "    max |delta s21| over grid: {:.5} dB",
                variant.max_abs_delta_s21_db
            )?;
        }
        writeln!(
            f,
            "note: the adhesive enters as a purely resistive series layer plus added stand-off;\n\
             distributed coupling through the glue is outside this lumped model, so adhesive\n\
             reflection offsets are indicative only."
        )
    }
}

/// Evaluates the canonical bonding variants of a base design and reports
/// dB offsets against the unbonded case.
pub fn bonding_comparison(
    base: &PackageDesign,
    grid: &FrequencyGrid,
    config: &BondingComparisonConfig,
) -> Result<BondingComparison> {
    let mut variants: Vec<(String, BondingSpec)> = vec![
        ("none".to_string(), BondingSpec::None),
        (
            format!("reflow to {:.1} um", config.reflow_target_radius / UM),
            BondingSpec::Reflow {
                target_radius: config.reflow_target_radius,
            },
        ),
    ];
    for &thickness in &config.adhesive_thicknesses {
        variants.push((
            format!("adhesive {:.1} um", thickness / UM),
            BondingSpec::Adhesive {
                conductivity: config.adhesive_conductivity,
                thickness,
            },
        ));
    }

    let responses = variants
        .iter()
        .map(|(label, bonding)| {
            let design = base.with_bonding(bonding.clone())?;
            Ok((
                label.clone(),
                evaluate_with(&design, grid, config.reference_impedance)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let baseline = &responses[0].1;
    let reports = responses
        .iter()
        .map(|(label, response)| {
            let mut values = Vec::new();
            let mut deltas = Vec::new();
            for &freq in &config.reference_frequencies {
                let index = response
                    .nearest_index(freq)
                    .ok_or_else(|| Error::domain("empty response in bonding comparison"))?;
                let point = &response.points()[index];
                let base_point = &baseline.points()[index];
                let s11 = magnitude_db(point.s11);
                let s21 = magnitude_db(point.s21);
                values.push((point.frequency, s11, s21));
                deltas.push((
                    point.frequency,
                    s11 - magnitude_db(base_point.s11),
                    s21 - magnitude_db(base_point.s21),
                ));
            }
            let max_abs_delta_s21_db = response
                .points()
                .iter()
                .zip(baseline.points())
                .map(|(p, b)| (magnitude_db(p.s21) - magnitude_db(b.s21)).abs())
                .fold(0.0, f64::max);
            Ok(BondingVariantReport {
                label: label.clone(),
                values,
                deltas,
                max_abs_delta_s21_db,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(BondingComparison { variants: reports })
}
