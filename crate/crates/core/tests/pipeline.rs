//! End-to-end behavior of the assembled model: directional trends of the
//! package degrees of freedom and full-pipeline file round trips.

use capline::geometry::BondingSpec;
use capline::network::magnitude_db;
use capline::sweep::{
    bonding_comparison, evaluate, run_sweep, trend_report, BondingComparisonConfig, DesignSpace,
    Metric, SweepAxis, SweepParameter, Trend,
};
use capline::touchstone::{read_touchstone_from, write_touchstone_to};
use capline::{FrequencyGrid, PackageDesign};

const UM: f64 = 1e-6;

fn s11_db_at(design: &PackageDesign, grid: &FrequencyGrid, f: f64) -> f64 {
    let resp = evaluate(design, grid).unwrap();
    let i = resp.nearest_index(f).unwrap();
    magnitude_db(resp.points()[i].s11)
}

fn s21_db_at(design: &PackageDesign, grid: &FrequencyGrid, f: f64) -> f64 {
    let resp = evaluate(design, grid).unwrap();
    let i = resp.nearest_index(f).unwrap();
    magnitude_db(resp.points()[i].s21)
}

#[test]
fn cap_thickness_mildly_increases_loss() {
    let grid = FrequencyGrid::default();
    let base = PackageDesign::paper_default();
    let mut last = f64::NEG_INFINITY;
    let mut values = Vec::new();
    for t_um in [230.0, 250.0, 300.0] {
        let s21 = s21_db_at(&base.with_cap_thickness(t_um * UM).unwrap(), &grid, 8e9);
        assert!(
            s21 < last || last == f64::NEG_INFINITY,
            "{values:?} then {s21}"
        );
        last = s21;
        values.push(s21);
    }
    // thicker cap means a longer via: slightly lossier, but a weak effect
    let total_variation = (values[0] - values[2]).abs();
    assert!(
        total_variation < 0.05,
        "cap thickness swing {total_variation} dB"
    );
}

#[test]
fn oxide_trend_is_flat_on_high_resistivity_cap() {
    let grid = FrequencyGrid::default();
    let axes = vec![SweepAxis::scalar(
        SweepParameter::OxideThickness,
        vec![1e-6, 2e-6, 3e-6, 4e-6, 5e-6, 6e-6],
    )
    .unwrap()];
    let space = DesignSpace::new(PackageDesign::paper_default(), axes).unwrap();
    let metric = Metric::insertion_loss(6e9);
    let table = run_sweep(&space, &grid, &[metric]);
    let report = trend_report(&table, SweepParameter::OxideThickness, &metric).unwrap();
    assert_eq!(report.trend, Trend::Flat, "{report}");
}

#[test]
fn via_diameter_trend_is_reported_either_way() {
    // The lumped model need not reproduce a full-wave interior optimum; the
    // sweep must classify the trend and rank regardless.
    let grid = FrequencyGrid::default();
    let diameters: Vec<f64> = (4..=10).map(|d| d as f64 * 10.0 * UM).collect();
    let axes = vec![SweepAxis::scalar(SweepParameter::ViaDiameter, diameters).unwrap()];
    let space = DesignSpace::new(PackageDesign::paper_default(), axes).unwrap();
    let metric = Metric::insertion_loss(5e9);
    let table = run_sweep(&space, &grid, &[metric]);
    assert_eq!(table.rows().len(), 7);
    let report = trend_report(&table, SweepParameter::ViaDiameter, &metric).unwrap();
    assert!(
        matches!(
            report.trend,
            Trend::Flat | Trend::IncreasingLoss | Trend::DecreasingLoss | Trend::NonMonotonic
        ),
        "{report}"
    );
}

#[test]
fn adhesive_thickens_the_standoff_and_stays_transmission_neutral() {
    let grid = FrequencyGrid::default();
    let report = bonding_comparison(
        &PackageDesign::paper_default(),
        &grid,
        &BondingComparisonConfig::default(),
    )
    .unwrap();
    for variant in &report.variants[2..] {
        assert!(variant.max_abs_delta_s21_db < 0.05, "{}", variant.label);
    }
}

#[test]
fn reflow_raises_reflection_at_5ghz_and_leaves_s21_alone() {
    let grid = FrequencyGrid::default();
    let base = PackageDesign::paper_default();
    let reflowed = base
        .with_bonding(BondingSpec::Reflow {
            target_radius: 40.0 * UM,
        })
        .unwrap();
    let s11_base = s11_db_at(&base, &grid, 5e9);
    let s11_reflow = s11_db_at(&reflowed, &grid, 5e9);
    assert!(s11_reflow > s11_base, "{s11_reflow} vs {s11_base}");

    let ds21 = (s21_db_at(&reflowed, &grid, 5e9) - s21_db_at(&base, &grid, 5e9)).abs();
    assert!(ds21 < 0.1, "s21 moved {ds21} dB under reflow");
}

#[test]
fn full_pipeline_response_round_trips_through_touchstone() {
    let grid = FrequencyGrid::default();
    let response = evaluate(&PackageDesign::paper_default(), &grid).unwrap();
    let mut buffer = Vec::new();
    write_touchstone_to(&response, &mut buffer).unwrap();
    let back = read_touchstone_from(buffer.as_slice()).unwrap();
    assert_eq!(back.len(), response.len());
    let mut worst: f64 = 0.0;
    for (a, b) in back.points().iter().zip(response.points()) {
        for (x, y) in [
            (a.s11, b.s11),
            (a.s12, b.s12),
            (a.s21, b.s21),
            (a.s22, b.s22),
        ] {
            worst = worst.max((x - y).norm());
        }
    }
    assert!(worst < 1e-9, "round-trip error {worst}");
}
