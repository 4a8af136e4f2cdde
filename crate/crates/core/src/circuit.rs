//! Frequency-dependent equivalent-circuit synthesis for the packaged line.
//!
//! The packaged interconnect is modeled as a five-element chain, port 1 to
//! port 2:
//!
//! ```text
//! series(Z_via + Z_bump [+ Z_adhesive]) - shunt(Y_via) - line - shunt(Y_via) - series(...)
//! ```
//!
//! Vias contribute a skin-effect series resistance with a partial
//! self-inductance, and a shunt path through the sidewall oxide into the
//! (lossy) capping silicon. The line is a telegrapher segment whose shunt
//! side is augmented by the admittance of the capping slab hanging over it
//! across the bonding stand-off gap.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{standoff_gap, BondingSpec, BumpGeometry, PackageDesign, ViaGeometry};
use crate::materials::{collapse_stack, MaterialLayer, SiliconSubstrate};
use crate::network::{abcd_line, abcd_series, abcd_shunt, TwoPortAbcd};

pub const VACUUM_PERMEABILITY: f64 = 4.0e-7 * PI;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Relative permittivity of the deposited sidewall oxide.
pub const OXIDE_RELATIVE_PERMITTIVITY: f64 = 3.9;

/// Default ground-return radius for the via substrate path, as a multiple
/// of the via diameter (three times a pitch equivalent of twice the
/// diameter). The substrate factor depends on it only logarithmically.
pub const DEFAULT_RETURN_PATH_FACTOR: f64 = 6.0;

/// Skin depth `1 / sqrt(pi f mu0 sigma)` in metres.
pub fn skin_depth(frequency: f64, conductivity: f64) -> f64 {
    1.0 / (PI * frequency * VACUUM_PERMEABILITY * conductivity).sqrt()
}

/// Partial self-inductance of a cylindrical conductor,
/// `(mu0 h / 2 pi) (ln(4h/d) - 1)`, clamped to zero for squat cylinders.
pub fn cylinder_partial_inductance(height: f64, diameter: f64) -> f64 {
    (VACUUM_PERMEABILITY * height / (2.0 * PI)) * ((4.0 * height / diameter).ln() - 1.0).max(0.0)
}

/// Whether a [`ComplexImmittance`] value is an impedance or an admittance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImmittanceKind {
    /// Ohms.
    Impedance,
    /// Siemens.
    Admittance,
}

/// A complex impedance or admittance tagged with its kind and frequency.
/// Construction rejects negative real parts: every element synthesized
/// here must be passive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexImmittance {
    value: Complex64,
    kind: ImmittanceKind,
    frequency: f64,
}

impl ComplexImmittance {
    pub fn impedance(value: Complex64, frequency: f64) -> Result<Self> {
        Self::new(value, ImmittanceKind::Impedance, frequency)
    }

    pub fn admittance(value: Complex64, frequency: f64) -> Result<Self> {
        Self::new(value, ImmittanceKind::Admittance, frequency)
    }

    fn new(value: Complex64, kind: ImmittanceKind, frequency: f64) -> Result<Self> {
        if !frequency.is_finite() || frequency <= 0.0 {
            return Err(Error::domain(format!(
                "immittance frequency must be positive and finite, got {frequency}"
            )));
        }
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::numerical(frequency, "non-finite immittance"));
        }
        if value.re < 0.0 {
            return Err(Error::numerical(
                frequency,
                format!("negative real part {} breaks passivity", value.re),
            ));
        }
        Ok(Self {
            value,
            kind,
            frequency,
        })
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn kind(&self) -> ImmittanceKind {
        self.kind
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }
}

/// One element of the synthesized chain, in port-1 to port-2 order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    Series(ComplexImmittance),
    Shunt(ComplexImmittance),
    Line {
        char_impedance: Complex64,
        propagation: Complex64,
        length: f64,
    },
}

/// A non-empty ordered element chain at a single frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementChain {
    frequency: f64,
    elements: Vec<Element>,
}

impl ElementChain {
    pub fn new(frequency: f64, elements: Vec<Element>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::domain("element chain must be non-empty"));
        }
        for element in &elements {
            match element {
                Element::Series(imm) | Element::Shunt(imm) => {
                    if imm.frequency() != frequency {
                        return Err(Error::domain(format!(
                            "chain element at {} Hz inside a {} Hz chain",
                            imm.frequency(),
                            frequency
                        )));
                    }
                }
                Element::Line { length, .. } => {
                    if !length.is_finite() || *length < 0.0 {
                        return Err(Error::domain("line length must be non-negative"));
                    }
                }
            }
        }
        Ok(Self {
            frequency,
            elements,
        })
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Converts each element to its ABCD matrix, preserving order.
    pub fn to_two_ports(&self) -> Vec<TwoPortAbcd> {
        self.elements
            .iter()
            .map(|element| match element {
                Element::Series(imm) => abcd_series(imm.value(), self.frequency),
                Element::Shunt(imm) => abcd_shunt(imm.value(), self.frequency),
                Element::Line {
                    char_impedance,
                    propagation,
                    length,
                } => abcd_line(*char_impedance, *propagation, *length, self.frequency),
            })
            .collect()
    }
}

/// Series impedance of a filled via: skin-effect resistance plus partial
/// self-inductance.
///
/// Below the frequency where the skin depth reaches the via radius the
/// resistance equals the DC value `h / (sigma pi r^2)`; above it the
/// current is confined to the outer annulus of one skin depth.
pub fn via_series_impedance(via: &ViaGeometry, fill: &MaterialLayer, frequency: f64) -> Complex64 {
    let radius = via.radius();
    let delta = skin_depth(frequency, fill.conductivity());
    let area = if delta >= radius {
        PI * radius * radius
    } else {
        PI * delta * (2.0 * radius - delta)
    };
    let resistance = via.height() / (fill.conductivity() * area);
    let inductance = cylinder_partial_inductance(via.height(), via.diameter());
    Complex64::new(resistance, 2.0 * PI * frequency * inductance)
}

/// Shunt admittance of a via through the capping substrate with the
/// default ground-return radius.
pub fn via_shunt_admittance(
    via: &ViaGeometry,
    cap: &SiliconSubstrate,
    frequency: f64,
) -> Complex64 {
    via_shunt_admittance_with_return(
        via,
        cap,
        DEFAULT_RETURN_PATH_FACTOR * via.diameter(),
        frequency,
    )
}

/// Shunt admittance of a via: sidewall-oxide capacitance in series with the
/// substrate conductance/capacitance pair.
///
/// The oxide is a coaxial capacitor `2 pi e0 e_ox h / ln((r + t_ox)/r)`;
/// the substrate pair shares the geometric factor
/// `F = 2 pi / ln(r_ground / (r + t_ox))`, giving `G = sigma_si F h` and
/// `C = e0 e_si F h`.
pub fn via_shunt_admittance_with_return(
    via: &ViaGeometry,
    cap: &SiliconSubstrate,
    return_path_radius: f64,
    frequency: f64,
) -> Complex64 {
    let omega = 2.0 * PI * frequency;
    let r_inner = via.radius();
    let r_oxide = r_inner + via.sidewall_oxide_thickness();
    debug_assert!(
        return_path_radius > r_oxide,
        "return path must lie outside the oxide shell"
    );
    let height = via.height();

    let c_oxide = 2.0 * PI * VACUUM_PERMITTIVITY * OXIDE_RELATIVE_PERMITTIVITY * height
        / (r_oxide / r_inner).ln();
    let factor = 2.0 * PI / (return_path_radius / r_oxide).ln();
    let g_substrate = cap.conductivity() * factor * height;
    let c_substrate = VACUUM_PERMITTIVITY * cap.relative_permittivity() * factor * height;

    let y_oxide = Complex64::new(0.0, omega * c_oxide);
    let y_substrate = Complex64::new(g_substrate, omega * c_substrate);
    y_oxide * y_substrate / (y_oxide + y_substrate)
}

/// Series impedance of a bump: the collapsed-stack resistance
/// `h / (sigma_eff pi r^2)` plus the cylinder partial inductance (zero for
/// the squat geometries typical of bumps).
pub fn bump_series_impedance(bump: &BumpGeometry, frequency: f64) -> Complex64 {
    let collapsed = collapse_stack(bump.stack());
    let resistance = bump.height() / (collapsed.conductivity() * bump.footprint_area());
    let inductance = cylinder_partial_inductance(bump.height(), 2.0 * bump.radius());
    Complex64::new(resistance, 2.0 * PI * frequency * inductance)
}

/// Purely resistive series impedance of a conductive-adhesive layer,
/// `t / (sigma A)`. Only meaningful for adhesive bonding.
pub fn adhesive_series_impedance(
    bonding: &BondingSpec,
    contact_area: f64,
    _frequency: f64,
) -> Result<Complex64> {
    match bonding {
        BondingSpec::Adhesive {
            conductivity,
            thickness,
        } => {
            if !contact_area.is_finite() || contact_area <= 0.0 {
                return Err(Error::domain(format!(
                    "adhesive contact area must be positive and finite, got {contact_area}"
                )));
            }
            Ok(Complex64::new(
                thickness / (conductivity * contact_area),
                0.0,
            ))
        }
        other => Err(Error::domain(format!(
            "adhesive impedance requested for bonding mode {:?}",
            other.label()
        ))),
    }
}

/// Per-unit-length shunt admittance the capping slab adds to the line: the
/// air-gap capacitance in series with the lossy silicon slab (G parallel
/// C), scaled by the coupled area per metre of line.
///
/// `loaded_area` is referenced to one metre of line, so it numerically
/// equals the coupled strip width in metres. The admittance vanishes as
/// the gap grows and its real part vanishes for an insulating cap.
pub fn cap_loading_admittance(
    gap: f64,
    cap: &SiliconSubstrate,
    loaded_area: f64,
    frequency: f64,
) -> Complex64 {
    let omega = 2.0 * PI * frequency;
    // per-square-metre admittances of the two slabs in series
    let y_air = Complex64::new(0.0, omega * VACUUM_PERMITTIVITY / gap);
    let y_slab = Complex64::new(
        cap.conductivity(),
        omega * VACUUM_PERMITTIVITY * cap.relative_permittivity(),
    ) / cap.thickness();
    if y_air.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    y_air * y_slab / (y_air + y_slab) * loaded_area
}

/// Characteristic impedance and propagation constant of the packaged line
/// segment: nominal L'/C' from (Z0, eps_eff), skin-effect conductor
/// resistance, and the cap-loading shunt folded into the distributed model.
pub fn loaded_line_parameters(
    design: &PackageDesign,
    gap: f64,
    frequency: f64,
) -> (Complex64, Complex64) {
    let omega = 2.0 * PI * frequency;
    let root_eps = design.line_eff_permittivity().sqrt();
    let inductance_per_m = design.line_char_impedance() * root_eps / SPEED_OF_LIGHT;
    let capacitance_per_m = root_eps / (design.line_char_impedance() * SPEED_OF_LIGHT);

    let conductor = design.line_conductor();
    let delta = skin_depth(frequency, conductor.conductivity());
    let carrying_thickness = conductor.thickness().min(delta);
    let width = design.effective_line_width();
    let resistance_per_m = 1.0 / (conductor.conductivity() * width * carrying_thickness);

    let y_cap = cap_loading_admittance(gap, design.cap(), width, frequency);

    let series = Complex64::new(resistance_per_m, omega * inductance_per_m);
    let shunt = Complex64::new(0.0, omega * capacitance_per_m) + y_cap;
    let mut gamma = (series * shunt).sqrt();
    if gamma.re < 0.0 {
        gamma = -gamma;
    }
    let char_impedance = (series / shunt).sqrt();
    (char_impedance, gamma)
}

/// Synthesizes the five-element chain for one design at one frequency.
pub fn assemble(design: &PackageDesign, frequency: f64) -> Result<ElementChain> {
    let bump = design.bonded_bump();
    let gap = standoff_gap(design);

    let mut series_z = via_series_impedance(design.via(), design.via_fill(), frequency)
        + bump_series_impedance(&bump, frequency);
    if matches!(design.bonding(), BondingSpec::Adhesive { .. }) {
        series_z += adhesive_series_impedance(design.bonding(), design.pad_area(), frequency)?;
    }
    let shunt_y = via_shunt_admittance(design.via(), design.cap(), frequency);
    let (char_impedance, propagation) = loaded_line_parameters(design, gap, frequency);

    let series = Element::Series(ComplexImmittance::impedance(series_z, frequency)?);
    let shunt = Element::Shunt(ComplexImmittance::admittance(shunt_y, frequency)?);
    ElementChain::new(
        frequency,
        vec![
            series,
            shunt,
            Element::Line {
                char_impedance,
                propagation,
                length: design.line_length(),
            },
            shunt,
            series,
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::reflow;
    use crate::materials::{MaterialCatalog, MaterialLayer};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const UM: f64 = 1e-6;

    fn copper_via() -> (ViaGeometry, MaterialLayer) {
        let via = ViaGeometry::new(60.0 * UM, 250.0 * UM, 2.0 * UM).unwrap();
        let fill = MaterialCatalog::builtin()
            .layer("copper", 250.0 * UM)
            .unwrap();
        (via, fill)
    }

    fn hrs_cap() -> SiliconSubstrate {
        SiliconSubstrate::preset("high-resistivity-2k", 250.0 * UM).unwrap()
    }

    fn low_res_cap() -> SiliconSubstrate {
        SiliconSubstrate::preset("low-resistivity", 250.0 * UM).unwrap()
    }

    fn stock_bump() -> BumpGeometry {
        let catalog = MaterialCatalog::builtin();
        BumpGeometry::new(
            30.0 * UM,
            vec![
                catalog.layer("gold_tin", 19.0 * UM).unwrap(),
                catalog.layer("gold", 6.3 * UM).unwrap(),
                catalog.layer("titanium", 1.0 * UM).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn via_resistance_reaches_dc_limit_at_low_frequency() {
        let (via, fill) = copper_via();
        let dc = via.height() / (fill.conductivity() * PI * via.radius() * via.radius());
        // At 1 kHz the skin depth (about 2 mm in copper) dwarfs the radius.
        let z = via_series_impedance(&via, &fill, 1e3);
        assert_relative_eq!(z.re, dc, max_relative = 1e-14);
        // Exactly at saturation the annulus covers the full circle.
        let f_sat =
            1.0 / (PI * VACUUM_PERMEABILITY * fill.conductivity() * via.radius() * via.radius());
        let z_sat = via_series_impedance(&via, &fill, f_sat * 0.999);
        assert_relative_eq!(z_sat.re, dc, max_relative = 1e-12);
    }

    #[test]
    fn via_resistance_matches_radial_discretization_oracle() {
        // Brute-force oracle: integrate the conducting annulus as 200k rings.
        let (via, fill) = copper_via();
        let f = 5e9;
        let delta = skin_depth(f, fill.conductivity());
        assert!(delta < via.radius());
        let inner = via.radius() - delta;
        let n = 200_000;
        let dr = (via.radius() - inner) / n as f64;
        let mut area = 0.0;
        for i in 0..n {
            let rho = inner + (i as f64 + 0.5) * dr;
            area += 2.0 * PI * rho * dr;
        }
        let oracle_r = via.height() / (fill.conductivity() * area);
        let z = via_series_impedance(&via, &fill, f);
        assert_relative_eq!(z.re, oracle_r, max_relative = 1e-8);
    }

    #[test]
    fn via_inductance_matches_hand_evaluation() {
        let (via, fill) = copper_via();
        // (mu0 h / 2 pi)(ln(4 h / d) - 1) with h = 250 um, d = 60 um
        let expected =
            VACUUM_PERMEABILITY * 250e-6 / (2.0 * PI) * ((4.0f64 * 250.0 / 60.0).ln() - 1.0);
        let f = 5e9;
        let z = via_series_impedance(&via, &fill, f);
        assert_relative_eq!(z.im, 2.0 * PI * f * expected, max_relative = 1e-12);
        assert!(expected > 0.0);
    }

    #[test]
    fn via_resistance_nondecreasing_in_frequency() {
        let (via, fill) = copper_via();
        let mut last = 0.0;
        for i in 1..=100 {
            let f = i as f64 * 1e8;
            let r = via_series_impedance(&via, &fill, f).re;
            assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn via_shunt_reduces_to_capacitive_chain_for_insulating_cap() {
        let (via, _) = copper_via();
        // negligible conductivity: 1e30 ohm.cm
        let cap = SiliconSubstrate::new(1e30, 11.9, 250.0 * UM).unwrap();
        let f = 6e9;
        let y = via_shunt_admittance(&via, &cap, f);
        assert!(y.re.abs() < 1e-20 * y.norm());
        assert!(y.im > 0.0);

        // pure series-capacitance chain: C_ox in series with C_si
        let omega = 2.0 * PI * f;
        let r = via.radius();
        let r_ox = r + via.sidewall_oxide_thickness();
        let h = via.height();
        let c_ox = 2.0 * PI * VACUUM_PERMITTIVITY * 3.9 * h / (r_ox / r).ln();
        let factor = 2.0 * PI / (DEFAULT_RETURN_PATH_FACTOR * via.diameter() / r_ox).ln();
        let c_si = VACUUM_PERMITTIVITY * 11.9 * factor * h;
        let c_series = c_ox * c_si / (c_ox + c_si);
        assert_relative_eq!(y.norm(), omega * c_series, max_relative = 1e-10);
    }

    #[test]
    fn via_shunt_matches_direct_chain_evaluation() {
        // Independent re-evaluation with scalar arithmetic: the series
        // combination 1/Y = 1/(j w C_ox) + 1/(G + j w C_si).
        let (via, _) = copper_via();
        let cap = low_res_cap();
        let f = 6e9;
        let omega = 2.0 * PI * f;

        let r = via.radius();
        let r_ox = r + via.sidewall_oxide_thickness();
        let h = via.height();
        let c_ox = 2.0 * PI * VACUUM_PERMITTIVITY * 3.9 * h / (r_ox / r).ln();
        let factor = 2.0 * PI / (DEFAULT_RETURN_PATH_FACTOR * via.diameter() / r_ox).ln();
        let g = cap.conductivity() * factor * h;
        let c_si = VACUUM_PERMITTIVITY * 11.9 * factor * h;

        let z = Complex64::new(0.0, -1.0 / (omega * c_ox)) + 1.0 / Complex64::new(g, omega * c_si);
        let oracle = 1.0 / z;
        let y = via_shunt_admittance(&via, &cap, f);
        assert!((y - oracle).norm() <= 1e-12 * oracle.norm());
    }

    #[test]
    fn oxide_thickness_barely_matters_on_high_resistivity_cap() {
        let f = 6e9;
        let thin = ViaGeometry::new(60.0 * UM, 250.0 * UM, 2.0 * UM).unwrap();
        let thick = ViaGeometry::new(60.0 * UM, 250.0 * UM, 4.0 * UM).unwrap();

        let y_hrs_thin = via_shunt_admittance(&thin, &hrs_cap(), f);
        let y_hrs_thick = via_shunt_admittance(&thick, &hrs_cap(), f);
        let hrs_change = (y_hrs_thick.norm() - y_hrs_thin.norm()).abs() / y_hrs_thin.norm();
        assert!(hrs_change < 0.05, "HRS |Y| change {hrs_change}");

        let y_low_thin = via_shunt_admittance(&thin, &low_res_cap(), f);
        let y_low_thick = via_shunt_admittance(&thick, &low_res_cap(), f);
        let low_change = (y_low_thick.re - y_low_thin.re).abs() / y_low_thin.re;
        assert!(
            low_change > hrs_change,
            "low-res Re(Y) change {low_change} vs HRS {hrs_change}"
        );
    }

    #[test]
    fn bump_impedance_same_for_collapsed_and_layered_stack() {
        let f = 5e9;
        let bump = stock_bump();
        let collapsed_layer = collapse_stack(bump.stack());
        let collapsed_bump = BumpGeometry::new(bump.radius(), vec![collapsed_layer]).unwrap();
        let z_layered = bump_series_impedance(&bump, f);
        let z_collapsed = bump_series_impedance(&collapsed_bump, f);
        assert_relative_eq!(z_layered.re, z_collapsed.re, max_relative = 1e-12);
    }

    #[test]
    fn bump_resistance_matches_per_layer_series_oracle() {
        let bump = stock_bump();
        let area = bump.footprint_area();
        let oracle: f64 = bump
            .stack()
            .layers()
            .iter()
            .map(|l| l.thickness() / (l.conductivity() * area))
            .sum();
        let z = bump_series_impedance(&bump, 1e6);
        assert_relative_eq!(z.re, oracle, max_relative = 1e-12);
    }

    #[test]
    fn reflowed_bump_has_lower_resistance() {
        let f = 5e9;
        let bump = stock_bump();
        let spread = reflow(&bump, 40.0 * UM).unwrap();
        assert!(bump_series_impedance(&spread, f).re < bump_series_impedance(&bump, f).re);
    }

    #[test]
    fn squat_bump_inductance_clamps_to_zero() {
        // 4h/d = 4 * 26.3 / 60 < e, so ln - 1 < 0
        assert_eq!(cylinder_partial_inductance(26.3 * UM, 60.0 * UM), 0.0);
    }

    #[test]
    fn adhesive_impedance_scales_linearly_with_thickness() {
        let f = 5e9;
        let area = PI * (30.0 * UM) * (30.0 * UM);
        let thin = BondingSpec::Adhesive {
            conductivity: 1e5,
            thickness: 5.0 * UM,
        };
        let thick = BondingSpec::Adhesive {
            conductivity: 1e5,
            thickness: 10.0 * UM,
        };
        let z_thin = adhesive_series_impedance(&thin, area, f).unwrap();
        let z_thick = adhesive_series_impedance(&thick, area, f).unwrap();
        assert_relative_eq!(z_thick.re, 2.0 * z_thin.re, max_relative = 1e-12);
        assert_eq!(z_thin.im, 0.0);

        // direct formula oracle with the catalog conductivity
        let sigma = MaterialCatalog::builtin()
            .conductivity("conductive_adhesive")
            .unwrap();
        let z = adhesive_series_impedance(
            &BondingSpec::Adhesive {
                conductivity: sigma,
                thickness: 10.0 * UM,
            },
            area,
            f,
        )
        .unwrap();
        assert_relative_eq!(z.re, 10.0 * UM / (sigma * area), max_relative = 1e-14);
    }

    #[test]
    fn adhesive_impedance_vanishes_with_thickness() {
        let area = PI * (30.0 * UM) * (30.0 * UM);
        let z = adhesive_series_impedance(
            &BondingSpec::Adhesive {
                conductivity: 1e5,
                thickness: 1e-15,
            },
            area,
            5e9,
        )
        .unwrap();
        assert!(z.norm() < 1e-11, "z = {z}");
    }

    #[test]
    fn adhesive_impedance_rejects_other_modes() {
        let err = adhesive_series_impedance(&BondingSpec::None, 1e-9, 5e9).unwrap_err();
        assert!(err.to_string().contains("bonding mode"));
    }

    #[test]
    fn cap_loading_vanishes_for_huge_gap() {
        let y_far = cap_loading_admittance(1e6, &low_res_cap(), 60.0 * UM, 5e9);
        let y_near = cap_loading_admittance(26.3 * UM, &low_res_cap(), 60.0 * UM, 5e9);
        assert!(y_far.norm() < 1e-9 * y_near.norm());
        assert_eq!(
            cap_loading_admittance(f64::INFINITY, &low_res_cap(), 60.0 * UM, 5e9),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn cap_loading_lossless_for_insulating_cap() {
        let cap = SiliconSubstrate::new(1e30, 11.9, 250.0 * UM).unwrap();
        let y = cap_loading_admittance(26.3 * UM, &cap, 60.0 * UM, 5e9);
        assert!(y.re.abs() <= 1e-20 * y.norm());
    }

    #[test]
    fn cap_loading_losses_ordered_by_resistivity() {
        let y_low = cap_loading_admittance(26.3 * UM, &low_res_cap(), 60.0 * UM, 5e9);
        let y_hrs = cap_loading_admittance(26.3 * UM, &hrs_cap(), 60.0 * UM, 5e9);
        assert!(y_low.re > y_hrs.re);
    }

    #[test]
    fn assemble_paper_default_chain() {
        let design = PackageDesign::paper_default();
        let f = 5e9;
        let chain = assemble(&design, f).unwrap();
        assert_eq!(chain.len(), 5);

        // element-wise cross-check against the individual synthesis calls
        let expected_series = via_series_impedance(design.via(), design.via_fill(), f)
            + bump_series_impedance(design.bump(), f);
        let expected_shunt = via_shunt_admittance(design.via(), design.cap(), f);
        match (&chain.elements()[0], &chain.elements()[1]) {
            (Element::Series(z), Element::Shunt(y)) => {
                assert!((z.value() - expected_series).norm() <= 1e-14 * expected_series.norm());
                assert!((y.value() - expected_shunt).norm() <= 1e-14 * expected_shunt.norm());
            }
            other => panic!("unexpected chain head: {other:?}"),
        }
        match &chain.elements()[2] {
            Element::Line { length, .. } => assert_eq!(*length, design.line_length()),
            other => panic!("expected line at the chain centre, got {other:?}"),
        }
    }

    #[test]
    fn assemble_is_palindromic() {
        let design = PackageDesign::paper_default();
        let chain = assemble(&design, 5e9).unwrap();
        assert_eq!(chain.elements()[0], chain.elements()[4]);
        assert_eq!(chain.elements()[1], chain.elements()[3]);
    }

    #[test]
    fn assemble_degenerates_to_bare_line_for_remote_insulating_cap() {
        // An insulating cap far above the line leaves the telegrapher
        // parameters unloaded.
        let catalog = MaterialCatalog::builtin();
        let cap = SiliconSubstrate::new(1e30, 11.9, 250.0 * UM).unwrap();
        let via = ViaGeometry::new(60.0 * UM, 250.0 * UM, 2.0 * UM).unwrap();
        let fill = catalog.layer("copper", 250.0 * UM).unwrap();
        // an absurdly tall bump pushes the cap effectively to infinity
        let bump = BumpGeometry::new(
            30.0 * UM,
            vec![MaterialLayer::new("gold", 4.1e7, 1e6).unwrap()],
        )
        .unwrap();
        let design = PackageDesign::new(
            cap,
            via,
            fill,
            bump,
            BondingSpec::None,
            2e-3,
            50.0,
            6.45,
            catalog.layer("gold", 1.0 * UM).unwrap(),
            None,
        )
        .unwrap();

        let f = 5e9;
        let chain = assemble(&design, f).unwrap();
        let (z0, gamma) = match chain.elements()[2] {
            Element::Line {
                char_impedance,
                propagation,
                ..
            } => (char_impedance, propagation),
            _ => unreachable!(),
        };

        // unloaded comparison: same line with no cap admittance
        let omega = 2.0 * PI * f;
        let root_eps = 6.45f64.sqrt();
        let l = 50.0 * root_eps / SPEED_OF_LIGHT;
        let c = root_eps / (50.0 * SPEED_OF_LIGHT);
        let delta = skin_depth(f, 4.1e7);
        let r = 1.0 / (4.1e7 * design.effective_line_width() * delta.min(1.0 * UM));
        let series = Complex64::new(r, omega * l);
        let shunt = Complex64::new(0.0, omega * c);
        let bare_gamma = (series * shunt).sqrt();
        let bare_z0 = (series / shunt).sqrt();

        assert!((gamma - bare_gamma).norm() <= 1e-9 * bare_gamma.norm());
        assert!((z0 - bare_z0).norm() <= 1e-9 * bare_z0.norm());
    }

    proptest! {
        #[test]
        fn prop_elements_passive_at_all_frequencies(
            f_ghz in 0.1f64..10.0,
            diameter_um in 40.0f64..100.0,
            oxide_um in 1.0f64..6.0,
            resistivity in 10.0f64..3000.0,
        ) {
            let f = f_ghz * 1e9;
            let via = ViaGeometry::new(diameter_um * UM, 250.0 * UM, oxide_um * UM).unwrap();
            let fill = MaterialLayer::new("copper", 5.8e7, 250.0 * UM).unwrap();
            let cap = SiliconSubstrate::new(resistivity, 11.9, 250.0 * UM).unwrap();

            let z = via_series_impedance(&via, &fill, f);
            prop_assert!(z.re >= 0.0);
            let y = via_shunt_admittance(&via, &cap, f);
            prop_assert!(y.re >= 0.0);
            let y_load = cap_loading_admittance(26.3 * UM, &cap, 60.0 * UM, f);
            prop_assert!(y_load.re >= 0.0);
        }

        #[test]
        fn prop_cap_loading_decreases_with_gap(
            f_ghz in 0.5f64..10.0,
            gap1_um in 5.0f64..100.0,
            growth in 1.01f64..10.0,
        ) {
            let f = f_ghz * 1e9;
            let cap = low_res_cap();
            let near = cap_loading_admittance(gap1_um * UM, &cap, 60.0 * UM, f);
            let far = cap_loading_admittance(gap1_um * growth * UM, &cap, 60.0 * UM, f);
            prop_assert!(far.norm() < near.norm());
        }

        #[test]
        fn prop_cap_loading_loss_increases_with_conductivity_below_relaxation(
            f_ghz in 0.5f64..10.0,
            gap_um in 5.0f64..100.0,
            sigma1 in 1e-3f64..1.0,
            growth in 1.01f64..10.0,
        ) {
            // The series air-gap/slab chain has a loss peak at the dielectric
            // relaxation point; below it, Re(Y) grows with conductivity.
            let f = f_ghz * 1e9;
            let sigma2 = sigma1 * growth;
            let thickness = 250.0 * UM;
            let omega = 2.0 * PI * f;
            let peak = omega * VACUUM_PERMITTIVITY * (thickness / (gap_um * UM) + 11.9);
            prop_assume!(sigma2 < peak);
            let cap1 = SiliconSubstrate::new(100.0 / sigma1, 11.9, thickness).unwrap();
            let cap2 = SiliconSubstrate::new(100.0 / sigma2, 11.9, thickness).unwrap();
            let y1 = cap_loading_admittance(gap_um * UM, &cap1, 60.0 * UM, f);
            let y2 = cap_loading_admittance(gap_um * UM, &cap2, 60.0 * UM, f);
            prop_assert!(y2.re > y1.re);
        }
    }
}
