//! Package geometry: through-substrate vias, multi-layer bumps, bonding
//! variants, and the full packaged-line parameterization.
//!
//! The volume-conserving reflow transform lives here: once the reflowed
//! bump radius `r_eff` is fixed, the new height follows from
//! `h * pi * r^2 = h_eff * pi * r_eff^2`, i.e. `h_eff = h * (r / r_eff)^2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::materials::{LayerStack, MaterialCatalog, MaterialLayer, SiliconSubstrate};

const UM: f64 = 1e-6;
const MM: f64 = 1e-3;

/// Largest adhesive layer thickness the bonding model accepts, 10 um.
pub const MAX_ADHESIVE_THICKNESS: f64 = 1e-5;

/// A copper-filled through-substrate via with sidewall oxide.
#[derive(Debug, Clone, PartialEq)]
pub struct ViaGeometry {
    diameter: f64,
    height: f64,
    sidewall_oxide_thickness: f64,
}

impl ViaGeometry {
    pub fn new(diameter: f64, height: f64, sidewall_oxide_thickness: f64) -> Result<Self> {
        if !diameter.is_finite() || diameter <= 0.0 {
            return Err(Error::domain(format!(
                "via diameter must be positive and finite, got {diameter}"
            )));
        }
        if !height.is_finite() || height <= 0.0 {
            return Err(Error::domain(format!(
                "via height must be positive and finite, got {height}"
            )));
        }
        if !sidewall_oxide_thickness.is_finite()
            || sidewall_oxide_thickness <= 0.0
            || sidewall_oxide_thickness >= diameter / 2.0
        {
            return Err(Error::domain(format!(
                "sidewall oxide thickness must lie in (0, diameter/2), got {sidewall_oxide_thickness}"
            )));
        }
        Ok(Self {
            diameter,
            height,
            sidewall_oxide_thickness,
        })
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn radius(&self) -> f64 {
        self.diameter / 2.0
    }

    /// Via height; equals the capping substrate thickness.
    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn sidewall_oxide_thickness(&self) -> f64 {
        self.sidewall_oxide_thickness
    }
}

/// A cylindrical multi-layer bump. Height always equals the stack's total
/// thickness and the stack's cross-section is the bump footprint.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpGeometry {
    radius: f64,
    height: f64,
    stack: LayerStack,
}

impl BumpGeometry {
    pub fn new(radius: f64, layers: Vec<MaterialLayer>) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::domain(format!(
                "bump radius must be positive and finite, got {radius}"
            )));
        }
        let stack = LayerStack::new(layers, PI * radius * radius)?;
        let height = stack.total_thickness();
        Ok(Self {
            radius,
            height,
            stack,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn stack(&self) -> &LayerStack {
        &self.stack
    }

    /// Footprint area pi r^2.
    pub fn footprint_area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    /// Cylinder volume pi r^2 h; conserved by [`reflow`].
    pub fn volume(&self) -> f64 {
        self.footprint_area() * self.height
    }
}

/// How the capping wafer is joined to the device wafer.
#[derive(Debug, Clone, PartialEq)]
pub enum BondingSpec {
    /// As-plated stand-off, no bonding step applied.
    None,
    /// Solder reflow spreading the bump to `target_radius`.
    Reflow { target_radius: f64 },
    /// Conductive-adhesive layer under the bumps.
    Adhesive { conductivity: f64, thickness: f64 },
}

impl BondingSpec {
    /// Checks the spec's own invariants plus compatibility with a bump.
    fn check(&self, bump: &BumpGeometry) -> Result<()> {
        match self {
            BondingSpec::None => Ok(()),
            BondingSpec::Reflow { target_radius } => {
                if !target_radius.is_finite() || *target_radius < bump.radius() {
                    return Err(Error::domain(format!(
                        "reflow target radius {:.3} um is below the as-plated bump radius {:.3} um; bumps do not contract",
                        target_radius / UM,
                        bump.radius() / UM
                    )));
                }
                Ok(())
            }
            BondingSpec::Adhesive {
                conductivity,
                thickness,
            } => {
                if !conductivity.is_finite() || *conductivity <= 0.0 {
                    return Err(Error::domain(format!(
                        "adhesive conductivity must be positive and finite, got {conductivity}"
                    )));
                }
                if !thickness.is_finite()
                    || *thickness <= 0.0
                    || *thickness > MAX_ADHESIVE_THICKNESS
                {
                    return Err(Error::domain(format!(
                        "adhesive thickness must lie in (0, 10] um, got {:.3} um",
                        thickness / UM
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            BondingSpec::None => "none".to_string(),
            BondingSpec::Reflow { target_radius } => {
                format!("reflow:{:.3}um", target_radius / UM)
            }
            BondingSpec::Adhesive { thickness, .. } => {
                format!("adhesive:{:.3}um", thickness / UM)
            }
        }
    }
}

/// Spreads a bump to radius `r_eff`, conserving its cylinder volume.
///
/// Internal stack layers rescale proportionally to the new height, so the
/// collapsed conductivity is unchanged.
pub fn reflow(bump: &BumpGeometry, r_eff: f64) -> Result<BumpGeometry> {
    if !r_eff.is_finite() || r_eff < bump.radius() {
        return Err(Error::domain(format!(
            "reflow radius {:.3} um is below the current radius {:.3} um; bumps do not contract",
            r_eff / UM,
            bump.radius() / UM
        )));
    }
    let shrink = (bump.radius() / r_eff) * (bump.radius() / r_eff);
    let layers = bump
        .stack
        .layers()
        .iter()
        .map(|l| l.with_thickness(l.thickness() * shrink))
        .collect::<Result<Vec<_>>>()?;
    BumpGeometry::new(r_eff, layers)
}

/// Complete parameterization of one capped-line design.
#[derive(Debug, Clone, PartialEq)]
pub struct PackageDesign {
    cap: SiliconSubstrate,
    via: ViaGeometry,
    via_fill: MaterialLayer,
    bump: BumpGeometry,
    bonding: BondingSpec,
    line_length: f64,
    line_char_impedance: f64,
    line_eff_permittivity: f64,
    line_conductor: MaterialLayer,
    pad_area: f64,
}

impl PackageDesign {
    /// Builds a design; `pad_area` defaults to the bump footprint.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        cap: SiliconSubstrate,
        via: ViaGeometry,
        via_fill: MaterialLayer,
        bump: BumpGeometry,
        bonding: BondingSpec,
        line_length: f64,
        line_char_impedance: f64,
        line_eff_permittivity: f64,
        line_conductor: MaterialLayer,
        pad_area: Option<f64>,
    ) -> Result<Self> {
        if (cap.thickness() - via.height()).abs() > 1e-12 * cap.thickness() {
            return Err(Error::domain(format!(
                "cap thickness ({:.3} um) must equal via height ({:.3} um)",
                cap.thickness() / UM,
                via.height() / UM
            )));
        }
        if !line_length.is_finite() || line_length <= 0.0 {
            return Err(Error::domain(format!(
                "line length must be positive and finite, got {line_length}"
            )));
        }
        if !line_char_impedance.is_finite() || line_char_impedance <= 0.0 {
            return Err(Error::domain(format!(
                "line characteristic impedance must be positive and finite, got {line_char_impedance}"
            )));
        }
        if !line_eff_permittivity.is_finite() || line_eff_permittivity < 1.0 {
            return Err(Error::domain(format!(
                "line effective permittivity must be >= 1, got {line_eff_permittivity}"
            )));
        }
        bonding.check(&bump)?;
        let pad_area = pad_area.unwrap_or_else(|| bump.footprint_area());
        if !pad_area.is_finite() || pad_area <= 0.0 {
            return Err(Error::domain(format!(
                "pad area must be positive and finite, got {pad_area}"
            )));
        }
        Ok(Self {
            cap,
            via,
            via_fill,
            bump,
            bonding,
            line_length,
            line_char_impedance,
            line_eff_permittivity,
            line_conductor,
            pad_area,
        })
    }

    /// The recommended stock design: 2 kohm.cm cap thinned to 250 um,
    /// 60 um copper via with 2 um sidewall oxide, 30 um-radius
    /// AuSn/Au/Ti bump, unbonded, on a 5 mm 50-ohm line.
    pub fn paper_default() -> Self {
        let catalog = MaterialCatalog::builtin();
        let cap = SiliconSubstrate::preset("high-resistivity-2k", 250.0 * UM).unwrap();
        let via = ViaGeometry::new(60.0 * UM, 250.0 * UM, 2.0 * UM).unwrap();
        let via_fill = catalog.layer("copper", 250.0 * UM).unwrap();
        let bump = BumpGeometry::new(
            30.0 * UM,
            vec![
                catalog.layer("gold_tin", 19.0 * UM).unwrap(),
                catalog.layer("gold", 6.3 * UM).unwrap(),
                catalog.layer("titanium", 1.0 * UM).unwrap(),
            ],
        )
        .unwrap();
        let line_conductor = catalog.layer("gold", 1.0 * UM).unwrap();
        Self::new(
            cap,
            via,
            via_fill,
            bump,
            BondingSpec::None,
            5.0 * MM,
            50.0,
            6.45,
            line_conductor,
            None,
        )
        .unwrap()
    }

    pub fn cap(&self) -> &SiliconSubstrate {
        &self.cap
    }

    pub fn via(&self) -> &ViaGeometry {
        &self.via
    }

    pub fn via_fill(&self) -> &MaterialLayer {
        &self.via_fill
    }

    pub fn bump(&self) -> &BumpGeometry {
        &self.bump
    }

    pub fn bonding(&self) -> &BondingSpec {
        &self.bonding
    }

    pub fn line_length(&self) -> f64 {
        self.line_length
    }

    pub fn line_char_impedance(&self) -> f64 {
        self.line_char_impedance
    }

    pub fn line_eff_permittivity(&self) -> f64 {
        self.line_eff_permittivity
    }

    pub fn line_conductor(&self) -> &MaterialLayer {
        &self.line_conductor
    }

    pub fn pad_area(&self) -> f64 {
        self.pad_area
    }

    /// Width of the strip that the cap loads, taken as the diameter of a
    /// circle with the pad area (the bump diameter for the default pad).
    pub fn effective_line_width(&self) -> f64 {
        2.0 * (self.pad_area / PI).sqrt()
    }

    /// The bump after the bonding step: reflowed when bonding is reflow,
    /// as-plated otherwise.
    pub fn bonded_bump(&self) -> BumpGeometry {
        match &self.bonding {
            BondingSpec::Reflow { target_radius } => reflow(&self.bump, *target_radius)
                .expect("reflow target validated at design construction"),
            _ => self.bump.clone(),
        }
    }

    /// New design with a different cap resistivity.
    pub fn with_cap_resistivity(&self, resistivity_ohm_cm: f64) -> Result<Self> {
        let mut design = self.clone();
        design.cap = self.cap.with_resistivity(resistivity_ohm_cm)?;
        Ok(design)
    }

    /// New design with a different cap thickness; the via height and fill
    /// column follow, preserving the cap/via height invariant.
    pub fn with_cap_thickness(&self, thickness: f64) -> Result<Self> {
        let mut design = self.clone();
        design.cap = self.cap.with_thickness(thickness)?;
        design.via = ViaGeometry::new(
            self.via.diameter(),
            thickness,
            self.via.sidewall_oxide_thickness(),
        )?;
        design.via_fill = self.via_fill.with_thickness(thickness)?;
        Ok(design)
    }

    pub fn with_via_diameter(&self, diameter: f64) -> Result<Self> {
        let mut design = self.clone();
        design.via = ViaGeometry::new(
            diameter,
            self.via.height(),
            self.via.sidewall_oxide_thickness(),
        )?;
        Ok(design)
    }

    pub fn with_oxide_thickness(&self, thickness: f64) -> Result<Self> {
        let mut design = self.clone();
        design.via = ViaGeometry::new(self.via.diameter(), self.via.height(), thickness)?;
        Ok(design)
    }

    pub fn with_bonding(&self, bonding: BondingSpec) -> Result<Self> {
        bonding.check(&self.bump)?;
        let mut design = self.clone();
        design.bonding = bonding;
        Ok(design)
    }
}

/// Vertical gap between the capping wafer and the device wafer after
/// bonding: the post-bonding bump height, plus the glue layer when the
/// bonding is adhesive.
pub fn standoff_gap(design: &PackageDesign) -> f64 {
    match design.bonding() {
        BondingSpec::None => design.bump().height(),
        BondingSpec::Reflow { .. } => design.bonded_bump().height(),
        BondingSpec::Adhesive { thickness, .. } => design.bump().height() + thickness,
    }
}

/// One manufacturability warning. Violations are data, not failures.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub parameter: &'static str,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.parameter, self.message)
    }
}

/// Checks a design against the demonstrated process window:
/// cap thickness at least 230 um (safe range 250-300 um), via diameter
/// 40-100 um, sidewall oxide 1-6 um. Returns an empty list for a
/// manufacturable design.
pub fn validate(design: &PackageDesign) -> Vec<Violation> {
    let mut violations = Vec::new();
    let cap_um = design.cap().thickness() / UM;
    if cap_um < 230.0 {
        violations.push(Violation {
            parameter: "cap_thickness",
            message: format!("{cap_um:.1} um is below the demonstrated 230 um thinning minimum"),
        });
    } else if !(250.0..=300.0).contains(&cap_um) {
        violations.push(Violation {
            parameter: "cap_thickness",
            message: format!("{cap_um:.1} um is outside the mechanically safe 250-300 um range"),
        });
    }
    let via_um = design.via().diameter() / UM;
    if !(40.0..=100.0).contains(&via_um) {
        violations.push(Violation {
            parameter: "via_diameter",
            message: format!("{via_um:.1} um is outside the studied 40-100 um range"),
        });
    }
    let oxide_um = design.via().sidewall_oxide_thickness() / UM;
    if !(1.0..=6.0).contains(&oxide_um) {
        violations.push(Violation {
            parameter: "oxide_thickness",
            message: format!("{oxide_um:.2} um is outside the studied 1-6 um range"),
        });
    }
    violations
}
