//! TOML input documents: the package design file and the layer-stack file.
//!
//! Design files use explicit SI-unit-suffixed keys (`cap_thickness_um`,
//! `line_length_mm`, ...); unknown keys are rejected with a diagnostic
//! naming the key.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{BondingSpec, BumpGeometry, PackageDesign, ViaGeometry};
use crate::materials::{
    toml_error_line, toml_error_message, LayerStack, MaterialCatalog, MaterialLayer,
    SiliconSubstrate, SILICON_RELATIVE_PERMITTIVITY,
};

const UM: f64 = 1e-6;
const MM: f64 = 1e-3;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignFile {
    /// One of the stock substrates; alternative to `cap_resistivity_ohm_cm`.
    cap_preset: Option<String>,
    cap_resistivity_ohm_cm: Option<f64>,
    cap_relative_permittivity: Option<f64>,
    cap_thickness_um: f64,
    via_diameter_um: f64,
    via_oxide_thickness_um: f64,
    via_fill_material: Option<String>,
    bump_radius_um: f64,
    bump_layers: Vec<BumpLayerFile>,
    bonding: Option<BondingFile>,
    line_length_mm: f64,
    line_char_impedance_ohm: f64,
    line_eff_permittivity: f64,
    line_conductor_material: String,
    line_conductor_thickness_um: f64,
    pad_area_um2: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BumpLayerFile {
    material: String,
    thickness_um: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BondingFile {
    /// `none`, `reflow` or `adhesive`.
    mode: String,
    target_radius_um: Option<f64>,
    thickness_um: Option<f64>,
    material: Option<String>,
    conductivity_s_per_m: Option<f64>,
}

/// Parses a design document, resolving material names via `catalog`.
pub fn parse_design_str(text: &str, catalog: &MaterialCatalog) -> Result<PackageDesign> {
    let file: DesignFile = toml::from_str(text).map_err(|e| Error::Parse {
        line: toml_error_line(text, &e),
        message: format!("design file: {}", toml_error_message(&e)),
    })?;
    resolve_design(file, catalog)
}

/// Loads and parses a design file.
pub fn load_design(path: impl AsRef<Path>, catalog: &MaterialCatalog) -> Result<PackageDesign> {
    let text = std::fs::read_to_string(path)?;
    parse_design_str(&text, catalog)
}

fn resolve_design(file: DesignFile, catalog: &MaterialCatalog) -> Result<PackageDesign> {
    let cap_thickness = file.cap_thickness_um * UM;
    let cap = match (&file.cap_preset, file.cap_resistivity_ohm_cm) {
        (Some(_), Some(_)) => {
            return Err(Error::domain(
                "design file sets both cap_preset and cap_resistivity_ohm_cm; pick one",
            ))
        }
        (Some(preset), None) => {
            let base = SiliconSubstrate::preset(preset, cap_thickness)?;
            match file.cap_relative_permittivity {
                Some(eps) => SiliconSubstrate::new(base.resistivity_ohm_cm(), eps, cap_thickness)?,
                None => base,
            }
        }
        (None, Some(resistivity)) => SiliconSubstrate::new(
            resistivity,
            file.cap_relative_permittivity
                .unwrap_or(SILICON_RELATIVE_PERMITTIVITY),
            cap_thickness,
        )?,
        (None, None) => {
            return Err(Error::domain(
                "design file needs cap_preset or cap_resistivity_ohm_cm",
            ))
        }
    };

    let via = ViaGeometry::new(
        file.via_diameter_um * UM,
        cap_thickness,
        file.via_oxide_thickness_um * UM,
    )?;
    let fill_name = file.via_fill_material.as_deref().unwrap_or("copper");
    let via_fill = catalog.layer(fill_name, cap_thickness)?;

    let layers = file
        .bump_layers
        .iter()
        .map(|l| catalog.layer(&l.material, l.thickness_um * UM))
        .collect::<Result<Vec<_>>>()?;
    let bump = BumpGeometry::new(file.bump_radius_um * UM, layers)?;

    let bonding = match &file.bonding {
        None => BondingSpec::None,
        Some(b) => resolve_bonding(b, catalog)?,
    };

    let line_conductor = catalog.layer(
        &file.line_conductor_material,
        file.line_conductor_thickness_um * UM,
    )?;

    PackageDesign::new(
        cap,
        via,
        via_fill,
        bump,
        bonding,
        file.line_length_mm * MM,
        file.line_char_impedance_ohm,
        file.line_eff_permittivity,
        line_conductor,
        file.pad_area_um2.map(|a| a * UM * UM),
    )
}

fn resolve_bonding(file: &BondingFile, catalog: &MaterialCatalog) -> Result<BondingSpec> {
    match file.mode.as_str() {
        "none" => Ok(BondingSpec::None),
        "reflow" => {
            let target = file
                .target_radius_um
                .ok_or_else(|| Error::domain("bonding mode reflow needs target_radius_um"))?;
            Ok(BondingSpec::Reflow {
                target_radius: target * UM,
            })
        }
        "adhesive" => {
            let thickness = file
                .thickness_um
                .ok_or_else(|| Error::domain("bonding mode adhesive needs thickness_um"))?;
            let conductivity =
                match (&file.material, file.conductivity_s_per_m) {
                    (Some(_), Some(_)) => return Err(Error::domain(
                        "adhesive bonding sets both material and conductivity_s_per_m; pick one",
                    )),
                    (Some(name), None) => catalog.conductivity(name)?,
                    (None, Some(sigma)) => sigma,
                    (None, None) => catalog.conductivity("conductive_adhesive")?,
                };
            Ok(BondingSpec::Adhesive {
                conductivity,
                thickness: thickness * UM,
            })
        }
        other => Err(Error::domain(format!(
            "unknown bonding mode {other:?}; expected none, reflow or adhesive"
        ))),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StackFile {
    /// Defaults to the stock bump footprint (radius 30 um).
    cross_section_area_um2: Option<f64>,
    layers: Vec<StackLayerFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StackLayerFile {
    /// Catalog material name; alternative to `conductivity_s_per_m`.
    material: Option<String>,
    conductivity_s_per_m: Option<f64>,
    thickness_um: f64,
}

/// Parses a layer-stack document for the conductivity-collapse command.
pub fn parse_stack_str(text: &str, catalog: &MaterialCatalog) -> Result<LayerStack> {
    let file: StackFile = toml::from_str(text).map_err(|e| Error::Parse {
        line: toml_error_line(text, &e),
        message: format!("stack file: {}", toml_error_message(&e)),
    })?;
    let layers = file
        .layers
        .iter()
        .map(|l| match (&l.material, l.conductivity_s_per_m) {
            (Some(_), Some(_)) => Err(Error::domain(
                "stack layer sets both material and conductivity_s_per_m; pick one",
            )),
            (Some(name), None) => catalog.layer(name, l.thickness_um * UM),
            (None, Some(sigma)) => MaterialLayer::new("custom", sigma, l.thickness_um * UM),
            (None, None) => Err(Error::domain(
                "stack layer needs material or conductivity_s_per_m",
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    let area = file
        .cross_section_area_um2
        .map(|a| a * UM * UM)
        .unwrap_or(std::f64::consts::PI * (30.0 * UM) * (30.0 * UM));
    LayerStack::new(layers, area)
}

/// Loads and parses a layer-stack file.
pub fn load_stack(path: impl AsRef<Path>, catalog: &MaterialCatalog) -> Result<LayerStack> {
    let text = std::fs::read_to_string(path)?;
    parse_stack_str(&text, catalog)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const STOCK_DESIGN: &str = r#"
cap_preset = "high-resistivity-2k"
cap_thickness_um = 250.0
via_diameter_um = 60.0
via_oxide_thickness_um = 2.0
via_fill_material = "copper"
bump_radius_um = 30.0
bump_layers = [
    { material = "gold_tin", thickness_um = 19.0 },
    { material = "gold", thickness_um = 6.3 },
    { material = "titanium", thickness_um = 1.0 },
]
line_length_mm = 5.0
line_char_impedance_ohm = 50.0
line_eff_permittivity = 6.45
line_conductor_material = "gold"
line_conductor_thickness_um = 1.0
"#;

    #[test]
    fn parses_the_stock_design() {
        let catalog = MaterialCatalog::builtin();
        let design = parse_design_str(STOCK_DESIGN, &catalog).unwrap();
        assert_eq!(design, PackageDesign::paper_default());
    }

    #[test]
    fn unknown_keys_are_named_in_the_error() {
        let catalog = MaterialCatalog::builtin();
        let text = format!("{STOCK_DESIGN}\nbanana_um = 4.0\n");
        let err = parse_design_str(&text, &catalog).unwrap_err();
        assert!(err.to_string().contains("banana_um"), "{err}");
    }

    #[test]
    fn bonding_modes_resolve() {
        let catalog = MaterialCatalog::builtin();
        let reflow =
            format!("{STOCK_DESIGN}\n[bonding]\nmode = \"reflow\"\ntarget_radius_um = 40.0\n");
        let design = parse_design_str(&reflow, &catalog).unwrap();
        assert_eq!(
            design.bonding(),
            &BondingSpec::Reflow {
                target_radius: 40.0 * UM
            }
        );

        let adhesive =
            format!("{STOCK_DESIGN}\n[bonding]\nmode = \"adhesive\"\nthickness_um = 5.0\n");
        let design = parse_design_str(&adhesive, &catalog).unwrap();
        match design.bonding() {
            BondingSpec::Adhesive {
                conductivity,
                thickness,
            } => {
                assert_relative_eq!(*thickness, 5.0 * UM, max_relative = 1e-12);
                assert_eq!(
                    *conductivity,
                    catalog.conductivity("conductive_adhesive").unwrap()
                );
            }
            other => panic!("expected adhesive, got {other:?}"),
        }
    }

    #[test]
    fn unknown_materials_list_the_catalog() {
        let catalog = MaterialCatalog::builtin();
        let text = STOCK_DESIGN.replace("\"copper\"", "\"mithril\"");
        let err = parse_design_str(&text, &catalog).unwrap_err();
        assert!(err.to_string().contains("mithril"));
        assert!(err.to_string().contains("copper"));
    }

    #[test]
    fn stack_file_resolves_materials_and_custom_conductivities() {
        let catalog = MaterialCatalog::builtin();
        let text = r#"
layers = [
    { material = "gold_tin", thickness_um = 19.0 },
    { conductivity_s_per_m = 4.1e7, thickness_um = 6.3 },
]
"#;
        let stack = parse_stack_str(text, &catalog).unwrap();
        assert_eq!(stack.layers().len(), 2);
        assert_relative_eq!(stack.total_thickness(), 25.3 * UM, max_relative = 1e-12);
    }
}
