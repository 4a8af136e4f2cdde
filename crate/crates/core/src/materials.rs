//! Conductive layer stacks and the effective-conductivity collapse.
//!
//! A multi-layer interconnect (e.g. an AuSn / Au / Ti bump) carries current
//! through its layers in series. For circuit synthesis the stack is replaced
//! by a single layer whose conductivity reproduces the total series
//! resistance: `1/sigma_eff = sum_i x_i / sigma_i`, where `x_i` is the
//! thickness fraction of layer `i`. This module holds the layer types, the
//! collapse, the Au/Sn solder alloy transform, and the named conductivity
//! catalog used to resolve material names from input files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Gold thickness consumed per unit of tin when the solder alloy forms.
///
/// Calibrated so a 15.3 um Au / 10 um Sn plating becomes a 19 um alloy layer
/// over 6.3 um of residual gold.
pub const AU_CONSUMPTION_RATIO: f64 = 0.9;

/// One conductive layer: a label, a bulk conductivity and a thickness.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialLayer {
    name: String,
    conductivity: f64,
    thickness: f64,
}

impl MaterialLayer {
    /// Builds a layer, rejecting non-positive or non-finite values.
    pub fn new(name: impl Into<String>, conductivity: f64, thickness: f64) -> Result<Self> {
        let name = name.into();
        if !conductivity.is_finite() || conductivity <= 0.0 {
            return Err(Error::domain(format!(
                "layer {name:?}: conductivity must be positive and finite, got {conductivity}"
            )));
        }
        if !thickness.is_finite() || thickness <= 0.0 {
            return Err(Error::domain(format!(
                "layer {name:?}: thickness must be positive and finite, got {thickness}"
            )));
        }
        Ok(Self {
            name,
            conductivity,
            thickness,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Bulk conductivity in S/m.
    pub fn conductivity(&self) -> f64 {
        self.conductivity
    }

    /// Thickness in metres.
    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    /// Same material, different thickness.
    pub fn with_thickness(&self, thickness: f64) -> Result<Self> {
        Self::new(self.name.clone(), self.conductivity, thickness)
    }
}

/// An ordered series of layers with a common cross-section area.
///
/// Current flows through the stack, so the layers add in resistance:
/// `R = sum_i t_i / (sigma_i * S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    layers: Vec<MaterialLayer>,
    cross_section_area: f64,
}

impl LayerStack {
    pub fn new(layers: Vec<MaterialLayer>, cross_section_area: f64) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::domain("layer stack must contain at least one layer"));
        }
        if !cross_section_area.is_finite() || cross_section_area <= 0.0 {
            return Err(Error::domain(format!(
                "cross-section area must be positive and finite, got {cross_section_area}"
            )));
        }
        Ok(Self {
            layers,
            cross_section_area,
        })
    }

    pub fn layers(&self) -> &[MaterialLayer] {
        &self.layers
    }

    /// Cross-section area in m^2.
    pub fn cross_section_area(&self) -> f64 {
        self.cross_section_area
    }

    /// Sum of all layer thicknesses, metres.
    pub fn total_thickness(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness).sum()
    }

    /// DC series resistance of the whole stack, ohms.
    pub fn series_resistance(&self) -> f64 {
        self.layers
            .iter()
            .map(|l| l.thickness / (l.conductivity * self.cross_section_area))
            .sum()
    }
}

/// Silicon substrate parameters for the capping wafer.
#[derive(Debug, Clone, PartialEq)]
pub struct SiliconSubstrate {
    resistivity_ohm_cm: f64,
    relative_permittivity: f64,
    thickness: f64,
}

/// Relative permittivity of silicon used by the substrate presets.
pub const SILICON_RELATIVE_PERMITTIVITY: f64 = 11.9;

impl SiliconSubstrate {
    pub fn new(
        resistivity_ohm_cm: f64,
        relative_permittivity: f64,
        thickness: f64,
    ) -> Result<Self> {
        if !resistivity_ohm_cm.is_finite() || resistivity_ohm_cm <= 0.0 {
            return Err(Error::domain(format!(
                "substrate resistivity must be positive and finite, got {resistivity_ohm_cm} ohm.cm"
            )));
        }
        if !relative_permittivity.is_finite() || relative_permittivity < 1.0 {
            return Err(Error::domain(format!(
                "substrate relative permittivity must be >= 1, got {relative_permittivity}"
            )));
        }
        if !thickness.is_finite() || thickness <= 0.0 {
            return Err(Error::domain(format!(
                "substrate thickness must be positive and finite, got {thickness}"
            )));
        }
        Ok(Self {
            resistivity_ohm_cm,
            relative_permittivity,
            thickness,
        })
    }

    /// Canonical stock substrates, selectable by name:
    /// `low-resistivity` (15 ohm.cm), `high-resistivity-1k` (1 kohm.cm),
    /// `high-resistivity-2k` (2 kohm.cm).
    pub fn preset(name: &str, thickness: f64) -> Result<Self> {
        let resistivity = match name {
            "low-resistivity" => 15.0,
            "high-resistivity-1k" => 1000.0,
            "high-resistivity-2k" => 2000.0,
            other => {
                return Err(Error::domain(format!(
                    "unknown substrate preset {other:?}; expected one of \
                     low-resistivity, high-resistivity-1k, high-resistivity-2k"
                )))
            }
        };
        Self::new(resistivity, SILICON_RELATIVE_PERMITTIVITY, thickness)
    }

    pub fn resistivity_ohm_cm(&self) -> f64 {
        self.resistivity_ohm_cm
    }

    pub fn relative_permittivity(&self) -> f64 {
        self.relative_permittivity
    }

    /// Substrate thickness in metres.
    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    /// Bulk conductivity in S/m (resistivity is stored in ohm.cm).
    pub fn conductivity(&self) -> f64 {
        100.0 / self.resistivity_ohm_cm
    }

    pub fn with_thickness(&self, thickness: f64) -> Result<Self> {
        Self::new(
            self.resistivity_ohm_cm,
            self.relative_permittivity,
            thickness,
        )
    }

    pub fn with_resistivity(&self, resistivity_ohm_cm: f64) -> Result<Self> {
        Self::new(
            resistivity_ohm_cm,
            self.relative_permittivity,
            self.thickness,
        )
    }
}

/// Effective conductivity of two layers in series, where `x` is the
/// thickness fraction of layer `b`:
///
/// `sigma_eff = sigma_a * sigma_b / (sigma_b * (1 - x) + sigma_a * x)`
///
/// Equivalently `1/sigma_eff = (1 - x)/sigma_a + x/sigma_b`. The result
/// always lies between the two input conductivities.
pub fn effective_conductivity_pair(sigma_a: f64, sigma_b: f64, x: f64) -> Result<f64> {
    if !sigma_a.is_finite() || sigma_a <= 0.0 || !sigma_b.is_finite() || sigma_b <= 0.0 {
        return Err(Error::domain(format!(
            "conductivities must be positive and finite, got {sigma_a} and {sigma_b}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!(
            "thickness fraction must lie in [0, 1], got {x}"
        )));
    }
    Ok(sigma_a * sigma_b / (sigma_b * (1.0 - x) + sigma_a * x))
}

/// Thickness fraction of one layer: `t_i / total_thickness`.
pub fn thickness_fraction(stack: &LayerStack, index: usize) -> Result<f64> {
    let layer = stack.layers.get(index).ok_or_else(|| {
        Error::domain(format!(
            "layer index {index} out of range for a {}-layer stack",
            stack.layers.len()
        ))
    })?;
    Ok(layer.thickness / stack.total_thickness())
}

/// Collapses a stack into a single layer of the same total thickness whose
/// conductivity satisfies `1/sigma_eff = sum_i x_i / sigma_i`.
///
/// Identical (to round-off) to folding [`effective_conductivity_pair`] over
/// the layers in any association order.
pub fn collapse_stack(stack: &LayerStack) -> MaterialLayer {
    let total = stack.total_thickness();
    let reciprocal_sum: f64 = stack
        .layers
        .iter()
        .map(|l| (l.thickness / total) / l.conductivity)
        .sum();
    let sigma_eff = 1.0 / reciprocal_sum;
    let name = stack
        .layers
        .iter()
        .map(|l| l.name.as_str())
        .collect::<Vec<_>>()
        .join("+");
    MaterialLayer {
        name,
        conductivity: sigma_eff,
        thickness: total,
    }
}

/// Converts an as-plated Au / Sn pair into the post-reflow alloy stack.
///
/// The tin is fully consumed, pulling `AU_CONSUMPTION_RATIO` times its own
/// thickness of gold into the alloy; volume change during alloying is
/// neglected, so total thickness is conserved. Returns
/// `(alloy_thickness, residual_gold_thickness)`.
pub fn solder_alloy_transform(au_thickness: f64, sn_thickness: f64) -> Result<(f64, f64)> {
    if !au_thickness.is_finite()
        || au_thickness < 0.0
        || !sn_thickness.is_finite()
        || sn_thickness < 0.0
    {
        return Err(Error::domain(format!(
            "layer thicknesses must be non-negative and finite, got Au {au_thickness}, Sn {sn_thickness}"
        )));
    }
    let consumed = AU_CONSUMPTION_RATIO * sn_thickness;
    if au_thickness < consumed {
        return Err(Error::domain(format!(
            "insufficient gold for full tin consumption: {:.4} um Sn needs {:.4} um Au but only {:.4} um is plated",
            sn_thickness * 1e6,
            consumed * 1e6,
            au_thickness * 1e6
        )));
    }
    let total = au_thickness + sn_thickness;
    let alloy_nominal = sn_thickness + consumed;
    // Both outputs are snapped within a couple of ulps of the nominal split
    // so the pair re-sums to the plated total bit-exactly. A one-sided snap
    // is not enough: the re-add can land on a round-to-even tie that skips
    // the total for every residual on its grid.
    for alloy_steps in [0i32, -1, 1, -2, 2] {
        let alloy = ulp_step(alloy_nominal, alloy_steps);
        if !(0.0..=total).contains(&alloy) {
            continue;
        }
        let mut residual = total - alloy;
        for _ in 0..4 {
            let sum = alloy + residual;
            if sum == total && residual >= 0.0 {
                return Ok((alloy, residual));
            }
            residual = if sum > total {
                residual.next_down()
            } else {
                residual.next_up()
            };
        }
    }
    Ok((alloy_nominal, total - alloy_nominal))
}

fn ulp_step(value: f64, steps: i32) -> f64 {
    let mut v = value;
    for _ in 0..steps.abs() {
        v = if steps > 0 {
            v.next_up()
        } else {
            v.next_down()
        };
    }
    v
}

/// One catalog entry: a conductivity and free-form provenance notes.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub conductivity_s_per_m: f64,
    #[serde(default)]
    pub notes: String,
}

/// Named conductivity catalog, loaded from a TOML document mapping
/// material name to `{ conductivity_s_per_m, notes }`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialCatalog {
    entries: BTreeMap<String, CatalogEntry>,
}

/// The catalog bundled with the crate (see `data/materials.toml`).
const BUILTIN_CATALOG: &str = include_str!("../data/materials.toml");

impl MaterialCatalog {
    /// The built-in handbook catalog.
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN_CATALOG).expect("bundled catalog must parse")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let entries: BTreeMap<String, CatalogEntry> =
            toml::from_str(text).map_err(|e| Error::Parse {
                line: toml_error_line(text, &e),
                message: format!("materials catalog: {}", toml_error_message(&e)),
            })?;
        for (name, entry) in &entries {
            if !entry.conductivity_s_per_m.is_finite() || entry.conductivity_s_per_m <= 0.0 {
                return Err(Error::domain(format!(
                    "catalog entry {name:?}: conductivity must be positive and finite"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.get(name)
    }

    pub fn conductivity(&self, name: &str) -> Result<f64> {
        self.get(name)
            .map(|e| e.conductivity_s_per_m)
            .ok_or_else(|| Error::UnknownMaterial {
                name: name.to_string(),
                available: self.names().collect::<Vec<_>>().join(", "),
            })
    }

    /// Builds a layer of the named material.
    pub fn layer(&self, name: &str, thickness: f64) -> Result<MaterialLayer> {
        MaterialLayer::new(name, self.conductivity(name)?, thickness)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CatalogEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Maps a toml byte-span error onto a 1-based line number in `text`.
pub(crate) fn toml_error_line(text: &str, e: &toml::de::Error) -> usize {
    e.span()
        .map(|s| {
            text[..s.start.min(text.len())]
                .chars()
                .filter(|&c| c == '\n')
                .count()
                + 1
        })
        .unwrap_or(0)
}

pub(crate) fn toml_error_message(e: &toml::de::Error) -> String {
    e.message().to_string()
}
