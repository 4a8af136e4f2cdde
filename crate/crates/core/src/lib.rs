//! Equivalent-circuit modeling of wafer-level-packaged RF transmission
//! lines.
//!
//! A packaged line (through-substrate vias, multi-layer solder bumps, a
//! lossy silicon cap) is modeled as a cascade of two-port networks. The
//! crate computes S-parameters over frequency, writes Touchstone files,
//! and sweeps the package design space (substrate resistivity, cap
//! thickness, via diameter, sidewall oxide, bonding method), ranking
//! designs by RF loss.
//!
//! Module map:
//! - [`materials`]: layer stacks, effective-conductivity collapse, the
//!   Au/Sn alloy transform, and the named conductivity catalog.
//! - [`geometry`]: via/bump/bonding parameterization, volume-conserving
//!   bump reflow, manufacturability validation.
//! - [`circuit`]: synthesis of frequency-dependent circuit elements from
//!   geometry and materials.
//! - [`network`]: ABCD algebra, S-parameter conversion, passivity and
//!   reciprocity checks.
//! - [`touchstone`]: Touchstone v1 `.s2p` I/O.
//! - [`sweep`]: design-space enumeration, ranking, trend and bonding
//!   reports.
//! - [`design_file`]: TOML design and stack documents.

pub mod circuit;
pub mod design_file;
pub mod error;
pub mod geometry;
pub mod materials;
pub mod network;
pub mod sweep;
pub mod touchstone;

pub use error::{Error, Result};
pub use geometry::{standoff_gap, validate, BondingSpec, BumpGeometry, PackageDesign, ViaGeometry};
pub use materials::{
    collapse_stack, effective_conductivity_pair, solder_alloy_transform, thickness_fraction,
    LayerStack, MaterialCatalog, MaterialLayer, SiliconSubstrate,
};
pub use network::{FrequencyGrid, FrequencyResponse, SMatrix, TwoPortAbcd};
pub use sweep::{evaluate, run_sweep, DesignSpace, Metric, SweepAxis, SweepTable};
