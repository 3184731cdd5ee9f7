//! Machine-readable reports emitted by the command-line tool.
//!
//! Every report is wrapped in an [`Envelope`] carrying the schema version, the
//! tool version and the settings that produced it. The schema lives in
//! `docs/report.schema.json`.

use serde::Serialize;

use crate::biframe::{BiframeReport, Side};
use crate::document::BiframeDocument;
use crate::multiplier::{LowerBoundCertificate, PerturbationCertificate};
use crate::tensor::{SandwichVerdict, TensorBounds};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub tolerance: f64,
    pub seed: u64,
    pub deterministic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub settings: Settings,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &'static str, settings: Settings, result: T) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            tool: "biframe",
            tool_version: crate::VERSION,
            command,
            settings,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub atoms: usize,
    pub biframe: BiframeReport,
    /// Optimal frame bounds of `F` alone.
    pub frame_bounds_f: [f64; 2],
    /// Optimal frame bounds of `G` alone.
    pub frame_bounds_g: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructResult {
    pub condition_number: f64,
    /// `tol · cond(S)`; residuals are measured on unit basis vectors.
    pub residual_bound: f64,
    pub left_max_residual: f64,
    pub right_max_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualResult {
    pub side: DualSide,
    pub duality_residual: f64,
    pub residual_bound: f64,
    pub passed: bool,
    pub dual: BiframeDocument,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DualSide {
    Left,
    Right,
    Multiplier,
}

impl From<Side> for DualSide {
    fn from(s: Side) -> Self {
        match s {
            Side::Left => DualSide::Left,
            Side::Right => DualSide::Right,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjointResult {
    pub basis_residual: f64,
    /// Distance from the multiplier with conjugated symbol and swapped families.
    pub swapped_residual: f64,
    /// Distance from the multiplier with conjugated symbol and unchanged families.
    pub unswapped_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierResult {
    /// True when the document carried no symbol and `m ≡ 1` was used.
    pub unit_symbol: bool,
    pub symbol_sup_norm: f64,
    pub bessel_f: f64,
    pub bessel_g: f64,
    pub norm_bound: f64,
    pub actual_norm: f64,
    pub within_norm_bound: bool,
    pub adjoint: AdjointResult,
    pub lower_bound_certificate: LowerBoundCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation_certificate: Option<PerturbationCertificate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorResult {
    pub bounds: TensorBounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sandwich: Option<SandwichVerdict>,
}
