//! Continuous biframes over discretized measure spaces.
//!
//! A biframe is a pair of vector families `(F, G)` indexed by a measure space
//! whose mixed form `∫ ⟨f, F(w)⟩ ⟨G(w), f⟩ dμ` is sandwiched between
//! `A‖f‖²` and `B‖f‖²`. This crate discretizes the measure space into weighted
//! atoms and works with dense operators, so every quantity (the biframe
//! operator, optimal bounds, duals, multipliers, tensor products) is computed
//! exactly up to floating-point rounding.

pub mod biframe;
pub mod cli;
pub mod corpus;
pub mod document;
pub mod error;
pub mod measure;
pub mod multiplier;
pub mod operators;
pub mod random;
pub mod report;
pub mod tensor;
pub mod verification;

pub use biframe::{
    assemble, canonical_dual, classify, duality_residual, quadratic_form, reconstruct,
    single_frame_bounds, swap, transport, BiframeOperator, BiframePair, BiframeReport, Side,
    VectorFamily,
};
pub use error::{Error, Result};
pub use measure::{AtomSpace, QuadratureKind, QuadratureRule};
pub use multiplier::{build_multiplier, MultiplierOperator, SymbolFunction};
pub use operators::{Field, Operator, Scalar, Space, Vector, DEFAULT_TOL};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
