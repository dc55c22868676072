//! Stability analysis for Ricci-flat cones over Einstein manifolds.
//!
//! The crate covers the spectral classification of a cross-section, the
//! tangential block test, the catalog of symmetric spaces, a finite element
//! solver for the radial model operator and a finite-dimensional surrogate of
//! the restarted flow argument.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod catalog;
pub mod error;
pub mod flow;
pub mod format;
pub mod heat;
pub mod invariants;
pub mod quadrature;
pub mod radial;
pub mod smallmat;
pub mod spectrum;
pub mod tangential;
pub mod tridiag;

pub use catalog::{lambda_threshold, reproduce_table, StabilityLabel, TableReport};
pub use error::{Error, Result};
pub use flow::{choose_constants, run_flow, FlowConfig, FlowTrace, SurrogateSystem, Tier};
pub use heat::{heat_decay_check, HeatReport};
pub use invariants::{run_checks, CheckOptions, CheckReport};
pub use radial::{
    build_radial_model, friedrichs_eigenvalues, garding_constants, hardy_quotient, min_eps_margin,
    model_cone_spectrum, RadialModel,
};
pub use spectrum::{
    exceptional_weights, friedrichs_classification, nu, BoundaryClass, CrossSectionSpectrum,
    IndicialData, WeightKind,
};
pub use tangential::{
    tangential_block_spectrum, tangential_verdict, v1_form, v3_form, v4_form, BlockForm, BlockKind,
    StabilityVerdict,
};
pub use tridiag::{Pencil, SymTridiag};
