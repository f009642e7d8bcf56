//! Reconstruction of boundary data as the sum of traces of an interior and
//! an exterior solution of the generalized Moisil–Teodorescu system.

mod decompose;
mod extension;

pub use decompose::{
    decompose, decompose_with, verify_decomposition, verify_decomposition_with, DecayRow, DecomposeOptions,
    Decomposition, DecompositionReport, VerifyOptions,
};
pub use extension::{extend_boundary_field, CutoffProfile, ExtensionParams, SmoothExtension, WhitneyField};
