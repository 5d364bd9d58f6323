//! Spectral extremal graph toolkit for theta-free graphs.
//!
//! Graphs have at most 64 vertices and are stored as bitset adjacency rows.
//! The crate covers graph6 I/O, canonical labelling, isomorph-free
//! enumeration by edge count, θ_{r,p,q} detection with witnesses, spectral
//! radius by power iteration, and a structural certificate for the
//! book graphs K₂ ∨ kK₁ that maximize λ among θ₂,₂,₃-free graphs.
//!
//! ```
//! use spectheta::{family, spectral_radius, ThetaSpec, is_theta_free};
//!
//! let g = family::book(28).unwrap();
//! assert!(is_theta_free(&g, ThetaSpec::t223()));
//! assert!((spectral_radius(&g).unwrap().lambda - 8.0).abs() < 1e-9);
//! ```

pub mod canon;
pub mod enumerate;
pub mod family;
pub mod graph;
pub mod graph6;
pub mod json;
pub mod spectral;
pub mod theta;
pub mod verify;

pub use canon::{canonical_form, canonical_label, canonize, CanonicalLabel};
pub use enumerate::{
    count_connected_by_order, enumerate_by_edges, enumerate_with, extremal_search, extremal_table, EnumOptions,
    EnumerateError, ExtremalRecord, SearchOptions, TableRow,
};
pub use family::{Family, FamilyError};
pub use graph::{Graph, GraphError, VertexSet, MAX_VERTICES};
pub use graph6::{from_graph6, to_graph6, Graph6Error};
pub use spectral::{
    bound_value, check_nosal, eigen_identity_check, extremal_vertex, spectral_radius, NosalReport, SpectralError,
    SpectralResult,
};
pub use theta::oracle::oracle_contains_theta;
pub use theta::{contains_double_star, contains_theta, is_theta_free, ThetaSpec, ThetaWitness};
pub use verify::{
    check_lemma_conclusions, decompose, inequality_one_check, verify_theorem_instance, verify_with_spec, Certificate,
    DecompositionReport, LemmaChecklist, VerifyError,
};
