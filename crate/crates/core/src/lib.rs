//! Exact symbolic computation for the general conformal algebra `gc_N`.
//!
//! Everything is computed over the exact rationals: sparse polynomials in the
//! formal variables `∂`, `λ`, `μ`, matrices over them, lambda-brackets of
//! `gc_N` elements, Virasoro element verification and construction, conformal
//! modules given by action tables, regular-action detection, and the
//! constructive semisimplicity decompositions for modules over `gc_1` and
//! `gc_N`.
//!
//! Identity checking is decidable throughout: two values are equal exactly
//! when their canonical forms coincide, so every verifier in this crate
//! returns a definite answer together with a witness on failure.

pub mod decompose;
pub mod error;
pub mod gc;
pub mod matrix;
pub mod module;
pub mod poly;
pub mod regularity;
pub mod scalar;
pub mod virasoro;

pub use error::Error;
pub use gc::{
    canonical_embed, check_jacobi, check_skew_symmetry, combinatorial_identity, lambda_bracket,
    AxiomWitness, CombinatorialFormula, GcElement, GcLambdaValue,
};
pub use matrix::{LinearSolution, PolyMatrix};
pub use module::{
    check_module_axioms, dual_module, gc_element_action, restrict_to_virasoro, ActionWitness,
    AlgebraKind, ConformalModule, GenKey, ModuleSpec, RecipeSpec, TableEntrySpec,
};
pub use poly::{MPoly, Var};
pub use regularity::{
    check_regular, hv_reduce, vir_semisimple, weight_product, HvReduction, RegularityReport,
    VirSemisimpleReport, VirasoroSpec, WeightProduct,
};
pub use scalar::Scalar;
pub use virasoro::{
    certify, classify_deg1_grid, is_standard, is_virasoro, make_canonical_virasoro,
    make_gc1_virasoro, make_nonstandard, make_standard_deg1, make_standard_higher, GridReport,
    NonStandardKind, NsBlock, NsTail, StandardDeg1Form, VirasoroCertificate,
};
pub use decompose::{
    decompose_gc1, decompose_gcn, similarity_residuals, skolem_noether_similarity,
    solve_partition_relations, DecompositionReport, PhiKind, PhiMap, SummandKind, SummandSpec,
};
