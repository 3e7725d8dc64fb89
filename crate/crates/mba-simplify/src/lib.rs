//! Simplification of linear and semi-linear mixed boolean-arithmetic (MBA)
//! expressions over w-bit words.
//!
//! A linear MBA is a sum of constant multiples of bitwise expressions whose
//! only constants are 0 and all-ones; a semi-linear MBA additionally allows
//! arbitrary constants inside the bitwise operands, e.g.
//! `(x&1111) + (x&-1112)`. Linear MBAs are fingerprinted by a signature
//! vector (evaluations at all 0/1 corners); semi-linear MBAs need a per-bit
//! signature matrix built from evaluations at values {0, 2^i}. Simplification
//! solves each bit row for a compact linear combination and then refines the
//! masked-term sum: merging terms, recovering XOR structure, and retrying in
//! 1-bit space with mask constants substituted by fresh variables.
//!
//! Entry points:
//! - [`parse`] / [`render`] for the text form used by datasets and the CLI;
//! - [`simplify`] for end-to-end simplification;
//! - [`oracle`] for exhaustive/random/matrix equivalence checking;
//! - [`datagen`] for seeded generation of obfuscated corpora.
//!
//! The `examples/` directory has one runnable program per capability.

pub mod ast;
pub mod boolfunc;
pub mod cli;
pub mod datagen;
pub mod error;
pub mod linear;
pub mod oracle;
pub mod parse;
pub mod semilinear;
pub mod signature;

pub use ast::{classify, evaluate, fold_constants, render, Expr, MbaClass, Width};
pub use boolfunc::{materialize, quine_mccluskey, BoolFunc};
pub use error::Error;
pub use linear::{find_linear_combination, refine, simplify_linear, LinComb};
pub use oracle::{exhaustive_equiv, matrix_equiv, random_equiv, EquivReport, Verdict};
pub use parse::{parse, ParseError};
pub use semilinear::{
    can_change_coefficient_to, can_change_mask_to, cost, merge_terms, per_bit_solution,
    recover_structure, simplify, simplify_with, substitute_and_solve_1bit, MaskedSum, MaskedTerm,
    SimplifyOptions,
};
pub use signature::{
    linear_signature, reconstruct_conjunctions, semilinear_matrix, shortcut_linear_candidate,
    AdjustedMatrix, SignatureMatrix, SignatureVector,
};
