//! Zero-product preserving maps on rank-one idempotents and symmetry
//! transformations of indefinite inner product spaces, at finite dimension.
//!
//! * [`linalg`]: vectors, functionals, semilinear operators, adjoints,
//!   traces, kernels and ranges.
//! * [`idempotents`]: rank-one and finite-rank idempotents, their relations,
//!   orthogonal decompositions and majorants.
//! * [`transform`]: maps `P ↦ A·h(P)·A⁻¹`, their preservation checks and
//!   extension, and reconstruction of `A` from a black-box map.
//! * [`indefinite`]: `(x, y)_η = <ηx, y>`, symmetry transformations of rays,
//!   and recovery of the operator inducing one.
//! * [`selftest`]: the property suites behind `orthosym selftest`.

pub mod error;
pub mod idempotents;
pub mod indefinite;
pub mod json;
pub mod linalg;
pub mod sampling;
pub mod selftest;
pub mod transform;

pub use error::{Error, Result};
pub use idempotents::{
    decompose, majorant, rank_one_from_pair, relate, FiniteRankIdempotent, RankOneIdempotent,
    Relation,
};
pub use indefinite::{
    characterize, generate_eta_isometry, is_symmetry, ray_eta_orthogonal,
    recover_inducing_operator, Characterization, IndefiniteSpace, Ray, RayMap, SymmetryReport,
};
pub use linalg::{
    kernel_and_range, pair, tensor, trace, Automorphism, Functional, Matrix, ScalarField,
    SemilinearOperator, Vector, C64,
};
pub use transform::{
    automorphism_of, check_preservation, extend, from_ray_pair, induce, reconstruct,
    PreservationReport, RayPair, ReconstructionResult, TransformHandle,
};
