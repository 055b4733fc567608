//! P-resolutions of two-dimensional cyclic quotient singularities as toric
//! fans, with Milnor numbers and versal base component dimensions computed
//! both from continued fractions and from fan geometry.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals).

pub mod cqs;
pub mod error;
pub mod invariants;
pub mod kset;
pub mod lattice;
pub mod presolution;

pub use cqs::{
    classify_cone, dim_t1, normalize_cone, v_rays, w_generators, ClassTag, ConeClass, InputCone,
    Mat2, NormalForm,
};
pub use error::{Error, Result};
pub use invariants::{
    component_table, dim_difference, dim_stevens, dim_toric, h1_theta, milnor_stevens,
    milnor_toric, nu, ComponentReport, SingularityReport,
};
pub use kset::{enumerate_k, enumerate_ky, is_zero_chain, q_sequence, rdp_chain, KChain};
pub use lattice::{
    chain_string,
    cf_eval, det, hj_expand, lattice_length, pair, primitive_normal, ChainRole, CoeffChain, Int,
    MVec, NVec, Rat, RatPoint,
};
pub use presolution::{
    brute_force_presolutions, build_sigma_k, minimal_resolution_fan, rdp_fan,
    validate_presolution, Cone, Fan, Roof, ValidationReport, Violation,
};
