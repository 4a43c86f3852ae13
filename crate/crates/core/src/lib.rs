//! Exact algebra of topological full groups over `Z^d` subshifts, plus two
//! companion realizations: interval exchange groups over irrational rotation
//! subgroups, and the pentagonal-transversal model of the Penrose tiling group.
//!
//! Everything here is exact: no floating point participates in any decision.
//! Floats appear only as prefilters that are re-verified exactly.

pub mod error;
pub mod fullgroup;
pub mod iet;
pub mod lattice;
pub mod penrose;
pub mod subshift;
pub mod theorems;

pub use error::CoreError;
pub use fullgroup::{
    apply_to_window, commutator, compose, equals, inverse, make_three_cycle, order, validate,
    PieceTable, WordLetter,
};
pub use iet::{
    h_compare, iet_apply, iet_canonicalize, iet_commutator, iet_compose, iet_equals, iet_inverse,
    iet_order, interval_five_set, interval_three_cycle, rotation, validate_iet, AngleBasis,
    HVector, IetMap, IntervalFiveSetOutcome,
};
pub use lattice::{ball_points, patch_shift, patch_union, patches_conflict, LatticeVector, Patch};
pub use penrose::{
    element_compose, element_equals, element_inverse, element_validate, f_move, faces,
    fundamental_reduce, local_rule_check, pentagrid_vertices, snf_quotient, transversal_apply,
    vertices, Cyclo, GroupElementP, PatchSpec, TilingWindow, TransversalPoint,
};
pub use subshift::{compatible, Alphabet, ChairBackend, FullShift, SubshiftOracle};
