//! Exact coordinates for the Penrose-tiling transversal and its full group.
//!
//! The tilings are modeled projection-style: a tiling is indexed by a point
//! `xi` of the plane, its vertices are the integer combinations of fifth
//! roots of unity singled out by a pentagon condition, and moving a marked
//! vertex becomes a piecewise translation of `xi` by elements of the rank-4
//! subgroup P. Everything is computed over Q(sqrt5); floats appear only as
//! prefilters whose accepted decisions are re-verified exactly.

pub mod cyclo;
pub mod element;
pub mod pentagon;
pub mod pentagrid;
pub mod plane;
pub mod q5;
pub mod snf;
pub mod window;

pub use cyclo::Cyclo;
pub use element::{
    element_compose, element_equals, element_inverse, element_validate, f_move,
    f_move_window_model, local_rule_check, patch_cylinder, sample_transversal, transversal_apply,
    window_signature, GroupElementP, PatchSpec, PieceP,
};
pub use pentagon::{point_in_pentagon, TransversalPoint};
pub use pentagrid::pentagrid_vertices;
pub use plane::{ConvexPoly, Pt, Region, SideTags};
pub use q5::Q5;
pub use snf::{fundamental_reduce, smith_normal_form, snf_quotient, QuotientReport};
pub use window::{faces, vertices, Face, TilingWindow, VertexRec};

use num::BigRational;

/// A vetted regular tiling parameter on sheet 1: small rationals with
/// incommensurate denominators, on no grid line anywhere testing reaches.
pub fn sample_xi() -> Cyclo {
    let rat = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    Cyclo::new([rat(-8, 7), rat(1, 11), rat(1, 13), rat(-1, 17), rat(0, 1)])
}
