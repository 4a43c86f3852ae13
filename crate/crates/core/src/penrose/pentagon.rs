//! The four acceptance pentagons and the transversal they carve out.
//!
//! A tiling vertex candidate `x = sum k_j zeta^j` with `s = sum k_j` in 1..4
//! is accepted exactly when `sum k_j zeta^(2j) + xi` lands in the pentagon
//! `V_s`. The transversal keeps one pentagon per sheet, translated so that a
//! point `(s, xi)` corresponds to the tiling of `xi` with the vertex at the
//! integer point `s` marked.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::penrose::cyclo::Cyclo;
use crate::penrose::plane::{contains_with, ConvexPoly, Pt, SideTags};
use crate::penrose::q5::Q5;

/// Vertices of `V_s`, counterclockwise.
/// `V_1 = conv{zeta^j}`, `V_2 = conv{zeta^j + zeta^(j+1)}`, `V_3 = -V_2`,
/// `V_4 = -V_1`.
pub fn pentagon_vertices(s: u8) -> Vec<Cyclo> {
    assert!((1..=4).contains(&s), "pentagon index must be 1..4");
    (0..5)
        .map(|j| match s {
            1 => Cyclo::zeta(j),
            2 => Cyclo::zeta(j).add(&Cyclo::zeta(j + 1)),
            3 => Cyclo::zeta(j).add(&Cyclo::zeta(j + 1)).neg(),
            _ => Cyclo::zeta(j).neg(),
        })
        .collect()
}

fn build_poly(s: u8, shift: i64) -> ConvexPoly {
    let d = Cyclo::from_int(shift);
    let verts = pentagon_vertices(s)
        .iter()
        .map(|v| Pt::from_cyclo(&v.add(&d)))
        .collect();
    ConvexPoly::new(verts).expect("pentagon is nondegenerate")
}

// built once; membership tests run constantly in window enumeration
static PENTAGONS: OnceLock<[ConvexPoly; 4]> = OnceLock::new();
static VPRIMES: OnceLock<[ConvexPoly; 4]> = OnceLock::new();
static PENTAGON_EDGES: OnceLock<[Vec<(Q5, Q5, Q5)>; 4]> = OnceLock::new();

pub fn pentagon_poly(s: u8) -> ConvexPoly {
    assert!((1..=4).contains(&s), "pentagon index must be 1..4");
    let all = PENTAGONS.get_or_init(|| [1, 2, 3, 4].map(|s| build_poly(s, 0)));
    all[(s - 1) as usize].clone()
}

/// Sheet-`s` domain of the transversal: `V_s` translated by `-s`.
pub fn v_prime_poly(s: u8) -> ConvexPoly {
    assert!((1..=4).contains(&s), "pentagon index must be 1..4");
    let all = VPRIMES.get_or_init(|| [1, 2, 3, 4].map(|s| build_poly(s, -(s as i64))));
    all[(s - 1) as usize].clone()
}

/// Tag-resolved membership of a plane point in `V_s`.
pub fn point_in_pentagon(q: &Pt, tags: &SideTags, s: u8) -> Result<bool> {
    assert!((1..=4).contains(&s), "pentagon index must be 1..4");
    let edges = PENTAGON_EDGES
        .get_or_init(|| [1, 2, 3, 4].map(|s| build_poly(s, 0).edge_functionals()));
    contains_with(&edges[(s - 1) as usize], q, tags)
}

/// A point of the transversal: a sheet label, an exact plane point, and the
/// side tags that disambiguate it when it sits on grid lines.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TransversalPoint {
    pub sheet: u8,
    pub xi: Cyclo,
    pub tags: SideTags,
}

impl TransversalPoint {
    pub fn new(sheet: u8, xi: Cyclo) -> Self {
        TransversalPoint {
            sheet,
            xi,
            tags: SideTags::None,
        }
    }

    pub fn with_tags(sheet: u8, xi: Cyclo, tags: SideTags) -> Self {
        TransversalPoint { sheet, xi, tags }
    }

    /// Checks the point actually lies on its sheet (inside `V_s - s`).
    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.sheet) {
            return Err(CoreError::BadInput(format!(
                "sheet {} out of range 1..4",
                self.sheet
            )));
        }
        let inside = v_prime_poly(self.sheet).contains(&Pt::from_cyclo(&self.xi), &self.tags)?;
        if !inside {
            return Err(CoreError::BadInput(
                "point lies outside its sheet pentagon".into(),
            ));
        }
        Ok(())
    }
}
