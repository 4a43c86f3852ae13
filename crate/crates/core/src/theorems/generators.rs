//! The finite generating family at radius `R`: all axis three-cycles
//! `T_{pi,(0,e_j,-e_j)}` whose three cylinders are honestly disjoint.

use crate::error::Result;
use crate::fullgroup::{make_three_cycle, PieceTable};
use crate::lattice::{axis_vec, ball_points, patch_shift, vec_neg, Patch};
use crate::subshift::{compatible, SubshiftOracle};

#[derive(Clone, Debug)]
pub struct TRFamily {
    pub r: u32,
    /// `(patch, axis)` pairs whose translate triples are pairwise disjoint.
    pub generators: Vec<(Patch, usize)>,
    /// Candidates that failed the disjointness test, with the reason.
    pub skipped: Vec<(Patch, usize, String)>,
}

impl TRFamily {
    pub fn position_of(&self, patch: &Patch, axis: usize) -> Option<usize> {
        self.generators
            .iter()
            .position(|(p, a)| p == patch && *a == axis)
    }
}

/// The element `T_{pi,(0,e_axis,-e_axis)}`.
pub fn generator_table(
    oracle: &dyn SubshiftOracle,
    patch: &Patch,
    axis: usize,
) -> Result<PieceTable> {
    let d = oracle.dim();
    let e = axis_vec(d, axis, 1);
    make_three_cycle(oracle, patch, &[vec![0; d], e.clone(), vec_neg(&e)])
}

/// Enumerate the radius-`R` family over all admissible `B(R)` patches and
/// positive axes. Inclusion needs `pi`, `pi+e`, `pi-e` pairwise incompatible;
/// everything else is reported in `skipped` rather than silently dropped.
pub fn enumerate_t_r(oracle: &dyn SubshiftOracle, r: u32, enum_cap: usize) -> Result<TRFamily> {
    let d = oracle.dim();
    let ball = ball_points(d, r);
    let patches = oracle.enumerate_admissible(&ball, enum_cap)?;
    let mut generators = Vec::new();
    let mut skipped = Vec::new();
    for pi in &patches {
        for axis in 0..d {
            let e = axis_vec(d, axis, 1);
            let plus = patch_shift(pi, &e);
            let minus = patch_shift(pi, &vec_neg(&e));
            let reason = if compatible(oracle, pi, &plus)? {
                Some("pi and pi+e intersect")
            } else if compatible(oracle, pi, &minus)? {
                Some("pi and pi-e intersect")
            } else if compatible(oracle, &plus, &minus)? {
                Some("pi+e and pi-e intersect")
            } else {
                None
            };
            match reason {
                None => generators.push((pi.clone(), axis)),
                Some(why) => skipped.push((pi.clone(), axis, why.to_string())),
            }
        }
    }
    Ok(TRFamily {
        r,
        generators,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fullgroup::order;
    use crate::subshift::{Alphabet, ChairBackend, FullShift};
    use crate::theorems::incompat::CHAIR_R1;

    fn full1() -> FullShift {
        FullShift::new(1, Alphabet::new(vec!["a".into(), "b".into()]).unwrap()).unwrap()
    }

    #[test]
    fn full_shift_r0_is_empty() {
        // single cells never conflict with their own translates
        let fam = enumerate_t_r(&full1(), 0, 1000).unwrap();
        assert!(fam.generators.is_empty());
        assert_eq!(fam.skipped.len(), 2); // two B(0) patches, one axis
    }

    #[test]
    fn full_shift_r1_is_nonempty() {
        // aab on {-1,0,1} conflicts with both unit translates, and those
        // conflict with each other, so the family is not empty at R=1
        let fam = enumerate_t_r(&full1(), 1, 1000).unwrap();
        assert!(!fam.generators.is_empty());
        assert!(!fam.skipped.is_empty());
        // constants are always skipped
        let constant = Patch::new(1, vec![(vec![-1], 0), (vec![0], 0), (vec![1], 0)]).unwrap();
        assert!(fam.skipped.iter().any(|(p, _, _)| *p == constant));
        assert!(fam.generators.iter().all(|(p, _)| *p != constant));
        // spot-check membership of the known witness
        let aab = Patch::new(1, vec![(vec![-1], 0), (vec![0], 0), (vec![1], 1)]).unwrap();
        assert!(fam.position_of(&aab, 0).is_some());
    }

    #[test]
    fn generator_tables_have_order_three() {
        let o = full1();
        let fam = enumerate_t_r(&o, 1, 1000).unwrap();
        for (p, axis) in fam.generators.iter().take(4) {
            let t = generator_table(&o, p, *axis).unwrap();
            assert_eq!(order(&o, &t, 10).unwrap(), 3);
        }
    }

    #[test]
    fn chair_family_at_r1_has_no_skips() {
        // that is the whole point of the incompatibility radius
        let o = ChairBackend::new(None);
        let fam = enumerate_t_r(&o, CHAIR_R1, 1_000_000).unwrap();
        assert!(fam.skipped.is_empty(), "skips at R1: {:?}", fam.skipped.len());
        assert_eq!(fam.generators.len(), 68 * 2); // every B(2) patch, both axes
        // at R=0 nothing qualifies: single cells never conflict with their
        // own translates
        let r0 = enumerate_t_r(&o, 0, 1_000_000).unwrap();
        assert!(r0.generators.is_empty());
        assert_eq!(r0.skipped.len(), 4 * 2);
    }
}
