//! The five-cylinder commutator identity.
//!
//! Two three-cycles whose supports share only one cylinder interact exactly
//! like the permutations `(1 2 3)` and `(1 4 5)`: the double commutator
//! reproduces the first cycle restricted to the shared part. This is the only
//! identity the synthesis machinery ever uses, so both the permutation shadow
//! and the cylinder version are checked here.

use crate::error::{CoreError, Result};
use crate::fullgroup::{commutator, equals, inverse, make_three_cycle, PieceTable};
use crate::lattice::{patch_shift, patch_union, LatticeVector, Patch};
use crate::subshift::{compatible, SubshiftOracle};
use crate::theorems::perm::Perm;

/// The permutation shadow on five points: with `a = (0 1 2)` and
/// `b = (0 3 4)`, the double commutator `[[b^-1,a^-1],[b,a]]` equals `a`.
/// Returns `([b,a], [b^-1,a^-1], the double commutator, whether it equals a)`.
pub fn permutation_model_check() -> (Perm, Perm, Perm, bool) {
    let a = Perm::three_cycle(5, 0, 1, 2).expect("static");
    let b = Perm::three_cycle(5, 0, 3, 4).expect("static");
    let comm = |g: &Perm, h: &Perm| -> Perm {
        g.inverse().compose(&h.inverse()).compose(g).compose(h)
    };
    let q = comm(&b, &a);
    let p = comm(&b.inverse(), &a.inverse());
    let dc = comm(&p, &q);
    let holds = dc == a;
    (q, p, dc, holds)
}

#[derive(Clone, Debug)]
pub struct FiveSetOutcome {
    pub lhs: PieceTable,
    pub rhs: PieceTable,
    pub holds: bool,
}

fn pair_name(i: usize) -> &'static str {
    [
        "pi1", "pi1+g1", "pi1+g2", "pi2", "pi2+h1", "pi2+h2",
    ][i]
}

/// Check the hypothesis and evaluate both sides of the identity
/// `[[b^-1,a^-1],[b,a]] = T_{pi1 u pi2,(0,g1,g2)}` where
/// `a = T_{pi1,(0,g1,g2)}` and `b = T_{pi2,(0,h1,h2)}`.
///
/// Hypothesis: the six cylinders `pi1, pi1+g1, pi1+g2, pi2, pi2+h1, pi2+h2`
/// are pairwise disjoint, except that `pi1` and `pi2` may intersect.
/// A violation is an error naming the offending pair; it is not a
/// counterexample to the identity.
pub fn five_set_identity(
    oracle: &dyn SubshiftOracle,
    pi1: &Patch,
    g: (&LatticeVector, &LatticeVector),
    pi2: &Patch,
    h: (&LatticeVector, &LatticeVector),
) -> Result<FiveSetOutcome> {
    let d = oracle.dim();
    let zero = vec![0i64; d];
    let six: [Patch; 6] = [
        pi1.clone(),
        patch_shift(pi1, g.0),
        patch_shift(pi1, g.1),
        pi2.clone(),
        patch_shift(pi2, h.0),
        patch_shift(pi2, h.1),
    ];
    for i in 0..6 {
        for j in (i + 1)..6 {
            if i == 0 && j == 3 {
                continue; // pi1 against pi2 is the one allowed overlap
            }
            if compatible(oracle, &six[i], &six[j])? {
                return Err(CoreError::HypothesisViolation(format!(
                    "{} and {} intersect",
                    pair_name(i),
                    pair_name(j)
                )));
            }
        }
    }
    let a = make_three_cycle(oracle, pi1, &[zero.clone(), g.0.clone(), g.1.clone()])?;
    let b = make_three_cycle(oracle, pi2, &[zero.clone(), h.0.clone(), h.1.clone()])?;
    let q = commutator(oracle, &b, &a)?;
    let p = commutator(oracle, &inverse(&b), &inverse(&a))?;
    let lhs = commutator(oracle, &p, &q)?;
    let rhs = match patch_union(pi1, pi2) {
        Ok(u) => make_three_cycle(oracle, &u, &[zero, g.0.clone(), g.1.clone()])?,
        Err(CoreError::Conflict { .. }) => PieceTable::identity(oracle),
        Err(e) => return Err(e),
    };
    let holds = equals(oracle, &lhs, &rhs)?;
    Ok(FiveSetOutcome { lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ball_points;
    use crate::subshift::{Alphabet, ChairBackend, FullShift};
    use crate::theorems::incompat::CHAIR_R1;

    #[test]
    fn permutation_shadow_pins() {
        let (q, p, dc, holds) = permutation_model_check();
        assert!(holds);
        assert_eq!(q, Perm::three_cycle(5, 0, 4, 2).unwrap()); // [b,a]
        assert_eq!(p, Perm::three_cycle(5, 0, 3, 1).unwrap()); // [b^-1,a^-1]
        assert_eq!(dc, Perm::three_cycle(5, 0, 1, 2).unwrap());
    }

    // a field of a's with one b: translates conflict whenever the lone b
    // lands inside the other copy's field
    fn spiked(d: usize, r: u32) -> Patch {
        let cells = ball_points(d, r)
            .into_iter()
            .map(|p| {
                let is_origin = p.iter().all(|&x| x == 0);
                (p, if is_origin { 1 } else { 0 })
            })
            .collect();
        Patch::new(d, cells).unwrap()
    }

    #[test]
    fn identity_holds_on_full_shift_d1() {
        let o = FullShift::new(1, Alphabet::new(vec!["a".into(), "b".into()]).unwrap()).unwrap();
        let pi = spiked(1, 4);
        let out = five_set_identity(
            &o,
            &pi,
            (&vec![1], &vec![2]),
            &pi,
            (&vec![-1], &vec![-2]),
        )
        .unwrap();
        assert!(out.holds);
        // the shared cylinder is everything here, so the rhs is just a
        assert!(!out.rhs.is_identity(&o));
        assert_eq!(out.rhs.pieces.len(), 3);
    }

    #[test]
    fn identity_holds_on_full_shift_d2() {
        let o = FullShift::new(2, Alphabet::new(vec!["a".into(), "b".into()]).unwrap()).unwrap();
        let pi = spiked(2, 4);
        let out = five_set_identity(
            &o,
            &pi,
            (&vec![1, 0], &vec![2, 0]),
            &pi,
            (&vec![0, 1], &vec![0, 2]),
        )
        .unwrap();
        assert!(out.holds);
    }

    #[test]
    fn identity_holds_on_chair() {
        let o = ChairBackend::new(None);
        let sup = ball_points(2, CHAIR_R1);
        let mut checked = 0;
        for seed in 0..6u64 {
            let w = o.sample_window(seed, &sup).unwrap();
            let out = five_set_identity(
                &o,
                &w,
                (&vec![1, 0], &vec![-1, 0]),
                &w,
                (&vec![0, 1], &vec![0, -1]),
            )
            .unwrap();
            assert!(out.holds, "seed {seed}");
            checked += 1;
        }
        assert_eq!(checked, 6);
    }

    #[test]
    fn distinct_overlapping_bases_on_chair() {
        // pi1 and pi2 are different windows that genuinely intersect:
        // a B(R1) window and its extension by one ring
        let o = ChairBackend::new(None);
        let w = o.sample_window(9, &ball_points(2, CHAIR_R1 + 1)).unwrap();
        let pi1 = w.restrict(&ball_points(2, CHAIR_R1));
        let pi2 = w;
        let out = five_set_identity(
            &o,
            &pi1,
            (&vec![1, 0], &vec![-1, 0]),
            &pi2,
            (&vec![0, 1], &vec![0, -1]),
        )
        .unwrap();
        assert!(out.holds);
        // rhs is the cycle of the smaller (intersection) cylinder: pi1 u pi2 = pi2
        let direct = make_three_cycle(
            &o,
            &pi2,
            &[vec![0, 0], vec![1, 0], vec![-1, 0]],
        )
        .unwrap();
        assert!(equals(&o, &out.rhs, &direct).unwrap());
    }

    #[test]
    fn hypothesis_violation_is_named() {
        let o = FullShift::new(1, Alphabet::new(vec!["a".into(), "b".into()]).unwrap()).unwrap();
        // h2 is so far out that pi2+h2 has disjoint support from everything,
        // while all nearer pairs still conflict
        let pi = spiked(1, 4);
        let err = five_set_identity(
            &o,
            &pi,
            (&vec![1], &vec![2]),
            &pi,
            (&vec![-1], &vec![-9]),
        )
        .unwrap_err();
        match err {
            CoreError::HypothesisViolation(msg) => {
                assert!(msg.contains("pi2+h2"), "got: {msg}");
            }
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
    }
}
