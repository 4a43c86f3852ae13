//! Decomposition of an order-3 element into disjoint elementary three-cycles.
//!
//! After refining to windows on `B(r2)` with `r2 = support_radius +
//! max_shift_norm`, the shift applied at a point and the full window of its
//! image are both determined, so the orbit of a window cylinder can be chased
//! exactly. Points are classified by the triple of full windows they see
//! along their orbit; each class is one elementary cycle, and the class of
//! the image point is the cyclic rotation of the triple, so emitting only the
//! lexicographically least rotation picks exactly one factor per orbit.

use crate::error::{CoreError, Result};
use crate::fullgroup::{equals, make_three_cycle, order, PieceTable};
use crate::lattice::{
    ball_points, patch_shift, patches_conflict, vec_add, vec_is_zero, vec_neg, LatticeVector,
    Patch,
};
use crate::subshift::SubshiftOracle;

/// The constant shift applied by `t` on the cylinder of `q`.
///
/// Invariant: `q` determines cells covering the support of every domain of
/// `t` (a full window on `B(r2)`, possibly translated), so "no conflict"
/// means the domain is contained in `q` and at most one piece can match.
fn window_shift(t: &PieceTable, q: &Patch) -> Result<LatticeVector> {
    let mut found: Option<&LatticeVector> = None;
    for (domain, shift) in &t.pieces {
        if !patches_conflict(domain, q) {
            if found.is_some() {
                return Err(CoreError::NotAThreeCycle(
                    "window is not fine enough to isolate a piece".into(),
                ));
            }
            found = Some(shift);
        }
    }
    Ok(found.cloned().unwrap_or_else(|| vec![0; t.d]))
}

fn sorted_union(a: &[LatticeVector], b: Vec<LatticeVector>) -> Vec<LatticeVector> {
    let mut s = a.to_vec();
    s.extend(b);
    s.sort();
    s.dedup();
    s
}

/// Admissible patches on `support` that extend `base`. Cells not fixed by
/// `base` are filled one at a time with inadmissible prefixes pruned, so the
/// cost is proportional to the number of admissible partial extensions, not
/// `|A|^k`.
fn extensions(
    oracle: &dyn SubshiftOracle,
    base: &Patch,
    support: &[LatticeVector],
    cap: usize,
) -> Result<Vec<Patch>> {
    let new_cells: Vec<LatticeVector> = support
        .iter()
        .filter(|c| base.get(c).is_none())
        .cloned()
        .collect();
    let mut out = Vec::new();
    extend_rec(oracle, base.clone(), &new_cells, 0, cap, &mut out)?;
    Ok(out)
}

fn extend_rec(
    oracle: &dyn SubshiftOracle,
    cur: Patch,
    cells: &[LatticeVector],
    idx: usize,
    cap: usize,
    out: &mut Vec<Patch>,
) -> Result<()> {
    if !oracle.is_admissible(&cur)? {
        return Ok(());
    }
    if idx == cells.len() {
        if out.len() >= cap {
            return Err(CoreError::ResourceCap(format!(
                "more than {cap} admissible extensions"
            )));
        }
        out.push(cur);
        return Ok(());
    }
    for s in 0..oracle.alphabet().len() as u8 {
        let mut next = cur.cells.clone();
        next.push((cells[idx].clone(), s));
        extend_rec(oracle, Patch::new(cur.d, next)?, cells, idx + 1, cap, out)?;
    }
    Ok(())
}

/// Write an order-3 element as a product of elementary three-cycles with
/// pairwise disjoint supports. Fails with `NotAThreeCycle` when the element
/// does not have order exactly 3.
pub fn decompose_three_cycle(
    oracle: &dyn SubshiftOracle,
    t: &PieceTable,
    enum_cap: usize,
) -> Result<Vec<PieceTable>> {
    match order(oracle, t, 3) {
        Ok(3) => {}
        Ok(k) => {
            return Err(CoreError::NotAThreeCycle(format!(
                "element has order {k}, not 3"
            )))
        }
        Err(CoreError::ResourceCap(_)) => {
            return Err(CoreError::NotAThreeCycle("element has order > 3".into()))
        }
        Err(e) => return Err(e),
    }
    if let Some(f) = as_elementary(t) {
        return Ok(vec![f]);
    }
    let d = oracle.dim();
    let r2 = (t.support_radius() + t.max_shift_norm()) as u32;
    let ball = ball_points(d, r2);
    let mut factors = Vec::new();
    for w0 in oracle.enumerate_admissible(&ball, enum_cap)? {
        let u1 = window_shift(t, &w0)?;
        if vec_is_zero(&u1) {
            continue;
        }
        // pull the image window back to the source point: x sees w0 on B and
        // t(x)'s window on B - u1
        let s1 = sorted_union(&ball, ball.iter().map(|p| vec_add(p, &vec_neg(&u1))).collect());
        for rho in extensions(oracle, &w0, &s1, enum_cap)? {
            let w1 = patch_shift(&rho, &u1).restrict(&ball);
            let u2 = window_shift(t, &w1)?;
            let pull2 = vec_neg(&vec_add(&u1, &u2));
            let s2 = sorted_union(&s1, ball.iter().map(|p| vec_add(p, &pull2)).collect());
            for tau in extensions(oracle, &rho, &s2, enum_cap)? {
                let w2 = patch_shift(&tau, &vec_add(&u1, &u2)).restrict(&ball);
                let u3 = window_shift(t, &w2)?;
                if !vec_is_zero(&vec_add(&vec_add(&u1, &u2), &u3)) {
                    return Err(CoreError::NotAThreeCycle(
                        "orbit of a window does not close after three steps".into(),
                    ));
                }
                // the image point's triple is the rotation (w1,w2,w0); emit
                // one factor per orbit by keeping the least rotation only
                let here = (&w0, &w1, &w2);
                if (&w1, &w2, &w0) < here || (&w2, &w0, &w1) < here {
                    continue;
                }
                let cycle = [vec![0; d], u1.clone(), vec_add(&u1, &u2)];
                match make_three_cycle(oracle, &tau, &cycle) {
                    Ok(f) => factors.push(f),
                    Err(CoreError::Overlap(_)) => {
                        return Err(CoreError::NotAThreeCycle(
                            "window orbit revisits its own cylinder".into(),
                        ))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    // factors are pairwise disjoint (one per orbit class), so their product
    // is the concatenation of their pieces; equals against the valid input
    // still catches any overlap, because coverage would fail on both sides
    let mut pieces = Vec::new();
    for f in &factors {
        pieces.extend(f.pieces.iter().cloned());
    }
    pieces.sort();
    let prod = PieceTable {
        backend: t.backend.clone(),
        d,
        pieces,
    };
    if !equals(oracle, &prod, t)? {
        return Err(CoreError::VerificationFailed(
            "three-cycle factors do not recompose the element".into(),
        ));
    }
    Ok(factors)
}

/// Recognize a table that is literally one elementary cycle: three pieces
/// whose domains are translates of one another chained by the shifts.
fn as_elementary(t: &PieceTable) -> Option<PieceTable> {
    if t.pieces.len() != 3 {
        return None;
    }
    for start in 0..3 {
        let (d0, s0) = &t.pieces[start];
        let next = patch_shift(d0, s0);
        let Some((d1, s1)) = t.pieces.iter().find(|(p, _)| *p == next) else {
            continue;
        };
        let last = patch_shift(d1, s1);
        let Some((d2, s2)) = t.pieces.iter().find(|(p, _)| *p == last) else {
            continue;
        };
        if patch_shift(d2, s2) == *d0 && d1 != d0 && d2 != d0 && d2 != d1 {
            return Some(t.clone());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fullgroup::{compose, inverse, refine_to_ball, validate};
    use crate::lattice::axis_vec;
    use crate::subshift::{compatible, Alphabet, ChairBackend, FullShift};
    use crate::theorems::generators::enumerate_t_r;

    fn full1() -> FullShift {
        FullShift::new(1, Alphabet::new(vec!["a".into(), "b".into()]).unwrap()).unwrap()
    }

    fn spike1() -> Patch {
        // wide enough that both nonzero translates in a (0,1,2) cycle conflict
        Patch::new(
            1,
            (-2..=2).map(|x| (vec![x], u8::from(x == 0))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn elementary_cycle_round_trips() {
        let o = full1();
        let t = make_three_cycle(&o, &spike1(), &[vec![0], vec![1], vec![2]]).unwrap();
        let fs = decompose_three_cycle(&o, &t, 1 << 16).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0], t);
    }

    #[test]
    fn refined_cycle_is_reassembled_from_windows() {
        let o = full1();
        let t = make_three_cycle(&o, &spike1(), &[vec![0], vec![1], vec![2]]).unwrap();
        let refined = refine_to_ball(&o, &t, 3, 1 << 16).unwrap();
        assert!(refined.pieces.len() > 3);
        let fs = decompose_three_cycle(&o, &refined, 1 << 16).unwrap();
        assert!(fs.len() > 1);
        // the refined element equals the original, so the factors must
        // recompose to it as well; decompose verified that against `refined`
        assert!(equals(&o, &refined, &t).unwrap());
        for f in &fs {
            assert_eq!(order(&o, f, 3).unwrap(), 3);
            validate(&o, f).unwrap();
        }
        // factors move pairwise disjoint sets
        for i in 0..fs.len() {
            for j in (i + 1)..fs.len() {
                for (di, _) in &fs[i].pieces {
                    for (dj, _) in &fs[j].pieces {
                        assert!(!compatible(&o, di, dj).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn two_disjoint_chair_cycles_recompose() {
        let o = ChairBackend::new(None);
        let family = enumerate_t_r(&o, 1, 1 << 16).unwrap();
        // hunt for two generators whose six translated patches are pairwise
        // incompatible, so their product really is one element of order 3
        let mut pick = None;
        'outer: for i in 0..family.generators.len() {
            for j in (i + 1)..family.generators.len() {
                let a = make_cycle(&o, &family.generators[i]);
                let b = make_cycle(&o, &family.generators[j]);
                let mut ok = true;
                for (da, _) in &a.pieces {
                    for (db, _) in &b.pieces {
                        if compatible(&o, da, db).unwrap() {
                            ok = false;
                        }
                    }
                }
                if ok {
                    pick = Some((a, b));
                    break 'outer;
                }
            }
        }
        let (a, b) = pick.expect("some disjoint pair exists in the radius-1 family");
        let t = compose(&o, &a, &b).unwrap();
        assert_eq!(t.pieces.len(), 6);
        assert_eq!(order(&o, &t, 3).unwrap(), 3);
        let fs = decompose_three_cycle(&o, &t, 1 << 16).unwrap();
        assert!(fs.len() >= 2);
        let mut prod = PieceTable::identity(&o);
        for f in &fs {
            prod = compose(&o, &prod, f).unwrap();
        }
        assert!(equals(&o, &prod, &t).unwrap());
    }

    fn make_cycle(o: &dyn SubshiftOracle, g: &(Patch, usize)) -> PieceTable {
        let d = o.dim();
        let e = axis_vec(d, g.1, 1);
        make_three_cycle(o, &g.0, &[vec![0; d], e.clone(), vec_neg(&e)]).unwrap()
    }

    #[test]
    fn non_three_cycles_are_rejected() {
        let o = full1();
        // order 2: a transposition between a window and its translate
        let pi = spike1();
        let swap = PieceTable {
            backend: o.backend_id(),
            d: 1,
            pieces: vec![
                (pi.clone(), vec![1]),
                (patch_shift(&pi, &[1]), vec![-1]),
            ],
        };
        validate(&o, &swap).unwrap();
        assert!(matches!(
            decompose_three_cycle(&o, &swap, 1 << 16),
            Err(CoreError::NotAThreeCycle(_))
        ));
        // infinite order: the global shift
        let shift = PieceTable {
            backend: o.backend_id(),
            d: 1,
            pieces: vec![(Patch::empty(1), vec![1])],
        };
        assert!(matches!(
            decompose_three_cycle(&o, &shift, 1 << 16),
            Err(CoreError::NotAThreeCycle(_))
        ));
        // identity
        let id = PieceTable::identity(&o);
        assert!(matches!(
            decompose_three_cycle(&o, &id, 1 << 16),
            Err(CoreError::NotAThreeCycle(_))
        ));
        // inverse of a cycle is still order 3 and decomposes
        let t = make_three_cycle(&o, &pi, &[vec![0], vec![1], vec![2]]).unwrap();
        let fs = decompose_three_cycle(&o, &inverse(&t), 1 << 16).unwrap();
        assert_eq!(fs.len(), 1);
        assert!(equals(&o, &fs[0], &inverse(&t)).unwrap());
    }
}
