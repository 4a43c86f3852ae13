//! Reduction of an arbitrary three-cycle to axis-aligned consecutive cycles.
//!
//! `T_{pi,(v1,v2,v3)}` moves three translated cylinders of one patch. When
//! every pair of translates of `pi` over the filled coordinate box is
//! incompatible, those translates form a transversal: permutations of box
//! positions lift injectively to full-group elements. The three shifts then
//! reduce to digit words over at most three coordinates per axis, the digit
//! three-cycle factors into collinear cycles, and each collinear cycle
//! flattens into consecutive cycles `T_{pi+u,(0,e_j,2e_j)}` along its axis.

use crate::error::{CoreError, Result};
use crate::fullgroup::{compose, equals, inverse, make_three_cycle, PieceTable};
use crate::lattice::{axis_vec, patch_shift, vec_add, LatticeVector, Patch};
use crate::subshift::{compatible, SubshiftOracle};
use crate::theorems::altgen::factor_three_cycle;
use crate::theorems::perm::consecutive_cycle_factorize;

/// One letter of the reduced word: `T_{pi+base,(0,e_axis,2e_axis)}^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisLetter {
    pub base: LatticeVector,
    pub axis: usize,
    pub exp: i8,
}

pub fn axis_letter_table(
    oracle: &dyn SubshiftOracle,
    pi: &Patch,
    letter: &AxisLetter,
) -> Result<PieceTable> {
    let d = oracle.dim();
    let e = axis_vec(d, letter.axis, 1);
    let two_e = vec_add(&e, &e);
    let t = make_three_cycle(
        oracle,
        &patch_shift(pi, &letter.base),
        &[vec![0; d], e, two_e],
    )?;
    Ok(if letter.exp >= 0 { t } else { inverse(&t) })
}

/// Write `T_{pi,(v1,v2,v3)}` as a word of consecutive axis cycles, rightmost
/// letter acting first. Fails with `GridObstruction` when two translates of
/// `pi` over the coordinate box intersect, so no transversal exists.
pub fn axis_reduce(
    oracle: &dyn SubshiftOracle,
    pi: &Patch,
    triple: &[LatticeVector; 3],
    box_cap: usize,
) -> Result<Vec<AxisLetter>> {
    let d = oracle.dim();
    for v in triple {
        if v.len() != d {
            return Err(CoreError::DimensionMismatch(d, v.len()));
        }
    }
    if triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2] {
        return Err(CoreError::Precondition("shifts must be distinct".into()));
    }
    let target = make_three_cycle(oracle, pi, triple)?;
    if target.is_identity(oracle) {
        return Ok(Vec::new());
    }
    if let Some(letter) = already_consecutive(triple, d) {
        let word = vec![letter];
        return verify(oracle, pi, &target, word);
    }

    // three distinct coordinates per axis, padding above the maximum
    let mut coords: Vec<Vec<i64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut c: Vec<i64> = triple.iter().map(|v| v[j]).collect();
        c.sort();
        c.dedup();
        while c.len() < 3 {
            c.push(c.last().unwrap() + 1);
        }
        coords.push(c);
    }
    check_box(oracle, pi, &coords, box_cap)?;

    let digits: Vec<Vec<u8>> = triple
        .iter()
        .map(|v| {
            (0..d)
                .map(|j| coords[j].iter().position(|&c| c == v[j]).unwrap() as u8)
                .collect()
        })
        .collect();
    let bword = factor_three_cycle(d, &digits[0], &digits[1], &digits[2])?;

    // one consecutive factorization per axis of the digit cycle 0 -> 1 -> 2
    let mut per_axis: Vec<Option<Vec<(usize, i8)>>> = vec![None; d];
    let mut word = Vec::new();
    for (bl, e) in &bword {
        let j = bl.pos;
        if per_axis[j].is_none() {
            let n = (coords[j][2] - coords[j][0] + 1) as usize;
            let mid = (coords[j][1] - coords[j][0]) as usize;
            per_axis[j] = Some(consecutive_cycle_factorize(n, (0, mid, n - 1))?);
        }
        let cons = per_axis[j].as_ref().unwrap();
        let expand = |m: usize, ee: i8, word: &mut Vec<AxisLetter>| {
            let mut base = vec![0i64; d];
            base[j] = coords[j][0] + m as i64;
            for (k, &dig) in bl.context.iter().enumerate() {
                let axis = if k < j { k } else { k + 1 };
                base[axis] = coords[axis][dig as usize];
            }
            word.push(AxisLetter { base, axis: j, exp: ee });
        };
        if *e >= 0 {
            for &(m, ee) in cons {
                expand(m, ee, &mut word);
            }
        } else {
            for &(m, ee) in cons.iter().rev() {
                expand(m, -ee, &mut word);
            }
        }
    }
    verify(oracle, pi, &target, word)
}

/// Single-letter fast path: the shift set is `{u, u+e_j, u+2e_j}` for some
/// axis, oriented forwards or backwards along the cycle.
fn already_consecutive(triple: &[LatticeVector; 3], d: usize) -> Option<AxisLetter> {
    for j in 0..d {
        let i0 = (0..3).min_by_key(|&i| triple[i][j])?;
        let u = &triple[i0];
        let e = axis_vec(d, j, 1);
        let succ = &triple[(i0 + 1) % 3];
        let third = &triple[(i0 + 2) % 3];
        let one = vec_add(u, &e);
        let two = vec_add(&one, &e);
        if *succ == one && *third == two {
            return Some(AxisLetter { base: u.clone(), axis: j, exp: 1 });
        }
        if *succ == two && *third == one {
            return Some(AxisLetter { base: u.clone(), axis: j, exp: -1 });
        }
    }
    None
}

fn check_box(
    oracle: &dyn SubshiftOracle,
    pi: &Patch,
    coords: &[Vec<i64>],
    box_cap: usize,
) -> Result<()> {
    let mut size = 1usize;
    for c in coords {
        let span = (c[2] - c[0] + 1) as usize;
        size = size
            .checked_mul(span)
            .ok_or_else(|| CoreError::ResourceCap("coordinate box overflows".into()))?;
    }
    if size > box_cap {
        return Err(CoreError::ResourceCap(format!(
            "coordinate box has {size} cells, cap {box_cap}"
        )));
    }
    let mut pts = vec![Vec::new()];
    for c in coords {
        let mut next = Vec::new();
        for p in &pts {
            for x in c[0]..=c[2] {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        pts = next;
    }
    for i in 0..pts.len() {
        for k in (i + 1)..pts.len() {
            if compatible(oracle, &patch_shift(pi, &pts[i]), &patch_shift(pi, &pts[k]))? {
                return Err(CoreError::GridObstruction(format!(
                    "translates at {:?} and {:?} intersect",
                    pts[i], pts[k]
                )));
            }
        }
    }
    Ok(())
}

fn verify(
    oracle: &dyn SubshiftOracle,
    pi: &Patch,
    target: &PieceTable,
    word: Vec<AxisLetter>,
) -> Result<Vec<AxisLetter>> {
    let mut acc = PieceTable::identity(oracle);
    for letter in &word {
        acc = compose(oracle, &acc, &axis_letter_table(oracle, pi, letter)?)?;
    }
    if !equals(oracle, &acc, target)? {
        return Err(CoreError::VerificationFailed(
            "axis word does not recompose the three-cycle".into(),
        ));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ball_points;
    use crate::subshift::{Alphabet, ChairBackend, FullShift};

    fn full1() -> FullShift {
        FullShift::new(1, Alphabet::new(vec!["a".into(), "b".into()]).unwrap()).unwrap()
    }

    fn spike(r: i64) -> Patch {
        Patch::new(1, (-r..=r).map(|x| (vec![x], u8::from(x == 0))).collect()).unwrap()
    }

    #[test]
    fn consecutive_triples_take_the_fast_path() {
        let o = full1();
        let pi = spike(2);
        let w = axis_reduce(&o, &pi, &[vec![0], vec![1], vec![2]], 4096).unwrap();
        assert_eq!(w, vec![AxisLetter { base: vec![0], axis: 0, exp: 1 }]);
        // cyclic rotation is the same cycle, reversed orientation inverts
        let w = axis_reduce(&o, &pi, &[vec![1], vec![2], vec![0]], 4096).unwrap();
        assert_eq!(w[0].exp, 1);
        let w = axis_reduce(&o, &pi, &[vec![0], vec![2], vec![1]], 4096).unwrap();
        assert_eq!(w, vec![AxisLetter { base: vec![0], axis: 0, exp: -1 }]);
    }

    #[test]
    fn spread_triple_reduces_on_the_line() {
        let o = full1();
        let pi = spike(5);
        let word = axis_reduce(&o, &pi, &[vec![0], vec![3], vec![5]], 4096).unwrap();
        assert!(word.len() > 1);
        for l in &word {
            assert_eq!(l.axis, 0);
            assert!((0..=3).contains(&l.base[0]));
            assert!(l.exp == 1 || l.exp == -1);
        }
    }

    #[test]
    fn chair_plane_triple_reduces() {
        let o = ChairBackend::new(None);
        let ball = ball_points(2, 2);
        let windows = o.enumerate_admissible(&ball, 1 << 20).unwrap();
        let coords = vec![vec![0i64, 1, 2], vec![0i64, 1, 2]];
        let mut candidates = windows
            .iter()
            .filter(|w| check_box(&o, w, &coords, 4096).is_ok());
        let pi = candidates.next().expect("a box-transversal window exists");
        let triple = [vec![0, 0], vec![1, 1], vec![2, 0]];
        let word = axis_reduce(&o, pi, &triple, 4096).unwrap();
        assert!(!word.is_empty());
        assert!(word.iter().any(|l| l.axis == 0));
        assert!(word.iter().any(|l| l.axis == 1));
    }

    #[test]
    fn box_transversal_count_is_stable_on_chair() {
        let o = ChairBackend::new(None);
        let ball = ball_points(2, 2);
        let windows = o.enumerate_admissible(&ball, 1 << 20).unwrap();
        let coords = vec![vec![0i64, 1, 2], vec![0i64, 1, 2]];
        let good = windows
            .iter()
            .filter(|w| check_box(&o, w, &coords, 4096).is_ok())
            .count();
        assert_eq!(good, 44);
    }

    #[test]
    fn grid_obstruction_is_reported() {
        let o = full1();
        // 4-periodic on its support, so translates 4 apart are compatible
        // while distances 2, 3, 5 all conflict
        let pi = Patch::new(
            1,
            vec![
                (vec![0], 0),
                (vec![1], 1),
                (vec![2], 1),
                (vec![3], 1),
                (vec![4], 0),
                (vec![5], 1),
            ],
        )
        .unwrap();
        let err = axis_reduce(&o, &pi, &[vec![0], vec![3], vec![5]], 4096).unwrap_err();
        assert!(matches!(err, CoreError::GridObstruction(_)));
    }

    #[test]
    fn inadmissible_patch_reduces_to_the_empty_word() {
        let o = ChairBackend::new(None);
        // constant windows are not admissible for the chair
        let pi = Patch::new(
            2,
            ball_points(2, 1).into_iter().map(|p| (p, 0)).collect(),
        )
        .unwrap();
        let word = axis_reduce(&o, &pi, &[vec![0, 0], vec![1, 1], vec![2, 0]], 4096).unwrap();
        assert!(word.is_empty());
    }
}
