//! The integer lattice `Z^d`, l1 balls, and the patch algebra.
//!
//! A [`Patch`] is a finite labeled window of the lattice: the basic datum out
//! of which cylinder sets, full-group elements and everything downstream is
//! built. Supports are arbitrary finite sets, not only balls.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// A point of `Z^d`. All vectors in one computation share the dimension.
pub type LatticeVector = Vec<i64>;

/// Symbol index into an [`crate::subshift::Alphabet`].
pub type Sym = u8;

pub fn vec_add(a: &[i64], b: &[i64]) -> LatticeVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[i64], b: &[i64]) -> LatticeVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[i64]) -> LatticeVector {
    a.iter().map(|x| -x).collect()
}

pub fn vec_is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// l1 norm; the word metric of the standard generating set.
pub fn norm1(a: &[i64]) -> i64 {
    a.iter().map(|x| x.abs()).sum()
}

/// `i`-th standard generator of `Z^d`, scaled by `k`.
pub fn axis_vec(d: usize, i: usize, k: i64) -> LatticeVector {
    let mut v = vec![0i64; d];
    v[i] = k;
    v
}

/// Points of the closed l1 ball of radius `R` at the origin, in lexicographic
/// order. For d=2 the cardinality is `2R^2+2R+1`.
pub fn ball_points(d: usize, r: u32) -> Vec<LatticeVector> {
    assert!(d >= 1, "dimension must be >= 1");
    let mut out = Vec::new();
    let mut cur = vec![0i64; d];
    fn rec(out: &mut Vec<LatticeVector>, cur: &mut Vec<i64>, pos: usize, budget: i64) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in -budget..=budget {
            cur[pos] = v;
            rec(out, cur, pos + 1, budget - v.abs());
        }
        cur[pos] = 0;
    }
    rec(&mut out, &mut cur, 0, r as i64);
    out.sort();
    out
}

/// A finite labeled window: support plus a total labeling of it.
///
/// Invariants: `cells` sorted by coordinate, coordinates distinct, every
/// coordinate has length `d`. Equality is structural, which is canonical under
/// those invariants.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Patch {
    pub d: usize,
    pub cells: Vec<(LatticeVector, Sym)>,
}

impl std::fmt::Debug for Patch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Patch{{d={},", self.d)?;
        for (p, s) in &self.cells {
            write!(f, " {:?}:{}", p, s)?;
        }
        write!(f, "}}")
    }
}

impl Patch {
    pub fn new(d: usize, mut cells: Vec<(LatticeVector, Sym)>) -> Result<Self> {
        cells.sort();
        for w in cells.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CoreError::BadInput(format!(
                    "duplicate cell {:?} in patch",
                    w[0].0
                )));
            }
        }
        if let Some((p, _)) = cells.iter().find(|(p, _)| p.len() != d) {
            return Err(CoreError::DimensionMismatch(d, p.len()));
        }
        Ok(Patch { d, cells })
    }

    pub fn empty(d: usize) -> Self {
        Patch { d, cells: Vec::new() }
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticeVector> {
        self.cells.iter().map(|(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Label at `p`, if `p` is in the support.
    pub fn get(&self, p: &[i64]) -> Option<Sym> {
        self.cells
            .binary_search_by(|(q, _)| q.as_slice().cmp(p))
            .ok()
            .map(|i| self.cells[i].1)
    }

    /// Restriction to `support ∩ q`.
    pub fn restrict(&self, q: &[LatticeVector]) -> Patch {
        let cells = q
            .iter()
            .filter_map(|p| self.get(p).map(|s| (p.clone(), s)))
            .collect();
        Patch::new(self.d, cells).expect("restriction preserves invariants")
    }

    /// Largest l1 norm over the support (0 for the empty patch).
    pub fn support_radius(&self) -> i64 {
        self.support().map(|p| norm1(p)).max().unwrap_or(0)
    }

    /// Translate so the lexicographically least support point is the origin.
    /// Used as a canonical representative for shift-invariant memoization.
    pub fn translate_to_origin(&self) -> (Patch, LatticeVector) {
        match self.cells.first() {
            None => (self.clone(), vec![0; self.d]),
            Some((p0, _)) => {
                let off = vec_neg(p0);
                (patch_shift(self, &off), off)
            }
        }
    }
}

/// The shifted patch `pi + g`: support `P+g`, labeling `(f+g)(h) = f(h-g)`.
pub fn patch_shift(pi: &Patch, g: &[i64]) -> Patch {
    assert_eq!(pi.d, g.len(), "patch_shift dimension mismatch");
    // order is preserved by translation, so no re-sort
    Patch {
        d: pi.d,
        cells: pi
            .cells
            .iter()
            .map(|(p, s)| (vec_add(p, g), *s))
            .collect(),
    }
}

/// True iff the supports overlap somewhere with different labels.
/// This is the syntactic precursor of (in)compatibility; the semantic notion
/// additionally asks the union to be admissible for the subshift.
pub fn patches_conflict(p1: &Patch, p2: &Patch) -> bool {
    // iterate over the smaller patch
    let (a, b) = if p1.len() <= p2.len() { (p1, p2) } else { (p2, p1) };
    a.cells
        .iter()
        .any(|(p, s)| matches!(b.get(p), Some(t) if t != *s))
}

/// Union patch extending both labelings; errors when the overlap disagrees.
pub fn patch_union(p1: &Patch, p2: &Patch) -> Result<Patch> {
    if p1.d != p2.d {
        return Err(CoreError::DimensionMismatch(p1.d, p2.d));
    }
    let mut cells = Vec::with_capacity(p1.len() + p2.len());
    let (a, b) = (&p1.cells, &p2.cells);
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                cells.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                cells.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                if a[i].1 != b[j].1 {
                    return Err(CoreError::Conflict {
                        at: a[i].0.clone(),
                        left: a[i].1.to_string(),
                        right: b[j].1.to_string(),
                    });
                }
                cells.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    cells.extend_from_slice(&a[i..]);
    cells.extend_from_slice(&b[j..]);
    Ok(Patch { d: p1.d, cells })
}
