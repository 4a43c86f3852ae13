//! Exact interval exchanges over a finitely generated rotation group.
//!
//! `H` is the subgroup of the circle `[0,1)` generated by `d` irrational
//! square roots modulo 1. A point of `H` is an integer vector `n`, standing
//! for `frac(sum_i n_i * sqrt(p_i))`; with `{1, sqrt(p_1), .., sqrt(p_d)}`
//! rationally independent, two vectors name the same point only when they are
//! equal. Every decision below is exact: comparisons shrink a dyadic
//! enclosure around each root until the order of the fractional parts is
//! forced, and all interval bookkeeping is endpoint combinatorics on vectors.
//!
//! Ends use one convention throughout: an interval end equal to the zero
//! vector means 1, so piece `j` of a map is `[breakpoints[j],
//! breakpoints[(j+1) % k])` with the last piece running to 1.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use num::bigint::BigInt;
use num::integer::Roots;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::lattice::{vec_add, vec_is_zero, vec_neg, LatticeVector};

/// Integer coordinates of a point of `H`.
pub type HVector = LatticeVector;

/// Comparisons start here and double until decided.
pub const PRECISION_START_BITS: u32 = 64;
/// Past this the basis is treated as undecidable (dependent radicands land
/// here; independent ones never do in practice).
pub const PRECISION_CAP_BITS: u32 = 4096;

/// The generators `sqrt(p_i)` of `H`, with a per-precision cache of integer
/// square roots. Rational independence of `{1, sqrt(p_1), ..}` is asserted,
/// not checked: a dependent choice (say 2 and 8) makes some comparisons
/// undecidable and they fail with `PrecisionCap` rather than lie.
#[derive(Debug)]
pub struct AngleBasis {
    radicands: Vec<u64>,
    // floor(sqrt(p << 2*bits)), keyed by (index, bits); the same handful of
    // precision levels is hit by every comparison
    memo: RefCell<HashMap<(usize, u32), BigInt>>,
}

impl AngleBasis {
    pub fn sqrt(radicands: Vec<u64>) -> Result<Self> {
        if radicands.is_empty() {
            return Err(CoreError::BadInput("empty angle basis".into()));
        }
        for &p in &radicands {
            let r = p.sqrt();
            if r * r == p {
                return Err(CoreError::BadInput(format!(
                    "radicand {p} is a perfect square, sqrt({p}) is rational"
                )));
            }
        }
        Ok(AngleBasis { radicands, memo: RefCell::new(HashMap::new()) })
    }

    pub fn d(&self) -> usize {
        self.radicands.len()
    }

    pub fn radicands(&self) -> &[u64] {
        &self.radicands
    }

    fn sqrt_scaled(&self, i: usize, bits: u32) -> BigInt {
        if let Some(s) = self.memo.borrow().get(&(i, bits)) {
            return s.clone();
        }
        let s = (BigInt::from(self.radicands[i]) << (2 * bits)).sqrt();
        self.memo.borrow_mut().insert((i, bits), s.clone());
        s
    }

    // Enclosure of frac(sum n_i sqrt(p_i)) as integers scaled by 2^bits, or
    // None while the enclosure still straddles an integer.
    fn frac_interval(&self, n: &[i64], bits: u32) -> Result<Option<(BigInt, BigInt)>> {
        if n.len() != self.d() {
            return Err(CoreError::DimensionMismatch(n.len(), self.d()));
        }
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (i, &c) in n.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = self.sqrt_scaled(i, bits);
            let c = BigInt::from(c);
            // sqrt(p) is in [s, s+1] / 2^bits
            let a = &c * &s;
            let b = &c * (&s + 1);
            if c.is_negative() {
                lo += b;
                hi += a;
            } else {
                lo += a;
                hi += b;
            }
        }
        let fl = &lo >> bits; // arithmetic shift: floor for either sign
        let fh = &hi >> bits;
        if fl != fh {
            return Ok(None);
        }
        let base = fl << bits;
        Ok(Some((lo - &base, hi - base)))
    }
}

/// Order of `frac(n . alpha)` and `frac(m . alpha)`. `Equal` iff `n == m`;
/// everything else refines until the enclosures separate.
pub fn h_compare(basis: &AngleBasis, n: &[i64], m: &[i64]) -> Result<Ordering> {
    if n == m {
        return Ok(Ordering::Equal);
    }
    let mut bits = PRECISION_START_BITS;
    loop {
        if let (Some((alo, ahi)), Some((blo, bhi))) =
            (basis.frac_interval(n, bits)?, basis.frac_interval(m, bits)?)
        {
            if ahi < blo {
                return Ok(Ordering::Less);
            }
            if bhi < alo {
                return Ok(Ordering::Greater);
            }
        }
        if bits >= PRECISION_CAP_BITS {
            return Err(CoreError::PrecisionCap {
                bits,
                context: format!("frac{n:?} vs frac{m:?} never separated"),
            });
        }
        bits *= 2;
    }
}

// value(x) < end-value(e), where an end equal to zero means 1
fn lt_end(basis: &AngleBasis, x: &[i64], e: &[i64]) -> Result<bool> {
    if vec_is_zero(e) {
        return Ok(true);
    }
    Ok(h_compare(basis, x, e)? == Ordering::Less)
}

// non-wrapping arcs [s1,e1) and [s2,e2) intersect
fn arcs_overlap(basis: &AngleBasis, a: &(HVector, HVector), b: &(HVector, HVector)) -> Result<bool> {
    Ok(lt_end(basis, &a.0, &b.1)? && lt_end(basis, &b.0, &a.1)?)
}

// x in [s, e) for a non-wrapping arc
fn arc_contains(basis: &AngleBasis, s: &[i64], e: &[i64], x: &[i64]) -> Result<bool> {
    Ok(h_compare(basis, s, x)? != Ordering::Greater && lt_end(basis, x, e)?)
}

// split the arc [s, e) + nothing (already a set of circle points) into
// non-wrapping real intervals; empty input arcs are the caller's problem
fn split_arc(basis: &AngleBasis, s: HVector, e: HVector) -> Result<Vec<(HVector, HVector)>> {
    let d = s.len();
    if vec_is_zero(&e) || h_compare(basis, &s, &e)? == Ordering::Less {
        return Ok(vec![(s, e)]);
    }
    Ok(vec![(s.clone(), vec![0i64; d]), (vec![0i64; d], e)])
}

/// Right-continuous interval exchange of `[0,1)`. Piece `j` is
/// `[breakpoints[j], breakpoints[j+1])` (the last runs to 1) and moves by the
/// group element `shifts[j]`: `x -> frac(x + value(shifts[j]))`.
///
/// Canonical form, maintained by every constructor in this module:
/// `breakpoints[0]` is zero, breakpoints strictly increase, no piece's image
/// wraps past 1 (pieces are split at preimages of 0 instead), and adjacent
/// pieces with equal shifts are merged whenever the merged image still does
/// not wrap. Canonical maps are equal as maps iff they are equal
/// componentwise, which is what `iet_equals` checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IetMap {
    pub d: usize,
    pub breakpoints: Vec<HVector>,
    pub shifts: Vec<HVector>,
}

impl IetMap {
    pub fn identity(d: usize) -> Self {
        IetMap { d, breakpoints: vec![vec![0; d]], shifts: vec![vec![0; d]] }
    }

    pub fn is_identity(&self) -> bool {
        self.breakpoints.len() == 1 && vec_is_zero(&self.shifts[0])
    }

    fn end_of(&self, j: usize) -> HVector {
        self.breakpoints[(j + 1) % self.breakpoints.len()].clone()
    }
}

// Build a canonical map from (start, end, shift) triples covering [0,1).
// Splits pieces whose image would wrap, sorts by start, checks that the
// domain tiles, merges removable boundaries, and checks that the images tile
// (= the map is a bijection). Domain gaps/overlaps are Precondition errors,
// image overlaps are Overlap errors.
fn assemble(basis: &AngleBasis, d: usize, pieces: Vec<(HVector, HVector, HVector)>) -> Result<IetMap> {
    let zero = vec![0i64; d];
    let mut flat: Vec<(HVector, HVector, HVector)> = Vec::new();
    for (s, e, h) in pieces {
        for v in [&s, &e, &h] {
            if v.len() != d {
                return Err(CoreError::DimensionMismatch(v.len(), d));
            }
        }
        if s == e && !vec_is_zero(&s) {
            continue; // empty
        }
        let img_s = vec_add(&s, &h);
        let img_e = vec_add(&e, &h);
        let wraps = if vec_is_zero(&img_e) {
            false
        } else {
            // Equal only for the full-circle piece under a nonzero shift
            h_compare(basis, &img_s, &img_e)? != Ordering::Less
        };
        if wraps {
            // preimage of 0 is strictly inside; cut there
            let cut = vec_neg(&h);
            flat.push((s, cut.clone(), h.clone()));
            flat.push((cut, e, h));
        } else {
            flat.push((s, e, h));
        }
    }

    // insertion sort by start value; a duplicate start is a domain overlap
    let mut sorted: Vec<(HVector, HVector, HVector)> = Vec::with_capacity(flat.len());
    'outer: for p in flat {
        for i in 0..sorted.len() {
            match h_compare(basis, &p.0, &sorted[i].0)? {
                Ordering::Less => {
                    sorted.insert(i, p);
                    continue 'outer;
                }
                Ordering::Equal => {
                    return Err(CoreError::Precondition(format!(
                        "two pieces start at {:?}: domain does not tile [0,1)",
                        p.0
                    )));
                }
                Ordering::Greater => {}
            }
        }
        sorted.push(p);
    }
    if sorted.is_empty() || !vec_is_zero(&sorted[0].0) {
        return Err(CoreError::Precondition("domain does not start at 0".into()));
    }
    for i in 0..sorted.len() {
        let want_end = if i + 1 < sorted.len() { &sorted[i + 1].0 } else { &zero };
        if &sorted[i].1 != want_end {
            return Err(CoreError::Precondition(format!(
                "piece ending at {:?} does not meet the next start {:?}",
                sorted[i].1, want_end
            )));
        }
    }

    let mut breakpoints: Vec<HVector> = Vec::new();
    let mut shifts: Vec<HVector> = Vec::new();
    for (s, _, h) in sorted {
        if shifts.last() == Some(&h) && !vec_is_zero(&vec_add(&s, &h)) {
            continue; // removable boundary: same shift, merged image stays real
        }
        breakpoints.push(s);
        shifts.push(h);
    }
    let map = IetMap { d, breakpoints, shifts };

    // bijectivity: image arcs must tile [0,1) in turn
    let k = map.breakpoints.len();
    let mut images: Vec<(HVector, HVector)> = Vec::with_capacity(k);
    'img: for j in 0..k {
        let a = (vec_add(&map.breakpoints[j], &map.shifts[j]), vec_add(&map.end_of(j), &map.shifts[j]));
        for i in 0..images.len() {
            match h_compare(basis, &a.0, &images[i].0)? {
                Ordering::Less => {
                    images.insert(i, a);
                    continue 'img;
                }
                Ordering::Equal => {
                    return Err(CoreError::Overlap(format!(
                        "two pieces map onto {:?}: images do not tile [0,1)",
                        a.0
                    )));
                }
                Ordering::Greater => {}
            }
        }
        images.push(a);
    }
    for i in 0..k {
        let want = if i + 1 < k { &images[i + 1].0 } else { &zero };
        if (i + 1 == k && !vec_is_zero(&images[i].1)) || (i + 1 < k && &images[i].1 != want) {
            return Err(CoreError::Overlap(format!(
                "image arc ending at {:?} does not meet {:?}: images do not tile [0,1)",
                images[i].1, want
            )));
        }
    }
    if !vec_is_zero(&images[0].0) {
        return Err(CoreError::Overlap("images do not cover a neighborhood of 0".into()));
    }
    Ok(map)
}

/// Rebuild the canonical form of an arbitrary (say deserialized) piece list.
pub fn iet_canonicalize(basis: &AngleBasis, t: &IetMap) -> Result<IetMap> {
    if t.breakpoints.is_empty() || t.breakpoints.len() != t.shifts.len() {
        return Err(CoreError::BadInput("breakpoints and shifts must be nonempty and match".into()));
    }
    let pieces = (0..t.breakpoints.len())
        .map(|j| (t.breakpoints[j].clone(), t.end_of(j), t.shifts[j].clone()))
        .collect();
    assemble(basis, t.d, pieces)
}

/// A map validates iff it is exactly what the constructors produce: a
/// bijective exchange in canonical form.
pub fn validate_iet(basis: &AngleBasis, t: &IetMap) -> Result<()> {
    let c = iet_canonicalize(basis, t)?;
    if &c != t {
        return Err(CoreError::Precondition("map is not in canonical form".into()));
    }
    Ok(())
}

/// The rotation `x -> frac(x + value(h))`. For `h != 0` the canonical form
/// has exactly the breakpoint `-h` (where the image wraps); for `h = 0` it is
/// the identity.
pub fn rotation(basis: &AngleBasis, h: &HVector) -> Result<IetMap> {
    let d = basis.d();
    if h.len() != d {
        return Err(CoreError::DimensionMismatch(h.len(), d));
    }
    if vec_is_zero(h) {
        return Ok(IetMap::identity(d));
    }
    let zero = vec![0i64; d];
    assemble(basis, d, vec![(zero.clone(), zero, h.clone())])
}

fn piece_index_at(basis: &AngleBasis, t: &IetMap, x: &[i64]) -> Result<usize> {
    for j in (0..t.breakpoints.len()).rev() {
        if h_compare(basis, &t.breakpoints[j], x)? != Ordering::Greater {
            return Ok(j);
        }
    }
    // breakpoints[0] = 0 <= everything
    unreachable!("breakpoints[0] is 0")
}

/// Image of the point `x` under `t`.
pub fn iet_apply(basis: &AngleBasis, t: &IetMap, x: &HVector) -> Result<HVector> {
    if x.len() != t.d {
        return Err(CoreError::DimensionMismatch(x.len(), t.d));
    }
    let j = piece_index_at(basis, t, x)?;
    Ok(vec_add(x, &t.shifts[j]))
}

/// `outer . inner` (inner acts first). Refines the inner pieces with the
/// inner-preimages of the outer breakpoints, so at most `k1 + k2` breakpoints
/// appear before canonical merging.
pub fn iet_compose(basis: &AngleBasis, outer: &IetMap, inner: &IetMap) -> Result<IetMap> {
    if outer.d != inner.d {
        return Err(CoreError::DimensionMismatch(outer.d, inner.d));
    }
    let d = inner.d;
    let zero = vec![0i64; d];
    let mut cuts: Vec<HVector> = Vec::new();
    let push = |basis: &AngleBasis, cuts: &mut Vec<HVector>, v: HVector| -> Result<()> {
        for i in 0..cuts.len() {
            match h_compare(basis, &v, &cuts[i])? {
                Ordering::Less => {
                    cuts.insert(i, v);
                    return Ok(());
                }
                Ordering::Equal => return Ok(()),
                Ordering::Greater => {}
            }
        }
        cuts.push(v);
        Ok(())
    };
    for b in &inner.breakpoints {
        push(basis, &mut cuts, b.clone())?;
    }
    for j in 0..inner.breakpoints.len() {
        let h = &inner.shifts[j];
        let img_s = vec_add(&inner.breakpoints[j], h);
        let img_e = vec_add(&inner.end_of(j), h);
        for c in &outer.breakpoints {
            if vec_is_zero(c) {
                continue; // 0 is never strictly inside a non-wrapping arc
            }
            if h_compare(basis, &img_s, c)? == Ordering::Less && lt_end(basis, c, &img_e)? {
                push(basis, &mut cuts, crate::lattice::vec_sub(c, h))?;
            }
        }
    }
    let n = cuts.len();
    let mut pieces = Vec::with_capacity(n);
    for i in 0..n {
        let x = cuts[i].clone();
        let end = if i + 1 < n { cuts[i + 1].clone() } else { zero.clone() };
        let j = piece_index_at(basis, inner, &x)?;
        let mid = vec_add(&x, &inner.shifts[j]);
        let m = piece_index_at(basis, outer, &mid)?;
        pieces.push((x, end, vec_add(&inner.shifts[j], &outer.shifts[m])));
    }
    assemble(basis, d, pieces)
}

pub fn iet_inverse(basis: &AngleBasis, t: &IetMap) -> Result<IetMap> {
    let pieces = (0..t.breakpoints.len())
        .map(|j| {
            (
                vec_add(&t.breakpoints[j], &t.shifts[j]),
                vec_add(&t.end_of(j), &t.shifts[j]),
                vec_neg(&t.shifts[j]),
            )
        })
        .collect();
    assemble(basis, t.d, pieces)
}

/// Componentwise equality of canonical forms, which is map equality for
/// anything this module constructed.
pub fn iet_equals(a: &IetMap, b: &IetMap) -> bool {
    a == b
}

/// Least `n <= cap` with `t^n = id`.
pub fn iet_order(basis: &AngleBasis, t: &IetMap, cap: usize) -> Result<usize> {
    let mut acc = t.clone();
    for n in 1..=cap {
        if acc.is_identity() {
            return Ok(n);
        }
        acc = iet_compose(basis, t, &acc)?;
    }
    Err(CoreError::ResourceCap(format!("order exceeds cap {cap}")))
}

/// `[g, h] = g^-1 . h^-1 . g . h`.
pub fn iet_commutator(basis: &AngleBasis, g: &IetMap, h: &IetMap) -> Result<IetMap> {
    let gi = iet_inverse(basis, g)?;
    let hi = iet_inverse(basis, h)?;
    let a = iet_compose(basis, &gi, &hi)?;
    let b = iet_compose(basis, &a, g)?;
    iet_compose(basis, &b, h)
}

/// The 3-cycle of the interval `U = [a, b)` along three distinct shifts:
/// `U+h1 -> U+h2 -> U+h3 -> U+h1`, identity elsewhere. The three translates
/// must be pairwise disjoint arcs (an end equal to zero means 1). A
/// degenerate interval (`a == b`) gives the identity.
pub fn interval_three_cycle(
    basis: &AngleBasis,
    a: &HVector,
    b: &HVector,
    shifts: &[HVector],
) -> Result<IetMap> {
    let d = basis.d();
    for v in [a, b].into_iter().chain(shifts) {
        if v.len() != d {
            return Err(CoreError::DimensionMismatch(v.len(), d));
        }
    }
    if shifts.len() != 3 {
        return Err(CoreError::Precondition(format!("need 3 shifts, got {}", shifts.len())));
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            if shifts[i] == shifts[j] {
                return Err(CoreError::Precondition(format!(
                    "shifts must be distinct, got {:?} twice",
                    shifts[i]
                )));
            }
        }
    }
    if a == b {
        return Ok(IetMap::identity(d));
    }
    if !lt_end(basis, a, b)? {
        return Err(CoreError::BadInput(format!("interval start {a:?} does not precede end {b:?}")));
    }

    // the three arcs, split so none wraps; owner i carries shift h_{i+1}-h_i
    let mut subarcs: Vec<(HVector, HVector, usize)> = Vec::new();
    for (i, h) in shifts.iter().enumerate() {
        for (s, e) in split_arc(basis, vec_add(a, h), vec_add(b, h))? {
            subarcs.push((s, e, i));
        }
    }
    for i in 0..subarcs.len() {
        for j in (i + 1)..subarcs.len() {
            if subarcs[i].2 == subarcs[j].2 {
                continue;
            }
            let x = (subarcs[i].0.clone(), subarcs[i].1.clone());
            let y = (subarcs[j].0.clone(), subarcs[j].1.clone());
            if arcs_overlap(basis, &x, &y)? {
                return Err(CoreError::Overlap(format!(
                    "translates by {:?} and {:?} intersect",
                    shifts[subarcs[i].2], shifts[subarcs[j].2]
                )));
            }
        }
    }

    let zero = vec![0i64; d];
    let mut bps: Vec<HVector> = Vec::new();
    let push = |basis: &AngleBasis, bps: &mut Vec<HVector>, v: HVector| -> Result<()> {
        for i in 0..bps.len() {
            match h_compare(basis, &v, &bps[i])? {
                Ordering::Less => {
                    bps.insert(i, v);
                    return Ok(());
                }
                Ordering::Equal => return Ok(()),
                Ordering::Greater => {}
            }
        }
        bps.push(v);
        Ok(())
    };
    push(basis, &mut bps, zero.clone())?;
    for (s, e, _) in &subarcs {
        push(basis, &mut bps, s.clone())?;
        if !vec_is_zero(e) {
            push(basis, &mut bps, e.clone())?;
        }
    }

    let n = bps.len();
    let mut pieces = Vec::with_capacity(n);
    for t in 0..n {
        let x = bps[t].clone();
        let end = if t + 1 < n { bps[t + 1].clone() } else { zero.clone() };
        let mut shift = zero.clone();
        for (s, e, i) in &subarcs {
            if arc_contains(basis, s, e, &x)? {
                shift = crate::lattice::vec_sub(&shifts[(i + 1) % 3], &shifts[*i]);
                break;
            }
        }
        pieces.push((x, end, shift));
    }
    assemble(basis, d, pieces)
}

#[derive(Clone, Debug)]
pub struct IntervalFiveSetOutcome {
    pub lhs: IetMap,
    pub rhs: IetMap,
    pub holds: bool,
}

fn interval_pair_name(i: usize) -> &'static str {
    ["U1", "U1+g1", "U1+g2", "U2", "U2+h1", "U2+h2"][i]
}

/// The five-cylinder identity on interval cylinders:
/// `[[b^-1,a^-1],[b,a]] = three_cycle(U1 n U2, (0,g1,g2))` where
/// `a = three_cycle(U1, (0,g1,g2))` and `b = three_cycle(U2, (0,h1,h2))`.
///
/// Hypothesis: the six arcs `U1, U1+g1, U1+g2, U2, U2+h1, U2+h2` are pairwise
/// disjoint except that `U1` and `U2` may intersect. A violation is an error
/// naming the pair, not a counterexample.
pub fn interval_five_set(
    basis: &AngleBasis,
    u1: (&HVector, &HVector),
    g: (&HVector, &HVector),
    u2: (&HVector, &HVector),
    h: (&HVector, &HVector),
) -> Result<IntervalFiveSetOutcome> {
    let d = basis.d();
    let zero = vec![0i64; d];
    let arcs: [(HVector, HVector); 6] = [
        (u1.0.clone(), u1.1.clone()),
        (vec_add(u1.0, g.0), vec_add(u1.1, g.0)),
        (vec_add(u1.0, g.1), vec_add(u1.1, g.1)),
        (u2.0.clone(), u2.1.clone()),
        (vec_add(u2.0, h.0), vec_add(u2.1, h.0)),
        (vec_add(u2.0, h.1), vec_add(u2.1, h.1)),
    ];
    let mut split: Vec<Vec<(HVector, HVector)>> = Vec::with_capacity(6);
    for (s, e) in arcs {
        if s == e {
            split.push(Vec::new()); // degenerate cylinder occupies nothing
        } else {
            split.push(split_arc(basis, s, e)?);
        }
    }
    for i in 0..6 {
        for j in (i + 1)..6 {
            if i == 0 && j == 3 {
                continue; // U1 against U2 is the one allowed overlap
            }
            for x in &split[i] {
                for y in &split[j] {
                    if arcs_overlap(basis, x, y)? {
                        return Err(CoreError::HypothesisViolation(format!(
                            "{} and {} intersect",
                            interval_pair_name(i),
                            interval_pair_name(j)
                        )));
                    }
                }
            }
        }
    }
    let a = interval_three_cycle(basis, u1.0, u1.1, &[zero.clone(), g.0.clone(), g.1.clone()])?;
    let b = interval_three_cycle(basis, u2.0, u2.1, &[zero.clone(), h.0.clone(), h.1.clone()])?;
    let q = iet_commutator(basis, &b, &a)?;
    let p = iet_commutator(basis, &iet_inverse(basis, &b)?, &iet_inverse(basis, &a)?)?;
    let lhs = iet_commutator(basis, &p, &q)?;

    // U1 n U2 = [max(a1,a2), min(b1,b2)), empty when the max does not precede
    // the min
    let lo = match h_compare(basis, u1.0, u2.0)? {
        Ordering::Less => u2.0.clone(),
        _ => u1.0.clone(),
    };
    let hi = if vec_is_zero(u1.1) {
        u2.1.clone()
    } else if vec_is_zero(u2.1) {
        u1.1.clone()
    } else if h_compare(basis, u1.1, u2.1)? == Ordering::Less {
        u1.1.clone()
    } else {
        u2.1.clone()
    };
    let rhs = if lo != hi && lt_end(basis, &lo, &hi)? {
        interval_three_cycle(basis, &lo, &hi, &[zero, g.0.clone(), g.1.clone()])?
    } else {
        IetMap::identity(d)
    };
    let holds = iet_equals(&lhs, &rhs);
    Ok(IntervalFiveSetOutcome { lhs, rhs, holds })
}
