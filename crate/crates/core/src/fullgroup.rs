//! Piece-table elements of the topological full group.
//!
//! An element is a finite list of pieces `(domain patch, shift)`: on the
//! cylinder of each domain the map shifts the configuration, elsewhere it is
//! the identity. Validity means the domain cylinders are pairwise disjoint,
//! the image cylinders are pairwise disjoint, and the two unions coincide —
//! exactly the condition for the table to define a bijection.
//!
//! All set reasoning about cylinders reduces to two primitives: semantic
//! compatibility (nonempty intersection) and first-difference subtraction
//! (`cylinder_subtract`), which writes `W_a \ (W_b1 u ... u W_bk)` as a
//! disjoint union of admissible cylinders.

use crate::error::{CoreError, Result};
use crate::lattice::{
    ball_points, patch_shift, patch_union, patches_conflict, vec_add, vec_is_zero, vec_neg,
    LatticeVector, Patch,
};
use crate::subshift::{compatible, patch_from_json, patch_to_json, SubshiftOracle};

/// Hard guard against runaway piece growth in long products.
pub const MAX_PIECES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceTable {
    /// Backend id this table lives over; compositions across backends are rejected.
    pub backend: String,
    pub d: usize,
    /// Sorted by (domain, shift); no zero shifts after normalization.
    pub pieces: Vec<(Patch, LatticeVector)>,
}

impl PieceTable {
    pub fn identity(oracle: &dyn SubshiftOracle) -> Self {
        PieceTable {
            backend: oracle.backend_id(),
            d: oracle.dim(),
            pieces: Vec::new(),
        }
    }

    pub fn is_identity(&self, oracle: &dyn SubshiftOracle) -> bool {
        // a one-letter alphabet has a single (fixed) point, so everything is trivial
        oracle.alphabet().len() <= 1 || self.pieces.is_empty()
    }

    /// Largest l1 norm of a support cell over all domains (0 for the identity).
    pub fn support_radius(&self) -> i64 {
        self.pieces
            .iter()
            .map(|(p, _)| p.support_radius())
            .max()
            .unwrap_or(0)
    }

    /// Largest l1 norm of a shift (0 for the identity).
    pub fn max_shift_norm(&self) -> i64 {
        self.pieces
            .iter()
            .map(|(_, s)| crate::lattice::norm1(s))
            .max()
            .unwrap_or(0)
    }
}

fn check_table(oracle: &dyn SubshiftOracle, t: &PieceTable) -> Result<()> {
    if t.backend != oracle.backend_id() {
        return Err(CoreError::BadInput(format!(
            "table backend {:?} does not match oracle {:?}",
            t.backend,
            oracle.backend_id()
        )));
    }
    if t.d != oracle.dim() {
        return Err(CoreError::DimensionMismatch(oracle.dim(), t.d));
    }
    Ok(())
}

/// `W_start` minus the union of the subtrahend cylinders, as a disjoint list
/// of admissible cylinders. Splits on the first undetermined cell of each
/// subtrahend, so every emitted patch extends `start`.
pub fn cylinder_subtract(
    oracle: &dyn SubshiftOracle,
    start: &Patch,
    subtrahends: &[&Patch],
) -> Result<Vec<Patch>> {
    let k = oracle.alphabet().len() as u8;
    let mut work = vec![start.clone()];
    for e in subtrahends {
        if work.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for rho in work {
            if !compatible(oracle, &rho, e)? {
                next.push(rho);
                continue;
            }
            // cells of e not already pinned by rho; compatibility means the
            // pinned ones agree, so extra.is_empty() gives W_rho subset W_e
            let extra: Vec<(LatticeVector, u8)> = e
                .cells
                .iter()
                .filter(|(c, _)| rho.get(c).is_none())
                .cloned()
                .collect();
            let mut prefix = rho;
            for (c, s) in extra {
                for t in 0..k {
                    if t == s {
                        continue;
                    }
                    let cand = patch_union(&prefix, &Patch::new(prefix.d, vec![(c.clone(), t)])?)?;
                    if oracle.is_admissible(&cand)? {
                        next.push(cand);
                    }
                }
                prefix = patch_union(&prefix, &Patch::new(prefix.d, vec![(c.clone(), s)])?)?;
                if !oracle.is_admissible(&prefix)? {
                    break; // empty cylinder, nothing further to split off
                }
            }
        }
        work = next;
    }
    Ok(work)
}

/// Check all validity invariants; cheap for small tables, O(n^2) compatibility
/// checks plus one subtraction per piece.
pub fn validate(oracle: &dyn SubshiftOracle, t: &PieceTable) -> Result<()> {
    check_table(oracle, t)?;
    for (dom, s) in &t.pieces {
        if s.len() != t.d {
            return Err(CoreError::DimensionMismatch(t.d, s.len()));
        }
        if vec_is_zero(s) {
            return Err(CoreError::Precondition("zero-shift piece".into()));
        }
        if !oracle.is_admissible(dom)? {
            return Err(CoreError::Precondition("inadmissible domain".into()));
        }
    }
    let images: Vec<Patch> = t
        .pieces
        .iter()
        .map(|(dom, s)| patch_shift(dom, s))
        .collect();
    for i in 0..t.pieces.len() {
        for j in (i + 1)..t.pieces.len() {
            if compatible(oracle, &t.pieces[i].0, &t.pieces[j].0)? {
                return Err(CoreError::Precondition(format!(
                    "domains {i} and {j} intersect"
                )));
            }
            if compatible(oracle, &images[i], &images[j])? {
                return Err(CoreError::Precondition(format!(
                    "images {i} and {j} intersect"
                )));
            }
        }
    }
    // union of domain cylinders == union of image cylinders
    let domains: Vec<&Patch> = t.pieces.iter().map(|(d, _)| d).collect();
    let image_refs: Vec<&Patch> = images.iter().collect();
    for (i, img) in images.iter().enumerate() {
        if !cylinder_subtract(oracle, img, &domains)?.is_empty() {
            return Err(CoreError::Precondition(format!(
                "image {i} escapes the union of domains"
            )));
        }
    }
    for (i, (dom, _)) in t.pieces.iter().enumerate() {
        if !cylinder_subtract(oracle, dom, &image_refs)?.is_empty() {
            return Err(CoreError::Precondition(format!(
                "domain {i} escapes the union of images"
            )));
        }
    }
    Ok(())
}

/// The three-cycle `T_{pi,(g1,g2,g3)}`: cyclically permutes the cylinders of
/// `pi+g1 -> pi+g2 -> pi+g3 -> pi+g1`. Inadmissible `pi` gives the identity;
/// non-disjoint shifted cylinders are an error.
pub fn make_three_cycle(
    oracle: &dyn SubshiftOracle,
    pi: &Patch,
    gs: &[LatticeVector; 3],
) -> Result<PieceTable> {
    if pi.d != oracle.dim() {
        return Err(CoreError::DimensionMismatch(oracle.dim(), pi.d));
    }
    for g in gs {
        if g.len() != oracle.dim() {
            return Err(CoreError::DimensionMismatch(oracle.dim(), g.len()));
        }
    }
    if !oracle.is_admissible(pi)? {
        return Ok(PieceTable::identity(oracle));
    }
    let shifted: Vec<Patch> = gs.iter().map(|g| patch_shift(pi, g)).collect();
    for i in 0..3 {
        for j in (i + 1)..3 {
            if compatible(oracle, &shifted[i], &shifted[j])? {
                return Err(CoreError::Overlap(format!(
                    "cylinders pi+g{} and pi+g{} intersect",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut pieces = Vec::with_capacity(3);
    for i in 0..3 {
        let j = (i + 1) % 3;
        pieces.push((shifted[i].clone(), crate::lattice::vec_sub(&gs[j], &gs[i])));
    }
    pieces.sort();
    let t = PieceTable {
        backend: oracle.backend_id(),
        d: oracle.dim(),
        pieces,
    };
    debug_assert!(validate(oracle, &t).is_ok());
    Ok(t)
}

pub fn inverse(t: &PieceTable) -> PieceTable {
    let mut pieces: Vec<(Patch, LatticeVector)> = t
        .pieces
        .iter()
        .map(|(dom, s)| (patch_shift(dom, s), vec_neg(s)))
        .collect();
    pieces.sort();
    PieceTable {
        backend: t.backend.clone(),
        d: t.d,
        pieces,
    }
}

/// `outer . inner` (inner applied first). The output is normalized: zero
/// shifts dropped, pieces sorted, domains pairwise disjoint by construction.
pub fn compose(
    oracle: &dyn SubshiftOracle,
    outer: &PieceTable,
    inner: &PieceTable,
) -> Result<PieceTable> {
    check_table(oracle, outer)?;
    check_table(oracle, inner)?;
    let mut pieces: Vec<(Patch, LatticeVector)> = Vec::new();
    for (delta, s) in &inner.pieces {
        let minus_s = vec_neg(s);
        let pulled: Vec<Patch> = outer
            .pieces
            .iter()
            .map(|(eps, _)| patch_shift(eps, &minus_s))
            .collect();
        // x in W_delta and inner(x) in W_eps: moves by s + t
        for ((_, t), eps_pulled) in outer.pieces.iter().zip(&pulled) {
            if compatible(oracle, delta, eps_pulled)? {
                pieces.push((patch_union(delta, eps_pulled)?, vec_add(s, t)));
            }
        }
        // x in W_delta, inner(x) outside every outer domain: moves by s
        let refs: Vec<&Patch> = pulled.iter().collect();
        for r in cylinder_subtract(oracle, delta, &refs)? {
            pieces.push((r, s.clone()));
        }
    }
    // x fixed by inner but moved by outer
    let inner_domains: Vec<&Patch> = inner.pieces.iter().map(|(d, _)| d).collect();
    for (eps, t) in &outer.pieces {
        for r in cylinder_subtract(oracle, eps, &inner_domains)? {
            pieces.push((r, t.clone()));
        }
    }
    pieces.retain(|(_, s)| !vec_is_zero(s));
    pieces.sort();
    if pieces.len() > MAX_PIECES {
        return Err(CoreError::ResourceCap(format!(
            "composition grew to {} pieces",
            pieces.len()
        )));
    }
    Ok(PieceTable {
        backend: outer.backend.clone(),
        d: outer.d,
        pieces,
    })
}

/// Semantic equality, piece against piece. Two tables agree iff domains with
/// different shifts have disjoint cylinders and each domain is covered by the
/// other table's equal-shift domains (both directions).
pub fn equals(oracle: &dyn SubshiftOracle, f: &PieceTable, g: &PieceTable) -> Result<bool> {
    check_table(oracle, f)?;
    check_table(oracle, g)?;
    if oracle.alphabet().len() <= 1 {
        return Ok(true);
    }
    for (df, sf) in &f.pieces {
        for (dg, sg) in &g.pieces {
            if sf != sg && compatible(oracle, df, dg)? {
                return Ok(false);
            }
        }
    }
    let covered = |piece: &(Patch, LatticeVector), other: &PieceTable| -> Result<bool> {
        let (dom, s) = piece;
        let same_shift: Vec<&Patch> = other
            .pieces
            .iter()
            .filter(|(_, t)| t == s)
            .map(|(d, _)| d)
            .collect();
        Ok(cylinder_subtract(oracle, dom, &same_shift)?.is_empty())
    };
    for p in &f.pieces {
        if !covered(p, g)? {
            return Ok(false);
        }
    }
    for p in &g.pieces {
        if !covered(p, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least k >= 1 with t^k = id; `ResourceCap` past the cap.
pub fn order(oracle: &dyn SubshiftOracle, t: &PieceTable, cap: u64) -> Result<u64> {
    if t.is_identity(oracle) {
        return Ok(1);
    }
    let mut acc = t.clone();
    let mut k: u64 = 1;
    while k < cap {
        acc = compose(oracle, t, &acc)?;
        k += 1;
        if acc.is_identity(oracle) {
            return Ok(k);
        }
    }
    Err(CoreError::ResourceCap(format!("order exceeds cap {cap}")))
}

/// `[g, h] = g^-1 . h^-1 . g . h`.
pub fn commutator(
    oracle: &dyn SubshiftOracle,
    g: &PieceTable,
    h: &PieceTable,
) -> Result<PieceTable> {
    let gi = inverse(g);
    let hi = inverse(h);
    let a = compose(oracle, &gi, &hi)?;
    let b = compose(oracle, &a, g)?;
    compose(oracle, &b, h)
}

/// The cocycle at a point seen only through a finite window: the shift the
/// element applies to every configuration extending `window`, if the window
/// pins it down.
pub fn apply_to_window(
    oracle: &dyn SubshiftOracle,
    t: &PieceTable,
    window: &Patch,
) -> Result<LatticeVector> {
    check_table(oracle, t)?;
    if !oracle.is_admissible(window)? {
        return Err(CoreError::InadmissibleWindow);
    }
    let mut possible: Vec<LatticeVector> = Vec::new();
    for (dom, s) in &t.pieces {
        if compatible(oracle, window, dom)? {
            possible.push(s.clone());
        }
    }
    let domains: Vec<&Patch> = t.pieces.iter().map(|(d, _)| d).collect();
    if !cylinder_subtract(oracle, window, &domains)?.is_empty() {
        possible.push(vec![0; t.d]);
    }
    possible.sort();
    possible.dedup();
    match possible.len() {
        1 => Ok(possible.pop().expect("len checked")),
        _ => Err(CoreError::NeedLargerWindow),
    }
}

/// Refine every domain to all of its admissible extensions over
/// `support(domain) u B(r)`. Semantically the identity transformation.
pub fn refine_to_ball(
    oracle: &dyn SubshiftOracle,
    t: &PieceTable,
    r: u32,
    cap: usize,
) -> Result<PieceTable> {
    check_table(oracle, t)?;
    let ball = ball_points(t.d, r);
    let mut pieces = Vec::new();
    for (dom, s) in &t.pieces {
        let mut sup: Vec<LatticeVector> = dom.support().cloned().collect();
        sup.extend(ball.iter().cloned());
        for ext in oracle.enumerate_admissible(&sup, cap)? {
            // ext has full support, so agreement == no conflict == extension
            if !patches_conflict(&ext, dom) {
                pieces.push((ext, s.clone()));
            }
        }
    }
    pieces.sort();
    if pieces.len() > MAX_PIECES {
        return Err(CoreError::ResourceCap(format!(
            "refinement grew to {} pieces",
            pieces.len()
        )));
    }
    Ok(PieceTable {
        backend: t.backend.clone(),
        d: t.d,
        pieces,
    })
}

// ---------------------------------------------------------------------------
// words over named generators
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WordLetter {
    pub label: String,
    pub exp: i64,
}

impl WordLetter {
    pub fn new(label: impl Into<String>, exp: i64) -> Self {
        WordLetter {
            label: label.into(),
            exp,
        }
    }
}

/// Evaluate a word left-to-right as `L1 . L2 . ... . Lk` (the rightmost
/// letter acts first).
pub fn evaluate_word(
    oracle: &dyn SubshiftOracle,
    word: &[WordLetter],
    resolve: &dyn Fn(&str) -> Result<PieceTable>,
) -> Result<PieceTable> {
    let mut acc = PieceTable::identity(oracle);
    for letter in word {
        let base = resolve(&letter.label)?;
        let (gen, n) = if letter.exp >= 0 {
            (base, letter.exp)
        } else {
            (inverse(&base), -letter.exp)
        };
        for _ in 0..n {
            acc = compose(oracle, &acc, &gen)?;
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

pub fn piece_table_to_json(
    t: &PieceTable,
    oracle: &dyn SubshiftOracle,
) -> Result<serde_json::Value> {
    check_table(oracle, t)?;
    let mut pieces = Vec::with_capacity(t.pieces.len());
    for (dom, s) in &t.pieces {
        pieces.push(serde_json::json!({
            "domain": patch_to_json(dom, oracle.alphabet())?,
            "shift": s,
        }));
    }
    Ok(serde_json::json!({ "backend": t.backend, "pieces": pieces }))
}

/// Parse and fully validate a table from external JSON.
pub fn piece_table_from_json(
    v: &serde_json::Value,
    oracle: &dyn SubshiftOracle,
) -> Result<PieceTable> {
    let backend = v
        .get("backend")
        .and_then(|x| x.as_str())
        .ok_or_else(|| CoreError::BadInput("piece table json: missing backend".into()))?;
    if backend != oracle.backend_id() {
        return Err(CoreError::BadInput(format!(
            "piece table backend {:?} does not match oracle {:?}",
            backend,
            oracle.backend_id()
        )));
    }
    let pieces_v = v
        .get("pieces")
        .and_then(|x| x.as_array())
        .ok_or_else(|| CoreError::BadInput("piece table json: missing pieces".into()))?;
    let mut pieces = Vec::with_capacity(pieces_v.len());
    for p in pieces_v {
        let dom = patch_from_json(
            p.get("domain")
                .ok_or_else(|| CoreError::BadInput("piece json: missing domain".into()))?,
            oracle.alphabet(),
        )?;
        let shift: LatticeVector = serde_json::from_value(
            p.get("shift")
                .ok_or_else(|| CoreError::BadInput("piece json: missing shift".into()))?
                .clone(),
        )
        .map_err(|e| CoreError::BadInput(format!("piece json shift: {e}")))?;
        pieces.push((dom, shift));
    }
    pieces.sort();
    let t = PieceTable {
        backend: backend.to_string(),
        d: oracle.dim(),
        pieces,
    };
    validate(oracle, &t)?;
    Ok(t)
}
