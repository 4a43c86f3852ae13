//! Piecewise-translation elements of the tiling full group.
//!
//! An element is a finite partition of each sheet domain `V_s'` into convex
//! polygonal pieces; on each piece the parameter moves by a fixed lattice
//! translation and the marking lands on a fixed sheet. The generating moves
//! (`f_move`) relocate a marked vertex within an occurrence of a finite patch
//! and act as the identity when the patch is absent.
//!
//! Conventions, fixed once here and relied on throughout:
//! * `PieceP.v` is the zero-sum coordinate tuple of the *parameter* shift:
//!   applying the piece sends `xi` to `xi + sum v_j zeta^j`.
//! * The marking's displacement in the tiling plane is then
//!   `sum v_{(2j) mod 5} zeta^j`; see `phys_shift`.
//! * `compose(outer, inner)` applies `inner` first.

use std::collections::HashMap;

use num::{BigRational, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

use super::cyclo::{cyclo_from_xy, Cyclo};
use super::pentagon::{pentagon_poly, v_prime_poly, TransversalPoint};
use super::plane::{
    region_area2, region_intersect, region_subtract, region_translate, regions_equal, Pt, Region,
};
use super::q5::Q5;
use super::window::{dual_cyclo, vertex_condition};

/// One piece: for parameters in `region` (subset of `V_s'`) the parameter
/// moves by `v` and the marking lands on sheet `s_to`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PieceP {
    pub s: u8,
    pub region: Region,
    pub s_to: u8,
    /// Zero-sum integer coordinates of the parameter shift.
    pub v: [i64; 5],
}

impl PieceP {
    /// The parameter-space translation `sum v_j zeta^j`.
    pub fn shift(&self) -> Cyclo {
        Cyclo::from_coords(&self.v)
    }

    /// The tiling-plane displacement of the moved marking. If the parameter
    /// shift is `sum v_j zeta^(2j)` written in the power basis, the plane
    /// moves by the same tuple read off the even powers.
    pub fn phys_shift(&self) -> Cyclo {
        let v = &self.v;
        Cyclo::from_coords(&[v[0], v[2], v[4], v[1], v[3]])
    }

    /// `x - alpha(x)` for markings in this piece: the constant plane vector
    /// from the new marking back to the old one. Equal on pieces that act the
    /// same way, which is what the local rule is about.
    pub fn displacement_value(&self) -> Cyclo {
        Cyclo::from_int(self.s as i64)
            .sub(&Cyclo::from_int(self.s_to as i64))
            .sub(&self.phys_shift())
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GroupElementP {
    pub pieces: Vec<PieceP>,
}

impl GroupElementP {
    pub fn identity() -> Self {
        let pieces = (1..=4u8)
            .map(|s| PieceP { s, region: vec![v_prime_poly(s)], s_to: s, v: [0; 5] })
            .collect();
        GroupElementP { pieces }
    }

    pub fn is_identity(&self) -> bool {
        element_equals(self, &GroupElementP::identity())
    }
}

/// A finite patch: required vertices and forbidden positions, in patch-frame
/// index vectors. Any listed vertex may serve as the marking.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PatchSpec {
    pub vertices: Vec<[i64; 5]>,
    #[serde(default)]
    pub forbidden: Vec<[i64; 5]>,
}

/// Places patch point `k` when patch point `vref` sits at the marking of
/// sheet `s`: returns the landing sheet and the normalized index vector, or
/// `None` when the point can never be a vertex there (index divisible by 5).
fn place(k: &[i64; 5], vref: &[i64; 5], s: i64) -> Option<(u8, [i64; 5])> {
    let raw: i64 = k.iter().sum::<i64>() - vref.iter().sum::<i64>() + s;
    let sigma = raw.rem_euclid(5);
    if sigma == 0 {
        return None;
    }
    let c = (sigma - raw) / 5;
    let mut kk = [0i64; 5];
    for j in 0..5 {
        kk[j] = k[j] - vref[j] + c;
    }
    kk[0] += s;
    debug_assert_eq!(kk.iter().sum::<i64>(), sigma);
    Some((sigma as u8, kk))
}

/// The condition polygon of a placed patch point: parameters for which it is
/// a tiling vertex, namely `V_sigma` shifted by minus its internal image.
fn condition_poly(sigma: u8, kk: &[i64; 5]) -> super::plane::ConvexPoly {
    let d = dual_cyclo(kk);
    pentagon_poly(sigma).translate(&Pt::from_cyclo(&d.neg()))
}

/// Per-sheet parameter regions on which the patch occurs with `vertices[vidx]`
/// at the marking. Index 0 holds sheet 1.
pub fn patch_cylinder(spec: &PatchSpec, vidx: usize) -> Result<[Region; 4]> {
    if spec.vertices.is_empty() {
        return Err(CoreError::BadInput("patch has no vertices".into()));
    }
    let vref = spec
        .vertices
        .get(vidx)
        .ok_or_else(|| CoreError::BadInput(format!("no patch vertex {vidx}")))?;
    let mut out: [Region; 4] = [vec![], vec![], vec![], vec![]];
    for s in 1..=4i64 {
        let mut region: Region = vec![v_prime_poly(s as u8)];
        for a in &spec.vertices {
            let Some((sigma, kk)) = place(a, vref, s) else {
                region.clear();
                break;
            };
            region = region_intersect(&region, &vec![condition_poly(sigma, &kk)]);
            if region.is_empty() {
                break;
            }
        }
        if !region.is_empty() {
            for f in &spec.forbidden {
                // index divisible by 5 is never a vertex: constraint is vacuous
                if let Some((sigma, kk)) = place(f, vref, s) {
                    region = region_subtract(&region, &vec![condition_poly(sigma, &kk)]);
                    if region.is_empty() {
                        break;
                    }
                }
            }
        }
        out[(s - 1) as usize] = region;
    }
    Ok(out)
}

/// Landing sheet and stored shift tuple when the marking moves from patch
/// point `from` to patch point `to` on source sheet `s`. Only called where
/// the source cylinder is nonempty, so the placement exists.
fn move_data(spec: &PatchSpec, from: usize, to: usize, s: u8) -> Result<(u8, [i64; 5])> {
    let (sigma, kk) = place(&spec.vertices[to], &spec.vertices[from], s as i64).ok_or_else(|| {
        CoreError::VerificationFailed("move target vanishes on a nonempty cylinder".into())
    })?;
    let shift = dual_cyclo(&kk).sub(&Cyclo::from_int(sigma as i64));
    let v = shift.p_coords()?;
    Ok((sigma, v))
}

/// The elementary move swapping the marking between `vertices[from]` and
/// `vertices[to]` wherever the patch occurs, identity elsewhere. Errors:
/// `EmptyPatch` when the patch occurs nowhere, `Overlap` when the two marked
/// cylinders meet (the would-be involution is then ill-defined).
pub fn f_move(spec: &PatchSpec, from: usize, to: usize) -> Result<GroupElementP> {
    if from >= spec.vertices.len() || to >= spec.vertices.len() {
        return Err(CoreError::BadInput("marked vertex out of range".into()));
    }
    if from == to {
        return Ok(GroupElementP::identity());
    }
    let u1 = patch_cylinder(spec, from)?;
    let u2 = patch_cylinder(spec, to)?;
    let empty1 = u1.iter().all(|r| r.is_empty());
    let empty2 = u2.iter().all(|r| r.is_empty());
    if empty1 && empty2 {
        return Err(CoreError::EmptyPatch("patch cylinders are empty on every sheet".into()));
    }
    let mut pieces = Vec::new();
    for s in 1..=4u8 {
        let i = (s - 1) as usize;
        if region_area2(&region_intersect(&u1[i], &u2[i])).sign() != 0 {
            return Err(CoreError::Overlap(format!(
                "marked cylinders for vertices {from} and {to} meet on sheet {s}"
            )));
        }
        let mut moved: Region = Vec::new();
        if !u1[i].is_empty() {
            let (s_to, v) = move_data(spec, from, to, s)?;
            moved.extend(u1[i].iter().cloned());
            pieces.push(PieceP { s, region: u1[i].clone(), s_to, v });
        }
        if !u2[i].is_empty() {
            let (s_to, v) = move_data(spec, to, from, s)?;
            moved.extend(u2[i].iter().cloned());
            pieces.push(PieceP { s, region: u2[i].clone(), s_to, v });
        }
        let rest = region_subtract(&vec![v_prime_poly(s)], &moved);
        if !rest.is_empty() {
            pieces.push(PieceP { s, region: rest, s_to: s, v: [0; 5] });
        }
    }
    Ok(GroupElementP { pieces })
}

/// The piece of `e` containing `p`, requiring exactly one hit.
pub fn find_piece<'a>(e: &'a GroupElementP, p: &TransversalPoint) -> Result<&'a PieceP> {
    p.validate()?;
    let q = Pt::from_cyclo(&p.xi);
    let mut hit: Option<&PieceP> = None;
    for piece in e.pieces.iter().filter(|x| x.s == p.sheet) {
        let mut inside = false;
        for poly in &piece.region {
            if poly.contains(&q, &p.tags)? {
                inside = true;
                break;
            }
        }
        if inside {
            if hit.is_some() {
                return Err(CoreError::NoPiece("point lies in two pieces".into()));
            }
            hit = Some(piece);
        }
    }
    hit.ok_or_else(|| CoreError::NoPiece(format!("sheet {} point uncovered", p.sheet)))
}

/// Applies the element to a transversal point. Tags transfer unchanged: a
/// lattice translation maps each grid line to a parallel one, preserving
/// direction labels and sides.
pub fn transversal_apply(e: &GroupElementP, p: &TransversalPoint) -> Result<TransversalPoint> {
    let piece = find_piece(e, p)?;
    Ok(TransversalPoint::with_tags(
        piece.s_to,
        p.xi.add(&piece.shift()),
        p.tags.clone(),
    ))
}

/// `outer` after `inner`.
pub fn element_compose(outer: &GroupElementP, inner: &GroupElementP) -> GroupElementP {
    let mut pieces = Vec::new();
    for p1 in &inner.pieces {
        let d1 = Pt::from_cyclo(&p1.shift());
        let image = region_translate(&p1.region, &d1);
        for p2 in outer.pieces.iter().filter(|p2| p2.s == p1.s_to) {
            let meet = region_intersect(&image, &p2.region);
            if meet.is_empty() {
                continue;
            }
            let back = Pt::from_cyclo(&p1.shift().neg());
            let mut v = [0i64; 5];
            for j in 0..5 {
                v[j] = p1.v[j] + p2.v[j];
            }
            pieces.push(PieceP {
                s: p1.s,
                region: region_translate(&meet, &back),
                s_to: p2.s_to,
                v,
            });
        }
    }
    GroupElementP { pieces }
}

pub fn element_inverse(e: &GroupElementP) -> GroupElementP {
    let pieces = e
        .pieces
        .iter()
        .map(|p| {
            let mut v = [0i64; 5];
            for j in 0..5 {
                v[j] = -p.v[j];
            }
            PieceP {
                s: p.s_to,
                region: region_translate(&p.region, &Pt::from_cyclo(&p.shift())),
                s_to: p.s,
                v,
            }
        })
        .collect();
    GroupElementP { pieces }
}

/// Equality as transformations: group pieces by `(s, s_to, v)` and compare
/// the mapped regions up to measure zero. Sound because a point's image
/// determines the key.
pub fn element_equals(a: &GroupElementP, b: &GroupElementP) -> bool {
    type Key = (u8, u8, [i64; 5]);
    fn keyed(e: &GroupElementP) -> HashMap<Key, Region> {
        let mut m: HashMap<Key, Region> = HashMap::new();
        for p in &e.pieces {
            m.entry((p.s, p.s_to, p.v)).or_default().extend(p.region.iter().cloned());
        }
        m.retain(|_, r| region_area2(r).sign() != 0);
        m
    }
    let ka = keyed(a);
    let kb = keyed(b);
    if ka.len() != kb.len() {
        return false;
    }
    for (k, ra) in &ka {
        let Some(rb) = kb.get(k) else { return false };
        if !regions_equal(ra, rb) {
            return false;
        }
    }
    true
}

/// Checks that `e` is a genuine transformation of the transversal: sources
/// partition each sheet domain and images partition each target sheet domain,
/// both up to measure zero.
pub fn element_validate(e: &GroupElementP) -> Result<()> {
    for p in &e.pieces {
        if !(1..=4).contains(&p.s) || !(1..=4).contains(&p.s_to) {
            return Err(CoreError::BadInput(format!("piece sheet {} -> {}", p.s, p.s_to)));
        }
        if p.v.iter().sum::<i64>() != 0 {
            return Err(CoreError::BadInput("piece shift is not zero-sum".into()));
        }
    }
    for s in 1..=4u8 {
        let full = vec![v_prime_poly(s)];
        let full_area = region_area2(&full);
        for (label, mapped) in [("source", false), ("image", true)] {
            let parts: Vec<Region> = e
                .pieces
                .iter()
                .filter(|p| if mapped { p.s_to == s } else { p.s == s })
                .map(|p| {
                    if mapped {
                        region_translate(&p.region, &Pt::from_cyclo(&p.shift()))
                    } else {
                        p.region.clone()
                    }
                })
                .collect();
            let mut total = Q5::zero();
            for r in &parts {
                let a = region_area2(r);
                let inside = region_area2(&region_intersect(r, &full));
                if inside != a {
                    return Err(CoreError::VerificationFailed(format!(
                        "{label} piece leaves sheet {s}"
                    )));
                }
                total = &total + &a;
            }
            if total != full_area {
                return Err(CoreError::VerificationFailed(format!(
                    "{label} pieces do not fill sheet {s}"
                )));
            }
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    if region_area2(&region_intersect(&parts[i], &parts[j])).sign() != 0 {
                        return Err(CoreError::VerificationFailed(format!(
                            "{label} pieces overlap on sheet {s}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Reference dynamics straight from the vertex conditions, bypassing the
/// polygon pieces: test the patch at both markings and transport the marking
/// through the window. Used to cross-check `f_move`.
pub fn f_move_window_model(
    spec: &PatchSpec,
    from: usize,
    to: usize,
    p: &TransversalPoint,
) -> Result<TransversalPoint> {
    if patch_present(spec, from, p)? {
        return move_marked(spec, from, to, p);
    }
    if patch_present(spec, to, p)? {
        return move_marked(spec, to, from, p);
    }
    Ok(p.clone())
}

/// Does the patch occur with `vertices[vidx]` at the marking of `p`?
pub fn patch_present(spec: &PatchSpec, vidx: usize, p: &TransversalPoint) -> Result<bool> {
    let vref = &spec.vertices[vidx];
    let s = p.sheet as i64;
    for a in &spec.vertices {
        let Some((_, kk)) = place(a, vref, s) else { return Ok(false) };
        if !vertex_condition(&p.xi, &p.tags, &kk)? {
            return Ok(false);
        }
    }
    for f in &spec.forbidden {
        if let Some((_, kk)) = place(f, vref, s) {
            if vertex_condition(&p.xi, &p.tags, &kk)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn move_marked(
    spec: &PatchSpec,
    from: usize,
    to: usize,
    p: &TransversalPoint,
) -> Result<TransversalPoint> {
    let (sigma, kk) = place(&spec.vertices[to], &spec.vertices[from], p.sheet as i64)
        .ok_or_else(|| CoreError::VerificationFailed("marked move target is not a vertex".into()))?;
    let shift = dual_cyclo(&kk).sub(&Cyclo::from_int(sigma as i64));
    Ok(TransversalPoint::with_tags(sigma, p.xi.add(&shift), p.tags.clone()))
}

/// Largest distance from any patch point to any usable marking; window radii
/// at least this plus slack make patch occurrence window-determined.
pub fn patch_diameter(spec: &PatchSpec) -> u32 {
    let mut worst: f64 = 0.0;
    for vref in &spec.vertices {
        for a in spec.vertices.iter().chain(spec.forbidden.iter()) {
            let mut d = [0i64; 5];
            for j in 0..5 {
                d[j] = a[j] - vref[j];
            }
            let (x, y) = Cyclo::from_coords(&d).approx();
            worst = worst.max((x * x + y * y).sqrt());
        }
    }
    worst.ceil() as u32
}

/// Vertex offsets (canonical integer 4-tuples) of the tiling window of
/// radius `radius` around the marking of `p`, sorted. Two markings with equal
/// signatures see identical tilings out to that radius.
///
/// Enumerates `t = k - s*e0` directly: the marking-relative position is
/// `sum t_j zeta^j` and its internal image stays within `|xi + s| + |V|` of
/// the origin, so Parseval boxes `t` tightly for markings near any sheet.
pub fn window_signature(p: &TransversalPoint, radius: u32) -> Result<Vec<[i64; 4]>> {
    use super::window::{ZETA_IM, ZETA_RE};
    let s_mark = p.sheet as i64;
    let near = p.xi.add(&Cyclo::from_int(s_mark));
    let (nx, ny) = near.approx();
    let dbound = (nx * nx + ny * ny).sqrt() + 1.72;
    let r = radius as f64 + 0.05;
    let m_max = ((9.0 + 2.0 * r * r + 2.0 * dbound * dbound) / 5.0 + 0.25).sqrt().floor() as i64;
    let r2 = Q5::from_int((radius as i64) * (radius as i64));
    let (xi_x, xi_y) = p.xi.approx();
    let mut sig = Vec::new();
    let rng = -m_max..=m_max;
    let mut t = [0i64; 5];
    for t0 in rng.clone() {
        t[0] = t0;
        for t1 in rng.clone() {
            t[1] = t1;
            for t2 in rng.clone() {
                t[2] = t2;
                for t3 in rng.clone() {
                    t[3] = t3;
                    for t4 in rng.clone() {
                        t[4] = t4;
                        let sum: i64 = t.iter().sum();
                        let s_x = sum + s_mark;
                        if !(1..=4).contains(&s_x) {
                            continue;
                        }
                        let mut px = 0.0f64;
                        let mut py = 0.0f64;
                        let mut dx = xi_x + s_mark as f64;
                        let mut dy = xi_y;
                        for (j, tj) in t.iter().enumerate() {
                            let tf = *tj as f64;
                            px += tf * ZETA_RE[j];
                            py += tf * ZETA_IM[j];
                            dx += tf * ZETA_RE[(2 * j) % 5];
                            dy += tf * ZETA_IM[(2 * j) % 5];
                        }
                        if px * px + py * py > r * r || dx * dx + dy * dy > 1.68 * 1.68 {
                            continue;
                        }
                        let mut k = t;
                        k[0] += s_mark;
                        let off = Cyclo::from_coords(&t);
                        if (&off.norm2() - &r2).sign() > 0 {
                            continue;
                        }
                        if !vertex_condition(&p.xi, &p.tags, &k)? {
                            continue;
                        }
                        sig.push([t[0] - t[4], t[1] - t[4], t[2] - t[4], t[3] - t[4]]);
                    }
                }
            }
        }
    }
    sig.sort_unstable();
    Ok(sig)
}

/// Samples a uniform-ish regular transversal point: random sheet, parameter
/// near `-s` with denominator-64 jitter, rejection until strictly interior.
pub fn sample_transversal<R: Rng>(rng: &mut R) -> TransversalPoint {
    for _ in 0..10_000 {
        let sheet = rng.gen_range(1..=4u8);
        let mut c: [BigRational; 5] =
            [(); 5].map(|_| BigRational::zero());
        c[0] = BigRational::new(
            (-(sheet as i64) * 64 + rng.gen_range(-96..=96i64)).into(),
            64.into(),
        );
        for cj in c.iter_mut().take(4).skip(1) {
            *cj = BigRational::new(rng.gen_range(-96..=96i64).into(), 64.into());
        }
        let p = TransversalPoint::new(sheet, Cyclo::new(c));
        if p.validate().is_ok() {
            return p;
        }
    }
    unreachable!("rejection sampling starved; sheet domains have positive area")
}

/// Local-rule test: markings whose radius-`radius` windows agree must be
/// displaced identically. Probes `samples` random points plus deterministic
/// near-boundary pairs straddling every piece edge, so a piece boundary that
/// is not forced by the window gets caught.
pub fn local_rule_check(
    e: &GroupElementP,
    radius: u32,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<TransversalPoint> = (0..samples).map(|_| sample_transversal(&mut rng)).collect();

    let eps = Q5::from_rat(BigRational::new(1.into(), 512.into()));
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    let mut seen: std::collections::HashSet<(u8, Pt)> = std::collections::HashSet::new();
    for piece in &e.pieces {
        for poly in &piece.region {
            let n = poly.verts.len();
            for i in 0..n {
                let a = &poly.verts[i];
                let b = &poly.verts[(i + 1) % n];
                for t in [&half, &quarter] {
                    let t5 = Q5::from_rat(t.clone());
                    let m = Pt::new(
                        &a.x + &(&t5 * &(&b.x - &a.x)),
                        &a.y + &(&t5 * &(&b.y - &a.y)),
                    );
                    // inward normal of edge a->b for a CCW polygon
                    let nx = &a.y - &b.y;
                    let ny = &b.x - &a.x;
                    for sgn in [1i64, -1] {
                        let sq = Q5::from_int(sgn);
                        let probe = Pt::new(
                            &m.x + &(&(&eps * &sq) * &nx),
                            &m.y + &(&(&eps * &sq) * &ny),
                        );
                        if !seen.insert((piece.s, probe.clone())) {
                            continue;
                        }
                        let xi = pt_to_cyclo(&probe);
                        let cand = TransversalPoint::new(piece.s, xi);
                        if cand.validate().is_ok() {
                            points.push(cand);
                        }
                    }
                }
            }
        }
    }

    let mut table: HashMap<Vec<[i64; 4]>, Cyclo> = HashMap::new();
    for p in &points {
        let Ok(piece) = find_piece(e, p) else { continue };
        let value = piece.displacement_value();
        let sig = match window_signature(p, radius) {
            Ok(s) => s,
            Err(_) => continue,
        };
        match table.get(&sig) {
            Some(prev) if *prev != value => return Ok(false),
            Some(_) => {}
            None => {
                table.insert(sig, value);
            }
        }
    }
    Ok(true)
}

fn pt_to_cyclo(p: &Pt) -> Cyclo {
    cyclo_from_xy(&p.x, &p.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e01_patch() -> PatchSpec {
        // an edge in direction zeta, with the backward extension forbidden
        PatchSpec {
            vertices: vec![[1, 0, 0, 0, 0], [1, 1, 0, 0, 0]],
            forbidden: vec![[1, -1, 0, 0, 0]],
        }
    }

    fn chain3_patch() -> PatchSpec {
        // three vertices along zeta; the single forbidden point makes the
        // three marked cylinders pairwise incompatible
        PatchSpec {
            vertices: vec![[1, 0, 0, 0, 0], [1, 1, 0, 0, 0], [1, 2, 0, 0, 0]],
            forbidden: vec![[1, -1, 0, 0, 0]],
        }
    }

    #[test]
    fn identity_element() {
        let id = GroupElementP::identity();
        element_validate(&id).unwrap();
        assert!(id.is_identity());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let p = sample_transversal(&mut rng);
            let q = transversal_apply(&id, &p).unwrap();
            assert_eq!(q, p);
        }
    }

    #[test]
    fn single_vertex_patch_is_everywhere() {
        let spec = PatchSpec { vertices: vec![[1, 0, 0, 0, 0]], forbidden: vec![] };
        let cyl = patch_cylinder(&spec, 0).unwrap();
        for s in 1..=4u8 {
            let full = region_area2(&vec![v_prime_poly(s)]);
            assert_eq!(region_area2(&cyl[(s - 1) as usize]), full);
        }
        assert!(f_move(&spec, 0, 0).unwrap().is_identity());
    }

    #[test]
    fn edge_move_is_an_involution() {
        let f = f_move(&e01_patch(), 0, 1).unwrap();
        element_validate(&f).unwrap();
        assert!(!f.is_identity());
        assert!(element_equals(&element_inverse(&f), &f));
        assert!(element_compose(&f, &f).is_identity());

        // the moved region is nonempty: the patch is realizable
        let moved: Q5 = f
            .pieces
            .iter()
            .filter(|p| p.v != [0; 5])
            .map(|p| region_area2(&p.region))
            .fold(Q5::zero(), |acc, a| &acc + &a);
        assert!(moved.sign() > 0, "edge patch should occur somewhere");

        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let mut moved_count = 0usize;
        for _ in 0..50 {
            let p = sample_transversal(&mut rng);
            let q = transversal_apply(&f, &p).unwrap();
            let back = transversal_apply(&f, &q).unwrap();
            assert_eq!(back, p);
            if q != p {
                moved_count += 1;
            }
        }
        // guaranteed movers: centroids of the moved pieces
        for piece in f.pieces.iter().filter(|p| p.v != [0; 5]) {
            let c = piece.region[0].centroid();
            let p = TransversalPoint::new(piece.s, pt_to_cyclo(&c));
            if p.validate().is_ok() {
                let q = transversal_apply(&f, &p).unwrap();
                assert_ne!(q, p);
                moved_count += 1;
            }
        }
        assert!(moved_count > 0);
    }

    #[test]
    fn polygon_and_window_dynamics_agree() {
        let spec = e01_patch();
        let f = f_move(&spec, 0, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut pts: Vec<TransversalPoint> = (0..60).map(|_| sample_transversal(&mut rng)).collect();
        for piece in &f.pieces {
            let c = piece.region[0].centroid();
            let p = TransversalPoint::new(piece.s, pt_to_cyclo(&c));
            if p.validate().is_ok() {
                pts.push(p);
            }
        }
        for p in &pts {
            let via_polygons = transversal_apply(&f, p).unwrap();
            let via_windows = f_move_window_model(&spec, 0, 1, p).unwrap();
            assert_eq!(via_polygons, via_windows);
            via_polygons.validate().unwrap();
        }
    }

    #[test]
    fn transpositions_compose_like_transpositions() {
        let spec = chain3_patch();
        let f12 = f_move(&spec, 0, 1).unwrap();
        let f23 = f_move(&spec, 1, 2).unwrap();
        let f13 = f_move(&spec, 0, 2).unwrap();
        element_validate(&f12).unwrap();
        element_validate(&f23).unwrap();
        element_validate(&f13).unwrap();
        // all three moved cylinders are realizable
        for f in [&f12, &f23, &f13] {
            let moved: Q5 = f
                .pieces
                .iter()
                .filter(|p| p.v != [0; 5])
                .map(|p| region_area2(&p.region))
                .fold(Q5::zero(), |acc, a| &acc + &a);
            assert!(moved.sign() > 0, "three-chain patch should occur somewhere");
        }
        let composite = element_compose(&f12, &element_compose(&f23, &f12));
        element_validate(&composite).unwrap();
        assert!(element_equals(&composite, &f13));
        assert!(!element_equals(&composite, &f12));
    }

    #[test]
    fn local_rule_holds_for_moves_and_identity() {
        assert!(local_rule_check(&GroupElementP::identity(), 1, 5, 11).unwrap());
        let spec = e01_patch();
        let f = f_move(&spec, 0, 1).unwrap();
        let r = patch_diameter(&spec) + 2;
        assert!(local_rule_check(&f, r, 8, 12).unwrap());
    }

    #[test]
    fn corrupted_piece_breaks_the_local_rule() {
        let spec = e01_patch();
        let f = f_move(&spec, 0, 1).unwrap();
        let r = patch_diameter(&spec) + 2;
        // split the largest identity piece by a vertical line through its
        // interior and give one half a spurious translation
        let (idx, _) = f
            .pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.v == [0; 5])
            .max_by(|(_, a), (_, b)| {
                let aa = region_area2(&a.region);
                let bb = region_area2(&b.region);
                (&aa - &bb).sign().cmp(&0)
            })
            .expect("identity pieces exist");
        let victim = &f.pieces[idx];
        let cx = victim.region[0].centroid().x;
        let one = Q5::one();
        let zero = Q5::zero();
        let mut left: Region = Vec::new();
        let mut right: Region = Vec::new();
        for poly in &victim.region {
            if let Some(p) = poly.clip(&-&one, &zero, &cx) {
                left.push(p);
            }
            if let Some(p) = poly.clip(&one, &zero, &-&cx) {
                right.push(p);
            }
        }
        assert!(!left.is_empty() && !right.is_empty());
        let mut pieces = f.pieces.clone();
        pieces.remove(idx);
        pieces.push(PieceP { s: victim.s, region: left, s_to: victim.s_to, v: victim.v });
        pieces.push(PieceP {
            s: victim.s,
            region: right,
            s_to: victim.s_to,
            v: [1, -1, 0, 0, 0],
        });
        let corrupted = GroupElementP { pieces };
        assert!(!local_rule_check(&corrupted, r, 8, 12).unwrap());
    }

    #[test]
    fn validation_rejects_broken_partitions() {
        let mut missing = GroupElementP::identity();
        missing.pieces.pop();
        assert!(element_validate(&missing).is_err());

        let mut doubled = GroupElementP::identity();
        let extra = doubled.pieces[0].clone();
        doubled.pieces.push(extra);
        assert!(element_validate(&doubled).is_err());

        let mut drift = GroupElementP::identity();
        drift.pieces[0].v = [1, 0, 0, 0, 0];
        assert!(element_validate(&drift).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let f = f_move(&e01_patch(), 0, 1).unwrap();
        let js = serde_json::to_string(&f).unwrap();
        let back: GroupElementP = serde_json::from_str(&js).unwrap();
        assert!(element_equals(&f, &back));
        let spec = chain3_patch();
        let js = serde_json::to_string(&spec).unwrap();
        let back: PatchSpec = serde_json::from_str(&js).unwrap();
        assert_eq!(spec, back);
    }
}
