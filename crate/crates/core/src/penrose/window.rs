//! Window extraction: the exact vertex set of a tiling inside a disk.
//!
//! A candidate `x = sum k_j zeta^j` with `s = sum k_j` in 1..4 is a vertex of
//! the tiling of `xi` iff `sum k_j zeta^(2j) + xi` lies in `V_s`. The zero-sum
//! part `m = k - s*e0` is enumerated over a box whose side comes from the
//! Parseval identity `sum m_j^2 = (2/5)(|x-s|^2 + |D-s|^2)`: both Fourier
//! modes are bounded, the first by the requested radius, the second by the
//! pentagon condition itself. Floats only prune; every accepted vertex is
//! re-checked exactly.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::penrose::cyclo::Cyclo;
use crate::penrose::pentagon::{point_in_pentagon, TransversalPoint};
use crate::penrose::plane::Pt;
use crate::penrose::q5::Q5;

/// One tiling vertex: its integer coordinates `k` (with `sum k = s` already
/// normalized into 1..4).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VertexRec {
    pub k: [i64; 5],
}

impl VertexRec {
    pub fn sheet(&self) -> u8 {
        let s: i64 = self.k.iter().sum();
        debug_assert!((1..=4).contains(&s));
        s as u8
    }

    pub fn point(&self) -> Cyclo {
        Cyclo::from_coords(&self.k)
    }

    /// Zero-sum part, the canonical dedup key together with the sheet.
    pub fn m(&self) -> [i64; 5] {
        let s: i64 = self.k.iter().sum();
        let mut m = self.k;
        m[0] -= s;
        m
    }
}

/// Exact patch of a tiling: all vertices within `radius` of the origin,
/// the unit edges among them, and the marked vertex when it is in range.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TilingWindow {
    pub xi: Cyclo,
    pub radius: u32,
    pub vertices: Vec<VertexRec>,
    /// `(i, j, dir)`: `vertices[j].point() = vertices[i].point() + zeta^dir`.
    pub edges: Vec<(usize, usize, u8)>,
    pub marked: Option<usize>,
}

/// A unit rhombus of the window. `thick` distinguishes the 72/108-degree
/// shape from the 36/144-degree one.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Face {
    pub corners: [usize; 4],
    pub thick: bool,
    pub dirs: (u8, u8),
}

pub(crate) const ZETA_RE: [f64; 5] = [
    1.0,
    0.30901699437494745,
    -0.8090169943749473,
    -0.8090169943749475,
    0.30901699437494756,
];
pub(crate) const ZETA_IM: [f64; 5] = [
    0.0,
    0.9510565162951535,
    0.5877852522924731,
    -0.587785252292473,
    -0.9510565162951536,
];

/// Sum k_j zeta^{2j}, the internal-space image of an index vector.
pub fn dual_cyclo(k: &[i64; 5]) -> Cyclo {
    let mut dual = [0i64; 5];
    for (j, kj) in k.iter().enumerate() {
        dual[(2 * j) % 5] += kj;
    }
    Cyclo::from_coords(&dual)
}

/// Is `k` a vertex of the tiling of `xi`? Exact; `tags` resolve boundary
/// incidences of singular `xi`.
pub fn vertex_condition(xi: &Cyclo, tags: &crate::penrose::plane::SideTags, k: &[i64; 5]) -> Result<bool> {
    let s: i64 = k.iter().sum();
    if !(1..=4).contains(&s) {
        return Ok(false);
    }
    let d = dual_cyclo(k);
    let q = Pt::from_cyclo(&d.add(xi));
    point_in_pentagon(&q, tags, s as u8)
}

/// All vertices of the tiling of `p.xi` with `|x| <= radius`, exactly.
pub fn vertices(p: &TransversalPoint, radius: u32) -> Result<TilingWindow> {
    if radius < 1 {
        return Err(CoreError::BadInput("window radius must be >= 1".into()));
    }
    let r = radius as f64;
    let (xi_re_f, xi_im_f) = p.xi.approx();
    let xi_abs = (xi_re_f * xi_re_f + xi_im_f * xi_im_f).sqrt();
    // Parseval box bound; the 1e-6 pad absorbs float error, the +1 is slack.
    let bound = ((2.0 / 5.0) * ((r + 4.0) * (r + 4.0) + (xi_abs + 6.0) * (xi_abs + 6.0)))
        .sqrt()
        + 1e-6;
    let m_max = bound.floor() as i64 + 1;

    let r2_exact = Q5::from_int((radius as i64) * (radius as i64));
    let mut found: Vec<VertexRec> = Vec::new();
    for s in 1..=4i64 {
        for m0 in -m_max..=m_max {
            for m1 in -m_max..=m_max {
                for m2 in -m_max..=m_max {
                    for m3 in -m_max..=m_max {
                        let m4 = -(m0 + m1 + m2 + m3);
                        if m4.abs() > m_max {
                            continue;
                        }
                        let k = [m0 + s, m1, m2, m3, m4];
                        // float prune on |x| and on the pentagon disk
                        let mut x_re = 0.0;
                        let mut x_im = 0.0;
                        let mut d_re = 0.0;
                        let mut d_im = 0.0;
                        for (j, kj) in k.iter().enumerate() {
                            let kf = *kj as f64;
                            x_re += kf * ZETA_RE[j];
                            x_im += kf * ZETA_IM[j];
                            d_re += kf * ZETA_RE[(2 * j) % 5];
                            d_im += kf * ZETA_IM[(2 * j) % 5];
                        }
                        if x_re * x_re + x_im * x_im > r * r + 0.01 {
                            continue;
                        }
                        let qx = d_re + xi_re_f;
                        let qy = d_im + xi_im_f;
                        if qx * qx + qy * qy > 2.8 {
                            continue;
                        }
                        // exact radius check
                        let x = Cyclo::from_coords(&k);
                        if (&x.norm2() - &r2_exact).sign() > 0 {
                            continue;
                        }
                        if vertex_condition(&p.xi, &p.tags, &k)? {
                            found.push(VertexRec { k });
                        }
                    }
                }
            }
        }
    }
    found.sort_by_key(|v| (v.sheet(), v.m()));

    let index: HashMap<(u8, [i64; 5]), usize> = found
        .iter()
        .enumerate()
        .map(|(i, v)| ((v.sheet(), v.m()), i))
        .collect();
    let mut edges = Vec::new();
    for (i, v) in found.iter().enumerate() {
        let s = v.sheet();
        if s == 4 {
            continue; // neighbor sum would be 5
        }
        for dir in 0..5u8 {
            let mut k2 = v.k;
            k2[dir as usize] += 1;
            let rec = VertexRec { k: k2 };
            if let Some(&j) = index.get(&(s + 1, rec.m())) {
                edges.push((i, j, dir));
            }
        }
    }
    let marked = index.get(&(p.sheet, [0; 5])).copied();
    Ok(TilingWindow {
        xi: p.xi.clone(),
        radius,
        vertices: found,
        edges,
        marked,
    })
}

/// Unit rhombi all four of whose corners are in the window.
pub fn faces(w: &TilingWindow) -> Vec<Face> {
    let index: HashMap<(u8, [i64; 5]), usize> = w
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| ((v.sheet(), v.m()), i))
        .collect();
    let lookup = |k: [i64; 5]| -> Option<usize> {
        let s: i64 = k.iter().sum();
        if !(1..=4).contains(&s) {
            return None;
        }
        let rec = VertexRec { k };
        index.get(&(s as u8, rec.m())).copied()
    };
    let mut out = Vec::new();
    for (i, v) in w.vertices.iter().enumerate() {
        for a in 0..5u8 {
            for b in (a + 1)..5u8 {
                let mut ka = v.k;
                ka[a as usize] += 1;
                let mut kb = v.k;
                kb[b as usize] += 1;
                let mut kab = ka;
                kab[b as usize] += 1;
                let (Some(ia), Some(ib), Some(iab)) = (lookup(ka), lookup(kb), lookup(kab))
                else {
                    continue;
                };
                let delta = (b - a) % 5;
                out.push(Face {
                    corners: [i, ia, iab, ib],
                    thick: delta == 1 || delta == 4,
                    dirs: (a, b),
                });
            }
        }
    }
    out
}

/// The transported window predicted by equivariance: translating the tiling
/// parameter by `v = sum n_j zeta^(2j)` (zero-sum `n`) moves every vertex by
/// `-v'` with `v' = sum n_j zeta^j`.
pub fn transport_window(w: &TilingWindow, n: &[i64; 5], radius: u32) -> Vec<VertexRec> {
    let r2 = Q5::from_int((radius as i64) * (radius as i64));
    let mut out = Vec::new();
    for v in &w.vertices {
        let mut k2 = v.k;
        for (kj, nj) in k2.iter_mut().zip(n) {
            *kj -= nj;
        }
        let x = Cyclo::from_coords(&k2);
        if (&x.norm2() - &r2).sign() <= 0 {
            out.push(VertexRec { k: k2 });
        }
    }
    out.sort_by_key(|v| (v.sheet(), v.m()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penrose::plane::SideTags;

    fn test_point() -> TransversalPoint {
        let p = TransversalPoint::new(1, crate::penrose::sample_xi());
        p.validate().expect("sample_xi must lie on sheet 1");
        p
    }

    #[test]
    fn small_window_is_consistent() {
        let p = test_point();
        let w = vertices(&p, 3).unwrap();
        assert!(!w.vertices.is_empty());
        // the marked vertex is the integer point s = 1
        let mk = w.marked.expect("marking within radius 3");
        assert_eq!(w.vertices[mk].k, [1, 0, 0, 0, 0]);
        // all stored points satisfy the radius exactly and the condition
        let r2 = Q5::from_int(9);
        for v in &w.vertices {
            assert!((&v.point().norm2() - &r2).sign() <= 0);
            assert!(vertex_condition(&p.xi, &p.tags, &v.k).unwrap());
        }
        // every edge has exact unit length
        for &(i, j, dir) in &w.edges {
            let d = w.vertices[j].point().sub(&w.vertices[i].point());
            assert_eq!(d, Cyclo::zeta(dir as usize));
            assert_eq!(d.norm2(), Q5::one());
        }
        // determinism: rebuild gives the identical window
        let w2 = vertices(&p, 3).unwrap();
        assert_eq!(w, w2);
    }

    #[test]
    fn window_grows_with_radius() {
        let p = test_point();
        let w3 = vertices(&p, 3).unwrap();
        let w4 = vertices(&p, 4).unwrap();
        assert!(w4.vertices.len() > w3.vertices.len());
        // every radius-3 vertex reappears at radius 4
        for v in &w3.vertices {
            assert!(w4.vertices.contains(v));
        }
    }

    #[test]
    fn faces_are_unit_rhombi_of_both_classes() {
        let p = test_point();
        let w = vertices(&p, 4).unwrap();
        let fs = faces(&w);
        assert!(!fs.is_empty());
        let thick = fs.iter().filter(|f| f.thick).count();
        let thin = fs.len() - thick;
        assert!(thick > 0, "no thick rhombi in radius-4 window");
        assert!(thin > 0, "no thin rhombi in radius-4 window");
        // exact side lengths and angles via the two cosines
        let cos36 = Q5::parts(1, 1, 4);
        let cos72 = Q5::parts(-1, 1, 4);
        for f in &fs {
            let p0 = w.vertices[f.corners[0]].point();
            let p1 = w.vertices[f.corners[1]].point();
            let p3 = w.vertices[f.corners[3]].point();
            let e1 = p1.sub(&p0);
            let e2 = p3.sub(&p0);
            assert_eq!(e1.norm2(), Q5::one());
            assert_eq!(e2.norm2(), Q5::one());
            let d = crate::penrose::plane::dot(&Pt::from_cyclo(&e1), &Pt::from_cyclo(&e2));
            if f.thick {
                assert!(d == cos72 || d == -&cos72, "thick rhombus angle");
            } else {
                assert!(d == cos36 || d == -&cos36, "thin rhombus angle");
            }
        }
    }

    #[test]
    fn equivariance_transport() {
        let p = test_point();
        // v = sum n_j zeta^(2j) for a few zero-sum n
        let shifts: [[i64; 5]; 3] = [
            [1, -1, 0, 0, 0],
            [0, 1, 0, -1, 0],
            [1, 0, -2, 1, 0],
        ];
        for n in &shifts {
            let mut vc: [i64; 5] = [0; 5];
            for (j, nj) in n.iter().enumerate() {
                vc[(2 * j) % 5] += nj;
            }
            let v = Cyclo::from_coords(&vc);
            let vprime = Cyclo::from_coords(n);
            // enlarge the source window enough to cover the translate
            let slack = vprime.norm2().approx().sqrt().ceil() as u32 + 1;
            let w_big = vertices(&p, 3 + slack).unwrap();
            let q = TransversalPoint::new(p.sheet, p.xi.add(&v));
            let w_shifted = vertices(&q, 3).unwrap();
            let predicted = transport_window(&w_big, n, 3);
            let got: Vec<VertexRec> = w_shifted.vertices.clone();
            assert_eq!(predicted, got, "equivariance failed for n={n:?}");
        }
    }

    #[test]
    fn singular_xi_without_tags_is_rejected() {
        // xi = 0 lies on five grid lines; some candidate triggers a boundary
        let p = TransversalPoint::new(1, Cyclo::zero());
        match vertices(&p, 2) {
            Err(CoreError::MissingTag(_)) => {}
            other => panic!("expected MissingTag, got {other:?}"),
        }
        // with a sector tag the window is well defined
        let p = TransversalPoint::with_tags(1, Cyclo::zero(), SideTags::Sector(4));
        let w = vertices(&p, 2).unwrap();
        assert!(!w.vertices.is_empty());
    }
}
