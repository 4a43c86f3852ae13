//! Independent cross-check oracle: the five-grid dual construction.
//!
//! For offsets `gamma_j` with `sum gamma_j zeta^(2j) = -xi` and
//! `sum gamma_j = 0`, put `K_j(z) = ceil(lambda_j(z) + gamma_j)`. Expanding
//! `sum K_j(z) zeta^(2j)` makes the `lambda` terms cancel (`sum zeta^(3j) =
//! 0`), leaving exactly a point of the open pentagon `V_s` shifted by `-xi`
//! — so the `K`-vectors of the grid cells are precisely the tiling vertices
//! accepted by the pentagon condition. This file computes them the dual way
//! (one sample per cell corner quadrant) and never touches the pentagon
//! test, which is what makes the comparison in the test suite meaningful.
//!
//! The corner `z` of lines `(j1, n1)` and `(j2, n2)` depends affinely on
//! `(n1, n2)`, so all grid values at corners and quadrant samples reduce to
//! integer combinations of a handful of per-pair constants; the inner loop
//! does only exact sign tests.

use std::collections::HashSet;

use num::bigint::BigInt;
use num::{BigRational, Zero};

use crate::error::{CoreError, Result};
use crate::penrose::cyclo::Cyclo;
use crate::penrose::plane::lambda_coeffs;
use crate::penrose::q5::Q5;
use crate::penrose::window::VertexRec;

fn ceil_q5(v: &Q5) -> BigInt {
    -(-v).floor_big()
}

fn is_integral(v: &Q5) -> bool {
    v.b.is_zero() && v.a.is_integer()
}

const ZETA_RE: [f64; 5] = [
    1.0,
    0.30901699437494745,
    -0.8090169943749473,
    -0.8090169943749475,
    0.30901699437494756,
];
const ZETA_IM: [f64; 5] = [
    0.0,
    0.9510565162951535,
    0.5877852522924731,
    -0.587785252292473,
    -0.9510565162951536,
];

/// All tiling vertices within `radius`, via grid duality. Requires a
/// parameter whose grid has no three concurrent lines in range (true for
/// generic rational `xi`); singular inputs are rejected.
pub fn pentagrid_vertices(xi: &Cyclo, radius: u32) -> Result<Vec<VertexRec>> {
    if radius < 1 {
        return Err(CoreError::BadInput("radius must be >= 1".into()));
    }
    // offsets: gamma_m = -c_(2m) + t with t the mean correction
    let c = xi.coeffs();
    let mut gamma: Vec<BigRational> = Vec::with_capacity(5);
    let mut tsum = BigRational::zero();
    for m in 0..5 {
        let cm = c[(2 * m) % 5].clone();
        tsum += &cm;
        gamma.push(-cm);
    }
    let t = tsum / BigRational::from(BigInt::from(5));
    for g in gamma.iter_mut() {
        *g += &t;
    }
    let gamma_q5: Vec<Q5> = gamma.iter().map(|g| Q5::from_rat(g.clone())).collect();

    let rb = radius as i64 + 5;
    let coeffs: Vec<(Q5, Q5)> = (0..5).map(lambda_coeffs).collect();
    let mut line_ns: Vec<(i64, i64)> = Vec::with_capacity(5);
    for g in &gamma {
        let lo = (g - BigRational::from(BigInt::from(rb))).ceil().to_integer();
        let hi = (g + BigRational::from(BigInt::from(rb))).floor().to_integer();
        let lo = i64::try_from(lo).map_err(|_| CoreError::BadInput("offset out of range".into()))?;
        let hi = i64::try_from(hi).map_err(|_| CoreError::BadInput("offset out of range".into()))?;
        line_ns.push((lo, hi));
    }

    let rf = radius as f64;
    let r2 = Q5::from_int((radius as i64) * (radius as i64));
    let mut seen: HashSet<[i64; 5]> = HashSet::new();
    let mut out: Vec<VertexRec> = Vec::new();

    let eps_scales: [Q5; 2] = [Q5::parts(1, 0, 128), Q5::parts(1, 0, 4096)];
    let quadrants: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

    let scale_q5 = |v: &Q5, n: i64| -> Q5 {
        let f = BigRational::from(BigInt::from(n));
        Q5::new(&v.a * &f, &v.b * &f)
    };

    for j1 in 0..5usize {
        for j2 in (j1 + 1)..5usize {
            let (a1, b1) = coeffs[j1].clone();
            let (a2, b2) = coeffs[j2].clone();
            let det = &(&a1 * &b2) - &(&a2 * &b1);
            debug_assert!(!det.is_zero());
            // z(n1, n2) = z0 + n1 Z1 + n2 Z2 by Cramer on
            //   a1 x + b1 y = n1 - gamma1,  a2 x + b2 y = n2 - gamma2
            let z1 = (&b2 / &det, &(-&a2) / &det);
            let z2 = (&(-&b1) / &det, &a1 / &det);
            let g1 = -&gamma_q5[j1];
            let g2 = -&gamma_q5[j2];
            let z0 = (
                &(&(&g1 * &b2) - &(&g2 * &b1)) / &det,
                &(&(&a1 * &g2) - &(&a2 * &g1)) / &det,
            );
            // directions along the two lines
            let d1 = (-&b1, a1.clone());
            let d2 = (-&b2, a2.clone());
            // base_j(n1,n2) = lambda_j(z) + gamma_j = n1 P_j + n2 Q_j + R_j
            // and the sample displacement coefficients u_j, w_j
            let mut pqr: Vec<(Q5, Q5, Q5)> = Vec::with_capacity(5);
            let mut uw: Vec<(Q5, Q5)> = Vec::with_capacity(5);
            for (j, (aj, bj)) in coeffs.iter().enumerate() {
                let ev = |p: &(Q5, Q5)| &(aj * &p.0) + &(bj * &p.1);
                pqr.push((ev(&z1), ev(&z2), &ev(&z0) + &gamma_q5[j]));
                uw.push((ev(&d1), ev(&d2)));
            }
            debug_assert!((&pqr[j1].0 - &Q5::one()).is_zero());
            debug_assert!(pqr[j1].1.is_zero() && pqr[j1].2.is_zero());
            let w_j1_sign = uw[j1].1.sign();
            let u_j2_sign = uw[j2].0.sign();
            debug_assert!(w_j1_sign != 0 && u_j2_sign != 0);
            // per-scale displacement values for the three free directions
            let others: Vec<usize> = (0..5).filter(|j| *j != j1 && *j != j2).collect();
            let scaled: Vec<[(Q5, Q5); 2]> = others
                .iter()
                .map(|&j| {
                    [
                        (&eps_scales[0] * &uw[j].0, &eps_scales[0] * &uw[j].1),
                        (&eps_scales[1] * &uw[j].0, &eps_scales[1] * &uw[j].1),
                    ]
                })
                .collect();

            for n1 in line_ns[j1].0..=line_ns[j1].1 {
                for n2 in line_ns[j2].0..=line_ns[j2].1 {
                    // exact fractional defects of the three free directions
                    let mut fj = [0i64; 3];
                    let mut dj: [Option<Q5>; 3] = [None, None, None];
                    let mut singular = false;
                    for (idx, &j) in others.iter().enumerate() {
                        let base = &(&scale_q5(&pqr[j].0, n1) + &scale_q5(&pqr[j].1, n2))
                            + &pqr[j].2;
                        if is_integral(&base) {
                            singular = true;
                            break;
                        }
                        let f = ceil_q5(&base);
                        let fi = i64::try_from(f.clone())
                            .map_err(|_| CoreError::BadInput("grid index out of range".into()))?;
                        dj[idx] = Some(&Q5::from_rat(BigRational::from(f)) - &base);
                        fj[idx] = fi;
                    }
                    if singular {
                        return Err(CoreError::BadInput(format!(
                            "singular parameter: three grid lines concurrent near \
                             ({j1},{n1}) x ({j2},{n2})"
                        )));
                    }
                    for &(s1, s2) in &quadrants {
                        let mut k = [0i64; 5];
                        k[j1] = n1 + if s2 * (w_j1_sign as i64) > 0 { 1 } else { 0 };
                        k[j2] = n2 + if s1 * (u_j2_sign as i64) > 0 { 1 } else { 0 };
                        let mut resolved = true;
                        for scale in 0..2 {
                            resolved = true;
                            for (idx, &j) in others.iter().enumerate() {
                                let (eu, ew) = &scaled[idx][scale];
                                let mut delta = Q5::zero();
                                delta = if s1 > 0 { &delta + eu } else { &delta - eu };
                                delta = if s2 > 0 { &delta + ew } else { &delta - ew };
                                let cmp = (&delta - dj[idx].as_ref().unwrap()).sign();
                                if cmp == 0 {
                                    resolved = false;
                                    break; // sample fell on a line; shrink eps
                                }
                                k[j] = fj[idx] + if cmp > 0 { 1 } else { 0 };
                            }
                            if resolved {
                                break;
                            }
                        }
                        if !resolved {
                            continue;
                        }
                        let s: i64 = k.iter().sum();
                        debug_assert!((1..=4).contains(&s), "cell index sum {s}");
                        if !seen.insert(k) {
                            continue;
                        }
                        // float radius prune, then exact confirmation
                        let mut x_re = 0.0;
                        let mut x_im = 0.0;
                        for (j, kj) in k.iter().enumerate() {
                            x_re += *kj as f64 * ZETA_RE[j];
                            x_im += *kj as f64 * ZETA_IM[j];
                        }
                        if x_re * x_re + x_im * x_im > rf * rf + 0.01 {
                            continue;
                        }
                        let x = Cyclo::from_coords(&k);
                        if (&x.norm2() - &r2).sign() <= 0 {
                            out.push(VertexRec { k });
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|v| (v.sheet(), v.m()));
    Ok(out)
}
