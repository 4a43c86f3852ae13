//! Structure of the parameter-translation group modulo the moves' lattice.
//!
//! The group P of parameter translations is free abelian of rank 4, with
//! basis `b_j = (1 - zeta) zeta^j`, `j = 0..3`. Two distinguished elements
//! generate the sublattice the elementary moves see directly:
//! `w1 = zeta^2 - zeta^3` and `w2 = 5 (1 - zeta^2 - zeta^3 + zeta^4)`.
//! Smith normal form of their coordinate matrix identifies the quotient.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

use super::cyclo::Cyclo;
use super::pentagon::TransversalPoint;
use super::q5::Q5;

pub fn w1() -> Cyclo {
    Cyclo::from_coords(&[0, 0, 1, -1, 0])
}

pub fn w2() -> Cyclo {
    Cyclo::from_coords(&[5, 0, -5, -5, 5])
}

/// Coordinates of a zero-sum tuple in the `b_j` basis: partial sums.
pub fn b_coords(n: &[i64; 5]) -> Result<[i64; 4]> {
    if n.iter().sum::<i64>() != 0 {
        return Err(CoreError::NotInP(format!("{n:?} is not zero-sum")));
    }
    let mut acc = 0i64;
    let mut out = [0i64; 4];
    for j in 0..4 {
        acc += n[j];
        out[j] = acc;
    }
    Ok(out)
}

/// Invariant factors (each dividing the next, zeros dropped) of an integer
/// matrix, by the classical pivot-and-reduce elimination.
pub fn smith_normal_form(mat: &[Vec<i64>]) -> Vec<i64> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = mat
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged matrix");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    let mut factors = Vec::new();
    let mut t = 0usize;
    'outer: while t < rows && t < cols {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let p = a[t][t];
        let mut dirty = false;
        for i in t + 1..rows {
            let q = a[i][t] / p;
            if q != 0 {
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
            }
            dirty |= a[i][t] != 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / p;
            if q != 0 {
                for i in t..rows {
                    a[i][j] -= q * a[i][t];
                }
            }
            dirty |= a[t][j] != 0;
        }
        if dirty {
            // leftover remainders are strictly smaller than the pivot was;
            // rescanning shrinks the pivot, so this terminates
            continue 'outer;
        }
        for i in t + 1..rows {
            for j in t + 1..cols {
                if a[i][j] % p != 0 {
                    for jj in t..cols {
                        a[t][jj] += a[i][jj];
                    }
                    continue 'outer;
                }
            }
        }
        factors.push(p.unsigned_abs() as i64);
        t += 1;
    }
    factors
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct QuotientReport {
    pub invariant_factors: Vec<i64>,
    pub free_rank: usize,
    pub description: String,
}

/// The quotient of P by the sublattice generated by `w1` and `w2`.
pub fn snf_quotient() -> QuotientReport {
    let c1 = b_coords(&[0, 0, 1, -1, 0]).expect("w1 is in P");
    let c2 = b_coords(&[5, 0, -5, -5, 5]).expect("w2 is in P");
    let mat: Vec<Vec<i64>> = (0..4).map(|i| vec![c1[i], c2[i]]).collect();
    let invariant_factors = smith_normal_form(&mat);
    let free_rank = 4 - invariant_factors.len();
    let mut parts: Vec<String> = Vec::new();
    if free_rank > 0 {
        parts.push(format!("Z^{free_rank}"));
    }
    for d in invariant_factors.iter().filter(|&&d| d > 1) {
        parts.push(format!("Z/{d}"));
    }
    if parts.is_empty() {
        parts.push("0".into());
    }
    QuotientReport { invariant_factors, free_rank, description: parts.join(" (+) ") }
}

/// Exact coordinates of a plane point in the real frame `(w1, w2)`.
pub fn frame_coords(xi: &Cyclo) -> (Q5, Q5) {
    let (x1, y1) = w1().re_im();
    let (x2, y2) = w2().re_im();
    let (x, y) = xi.re_im();
    let det = &(&x1 * &y2) - &(&x2 * &y1);
    debug_assert!(det.sign() != 0, "w1, w2 span the plane");
    let u = &(&(&x * &y2) - &(&y * &x2)) / &det;
    let v = &(&(&x1 * &y) - &(&y1 * &x)) / &det;
    (u, v)
}

/// Translates the parameter into the fundamental parallelogram of the
/// sublattice `Z w1 + Z w2`: same point modulo the sublattice, frame
/// coordinates in `[0, 1)`. Sheet and tags pass through untouched (lattice
/// translations preserve every grid direction and side).
pub fn fundamental_reduce(p: &TransversalPoint) -> TransversalPoint {
    use num::BigRational;
    let (u, v) = frame_coords(&p.xi);
    let fu = BigRational::from_integer(u.floor_big());
    let fv = BigRational::from_integer(v.floor_big());
    let shift = w1().scale(&fu).add(&w2().scale(&fv));
    TransversalPoint::with_tags(p.sheet, p.xi.sub(&shift), p.tags.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gcd(a: i64, b: i64) -> i64 {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }

    #[test]
    fn quotient_is_z2_plus_z5() {
        let q = snf_quotient();
        assert_eq!(q.invariant_factors, vec![1, 5]);
        assert_eq!(q.free_rank, 2);
        assert_eq!(q.description, "Z^2 (+) Z/5");
    }

    #[test]
    fn factors_cross_checked_by_gcds_and_counting() {
        let c1 = b_coords(&[0, 0, 1, -1, 0]).unwrap();
        let c2 = b_coords(&[5, 0, -5, -5, 5]).unwrap();
        assert_eq!(c1, [0, 0, 1, 0]);
        assert_eq!(c2, [5, 5, 0, -5]);

        // d1 = gcd of entries, d1*d2 = gcd of 2x2 minors: no elimination used
        let mut g1 = 0;
        for i in 0..4 {
            g1 = gcd(g1, gcd(c1[i], c2[i]));
        }
        assert_eq!(g1, 1);
        let mut g2 = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                g2 = gcd(g2, c1[i] * c2[j] - c1[j] * c2[i]);
            }
        }
        assert_eq!(g2, 5);

        // third opinion: image size of (Z/25)^2 in (Z/25)^4 is 25 * 5
        let mut seen = std::collections::HashSet::new();
        for a in 0..25i64 {
            for b in 0..25i64 {
                let img: Vec<i64> =
                    (0..4).map(|i| (a * c1[i] + b * c2[i]).rem_euclid(25)).collect();
                seen.insert(img);
            }
        }
        assert_eq!(seen.len(), 125);
    }

    #[test]
    fn snf_matches_determinants_on_random_square_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let m: Vec<Vec<i64>> =
                (0..3).map(|_| (0..3).map(|_| rng.gen_range(-6..=6)).collect()).collect();
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            let f = smith_normal_form(&m);
            for w in f.windows(2) {
                assert_eq!(w[1] % w[0], 0, "factors must form a chain in {m:?}");
            }
            if f.len() == 3 {
                assert_eq!(f.iter().product::<i64>(), det.abs(), "matrix {m:?}");
            } else {
                assert_eq!(det, 0, "matrix {m:?}");
            }
        }
    }

    #[test]
    fn reduction_is_idempotent_and_lattice_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let p = crate::penrose::element::sample_transversal(&mut rng);
            let r = fundamental_reduce(&p);
            assert_eq!(r.sheet, p.sheet);
            let (u, v) = frame_coords(&r.xi);
            assert!(u.sign() >= 0 && (&u - &Q5::one()).sign() < 0);
            assert!(v.sign() >= 0 && (&v - &Q5::one()).sign() < 0);
            assert_eq!(fundamental_reduce(&r), r);

            let a = rng.gen_range(-3..=3i64);
            let b = rng.gen_range(-3..=3i64);
            let scale = |c: &Cyclo, n: i64| c.scale(&num::BigRational::from_integer(BigInt::from(n)));
            let moved = TransversalPoint::with_tags(
                p.sheet,
                p.xi.add(&scale(&w1(), a)).add(&scale(&w2(), b)),
                p.tags.clone(),
            );
            assert_eq!(fundamental_reduce(&moved), r);
        }
    }
}
