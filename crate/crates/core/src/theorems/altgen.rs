//! Factoring 3-cycles of words over `{a,b,c}^d` into the one-position family.
//!
//! `B_d` is the family of 3-cycles `(XaY XbY XcY)` that rotate one letter of a
//! word while the context `(X, Y)` stays fixed; there are `d * 3^(d-1)` of
//! them. `factor_three_cycle` writes an arbitrary 3-cycle of words as a word
//! over `B_d`, by mapping onto a 3x3 grid of padded prefixes and running the
//! nine-point engine; column cycles of the grid recurse one level down.
//!
//! Every factorization is re-verified by composing permutations of `3^d`
//! points before being returned, so an `Ok` is a certificate.

use crate::error::{CoreError, Result};
use crate::theorems::perm::{consecutive_cycle_factorize, Perm};

/// One-position rotation: context is the other `d-1` digits, `pos` the
/// rotated position. Digits are 0,1,2 for a,b,c.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BLetter {
    pub pos: usize,
    pub context: Vec<u8>,
}

impl BLetter {
    /// Word length this letter acts on.
    pub fn d(&self) -> usize {
        self.context.len() + 1
    }

    /// The three words `XaY, XbY, XcY` as digit vectors.
    pub fn words(&self) -> [Vec<u8>; 3] {
        std::array::from_fn(|digit| {
            let mut w = Vec::with_capacity(self.d());
            w.extend_from_slice(&self.context[..self.pos]);
            w.push(digit as u8);
            w.extend_from_slice(&self.context[self.pos..]);
            w
        })
    }

    /// Human-readable label: the context with `*` at the rotated position.
    pub fn label(&self) -> String {
        let mut s = String::with_capacity(self.d());
        for &c in &self.context[..self.pos] {
            s.push((b'a' + c) as char);
        }
        s.push('*');
        for &c in &self.context[self.pos..] {
            s.push((b'a' + c) as char);
        }
        s
    }

    /// As a permutation of all `3^d` words in lexicographic order.
    pub fn as_perm(&self) -> Perm {
        let d = self.d();
        let n = 3usize.pow(d as u32);
        let ws = self.words();
        let idx: Vec<usize> = ws.iter().map(|w| word_index(w)).collect();
        let mut map: Vec<usize> = (0..n).collect();
        map[idx[0]] = idx[1];
        map[idx[1]] = idx[2];
        map[idx[2]] = idx[0];
        Perm { map }
    }
}

/// Lexicographic index of a digit word (leftmost digit most significant).
pub fn word_index(w: &[u8]) -> usize {
    w.iter().fold(0usize, |acc, &c| acc * 3 + c as usize)
}

/// Inverse of [`word_index`].
pub fn index_word(mut i: usize, d: usize) -> Vec<u8> {
    let mut w = vec![0u8; d];
    for k in (0..d).rev() {
        w[k] = (i % 3) as u8;
        i /= 3;
    }
    w
}

/// The whole family `B_d`, positions outer, contexts lexicographic inner.
pub fn b_family(d: usize) -> Vec<BLetter> {
    let mut out = Vec::new();
    for pos in 0..d {
        for ci in 0..3usize.pow((d - 1) as u32) {
            out.push(BLetter {
                pos,
                context: index_word(ci, d - 1),
            });
        }
    }
    out
}

// Expansion of the consecutive cycle g_m on the 3x3 grid into row cycles
// (vary last letter, prefix fixed) and column cycles (vary prefix, last
// letter fixed). Verified against permutation composition in tests and,
// indirectly, by the final verification of every factorization.
#[derive(Clone, Copy)]
enum GridLetter {
    Row(usize),
    Col(u8),
}

const GRID_TABLE: [&[(GridLetter, i8)]; 7] = [
    &[(GridLetter::Row(0), 1)],
    &[
        (GridLetter::Col(0), 1),
        (GridLetter::Row(0), 1),
        (GridLetter::Col(0), -1),
    ],
    &[
        (GridLetter::Col(2), -1),
        (GridLetter::Row(1), 1),
        (GridLetter::Col(2), 1),
    ],
    &[(GridLetter::Row(1), 1)],
    &[
        (GridLetter::Col(0), 1),
        (GridLetter::Row(1), 1),
        (GridLetter::Col(0), -1),
    ],
    &[
        (GridLetter::Col(2), -1),
        (GridLetter::Row(2), 1),
        (GridLetter::Col(2), 1),
    ],
    &[(GridLetter::Row(2), 1)],
];

/// Evaluate a `B_d` word left-to-right (rightmost letter acts first).
pub fn eval_b_word(d: usize, word: &[(BLetter, i8)]) -> Perm {
    let n = 3usize.pow(d as u32);
    let mut acc = Perm::identity(n);
    for (letter, e) in word {
        let p = letter.as_perm();
        let p = if *e >= 0 { p } else { p.inverse() };
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&p);
        }
    }
    acc
}

/// Factor the 3-cycle `(u v w)` of words over `B_d`.
pub fn factor_three_cycle(d: usize, u: &[u8], v: &[u8], w: &[u8]) -> Result<Vec<(BLetter, i8)>> {
    for x in [u, v, w] {
        if x.len() != d || x.iter().any(|&c| c > 2) {
            return Err(CoreError::BadInput("bad word".into()));
        }
    }
    if u == v || v == w || u == w {
        return Err(CoreError::BadInput("three-cycle needs distinct words".into()));
    }
    let word = factor_rec(d, u, v, w)?;
    let target = Perm::three_cycle(
        3usize.pow(d as u32),
        word_index(u),
        word_index(v),
        word_index(w),
    )?;
    if eval_b_word(d, &word) != target {
        return Err(CoreError::VerificationFailed(
            "one-position factorization does not recompose".into(),
        ));
    }
    Ok(word)
}

fn factor_rec(d: usize, u: &[u8], v: &[u8], w: &[u8]) -> Result<Vec<(BLetter, i8)>> {
    if d == 1 {
        // (a b c) rotations get +1, the rest -1
        let e = if (u[0] + 1) % 3 == v[0] { 1 } else { -1 };
        return Ok(vec![(
            BLetter {
                pos: 0,
                context: vec![],
            },
            e,
        )]);
    }
    // rows: three distinct prefixes, padded with the smallest unused ones
    let mut rows: Vec<Vec<u8>> = vec![u[..d - 1].to_vec(), v[..d - 1].to_vec(), w[..d - 1].to_vec()];
    rows.sort();
    rows.dedup();
    let mut pad = 0usize;
    while rows.len() < 3 {
        let cand = index_word(pad, d - 1);
        if !rows.contains(&cand) {
            rows.push(cand);
        }
        pad += 1;
    }
    rows.sort();
    let grid_index = |x: &[u8]| -> usize {
        let row = rows
            .iter()
            .position(|r| r[..] == x[..d - 1])
            .expect("prefix is one of the rows");
        3 * row + x[d - 1] as usize
    };
    let base = consecutive_cycle_factorize(9, (grid_index(u), grid_index(v), grid_index(w)))?;
    // the column cycle is the prefix rotation (rows[0] rows[1] rows[2]),
    // factored once one level down and lifted by appending the column letter
    let mut col_word: Option<Vec<(BLetter, i8)>> = None;
    let mut need_cols = false;
    for &(m, _) in &base {
        if GRID_TABLE[m]
            .iter()
            .any(|(l, _)| matches!(l, GridLetter::Col(_)))
        {
            need_cols = true;
        }
    }
    if need_cols {
        col_word = Some(factor_rec(d - 1, &rows[0], &rows[1], &rows[2])?);
    }
    let mut out: Vec<(BLetter, i8)> = Vec::new();
    let emit = |letter: GridLetter, e: i8, out: &mut Vec<(BLetter, i8)>| match letter {
        GridLetter::Row(i) => out.push((
            BLetter {
                pos: d - 1,
                context: rows[i].clone(),
            },
            e,
        )),
        GridLetter::Col(y) => {
            let wrd = col_word.as_ref().expect("column word precomputed");
            let lift = |l: &BLetter| BLetter {
                pos: l.pos,
                context: {
                    let mut c = l.context.clone();
                    c.push(y);
                    c
                },
            };
            if e >= 0 {
                for (l, le) in wrd {
                    out.push((lift(l), *le));
                }
            } else {
                for (l, le) in wrd.iter().rev() {
                    out.push((lift(l), -*le));
                }
            }
        }
    };
    for &(m, e) in &base {
        let entries = GRID_TABLE[m];
        if e >= 0 {
            for &(l, le) in entries {
                emit(l, le, &mut out);
            }
        } else {
            for &(l, le) in entries.iter().rev() {
                emit(l, -le, &mut out);
            }
        }
    }
    Ok(out)
}

/// Size of the subgroup of permutations of `3^d` words generated by `B_d`,
/// by breadth-first closure. Errors with `ResourceCap` past `cap` elements.
pub fn altgen_closure(d: usize, cap: usize) -> Result<usize> {
    let gens: Vec<Perm> = b_family(d)
        .iter()
        .flat_map(|l| {
            let p = l.as_perm();
            let q = p.inverse();
            [p, q]
        })
        .collect();
    let n = 3usize.pow(d as u32);
    let mut seen = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    let id = Perm::identity(n);
    seen.insert(id.map.clone());
    queue.push_back(id);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q = g.compose(&p);
            if seen.insert(q.map.clone()) {
                if seen.len() > cap {
                    return Err(CoreError::ResourceCap(format!(
                        "closure exceeds cap {cap}"
                    )));
                }
                queue.push_back(q);
            }
        }
    }
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn wd(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'a').collect()
    }

    #[test]
    fn b_family_shape_and_labels() {
        let f = b_family(2);
        assert_eq!(f.len(), 6);
        let labels: Vec<String> = f.iter().map(|l| l.label()).collect();
        assert_eq!(labels, vec!["*a", "*b", "*c", "a*", "b*", "c*"]);
        assert_eq!(b_family(3).len(), 27);
        // the rotation (aa ba ca) fixes everything outside its column
        let l = &f[0]; // "*a"
        let p = l.as_perm();
        assert_eq!(p.apply(word_index(&wd("aa"))), word_index(&wd("ba")));
        assert_eq!(p.apply(word_index(&wd("ab"))), word_index(&wd("ab")));
    }

    #[test]
    fn grid_table_rows_verified_by_composition() {
        // every g_m on the 9 grid points equals its tabulated expansion,
        // with rows/columns read as one-position cycles of two-letter words
        for m in 0..7usize {
            let gm = Perm::three_cycle(9, m, m + 1, m + 2).unwrap();
            let word: Vec<(BLetter, i8)> = GRID_TABLE[m]
                .iter()
                .map(|&(l, e)| {
                    let letter = match l {
                        GridLetter::Row(i) => BLetter {
                            pos: 1,
                            context: vec![i as u8],
                        },
                        GridLetter::Col(y) => BLetter {
                            pos: 0,
                            context: vec![y],
                        },
                    };
                    (letter, e)
                })
                .collect();
            assert_eq!(eval_b_word(2, &word), gm, "table row {m}");
        }
    }

    #[test]
    fn factor_pins() {
        // (ab ac ba) maps to g_1 on the grid and expands through the table
        let w = factor_three_cycle(2, &wd("ab"), &wd("ac"), &wd("ba")).unwrap();
        let labels: Vec<(String, i8)> = w.iter().map(|(l, e)| (l.label(), *e)).collect();
        assert_eq!(
            labels,
            vec![
                ("*a".to_string(), 1),
                ("a*".to_string(), 1),
                ("*a".to_string(), -1)
            ]
        );
        // a same-prefix cycle is a single letter
        let w = factor_three_cycle(2, &wd("ba"), &wd("bb"), &wd("bc")).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].0.label(), "b*");
        assert_eq!(w[0].1, 1);
        // and its inverse orientation flips the exponent
        let w = factor_three_cycle(2, &wd("ba"), &wd("bc"), &wd("bb")).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].1, -1);
    }

    #[test]
    fn factor_random_d2_d3() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for d in [2usize, 3] {
            let n = 3usize.pow(d as u32);
            let mut idx: Vec<usize> = (0..n).collect();
            for _ in 0..50 {
                idx.shuffle(&mut rng);
                let (u, v, w) = (
                    index_word(idx[0], d),
                    index_word(idx[1], d),
                    index_word(idx[2], d),
                );
                // self-verifying; Ok is the assertion
                let word = factor_three_cycle(d, &u, &v, &w).unwrap();
                assert!(!word.is_empty());
                assert!(word.iter().all(|(l, _)| l.d() == d));
            }
        }
    }

    #[test]
    fn factor_spot_d4() {
        let w = factor_three_cycle(4, &wd("abca"), &wd("ccab"), &wd("baaa")).unwrap();
        assert!(w.iter().all(|(l, _)| l.d() == 4));
        let w = factor_three_cycle(4, &wd("aaaa"), &wd("aaab"), &wd("aaac")).unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn closure_is_alternating_on_nine_points() {
        // |A_9| = 9!/2
        assert_eq!(altgen_closure(2, 200_000).unwrap(), 181_440);
        assert!(matches!(
            altgen_closure(2, 1000),
            Err(CoreError::ResourceCap(_))
        ));
    }

    #[test]
    fn every_b_letter_is_even() {
        // 3-cycles are even permutations, so the closure stays alternating
        for l in b_family(2) {
            let p = l.as_perm();
            assert!(!p.is_identity());
            assert!(p.compose(&p).compose(&p).is_identity());
        }
    }
}
