//! Synthesis of radius-`R+1` generators as words over the radius-`R` family.
//!
//! The domain grows along the chain `D_0 = B(R)`,
//! `D_k = D_{k-1} u (D_{k-1} + h_k)` with directions `+e1, -e1, ..., -e_d`;
//! `D_{2d}` contains `B(R+1)`. A generator whose patch lives on `D_k` is one
//! double-commutator word in two generators on `D_{k-1}`: the patch splits
//! into its `D_{k-1}` window and the pulled-back `D_{k-1}+h_k` window, and the
//! five-cylinder identity stitches them back together. Which instance of the
//! identity applies depends on whether the growth direction is parallel to
//! the cycle axis.
//!
//! Nodes are memoized by `(level, patch, axis)` and shared across targets.
//! Every node is verified by composing its sixteen letters as piece tables
//! against the node's own three-cycle; the final product over the admissible
//! top-level extensions is verified against the target. Flat words are only
//! materialized on demand (they grow as `16^level`).

use crate::error::{CoreError, Result};
use crate::fullgroup::{compose, equals, inverse, make_three_cycle, PieceTable};
use crate::lattice::{
    axis_vec, ball_points, patch_shift, patches_conflict, vec_add, vec_neg, LatticeVector, Patch,
};
use crate::subshift::{compatible, SubshiftOracle};
use crate::theorems::generators::TRFamily;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct SynthNode {
    pub level: u8,
    pub patch: Patch,
    pub axis: usize,
    /// Sixteen `(node, exp)` letters for inner nodes, in evaluation order
    /// (rightmost acts first); empty for leaves.
    pub letters: Vec<(usize, i8)>,
    /// Index into the generating family for level-0 leaves.
    pub leaf: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub target: Patch,
    pub axis: usize,
    /// Node indices whose product (left to right) is the target element.
    pub roots: Vec<usize>,
    pub flat_len: u128,
}

pub struct Synthesizer<'a> {
    oracle: &'a dyn SubshiftOracle,
    pub family: &'a TRFamily,
    supports: Vec<Vec<LatticeVector>>,
    dirs: Vec<LatticeVector>,
    pub nodes: Vec<SynthNode>,
    memo: HashMap<(u8, Patch, usize), usize>,
    enum_cap: usize,
}

// the double commutator [[b^-1,a^-1],[b,a]] spelled out:
// (a b a' b') (a' b' a b) (b a b' a') (b' a' b a), rightmost letter first
const TEMPLATE: [(u8, i8); 16] = [
    (0, 1),
    (1, 1),
    (0, -1),
    (1, -1),
    (0, -1),
    (1, -1),
    (0, 1),
    (1, 1),
    (1, 1),
    (0, 1),
    (1, -1),
    (0, -1),
    (1, -1),
    (0, -1),
    (1, 1),
    (0, 1),
];

fn axis_of(v: &LatticeVector) -> usize {
    v.iter().position(|&x| x != 0).expect("unit vector")
}

impl<'a> Synthesizer<'a> {
    pub fn new(
        oracle: &'a dyn SubshiftOracle,
        family: &'a TRFamily,
        enum_cap: usize,
    ) -> Result<Self> {
        let d = oracle.dim();
        if d < 2 {
            return Err(CoreError::BadDimension(
                "synthesis needs a second axis; d >= 2 required".into(),
            ));
        }
        let mut dirs = Vec::with_capacity(2 * d);
        for j in 0..d {
            dirs.push(axis_vec(d, j, 1));
            dirs.push(axis_vec(d, j, -1));
        }
        let mut supports = vec![ball_points(d, family.r)];
        for h in &dirs {
            let prev = supports.last().expect("nonempty");
            let mut next = prev.clone();
            next.extend(prev.iter().map(|p| vec_add(p, h)));
            next.sort();
            next.dedup();
            supports.push(next);
        }
        Ok(Synthesizer {
            oracle,
            family,
            supports,
            dirs,
            nodes: Vec::new(),
            memo: HashMap::new(),
            enum_cap,
        })
    }

    pub fn top_level(&self) -> u8 {
        self.dirs.len() as u8
    }

    /// The canonical element of a node: `T_{patch,(0,e_axis,-e_axis)}`.
    pub fn node_table(&self, idx: usize) -> Result<PieceTable> {
        let n = &self.nodes[idx];
        let d = self.oracle.dim();
        let e = axis_vec(d, n.axis, 1);
        make_three_cycle(self.oracle, &n.patch, &[vec![0; d], e.clone(), vec_neg(&e)])
    }

    /// Number of flat letters under a node: `16^level`.
    pub fn flat_len_node(&self, idx: usize) -> u128 {
        16u128.pow(self.nodes[idx].level as u32)
    }

    /// Materialize the flat word over family indices, rightmost acting first.
    pub fn flatten_node(&self, idx: usize, cap: usize) -> Result<Vec<(usize, i8)>> {
        if self.flat_len_node(idx) > cap as u128 {
            return Err(CoreError::ResourceCap(format!(
                "flat word has {} letters, cap {}",
                self.flat_len_node(idx),
                cap
            )));
        }
        let mut out = Vec::new();
        self.flatten_into(idx, 1, &mut out);
        Ok(out)
    }

    fn flatten_into(&self, idx: usize, exp: i8, out: &mut Vec<(usize, i8)>) {
        let n = &self.nodes[idx];
        if let Some(leaf) = n.leaf {
            out.push((leaf, exp));
            return;
        }
        if exp >= 0 {
            for &(child, e) in &n.letters {
                self.flatten_into(child, e, out);
            }
        } else {
            for &(child, e) in n.letters.iter().rev() {
                self.flatten_into(child, -e, out);
            }
        }
    }

    /// Synthesize the target generator `T_{pi,(0,e_axis,-e_axis)}` with `pi`
    /// on `B(R+1)`, as a verified product of top-level nodes.
    pub fn synthesize(&mut self, target: &Patch, axis: usize) -> Result<Synthesis> {
        let d = self.oracle.dim();
        let e = axis_vec(d, axis, 1);
        let target_table =
            make_three_cycle(self.oracle, target, &[vec![0; d], e.clone(), vec_neg(&e)])?;
        let top = self.top_level() as usize;
        let extensions: Vec<Patch> = self
            .oracle
            .enumerate_admissible(&self.supports[top].clone(), self.enum_cap)?
            .into_iter()
            .filter(|ext| !patches_conflict(ext, target))
            .collect();
        if extensions.is_empty() {
            return Err(CoreError::Precondition(
                "target patch has no admissible top-level extension".into(),
            ));
        }
        let mut roots = Vec::with_capacity(extensions.len());
        for ext in &extensions {
            roots.push(self.build_node(top as u8, ext.clone(), axis)?);
        }
        // the extensions partition the target cylinder, so the disjoint
        // factors must multiply back to the target
        let mut prod = PieceTable::identity(self.oracle);
        for &r in &roots {
            prod = compose(self.oracle, &prod, &self.node_table(r)?)?;
        }
        if !equals(self.oracle, &prod, &target_table)? {
            return Err(CoreError::VerificationFailed(
                "extension product does not recompose the target".into(),
            ));
        }
        let flat_len = roots
            .iter()
            .map(|&r| self.flat_len_node(r))
            .sum();
        Ok(Synthesis {
            target: target.clone(),
            axis,
            roots,
            flat_len,
        })
    }

    fn build_node(&mut self, level: u8, patch: Patch, axis: usize) -> Result<usize> {
        let key = (level, patch.clone(), axis);
        if let Some(&idx) = self.memo.get(&key) {
            return Ok(idx);
        }
        let idx = if level == 0 {
            let leaf = self.family.position_of(&patch, axis).ok_or_else(|| {
                CoreError::Precondition(format!(
                    "level-0 patch is not in the radius-{} family (axis {})",
                    self.family.r, axis
                ))
            })?;
            self.push_node(SynthNode {
                level,
                patch,
                axis,
                letters: Vec::new(),
                leaf: Some(leaf),
            })
        } else {
            let d = self.oracle.dim();
            let h = self.dirs[(level - 1) as usize].clone();
            let prev = self.supports[(level - 1) as usize].clone();
            let rho0 = patch.restrict(&prev);
            let rho_h = patch_shift(&patch, &vec_neg(&h)).restrict(&prev);
            let g = axis_vec(d, axis, 1);
            let (letters, invert) = if axis_of(&h) != axis {
                (self.case_parallel_free(level, &rho0, &rho_h, &g, &h)?, false)
            } else {
                // same axis: run the aligned case for the chain direction and
                // invert afterwards when it points against the target cycle
                let word = self.case_aligned(level, &rho0, &rho_h, &h)?;
                (word, h != g)
            };
            let letters = if invert {
                letters.iter().rev().map(|&(n, e)| (n, -e)).collect()
            } else {
                letters
            };
            let node = SynthNode {
                level,
                patch: patch.clone(),
                axis,
                letters,
                leaf: None,
            };
            let idx = self.push_node(node);
            self.verify_node(idx)?;
            idx
        };
        self.memo.insert(key, idx);
        Ok(idx)
    }

    fn push_node(&mut self, node: SynthNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Growth direction not parallel to the cycle axis: the identity applies
    /// with `a = T_{rho0,(0,g,-g)}` and `b` the three-cycle of the shifted
    /// window along `h`.
    fn case_parallel_free(
        &mut self,
        level: u8,
        rho0: &Patch,
        rho_h: &Patch,
        g: &LatticeVector,
        h: &LatticeVector,
    ) -> Result<Vec<(usize, i8)>> {
        let sigma = patch_shift(rho_h, h);
        let six = [
            rho0.clone(),
            patch_shift(rho0, g),
            patch_shift(rho0, &vec_neg(g)),
            sigma.clone(),
            patch_shift(rho_h, &vec_neg(h)),
            rho_h.clone(),
        ];
        self.check_hypothesis(level, &six)?;
        let eb = if h.iter().sum::<i64>() > 0 { 1 } else { -1 };
        let na = self.build_node(level - 1, rho0.clone(), axis_of(g))?;
        let nb = self.build_node(level - 1, rho_h.clone(), axis_of(h))?;
        Ok(assemble(na, 1, nb, eb))
    }

    /// Growth direction `u` parallel to the cycle axis: renormalize by `-u`
    /// so the shared cylinder sits at the `(0,u,2u)` position, and borrow the
    /// perpendicular axis for `b`.
    fn case_aligned(
        &mut self,
        level: u8,
        rho0: &Patch,
        rho_u: &Patch,
        u: &LatticeVector,
    ) -> Result<Vec<(usize, i8)>> {
        let d = self.oracle.dim();
        let j = axis_of(u);
        let m = (j + 1) % d; // any other axis works; fixed for determinism
        let hp = axis_vec(d, m, 1);
        let six = [
            patch_shift(rho0, &vec_neg(u)),
            rho0.clone(),
            patch_shift(rho0, u),
            rho_u.clone(),
            patch_shift(rho_u, &hp),
            patch_shift(rho_u, &vec_neg(&hp)),
        ];
        self.check_hypothesis(level, &six)?;
        let ea = if u.iter().sum::<i64>() > 0 { 1 } else { -1 };
        let na = self.build_node(level - 1, rho0.clone(), j)?;
        let nb = self.build_node(level - 1, rho_u.clone(), m)?;
        Ok(assemble(na, ea, nb, 1))
    }

    fn check_hypothesis(&self, level: u8, six: &[Patch; 6]) -> Result<()> {
        let names = ["pi1", "pi1+g1", "pi1+g2", "pi2", "pi2+h1", "pi2+h2"];
        for i in 0..6 {
            for j in (i + 1)..6 {
                if i == 0 && j == 3 {
                    continue;
                }
                if compatible(self.oracle, &six[i], &six[j])? {
                    return Err(CoreError::HypothesisViolation(format!(
                        "level {level}: {} and {} intersect",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Compose the sixteen letters as piece tables and compare with the
    /// node's own three-cycle.
    fn verify_node(&self, idx: usize) -> Result<()> {
        let target = self.node_table(idx)?;
        let mut acc = PieceTable::identity(self.oracle);
        for &(child, e) in &self.nodes[idx].letters {
            let t = self.node_table(child)?;
            let t = if e >= 0 { t } else { inverse(&t) };
            acc = compose(self.oracle, &acc, &t)?;
        }
        if !equals(self.oracle, &acc, &target)? {
            return Err(CoreError::VerificationFailed(format!(
                "node at level {} does not satisfy its double-commutator identity",
                self.nodes[idx].level
            )));
        }
        Ok(())
    }
}

fn assemble(na: usize, ea: i8, nb: usize, eb: i8) -> Vec<(usize, i8)> {
    TEMPLATE
        .iter()
        .map(|&(which, e)| {
            if which == 0 {
                (na, e * ea)
            } else {
                (nb, e * eb)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fullgroup::evaluate_word;
    use crate::fullgroup::WordLetter;
    use crate::subshift::{Alphabet, ChairBackend, FullShift};
    use crate::theorems::generators::{enumerate_t_r, generator_table};
    use crate::theorems::incompat::CHAIR_R1;

    #[test]
    fn chair_synthesis_at_r1_verifies() {
        let o = ChairBackend::new(None);
        let family = enumerate_t_r(&o, CHAIR_R1, 1_000_000).unwrap();
        let targets = enumerate_t_r(&o, CHAIR_R1 + 1, 1_000_000).unwrap();
        assert!(targets.skipped.is_empty());
        let mut sy = Synthesizer::new(&o, &family, 1_000_000).unwrap();
        let mut done = 0;
        for (pi, axis) in targets.generators.iter() {
            if done == 3 {
                break;
            }
            let s = sy.synthesize(pi, *axis).unwrap();
            assert!(!s.roots.is_empty());
            assert_eq!(s.flat_len, s.roots.len() as u128 * 65536);
            done += 1;
        }
        assert_eq!(done, 3);
        // nodes are shared across targets
        assert!(sy.nodes.len() < 3 * 31);
    }

    #[test]
    fn flat_words_recompose_at_low_levels() {
        let o = ChairBackend::new(None);
        let family = enumerate_t_r(&o, CHAIR_R1, 1_000_000).unwrap();
        let targets = enumerate_t_r(&o, CHAIR_R1 + 1, 1_000_000).unwrap();
        let mut sy = Synthesizer::new(&o, &family, 1_000_000).unwrap();
        let (pi, axis) = &targets.generators[0];
        let s = sy.synthesize(pi, *axis).unwrap();
        // walk down to a level-1 and a level-2 node and check the flat word
        // against the node element, evaluated letter by letter
        let mut level1 = None;
        let mut level2 = None;
        for (i, n) in sy.nodes.iter().enumerate() {
            if n.level == 1 && level1.is_none() {
                level1 = Some(i);
            }
            if n.level == 2 && level2.is_none() {
                level2 = Some(i);
            }
        }
        let _ = s;
        for (idx, expect_len) in [(level1.unwrap(), 16u128), (level2.unwrap(), 256u128)] {
            assert_eq!(sy.flat_len_node(idx), expect_len);
            let flat = sy.flatten_node(idx, 300).unwrap();
            let word: Vec<WordLetter> = flat
                .iter()
                .map(|&(gi, e)| WordLetter::new(format!("g{gi}"), e as i64))
                .collect();
            let resolve = |label: &str| {
                let gi: usize = label[1..].parse().unwrap();
                let (p, a) = &sy.family.generators[gi];
                generator_table(&o, p, *a)
            };
            let evaluated = evaluate_word(&o, &word, &resolve).unwrap();
            assert!(equals(&o, &evaluated, &sy.node_table(idx).unwrap()).unwrap());
        }
        // flat materialization respects the cap
        let root = s.roots[0];
        assert!(matches!(
            sy.flatten_node(root, 1000),
            Err(CoreError::ResourceCap(_))
        ));
    }

    #[test]
    fn full_shift_synthesis_fails_cleanly() {
        // no incompatibility radius, so the hypothesis (or the leaf lookup)
        // must fail rather than produce an unverified word
        let o = FullShift::new(2, Alphabet::new(vec!["a".into(), "b".into()]).unwrap()).unwrap();
        let family = enumerate_t_r(&o, 1, 100_000).unwrap();
        let mut sy = Synthesizer::new(&o, &family, 100_000).unwrap();
        let pi = Patch::new(
            2,
            ball_points(2, 2)
                .into_iter()
                .map(|p| {
                    let origin = p.iter().all(|&x| x == 0);
                    (p, u8::from(origin))
                })
                .collect(),
        )
        .unwrap();
        assert!(sy.synthesize(&pi, 0).is_err());
    }

    #[test]
    fn d1_is_rejected() {
        let o = FullShift::new(1, Alphabet::new(vec!["a".into(), "b".into()]).unwrap()).unwrap();
        let family = enumerate_t_r(&o, 1, 1000).unwrap();
        assert!(matches!(
            Synthesizer::new(&o, &family, 1000),
            Err(CoreError::BadDimension(_))
        ));
    }
}
