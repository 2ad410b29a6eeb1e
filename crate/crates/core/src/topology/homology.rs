//! Mod-2 intersection numbers against a tree–cotree dual cycle basis.
//!
//! A closed walk is null-homologous over Z2 exactly when it crosses every
//! dual basis cycle an even number of times. This is used only as a fast
//! filter in the width computations: a nonzero class certifies a
//! noncontractible cycle on any surface, and on the torus a zero class
//! certifies a contractible one. All other cases fall back to the
//! cut-and-Euler test.

use std::collections::VecDeque;

use crate::embedding::RotationEmbedding;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct DualCycleBasis {
    /// Bit `i` of `mask[e]` is set when edge `e` crosses dual cycle `i`.
    mask: Vec<u64>,
    rank: usize,
}

impl DualCycleBasis {
    pub fn new(emb: &RotationEmbedding) -> Result<Self> {
        let genus = emb.genus()?;
        if 2 * genus > 64 {
            return Err(Error::InvalidArgument(format!("genus {genus} exceeds the 32 handled by the Z2 filter")));
        }
        let ne = emb.num_edges();
        let mut in_tree = vec![false; ne];
        let mut seen = vec![false; emb.n()];
        if emb.n() > 0 {
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(u) = queue.pop_front() {
                for d in emb.darts_at(u) {
                    let v = emb.head(d);
                    if !seen[v] {
                        seen[v] = true;
                        in_tree[emb.edge_of(d)] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        // Spanning tree of the dual restricted to non-tree edges.
        let nf = emb.num_faces();
        let mut parent_face = vec![usize::MAX; nf];
        let mut parent_edge = vec![usize::MAX; nf];
        let mut depth = vec![0usize; nf];
        let mut in_cotree = vec![false; ne];
        let mut fseen = vec![false; nf];
        if nf > 0 {
            fseen[0] = true;
            let mut queue = VecDeque::from([0usize]);
            while let Some(f) = queue.pop_front() {
                for &d in emb.face_darts(f) {
                    let e = emb.edge_of(d);
                    if in_tree[e] {
                        continue;
                    }
                    let g = emb.face_of(emb.twin(d));
                    if !fseen[g] {
                        fseen[g] = true;
                        in_cotree[e] = true;
                        parent_face[g] = f;
                        parent_edge[g] = e;
                        depth[g] = depth[f] + 1;
                        queue.push_back(g);
                    }
                }
            }
        }
        let leftover: Vec<usize> = (0..ne).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
        if leftover.len() != 2 * genus {
            return Err(Error::Inconsistent(format!(
                "tree-cotree left {} edges, expected {}",
                leftover.len(),
                2 * genus
            )));
        }
        let mut mask = vec![0u64; ne];
        for (i, &x) in leftover.iter().enumerate() {
            let bit = 1u64 << i;
            mask[x] ^= bit;
            let d = emb.edge_dart(x);
            let (mut a, mut b) = (emb.face_of(d), emb.face_of(emb.twin(d)));
            while a != b {
                if depth[a] >= depth[b] {
                    mask[parent_edge[a]] ^= bit;
                    a = parent_face[a];
                } else {
                    mask[parent_edge[b]] ^= bit;
                    b = parent_face[b];
                }
            }
        }
        Ok(DualCycleBasis { mask, rank: leftover.len() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn edge_mask(&self, e: usize) -> u64 {
        self.mask[e]
    }

    /// Class of an edge multiset (closed walk) as a bit vector.
    pub fn class_of(&self, edges: impl IntoIterator<Item = usize>) -> u64 {
        edges.into_iter().fold(0, |acc, e| acc ^ self.mask[e])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::samples;

    #[test]
    fn rank_is_twice_genus() {
        assert_eq!(DualCycleBasis::new(&samples::k7_torus()).unwrap().rank(), 2);
        assert_eq!(DualCycleBasis::new(&samples::wheel(5)).unwrap().rank(), 0);
    }

    #[test]
    fn face_boundaries_are_trivial() {
        let k7 = samples::k7_torus();
        let h = DualCycleBasis::new(&k7).unwrap();
        for f in k7.faces() {
            assert_eq!(h.class_of(f.iter().map(|&d| k7.edge_of(d))), 0);
        }
    }
}
