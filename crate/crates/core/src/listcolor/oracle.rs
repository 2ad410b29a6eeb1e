//! Exact extension oracle: backtracking with minimum-remaining-values
//! ordering and forward checking.
//!
//! Vertex choice is deterministic: fewest remaining colors first, then
//! higher degree, then lowest index. Connected components of the uncolored
//! part are solved independently (counts multiply).

use std::ops::ControlFlow;

use crate::colorset::{Color, ColorSet};
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::{ListAssignment, PartialColoring};

/// Default cap on the number of uncolored vertices in one component.
pub const DEFAULT_MAX_FREE: usize = 64;

/// The brute-force ground truth. `max_free` bounds the size of every
/// uncolored component the oracle agrees to search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    pub max_free: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { max_free: DEFAULT_MAX_FREE }
    }
}

struct Solver<'a> {
    g: &'a Graph,
    active: &'a [bool],
    dom: Vec<ColorSet>,
    color: Vec<Option<Color>>,
}

impl<'a> Solver<'a> {
    fn new(g: &'a Graph, lists: &ListAssignment, phi: &PartialColoring, active: &'a [bool]) -> Result<Self> {
        let n = g.n();
        if lists.len() != n || phi.n() != n || active.len() != n {
            return Err(Error::InvalidArgument("graph, lists, coloring and mask sizes differ".into()));
        }
        let mut dom = vec![ColorSet::EMPTY; n];
        let mut color = vec![None; n];
        for v in 0..n {
            if !active[v] {
                continue;
            }
            match phi.get(v) {
                Some(c) => {
                    for &w in g.neighbors(v) {
                        if active[w] && phi.get(w) == Some(c) {
                            return Err(Error::InvalidColoring(format!("edge {v}-{w} has both ends colored {c}")));
                        }
                    }
                    color[v] = Some(c);
                }
                None => {
                    let mut l = lists.get(v);
                    for &w in g.neighbors(v) {
                        if active[w] {
                            if let Some(c) = phi.get(w) {
                                l.remove(c);
                            }
                        }
                    }
                    dom[v] = l;
                }
            }
        }
        Ok(Solver { g, active, dom, color })
    }

    fn free_components(&self, max_free: usize) -> Result<Vec<Vec<usize>>> {
        let mask: Vec<bool> = (0..self.g.n()).map(|v| self.active[v] && self.color[v].is_none()).collect();
        let comps = self.g.components_of(&mask);
        if let Some(big) = comps.iter().map(Vec::len).max() {
            if big > max_free {
                return Err(Error::SizeGuard { limit: max_free, actual: big });
            }
        }
        Ok(comps)
    }

    fn pick(&self, comp: &[usize]) -> Option<usize> {
        comp.iter()
            .copied()
            .filter(|&v| self.color[v].is_none())
            .min_by_key(|&v| (self.dom[v].len(), std::cmp::Reverse(self.g.degree(v)), v))
    }

    /// Colors `c` at `v` and prunes neighbors; returns the pruned neighbors and
    /// whether every domain stayed nonempty.
    fn assign(&mut self, v: usize, c: Color) -> (Vec<usize>, bool) {
        self.color[v] = Some(c);
        let mut pruned = Vec::new();
        let mut ok = true;
        for &w in self.g.neighbors(v) {
            if self.active[w] && self.color[w].is_none() && self.dom[w].contains(c) {
                self.dom[w].remove(c);
                pruned.push(w);
                ok &= !self.dom[w].is_empty();
            }
        }
        (pruned, ok)
    }

    fn undo(&mut self, v: usize, c: Color, pruned: &[usize]) {
        self.color[v] = None;
        for &w in pruned {
            self.dom[w].insert(c);
        }
    }

    /// Finds one completion of `comp`; on success the coloring is left in place.
    fn find(&mut self, comp: &[usize]) -> bool {
        let Some(v) = self.pick(comp) else { return true };
        for c in self.dom[v] {
            let (pruned, ok) = self.assign(v, c);
            if ok && self.find(comp) {
                return true;
            }
            self.undo(v, c, &pruned);
        }
        false
    }

    fn count(&mut self, comp: &[usize]) -> u128 {
        let Some(v) = self.pick(comp) else { return 1 };
        let mut total: u128 = 0;
        for c in self.dom[v] {
            let (pruned, ok) = self.assign(v, c);
            if ok {
                total = total.saturating_add(self.count(comp));
            }
            self.undo(v, c, &pruned);
        }
        total
    }

    fn each(&mut self, comp: &[usize], f: &mut dyn FnMut(&[Option<Color>]) -> ControlFlow<()>) -> ControlFlow<()> {
        let Some(v) = self.pick(comp) else { return f(&self.color) };
        for c in self.dom[v] {
            let (pruned, ok) = self.assign(v, c);
            let flow = if ok { self.each(comp, f) } else { ControlFlow::Continue(()) };
            self.undo(v, c, &pruned);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

impl Oracle {
    pub fn new(max_free: usize) -> Self {
        Oracle { max_free }
    }

    /// A full `L`-coloring extending `φ`, if any.
    pub fn extend(&self, g: &Graph, lists: &ListAssignment, phi: &PartialColoring) -> Result<Option<PartialColoring>> {
        self.extend_within(g, lists, phi, &vec![true; g.n()])
    }

    pub fn is_extendable(&self, g: &Graph, lists: &ListAssignment, phi: &PartialColoring) -> Result<bool> {
        Ok(self.extend(g, lists, phi)?.is_some())
    }

    /// Like [`Oracle::extend`] on the subgraph induced by `active`: inactive
    /// vertices (colored or not) are treated as deleted. The returned coloring
    /// covers exactly the active vertices.
    pub fn extend_within(
        &self,
        g: &Graph,
        lists: &ListAssignment,
        phi: &PartialColoring,
        active: &[bool],
    ) -> Result<Option<PartialColoring>> {
        let mut s = Solver::new(g, lists, phi, active)?;
        for comp in s.free_components(self.max_free)? {
            if !s.find(&comp) {
                return Ok(None);
            }
        }
        let witness = PartialColoring::from_options(s.color);
        debug_assert!(witness.is_proper(g));
        Ok(Some(witness))
    }

    /// Number of full `L`-colorings extending `φ` (saturating).
    pub fn count(&self, g: &Graph, lists: &ListAssignment, phi: &PartialColoring) -> Result<u128> {
        self.count_within(g, lists, phi, &vec![true; g.n()])
    }

    pub fn count_within(
        &self,
        g: &Graph,
        lists: &ListAssignment,
        phi: &PartialColoring,
        active: &[bool],
    ) -> Result<u128> {
        let mut s = Solver::new(g, lists, phi, active)?;
        let mut total: u128 = 1;
        for comp in s.free_components(self.max_free)? {
            let c = s.count(&comp);
            if c == 0 {
                return Ok(0);
            }
            total = total.saturating_mul(c);
        }
        Ok(total)
    }

    /// Calls `f` on every completion of `φ` to the active vertices (colors of
    /// inactive vertices are `None`). Returns `false` if `f` stopped early.
    pub fn for_each_extension(
        &self,
        g: &Graph,
        lists: &ListAssignment,
        phi: &PartialColoring,
        active: &[bool],
        mut f: impl FnMut(&PartialColoring) -> ControlFlow<()>,
    ) -> Result<bool> {
        let mut s = Solver::new(g, lists, phi, active)?;
        let free: Vec<usize> = (0..g.n()).filter(|&v| active[v] && s.color[v].is_none()).collect();
        if free.len() > self.max_free {
            return Err(Error::SizeGuard { limit: self.max_free, actual: free.len() });
        }
        let mut scratch = PartialColoring::new(g.n());
        let flow = s.each(&free, &mut |colors| {
            scratch = PartialColoring::from_options(colors.to_vec());
            f(&scratch)
        });
        Ok(flow.is_continue())
    }

    /// All completions, collected.
    pub fn all_extensions(
        &self,
        g: &Graph,
        lists: &ListAssignment,
        phi: &PartialColoring,
        active: &[bool],
    ) -> Result<Vec<PartialColoring>> {
        let mut out = Vec::new();
        self.for_each_extension(g, lists, phi, active, |c| {
            out.push(c.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }
}

/// Plain exhaustive counter with no propagation, for cross-checking the oracle.
pub fn naive_count(g: &Graph, lists: &ListAssignment, phi: &PartialColoring) -> u128 {
    fn go(v: usize, g: &Graph, lists: &ListAssignment, col: &mut Vec<Option<Color>>) -> u128 {
        if v == g.n() {
            return 1;
        }
        if col[v].is_some() {
            return go(v + 1, g, lists, col);
        }
        let mut total = 0;
        for c in lists.get(v) {
            if g.neighbors(v).iter().all(|&w| col[w] != Some(c)) {
                col[v] = Some(c);
                total += go(v + 1, g, lists, col);
                col[v] = None;
            }
        }
        total
    }
    if !phi.is_proper(g) {
        return 0;
    }
    let mut col = phi.as_options().to_vec();
    go(0, g, lists, &mut col)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(v: &[Color]) -> ColorSet {
        v.iter().copied().collect()
    }

    #[test]
    fn k4_with_three_colors_fails() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let l = ListAssignment::uniform(4, cs(&[1, 2, 3]));
        let o = Oracle::default();
        assert!(o.extend(&g, &l, &PartialColoring::new(4)).unwrap().is_none());
        assert_eq!(o.count(&g, &l, &PartialColoring::new(4)).unwrap(), 0);
    }

    #[test]
    fn even_cycle_two_lists() {
        let edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let g = Graph::from_edges(6, &edges);
        let l = ListAssignment::uniform(6, cs(&[1, 2]));
        let o = Oracle::default();
        let phi = PartialColoring::new(6);
        let w = o.extend(&g, &l, &phi).unwrap().unwrap();
        assert!(w.is_full_coloring(&g, &l));
        assert_eq!(o.count(&g, &l, &phi).unwrap(), 2);
    }

    #[test]
    fn hub_over_rainbow_rim() {
        // C5 colored 1..5 and a hub adjacent to all five with list {1..5}.
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((0..5).map(|i| (i, 5)));
        let g = Graph::from_edges(6, &edges);
        let l = ListAssignment::uniform(6, cs(&[1, 2, 3, 4, 5]));
        let phi = PartialColoring::from_pairs(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
        assert!(!Oracle::default().is_extendable(&g, &l, &phi).unwrap());
    }

    #[test]
    fn counts_agree_with_naive_enumeration() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (0, 5)]);
        let l = ListAssignment::new(vec![
            cs(&[0, 1, 2]),
            cs(&[1, 2]),
            cs(&[0, 2, 3]),
            cs(&[0, 1, 2, 3]),
            cs(&[2, 3]),
            cs(&[1, 3]),
        ]);
        let o = Oracle::default();
        for pairs in [vec![], vec![(0, 1)], vec![(3, 0), (1, 2)]] {
            let phi = PartialColoring::from_pairs(6, &pairs);
            assert_eq!(o.count(&g, &l, &phi).unwrap(), naive_count(&g, &l, &phi));
            assert_eq!(o.all_extensions(&g, &l, &phi, &[true; 6]).unwrap().len() as u128, naive_count(&g, &l, &phi));
        }
    }

    #[test]
    fn size_guard_trips() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let l = ListAssignment::uniform(5, cs(&[1, 2]));
        let err = Oracle::new(3).extend(&g, &l, &PartialColoring::new(5)).unwrap_err();
        assert_eq!(err, Error::SizeGuard { limit: 3, actual: 5 });
    }

    #[test]
    fn improper_precoloring_rejected() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let l = ListAssignment::uniform(2, cs(&[1, 2]));
        let phi = PartialColoring::from_pairs(2, &[(0, 1), (1, 1)]);
        assert!(matches!(Oracle::default().extend(&g, &l, &phi), Err(Error::InvalidColoring(_))));
    }
}
