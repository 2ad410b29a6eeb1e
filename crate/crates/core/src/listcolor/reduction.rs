//! `L`-reductions, consistent families and `Red` sets.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;

use super::inert::{is_inert, InertVerdict};
use super::{union_colorings, Incompatibility, ListAssignment, Oracle, PartialColoring};

/// A verified `L`-reduction `(A, φ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCertificate {
    pub a: Vec<usize>,
    pub phi: PartialColoring,
    /// Every vertex of `D_1(A)` has a list of size at least five.
    pub complete: bool,
}

/// Why a pair is not an `L`-reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionRefutation {
    /// `φ` colors a vertex outside `A`.
    DomainOutside { v: usize },
    /// `φ` is not a proper `L`-coloring of its domain.
    NotAColoring { detail: String },
    /// `A` is not inert; `psi` is a blocking extension.
    NotInert { psi: PartialColoring, blocked: Vec<usize> },
    /// A boundary vertex with a 5-list keeps fewer than three colors.
    BoundaryList { v: usize, residual: usize },
    /// Completeness was required but a boundary vertex has a short list.
    Incomplete { v: usize },
}

/// Checks the three conditions of an `L`-reduction (plus completeness when
/// `complete_required`).
pub fn check_reduction(
    g: &Graph,
    lists: &ListAssignment,
    a: &[usize],
    phi: &PartialColoring,
    complete_required: bool,
    oracle: &Oracle,
) -> Result<std::result::Result<ReductionCertificate, ReductionRefutation>> {
    let mut in_a = vec![false; g.n()];
    for &v in a {
        in_a[v] = true;
    }
    if let Some(v) = phi.domain().into_iter().find(|&v| !in_a[v]) {
        return Ok(Err(ReductionRefutation::DomainOutside { v }));
    }
    if let Err(e) = phi.validate(g, lists) {
        return Ok(Err(ReductionRefutation::NotAColoring { detail: e.to_string() }));
    }
    let boundary = g.boundary_of_mask(&in_a);
    let mut complete = true;
    for &v in &boundary {
        let full = lists.get(v).len() >= 5;
        complete &= full;
        if complete_required && !full {
            return Ok(Err(ReductionRefutation::Incomplete { v }));
        }
        let r = lists.residual(g, phi, v).len();
        if full && r < 3 {
            return Ok(Err(ReductionRefutation::BoundaryList { v, residual: r }));
        }
    }
    match is_inert(g, lists, a, phi, oracle)? {
        InertVerdict::Inert => {}
        InertVerdict::Blocked { psi, blocked } => return Ok(Err(ReductionRefutation::NotInert { psi, blocked })),
    }
    let mut a_sorted = a.to_vec();
    a_sorted.sort_unstable();
    a_sorted.dedup();
    Ok(Ok(ReductionCertificate { a: a_sorted, phi: phi.clone(), complete }))
}

/// Outcome of a consistent-family check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyVerdict {
    Consistent { union: ReductionCertificate },
    /// Clause 1: the colorings do not combine.
    Incompatible { i: usize, j: usize, witness: Incompatibility },
    /// Clause 2: two uncolored cores at distance at most one.
    CoresTooClose { i: usize, j: usize },
    /// Clause 3: a boundary vertex sees colored vertices from two members only.
    MixedBoundary { x: usize },
    /// A member is not itself a reduction.
    Member { i: usize, refutation: ReductionRefutation },
}

/// Checks the three consistent-family clauses and, on success, returns the
/// union certified as a reduction.
pub fn check_consistent_family(
    g: &Graph,
    lists: &ListAssignment,
    family: &[(Vec<usize>, PartialColoring)],
    oracle: &Oracle,
) -> Result<FamilyVerdict> {
    let n = g.n();
    for (i, (s, phi)) in family.iter().enumerate() {
        if let Err(refutation) = check_reduction(g, lists, s, phi, false, oracle)? {
            return Ok(FamilyVerdict::Member { i, refutation });
        }
    }
    // Clause 1.
    let mut union = PartialColoring::new(n);
    for (j, (_, phi)) in family.iter().enumerate() {
        match union_colorings(g, &union, phi) {
            Ok(u) => union = u,
            Err(witness) => {
                let i = (0..j)
                    .find(|&i| union_colorings(g, &family[i].1, phi).is_err())
                    .unwrap_or(0);
                return Ok(FamilyVerdict::Incompatible { i, j, witness });
            }
        }
    }
    // Clause 2.
    let cores: Vec<Vec<usize>> =
        family.iter().map(|(s, phi)| s.iter().copied().filter(|&v| !phi.contains(v)).collect()).collect();
    for i in 0..family.len() {
        if cores[i].is_empty() {
            continue;
        }
        let dist = g.distances_from(&cores[i]);
        for j in i + 1..family.len() {
            if cores[j].iter().any(|&v| dist[v] <= 1) {
                return Ok(FamilyVerdict::CoresTooClose { i, j });
            }
        }
    }
    // Clause 3.
    let mut all = vec![false; n];
    for (s, _) in family {
        for &v in s {
            all[v] = true;
        }
    }
    for x in g.boundary_of_mask(&all) {
        let colored: Vec<usize> = g.neighbors(x).iter().copied().filter(|&w| union.contains(w)).collect();
        if !family.iter().any(|(_, phi)| colored.iter().all(|&w| phi.contains(w))) {
            return Ok(FamilyVerdict::MixedBoundary { x });
        }
    }
    let a: Vec<usize> = (0..n).filter(|&v| all[v]).collect();
    match check_reduction(g, lists, &a, &union, false, oracle)? {
        Ok(union) => Ok(FamilyVerdict::Consistent { union }),
        Err(refutation) => Ok(FamilyVerdict::Member { i: usize::MAX, refutation }),
    }
}

/// `Red(H | U)`: every `L`-coloring `φ` of `V(H) ∖ U` such that `(V(H), φ)`
/// is an `L`-reduction. When `fixed` is given only colorings extending it
/// (on `V(H) ∖ U`) are listed.
pub fn red_set(
    g: &Graph,
    lists: &ListAssignment,
    h: &[usize],
    u: &[usize],
    fixed: Option<&PartialColoring>,
    oracle: &Oracle,
) -> Result<Vec<PartialColoring>> {
    let n = g.n();
    let mut in_u = vec![false; n];
    for &v in u {
        in_u[v] = true;
    }
    let colored: Vec<usize> = h.iter().copied().filter(|&v| !in_u[v]).collect();
    let mut active = vec![false; n];
    for &v in &colored {
        active[v] = true;
    }
    let base = match fixed {
        Some(f) => f.restrict(&colored),
        None => PartialColoring::new(n),
    };
    let mut out = Vec::new();
    let mut err = None;
    oracle.for_each_extension(g, lists, &base, &active, |phi| {
        match check_reduction(g, lists, h, phi, false, oracle) {
            Ok(Ok(_)) => out.push(phi.clone()),
            Ok(Err(_)) => {}
            Err(e) => {
                err = Some(e);
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorset::{Color, ColorSet};

    fn cs(v: &[Color]) -> ColorSet {
        v.iter().copied().collect()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn trivial_reductions() {
        let g = path(4);
        let l = ListAssignment::uniform(4, cs(&[0, 1, 2, 3, 4]));
        let o = Oracle::default();
        assert!(check_reduction(&g, &l, &[], &PartialColoring::new(4), false, &o).unwrap().is_ok());
        let full = PartialColoring::from_pairs(4, &[(0, 0), (1, 1), (2, 0), (3, 1)]);
        assert!(check_reduction(&g, &l, &[0, 1, 2, 3], &full, false, &o).unwrap().is_ok());
    }

    #[test]
    fn boundary_list_condition() {
        // Star: centre 0 with leaves; coloring two leaves of a 5-list vertex's neighborhood.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let mut l = ListAssignment::uniform(4, cs(&[0, 1, 2, 3, 4]));
        l.set(0, cs(&[0, 1, 2, 3, 4]));
        let o = Oracle::default();
        let phi = PartialColoring::from_pairs(4, &[(1, 0), (2, 1), (3, 2)]);
        let r = check_reduction(&g, &l, &[1, 2, 3], &phi, false, &o).unwrap();
        assert_eq!(r, Err(ReductionRefutation::BoundaryList { v: 0, residual: 2 }));
        l.set(0, cs(&[0, 1, 2, 3]));
        let r = check_reduction(&g, &l, &[1, 2, 3], &phi, false, &o).unwrap().unwrap();
        assert!(!r.complete);
        let r = check_reduction(&g, &l, &[1, 2, 3], &phi, true, &o).unwrap();
        assert_eq!(r, Err(ReductionRefutation::Incomplete { v: 0 }));
    }

    #[test]
    fn family_clauses() {
        let g = path(7);
        let l = ListAssignment::uniform(7, cs(&[0, 1, 2, 3, 4]));
        let o = Oracle::default();
        let a = (vec![0, 1], PartialColoring::from_pairs(7, &[(0, 0), (1, 1)]));
        let b = (vec![5, 6], PartialColoring::from_pairs(7, &[(5, 0), (6, 1)]));
        assert!(matches!(
            check_consistent_family(&g, &l, std::slice::from_ref(&a), &o).unwrap(),
            FamilyVerdict::Consistent { .. }
        ));
        assert!(matches!(
            check_consistent_family(&g, &l, &[a.clone(), b.clone()], &o).unwrap(),
            FamilyVerdict::Consistent { .. }
        ));
        let c = (vec![2], PartialColoring::new(7));
        let d = (vec![3], PartialColoring::new(7));
        assert_eq!(
            check_consistent_family(&g, &l, &[c, d], &o).unwrap(),
            FamilyVerdict::CoresTooClose { i: 0, j: 1 }
        );
        // Vertex 3 sees colored 2 (from one member) and colored 4 (from the other).
        let e = (vec![2], PartialColoring::from_pairs(7, &[(2, 0)]));
        let f = (vec![4], PartialColoring::from_pairs(7, &[(4, 1)]));
        assert_eq!(check_consistent_family(&g, &l, &[e, f], &o).unwrap(), FamilyVerdict::MixedBoundary { x: 3 });
    }

    #[test]
    fn red_of_a_far_path_is_every_coloring() {
        let g = path(7);
        let l = ListAssignment::uniform(7, cs(&[0, 1, 2, 3, 4]));
        let o = Oracle::default();
        let red = red_set(&g, &l, &[2, 3, 4], &[], None, &o).unwrap();
        assert_eq!(red.len(), 5 * 4 * 4);
        // H = U: only the empty coloring, which is a reduction iff H is inert under ∅.
        let red = red_set(&g, &l, &[3], &[3], None, &o).unwrap();
        assert_eq!(red, vec![PartialColoring::new(7)]);
    }
}
