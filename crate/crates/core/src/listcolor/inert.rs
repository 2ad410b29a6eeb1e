//! Inertness: a set `S` is `(L, φ)`-inert when every proper coloring of the
//! rest of the graph that extends `φ` and covers the boundary of
//! `U = S ∖ dom φ` can be completed across `U`.
//!
//! Whether a coloring `ψ` completes across `U` depends only on the colors
//! `ψ` gives to `D_1(U)`, so it is enough to quantify over colorings of
//! `dom φ ∪ D_1(U)`; any larger domain restricts to one of these, and each of
//! these is itself an admissible domain. [`is_inert_full_domain`] checks the
//! unrestricted reading directly, for cross-validation on small graphs.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::colorset::{Color, ColorSet};
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::{ListAssignment, Oracle, PartialColoring};

/// Cap on the number of boundary patterns enumerated for a single core.
pub const MAX_BOUNDARY_PATTERNS: u64 = 4_000_000;

/// Outcome of an inertness query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum InertVerdict {
    Inert,
    /// `psi` extends `φ`, covers `D_1(U)`, and does not extend across `blocked`.
    Blocked { psi: PartialColoring, blocked: Vec<usize> },
}

impl InertVerdict {
    pub fn is_inert(&self) -> bool {
        matches!(self, InertVerdict::Inert)
    }
}

fn uncolored_part(n: usize, s: &[usize], phi: &PartialColoring) -> Vec<bool> {
    let mut in_u = vec![false; n];
    for &v in s {
        if !phi.contains(v) {
            in_u[v] = true;
        }
    }
    in_u
}

fn check_inputs(g: &Graph, lists: &ListAssignment, phi: &PartialColoring) -> Result<()> {
    phi.validate(g, lists)
}

/// Exact inertness test.
///
/// For each component `K` of `G[U]` the vertices whose residual list exceeds
/// their number of still-uncolored neighbors are peeled (they can always be
/// colored last). What remains is checked against every coloring pattern of
/// its boundary, where colors that appear in no core list are merged into a
/// single "irrelevant" class. A pattern that blocks the core is then
/// realized as an honest coloring of `D_1(U)` before being reported.
pub fn is_inert(
    g: &Graph,
    lists: &ListAssignment,
    s: &[usize],
    phi: &PartialColoring,
    oracle: &Oracle,
) -> Result<InertVerdict> {
    check_inputs(g, lists, phi)?;
    let n = g.n();
    let in_u = uncolored_part(n, s, phi);
    if !in_u.iter().any(|&b| b) {
        return Ok(InertVerdict::Inert);
    }
    let boundary = g.boundary_of_mask(&in_u);
    let mut in_b = vec![false; n];
    for &b in &boundary {
        if !phi.contains(b) {
            in_b[b] = true;
        }
    }
    let residual: Vec<ColorSet> = (0..n).map(|v| lists.residual(g, phi, v)).collect();

    // Peel.
    let mut alive = in_u.clone();
    let mut live_deg: Vec<usize> =
        (0..n).map(|v| g.neighbors(v).iter().filter(|&&w| !phi.contains(w)).count()).collect();
    // live_deg[v] counts uncolored neighbors that are not yet peeled; boundary
    // neighbors never get peeled.
    let mut stack: Vec<usize> = (0..n).filter(|&v| in_u[v] && residual[v].len() > live_deg[v]).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                live_deg[w] -= 1;
                if residual[w].len() > live_deg[w] {
                    stack.push(w);
                }
            }
        }
    }

    for core in g.components_of(&alive) {
        let relevant = core.iter().fold(ColorSet::EMPTY, |a, &v| a.union(residual[v]));
        let mut in_core = vec![false; n];
        for &v in &core {
            in_core[v] = true;
        }
        let nb: Vec<usize> = g.boundary_of_mask(&in_core).into_iter().filter(|&b| in_b[b]).collect();
        // Options per boundary vertex: relevant colors, plus `None` for "some irrelevant color".
        let options: Vec<Vec<Option<Color>>> = nb
            .iter()
            .map(|&b| {
                let mut o: Vec<Option<Color>> = residual[b].intersection(relevant).iter().map(Some).collect();
                if !residual[b].difference(relevant).is_empty() {
                    o.push(None);
                }
                o
            })
            .collect();
        let patterns = options.iter().fold(1u64, |a, o| a.saturating_mul(o.len() as u64));
        if patterns > MAX_BOUNDARY_PATTERNS {
            return Err(Error::SizeGuard { limit: MAX_BOUNDARY_PATTERNS as usize, actual: nb.len() });
        }
        let core_mask = in_core.clone();
        let mut pattern: Vec<Option<Color>> = vec![None; nb.len()];
        let mut found: Option<PartialColoring> = None;
        let mut error: Option<Error> = None;
        let _ = enumerate_patterns(g, &nb, &options, 0, &mut pattern, &mut |pat| {
            // Does the core color under this pattern?
            let mut psi = phi.clone();
            for (i, &b) in nb.iter().enumerate() {
                if let Some(c) = pat[i] {
                    psi.set(b, c);
                }
            }
            let core_lists = core_lists(g, lists, &psi, &core);
            match oracle.extend_within(g, &core_lists, &psi.restrict(&[]), &core_mask) {
                Ok(Some(_)) => ControlFlow::Continue(()),
                Ok(None) => match realize(g, lists, phi, &in_b, &nb, pat, relevant, oracle) {
                    Ok(Some(full)) => {
                        found = Some(full);
                        ControlFlow::Break(())
                    }
                    Ok(None) => ControlFlow::Continue(()),
                    Err(e) => {
                        error = Some(e);
                        ControlFlow::Break(())
                    }
                },
                Err(e) => {
                    error = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        if let Some(e) = error {
            return Err(e);
        }
        if let Some(psi) = found {
            let comp = g
                .components_of(&in_u)
                .into_iter()
                .find(|k| k.contains(&core[0]))
                .unwrap_or(core.clone());
            return Ok(InertVerdict::Blocked { psi, blocked: comp });
        }
    }
    Ok(InertVerdict::Inert)
}

/// Lists for the core under a boundary pattern: residual lists minus the
/// concrete colors of patterned neighbors.
fn core_lists(
    g: &Graph,
    lists: &ListAssignment,
    psi: &PartialColoring,
    core: &[usize],
) -> ListAssignment {
    let mut out = ListAssignment::uniform(g.n(), ColorSet::EMPTY);
    for &v in core {
        out.set(v, lists.residual(g, psi, v));
    }
    out
}

fn enumerate_patterns(
    g: &Graph,
    nb: &[usize],
    options: &[Vec<Option<Color>>],
    i: usize,
    pattern: &mut Vec<Option<Color>>,
    f: &mut dyn FnMut(&[Option<Color>]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if i == nb.len() {
        return f(pattern);
    }
    for &o in &options[i] {
        if let Some(c) = o {
            if (0..i).any(|j| pattern[j] == Some(c) && g.has_edge(nb[i], nb[j])) {
                continue;
            }
        }
        pattern[i] = o;
        enumerate_patterns(g, nb, options, i + 1, pattern, f)?;
    }
    ControlFlow::Continue(())
}

/// Turns a boundary pattern into an honest coloring of `dom φ ∪ D_1(U)`, if
/// one exists.
#[allow(clippy::too_many_arguments)]
fn realize(
    g: &Graph,
    lists: &ListAssignment,
    phi: &PartialColoring,
    in_b: &[bool],
    nb: &[usize],
    pat: &[Option<Color>],
    relevant: ColorSet,
    oracle: &Oracle,
) -> Result<Option<PartialColoring>> {
    let n = g.n();
    let mut l = ListAssignment::uniform(n, ColorSet::EMPTY);
    for v in 0..n {
        if in_b[v] {
            l.set(v, lists.residual(g, phi, v));
        }
    }
    for (i, &b) in nb.iter().enumerate() {
        let r = lists.residual(g, phi, b);
        l.set(b, if let Some(c) = pat[i] { ColorSet::singleton(c) } else { r.difference(relevant) });
    }
    let Some(col) = oracle.extend_within(g, &l, &PartialColoring::new(n), in_b)? else {
        return Ok(None);
    };
    let mut psi = phi.clone();
    for v in 0..n {
        if let Some(c) = col.get(v) {
            psi.set(v, c);
        }
    }
    Ok(Some(psi))
}

/// Inertness by enumerating every coloring of `D_1(U) ∖ dom φ`.
pub fn is_inert_brute(
    g: &Graph,
    lists: &ListAssignment,
    s: &[usize],
    phi: &PartialColoring,
    oracle: &Oracle,
) -> Result<InertVerdict> {
    check_inputs(g, lists, phi)?;
    let n = g.n();
    let in_u = uncolored_part(n, s, phi);
    let active: Vec<bool> = {
        let mut a = phi.domain_mask();
        for b in g.boundary_of_mask(&in_u) {
            a[b] = true;
        }
        a
    };
    quantify(g, lists, phi, &in_u, &active, oracle)
}

/// Inertness quantifying over colorings of all of `V(G) ∖ U` (the largest
/// admissible domain).
pub fn is_inert_full_domain(
    g: &Graph,
    lists: &ListAssignment,
    s: &[usize],
    phi: &PartialColoring,
    oracle: &Oracle,
) -> Result<InertVerdict> {
    check_inputs(g, lists, phi)?;
    let n = g.n();
    let in_u = uncolored_part(n, s, phi);
    let active: Vec<bool> = in_u.iter().map(|&b| !b).collect();
    quantify(g, lists, phi, &in_u, &active, oracle)
}

fn quantify(
    g: &Graph,
    lists: &ListAssignment,
    phi: &PartialColoring,
    in_u: &[bool],
    active: &[bool],
    oracle: &Oracle,
) -> Result<InertVerdict> {
    let n = g.n();
    if !in_u.iter().any(|&b| b) {
        return Ok(InertVerdict::Inert);
    }
    let mut verdict = InertVerdict::Inert;
    let mut error = None;
    let mut both = active.to_vec();
    for v in 0..n {
        both[v] |= in_u[v];
    }
    oracle.for_each_extension(g, lists, phi, active, |psi| {
        match oracle.extend_within(g, lists, psi, &both) {
            Ok(Some(_)) => ControlFlow::Continue(()),
            Ok(None) => {
                verdict = InertVerdict::Blocked {
                    psi: psi.clone(),
                    blocked: (0..n).filter(|&v| in_u[v]).collect(),
                };
                ControlFlow::Break(())
            }
            Err(e) => {
                error = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    match error {
        Some(e) => Err(e),
        None => Ok(verdict),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(v: &[Color]) -> ColorSet {
        v.iter().copied().collect()
    }

    fn wheel5() -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((0..5).map(|i| (i, 5)));
        Graph::from_edges(6, &edges)
    }

    #[test]
    fn colored_sets_are_inert() {
        let g = wheel5();
        let l = ListAssignment::uniform(6, cs(&[0, 1, 2]));
        let phi = PartialColoring::from_pairs(6, &[(5, 0)]);
        assert!(is_inert(&g, &l, &[5], &phi, &Oracle::default()).unwrap().is_inert());
    }

    #[test]
    fn hub_inert_iff_list_is_large() {
        let g = wheel5();
        let o = Oracle::default();
        let phi = PartialColoring::new(6);
        let mut l = ListAssignment::uniform(6, cs(&[0, 1, 2, 3, 4]));
        // Five rim colors can exhaust a 5-list.
        let v = is_inert(&g, &l, &[5], &phi, &o).unwrap();
        let InertVerdict::Blocked { psi, .. } = &v else { panic!("expected blocked") };
        assert!(psi.validate(&g, &l).is_ok());
        assert!(!is_inert_brute(&g, &l, &[5], &phi, &o).unwrap().is_inert());
        l.set(5, cs(&[0, 1, 2, 3, 4, 5]));
        assert!(is_inert(&g, &l, &[5], &phi, &o).unwrap().is_inert());
        assert!(is_inert_brute(&g, &l, &[5], &phi, &o).unwrap().is_inert());
        // With rim lists only {0, 1, 2} the rim uses at most three colors.
        let mut l = ListAssignment::uniform(6, cs(&[0, 1, 2]));
        l.set(5, cs(&[0, 1, 2, 3]));
        assert!(is_inert(&g, &l, &[5], &phi, &o).unwrap().is_inert());
    }

    #[test]
    fn three_readings_agree_on_a_small_core() {
        // Path 0-1-2-3-4 with an extra triangle 1-2-5; S = {1, 2, 5}.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 5)]);
        let l = ListAssignment::new(vec![
            cs(&[0, 1]),
            cs(&[0, 1, 2]),
            cs(&[1, 2, 3]),
            cs(&[2, 3]),
            cs(&[0, 3]),
            cs(&[0, 1, 2]),
        ]);
        let o = Oracle::default();
        for pairs in [vec![], vec![(5, 0)], vec![(1, 0)]] {
            let phi = PartialColoring::from_pairs(6, &pairs);
            let a = is_inert(&g, &l, &[1, 2, 5], &phi, &o).unwrap().is_inert();
            let b = is_inert_brute(&g, &l, &[1, 2, 5], &phi, &o).unwrap().is_inert();
            let c = is_inert_full_domain(&g, &l, &[1, 2, 5], &phi, &o).unwrap().is_inert();
            assert_eq!(a, b, "{pairs:?}");
            assert_eq!(b, c, "{pairs:?}");
        }
    }
}
