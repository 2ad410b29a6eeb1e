//! A generic search for `L`-reductions with a prescribed shape.
//!
//! Each vertex of the target set `A` has a [`Role`]: it must be colored, must
//! stay uncolored, or may go either way. The search assigns the decision
//! vertices in a caller-chosen order and prunes on
//!
//! * properness against already-colored vertices,
//! * the boundary condition `|L_τ(v)| ≥ 3` for 5-listed vertices of `D_1(A)`
//!   (colors only ever get removed, so a violation is final),
//! * inertness of each uncolored component as soon as everything within
//!   distance two of it is decided (memoized on that neighborhood's colors).
//!
//! Every leaf is re-verified with [`check_reduction`] before it is reported.

use std::collections::HashMap;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::colorset::Color;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::inert::is_inert;
use super::reduction::check_reduction;
use super::{ListAssignment, Oracle, PartialColoring, ReductionCertificate};

/// What the search may do with a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Role {
    /// Not in `A`.
    Outside,
    /// In `A` and colored.
    Colored,
    /// In `A`, left uncolored.
    Uncolored,
    /// In `A`, colored or not.
    Optional,
}

/// How a search ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SearchOutcome {
    Found(ReductionCertificate),
    Exhausted,
    BudgetExceeded { nodes: u64 },
}

impl SearchOutcome {
    pub fn certificate(self) -> Option<ReductionCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

type Filter<'f> = Box<dyn FnMut(&PartialColoring) -> bool + 'f>;

/// Configurable reduction search; see the module docs.
pub struct ReductionSearch<'a> {
    g: &'a Graph,
    lists: &'a ListAssignment,
    oracle: Oracle,
    roles: Vec<Role>,
    base: PartialColoring,
    order: Vec<usize>,
    node_budget: u64,
    uncolored_first: bool,
    leaf_filter: Option<Filter<'a>>,
}

struct State {
    tau: PartialColoring,
    /// Decided Optional vertices left uncolored.
    skipped: Vec<bool>,
    decided: Vec<bool>,
    nodes: u64,
    cache: HashMap<(usize, Vec<Option<Color>>), bool>,
    /// Some candidate was too large for the oracle and could not be decided.
    guarded: bool,
}

impl<'a> ReductionSearch<'a> {
    /// `base` fixes colors that every reported `τ` extends; its vertices must
    /// have role `Colored` or `Optional`.
    pub fn new(g: &'a Graph, lists: &'a ListAssignment, roles: Vec<Role>, base: PartialColoring) -> Result<Self> {
        if roles.len() != g.n() || base.n() != g.n() {
            return Err(Error::InvalidArgument("role vector or base coloring has the wrong size".into()));
        }
        for v in base.domain() {
            if matches!(roles[v], Role::Outside | Role::Uncolored) {
                return Err(Error::InvalidArgument(format!("base colors vertex {v} whose role forbids it")));
            }
        }
        base.validate(g, lists)?;
        let dist = {
            let seeds: Vec<usize> = (0..g.n()).filter(|&v| roles[v] != Role::Outside).collect();
            g.distances_from(&seeds)
        };
        let mut order: Vec<usize> = (0..g.n())
            .filter(|&v| matches!(roles[v], Role::Colored | Role::Optional) && !base.contains(v))
            .collect();
        order.sort_by_key(|&v| (dist[v], v));
        Ok(ReductionSearch {
            g,
            lists,
            oracle: Oracle::default(),
            roles,
            base,
            order,
            node_budget: 2_000_000,
            uncolored_first: true,
            leaf_filter: None,
        })
    }

    pub fn oracle(mut self, oracle: Oracle) -> Self {
        self.oracle = oracle;
        self
    }

    pub fn budget(mut self, nodes: u64) -> Self {
        self.node_budget = nodes;
        self
    }

    /// Decision order (must list exactly the undecided Colored/Optional vertices).
    pub fn order(mut self, order: Vec<usize>) -> Self {
        let mut a = order.clone();
        a.sort_unstable();
        let mut b = self.order.clone();
        b.sort_unstable();
        assert_eq!(a, b, "decision order must cover the undecided vertices exactly");
        self.order = order;
        self
    }

    /// Whether Optional vertices try "uncolored" before their colors.
    pub fn uncolored_first(mut self, yes: bool) -> Self {
        self.uncolored_first = yes;
        self
    }

    /// Extra acceptance condition on complete assignments.
    pub fn leaf_filter(mut self, f: impl FnMut(&PartialColoring) -> bool + 'a) -> Self {
        self.leaf_filter = Some(Box::new(f));
        self
    }

    fn members(&self) -> Vec<usize> {
        (0..self.g.n()).filter(|&v| self.roles[v] != Role::Outside).collect()
    }

    /// First reduction found.
    pub fn find_first(&mut self) -> Result<SearchOutcome> {
        let mut found = None;
        let outcome = self.run(&mut |c| {
            found = Some(c.clone());
            ControlFlow::Break(())
        })?;
        Ok(match (found, outcome) {
            (Some(c), _) => SearchOutcome::Found(c),
            (None, Some(nodes)) => SearchOutcome::BudgetExceeded { nodes },
            (None, None) => SearchOutcome::Exhausted,
        })
    }

    /// Visits every reduction of the prescribed shape. Returns the node count
    /// if the budget ran out, or if the search finished but skipped
    /// candidates too large for the oracle (so it is not exhaustive).
    pub fn for_each(&mut self, mut f: impl FnMut(&ReductionCertificate) -> ControlFlow<()>) -> Result<Option<u64>> {
        self.run(&mut f)
    }

    fn run(&mut self, f: &mut dyn FnMut(&ReductionCertificate) -> ControlFlow<()>) -> Result<Option<u64>> {
        let n = self.g.n();
        let a = self.members();
        let mut in_a = vec![false; n];
        for &v in &a {
            in_a[v] = true;
        }
        let boundary = self.g.boundary_of_mask(&in_a);
        let mut watched_boundary = vec![false; n];
        for &b in &boundary {
            if self.lists.get(b).len() >= 5 {
                watched_boundary[b] = true;
            }
        }
        // Boundary check for the base alone.
        if boundary
            .iter()
            .any(|&b| watched_boundary[b] && self.lists.residual(self.g, &self.base, b).len() < 3)
        {
            return Ok(None);
        }
        let mut decided = vec![false; n];
        for v in 0..n {
            decided[v] = self.roles[v] == Role::Uncolored || self.base.contains(v) || self.roles[v] == Role::Outside;
        }
        let mut st = State {
            tau: self.base.clone(),
            skipped: vec![false; n],
            decided,
            nodes: 0,
            cache: HashMap::new(),
            guarded: false,
        };
        let mut err = None;
        let ctx = Ctx { in_a: &in_a, watched_boundary: &watched_boundary, a: &a };
        let flow = self.descend(0, &mut st, &ctx, f, &mut err);
        if let Some(e) = err {
            return Err(e);
        }
        if (flow.is_break() && st.nodes > self.node_budget) || (flow.is_continue() && st.guarded) {
            return Ok(Some(st.nodes));
        }
        Ok(None)
    }

    fn descend(
        &mut self,
        depth: usize,
        st: &mut State,
        ctx: &Ctx<'_>,
        f: &mut dyn FnMut(&ReductionCertificate) -> ControlFlow<()>,
        err: &mut Option<Error>,
    ) -> ControlFlow<()> {
        st.nodes += 1;
        if st.nodes > self.node_budget {
            return ControlFlow::Break(());
        }
        if depth == self.order.len() {
            return self.leaf(st, ctx, f, err);
        }
        let v = self.order[depth];
        let mut choices: Vec<Option<Color>> = self.lists.residual(self.g, &st.tau, v).iter().map(Some).collect();
        if self.roles[v] == Role::Optional {
            if self.uncolored_first {
                choices.insert(0, None);
            } else {
                choices.push(None);
            }
        }
        for choice in choices {
            st.decided[v] = true;
            match choice {
                Some(c) => {
                    st.tau.set(v, c);
                    let bad = self
                        .g
                        .neighbors(v)
                        .iter()
                        .any(|&w| ctx.watched_boundary[w] && self.lists.residual(self.g, &st.tau, w).len() < 3);
                    if !bad && self.early_inert_ok(v, st, ctx, err) {
                        self.descend(depth + 1, st, ctx, f, err)?;
                    }
                    if err.is_some() {
                        return ControlFlow::Break(());
                    }
                    st.tau.unset(v);
                }
                None => {
                    st.skipped[v] = true;
                    if self.early_inert_ok(v, st, ctx, err) {
                        self.descend(depth + 1, st, ctx, f, err)?;
                    }
                    if err.is_some() {
                        return ControlFlow::Break(());
                    }
                    st.skipped[v] = false;
                }
            }
            st.decided[v] = false;
        }
        ControlFlow::Continue(())
    }

    /// Checks inertness of every uncolored component near `v` that has just
    /// become fully determined.
    fn early_inert_ok(&self, v: usize, st: &mut State, ctx: &Ctx<'_>, err: &mut Option<Error>) -> bool {
        let n = self.g.n();
        let uncolored: Vec<bool> = (0..n).map(|u| ctx.in_a[u] && !st.tau.contains(u) && st.decided[u]).collect();
        let ball = self.g.ball(&[v], 2);
        let mut seen = vec![false; n];
        for &s in &ball {
            if !uncolored[s] || seen[s] {
                continue;
            }
            // Component of decided-uncolored vertices through s, stopping if it
            // touches an undecided member.
            let mut comp = vec![s];
            seen[s] = true;
            let mut open = false;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in self.g.neighbors(u) {
                    if ctx.in_a[w] && !st.decided[w] {
                        open = true;
                    }
                    if uncolored[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            if open {
                continue;
            }
            let near = self.g.ball(&comp, 2);
            if near.iter().any(|&u| ctx.in_a[u] && !st.decided[u]) {
                continue;
            }
            comp.sort_unstable();
            match self.cached_inert(&comp, &near, st) {
                Ok(true) => {}
                Ok(false) => return false,
                // Too large to decide now; the leaf check decides.
                Err(Error::SizeGuard { .. }) => st.guarded = true,
                Err(e) => {
                    *err = Some(e);
                    return false;
                }
            }
        }
        true
    }

    fn cached_inert(&self, comp: &[usize], near: &[usize], st: &mut State) -> Result<bool> {
        let key = (comp[0], near.iter().map(|&u| st.tau.get(u)).collect::<Vec<_>>());
        if let Some(&r) = st.cache.get(&key) {
            return Ok(r);
        }
        let r = is_inert(self.g, self.lists, comp, &st.tau, &self.oracle)?.is_inert();
        st.cache.insert(key, r);
        Ok(r)
    }

    fn leaf(
        &mut self,
        st: &mut State,
        ctx: &Ctx<'_>,
        f: &mut dyn FnMut(&ReductionCertificate) -> ControlFlow<()>,
        err: &mut Option<Error>,
    ) -> ControlFlow<()> {
        if let Some(filter) = self.leaf_filter.as_mut() {
            if !filter(&st.tau) {
                return ControlFlow::Continue(());
            }
        }
        match check_reduction(self.g, self.lists, ctx.a, &st.tau, false, &self.oracle) {
            Ok(Ok(cert)) => f(&cert),
            Ok(Err(_)) => ControlFlow::Continue(()),
            Err(Error::SizeGuard { .. }) => {
                st.guarded = true;
                ControlFlow::Continue(())
            }
            Err(e) => {
                *err = Some(e);
                ControlFlow::Break(())
            }
        }
    }
}

struct Ctx<'c> {
    in_a: &'c [bool],
    watched_boundary: &'c [bool],
    a: &'c [usize],
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorset::ColorSet;

    fn cs(v: &[Color]) -> ColorSet {
        v.iter().copied().collect()
    }

    #[test]
    fn finds_reduction_on_a_path() {
        // Path 0..6 with 5-lists; A = {2,3,4} all colored.
        let edges: Vec<(usize, usize)> = (0..6).map(|i| (i, i + 1)).collect();
        let g = Graph::from_edges(7, &edges);
        let l = ListAssignment::uniform(7, cs(&[0, 1, 2, 3, 4]));
        let mut roles = vec![Role::Outside; 7];
        for v in 2..5 {
            roles[v] = Role::Colored;
        }
        let mut s = ReductionSearch::new(&g, &l, roles, PartialColoring::new(7)).unwrap();
        let cert = s.find_first().unwrap().certificate().unwrap();
        assert_eq!(cert.a, vec![2, 3, 4]);
        assert_eq!(cert.phi.size(), 3);
        let mut count = 0;
        s.for_each(|_| {
            count += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(count, 5 * 4 * 4);
    }

    #[test]
    fn uncolored_hub_needs_big_list() {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((0..5).map(|i| (i, 5)));
        let g = Graph::from_edges(6, &edges);
        let l = ListAssignment::uniform(6, cs(&[0, 1, 2, 3, 4]));
        let mut roles = vec![Role::Outside; 6];
        roles[5] = Role::Uncolored;
        let mut s = ReductionSearch::new(&g, &l, roles.clone(), PartialColoring::new(6)).unwrap();
        assert_eq!(s.find_first().unwrap(), SearchOutcome::Exhausted);
        roles[5] = Role::Optional;
        let mut s = ReductionSearch::new(&g, &l, roles, PartialColoring::new(6)).unwrap();
        let cert = s.find_first().unwrap().certificate().unwrap();
        assert!(cert.phi.contains(5));
    }
}
