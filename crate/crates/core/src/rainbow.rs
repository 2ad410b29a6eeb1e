//! Rainbows: a plane graph `G` with outer cycle `C`, a path `P` on `C`,
//! and lists that are nonempty on the ends of `P`, of size at least three
//! on `C ∖ P` and at least five off `C`.
//!
//! Everything here is computed by brute force with the exact oracle:
//! `End` and `Crown` sets, universal colors, broken wheels, and checks of
//! the statements about them. A check returns [`Check::Vacuous`] when the
//! hypotheses fail, [`Check::Holds`] when the conclusion was verified, and
//! [`Check::Violated`] with a witness otherwise.
//!
//! *End-linked* is read as: the lists on the two ends of `P` have sizes
//! summing to at least four (see [`Rainbow::is_end_linked`]).

use std::ops::ControlFlow;

use serde::Serialize;

use crate::colorset::{Color, ColorSet};
use crate::embedding::RotationEmbedding;
use crate::error::{Error, Result};
use crate::generators::SplitMix64;
use crate::graph::Graph;
use crate::listcolor::{ListAssignment, Oracle, PartialColoring};
use crate::topology::is_short_inseparable;

/// Outcome of checking one statement on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Check {
    Vacuous(String),
    Holds(String),
    Violated(String),
}

impl Check {
    pub fn is_violated(&self) -> bool {
        matches!(self, Check::Violated(_))
    }
    pub fn is_vacuous(&self) -> bool {
        matches!(self, Check::Vacuous(_))
    }
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds(_))
    }
}

/// A rainbow `(G, C, P, L)`.
pub struct Rainbow<'a> {
    pub emb: &'a RotationEmbedding,
    pub cycle: Vec<usize>,
    pub path: Vec<usize>,
    pub lists: &'a ListAssignment,
    on_c: Vec<bool>,
}

impl<'a> Rainbow<'a> {
    /// Validates the rainbow conditions. `path` must follow `cycle`.
    pub fn new(emb: &'a RotationEmbedding, cycle: &[usize], path: &[usize], lists: &'a ListAssignment) -> Result<Self> {
        if emb.genus()? != 0 {
            return Err(Error::Hypothesis("rainbows are planar".into()));
        }
        if emb.find_face(cycle).is_none() || !emb.graph().is_cycle(cycle) {
            return Err(Error::Hypothesis(format!("{cycle:?} is not a facial cycle")));
        }
        let k = cycle.len();
        if path.len() < 2 || path.len() > k {
            return Err(Error::Hypothesis("P must have at least one edge and lie on C".into()));
        }
        let follows = |w: &[usize]| {
            let i = cycle.iter().position(|&v| v == w[0]);
            let j = cycle.iter().position(|&v| v == w[1]);
            matches!((i, j), (Some(i), Some(j)) if (i + 1) % k == j || (j + 1) % k == i)
        };
        if !path.windows(2).all(follows) || !emb.graph().is_path(path) {
            return Err(Error::Hypothesis(format!("{path:?} is not a path on C")));
        }
        let mut on_c = vec![false; emb.n()];
        for &v in cycle {
            on_c[v] = true;
        }
        let rb = Rainbow { emb, cycle: cycle.to_vec(), path: path.to_vec(), lists, on_c };
        let (p, p2) = rb.ends();
        if lists.get(p).is_empty() || lists.get(p2).is_empty() {
            return Err(Error::Hypothesis("an end of P has an empty list".into()));
        }
        for v in 0..emb.n() {
            let need = if !rb.on_c[v] {
                5
            } else if !path.contains(&v) {
                3
            } else {
                0
            };
            if lists.get(v).len() < need {
                return Err(Error::Hypothesis(format!("vertex {v} needs a list of size at least {need}")));
            }
        }
        Ok(rb)
    }

    pub fn graph(&self) -> &Graph {
        self.emb.graph()
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.path[0], *self.path.last().unwrap())
    }

    /// Internal vertices of `P`.
    pub fn interior(&self) -> &[usize] {
        &self.path[1..self.path.len() - 1]
    }

    pub fn length(&self) -> usize {
        self.path.len() - 1
    }

    pub fn on_cycle(&self, v: usize) -> bool {
        self.on_c[v]
    }

    /// End-linked reading: `|L(p)| + |L(p')| ≥ 4`. (When `pp'` is an edge
    /// this already leaves at least two proper color pairs on the ends.)
    pub fn is_end_linked(&self) -> bool {
        let (p, p2) = self.ends();
        self.lists.get(p).len() + self.lists.get(p2).len() >= 4
    }

    /// Visits the proper `L`-colorings of `targets` extending `phi`.
    fn for_each_coloring(
        &self,
        phi: &PartialColoring,
        targets: &[usize],
        f: &mut dyn FnMut(&PartialColoring) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        fn rec(
            g: &Graph,
            lists: &ListAssignment,
            targets: &[usize],
            i: usize,
            phi: &mut PartialColoring,
            f: &mut dyn FnMut(&PartialColoring) -> ControlFlow<()>,
        ) -> ControlFlow<()> {
            if i == targets.len() {
                return f(phi);
            }
            let v = targets[i];
            if phi.contains(v) {
                return rec(g, lists, targets, i + 1, phi, f);
            }
            for c in lists.residual(g, phi, v).iter() {
                phi.set(v, c);
                let flow = rec(g, lists, targets, i + 1, phi, f);
                phi.unset(v);
                flow?;
            }
            ControlFlow::Continue(())
        }
        let mut work = phi.clone();
        rec(self.graph(), self.lists, targets, 0, &mut work, f)
    }

    /// Whether every extension of `phi` to `dom(phi) ∪ V(P)` extends to `G`.
    fn all_path_extensions_extend(&self, phi: &PartialColoring, oracle: &Oracle) -> Result<bool> {
        let mut err = None;
        let mut ok = true;
        let path = self.path.clone();
        let _ = self.for_each_coloring(phi, &path, &mut |psi| match oracle.is_extendable(self.graph(), self.lists, psi) {
            Ok(true) => ControlFlow::Continue(()),
            Ok(false) => {
                ok = false;
                ControlFlow::Break(())
            }
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(ok),
        }
    }

    /// `End(P, G)`: colorings `(φ(p), φ(p'))` of the two ends such that every
    /// extension to `V(P)` extends to `G`. Sorted.
    pub fn end_set(&self, oracle: &Oracle) -> Result<Vec<(Color, Color)>> {
        if self.path.len() < 3 {
            return Err(Error::InvalidArgument("End needs |V(P)| ≥ 3".into()));
        }
        let (p, p2) = self.ends();
        let n = self.emb.n();
        let mut out = Vec::new();
        for a in self.lists.get(p).iter() {
            for b in self.lists.get(p2).iter() {
                if self.graph().has_edge(p, p2) && a == b {
                    continue;
                }
                let phi = PartialColoring::from_pairs(n, &[(p, a), (p2, b)]);
                if self.all_path_extensions_extend(&phi, oracle)? {
                    out.push((a, b));
                }
            }
        }
        Ok(out)
    }

    /// Whether `phi` belongs to `Crown(P, G)`.
    pub fn is_crown(&self, phi: &PartialColoring, oracle: &Oracle) -> Result<bool> {
        if self.path.len() < 3 {
            return Err(Error::InvalidArgument("Crown needs |V(P)| ≥ 3".into()));
        }
        let g = self.graph();
        let (p, p2) = self.ends();
        let (q, q2) = (self.path[1], self.path[self.path.len() - 2]);
        if !phi.is_proper(g) || phi.pairs().iter().any(|&(v, c)| !self.on_c[v] || v == q || v == q2 || !self.lists.get(v).contains(c)) {
            return Ok(false);
        }
        if !phi.contains(p) || !phi.contains(p2) {
            return Ok(false);
        }
        if self.length() > 3 && !self.interior().iter().any(|&v| v != q && v != q2 && phi.contains(v)) {
            return Ok(false);
        }
        if self.path.iter().any(|&x| !phi.contains(x) && self.lists.residual(g, phi, x).len() < 3) {
            return Ok(false);
        }
        self.all_path_extensions_extend(phi, oracle)
    }

    /// Visits `Crown(P, G)` elements accepted by `filter`. Domains are
    /// searched inside `V(P) ∖ {q, q'}` first; with `wide` the remaining
    /// vertices of `C` may be colored too.
    pub fn for_each_crown(
        &self,
        oracle: &Oracle,
        wide: bool,
        fixed: &PartialColoring,
        filter: &mut dyn FnMut(&PartialColoring) -> bool,
        f: &mut dyn FnMut(&PartialColoring) -> ControlFlow<()>,
    ) -> Result<()> {
        let (p, p2) = self.ends();
        let (q, q2) = (self.path[1], self.path[self.path.len() - 2]);
        let mut cand: Vec<usize> = self.path.iter().copied().filter(|&v| v != q && v != q2).collect();
        if wide {
            cand.extend(self.cycle.iter().copied().filter(|v| !self.path.contains(v)));
        }
        let g = self.graph();
        let mut err = None;
        #[allow(clippy::too_many_arguments)]
        fn rec(
            rb: &Rainbow,
            g: &Graph,
            cand: &[usize],
            forced: (usize, usize),
            i: usize,
            phi: &mut PartialColoring,
            oracle: &Oracle,
            filter: &mut dyn FnMut(&PartialColoring) -> bool,
            f: &mut dyn FnMut(&PartialColoring) -> ControlFlow<()>,
            err: &mut Option<Error>,
        ) -> ControlFlow<()> {
            if i == cand.len() {
                if !filter(phi) {
                    return ControlFlow::Continue(());
                }
                return match rb.is_crown(phi, oracle) {
                    Ok(true) => f(phi),
                    Ok(false) => ControlFlow::Continue(()),
                    Err(e) => {
                        *err = Some(e);
                        ControlFlow::Break(())
                    }
                };
            }
            let v = cand[i];
            if phi.contains(v) {
                return rec(rb, g, cand, forced, i + 1, phi, oracle, filter, f, err);
            }
            if v != forced.0 && v != forced.1 {
                rec(rb, g, cand, forced, i + 1, phi, oracle, filter, f, err)?;
            }
            for c in rb.lists.residual(g, phi, v).iter() {
                phi.set(v, c);
                let flow = rec(rb, g, cand, forced, i + 1, phi, oracle, filter, f, err);
                phi.unset(v);
                flow?;
            }
            ControlFlow::Continue(())
        }
        let mut phi = fixed.clone();
        let _ = rec(self, g, &cand, (p, p2), 0, &mut phi, oracle, filter, f, &mut err);
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// A `Crown(P, G)` element extending `fixed` and accepted by `filter`:
    /// narrow domains first, then wide ones.
    pub fn find_crown(
        &self,
        oracle: &Oracle,
        fixed: &PartialColoring,
        mut filter: impl FnMut(&PartialColoring) -> bool,
    ) -> Result<Option<PartialColoring>> {
        for wide in [false, true] {
            let mut found = None;
            self.for_each_crown(oracle, wide, fixed, &mut filter, &mut |phi| {
                found = Some(phi.clone());
                ControlFlow::Break(())
            })?;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Up to `limit` `Crown` elements with narrow domains.
    pub fn crown_set(&self, oracle: &Oracle, limit: usize) -> Result<Vec<PartialColoring>> {
        let mut out = Vec::new();
        let fixed = PartialColoring::new(self.emb.n());
        self.for_each_crown(oracle, false, &fixed, &mut |_| true, &mut |phi| {
            out.push(phi.clone());
            if out.len() >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(out)
    }

    /// Chords of `C` (edges of `G ∖ E(C)` with both ends on `C`).
    pub fn chords(&self) -> Vec<(usize, usize)> {
        let k = self.cycle.len();
        let g = self.graph();
        let mut out = Vec::new();
        for (i, &a) in self.cycle.iter().enumerate() {
            for &b in g.neighbors(a) {
                if a < b && self.on_c[b] {
                    let j = self.cycle.iter().position(|&v| v == b).unwrap();
                    if (i + 1) % k != j && (j + 1) % k != i {
                        out.push((a, b));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Whether `a ∈ L(p)` is `(pqp', H)`-universal, `H` being the whole graph.
pub fn is_universal(
    g: &Graph,
    lists: &ListAssignment,
    (p, q, p2): (usize, usize, usize),
    a: Color,
    oracle: &Oracle,
) -> Result<bool> {
    if !lists.get(p).contains(a) {
        return Ok(false);
    }
    let n = g.n();
    for b in lists.get(q).without(a).iter() {
        for c in lists.get(p2).without(b).iter() {
            let phi = PartialColoring::from_pairs(n, &[(p, a), (q, b), (p2, c)]);
            if !phi.is_proper(g) || !oracle.is_extendable(g, lists, &phi)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// If `g` is a broken wheel, its hub and rim path `q_1 … q_ℓ` (`ℓ ≥ 2`).
/// With `principal = Some((x, y))` the principal path must have ends `x, y`.
pub fn broken_wheel_structure(g: &Graph, principal: Option<(usize, usize)>) -> Option<(usize, Vec<usize>)> {
    let n = g.n();
    if n < 3 {
        return None;
    }
    'hub: for hub in 0..n {
        if g.degree(hub) != n - 1 {
            continue;
        }
        // G − hub must be a path.
        let rest: Vec<usize> = (0..n).filter(|&v| v != hub).collect();
        let deg = |v: usize| g.neighbors(v).iter().filter(|&&u| u != hub).count();
        let ends: Vec<usize> = rest.iter().copied().filter(|&v| deg(v) == 1).collect();
        if rest.iter().any(|&v| deg(v) > 2) || ends.len() != 2 {
            continue;
        }
        let mut walk = vec![ends[0]];
        let mut prev = usize::MAX;
        let mut cur = ends[0];
        loop {
            let next = g.neighbors(cur).iter().copied().find(|&u| u != hub && u != prev);
            match next {
                Some(u) => {
                    prev = cur;
                    cur = u;
                    walk.push(u);
                    if walk.len() > rest.len() {
                        continue 'hub;
                    }
                }
                None => break,
            }
        }
        if walk.len() != rest.len() {
            continue;
        }
        if let Some((x, y)) = principal {
            let (s, t) = (walk[0], *walk.last().unwrap());
            if !((s == x && t == y) || (s == y && t == x)) {
                continue;
            }
        }
        return Some((hub, walk));
    }
    None
}

/// The partial-path extension lemma: if `phi` (a proper partial coloring of
/// `V(P)` containing both ends) does not extend, then a chord joins a colored
/// interior vertex of `P` to `C ∖ P`, or some vertex off `C` or uncolored on
/// `P̊` has at most two colors left.
pub fn check_partial_path_extension(rb: &Rainbow, phi: &PartialColoring, oracle: &Oracle) -> Result<Check> {
    let g = rb.graph();
    let (p, p2) = rb.ends();
    if !phi.contains(p) || !phi.contains(p2) || phi.domain().iter().any(|v| !rb.path.contains(v)) {
        return Ok(Check::Vacuous("φ must be a partial coloring of V(P) containing both ends".into()));
    }
    if phi.validate(g, rb.lists).is_err() {
        return Ok(Check::Vacuous("φ is not a proper L-coloring".into()));
    }
    if oracle.is_extendable(g, rb.lists, phi)? {
        return Ok(Check::Holds("φ extends".into()));
    }
    for &v in rb.interior() {
        if phi.contains(v) && g.neighbors(v).iter().any(|&u| rb.on_cycle(u) && !rb.path.contains(&u)) {
            let u = *g.neighbors(v).iter().find(|&&u| rb.on_cycle(u) && !rb.path.contains(&u)).unwrap();
            if !rb.cycle.windows(2).any(|w| (w[0] == u && w[1] == v) || (w[0] == v && w[1] == u))
                && !is_cycle_edge(&rb.cycle, u, v)
            {
                return Ok(Check::Holds(format!("chord {v}-{u}")));
            }
        }
    }
    for v in 0..g.n() {
        let candidate = !rb.on_cycle(v) || (rb.interior().contains(&v) && !phi.contains(v));
        if candidate && rb.lists.residual(g, phi, v).len() <= 2 {
            return Ok(Check::Holds(format!("vertex {v} keeps at most two colors")));
        }
    }
    Ok(Check::Violated(format!("φ = {:?} does not extend and no witness exists", phi.pairs())))
}

fn is_cycle_edge(cycle: &[usize], a: usize, b: usize) -> bool {
    let k = cycle.len();
    (0..k).any(|i| {
        let (x, y) = (cycle[i], cycle[(i + 1) % k]);
        (x == a && y == b) || (x == b && y == a)
    })
}

/// The universal-color dichotomy for `P = p_1 p_2 p_3`.
pub fn check_universal_dichotomy(rb: &Rainbow, oracle: &Oracle) -> Result<Check> {
    if rb.path.len() != 3 {
        return Ok(Check::Vacuous("P must have length two".into()));
    }
    let g = rb.graph();
    let (p1, p2, p3) = (rb.path[0], rb.path[1], rb.path[2]);
    if rb.cycle.len() <= 4 {
        return Ok(Check::Vacuous("|V(C)| ≤ 4".into()));
    }
    if rb.lists.get(p3).len() < 2 {
        return Ok(Check::Vacuous("|L(p_3)| < 2".into()));
    }
    if rb.chords().iter().any(|&(a, b)| a != p2 && b != p2) {
        return Ok(Check::Vacuous("a chord avoids p_2".into()));
    }
    if !is_short_inseparable(rb.emb)? {
        return Ok(Check::Vacuous("not short-inseparable".into()));
    }
    for a in rb.lists.get(p3).iter() {
        if is_universal(g, rb.lists, (p3, p2, p1), a, oracle)? {
            return Ok(Check::Holds(format!("color {a} is universal at p_3")));
        }
    }
    // x, z: the path z x p_3 along C − p_2.
    let k = rb.cycle.len();
    let i3 = rb.cycle.iter().position(|&v| v == p3).unwrap();
    let i2 = rb.cycle.iter().position(|&v| v == p2).unwrap();
    let step = if (i3 + 1) % k == i2 { k - 1 } else { 1 };
    let x = rb.cycle[(i3 + step) % k];
    let z = rb.cycle[(i3 + 2 * step) % k];
    let bw = broken_wheel_structure(g, Some((p1, p3))).is_some_and(|(hub, _)| hub == p2);
    let lists_ok = rb.lists.get(p3).is_subset(rb.lists.get(x).intersection(rb.lists.get(z)));
    if bw && lists_ok {
        Ok(Check::Holds("broken wheel with L(p_3) ⊆ L(x) ∩ L(z)".into()))
    } else {
        Ok(Check::Violated(format!("no universal color and broken wheel = {bw}, list containment = {lists_ok}")))
    }
}

/// An even-length path from `a` to `b` through `C`-vertices adjacent to `q`.
fn even_fan_path(rb: &Rainbow, a: usize, b: usize, q: usize) -> bool {
    let g = rb.graph();
    let ok = |v: usize| rb.on_cycle(v) && g.has_edge(v, q) && v != q;
    if !ok(a) || !ok(b) {
        return false;
    }
    fn dfs(g: &Graph, ok: &dyn Fn(usize) -> bool, cur: usize, b: usize, len: usize, seen: &mut Vec<bool>) -> bool {
        if cur == b {
            return len.is_multiple_of(2);
        }
        for &u in g.neighbors(cur) {
            if ok(u) && !seen[u] {
                seen[u] = true;
                if dfs(g, ok, u, b, len + 1, seen) {
                    return true;
                }
                seen[u] = false;
            }
        }
        false
    }
    let mut seen = vec![false; g.n()];
    seen[a] = true;
    dfs(g, &ok, a, b, 0, &mut seen)
}

/// `End` for a 2-path: nonempty, and of size two unless an even fan path
/// joins the ends.
pub fn check_two_path_ends(rb: &Rainbow, oracle: &Oracle) -> Result<Check> {
    if rb.path.len() != 3 {
        return Ok(Check::Vacuous("P must have length two".into()));
    }
    if !rb.is_end_linked() {
        return Ok(Check::Vacuous("not end-linked".into()));
    }
    let end = rb.end_set(oracle)?;
    if end.is_empty() {
        return Ok(Check::Violated("End is empty".into()));
    }
    if end.len() >= 2 {
        return Ok(Check::Holds(format!("|End| = {}", end.len())));
    }
    let (p0, q, p1) = (rb.path[0], rb.path[1], rb.path[2]);
    if even_fan_path(rb, p0, p1, q) {
        Ok(Check::Holds("|End| = 1 with an even fan path".into()))
    } else {
        Ok(Check::Violated(format!("End = {end:?} and no even fan path")))
    }
}

/// Crown nonemptiness for paths of length four.
pub fn check_crown_four(rb: &Rainbow, oracle: &Oracle) -> Result<Check> {
    if rb.length() != 4 {
        return Ok(Check::Vacuous("P must have length four".into()));
    }
    let g = rb.graph();
    let (q, q2) = (rb.path[1], rb.path[3]);
    let common = g.neighbors(q).iter().any(|&x| rb.on_cycle(x) && !rb.path.contains(&x) && g.has_edge(x, q2));
    if common {
        return Ok(Check::Vacuous("q and q' share a neighbor in C ∖ P".into()));
    }
    if rb.interior().iter().any(|&v| rb.lists.get(v).len() < 5) {
        return Ok(Check::Vacuous("an internal vertex of P has a list of size < 5".into()));
    }
    let (p, p2) = rb.ends();
    if rb.lists.get(p).len() < 3 && rb.lists.get(p2).len() < 3 {
        return Ok(Check::Vacuous("neither end has a list of size ≥ 3".into()));
    }
    match rb.find_crown(oracle, &PartialColoring::new(rb.emb.n()), |_| true)? {
        Some(phi) => Ok(Check::Holds(format!("crown {:?}", phi.pairs()))),
        None => Ok(Check::Violated("Crown is empty".into())),
    }
}

/// Crown elements through each end of the middle edge, for paths of length
/// five whose internal vertices all carry chords to `C ∖ P̊`.
pub fn check_crown_five(rb: &Rainbow, oracle: &Oracle) -> Result<Check> {
    if rb.length() != 5 {
        return Ok(Check::Vacuous("P must have length five".into()));
    }
    if !rb.is_end_linked() {
        return Ok(Check::Vacuous("not end-linked".into()));
    }
    let interior = rb.interior().to_vec();
    if interior.iter().any(|&v| rb.lists.get(v).len() < 5) {
        return Ok(Check::Vacuous("an internal vertex of P has a list of size < 5".into()));
    }
    let chords = rb.chords();
    let has_chord = |v: usize| {
        chords.iter().any(|&(a, b)| (a == v && !interior.contains(&b)) || (b == v && !interior.contains(&a)))
    };
    if !interior.iter().all(|&v| has_chord(v)) {
        return Ok(Check::Vacuous("an internal vertex of P has no chord to C ∖ P̊".into()));
    }
    for y in [rb.path[2], rb.path[3]] {
        if rb.find_crown(oracle, &PartialColoring::new(rb.emb.n()), |phi| phi.contains(y))?.is_none() {
            return Ok(Check::Violated(format!("no crown colors {y}")));
        }
    }
    Ok(Check::Holds("crowns through both middle vertices".into()))
}

/// Obstructions for `P = p_0 q_0 y_0 y_1 q_1 p_1`.
pub fn obstructions(rb: &Rainbow) -> Vec<usize> {
    let g = rb.graph();
    let p = &rb.path;
    let (p0, q0, y0, y1, q1, p1) = (p[0], p[1], p[2], p[3], p[4], p[5]);
    let adj_all = |x: usize, vs: &[usize]| vs.iter().all(|&v| v != x && g.has_edge(x, v));
    let mut out: Vec<usize> = rb
        .cycle
        .iter()
        .copied()
        .filter(|&x| adj_all(x, &[q0, y0, y1, q1]) || adj_all(x, &[p0, q1, y1]) || adj_all(x, &[p1, q0, y0]))
        .collect();
    out.sort_unstable();
    out
}

/// Crown elements with prescribed end colors for `P` of length five with
/// both ends carrying 3-lists: an obstruction exists, or for each middle
/// vertex `y_j` some end `p_i` has a color `a` such that every color `b` on
/// the other end gives a crown through `y_j` using `a, b`.
pub fn check_crown_five_ends(rb: &Rainbow, oracle: &Oracle) -> Result<Check> {
    if rb.length() != 5 {
        return Ok(Check::Vacuous("P must have length five".into()));
    }
    let g = rb.graph();
    let interior = rb.interior().to_vec();
    if interior.iter().any(|&v| rb.lists.get(v).len() < 5) {
        return Ok(Check::Vacuous("an internal vertex of P has a list of size < 5".into()));
    }
    if !interior.iter().all(|&v| g.neighbors(v).iter().any(|&u| rb.on_cycle(u) && !interior.contains(&u))) {
        return Ok(Check::Vacuous("an internal vertex of P has no neighbor in C ∖ P̊".into()));
    }
    let (p0, p1) = rb.ends();
    if rb.lists.get(p0).len() < 3 || rb.lists.get(p1).len() < 3 {
        return Ok(Check::Vacuous("an end has a list of size < 3".into()));
    }
    let obs = obstructions(rb);
    if !obs.is_empty() {
        return Ok(Check::Holds(format!("obstruction at {obs:?}")));
    }
    let n = rb.emb.n();
    let ends = [p0, p1];
    let adjacent = g.has_edge(p0, p1);
    for (j, &y) in [rb.path[2], rb.path[3]].iter().enumerate() {
        let mut witnessed = false;
        'search: for i in 0..2 {
            let (pi, po) = (ends[i], ends[1 - i]);
            for a in rb.lists.get(pi).iter() {
                let others = if adjacent { rb.lists.get(po).without(a) } else { rb.lists.get(po) };
                let mut all = true;
                for b in others.iter() {
                    let fixed = PartialColoring::from_pairs(n, &[(pi, a), (po, b)]);
                    if rb.find_crown(oracle, &fixed, |phi| phi.contains(y))?.is_none() {
                        all = false;
                        break;
                    }
                }
                if all {
                    witnessed = true;
                    break 'search;
                }
            }
        }
        if !witnessed {
            return Ok(Check::Violated(format!("no end color works for y_{j}")));
        }
    }
    Ok(Check::Holds("every middle vertex has a good end color".into()))
}

/// List sizes requested for a random rainbow.
#[derive(Clone, Copy, Debug)]
pub struct ListShape {
    pub palette: usize,
    /// Inclusive size range on the two ends of `P`.
    pub ends: (usize, usize),
    /// Inclusive size range on the internal vertices of `P`.
    pub interior: (usize, usize),
    /// Size on `C ∖ P` (at least three).
    pub rest: usize,
}

/// Random lists shaped by `shape` (`G ∖ C` gets 5-lists).
pub fn random_rainbow_lists(
    rng: &mut SplitMix64,
    n: usize,
    cycle: &[usize],
    path: &[usize],
    shape: ListShape,
) -> ListAssignment {
    let palette = ColorSet::range(0, shape.palette as Color);
    let mut lists = vec![ColorSet::EMPTY; n];
    for (v, l) in lists.iter_mut().enumerate() {
        let size = if v == path[0] || v == *path.last().unwrap() {
            rng.range(shape.ends.0, shape.ends.1)
        } else if path.contains(&v) {
            rng.range(shape.interior.0, shape.interior.1)
        } else if cycle.contains(&v) {
            shape.rest
        } else {
            5
        };
        *l = rng.subset(palette, size.min(shape.palette));
    }
    ListAssignment::new(lists)
}

/// The subpath of `cycle` with `len` edges starting at index `start`.
pub fn cycle_subpath(cycle: &[usize], start: usize, len: usize) -> Vec<usize> {
    let k = cycle.len();
    (0..=len).map(|i| cycle[(start + i) % k]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{broken_wheel, near_triangulations};

    #[test]
    fn broken_wheels_are_recognized() {
        for l in 2..7 {
            let emb = broken_wheel(l).unwrap();
            let (hub, rim) = broken_wheel_structure(emb.graph(), None).unwrap();
            assert_eq!(hub, 0);
            assert_eq!(rim.len(), l);
        }
        let k4 = crate::embedding::samples::tetrahedron();
        assert!(broken_wheel_structure(k4.graph(), None).is_none());
    }

    #[test]
    fn triangle_end_sets() {
        let emb = crate::embedding::samples::triangle();
        let lists = ListAssignment::new(vec![
            ColorSet::singleton(1),
            ColorSet::range(0, 5),
            ColorSet::from_iter([1, 2]),
        ]);
        let rb = Rainbow::new(&emb, &[0, 1, 2], &[0, 1, 2], &lists).unwrap();
        let end = rb.end_set(&Oracle::default()).unwrap();
        assert_eq!(end, vec![(1, 2)]);
        // Sizes 1 + 2 are below the end-linked threshold.
        assert!(!rb.is_end_linked());
    }

    #[test]
    fn two_path_ends_on_small_near_triangulations() {
        let oracle = Oracle::default();
        let mut rng = SplitMix64::new(9);
        let shape = ListShape { palette: 5, ends: (1, 3), interior: (1, 5), rest: 3 };
        let mut held = 0;
        for nt in near_triangulations(7, &[3, 4, 5, 6]).unwrap() {
            for start in 0..nt.outer.len() {
                let path = cycle_subpath(&nt.outer, start, 2);
                let lists = random_rainbow_lists(&mut rng, nt.embedding.n(), &nt.outer, &path, shape);
                let rb = Rainbow::new(&nt.embedding, &nt.outer, &path, &lists).unwrap();
                let c = check_two_path_ends(&rb, &oracle).unwrap();
                assert!(!c.is_violated(), "{c:?}");
                held += c.holds() as usize;
            }
        }
        assert!(held > 0);
    }

    #[test]
    fn crowns_are_verified() {
        let oracle = Oracle::default();
        let nts = near_triangulations(8, &[6]).unwrap();
        let nt = &nts[0];
        let mut rng = SplitMix64::new(3);
        let path = cycle_subpath(&nt.outer, 0, 4);
        let shape = ListShape { palette: 6, ends: (3, 3), interior: (5, 5), rest: 3 };
        let lists = random_rainbow_lists(&mut rng, nt.embedding.n(), &nt.outer, &path, shape);
        let rb = Rainbow::new(&nt.embedding, &nt.outer, &path, &lists).unwrap();
        for phi in rb.crown_set(&oracle, 10).unwrap() {
            assert!(rb.is_crown(&phi, &oracle).unwrap());
        }
    }
}
