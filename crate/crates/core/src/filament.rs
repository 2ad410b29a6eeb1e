//! Coloring and deleting long paths: `Mid` sets, `P`-gaps, filaments and
//! the path sweep that turns a filament into a certified reduction.
//!
//! A coloring of every vertex of a path `P` makes `(V(P), τ)` trivially
//! inert, so a reduction only has to keep `|L_τ(v)| ≥ 3` for 5-listed
//! vertices next to `P`. On a shortest path each such vertex sees at most
//! three consecutive path vertices, so the feasible colorings form a
//! constraint chain that [`color_path`] solves exactly by dynamic
//! programming over pairs of consecutive colors.

use std::collections::HashMap;

use serde::Serialize;

use crate::colorset::{Color, ColorSet};
use crate::embedding::RotationEmbedding;
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};
use crate::listcolor::{check_reduction, ListAssignment, Oracle, PartialColoring, ReductionCertificate, ReductionSearch, Role, SearchOutcome};

/// Path neighbors (as path indices, sorted) of every vertex off the path.
fn path_neighbors(g: &Graph, path: &[usize]) -> HashMap<usize, Vec<usize>> {
    let mut on = vec![false; g.n()];
    for &p in path {
        on[p] = true;
    }
    let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &p) in path.iter().enumerate() {
        for &v in g.neighbors(p) {
            if !on[v] {
                out.entry(v).or_default().push(i);
            }
        }
    }
    out
}

/// `Mid(P | q)`: vertices `v ∉ P` with `|L(v)| ≥ 5` whose path neighbors
/// induce a 2-path with midpoint `path[qi]`. At most one vertex in
/// `K_{2,3}`-free hosts; all are returned so callers can check that.
pub fn mid_set(g: &Graph, lists: &ListAssignment, path: &[usize], qi: usize) -> Vec<usize> {
    let q = path[qi];
    let mut out: Vec<usize> = g
        .neighbors(q)
        .iter()
        .copied()
        .filter(|&v| !path.contains(&v) && lists.get(v).len() >= 5)
        .filter(|&v| {
            let nb: Vec<usize> = g.neighbors(v).iter().copied().filter(|u| path.contains(u)).collect();
            nb.len() == 3 && nb.iter().all(|&u| u == q || (g.has_edge(u, q) && nb.iter().all(|&x| x == u || x == q || !g.has_edge(u, x))))
        })
        .collect();
    out.sort_unstable();
    out
}

/// `Mid(P)` as `(path index, vertex)` pairs.
pub fn mid_all(g: &Graph, lists: &ListAssignment, path: &[usize]) -> Vec<(usize, usize)> {
    (0..path.len()).flat_map(|i| mid_set(g, lists, path, i).into_iter().map(move |w| (i, w))).collect()
}

/// Whether the internal vertex `path[xi]` is a `P`-gap.
pub fn p_gap(g: &Graph, lists: &ListAssignment, path: &[usize], xi: usize) -> bool {
    xi > 0 && xi + 1 < path.len() && mid_set(g, lists, path, xi).is_empty()
}

/// Colors every vertex of `path`, extending `fixed`, so that the result is
/// proper and every uncolored 5-listed neighbor of the colored set keeps at
/// least three colors. Exact (returns `None` only if no such coloring
/// exists). Requires an induced path on which every outside vertex sees a
/// window of at most three consecutive path vertices — true for shortest
/// paths.
pub fn color_path(g: &Graph, lists: &ListAssignment, path: &[usize], fixed: &PartialColoring) -> Result<Option<PartialColoring>> {
    let m = path.len();
    if m == 0 {
        return Ok(Some(fixed.clone()));
    }
    if !g.is_path(path) {
        return Err(Error::Hypothesis(format!("{path:?} is not a path")));
    }
    for i in 0..m {
        for j in i + 2..m {
            if g.has_edge(path[i], path[j]) {
                return Err(Error::Hypothesis(format!("path is not induced ({} ~ {})", path[i], path[j])));
            }
        }
    }
    let nbrs = path_neighbors(g, path);
    // Outside constraints, keyed by the largest path index they involve.
    let mut checks: Vec<Vec<(Vec<usize>, ColorSet)>> = vec![Vec::new(); m];
    for (&v, idx) in &nbrs {
        if fixed.contains(v) {
            continue;
        }
        let lo = idx[0];
        let hi = *idx.last().unwrap();
        if hi - lo > 2 {
            return Err(Error::Hypothesis(format!("vertex {v} sees path vertices {lo}..={hi}; the path is not shortest")));
        }
        if lists.get(v).len() < 5 {
            continue;
        }
        // Colors already removed from L(v) by fixed vertices off the path.
        let mut base = lists.get(v);
        for &u in g.neighbors(v) {
            if !path.contains(&u) {
                if let Some(c) = fixed.get(u) {
                    base.remove(c);
                }
            }
        }
        checks[hi].push((idx.clone(), base));
    }
    let options: Vec<ColorSet> = (0..m)
        .map(|i| {
            let p = path[i];
            if let Some(c) = fixed.get(p) {
                return ColorSet::singleton(c);
            }
            let mut l = lists.get(p);
            for &u in g.neighbors(p) {
                if !path.contains(&u) {
                    if let Some(c) = fixed.get(u) {
                        l.remove(c);
                    }
                }
            }
            l
        })
        .collect();
    const NONE: Color = Color::MAX;
    // layer[i]: (c_{i-1}, c_i) -> predecessor c_{i-2}.
    let mut layers: Vec<HashMap<(Color, Color), Color>> = Vec::with_capacity(m);
    let ok = |i: usize, c2: Color, c1: Color, c0: Color| -> bool {
        checks[i].iter().all(|(idx, base)| {
            let mut r = *base;
            for &j in idx {
                let c = if j == i { c0 } else if j + 1 == i { c1 } else { c2 };
                r.remove(c);
            }
            r.len() >= 3
        })
    };
    let mut first = HashMap::new();
    for c in options[0].iter() {
        if ok(0, NONE, NONE, c) {
            first.insert((NONE, c), NONE);
        }
    }
    layers.push(first);
    for i in 1..m {
        let mut next: HashMap<(Color, Color), Color> = HashMap::new();
        let mut prev: Vec<(Color, Color)> = layers[i - 1].keys().copied().collect();
        prev.sort_unstable();
        for (c2, c1) in prev {
            for c in options[i].iter() {
                if c == c1 || !ok(i, c2, c1, c) {
                    continue;
                }
                next.entry((c1, c)).or_insert(c2);
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        layers.push(next);
    }
    let Some(&(mut a, mut b)) = layers[m - 1].keys().min() else { return Ok(None) };
    let mut tau = fixed.clone();
    for i in (0..m).rev() {
        tau.set(path[i], b);
        let pred = layers[i][&(a, b)];
        b = a;
        a = pred;
    }
    Ok(Some(tau))
}

/// The forward sweep that extends an element of `Red(Q′)` (`Q′` the first
/// `prefix` vertices of `q`) to an element of `Red(Q)`: color `p_{j+1}`
/// with the smallest color keeping the `Mid(Q | p_j)` vertex at three or
/// more colors. The result is verified with [`check_reduction`].
pub fn red_extend(
    g: &Graph,
    lists: &ListAssignment,
    q: &[usize],
    prefix: usize,
    phi: &PartialColoring,
    oracle: &Oracle,
) -> Result<PartialColoring> {
    if prefix == 0 || prefix > q.len() {
        return Err(Error::InvalidArgument("the terminal subpath must be a nonempty prefix".into()));
    }
    if !g.is_shortest_path(q) {
        return Err(Error::Hypothesis("Q is not a shortest path".into()));
    }
    if let Some(&v) = q[prefix..].iter().find(|&&v| lists.get(v).len() < 5) {
        return Err(Error::Hypothesis(format!("vertex {v} of Q − Q′ has a list shorter than five")));
    }
    if let Some(&v) = q[..prefix].iter().find(|&&v| !phi.contains(v)) {
        return Err(Error::InvalidArgument(format!("vertex {v} of Q′ is uncolored")));
    }
    let mut psi = phi.clone();
    for j in prefix - 1..q.len() - 1 {
        let next = q[j + 1];
        let avail = lists.residual(g, &psi, next);
        let mids = mid_set(g, lists, q, j);
        let pick = avail.iter().find(|&c| {
            mids.iter().all(|&w| {
                let mut r = lists.residual(g, &psi, w);
                r.remove(c);
                psi.contains(w) || r.len() >= 3
            })
        });
        let c = pick.ok_or_else(|| Error::TheoremViolation(format!("sweep stuck at {next}")))?;
        psi.set(next, c);
    }
    match check_reduction(g, lists, q, &psi, false, oracle)? {
        Ok(_) => Ok(psi),
        Err(r) => Err(Error::TheoremViolation(format!("sweep output is not a reduction: {r:?}"))),
    }
}

/// A filament `(P, T, T′, f)`: `T` is the first `t` vertices of `path`,
/// `T′` the last `t_prime`, and `f` colors a subset of `V(T ∪ T′)`.
#[derive(Clone, Debug, Serialize)]
pub struct Filament {
    pub path: Vec<usize>,
    pub t: usize,
    pub t_prime: usize,
    pub f: PartialColoring,
}

/// Minimum length of `P ∖ (T ∪ T′)`.
pub const FILAMENT_MIN_LENGTH: usize = 30;

impl Filament {
    /// `P ∖ (T ∪ T′)`.
    pub fn middle(&self) -> &[usize] {
        &self.path[self.t..self.path.len() - self.t_prime]
    }

    pub fn terminals(&self) -> Vec<usize> {
        let m = self.path.len();
        self.path[..self.t].iter().chain(&self.path[m - self.t_prime..]).copied().collect()
    }

    /// Checks the three filament clauses. With `relax_length` the length
    /// floor is skipped (for experiments; such runs are not theorem checks).
    pub fn validate(&self, emb: &RotationEmbedding, lists: &ListAssignment, oracle: &Oracle, relax_length: bool) -> Result<()> {
        let g = emb.graph();
        let m = self.path.len();
        if self.t == 0 || self.t_prime == 0 || self.t + self.t_prime >= m {
            return Err(Error::Hypothesis("T and T′ must be disjoint, nonempty and leave a middle".into()));
        }
        if !g.is_shortest_path(&self.path) {
            return Err(Error::Hypothesis("P is not a shortest path between its endpoints".into()));
        }
        let middle = self.middle();
        if !relax_length && middle.len() - 1 < FILAMENT_MIN_LENGTH {
            return Err(Error::Hypothesis(format!(
                "P ∖ (T ∪ T′) has length {} < {FILAMENT_MIN_LENGTH}",
                middle.len() - 1
            )));
        }
        let near = g.ball(middle, 1);
        if let Some(&v) = near.iter().find(|&&v| lists.get(v).len() < 5) {
            return Err(Error::Hypothesis(format!("vertex {v} near the middle has a list shorter than five")));
        }
        let mut is_near = vec![false; g.n()];
        for &v in &near {
            is_near[v] = true;
        }
        for f in 0..emb.num_faces() {
            let walk = emb.face_walk(f);
            if walk.len() != 3 && walk.iter().any(|&v| is_near[v]) {
                return Err(Error::Hypothesis(format!("face {walk:?} near the middle is not a triangle")));
            }
        }
        let terminals = self.terminals();
        if let Some(v) = self.f.domain().into_iter().find(|v| !terminals.contains(v)) {
            return Err(Error::Hypothesis(format!("f colors {v}, outside T ∪ T′")));
        }
        if let Err(r) = check_reduction(g, lists, &self.f.domain(), &self.f, false, oracle)? {
            return Err(Error::Hypothesis(format!("(f, dom f) is not a reduction: {r:?}")));
        }
        Ok(())
    }
}

/// Output of [`filament_reduce`]: `(V(H), τ)` with `P ⊆ H`.
#[derive(Clone, Debug, Serialize)]
pub struct FilamentReduction {
    pub h: Vec<usize>,
    pub tau: PartialColoring,
    pub certificate: ReductionCertificate,
    /// `"sweep"` when all of `P` was colored by the exact path sweep,
    /// `"search"` when extra vertices next to the middle were needed.
    pub method: &'static str,
}

/// Finds `H ⊇ P` with `V(H ∖ P) ⊆ B_1(middle)`, `d(H ∖ P, T ∪ T′) ≥ 3`
/// and a reduction `(V(H), τ)` with `τ ⊇ f`.
pub fn filament_reduce(
    emb: &RotationEmbedding,
    lists: &ListAssignment,
    fil: &Filament,
    oracle: &Oracle,
    budget: u64,
) -> Result<FilamentReduction> {
    let g = emb.graph();
    if let Some(tau) = color_path(g, lists, &fil.path, &fil.f)? {
        if let Ok(cert) = check_reduction(g, lists, &fil.path, &tau, false, oracle)? {
            let mut h = fil.path.clone();
            h.sort_unstable();
            return Ok(FilamentReduction { h, tau, certificate: cert, method: "sweep" });
        }
    }
    let terminals = fil.terminals();
    let dist_t = g.distances_from(&terminals);
    let mut roles = vec![Role::Outside; g.n()];
    for &p in &fil.path {
        roles[p] = Role::Optional;
    }
    for v in g.ball(fil.middle(), 1) {
        if roles[v] == Role::Outside && dist_t[v] >= 3 && dist_t[v] != UNREACHED {
            roles[v] = Role::Optional;
        }
    }
    let mut search = ReductionSearch::new(g, lists, roles, fil.f.clone())?.oracle(*oracle).budget(budget);
    match search.find_first()? {
        SearchOutcome::Found(cert) => {
            // `H` must contain the path even where the search left no choice.
            let mut h = cert.a.clone();
            for &p in &fil.path {
                if !h.contains(&p) {
                    return Err(Error::SearchExhausted { stage: "filament".into(), detail: format!("path vertex {p} dropped") });
                }
            }
            h.sort_unstable();
            Ok(FilamentReduction { h, tau: cert.phi.clone(), certificate: cert, method: "search" })
        }
        SearchOutcome::Exhausted => Err(Error::SearchExhausted { stage: "filament".into(), detail: "no reduction of the required shape".into() }),
        SearchOutcome::BudgetExceeded { nodes } => {
            Err(Error::SearchExhausted { stage: "filament".into(), detail: format!("budget exhausted after {nodes} nodes") })
        }
    }
}

/// Checks the clauses of the path-reduction theorem on an output.
pub fn check_filament_output(g: &Graph, fil: &Filament, out: &FilamentReduction) -> Result<()> {
    let in_h: Vec<bool> = (0..g.n()).map(|v| out.h.binary_search(&v).is_ok()).collect();
    if let Some(&p) = fil.path.iter().find(|&&p| !in_h[p]) {
        return Err(Error::TheoremViolation(format!("path vertex {p} missing from H")));
    }
    let extra: Vec<usize> = out.h.iter().copied().filter(|v| !fil.path.contains(v)).collect();
    let near = g.distances_from(fil.middle());
    if let Some(&v) = extra.iter().find(|&&v| near[v] > 1) {
        return Err(Error::TheoremViolation(format!("{v} ∈ H ∖ P is not next to the middle")));
    }
    let dt = g.distances_from(&fil.terminals());
    if let Some(&v) = extra.iter().find(|&&v| dt[v] < 3) {
        return Err(Error::TheoremViolation(format!("{v} ∈ H ∖ P is within distance two of T ∪ T′")));
    }
    if !out.tau.extends(&fil.f) {
        return Err(Error::TheoremViolation("τ does not extend f".into()));
    }
    Ok(())
}

/// Result of a structural gap scan.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GapScan {
    /// Windows meeting the distance hypothesis.
    pub windows: usize,
    /// Windows where the gap conclusion holds outright.
    pub direct: usize,
    /// Windows where it fails but the filament is not bad (hypothesis unmet).
    pub vacuous: usize,
    /// Windows of a bad filament without the promised gap.
    pub violations: Vec<usize>,
}

fn scan(g: &Graph, lists: &ListAssignment, fil: &Filament, bad: bool, len: usize, min_dist: usize, holds: impl Fn(&[usize]) -> bool) -> GapScan {
    let dt = g.distances_from(&fil.terminals());
    let p = &fil.path;
    let mut out = GapScan::default();
    if p.len() <= len {
        return out;
    }
    for s in 0..p.len() - len {
        let window: Vec<usize> = (s..=s + len).collect();
        if window.iter().any(|&i| dt[p[i]] < min_dist) {
            continue;
        }
        out.windows += 1;
        if holds(&window) {
            out.direct += 1;
        } else if bad {
            out.violations.push(s);
        } else {
            out.vacuous += 1;
        }
    }
    let _ = lists;
    out
}

/// For every subpath `Q` of length four with `d(Q, T ∪ T′) ≥ 4` and
/// midpoint `p`: if the filament is bad, some vertex of `Q − p` is a
/// `P`-gap.
pub fn scan_length_four(g: &Graph, lists: &ListAssignment, fil: &Filament, bad: bool) -> GapScan {
    scan(g, lists, fil, bad, 4, 4, |w| w.iter().enumerate().any(|(k, &i)| k != 2 && p_gap(g, lists, &fil.path, i)))
}

/// For every subpath `Q` of length two with `d(Q, T ∪ T′) ≥ 5`: if the
/// filament is bad, some endpoint of `Q` is a `P`-gap.
pub fn scan_length_two(g: &Graph, lists: &ListAssignment, fil: &Filament, bad: bool) -> GapScan {
    scan(g, lists, fil, bad, 2, 5, |w| p_gap(g, lists, &fil.path, w[0]) || p_gap(g, lists, &fil.path, w[2]))
}

/// A seeded filament host: a triangulated planar strip with a monotone
/// shortest path (steps right or up-right) through its interior, random
/// 5-lists, and a random reduction `f` coloring every terminal vertex
/// (empty if fifty draws find none).
pub fn strip_filament(seed: u64, middle_len: usize) -> Result<(RotationEmbedding, ListAssignment, Filament)> {
    use crate::generators::{fan_strip, SplitMix64};
    let mut rng = SplitMix64::new(seed ^ 0xF11A);
    let t = rng.range(2, 3);
    let t_prime = rng.range(2, 3);
    let len = middle_len + t + t_prime;
    let ups = rng.below(5);
    let rows = ups + 5;
    let strip = fan_strip(len, rows)?;
    let w = len + 1;
    let mut steps = vec![false; len];
    for s in steps.iter_mut().take(ups) {
        *s = true;
    }
    rng.shuffle(&mut steps);
    let mut y = 2;
    let mut path = vec![y * w];
    for (x, &up) in steps.iter().enumerate() {
        if up {
            y += 1;
        }
        path.push(y * w + x + 1);
    }
    let palette = ColorSet::range(0, 6);
    let lists: Vec<ColorSet> = (0..strip.n()).map(|_| rng.subset(palette, 5)).collect();
    let lists = ListAssignment::new(lists);
    let g = strip.graph();
    let oracle = Oracle::default();
    let terminals: Vec<usize> = path[..t].iter().chain(&path[path.len() - t_prime..]).copied().collect();
    let mut f = PartialColoring::new(strip.n());
    for _ in 0..50 {
        let mut cand = PartialColoring::new(strip.n());
        for &v in &terminals {
            let avail = lists.get(v).difference(g.neighbors(v).iter().filter_map(|&u| cand.get(u)).collect());
            if let Some(c) = rng.subset(avail, 1).min() {
                cand.set(v, c);
            }
        }
        if check_reduction(g, &lists, &cand.domain(), &cand, false, &oracle)?.is_ok() {
            f = cand;
            break;
        }
    }
    Ok((strip, lists, Filament { path, t, t_prime, f }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fan_strip;

    #[test]
    fn straight_row_has_only_gaps() {
        let s = fan_strip(10, 4).unwrap();
        let lists = ListAssignment::uniform(s.n(), ColorSet::range(0, 5));
        let path: Vec<usize> = (0..=10).map(|x| 11 + x).collect();
        for i in 1..10 {
            assert!(p_gap(s.graph(), &lists, &path, i));
        }
    }

    #[test]
    fn staircase_creates_mid_vertices() {
        let s = fan_strip(10, 5).unwrap();
        let lists = ListAssignment::uniform(s.n(), ColorSet::range(0, 5));
        // (0,1) (1,1) (2,2) (3,2): the bend at (1,1)→(2,2).
        let w = 11;
        let path = vec![w, w + 1, 2 * w + 2, 2 * w + 3];
        let mids = mid_all(s.graph(), &lists, &path);
        assert!(mids.iter().all(|&(i, _)| i == 1 || i == 2));
        assert!(!mids.is_empty());
        for i in 0..path.len() {
            assert!(mid_set(s.graph(), &lists, &path, i).len() <= 1);
        }
    }

    #[test]
    fn sweep_extends_short_prefix() {
        let (emb, lists, fil) = strip_filament(3, 12).unwrap();
        let g = emb.graph();
        let o = Oracle::default();
        let mut phi = PartialColoring::new(g.n());
        let a = lists.get(fil.path[0]).min().unwrap();
        phi.set(fil.path[0], a);
        let b = lists.get(fil.path[1]).without(a).min().unwrap();
        phi.set(fil.path[1], b);
        let out = red_extend(g, &lists, &fil.path, 2, &phi, &o).unwrap();
        assert!(fil.path.iter().all(|&p| out.contains(p)));
        assert!(out.extends(&phi));
    }

    #[test]
    fn dp_matches_exhaustive_red_set_on_short_paths() {
        let o = Oracle::default();
        for seed in 0..20 {
            let (emb, lists, fil) = strip_filament(seed, 3).unwrap();
            let g = emb.graph();
            let q: Vec<usize> = fil.path[..6].to_vec();
            let red = crate::listcolor::red_set(g, &lists, &q, &[], None, &o).unwrap();
            let dp = color_path(g, &lists, &q, &PartialColoring::new(g.n())).unwrap();
            assert_eq!(red.is_empty(), dp.is_none(), "seed {seed}");
            if let Some(tau) = dp {
                assert!(red.contains(&tau));
            }
        }
    }

    #[test]
    fn filaments_reduce() {
        let o = Oracle::default();
        for seed in 0..5 {
            let (emb, lists, fil) = strip_filament(seed, 30).unwrap();
            fil.validate(&emb, &lists, &o, false).unwrap();
            let out = filament_reduce(&emb, &lists, &fil, &o, 100_000).unwrap();
            check_filament_output(emb.graph(), &fil, &out).unwrap();
            let g = emb.graph();
            assert!(scan_length_four(g, &lists, &fil, false).violations.is_empty());
            assert!(scan_length_two(g, &lists, &fil, false).violations.is_empty());
        }
    }

    #[test]
    fn terminal_colorings_with_holes_can_block_every_reduction() {
        // f colors 219 and 258 but not 220 between them; the vertex 257 sees
        // all three, so coloring 220 leaves 257 two colors and leaving 220
        // uncolored is not inert. No extra vertex may come that close to T′.
        let (emb, lists, mut fil) = strip_filament(13386624050716169655, 30).unwrap();
        let g = emb.graph();
        let o = Oracle::default();
        assert_eq!(&fil.path[fil.path.len() - 3..], &[219, 220, 258]);
        fil.f = PartialColoring::from_pairs(g.n(), &[(219, 4), (258, 1)]);
        fil.validate(&emb, &lists, &o, false).unwrap();
        assert!(color_path(g, &lists, &fil.path, &fil.f).unwrap().is_none());
        let residual = lists.get(257).without(4).without(1);
        assert_eq!(residual.len(), 3);
        assert!(lists.get(220).without(4).without(1).is_subset(residual));
        // With every terminal colored the same host reduces.
        let (emb, lists, fil) = strip_filament(13386624050716169655, 30).unwrap();
        assert_eq!(fil.f.size(), fil.t + fil.t_prime);
        let out = filament_reduce(&emb, &lists, &fil, &o, 100_000).unwrap();
        check_filament_output(emb.graph(), &fil, &out).unwrap();
    }

    #[test]
    fn short_filament_is_rejected() {
        let (emb, lists, fil) = strip_filament(1, 10).unwrap();
        let err = fil.validate(&emb, &lists, &Oracle::default(), false).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
        fil.validate(&emb, &lists, &Oracle::default(), true).unwrap();
    }
}
