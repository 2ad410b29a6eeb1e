//! Constructive list coloring of plane graphs.
//!
//! [`thomassen_extend`] follows the classical inductive proof that planar
//! graphs are 5-choosable in its strong form: given a plane graph whose outer
//! face is bounded by a cycle `C`, an edge `xy` of `C` with `x, y` colored,
//! lists of size at least three on the rest of `C` and at least five inside,
//! the coloring extends. The recursion works on near-triangulations, so
//! non-triangular inner faces are first filled with a ring of dummy vertices
//! and a hub whose lists use fresh colors that no real vertex can see.
//!
//! The recursion itself:
//!
//! * if the outer walk repeats a vertex, split at that cut vertex and solve
//!   the part containing `xy` first;
//! * if `C` has a chord, split along it, again solving the `xy` side first;
//! * otherwise delete the outer neighbor `v` of `x` other than `y`, reserve
//!   the two smallest colors of `L(v) ∖ {φ(x)}`, remove them from the inner
//!   neighbors of `v`, recurse, and finally color `v` with a reserved color.
//!
//! Also here: the short-cycle corollary, the two-2-lists theorem (branching
//! plus oracle fallback) and the classification of non-extendable precolored
//! 5- and 6-cycles.

use serde::Serialize;

use crate::colorset::{Color, ColorSet, MAX_COLOR};
use crate::embedding::RotationEmbedding;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::listcolor::{ListAssignment, Oracle, PartialColoring};

/// How a coloring was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    /// The constructive recursion.
    Constructive,
    /// Exhaustive search (after the constructive route failed or was not applicable).
    Oracle,
}

/// A full coloring and how it was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub coloring: PartialColoring,
    pub method: Method,
}

/// A near-triangulated copy of a plane embedding.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub embedding: RotationEmbedding,
    pub lists: ListAssignment,
    /// Vertices `0..n_real` are the original ones.
    pub n_real: usize,
}

/// Fills every face other than `outer_face` that is not a triangle with a
/// ring `r_0 … r_{k−1}` (with `r_i` adjacent to `w_i, w_{i+1}, r_{i±1}`) and a
/// hub adjacent to the ring. New vertices get five colors unused by `lists`.
pub fn normalize(emb: &RotationEmbedding, outer_face: usize, lists: &ListAssignment) -> Result<Normalized> {
    let n = emb.n();
    let big: Vec<usize> = (0..emb.num_faces()).filter(|&f| f != outer_face && emb.face_darts(f).len() > 3).collect();
    if big.is_empty() {
        return Ok(Normalized { embedding: emb.clone(), lists: lists.clone(), n_real: n });
    }
    let palette = lists.palette();
    let fresh: ColorSet = (0..=MAX_COLOR).filter(|&c| !palette.contains(c)).take(5).collect();
    if fresh.len() < 5 {
        return Err(Error::InvalidArgument("no room for five fresh colors".into()));
    }
    let base = emb.rotations();
    let genus = emb.genus()?;
    for (flip_ring, flip_hub) in [(false, false), (true, true), (false, true), (true, false)] {
        let mut rot = base.clone();
        // Insertions at original vertices: anchor neighbor → inserted vertices.
        let mut before: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); n];
        let mut next_id = n;
        for &f in &big {
            let darts = emb.face_darts(f);
            let k = darts.len();
            let ring: Vec<usize> = (0..k).map(|i| next_id + i).collect();
            let hub = next_id + k;
            next_id += k + 1;
            let w: Vec<usize> = darts.iter().map(|&d| emb.tail(d)).collect();
            for i in 0..k {
                let anchor = emb.head(darts[i]);
                before[w[i]].push((anchor, vec![ring[(i + k - 1) % k], ring[i]]));
            }
            for i in 0..k {
                let mut r = vec![w[i], w[(i + 1) % k], ring[(i + 1) % k], hub, ring[(i + k - 1) % k]];
                if flip_ring {
                    r.reverse();
                }
                rot.push(r);
            }
            let mut h = ring.clone();
            if flip_hub {
                h.reverse();
            }
            rot.push(h);
        }
        for v in 0..n {
            if before[v].is_empty() {
                continue;
            }
            let mut out = Vec::new();
            for &u in &base[v] {
                for (anchor, ins) in &before[v] {
                    if *anchor == u {
                        out.extend(ins.iter().copied());
                    }
                }
                out.push(u);
            }
            rot[v] = out;
        }
        let Ok(candidate) = RotationEmbedding::from_rotations(&rot) else { continue };
        if candidate.genus().ok() != Some(genus) {
            continue;
        }
        let triangulated = (0..candidate.num_faces()).filter(|&f| candidate.face_darts(f).len() > 3).count() == 1
            || candidate.faces().iter().all(|f| f.len() == 3);
        if !triangulated {
            continue;
        }
        let mut l = lists.as_slice().to_vec();
        l.resize(candidate.n(), fresh);
        return Ok(Normalized { embedding: candidate, lists: ListAssignment::new(l), n_real: n });
    }
    Err(Error::Inconsistent("could not triangulate the inner faces".into()))
}

/// The recursive solver on a fixed near-triangulation.
struct Solver<'a> {
    emb: &'a RotationEmbedding,
    lists: Vec<ColorSet>,
    color: Vec<Option<Color>>,
}

fn fail(detail: impl Into<String>) -> Error {
    Error::SearchExhausted { stage: "planar-recursion".into(), detail: detail.into() }
}

impl<'a> Solver<'a> {
    fn mask(&self, region: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.emb.n()];
        for &v in region {
            m[v] = true;
        }
        m
    }

    fn available(&self, v: usize) -> ColorSet {
        let mut l = self.lists[v];
        for &w in self.emb.graph().neighbors(v) {
            if let Some(c) = self.color[w] {
                l.remove(c);
            }
        }
        l
    }

    fn color_min(&mut self, v: usize) -> Result<()> {
        if self.color[v].is_some() {
            return Ok(());
        }
        let c = self.available(v).min().ok_or_else(|| fail(format!("vertex {v} has no color left")))?;
        self.color[v] = Some(c);
        Ok(())
    }

    /// Splits interior vertices of `region` (those not on `walk`) between the
    /// two sides, by adjacency to the vertices private to side one.
    fn split_interior(&self, region: &[usize], walk: &[usize], private_one: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let g = self.emb.graph();
        let on_walk = self.mask(walk);
        let interior_mask: Vec<bool> = {
            let mut m = self.mask(region);
            for &w in walk {
                m[w] = false;
            }
            m
        };
        let p1 = self.mask(private_one);
        let mut one = Vec::new();
        let mut two = Vec::new();
        for comp in g.components_of(&interior_mask) {
            let touches = comp.iter().any(|&u| g.neighbors(u).iter().any(|&w| p1[w] && on_walk[w]));
            if touches {
                one.extend(comp);
            } else {
                two.extend(comp);
            }
        }
        (one, two)
    }

    fn solve(&mut self, region: Vec<usize>, walk: Vec<usize>) -> Result<()> {
        let k = walk.len();
        if k <= 1 {
            for &v in &region {
                self.color_min(v)?;
            }
            return Ok(());
        }
        debug_assert!(self.color[walk[0]].is_some() && self.color[walk[1]].is_some());
        // Cut vertex on the outer walk.
        let mut first_seen = vec![usize::MAX; self.emb.n()];
        let mut repeat = None;
        for (t, &w) in walk.iter().enumerate() {
            if first_seen[w] != usize::MAX {
                repeat = Some((first_seen[w], t));
                break;
            }
            first_seen[w] = t;
        }
        if let Some((a, b)) = repeat {
            let z = walk[a];
            let loop_walk: Vec<usize> = walk[a..b].to_vec();
            let rest: Vec<usize> = walk[..a].iter().chain(walk[b..].iter()).copied().collect();
            let private_loop: Vec<usize> = loop_walk.iter().copied().filter(|&v| v != z).collect();
            let (in_loop, in_rest) = self.split_interior(&region, &walk, &private_loop);
            let mut loop_region = loop_walk.clone();
            loop_region.extend(in_loop);
            loop_region.sort_unstable();
            loop_region.dedup();
            let mut rest_region = rest.clone();
            rest_region.extend(in_rest);
            rest_region.sort_unstable();
            rest_region.dedup();
            let (first, second) = if a == 0 {
                ((loop_region, loop_walk), (rest_region, rotate_to(&rest, z)))
            } else {
                ((rest_region, rest), (loop_region, loop_walk))
            };
            self.solve(first.0, first.1)?;
            let (r2, w2) = second;
            if w2.len() >= 2 {
                let y2 = w2[1];
                self.color_min(y2)?;
            }
            return self.solve(r2, w2);
        }
        if k == 2 {
            return Ok(());
        }
        // Chord of the outer cycle.
        let mut pos = vec![usize::MAX; self.emb.n()];
        for (i, &w) in walk.iter().enumerate() {
            pos[w] = i;
        }
        let g = self.emb.graph();
        let mut chord = None;
        'outer: for (i, &ci) in walk.iter().enumerate() {
            for &u in g.neighbors(ci) {
                let j = pos[u];
                if j != usize::MAX && j > i + 1 && !(i == 0 && j == k - 1) {
                    chord = Some((i, j));
                    break 'outer;
                }
            }
        }
        if let Some((i, j)) = chord {
            let c1: Vec<usize> = walk[i..=j].to_vec();
            let c2: Vec<usize> = walk[j..].iter().chain(walk[..=i].iter()).copied().collect();
            let private_one: Vec<usize> = walk[i + 1..j].to_vec();
            let (in1, in2) = self.split_interior(&region, &walk, &private_one);
            let mut r1 = c1.clone();
            r1.extend(in1);
            let mut r2 = c2.clone();
            r2.extend(in2);
            if i == 0 {
                let w2: Vec<usize> = std::iter::once(walk[0]).chain(walk[j..].iter().copied()).collect();
                self.solve(r1, c1)?;
                self.solve(r2, w2)
            } else {
                let w2: Vec<usize> = walk[..=i].iter().chain(walk[j..].iter()).copied().collect();
                let w1: Vec<usize> = std::iter::once(walk[j]).chain(walk[i..j].iter().copied()).collect();
                self.solve(r2, w2)?;
                self.solve(r1, w1)
            }
        } else {
            let v = walk[k - 1];
            let x = walk[0];
            let before = walk[k - 2];
            let mask = self.mask(&region);
            let rot: Vec<usize> = self.emb.rotation(v).into_iter().filter(|&u| mask[u]).collect();
            let start = rot.iter().position(|&u| u == x).ok_or_else(|| fail(format!("{v} not adjacent to {x}")))?;
            let mut inner = Vec::new();
            let mut t = (start + 1) % rot.len();
            while rot[t] != before {
                inner.push(rot[t]);
                t = (t + 1) % rot.len();
                if t == start {
                    return Err(fail(format!("rotation of {v} does not reach {before}")));
                }
            }
            let mut avail = self.lists[v];
            for &w in g.neighbors(v) {
                if w != before {
                    if let Some(c) = self.color[w] {
                        avail.remove(c);
                    }
                }
            }
            let reserved: ColorSet = avail.iter().take(2).collect();
            if reserved.len() < 2 {
                return Err(fail(format!("vertex {v} cannot reserve two colors")));
            }
            for &u in &inner {
                self.lists[u] = self.lists[u].difference(reserved);
            }
            let new_walk: Vec<usize> = walk[..k - 1].iter().copied().chain(inner.iter().rev().copied()).collect();
            let new_region: Vec<usize> = region.iter().copied().filter(|&u| u != v).collect();
            self.solve(new_region, new_walk)?;
            let mut choice = reserved;
            for &w in g.neighbors(v) {
                if let Some(c) = self.color[w] {
                    choice.remove(c);
                }
            }
            let c = choice.min().ok_or_else(|| fail(format!("vertex {v} lost both reserved colors")))?;
            self.color[v] = Some(c);
            Ok(())
        }
    }
}

fn rotate_to(walk: &[usize], z: usize) -> Vec<usize> {
    let p = walk.iter().position(|&w| w == z).unwrap_or(0);
    walk[p..].iter().chain(walk[..p].iter()).copied().collect()
}

/// Face walk in the subgraph induced by `mask`, starting with dart `d`.
fn trace_in(emb: &RotationEmbedding, mask: &[bool], d: usize) -> Vec<usize> {
    let step = |d: usize| {
        let mut e = emb.next(emb.twin(d));
        while !mask[emb.head(e)] {
            e = emb.next(e);
        }
        e
    };
    let mut walk = Vec::new();
    let mut cur = d;
    loop {
        walk.push(emb.tail(cur));
        cur = step(cur);
        if cur == d || walk.len() > emb.num_darts() {
            break;
        }
    }
    walk
}

/// Checks the hypotheses of the strong planar extension theorem.
pub fn check_thomassen_hypotheses(
    emb: &RotationEmbedding,
    outer: &[usize],
    x: usize,
    y: usize,
    lists: &ListAssignment,
) -> Result<()> {
    if emb.genus()? != 0 {
        return Err(Error::Hypothesis("the embedding is not planar".into()));
    }
    if emb.find_face(outer).is_none() || !emb.graph().is_cycle(outer) {
        return Err(Error::Hypothesis(format!("{outer:?} is not a facial cycle")));
    }
    let k = outer.len();
    let adjacent_on_c = (0..k).any(|i| {
        let (a, b) = (outer[i], outer[(i + 1) % k]);
        (a == x && b == y) || (a == y && b == x)
    });
    if !adjacent_on_c {
        return Err(Error::Hypothesis(format!("{x}{y} is not an edge of the outer cycle")));
    }
    let mut on_c = vec![false; emb.n()];
    for &v in outer {
        on_c[v] = true;
    }
    for v in 0..emb.n() {
        let need = if v == x || v == y {
            1
        } else if on_c[v] {
            3
        } else {
            5
        };
        if lists.get(v).len() < need {
            return Err(Error::Hypothesis(format!(
                "vertex {v} has a list of size {} (needs at least {need})",
                lists.get(v).len()
            )));
        }
    }
    Ok(())
}

/// Colors `x` and `y` from `precolor` where given, otherwise with the
/// smallest admissible colors.
fn seed_pair(lists: &ListAssignment, x: usize, y: usize, precolor: &PartialColoring) -> Result<(Color, Color)> {
    let cx = match precolor.get(x) {
        Some(c) => c,
        None => {
            let mut l = lists.get(x);
            if let Some(cy) = precolor.get(y) {
                l.remove(cy);
            }
            l.min().ok_or_else(|| Error::Hypothesis(format!("{x}{y} is not colorable from its lists")))?
        }
    };
    let cy = match precolor.get(y) {
        Some(c) => c,
        None => lists
            .get(y)
            .without(cx)
            .min()
            .ok_or_else(|| Error::Hypothesis(format!("{x}{y} is not colorable from its lists")))?,
    };
    if cx == cy || !lists.get(x).contains(cx) || !lists.get(y).contains(cy) {
        return Err(Error::Hypothesis(format!("{x}{y} is not properly colored from its lists")));
    }
    Ok((cx, cy))
}

/// Runs the recursion from a seeded state; returns the real-vertex coloring.
fn run_solver(
    norm: &Normalized,
    seeded: &[(usize, Color)],
    components: Vec<(Vec<usize>, Vec<usize>)>,
    list_override: Option<Vec<ColorSet>>,
) -> Result<PartialColoring> {
    let mut s = Solver {
        emb: &norm.embedding,
        lists: list_override.unwrap_or_else(|| norm.lists.as_slice().to_vec()),
        color: vec![None; norm.embedding.n()],
    };
    for &(v, c) in seeded {
        s.color[v] = Some(c);
    }
    for (region, walk) in components {
        if walk.len() >= 2 {
            let (a, b) = (walk[0], walk[1]);
            s.color_min(a)?;
            s.color_min(b)?;
        }
        s.solve(region, walk)?;
    }
    let mut out = PartialColoring::new(norm.n_real);
    for v in 0..norm.n_real {
        let c = s.color[v].ok_or_else(|| fail(format!("vertex {v} left uncolored")))?;
        out.set(v, c);
    }
    Ok(out)
}

/// The strong planar extension: colors all of `G` given the outer cycle
/// `outer`, an edge `xy` of it, and lists meeting the hypotheses. `precolor`
/// may fix the colors of `x` and `y` (and nothing else).
pub fn thomassen_extend(
    emb: &RotationEmbedding,
    outer: &[usize],
    x: usize,
    y: usize,
    lists: &ListAssignment,
    precolor: &PartialColoring,
) -> Result<PartialColoring> {
    check_thomassen_hypotheses(emb, outer, x, y, lists)?;
    if let Some(v) = precolor.domain().into_iter().find(|&v| v != x && v != y) {
        return Err(Error::Hypothesis(format!("only x and y may be precolored (found {v})")));
    }
    let (cx, cy) = seed_pair(lists, x, y, precolor)?;
    let (face, _) = emb.find_face(outer).expect("checked above");
    let norm = normalize(emb, face, lists)?;
    let ne = &norm.embedding;
    let (_, seq) = ne.find_face(outer).ok_or_else(|| Error::Inconsistent("outer face lost".into()))?;
    let k = seq.len();
    let walk = (0..k)
        .find_map(|i| {
            let (a, b) = (seq[i], seq[(i + 1) % k]);
            ((a == x && b == y) || (a == y && b == x)).then(|| rotate_to(&seq, a))
        })
        .expect("xy lies on the outer cycle");
    let region: Vec<usize> = (0..ne.n()).collect();
    let coloring = run_solver(&norm, &[(x, cx), (y, cy)], vec![(region, walk)], None)?;
    if !coloring.is_full_coloring(emb.graph(), lists) {
        return Err(Error::TheoremViolation("constructive recursion produced an invalid coloring".into()));
    }
    Ok(coloring)
}

/// Extension of a precolored facial cycle of length at most four into a
/// plane graph whose other vertices have 5-lists. Constructive: delete the
/// cycle vertices other than one colored edge, shrink neighbors' lists, and
/// run the recursion on each remaining component; the oracle is used only
/// if that fails.
pub fn extend_short_cycle(
    emb: &RotationEmbedding,
    cycle: &[usize],
    lists: &ListAssignment,
    phi: &PartialColoring,
    oracle: &Oracle,
) -> Result<Extension> {
    if emb.genus()? != 0 {
        return Err(Error::Hypothesis("the embedding is not planar".into()));
    }
    let k = cycle.len();
    if !(3..=4).contains(&k) || !emb.graph().is_cycle(cycle) {
        return Err(Error::Hypothesis(format!("{cycle:?} is not a cycle of length 3 or 4")));
    }
    let (face, _) = emb
        .find_face(cycle)
        .ok_or_else(|| Error::Hypothesis(format!("{cycle:?} is not a facial cycle")))?;
    let mut on_c = vec![false; emb.n()];
    for &v in cycle {
        on_c[v] = true;
        if phi.get(v).is_none() {
            return Err(Error::Hypothesis(format!("cycle vertex {v} is not precolored")));
        }
    }
    if let Some(v) = phi.domain().into_iter().find(|&v| !on_c[v]) {
        return Err(Error::Hypothesis(format!("vertex {v} off the cycle is precolored")));
    }
    phi.validate(emb.graph(), lists)?;
    if let Some(v) = (0..emb.n()).find(|&v| !on_c[v] && lists.get(v).len() < 5) {
        return Err(Error::Hypothesis(format!("inner vertex {v} has a list smaller than five")));
    }
    match constructive_short_cycle(emb, face, cycle, lists, phi) {
        Ok(c) if c.is_full_coloring(emb.graph(), lists) && c.extends(phi) => {
            return Ok(Extension { coloring: c, method: Method::Constructive })
        }
        _ => {}
    }
    match oracle.extend(emb.graph(), lists, phi)? {
        Some(c) => Ok(Extension { coloring: c, method: Method::Oracle }),
        None => Err(Error::TheoremViolation(format!("precoloring {phi:?} of {cycle:?} does not extend"))),
    }
}

fn constructive_short_cycle(
    emb: &RotationEmbedding,
    face: usize,
    cycle: &[usize],
    lists: &ListAssignment,
    phi: &PartialColoring,
) -> Result<PartialColoring> {
    let norm = normalize(emb, face, lists)?;
    let ne = &norm.embedding;
    let n = ne.n();
    let deleted: Vec<usize> = cycle[2..].to_vec();
    let mut mask = vec![true; n];
    for &v in &deleted {
        mask[v] = false;
    }
    let mut l = norm.lists.as_slice().to_vec();
    for &v in &deleted {
        let c = phi.get(v).expect("cycle is precolored");
        for &w in ne.graph().neighbors(v) {
            l[w].remove(c);
        }
    }
    let (x, y) = (cycle[0], cycle[1]);
    // Outer walk of every component of the remainder: start at a dart that
    // follows a removed dart in some rotation (for the xy component, at the
    // outer-face dart of xy).
    let (_, seq) = ne.find_face(cycle).ok_or_else(|| Error::Inconsistent("cycle face lost".into()))?;
    let xy_first = seq.iter().position(|&v| v == x).map(|p| seq[(p + 1) % seq.len()] == y).unwrap_or(false);
    let start_dart = if xy_first { ne.dart(x, y) } else { ne.dart(y, x) }.expect("xy is an edge");
    let mut components = Vec::new();
    let mut covered = vec![false; n];
    for comp in ne.graph().components_of(&mask) {
        let walk = if comp.contains(&x) {
            trace_in(ne, &mask, start_dart)
        } else {
            let mut found = None;
            'search: for &a in &comp {
                let darts = ne.darts_at(a);
                for (i, &d) in darts.iter().enumerate() {
                    if !mask[ne.head(d)] {
                        let mut j = (i + 1) % darts.len();
                        while !mask[ne.head(darts[j])] {
                            j = (j + 1) % darts.len();
                            if j == i {
                                break;
                            }
                        }
                        if mask[ne.head(darts[j])] {
                            found = Some(trace_in(ne, &mask, darts[j]));
                            break 'search;
                        }
                    }
                }
            }
            found.unwrap_or_else(|| vec![comp[0]])
        };
        for &v in &comp {
            covered[v] = true;
        }
        components.push((comp, walk));
    }
    // Solve the xy component first.
    components.sort_by_key(|(comp, _)| !comp.contains(&x));
    let seeded: Vec<(usize, Color)> = cycle.iter().map(|&v| (v, phi.get(v).unwrap())).collect();
    let mut coloring = run_solver(&norm, &seeded, components, Some(l))?;
    for &v in cycle {
        coloring.set(v, phi.get(v).unwrap());
    }
    Ok(coloring)
}

/// Planar graph with outer face `F`, two vertices `v ≠ w` of `F` with lists of
/// size at least two, other outer vertices at least three, inner vertices at
/// least five: some `L`-coloring exists. Branches over colorings of an outer
/// edge at `v`, running the recursion each time; falls back to the oracle.
pub fn two_two_lists_color(
    emb: &RotationEmbedding,
    outer_face: usize,
    v: usize,
    w: usize,
    lists: &ListAssignment,
    oracle: &Oracle,
) -> Result<Extension> {
    if v == w {
        return Err(Error::Hypothesis("the two small-list vertices must differ".into()));
    }
    if emb.genus()? != 0 {
        return Err(Error::Hypothesis("the embedding is not planar".into()));
    }
    let walk = emb.face_walk(outer_face);
    let mut on_f = vec![false; emb.n()];
    for &u in &walk {
        on_f[u] = true;
    }
    if !on_f[v] || !on_f[w] {
        return Err(Error::Hypothesis("v and w must lie on the outer face".into()));
    }
    for u in 0..emb.n() {
        let need = if u == v || u == w {
            2
        } else if on_f[u] {
            3
        } else {
            5
        };
        if lists.get(u).len() < need {
            return Err(Error::Hypothesis(format!("vertex {u} has a list smaller than {need}")));
        }
    }
    if emb.graph().is_cycle(&walk) {
        let k = walk.len();
        let p = walk.iter().position(|&u| u == v).unwrap();
        for (a, b) in [(walk[p], walk[(p + 1) % k]), (walk[(p + k - 1) % k], walk[p])] {
            for ca in lists.get(a) {
                for cb in lists.get(b).without(ca) {
                    let pre = PartialColoring::from_pairs(emb.n(), &[(a, ca), (b, cb)]);
                    let mut l = lists.clone();
                    // Keep the hypotheses for the recursion: only a and b may be short.
                    for u in [v, w] {
                        if u != a && u != b && l.get(u).len() < 3 {
                            l.set(u, lists.get(u));
                        }
                    }
                    if let Ok(c) = thomassen_like(emb, &walk, a, b, &l, &pre) {
                        if c.is_full_coloring(emb.graph(), lists) {
                            return Ok(Extension { coloring: c, method: Method::Constructive });
                        }
                    }
                }
            }
        }
    }
    match oracle.extend(emb.graph(), lists, &PartialColoring::new(emb.n()))? {
        Some(c) => Ok(Extension { coloring: c, method: Method::Oracle }),
        None => Err(Error::TheoremViolation("two-2-lists instance is not colorable".into())),
    }
}

/// The recursion without the list-size precheck (used by branching callers,
/// which accept failure).
fn thomassen_like(
    emb: &RotationEmbedding,
    outer: &[usize],
    x: usize,
    y: usize,
    lists: &ListAssignment,
    precolor: &PartialColoring,
) -> Result<PartialColoring> {
    let (cx, cy) = seed_pair(lists, x, y, precolor)?;
    let (face, _) = emb.find_face(outer).ok_or_else(|| Error::Hypothesis("outer walk is not facial".into()))?;
    let norm = normalize(emb, face, lists)?;
    let ne = &norm.embedding;
    let (_, seq) = ne.find_face(outer).ok_or_else(|| Error::Inconsistent("outer face lost".into()))?;
    let k = seq.len();
    let walk = (0..k)
        .find_map(|i| {
            let (a, b) = (seq[i], seq[(i + 1) % k]);
            ((a == x && b == y) || (a == y && b == x)).then(|| rotate_to(&seq, a))
        })
        .ok_or_else(|| Error::Hypothesis("xy is not on the outer walk".into()))?;
    let region: Vec<usize> = (0..ne.n()).collect();
    run_solver(&norm, &[(x, cx), (y, cy)], vec![(region, walk)], None)
}

/// Structure of a non-extendable precolored 5- or 6-cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Obstruction {
    Extendable(PartialColoring),
    /// A lone inner vertex adjacent to at least five cycle vertices, list emptied.
    LoneVertex { v: usize },
    /// An inner edge whose ends share the same 1-list and see 3-edge paths of the cycle.
    Edge { u: usize, v: usize },
    /// An inner triangle whose vertices share the same 2-list and see 2-edge paths.
    Triangle { vertices: [usize; 3] },
}

impl Obstruction {
    pub fn case_name(&self) -> &'static str {
        match self {
            Obstruction::Extendable(_) => "extendable",
            Obstruction::LoneVertex { .. } => "case_i",
            Obstruction::Edge { .. } => "case_ii",
            Obstruction::Triangle { .. } => "case_iii",
        }
    }
}

/// Whether `G[N(v) ∩ C]` is a path with exactly `len` edges.
fn neighborhood_is_path(g: &Graph, v: usize, on_c: &[bool], len: usize) -> bool {
    let nb: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| on_c[u]).collect();
    if nb.len() != len + 1 {
        return false;
    }
    let h = g.induced(&nb);
    let edges = h.num_edges();
    let max_deg = (0..h.n()).map(|i| h.degree(i)).max().unwrap_or(0);
    edges == len && max_deg <= 2 && h.is_connected()
}

/// Classifies a precoloring `φ` of a facial cycle `C` with `5 ≤ |C| ≤ 6`.
/// The host must be short-inseparable (not checked here: separating
/// triangles let larger interiors hide the three shapes).
/// Non-extendable inputs that match none of the three shapes are reported as
/// theorem violations.
pub fn classify_obstruction(
    emb: &RotationEmbedding,
    cycle: &[usize],
    lists: &ListAssignment,
    phi: &PartialColoring,
    oracle: &Oracle,
) -> Result<Obstruction> {
    let g = emb.graph();
    let k = cycle.len();
    if !(5..=6).contains(&k) || emb.find_face(cycle).is_none() {
        return Err(Error::Hypothesis(format!("{cycle:?} is not a facial cycle of length 5 or 6")));
    }
    let mut on_c = vec![false; g.n()];
    for &v in cycle {
        on_c[v] = true;
    }
    if let Some(c) = oracle.extend(g, lists, phi)? {
        return Ok(Obstruction::Extendable(c));
    }
    let inner: Vec<usize> = (0..g.n()).filter(|&v| !on_c[v]).collect();
    let res = |v: usize| lists.residual(g, phi, v);
    let h = g.induced(&inner);
    match inner.len() {
        1 => {
            let v = inner[0];
            let deg_c = g.neighbors(v).iter().filter(|&&u| on_c[u]).count();
            if deg_c >= 5 && res(v).is_empty() {
                return Ok(Obstruction::LoneVertex { v });
            }
        }
        2 if k == 6 && h.num_edges() == 1 => {
            let (u, v) = (inner[0], inner[1]);
            if res(u).len() == 1
                && res(u) == res(v)
                && neighborhood_is_path(g, u, &on_c, 3)
                && neighborhood_is_path(g, v, &on_c, 3)
            {
                return Ok(Obstruction::Edge { u, v });
            }
        }
        3 if k == 6 && h.num_edges() == 3 => {
            let l0 = res(inner[0]);
            if l0.len() == 2
                && inner.iter().all(|&v| res(v) == l0 && neighborhood_is_path(g, v, &on_c, 2))
            {
                return Ok(Obstruction::Triangle { vertices: [inner[0], inner[1], inner[2]] });
            }
        }
        _ => {}
    }
    Err(Error::TheoremViolation(format!(
        "precoloring {phi:?} of {cycle:?} does not extend, but the interior matches no listed shape"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::samples;

    fn cs(v: &[Color]) -> ColorSet {
        v.iter().copied().collect()
    }

    #[test]
    fn triangle_third_vertex() {
        let t = samples::triangle();
        let l = ListAssignment::new(vec![cs(&[1]), cs(&[2]), cs(&[1, 2, 3])]);
        let c = thomassen_extend(&t, &[0, 1, 2], 0, 1, &l, &PartialColoring::new(3)).unwrap();
        assert_eq!(c.pairs(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn wheel_with_three_lists_on_rim() {
        for n in 3..9 {
            let w = samples::wheel(n);
            let mut l = ListAssignment::uniform(n + 1, cs(&[0, 1, 2]));
            l.set(n, cs(&[0, 1, 2, 3, 4]));
            let rim: Vec<usize> = (0..n).collect();
            let c = thomassen_extend(&w, &rim, 0, 1, &l, &PartialColoring::new(n + 1)).unwrap();
            assert!(c.is_full_coloring(w.graph(), &l));
        }
    }

    #[test]
    fn non_triangulated_interior_is_normalized() {
        // A 6-cycle with one inner vertex adjacent to 0 and 3 only: inner faces are 4-gons.
        let rot = vec![
            vec![1, 6, 5],
            vec![2, 0],
            vec![3, 1],
            vec![4, 6, 2],
            vec![5, 3],
            vec![0, 4],
            vec![0, 3],
        ];
        let e = RotationEmbedding::from_rotations(&rot).unwrap();
        assert_eq!(e.genus().unwrap(), 0);
        let mut l = ListAssignment::uniform(7, cs(&[0, 1, 2]));
        l.set(6, cs(&[0, 1, 2, 3, 4]));
        let cyc = [0, 1, 2, 3, 4, 5];
        let c = thomassen_extend(&e, &cyc, 0, 1, &l, &PartialColoring::new(7)).unwrap();
        assert!(c.is_full_coloring(e.graph(), &l));
    }

    #[test]
    fn hypothesis_violations_are_named() {
        let w = samples::wheel(5);
        let l = ListAssignment::uniform(6, cs(&[0, 1, 2]));
        let err = thomassen_extend(&w, &[0, 1, 2, 3, 4], 0, 1, &l, &PartialColoring::new(6)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(ref m) if m.contains("vertex 5")));
    }

    #[test]
    fn short_cycles_extend() {
        let o = Oracle::default();
        // Wheel with 4-rim: cycle 0-1-2-3 around hub 4.
        let w = samples::wheel(4);
        let l = ListAssignment::uniform(5, cs(&[0, 1, 2, 3, 4]));
        for pairs in [[(0, 0), (1, 1), (2, 0), (3, 1)], [(0, 0), (1, 1), (2, 2), (3, 3)]] {
            let phi = PartialColoring::from_pairs(5, &pairs);
            let e = extend_short_cycle(&w, &[0, 1, 2, 3], &l, &phi, &o).unwrap();
            assert!(e.coloring.is_full_coloring(w.graph(), &l));
            assert_eq!(e.method, Method::Constructive);
        }
    }

    #[test]
    fn hub_obstruction_is_case_one() {
        let w = samples::wheel(5);
        let l = ListAssignment::uniform(6, cs(&[0, 1, 2, 3, 4]));
        let phi = PartialColoring::from_pairs(6, &[(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]);
        let o = Oracle::default();
        assert_eq!(
            classify_obstruction(&w, &[0, 1, 2, 3, 4], &l, &phi, &o).unwrap(),
            Obstruction::LoneVertex { v: 5 }
        );
        let phi = PartialColoring::from_pairs(6, &[(0, 0), (1, 1), (2, 0), (3, 1), (4, 2)]);
        assert!(matches!(
            classify_obstruction(&w, &[0, 1, 2, 3, 4], &l, &phi, &o).unwrap(),
            Obstruction::Extendable(_)
        ));
    }

    #[test]
    fn two_small_lists() {
        let w = samples::wheel(5);
        let mut l = ListAssignment::uniform(6, cs(&[0, 1, 2]));
        l.set(5, cs(&[0, 1, 2, 3, 4]));
        l.set(0, cs(&[0, 1]));
        l.set(2, cs(&[0, 1]));
        let outer = w.find_face(&[0, 1, 2, 3, 4]).unwrap().0;
        let e = two_two_lists_color(&w, outer, 0, 2, &l, &Oracle::default()).unwrap();
        assert!(e.coloring.is_full_coloring(w.graph(), &l));
        assert!(two_two_lists_color(&w, outer, 0, 0, &l, &Oracle::default()).is_err());
    }
}
