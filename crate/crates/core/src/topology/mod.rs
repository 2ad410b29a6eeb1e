//! Topological predicates and parameters: contractibility, separating
//! cycles, edge-width, face-width, natural partitions, generalized chords
//! and distance shells.

mod homology;

pub use homology::DualCycleBasis;

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::embedding::{RotationEmbedding, SubEmbedding};
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};

/// A width parameter: a length, or infinity when no noncontractible object exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Width {
    Finite(usize),
    Infinite,
}

impl Width {
    pub fn finite(self) -> Option<usize> {
        match self {
            Width::Finite(k) => Some(k),
            Width::Infinite => None,
        }
    }
    pub fn exceeds(self, k: usize) -> bool {
        match self {
            Width::Finite(w) => w > k,
            Width::Infinite => true,
        }
    }
}

impl fmt::Display for Width {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Width::Finite(k) => write!(f, "{k}"),
            Width::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Width {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Width::Finite(k) => s.serialize_u64(*k as u64),
            Width::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Result of cutting the surface along a set of edges: faces grouped into
/// the regions of the complement.
#[derive(Clone, Debug)]
pub struct Cut {
    pub region_of_face: Vec<usize>,
    pub regions: usize,
    /// Euler characteristic of each open region (faces − open edges + open vertices).
    pub region_chi: Vec<i64>,
    /// Vertices off the cut, per region.
    pub region_vertices: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Cuts along the edges flagged in `cut_edge`; vertices flagged in
/// `cut_vertex` (normally the endpoints of cut edges) are removed as well.
pub fn cut_surface(emb: &RotationEmbedding, cut_edge: &[bool], cut_vertex: &[bool]) -> Cut {
    let nf = emb.num_faces();
    let mut parent: Vec<usize> = (0..nf).collect();
    for e in 0..emb.num_edges() {
        if cut_edge[e] {
            continue;
        }
        let d = emb.edge_dart(e);
        let (a, b) = (find(&mut parent, emb.face_of(d)), find(&mut parent, emb.face_of(emb.twin(d))));
        if a != b {
            parent[a] = b;
        }
    }
    // Faces glued at an uncut vertex are in the same region (every vertex
    // off the cut is surrounded by faces joined through its uncut edges,
    // except at vertices whose incident edges are all cut; those are cut
    // vertices by construction).
    let mut id = vec![UNREACHED; nf];
    let mut regions = 0;
    let mut region_of_face = vec![0; nf];
    for f in 0..nf {
        let r = find(&mut parent, f);
        if id[r] == UNREACHED {
            id[r] = regions;
            regions += 1;
        }
        region_of_face[f] = id[r];
    }
    let mut region_chi = vec![0i64; regions];
    for f in 0..nf {
        region_chi[region_of_face[f]] += 1;
    }
    for e in 0..emb.num_edges() {
        if !cut_edge[e] {
            region_chi[region_of_face[emb.face_of(emb.edge_dart(e))]] -= 1;
        }
    }
    let mut region_vertices = vec![Vec::new(); regions];
    for v in 0..emb.n() {
        if cut_vertex[v] {
            continue;
        }
        if let Some(&d) = emb.darts_at(v).first() {
            let r = region_of_face[emb.face_of(d)];
            region_chi[r] += 1;
            region_vertices[r].push(v);
        }
    }
    Cut { region_of_face, regions, region_chi, region_vertices }
}

/// Edge ids of the closed walk `cycle` (consecutive vertices, wrapping).
pub fn cycle_edge_ids(emb: &RotationEmbedding, cycle: &[usize]) -> Result<Vec<usize>> {
    if cycle.len() < 3 || !emb.graph().is_cycle(cycle) {
        return Err(Error::NotACycle(format!("{cycle:?}")));
    }
    let k = cycle.len();
    (0..k)
        .map(|i| {
            emb.dart(cycle[i], cycle[(i + 1) % k])
                .map(|d| emb.edge_of(d))
                .ok_or_else(|| Error::NotACycle(format!("{}-{} is not an edge", cycle[i], cycle[(i + 1) % k])))
        })
        .collect()
}

fn masks_for(emb: &RotationEmbedding, edges: &[usize]) -> (Vec<bool>, Vec<bool>) {
    let mut ce = vec![false; emb.num_edges()];
    let mut cv = vec![false; emb.n()];
    for &e in edges {
        ce[e] = true;
        let (a, b) = emb.edge_endpoints(e);
        cv[a] = true;
        cv[b] = true;
    }
    (ce, cv)
}

/// Cut-and-Euler contractibility of a simple cycle given by edge ids: the
/// cycle is contractible iff its complement has two components, one of
/// which is an open disc.
pub fn is_contractible_edges(emb: &RotationEmbedding, edges: &[usize]) -> bool {
    let (ce, cv) = masks_for(emb, edges);
    let cut = cut_surface(emb, &ce, &cv);
    cut.regions == 2 && cut.region_chi.contains(&1)
}

/// Whether the cycle (vertex sequence) bounds a disc.
pub fn is_contractible(emb: &RotationEmbedding, cycle: &[usize]) -> Result<bool> {
    Ok(is_contractible_edges(emb, &cycle_edge_ids(emb, cycle)?))
}

/// Contractible, with vertices of `G` on both sides.
pub fn is_separating(emb: &RotationEmbedding, cycle: &[usize]) -> Result<bool> {
    let edges = cycle_edge_ids(emb, cycle)?;
    let (ce, cv) = masks_for(emb, &edges);
    let cut = cut_surface(emb, &ce, &cv);
    Ok(cut.regions == 2 && cut.region_chi.contains(&1) && cut.region_vertices.iter().all(|r| !r.is_empty()))
}

/// All simple cycles of length at most `max_len`, each listed once
/// (smallest vertex first, second vertex smaller than the last).
pub fn cycles_up_to(g: &Graph, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; g.n()];
    fn extend(
        g: &Graph,
        max_len: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let start = path[0];
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if w == start && path.len() >= 3 && path[1] < last {
                out.push(path.clone());
            }
            if w > start && !on_path[w] && path.len() < max_len {
                on_path[w] = true;
                path.push(w);
                extend(g, max_len, path, on_path, out);
                path.pop();
                on_path[w] = false;
            }
        }
    }
    for s in 0..g.n() {
        path.clear();
        path.push(s);
        on_path[s] = true;
        extend(g, max_len, &mut path, &mut on_path, &mut out);
        on_path[s] = false;
    }
    out
}

/// Shortest noncontractible cycle length (the edge-width).
pub fn edge_width(emb: &RotationEmbedding) -> Result<Width> {
    Ok(shortest_noncontractible(emb)?.map_or(Width::Infinite, |c| Width::Finite(c.len())))
}

/// A shortest noncontractible cycle as an edge-id sequence, if one exists.
///
/// For every root `r`, a shortest noncontractible cycle through `r` consists
/// of two shortest paths from `r` plus one edge, so it suffices to scan the
/// fundamental cycles of each breadth-first tree whose two branches leave
/// `r` separately.
pub fn shortest_noncontractible(emb: &RotationEmbedding) -> Result<Option<Vec<usize>>> {
    shortest_noncontractible_avoiding(emb, &[])
}

/// Edge-width of the subgraph `G − avoid`, measured on the surface of `emb`.
///
/// Scaffold vertices (added only to make a non-cellular drawing cellular)
/// are listed in `avoid`; contractibility is a property of the surface, so
/// cycles of the remaining graph keep their status.
pub fn edge_width_avoiding(emb: &RotationEmbedding, avoid: &[usize]) -> Result<Width> {
    Ok(shortest_noncontractible_avoiding(emb, avoid)?.map_or(Width::Infinite, |c| Width::Finite(c.len())))
}

/// [`shortest_noncontractible`] restricted to cycles avoiding `avoid`.
pub fn shortest_noncontractible_avoiding(emb: &RotationEmbedding, avoid: &[usize]) -> Result<Option<Vec<usize>>> {
    let mut skip = vec![false; emb.n()];
    for &v in avoid {
        skip[v] = true;
    }
    let genus = emb.genus()?;
    if genus == 0 {
        return Ok(None);
    }
    let basis = DualCycleBasis::new(emb)?;
    let n = emb.n();
    let mut best_len = usize::MAX;
    let mut best: Option<(usize, usize, Vec<usize>, Vec<usize>)> = None;
    let mut dist = vec![UNREACHED; n];
    let mut parent_edge = vec![UNREACHED; n];
    let mut branch = vec![UNREACHED; n];
    let mut class = vec![0u64; n];
    let mut order = Vec::with_capacity(n);
    for r in (0..n).filter(|&r| !skip[r]) {
        dist.iter_mut().for_each(|x| *x = UNREACHED);
        order.clear();
        dist[r] = 0;
        parent_edge[r] = UNREACHED;
        branch[r] = r;
        class[r] = 0;
        order.push(r);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            if 2 * dist[u] + 1 >= best_len {
                continue;
            }
            for d in emb.darts_at(u) {
                let v = emb.head(d);
                if dist[v] == UNREACHED && !skip[v] {
                    let e = emb.edge_of(d);
                    dist[v] = dist[u] + 1;
                    parent_edge[v] = e;
                    branch[v] = if u == r { v } else { branch[u] };
                    class[v] = class[u] ^ basis.edge_mask(e);
                    order.push(v);
                }
            }
        }
        for e in 0..emb.num_edges() {
            let (u, v) = emb.edge_endpoints(e);
            if dist[u] == UNREACHED || dist[v] == UNREACHED {
                continue;
            }
            if parent_edge[u] == e || parent_edge[v] == e || branch[u] == branch[v] {
                continue;
            }
            let len = dist[u] + dist[v] + 1;
            if len >= best_len {
                continue;
            }
            let cls = class[u] ^ class[v] ^ basis.edge_mask(e);
            let trace = |mut x: usize| {
                let mut es = Vec::new();
                while x != r {
                    let pe = parent_edge[x];
                    es.push(pe);
                    let (a, b) = emb.edge_endpoints(pe);
                    x = if a == x { b } else { a };
                }
                es
            };
            let noncontractible = if cls != 0 {
                true
            } else if genus == 1 {
                false
            } else {
                let mut es = trace(u);
                es.extend(trace(v));
                es.push(e);
                !is_contractible_edges(emb, &es)
            };
            if noncontractible {
                best_len = len;
                best = Some((r, e, trace(u), trace(v)));
            }
        }
    }
    Ok(best.map(|(_, e, pu, pv)| {
        let mut cycle: Vec<usize> = pu.into_iter().rev().collect();
        cycle.push(e);
        cycle.extend(pv);
        cycle
    }))
}

/// The vertex–face incidence (radial) map: vertices `0..n` are the original
/// vertices, `n..n+F` the faces; one edge per corner.
pub fn radial_embedding(emb: &RotationEmbedding) -> Result<RotationEmbedding> {
    let n = emb.n();
    let nd = emb.num_darts();
    let total = n + emb.num_faces();
    let build = |reverse_faces: bool| -> Result<RotationEmbedding> {
        let mut vertex_of = vec![0; 2 * nd];
        let mut next = vec![0; 2 * nd];
        let mut twin = vec![0; 2 * nd];
        for d in 0..nd {
            vertex_of[2 * d] = emb.tail(d);
            vertex_of[2 * d + 1] = n + emb.face_of(d);
            twin[2 * d] = 2 * d + 1;
            twin[2 * d + 1] = 2 * d;
            next[2 * d] = 2 * emb.next(d);
        }
        for f in 0..emb.num_faces() {
            let walk = emb.face_darts(f);
            let k = walk.len();
            for i in 0..k {
                let (a, b) = if reverse_faces { (walk[(i + 1) % k], walk[i]) } else { (walk[i], walk[(i + 1) % k]) };
                next[2 * a + 1] = 2 * b + 1;
            }
        }
        RotationEmbedding::from_darts(total, vertex_of, next, twin)
    };
    let genus = emb.genus()?;
    for reverse in [false, true] {
        let r = build(reverse)?;
        if r.num_faces() == emb.num_edges() && r.genus().ok() == Some(genus) {
            return Ok(r);
        }
    }
    Err(Error::Inconsistent("radial map does not reproduce the surface".into()))
}

/// Face-width, computed as half the edge-width of the radial map.
pub fn face_width(emb: &RotationEmbedding) -> Result<Width> {
    if emb.genus()? == 0 {
        return Ok(Width::Infinite);
    }
    let radial = radial_embedding(emb)?;
    Ok(match edge_width(&radial)? {
        Width::Finite(k) => Width::Finite(k / 2),
        Width::Infinite => Width::Infinite,
    })
}

/// `ew > 4` and no separating cycle of length 3 or 4.
///
/// Once `ew > 4`, every cycle of length at most four is contractible, so
/// it separates exactly when both of its sides hold a vertex; each side is
/// explored by a face flood that stops at the first vertex off the cycle.
pub fn is_short_inseparable(emb: &RotationEmbedding) -> Result<bool> {
    if !edge_width(emb)?.exceeds(4) {
        return Ok(false);
    }
    for c in cycles_up_to(emb.graph(), 4) {
        let edges = cycle_edge_ids(emb, &c)?;
        let darts: Vec<usize> = (0..c.len()).map(|i| emb.dart(c[i], c[(i + 1) % c.len()]).expect("cycle edge")).collect();
        let left: Vec<usize> = darts.iter().map(|&d| emb.face_of(d)).collect();
        let right: Vec<usize> = darts.iter().map(|&d| emb.face_of(emb.twin(d))).collect();
        if side_has_vertex(emb, &c, &edges, left) && side_has_vertex(emb, &c, &edges, right) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Floods faces from `start` without crossing `cut` edges; true as soon as
/// a face has a vertex outside `cycle`.
fn side_has_vertex(emb: &RotationEmbedding, cycle: &[usize], cut: &[usize], mut stack: Vec<usize>) -> bool {
    let mut seen = stack.clone();
    while let Some(f) = stack.pop() {
        for &d in emb.face_darts(f) {
            if !cycle.contains(&emb.tail(d)) {
                return true;
            }
            if cut.contains(&emb.edge_of(d)) {
                continue;
            }
            let g = emb.face_of(emb.twin(d));
            if !seen.contains(&g) {
                seen.push(g);
                stack.push(g);
            }
        }
    }
    false
}

/// `D_j(X)`.
pub fn distance_shell(emb: &RotationEmbedding, x: &[usize], j: usize) -> Vec<usize> {
    emb.graph().shell(x, j)
}

/// `B_r(X)`.
pub fn ball(emb: &RotationEmbedding, x: &[usize], r: usize) -> Vec<usize> {
    emb.graph().ball(x, r)
}

/// A path or cycle meeting a host subgraph exactly at its ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GeneralizedChord {
    /// For a proper chord, the path `v_1 … v_{k+1}`; for an improper one,
    /// the cycle `v_1 … v_k` (closing back to `v_1`).
    pub vertices: Vec<usize>,
    pub proper: bool,
}

impl GeneralizedChord {
    pub fn path(vertices: Vec<usize>) -> Self {
        GeneralizedChord { vertices, proper: true }
    }
    pub fn cycle(vertices: Vec<usize>) -> Self {
        GeneralizedChord { vertices, proper: false }
    }
    pub fn len(&self) -> usize {
        if self.proper {
            self.vertices.len() - 1
        } else {
            self.vertices.len()
        }
    }
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
    pub fn endpoints(&self) -> (usize, usize) {
        if self.proper {
            (self.vertices[0], *self.vertices.last().unwrap())
        } else {
            (self.vertices[0], self.vertices[0])
        }
    }
    /// Vertices strictly between the ends.
    pub fn interior(&self) -> &[usize] {
        if self.proper {
            &self.vertices[1..self.vertices.len() - 1]
        } else {
            &self.vertices[1..]
        }
    }
    /// Consecutive vertex pairs, including the closing pair of an improper chord.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.vertices.len();
        let mut es: Vec<(usize, usize)> = self.vertices.windows(2).map(|w| (w[0], w[1])).collect();
        if !self.proper {
            es.push((self.vertices[k - 1], self.vertices[0]));
        }
        es
    }
}

/// All generalized chords of the subgraph `(h_vertices, h_edges)` with at most
/// `k_max` edges. Single edges already in `h_edges` are not chords.
pub fn enumerate_k_chords(
    g: &Graph,
    h_vertices: &[usize],
    h_edges: &[(usize, usize)],
    k_max: usize,
) -> Vec<GeneralizedChord> {
    let mut in_h = vec![false; g.n()];
    for &v in h_vertices {
        in_h[v] = true;
    }
    let h_edge = |a: usize, b: usize| h_edges.iter().any(|&(x, y)| (x == a && y == b) || (x == b && y == a));
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; g.n()];
    for &s in h_vertices {
        path.clear();
        path.push(s);
        // depth-first over internal vertices off H
        fn walk(
            g: &Graph,
            in_h: &[bool],
            k_max: usize,
            path: &mut Vec<usize>,
            on_path: &mut [bool],
            out: &mut Vec<GeneralizedChord>,
            h_edge: &dyn Fn(usize, usize) -> bool,
        ) {
            let s = path[0];
            let last = *path.last().unwrap();
            let edges_so_far = path.len() - 1;
            for &w in g.neighbors(last) {
                if in_h[w] {
                    if edges_so_far + 1 > k_max {
                        continue;
                    }
                    if w != s {
                        if edges_so_far == 0 && h_edge(s, w) {
                            continue;
                        }
                        if s < w {
                            let mut vs = path.clone();
                            vs.push(w);
                            out.push(GeneralizedChord::path(vs));
                        }
                    } else if edges_so_far >= 2 && path[1] < last {
                        out.push(GeneralizedChord::cycle(path.clone()));
                    }
                } else if !on_path[w] && edges_so_far + 2 <= k_max {
                    on_path[w] = true;
                    path.push(w);
                    walk(g, in_h, k_max, path, on_path, out, h_edge);
                    path.pop();
                    on_path[w] = false;
                }
            }
        }
        walk(g, &in_h, k_max, &mut path, &mut on_path, &mut out, &h_edge);
    }
    out.sort();
    out.dedup();
    out
}

/// One side of a natural partition.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionSide {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<usize>,
    /// Vertices of this side not on `C ∪ Q`.
    pub interior_vertices: Vec<usize>,
    /// Whether the open region bounded by `C ∪ Q` on this side is a disc.
    pub is_disc: bool,
}

impl PartitionSide {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// The side as an embedded subgraph.
    pub fn embedding(&self, emb: &RotationEmbedding) -> SubEmbedding {
        let mut kv = vec![false; emb.n()];
        for &v in &self.vertices {
            kv[v] = true;
        }
        let mut ke = vec![false; emb.num_edges()];
        for &(a, b) in &self.edges {
            if let Some(d) = emb.dart(a, b) {
                ke[emb.edge_of(d)] = true;
            }
        }
        emb.sub_embedding(&kv, &ke)
    }
}

/// The two closed sides cut off by a facial cycle `C` and a generalized chord `Q`.
#[derive(Clone, Debug, Serialize)]
pub struct NaturalPartition {
    pub sides: [PartitionSide; 2],
    pub interface: GeneralizedChord,
}

/// Computes the natural `(C, Q)`-partition. `c` must be a facial cycle; every
/// cycle of `C ∪ Q` must be contractible.
pub fn natural_partition(emb: &RotationEmbedding, c: &[usize], q: &GeneralizedChord) -> Result<NaturalPartition> {
    let (fc, _) = emb
        .find_face(c)
        .ok_or_else(|| Error::PartitionUndefined(format!("{c:?} is not a facial cycle")))?;
    let g = emb.graph();
    let mut on_c = vec![false; emb.n()];
    for &v in c {
        on_c[v] = true;
    }
    let (a, b) = q.endpoints();
    if !on_c[a] || !on_c[b] || q.interior().iter().any(|&v| on_c[v]) {
        return Err(Error::PartitionUndefined("chord does not meet C exactly at its ends".into()));
    }
    let q_edges = q
        .edges()
        .iter()
        .map(|&(x, y)| {
            emb.dart(x, y)
                .map(|d| emb.edge_of(d))
                .ok_or_else(|| Error::PartitionUndefined(format!("{x}-{y} is not an edge")))
        })
        .collect::<Result<Vec<_>>>()?;
    let c_edges = cycle_edge_ids(emb, c)?;
    // Every cycle of C ∪ Q must be contractible.
    let mut cycles: Vec<Vec<usize>> = vec![c_edges.clone()];
    if q.proper {
        let k = c.len();
        let ia = c.iter().position(|&v| v == a).unwrap();
        let ib = c.iter().position(|&v| v == b).unwrap();
        for (from, to) in [(ia, ib), (ib, ia)] {
            let mut es = q_edges.clone();
            let mut i = from;
            while i != to {
                es.push(c_edges[i]);
                i = (i + 1) % k;
            }
            cycles.push(es);
        }
        let _ = g;
    } else {
        cycles.push(q_edges.clone());
    }
    for cyc in &cycles {
        if !is_contractible_edges(emb, cyc) {
            return Err(Error::PartitionUndefined("a cycle of C ∪ Q is noncontractible".into()));
        }
    }
    let mut ce = vec![false; emb.num_edges()];
    let mut cv = vec![false; emb.n()];
    for &e in c_edges.iter().chain(q_edges.iter()) {
        ce[e] = true;
        let (x, y) = emb.edge_endpoints(e);
        cv[x] = true;
        cv[y] = true;
    }
    let cut = cut_surface(emb, &ce, &cv);
    let c_region = cut.region_of_face[fc];
    let others: Vec<usize> = (0..cut.regions).filter(|&r| r != c_region).collect();
    if others.len() != 2 {
        return Err(Error::PartitionUndefined(format!("C ∪ Q leaves {} regions besides C's face", others.len())));
    }
    let mut sides = Vec::new();
    for &r in &others {
        let faces: Vec<usize> = (0..emb.num_faces()).filter(|&f| cut.region_of_face[f] == r).collect();
        let mut edges = Vec::new();
        let mut vertices = Vec::new();
        for e in 0..emb.num_edges() {
            let d = emb.edge_dart(e);
            if cut.region_of_face[emb.face_of(d)] == r || cut.region_of_face[emb.face_of(emb.twin(d))] == r {
                let (x, y) = emb.edge_endpoints(e);
                edges.push((x.min(y), x.max(y)));
                vertices.push(x);
                vertices.push(y);
            }
        }
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        let interior_vertices = cut.region_vertices[r].clone();
        sides.push(PartitionSide { vertices, edges, faces, interior_vertices, is_disc: cut.region_chi[r] == 1 });
    }
    let s1 = sides.pop().unwrap();
    let s0 = sides.pop().unwrap();
    Ok(NaturalPartition { sides: [s0, s1], interface: q.clone() })
}

/// Breadth-first distances inside `emb` from a set (re-export for convenience).
pub fn distances(emb: &RotationEmbedding, x: &[usize]) -> Vec<usize> {
    emb.graph().distances_from(x)
}

/// Depth-first search helper used by tests: brute-force shortest noncontractible
/// cycle by enumerating all simple cycles up to `max_len`.
pub fn brute_edge_width(emb: &RotationEmbedding, max_len: usize) -> Width {
    let mut best = Width::Infinite;
    for c in cycles_up_to(emb.graph(), max_len) {
        if let Ok(false) = is_contractible(emb, &c) {
            best = best.min(Width::Finite(c.len()));
        }
    }
    best
}

/// Breadth-first layering helper: vertices grouped by distance from `x`.
pub fn layers(g: &Graph, x: &[usize]) -> Vec<Vec<usize>> {
    let dist = g.distances_from(x);
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n() {
        if dist[v] != UNREACHED {
            if out.len() <= dist[v] {
                out.resize(dist[v] + 1, Vec::new());
            }
            out[dist[v]].push(v);
        }
    }
    out
}

#[allow(dead_code)]
fn bfs_order(g: &Graph, s: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut q = VecDeque::from([s]);
    seen[s] = true;
    let mut out = Vec::new();
    while let Some(u) = q.pop_front() {
        out.push(u);
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                q.push_back(v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::samples;

    #[test]
    fn planar_cycles_are_contractible() {
        let w = samples::wheel(6);
        for c in cycles_up_to(w.graph(), 7) {
            assert!(is_contractible(&w, &c).unwrap());
        }
        assert_eq!(edge_width(&w).unwrap(), Width::Infinite);
        assert_eq!(face_width(&w).unwrap(), Width::Infinite);
    }

    #[test]
    fn k7_widths_match_brute_force() {
        let k7 = samples::k7_torus();
        let ew = edge_width(&k7).unwrap();
        assert_eq!(ew, brute_edge_width(&k7, 7));
        assert_eq!(ew, Width::Finite(3));
        let fw = face_width(&k7).unwrap();
        assert!(fw <= ew);
        // Each face of K7 is a triangle, and every noncontractible curve must
        // cross at least three vertices on this triangulation.
        assert_eq!(fw, Width::Finite(3));
    }

    #[test]
    fn facial_triangles_are_contractible_but_not_separating() {
        let k7 = samples::k7_torus();
        for f in 0..k7.num_faces() {
            let walk = k7.face_walk(f);
            assert!(is_contractible(&k7, &walk).unwrap());
            assert!(!is_separating(&k7, &walk).unwrap());
        }
    }

    #[test]
    fn octahedron_has_separating_triangles() {
        // Octahedron: poles 0 and 5, equator 1..=4.
        let rot = vec![
            vec![1, 2, 3, 4],
            vec![0, 4, 5, 2],
            vec![0, 1, 5, 3],
            vec![0, 2, 5, 4],
            vec![0, 3, 5, 1],
            vec![1, 4, 3, 2],
        ];
        let oct = RotationEmbedding::from_rotations(&rot).unwrap();
        assert_eq!(oct.genus().unwrap(), 0);
        assert!(!is_short_inseparable(&oct).unwrap());
        assert!(is_separating(&oct, &[1, 2, 3, 4]).unwrap());
    }

    #[test]
    fn short_inseparability_matches_the_cut_reference() {
        let reference = |emb: &RotationEmbedding| {
            edge_width(emb).unwrap().exceeds(4)
                && cycles_up_to(emb.graph(), 4).iter().all(|c| !is_separating(emb, c).unwrap())
        };
        let mut maps: Vec<RotationEmbedding> =
            crate::generators::near_triangulations(8, &[3, 4, 5, 6]).unwrap().into_iter().map(|nt| nt.embedding).collect();
        maps.extend(crate::generators::sphere_triangulations(8).unwrap());
        for (w, h) in [(5, 5), (6, 5), (4, 6), (7, 7)] {
            maps.push(crate::generators::torus_grid(w, h).unwrap());
        }
        maps.push(samples::k7_torus());
        let mut seen = [0usize; 2];
        for emb in &maps {
            let fast = is_short_inseparable(emb).unwrap();
            assert_eq!(fast, reference(emb));
            seen[usize::from(fast)] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
    }

    #[test]
    fn wheel_chords_and_partition() {
        let w = samples::wheel(5);
        let c: Vec<usize> = (0..5).collect();
        let c_edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let chords = enumerate_k_chords(w.graph(), &c, &c_edges, 2);
        assert_eq!(chords.len(), 10); // every pair of rim vertices via the hub
        assert!(enumerate_k_chords(w.graph(), &c, &c_edges, 1).is_empty());
        let q = GeneralizedChord::path(vec![0, 5, 2]);
        let p = natural_partition(&w, &c, &q).unwrap();
        let total: usize = p.sides.iter().map(|s| s.vertices.len()).sum();
        assert_eq!(total, 6 + 3);
        assert!(p.sides.iter().all(|s| s.is_disc));
    }

    #[test]
    fn radial_map_shape() {
        let k7 = samples::k7_torus();
        let r = radial_embedding(&k7).unwrap();
        assert_eq!(r.n(), 7 + 14);
        assert_eq!(r.num_edges(), 2 * k7.num_edges());
        assert!(r.faces().iter().all(|f| f.len() == 4));
    }
}
