//! Combinatorial maps: a rotation system (cyclic order of darts around each
//! vertex) plus the dart involution. Faces are the orbits of
//! `d ↦ next_around_vertex(twin(d))`.

pub(crate) mod io;

pub use io::{parse_embedding_json, parse_embedding_text, EmbeddingData};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};

/// A graph cellularly embedded on an orientable surface.
#[derive(Clone, Debug)]
pub struct RotationEmbedding {
    vertex_of: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    twin: Vec<usize>,
    first: Vec<usize>,
    face_of: Vec<usize>,
    faces: Vec<Vec<usize>>,
    edge_of: Vec<usize>,
    edge_dart: Vec<usize>,
    graph: Graph,
    simple: bool,
}

/// One orbit of the face permutation, with its derived vertex and edge sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacialSubgraph {
    pub face: usize,
    pub dart_walk: Vec<usize>,
    /// Tail vertices along the walk (a vertex may repeat).
    pub walk: Vec<usize>,
    pub vertex_set: Vec<usize>,
    pub edge_set: Vec<(usize, usize)>,
    pub is_cycle: bool,
}

/// A restriction of an embedding to a subset of its edges/vertices.
#[derive(Clone, Debug)]
pub struct SubEmbedding {
    pub embedding: RotationEmbedding,
    /// `vertex_map[new] = old`.
    pub vertex_map: Vec<usize>,
    /// `dart_map[new] = old`.
    pub dart_map: Vec<usize>,
    /// Number of connected components (isolated vertices count).
    pub components: usize,
}

impl SubEmbedding {
    pub fn old_to_new(&self, n_old: usize) -> Vec<usize> {
        let mut map = vec![UNREACHED; n_old];
        for (new, &old) in self.vertex_map.iter().enumerate() {
            map[old] = new;
        }
        map
    }
}

impl RotationEmbedding {
    /// Builds an embedding from explicit dart arrays. Parallel edges are
    /// permitted here (radial graphs need them); loops are not.
    pub fn from_darts(n: usize, vertex_of: Vec<usize>, next: Vec<usize>, twin: Vec<usize>) -> Result<Self> {
        let nd = vertex_of.len();
        if next.len() != nd || twin.len() != nd {
            return Err(Error::InvalidEmbedding("dart arrays have different lengths".into()));
        }
        if !nd.is_multiple_of(2) {
            return Err(Error::InvalidEmbedding("odd number of darts".into()));
        }
        for d in 0..nd {
            if vertex_of[d] >= n {
                return Err(Error::InvalidEmbedding(format!("dart {d} at unknown vertex {}", vertex_of[d])));
            }
            let t = twin[d];
            if t >= nd || t == d || twin[t] != d {
                return Err(Error::InvalidEmbedding(format!("twin is not a fixed-point-free involution at dart {d}")));
            }
            if vertex_of[t] == vertex_of[d] {
                return Err(Error::InvalidEmbedding(format!("loop at vertex {} (dart {d})", vertex_of[d])));
            }
            if next[d] >= nd || vertex_of[next[d]] != vertex_of[d] {
                return Err(Error::InvalidEmbedding(format!("rotation leaves vertex {} at dart {d}", vertex_of[d])));
            }
        }
        let mut prev = vec![UNREACHED; nd];
        for d in 0..nd {
            if prev[next[d]] != UNREACHED {
                return Err(Error::InvalidEmbedding(format!("rotation is not a permutation at dart {}", next[d])));
            }
            prev[next[d]] = d;
        }
        let mut first = vec![UNREACHED; n];
        let mut count = vec![0usize; n];
        for d in 0..nd {
            count[vertex_of[d]] += 1;
            if first[vertex_of[d]] == UNREACHED {
                first[vertex_of[d]] = d;
            }
        }
        for v in 0..n {
            if first[v] == UNREACHED {
                continue;
            }
            let mut len = 1;
            let mut d = next[first[v]];
            while d != first[v] {
                len += 1;
                d = next[d];
            }
            if len != count[v] {
                return Err(Error::InvalidEmbedding(format!("darts at vertex {v} form more than one rotation cycle")));
            }
        }
        let mut edge_of = vec![UNREACHED; nd];
        let mut edge_dart = Vec::with_capacity(nd / 2);
        for d in 0..nd {
            if d < twin[d] {
                edge_of[d] = edge_dart.len();
                edge_of[twin[d]] = edge_dart.len();
                edge_dart.push(d);
            }
        }
        let mut face_of = vec![UNREACHED; nd];
        let mut faces = Vec::new();
        for d in 0..nd {
            if face_of[d] != UNREACHED {
                continue;
            }
            let f = faces.len();
            let mut walk = Vec::new();
            let mut cur = d;
            while face_of[cur] == UNREACHED {
                face_of[cur] = f;
                walk.push(cur);
                cur = next[twin[cur]];
            }
            faces.push(walk);
        }
        let mut graph = Graph::new(n);
        let mut simple = true;
        for &d in &edge_dart {
            let (u, v) = (vertex_of[d], vertex_of[twin[d]]);
            if graph.has_edge(u, v) {
                simple = false;
            }
            graph.add_edge(u, v);
        }
        Ok(RotationEmbedding { vertex_of, next, prev, twin, first, face_of, faces, edge_of, edge_dart, graph, simple })
    }

    /// Builds a simple embedding from cyclically ordered neighbor lists.
    pub fn from_rotations(rot: &[Vec<usize>]) -> Result<Self> {
        let n = rot.len();
        let mut start = vec![0usize; n + 1];
        for v in 0..n {
            start[v + 1] = start[v] + rot[v].len();
        }
        let nd = start[n];
        let mut vertex_of = vec![0; nd];
        let mut next = vec![0; nd];
        let mut lookup = std::collections::HashMap::with_capacity(nd);
        for v in 0..n {
            let k = rot[v].len();
            for (i, &w) in rot[v].iter().enumerate() {
                let d = start[v] + i;
                vertex_of[d] = v;
                next[d] = start[v] + (i + 1) % k;
                if w >= n {
                    return Err(Error::InvalidEmbedding(format!("vertex {v} lists unknown neighbor {w}")));
                }
                if lookup.insert((v, w), d).is_some() {
                    return Err(Error::InvalidEmbedding(format!("parallel edge {v}-{w}")));
                }
            }
        }
        let mut twin = vec![0; nd];
        for (&(v, w), &d) in &lookup {
            match lookup.get(&(w, v)) {
                Some(&t) => twin[d] = t,
                None => return Err(Error::InvalidEmbedding(format!("edge {v}-{w} listed at {v} but not at {w}"))),
            }
        }
        Self::from_darts(n, vertex_of, next, twin)
    }

    /// The embedding with every rotation reversed (the mirror image).
    pub fn mirror(&self) -> Self {
        Self::from_darts(self.n(), self.vertex_of.clone(), self.prev.clone(), self.twin.clone())
            .expect("mirror of a valid embedding is valid")
    }

    /// Validation applied to user-supplied maps: simple and connected.
    pub fn validate_input(&self) -> Result<()> {
        if !self.simple {
            return Err(Error::InvalidEmbedding("parallel edges are not allowed".into()));
        }
        let c = self.num_components();
        if c != 1 {
            return Err(Error::NotConnected { components: c });
        }
        self.genus().map(|_| ())
    }

    pub fn n(&self) -> usize {
        self.first.len()
    }
    pub fn num_darts(&self) -> usize {
        self.vertex_of.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edge_dart.len()
    }
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn is_simple(&self) -> bool {
        self.simple
    }
    pub fn graph(&self) -> &Graph {
        &self.graph
    }
    pub fn tail(&self, d: usize) -> usize {
        self.vertex_of[d]
    }
    pub fn head(&self, d: usize) -> usize {
        self.vertex_of[self.twin[d]]
    }
    pub fn twin(&self, d: usize) -> usize {
        self.twin[d]
    }
    pub fn next(&self, d: usize) -> usize {
        self.next[d]
    }
    pub fn prev(&self, d: usize) -> usize {
        self.prev[d]
    }
    /// Face permutation: the dart following `d` along its face.
    pub fn face_next(&self, d: usize) -> usize {
        self.next[self.twin[d]]
    }
    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }
    pub fn edge_of(&self, d: usize) -> usize {
        self.edge_of[d]
    }
    /// The lower-numbered dart of edge `e`.
    pub fn edge_dart(&self, e: usize) -> usize {
        self.edge_dart[e]
    }
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let d = self.edge_dart[e];
        (self.tail(d), self.head(d))
    }
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }
    pub fn face_darts(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }
    pub fn vertex_of(&self) -> &[usize] {
        &self.vertex_of
    }
    pub fn next_around_vertex(&self) -> &[usize] {
        &self.next
    }
    pub fn twins(&self) -> &[usize] {
        &self.twin
    }

    /// Darts leaving `v` in rotation order.
    pub fn darts_at(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let s = self.first[v];
        if s == UNREACHED {
            return out;
        }
        let mut d = s;
        loop {
            out.push(d);
            d = self.next[d];
            if d == s {
                break;
            }
        }
        out
    }

    /// Neighbors of `v` in rotation order.
    pub fn rotation(&self, v: usize) -> Vec<usize> {
        self.darts_at(v).into_iter().map(|d| self.head(d)).collect()
    }

    pub fn rotations(&self) -> Vec<Vec<usize>> {
        (0..self.n()).map(|v| self.rotation(v)).collect()
    }

    /// Some dart from `u` to `v`.
    pub fn dart(&self, u: usize, v: usize) -> Option<usize> {
        self.darts_at(u).into_iter().find(|&d| self.head(d) == v)
    }

    /// Tail vertices of face `f` in walk order.
    pub fn face_walk(&self, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&d| self.tail(d)).collect()
    }

    pub fn facial_subgraph(&self, f: usize) -> FacialSubgraph {
        let walk = self.face_walk(f);
        let mut vertex_set = walk.clone();
        vertex_set.sort_unstable();
        vertex_set.dedup();
        let mut edge_set: Vec<(usize, usize)> = self.faces[f]
            .iter()
            .map(|&d| {
                let (a, b) = (self.tail(d), self.head(d));
                (a.min(b), a.max(b))
            })
            .collect();
        edge_set.sort_unstable();
        edge_set.dedup();
        let is_cycle = vertex_set.len() == walk.len() && walk.len() >= 3;
        FacialSubgraph { face: f, dart_walk: self.faces[f].clone(), walk, vertex_set, edge_set, is_cycle }
    }

    pub fn facial_subgraphs(&self) -> Vec<FacialSubgraph> {
        (0..self.num_faces()).map(|f| self.facial_subgraph(f)).collect()
    }

    /// Locates the face bounded by the given cyclic vertex sequence, in either
    /// direction. Returns the face and the sequence re-oriented and rotated to
    /// follow the face walk starting at `cycle[0]`.
    pub fn find_face(&self, cycle: &[usize]) -> Option<(usize, Vec<usize>)> {
        if cycle.len() < 2 {
            return None;
        }
        let k = cycle.len();
        for reversed in [false, true] {
            let seq: Vec<usize> = if reversed {
                std::iter::once(cycle[0]).chain(cycle[1..].iter().rev().copied()).collect()
            } else {
                cycle.to_vec()
            };
            for d in self.darts_at(seq[0]) {
                if self.head(d) != seq[1 % k] {
                    continue;
                }
                let f = self.face_of[d];
                if self.faces[f].len() != k {
                    continue;
                }
                let mut cur = d;
                let mut ok = true;
                for i in 0..k {
                    if self.tail(cur) != seq[i] {
                        ok = false;
                        break;
                    }
                    cur = self.face_next(cur);
                }
                if ok {
                    return Some((f, seq));
                }
            }
        }
        None
    }

    /// Number of connected components; vertices without darts count individually.
    pub fn num_components(&self) -> usize {
        self.graph.components_of(&vec![true; self.n()]).len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let isolated = (0..self.n()).filter(|&v| self.first[v] == UNREACHED).count();
        self.n() as i64 - self.num_edges() as i64 + (self.num_faces() + isolated) as i64
    }

    /// Genus of a connected embedding.
    pub fn genus(&self) -> Result<usize> {
        let c = self.num_components();
        if c != 1 {
            return Err(Error::NotConnected { components: c });
        }
        let chi = self.euler_characteristic();
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(Error::Inconsistent(format!("Euler characteristic {chi} is not 2 - 2g")));
        }
        Ok(((2 - chi) / 2) as usize)
    }

    /// Per-component genera (each component traced as its own cellular map).
    pub fn component_genera(&self) -> Result<Vec<usize>> {
        let comps = self.graph.components_of(&vec![true; self.n()]);
        let mut comp_of = vec![0; self.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut chi = vec![0i64; comps.len()];
        for (i, c) in comps.iter().enumerate() {
            chi[i] += c.len() as i64;
            if c.len() == 1 && self.first[c[0]] == UNREACHED {
                chi[i] += 1;
            }
        }
        for e in 0..self.num_edges() {
            chi[comp_of[self.edge_endpoints(e).0]] -= 1;
        }
        for f in &self.faces {
            chi[comp_of[self.tail(f[0])]] += 1;
        }
        chi.into_iter()
            .map(|x| {
                if x > 2 || (2 - x) % 2 != 0 {
                    Err(Error::Inconsistent(format!("component Euler characteristic {x}")))
                } else {
                    Ok(((2 - x) / 2) as usize)
                }
            })
            .collect()
    }

    /// Restriction to the edges with `keep_edge[e]` and vertices with
    /// `keep_vertex[v]` (edges need both endpoints kept). Cyclic orders are
    /// inherited, and faces are re-traced.
    pub fn sub_embedding(&self, keep_vertex: &[bool], keep_edge: &[bool]) -> SubEmbedding {
        let mut new_of = vec![UNREACHED; self.n()];
        let mut vertex_map = Vec::new();
        for v in 0..self.n() {
            if keep_vertex[v] {
                new_of[v] = vertex_map.len();
                vertex_map.push(v);
            }
        }
        let dart_kept =
            |d: usize| keep_edge[self.edge_of[d]] && keep_vertex[self.tail(d)] && keep_vertex[self.head(d)];
        let mut new_dart = vec![UNREACHED; self.num_darts()];
        let mut dart_map = Vec::new();
        for d in 0..self.num_darts() {
            if dart_kept(d) {
                new_dart[d] = dart_map.len();
                dart_map.push(d);
            }
        }
        let nd = dart_map.len();
        let mut vertex_of = vec![0; nd];
        let mut next = vec![0; nd];
        let mut twin = vec![0; nd];
        for (nd_i, &d) in dart_map.iter().enumerate() {
            vertex_of[nd_i] = new_of[self.tail(d)];
            twin[nd_i] = new_dart[self.twin[d]];
            let mut e = self.next[d];
            while !dart_kept(e) {
                e = self.next[e];
            }
            next[nd_i] = new_dart[e];
        }
        let embedding = RotationEmbedding::from_darts(vertex_map.len(), vertex_of, next, twin)
            .expect("restriction of a valid embedding is valid");
        let components = embedding.num_components();
        SubEmbedding { embedding, vertex_map, dart_map, components }
    }

    /// Induced sub-embedding on a vertex subset.
    pub fn induced_subembedding(&self, keep_vertex: &[bool]) -> SubEmbedding {
        self.sub_embedding(keep_vertex, &vec![true; self.num_edges()])
    }

    pub fn induced_on(&self, vertices: &[usize]) -> SubEmbedding {
        let mut keep = vec![false; self.n()];
        for &v in vertices {
            keep[v] = true;
        }
        self.induced_subembedding(&keep)
    }

    /// The serializable dart arrays.
    pub fn data(&self) -> EmbeddingData {
        EmbeddingData {
            vertices: self.n(),
            vertex_of: self.vertex_of.clone(),
            next_around_vertex: self.next.clone(),
            twin: self.twin.clone(),
        }
    }

    /// Bit-exact structural equality of the dart arrays.
    pub fn same_darts(&self, other: &RotationEmbedding) -> bool {
        self.n() == other.n()
            && self.vertex_of == other.vertex_of
            && self.next == other.next
            && self.twin == other.twin
    }
}

/// Combinatorial maps used across tests and generators.
pub mod samples {
    use super::RotationEmbedding;

    /// `K_3` on the sphere.
    pub fn triangle() -> RotationEmbedding {
        RotationEmbedding::from_rotations(&[vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap()
    }

    /// `K_4` embedded as a tetrahedron.
    pub fn tetrahedron() -> RotationEmbedding {
        RotationEmbedding::from_rotations(&[vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]]).unwrap()
    }

    /// `K_4` with a rotation system of genus one.
    pub fn k4_torus() -> RotationEmbedding {
        RotationEmbedding::from_rotations(&[vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]]).unwrap()
    }

    /// Wheel with rim `0..n` and hub `n`.
    pub fn wheel(n: usize) -> RotationEmbedding {
        let mut rot = Vec::with_capacity(n + 1);
        for i in 0..n {
            rot.push(vec![(i + 1) % n, n, (i + n - 1) % n]);
        }
        rot.push((0..n).collect());
        RotationEmbedding::from_rotations(&rot).unwrap()
    }

    /// Plain cycle `0..n` on the sphere.
    pub fn cycle(n: usize) -> RotationEmbedding {
        let rot: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect();
        RotationEmbedding::from_rotations(&rot).unwrap()
    }

    /// `K_7` on the torus (the classical triangular embedding, `i ± 1, 2, 3` mod 7).
    pub fn k7_torus() -> RotationEmbedding {
        let rot: Vec<Vec<usize>> = (0..7)
            .map(|i| [1, 3, 2, 6, 4, 5].iter().map(|&s| (i + s) % 7).collect())
            .collect();
        RotationEmbedding::from_rotations(&rot).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    fn assert_face_partition(emb: &RotationEmbedding) {
        let mut seen = vec![0; emb.num_darts()];
        for f in emb.faces() {
            for &d in f {
                seen[d] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn triangle_on_sphere() {
        let t = triangle();
        assert_eq!(t.num_faces(), 2);
        assert_eq!(t.genus().unwrap(), 0);
        assert_face_partition(&t);
        assert!(t.facial_subgraph(0).is_cycle);
    }

    #[test]
    fn tetrahedron_faces() {
        let k4 = tetrahedron();
        assert_eq!(k4.num_faces(), 4);
        assert!(k4.faces().iter().all(|f| f.len() == 3));
        assert_eq!(k4.genus().unwrap(), 0);
        assert_eq!(k4_torus().genus().unwrap(), 1);
    }

    #[test]
    fn k7_is_a_torus_triangulation() {
        let k7 = k7_torus();
        assert_eq!(k7.genus().unwrap(), 1);
        assert_eq!(k7.num_faces(), 14);
        assert!(k7.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn wheel_minus_hub() {
        let w = wheel(5);
        assert_eq!(w.genus().unwrap(), 0);
        let mut keep = vec![true; 6];
        keep[5] = false;
        let sub = w.induced_subembedding(&keep);
        assert_eq!(sub.components, 1);
        assert_eq!(sub.embedding.num_faces(), 2);
        assert!(sub.embedding.faces().iter().all(|f| f.len() == 5));
        assert_eq!(sub.embedding.genus().unwrap(), 0);
    }

    #[test]
    fn identity_restriction_and_mirror() {
        let k7 = k7_torus();
        let sub = k7.induced_subembedding(&[true; 7]);
        assert!(sub.embedding.same_darts(&k7));
        let m = k7.mirror();
        assert_eq!(m.genus().unwrap(), 1);
        assert_eq!(m.mirror().next_around_vertex(), k7.next_around_vertex());
    }

    #[test]
    fn find_face_orients() {
        let w = wheel(5);
        let (f, seq) = w.find_face(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(w.face_walk(f), seq);
        let (g, seq2) = w.find_face(&[0, 4, 3, 2, 1]).unwrap();
        assert_eq!(f, g);
        assert_eq!(seq, seq2);
    }

    #[test]
    fn rejects_bad_maps() {
        assert!(RotationEmbedding::from_rotations(&[vec![1], vec![]]).is_err());
        assert!(RotationEmbedding::from_darts(2, vec![0, 1], vec![0, 1], vec![0, 1]).is_err());
    }
}
