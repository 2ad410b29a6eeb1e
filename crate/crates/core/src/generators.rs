//! Deterministic and seeded instance factories.
//!
//! Randomness comes from [`SplitMix64`] (Steele–Lea–Flood): state advances by
//! `0x9E3779B97F4A7C15`, output is the state mixed by
//! `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >> 31)`.
//! The algorithm is stated here so generated instances can be reproduced
//! bit-for-bit from any language.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::colorset::{Color, ColorSet};
use crate::embedding::RotationEmbedding;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::listcolor::{ListAssignment, PartialColoring};

/// The SplitMix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` (`n > 0`), by rejection.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        let n = n as u64;
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    /// `true` with probability `num / den`.
    pub fn chance(&mut self, num: usize, den: usize) -> bool {
        self.below(den) < num
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    /// A uniformly random `size`-subset of `palette` (`size ≤ |palette|`).
    pub fn subset(&mut self, palette: ColorSet, size: usize) -> ColorSet {
        let mut colors: Vec<Color> = palette.iter().collect();
        self.shuffle(&mut colors);
        colors.into_iter().take(size).collect()
    }
}

/// Straight-line drawing → rotation system (neighbors sorted counterclockwise).
pub fn from_straight_line(points: &[(f64, f64)], edges: &[(usize, usize)]) -> Result<RotationEmbedding> {
    let n = points.len();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for (u, nb) in adj.iter_mut().enumerate() {
        let (x0, y0) = points[u];
        nb.sort_by(|&a, &b| {
            let ta = (points[a].1 - y0).atan2(points[a].0 - x0);
            let tb = (points[b].1 - y0).atan2(points[b].0 - x0);
            ta.total_cmp(&tb)
        });
    }
    RotationEmbedding::from_rotations(&adj)
}

/// Inserts a new vertex into face `f`, adjacent to every corner of it.
/// Returns the rotation lists (the new vertex is last).
pub fn insert_hub(emb: &RotationEmbedding, f: usize) -> Vec<Vec<usize>> {
    let mut rot = emb.rotations();
    let hub = emb.n();
    let darts = emb.face_darts(f).to_vec();
    let k = darts.len();
    // The corner at head(d_i) lies between tail(d_i) and head(d_{i+1}).
    for i in 0..k {
        let w = emb.head(darts[i]);
        let before = emb.tail(darts[i]);
        let pos = rot[w].iter().position(|&x| x == before).expect("rotation contains face neighbor");
        rot[w].insert(pos + 1, hub);
    }
    rot.push(darts.iter().rev().map(|&d| emb.tail(d)).collect());
    rot
}

/// Flips the edge `uv` of a plane map whose two incident faces are
/// triangles `u v w` and `v u z`; returns `false` when the flip is not
/// admissible (a non-triangular side, `w = z`, or `wz` already present).
pub fn flip_edge(rot: &mut [Vec<usize>], u: usize, v: usize) -> bool {
    let succ = |rot: &[Vec<usize>], a: usize, b: usize| -> Option<usize> {
        let p = rot[a].iter().position(|&x| x == b)?;
        Some(rot[a][(p + 1) % rot[a].len()])
    };
    let (Some(w), Some(z)) = (succ(rot, v, u), succ(rot, u, v)) else { return false };
    // Triangularity of both sides.
    if succ(rot, w, v) != Some(u) || succ(rot, z, u) != Some(v) {
        return false;
    }
    if w == z || rot[w].contains(&z) || rot[u].len() <= 3 || rot[v].len() <= 3 {
        return false;
    }
    rot[u].retain(|&x| x != v);
    rot[v].retain(|&x| x != u);
    let pw = rot[w].iter().position(|&x| x == v).unwrap();
    rot[w].insert(pw + 1, z);
    let pz = rot[z].iter().position(|&x| x == u).unwrap();
    rot[z].insert(pz + 1, w);
    true
}

/// The torus ladder: `x, p_1 … p_k, q_1 … q_k, y` with rows `p`, `q`,
/// rungs `p_i q_i` and `q_i p_{i+1}`, `x ~ p_1, q_1`, `y ~ p_k, q_k`, and the
/// handle edge `xy` routed through the torus. Vertex numbering follows the
/// strip order `x = 0, p_i = 2i − 1, q_i = 2i, y = 2k + 1`, so consecutive
/// triples form triangles. All lists are `{1, 2, 3}`.
///
/// Adjacency table:
///
/// | vertex | neighbors |
/// |---|---|
/// | `x` | `p_1, q_1, y` |
/// | `p_i` | `p_{i±1}, q_i, q_{i−1}` (`x` for `i = 1`, `y` for `i = k`) |
/// | `q_i` | `q_{i±1}, p_i, p_{i+1}` (`x` for `i = 1`, `y` for `i = k`) |
/// | `y` | `p_k, q_k, x` |
///
/// Every cycle of `G − xy` bounds a disc, so the drawing is not cellular;
/// one scaffold vertex `z = 2k + 2` with list `{0}`, adjacent to `p_1` and
/// `q_1`, is added across the remaining annular face and recorded in
/// [`Instance::scaffold`]. It never constrains a coloring (its color is
/// absent from every other list) and width computations skip it.
pub fn torus_ladder(k: usize) -> Result<Instance> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("torus ladder needs k >= 3 (got {k})")));
    }
    let n = 2 * k + 2;
    let y = n - 1;
    let p = |i: usize| 2 * i - 1;
    let q = |i: usize| 2 * i;
    let mut points = vec![(0.0, 0.0); n];
    points[0] = (-1.0, 0.0);
    points[y] = (k as f64 + 1.0, 0.0);
    for i in 1..=k {
        points[p(i)] = (i as f64 - 0.5, 1.0);
        points[q(i)] = (i as f64, -1.0);
    }
    let mut edges = vec![(0, p(1)), (0, q(1)), (y, p(k)), (y, q(k))];
    for i in 1..=k {
        edges.push((p(i), q(i)));
        if i < k {
            edges.push((p(i), p(i + 1)));
            edges.push((q(i), q(i + 1)));
            edges.push((q(i), p(i + 1)));
        }
    }
    let plane = from_straight_line(&points, &edges)?;
    let mut rot = plane.rotations();
    // The drawing is not cellular: G − xy sits in a disc and xy runs over
    // the handle, leaving an annular face. A scaffold vertex z ~ p_1, q_1
    // across that annulus makes it a disc without changing the topology
    // seen by cycles of G.
    let z = n;
    rot.push(vec![p(1), q(1)]);
    let lists: Vec<ColorSet> = (0..=n).map(|v| if v == z { ColorSet::singleton(0) } else { [1, 2, 3].into_iter().collect() }).collect();
    for px in 0..rot[0].len() {
        for py in 0..rot[y].len() {
            for pp in 0..rot[p(1)].len() {
                for pq in 0..rot[q(1)].len() {
                    let mut r = rot.clone();
                    r[0].insert(px + 1, y);
                    r[y].insert(py + 1, 0);
                    r[p(1)].insert(pp + 1, z);
                    r[q(1)].insert(pq + 1, z);
                    let emb = RotationEmbedding::from_rotations(&r)?;
                    let strip_facial = (0..2 * k).all(|i| emb.find_face(&[i, i + 1, i + 2]).is_some() || emb.find_face(&[i, i + 2, i + 1]).is_some());
                    if emb.genus()? == 1 && strip_facial {
                        let mut inst = Instance::new(emb, ListAssignment::new(lists));
                        inst.scaffold = vec![z];
                        return Ok(inst);
                    }
                }
            }
        }
    }
    Err(Error::Inconsistent("no toroidal routing of the handle edge".into()))
}

/// Broken wheel: principal vertex `0` adjacent to the rim path `1 … ℓ`.
pub fn broken_wheel(l: usize) -> Result<RotationEmbedding> {
    if l < 2 {
        return Err(Error::InvalidArgument("a broken wheel needs a rim of at least two vertices".into()));
    }
    let mut points = vec![(0.0, 0.0)];
    let mut edges = Vec::new();
    for i in 1..=l {
        let t = std::f64::consts::PI * (i as f64 - 1.0) / (l as f64 - 1.0);
        points.push((t.cos(), t.sin() + 0.1));
        edges.push((0, i));
        if i > 1 {
            edges.push((i - 1, i));
        }
    }
    from_straight_line(&points, &edges)
}

/// Wheel with rim `0 … n−1` and hub `n`.
pub fn wheel(n: usize) -> Result<RotationEmbedding> {
    if n < 3 {
        return Err(Error::InvalidArgument("a wheel needs a rim of at least three vertices".into()));
    }
    Ok(crate::embedding::samples::wheel(n))
}

/// A triangulated strip of `rows` rows and `len + 1` columns: vertex
/// `r (len + 1) + c`, edges right, up and up-right.
pub fn fan_strip(len: usize, rows: usize) -> Result<RotationEmbedding> {
    if rows < 2 || len < 1 {
        return Err(Error::InvalidArgument("a strip needs at least two rows and one column step".into()));
    }
    let w = len + 1;
    let id = |r: usize, c: usize| r * w + c;
    let mut points = Vec::with_capacity(rows * w);
    for r in 0..rows {
        for c in 0..w {
            points.push((c as f64 - 0.5 * r as f64, r as f64 * 0.866));
        }
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..w {
            if c + 1 < w {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
                if c + 1 < w {
                    edges.push((id(r, c), id(r + 1, c + 1)));
                }
            }
        }
    }
    from_straight_line(&points, &edges)
}

/// The 6-regular triangulated torus on a `w × h` grid: vertex `y w + x`
/// adjacent to `(x±1, y)`, `(x, y±1)`, `(x+1, y+1)`, `(x−1, y−1)`.
pub fn torus_grid(w: usize, h: usize) -> Result<RotationEmbedding> {
    if w < 3 || h < 3 {
        return Err(Error::InvalidArgument("torus grid needs both sides >= 3".into()));
    }
    let id = |x: usize, y: usize| (y % h) * w + (x % w);
    let mut rot = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (xm, ym) = (x + w - 1, y + h - 1);
            rot.push(vec![id(x + 1, y), id(x + 1, y + 1), id(x, y + 1), id(xm, y), id(xm, ym), id(x, ym)]);
        }
    }
    RotationEmbedding::from_rotations(&rot)
}

/// The hexagonal patch of the triangular lattice: all points within lattice
/// distance `radius` of the origin. Returns the map and its boundary cycle.
pub fn hex_disc(radius: usize) -> Result<(RotationEmbedding, Vec<usize>)> {
    let r = radius as i64;
    let mut coords = Vec::new();
    for y in -r..=r {
        for x in -r..=r {
            let d = hex_norm(x, y);
            if d <= r {
                coords.push((x, y));
            }
        }
    }
    let index: std::collections::HashMap<(i64, i64), usize> =
        coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let points: Vec<(f64, f64)> = coords.iter().map(|&(x, y)| (x as f64 - 0.5 * y as f64, y as f64 * 0.866)).collect();
    let mut edges = Vec::new();
    for (i, &(x, y)) in coords.iter().enumerate() {
        for (dx, dy) in [(1, 0), (1, 1), (0, 1)] {
            if let Some(&j) = index.get(&(x + dx, y + dy)) {
                edges.push((i, j));
            }
        }
    }
    let emb = from_straight_line(&points, &edges)?;
    let boundary: Vec<usize> = (0..coords.len()).filter(|&i| hex_norm(coords[i].0, coords[i].1) == r).collect();
    let outer = (0..emb.num_faces())
        .map(|f| emb.face_walk(f))
        .find(|w| w.len() == boundary.len() && radius > 0)
        .unwrap_or_default();
    Ok((emb, outer))
}

/// Lattice distance from the origin in the `(1,0), (0,1), (1,1)` lattice.
fn hex_norm(x: i64, y: i64) -> i64 {
    if (x >= 0) == (y >= 0) {
        x.abs().max(y.abs())
    } else {
        x.abs() + y.abs()
    }
}

/// Apollonian stacking: start from a triangle and repeatedly insert a vertex
/// into a uniformly random inner face. Returns the map and outer triangle.
pub fn stacked_triangulation(n: usize, seed: u64) -> Result<(RotationEmbedding, Vec<usize>)> {
    if n < 3 {
        return Err(Error::InvalidArgument("a triangulation needs at least three vertices".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut emb = crate::embedding::samples::triangle();
    let outer = vec![0, 1, 2];
    while emb.n() < n {
        let (outer_face, _) = emb.find_face(&outer).expect("outer triangle stays facial");
        let inner: Vec<usize> = (0..emb.num_faces()).filter(|&f| f != outer_face).collect();
        let f = inner[rng.below(inner.len())];
        emb = RotationEmbedding::from_rotations(&insert_hub(&emb, f))?;
    }
    Ok((emb, outer))
}

/// A planar graph with outer cycle `outer`: a cycle of `outer_len` vertices
/// filled by hub insertions up to `n` vertices, then scrambled by random
/// inner flips (which may create chords) and random deletions of inner
/// edges (which create non-triangular inner faces).
pub fn random_plane_graph(
    n: usize,
    outer_len: usize,
    seed: u64,
    flips: usize,
    deletions: usize,
) -> Result<(RotationEmbedding, Vec<usize>)> {
    if outer_len < 3 || n < outer_len {
        return Err(Error::InvalidArgument("need 3 <= outer length <= n".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let outer: Vec<usize> = (0..outer_len).collect();
    let mut emb = crate::embedding::samples::cycle(outer_len);
    while emb.n() < n {
        let (outer_face, _) = emb.find_face(&outer).expect("outer cycle stays facial");
        let inner: Vec<usize> = (0..emb.num_faces()).filter(|&f| f != outer_face).collect();
        let f = inner[rng.below(inner.len())];
        emb = RotationEmbedding::from_rotations(&insert_hub(&emb, f))?;
    }
    let on_outer = |u: usize, v: usize| u < outer_len && v < outer_len && (u + 1 == v || v + 1 == u || u + v == outer_len - 1 && u.min(v) == 0);
    let mut rot = emb.rotations();
    for _ in 0..flips {
        let edges: Vec<(usize, usize)> = emb.graph().edges().filter(|&(u, v)| !on_outer(u, v)).collect();
        if edges.is_empty() {
            break;
        }
        let (u, v) = edges[rng.below(edges.len())];
        let mut trial = rot.clone();
        if flip_edge(&mut trial, u, v) {
            if let Ok(e) = RotationEmbedding::from_rotations(&trial) {
                if e.genus().ok() == Some(0) && e.find_face(&outer).is_some() {
                    rot = trial;
                    emb = e;
                }
            }
        }
    }
    for _ in 0..deletions {
        let edges: Vec<(usize, usize)> = emb.graph().edges().filter(|&(u, v)| !on_outer(u, v)).collect();
        if edges.is_empty() {
            break;
        }
        let (u, v) = edges[rng.below(edges.len())];
        let mut trial = rot.clone();
        trial[u].retain(|&x| x != v);
        trial[v].retain(|&x| x != u);
        if trial[u].is_empty() || trial[v].is_empty() {
            continue;
        }
        if let Ok(e) = RotationEmbedding::from_rotations(&trial) {
            if e.num_components() == 1 && e.find_face(&outer).is_some() {
                rot = trial;
                emb = e;
            }
        }
    }
    Ok((emb, outer))
}

/// A seeded instance of the strong planar extension theorem.
#[derive(Clone, Debug)]
pub struct ThomassenCase {
    pub instance: Instance,
    pub x: usize,
    pub y: usize,
}

/// Generates a planar instance meeting the extension hypotheses with at
/// most `max_n` vertices: outer cycle with 3-lists, inner 5-lists, and a
/// colored (or 1–2-listed) outer edge `xy`. Palette `{0, …, 6}`.
pub fn thomassen_case(seed: u64, max_n: usize) -> Result<ThomassenCase> {
    let mut rng = SplitMix64::new(seed ^ 0x7407_AA55);
    let max_n = max_n.max(4);
    let n = rng.range(4, max_n);
    let outer_len = rng.range(3, n.min(10));
    let flips = rng.below(2 * n);
    let deletions = rng.below(n / 3 + 1);
    let (emb, outer) = random_plane_graph(n, outer_len, rng.next_u64(), flips, deletions)?;
    let palette = ColorSet::range(0, 7);
    let mut lists = vec![ColorSet::EMPTY; n];
    for (v, l) in lists.iter_mut().enumerate() {
        *l = rng.subset(palette, if v < outer_len { 3 } else { 5 });
    }
    let i = rng.below(outer_len);
    let (x, y) = (outer[i], outer[(i + 1) % outer_len]);
    let mut precolor = PartialColoring::new(n);
    match rng.below(3) {
        0 => {
            let cx = lists[x].iter().next().unwrap();
            let cy = lists[y].without(cx).iter().next().unwrap();
            precolor.set(x, cx);
            precolor.set(y, cy);
        }
        1 => {
            let a = rng.subset(palette, 1);
            lists[x] = a;
            lists[y] = rng.subset(palette.difference(a), 1).union(rng.subset(palette, 1));
        }
        _ => {}
    }
    let instance = Instance::new(emb, ListAssignment::new(lists)).with_precolor(precolor).with_outer(outer);
    instance.validate()?;
    Ok(ThomassenCase { instance, x, y })
}

/// Canonical code of a plane map, rooted at darts leaving `roots` (all
/// darts when `None`), minimized over both orientations. Two maps share a
/// code iff they are isomorphic as (possibly mirrored) maps with the root
/// vertex preserved.
pub fn canonical_code(emb: &RotationEmbedding, roots: Option<&[usize]>) -> Vec<usize> {
    let starts: Vec<usize> = match roots {
        Some(r) => r.iter().flat_map(|&v| emb.darts_at(v)).collect(),
        None => (0..emb.num_darts()).collect(),
    };
    let mut best: Option<Vec<usize>> = None;
    for &s in &starts {
        for mirrored in [false, true] {
            let code = code_from(emb, s, mirrored);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    best.unwrap_or_default()
}

fn code_from(emb: &RotationEmbedding, start: usize, mirrored: bool) -> Vec<usize> {
    let step = |d: usize| if mirrored { emb.prev(d) } else { emb.next(d) };
    let n = emb.n();
    let mut label = vec![usize::MAX; n];
    let mut first_dart = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[emb.tail(start)] = 0;
    first_dart[emb.tail(start)] = start;
    order.push(emb.tail(start));
    let mut code = Vec::with_capacity(emb.num_darts() + n);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let s = first_dart[v];
        let mut d = s;
        loop {
            let w = emb.head(d);
            if label[w] == usize::MAX {
                label[w] = order.len();
                first_dart[w] = emb.twin(d);
                order.push(w);
            }
            code.push(label[w]);
            d = step(d);
            if d == s {
                break;
            }
        }
        code.push(usize::MAX);
    }
    code
}

/// All simple triangulations of the sphere on `n ≥ 4` vertices up to
/// (possibly orientation-reversing) isomorphism, by a breadth-first search
/// of the edge-flip graph (which is connected for fixed `n`).
pub fn sphere_triangulations(n: usize) -> Result<Vec<RotationEmbedding>> {
    if n < 4 {
        return Err(Error::InvalidArgument("sphere triangulations need at least four vertices".into()));
    }
    let mut start = crate::embedding::samples::tetrahedron();
    while start.n() < n {
        start = RotationEmbedding::from_rotations(&insert_hub(&start, 0))?;
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(canonical_code(&start, None));
    queue.push_back(start);
    while let Some(t) = queue.pop_front() {
        let rot = t.rotations();
        for (u, v) in t.graph().edges() {
            let mut r = rot.clone();
            if !flip_edge(&mut r, u, v) {
                continue;
            }
            let Ok(e) = RotationEmbedding::from_rotations(&r) else { continue };
            if e.genus().ok() != Some(0) {
                continue;
            }
            if seen.insert(canonical_code(&e, None)) {
                queue.push_back(e);
            }
        }
        out.push(t);
    }
    Ok(out)
}

/// A near-triangulation: plane graph whose inner faces are triangles, with
/// outer facial cycle `outer`.
#[derive(Clone, Debug, Serialize)]
pub struct NearTriangulation {
    #[serde(skip)]
    pub embedding: RotationEmbedding,
    pub outer: Vec<usize>,
}

/// Every near-triangulation with at most `max_vertices` vertices whose
/// outer cycle length lies in `outer_lengths`, up to isomorphism. Each is
/// a sphere triangulation minus one vertex (whose link becomes the outer
/// cycle); the bare triangle comes from `K_4`.
pub fn near_triangulations(max_vertices: usize, outer_lengths: &[usize]) -> Result<Vec<NearTriangulation>> {
    let mut out = Vec::new();
    for n in 4..=max_vertices + 1 {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for t in sphere_triangulations(n)? {
            for v in 0..n {
                let k = t.graph().degree(v);
                if !outer_lengths.contains(&k) {
                    continue;
                }
                if !seen.insert(canonical_code(&t, Some(&[v]))) {
                    continue;
                }
                let mut keep = vec![true; n];
                keep[v] = false;
                let sub = t.induced_subembedding(&keep);
                let new_of = sub.old_to_new(n);
                // The link of `v`, in rotation order, bounds the new face.
                let link: Vec<usize> = t.rotation(v).into_iter().map(|u| new_of[u]).collect();
                let emb = sub.embedding;
                let (_, walk) = emb
                    .find_face(&link)
                    .ok_or_else(|| Error::Inconsistent("link of a deleted vertex is not facial".into()))?;
                out.push(NearTriangulation { embedding: emb, outer: walk });
            }
        }
    }
    Ok(out)
}

/// A disc collar: the lattice hexagon of `radius` with its centre removed.
/// The outer boundary `C` gets lists of size three, the ring around the
/// removed centre gets short lists (so every short chord has a clearly
/// determined large side), everything else 5-lists from `palette`.
#[derive(Clone, Debug)]
pub struct DiscCollar {
    pub embedding: RotationEmbedding,
    pub cycle: Vec<usize>,
    pub lists: ListAssignment,
    pub hole: Vec<usize>,
}

pub fn disc_collar(seed: u64, radius: usize, palette_size: usize) -> Result<DiscCollar> {
    if radius < 6 {
        return Err(Error::InvalidArgument("disc collars need radius >= 6 (hole at distance >= 5)".into()));
    }
    if palette_size < 5 {
        return Err(Error::InvalidArgument("palette must have at least five colors".into()));
    }
    let mut rng = SplitMix64::new(seed ^ 0x00C0_11A4);
    let (disc, outer) = hex_disc(radius)?;
    let centre = (0..disc.n()).find(|&v| disc.graph().degree(v) == 6 && disc.graph().distances_from(&outer)[v] == radius)
        .ok_or_else(|| Error::Inconsistent("hexagon has no centre".into()))?;
    let mut keep = vec![true; disc.n()];
    keep[centre] = false;
    let sub = disc.induced_subembedding(&keep);
    let new_of = sub.old_to_new(disc.n());
    let emb = sub.embedding;
    let cycle: Vec<usize> = outer.iter().map(|&v| new_of[v]).collect();
    let hole: Vec<usize> = disc.rotation(centre).into_iter().map(|v| new_of[v]).collect();
    let palette = ColorSet::range(0, palette_size as Color);
    let mut lists = vec![ColorSet::EMPTY; emb.n()];
    for (v, l) in lists.iter_mut().enumerate() {
        let size = if cycle.contains(&v) || hole.contains(&v) { 3 } else { 5 };
        *l = rng.subset(palette, size);
    }
    Ok(DiscCollar { embedding: emb, cycle, lists: ListAssignment::new(lists), hole })
}

/// Input for the face-connection search: an embedding, a family of facial
/// cycles, the subfamily `D` to connect (indices), the root face `F` (an
/// index into `D`) and one path per non-root element of `D`.
#[derive(Clone, Debug)]
pub struct FaceFamily {
    pub embedding: RotationEmbedding,
    pub lists: ListAssignment,
    pub faces: Vec<Vec<usize>>,
    pub connect: Vec<usize>,
    pub root: usize,
    /// `paths[i]` runs from face `connect[i]` to the root face (empty for the root).
    pub paths: Vec<Vec<usize>>,
}

/// Removes the vertices in `holes` (each hole is a set of grid vertices)
/// from a torus grid; returns the map, the facial cycles around the holes,
/// and the old → new vertex map.
fn punch(grid: &RotationEmbedding, holes: &[Vec<usize>]) -> Result<(RotationEmbedding, Vec<Vec<usize>>, Vec<usize>)> {
    let mut keep = vec![true; grid.n()];
    for h in holes {
        for &v in h {
            keep[v] = false;
        }
    }
    let sub = grid.induced_subembedding(&keep);
    let new_of = sub.old_to_new(grid.n());
    let emb = sub.embedding;
    let mut faces = Vec::new();
    for h in holes {
        let ring: Vec<usize> = grid.graph().boundary(h).into_iter().map(|v| new_of[v]).collect();
        let mut found = None;
        for f in 0..emb.num_faces() {
            let walk = emb.face_walk(f);
            let mut sorted = walk.clone();
            sorted.sort_unstable();
            let mut r = ring.clone();
            r.sort_unstable();
            if sorted == r {
                found = Some(walk);
                break;
            }
        }
        faces.push(found.ok_or_else(|| Error::Inconsistent("hole boundary is not a facial cycle".into()))?);
    }
    Ok((emb, faces, new_of))
}

/// A torus-grid instance for the face-connection theorem: `m ∈ {2, 3}`
/// hexagonal holes spaced along the long axis (pairwise distance ≥ `d`,
/// plus a seeded offset), 3-lists on hole boundaries, random 5-lists
/// elsewhere; `D` is every hole except possibly one far spectator whose
/// boundary gets 1-lists. Paths are shortest (C, F)-paths.
pub fn two_face_surface_instance(seed: u64, d: usize) -> Result<FaceFamily> {
    let mut rng = SplitMix64::new(seed ^ 0x2FACE);
    let spectator = rng.chance(1, 3);
    let m = if spectator { 3 } else { 2 };
    let gap = d + 6 + rng.below(6);
    let h = 10 + rng.below(3);
    let w = m * gap;
    let grid = torus_grid(w, h)?;
    let y0 = rng.below(h);
    let holes: Vec<Vec<usize>> = (0..m).map(|i| vec![y0 * w + (i * gap + rng.below(3)) % w]).collect();
    let (emb, faces, _) = punch(&grid, &holes)?;
    let palette = ColorSet::range(0, 6);
    let mut lists = vec![ColorSet::EMPTY; emb.n()];
    for l in lists.iter_mut() {
        *l = rng.subset(palette, 5);
    }
    for (i, f) in faces.iter().enumerate() {
        for &v in f {
            lists[v] = if spectator && i == m - 1 { rng.subset(palette, 1) } else { rng.subset(palette, 3) };
        }
    }
    let connect: Vec<usize> = (0..if spectator { m - 1 } else { m }).collect();
    let root = 0;
    let g = emb.graph();
    let mut paths = vec![Vec::new(); connect.len()];
    for (i, &c) in connect.iter().enumerate() {
        if i == root {
            continue;
        }
        paths[i] = shortest_set_path(g, &faces[c], &faces[connect[root]])
            .ok_or_else(|| Error::Inconsistent("faces are disconnected".into()))?;
    }
    Ok(FaceFamily { embedding: emb, lists: ListAssignment::new(lists), faces, connect, root, paths })
}

/// A shortest path from the set `a` to the set `b` (first vertex in `a`).
pub fn shortest_set_path(g: &crate::graph::Graph, a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
    let dist = g.distances_from(b);
    let start = *a.iter().min_by_key(|&&v| (dist[v], v))?;
    if dist[start] == usize::MAX {
        return None;
    }
    let mut path = vec![start];
    let mut cur = start;
    while dist[cur] > 0 {
        cur = *g.neighbors(cur).iter().filter(|&&u| dist[u] + 1 == dist[cur]).min()?;
        path.push(cur);
    }
    Some(path)
}

/// Input for the single-face connection: a torus grid with one rectangular
/// hole `F` and a path `P` leaving `F` on one side, running once around
/// the torus, and returning to `F` on the other side.
#[derive(Clone, Debug)]
pub struct ReturningPath {
    pub embedding: RotationEmbedding,
    pub lists: ListAssignment,
    pub face: Vec<usize>,
    pub path: Vec<usize>,
}

/// Builds a returning-path instance: grid `w × h` with a hole `a × b`; the
/// path follows the row through the middle of the hole. Parameters are
/// derived from `d` and the seed; the caller checks the hypotheses.
pub fn single_face_instance(seed: u64, d: usize) -> Result<ReturningPath> {
    let mut rng = SplitMix64::new(seed ^ 0x51F0);
    let around = d + 2 + rng.below(4);
    let a = around + 2 + rng.below(3);
    let b = 2 * around / 3 + 2 + rng.below(3);
    let w = a + around;
    let h = b + 8 + rng.below(3);
    let grid = torus_grid(w, h)?;
    let hole: Vec<usize> = (0..b).flat_map(|y| (0..a).map(move |x| y * w + x)).collect();
    let (emb, faces, new_of) = punch(&grid, &[hole])?;
    let face = faces.into_iter().next().unwrap();
    let row = b / 2;
    // From (a, row) rightwards around to (w − 1, row): both are on F.
    let path: Vec<usize> = (a..w).map(|x| new_of[row * w + x]).collect();
    let palette = ColorSet::range(0, 6);
    let mut lists = vec![ColorSet::EMPTY; emb.n()];
    for l in lists.iter_mut() {
        *l = rng.subset(palette, 5);
    }
    for &v in &face {
        lists[v] = rng.subset(palette, 3);
    }
    Ok(ReturningPath { embedding: emb, lists: ListAssignment::new(lists), face, path })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::listcolor::Oracle;
    use crate::topology::{edge_width, edge_width_avoiding, Width};

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of SplitMix64 seeded with 0.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn torus_ladder_shape() {
        let t = torus_ladder(4).unwrap();
        assert_eq!(t.embedding.genus().unwrap(), 1);
        assert_eq!(t.n(), 11);
        assert_eq!(t.scaffold, vec![10]);
        assert_eq!(t.embedding.num_edges(), 4 * 4 + 2 + 2);
        // Every noncontractible cycle uses xy, and dist(x, y) in G − xy is k + 1.
        assert_eq!(edge_width_avoiding(&t.embedding, &t.scaffold).unwrap(), Width::Finite(6));
        // Through the scaffold the annulus is crossed by a short curve.
        assert_eq!(edge_width(&t.embedding).unwrap(), Width::Finite(3));
        assert!(torus_ladder(2).is_err());
    }

    #[test]
    fn torus_ladder_colorability_follows_k_mod_3() {
        let o = Oracle::default();
        for k in 3..=10 {
            let t = torus_ladder(k).unwrap();
            let colorable = o.is_extendable(t.embedding.graph(), &t.lists, &t.precolor).unwrap();
            assert_eq!(colorable, k % 3 != 1, "k = {k}");
        }
    }

    #[test]
    fn small_families() {
        assert_eq!(broken_wheel(2).unwrap().num_edges(), 3);
        let bw = broken_wheel(5).unwrap();
        assert_eq!(bw.genus().unwrap(), 0);
        assert_eq!(bw.graph().degree(0), 5);
        let s = fan_strip(5, 3).unwrap();
        assert_eq!(s.genus().unwrap(), 0);
        let g = torus_grid(5, 4).unwrap();
        assert_eq!(g.genus().unwrap(), 1);
        assert!(g.faces().iter().all(|f| f.len() == 3));
        let (h, outer) = hex_disc(2).unwrap();
        assert_eq!(h.n(), 19);
        assert_eq!(outer.len(), 12);
    }

    #[test]
    fn stacked_is_planar_and_seeded() {
        let (a, _) = stacked_triangulation(12, 7).unwrap();
        let (b, _) = stacked_triangulation(12, 7).unwrap();
        assert!(a.same_darts(&b));
        assert_eq!(a.genus().unwrap(), 0);
        assert_eq!(a.num_edges(), 3 * 12 - 6);
    }

    #[test]
    fn triangulation_counts() {
        let counts: Vec<usize> = (4..=9).map(|n| sphere_triangulations(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 50]);
    }

    #[test]
    fn near_triangulations_have_facial_outer_cycles() {
        let all = near_triangulations(7, &[3, 4, 5, 6]).unwrap();
        assert!(!all.is_empty());
        for nt in &all {
            assert_eq!(nt.embedding.genus().unwrap(), 0);
            assert!(nt.embedding.find_face(&nt.outer).is_some());
            assert!(nt.embedding.graph().is_cycle(&nt.outer));
        }
        // One inner vertex inside a 5-cycle: the wheel, or a degree-3 or
        // degree-4 inner vertex next to chords (two and one shapes).
        let w5 = all.iter().filter(|nt| nt.outer.len() == 5 && nt.embedding.n() == 6).count();
        assert_eq!(w5, 4);
    }

    #[test]
    fn thomassen_cases_validate() {
        for s in 0..30 {
            let c = thomassen_case(s, 20).unwrap();
            assert!(c.instance.n() <= 20);
            assert_eq!(c.instance.embedding.genus().unwrap(), 0);
        }
    }

    #[test]
    fn disc_collar_shape() {
        let dc = disc_collar(1, 6, 7).unwrap();
        assert_eq!(dc.cycle.len(), 36);
        assert_eq!(dc.hole.len(), 6);
        let dist = dc.embedding.graph().distances_from(&dc.cycle);
        assert!(dc.hole.iter().all(|&v| dist[v] >= 5));
    }
}
