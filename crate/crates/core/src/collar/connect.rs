//! Face connectors: complete reductions that tie several far-apart faces
//! together through given shortest paths, or tie one face to itself
//! through a path running around a handle.
//!
//! Construction. Every face `C` that must be connected is colored together
//! with the first two interior vertices of each path leaving it (a search
//! over all colorings of that window, so boundary lists are respected).
//! Each path is then colored completely by the exact path sweep, with the
//! face windows fixed at both ends. The pieces are assembled as a family
//! and must pass the consistent-family check; the union is re-verified as
//! a reduction and every containment clause is checked on the output. No
//! part of the construction is trusted.

use std::ops::ControlFlow;

use serde::Serialize;

use super::Collar;
use crate::embedding::RotationEmbedding;
use crate::error::{Error, Result};
use crate::filament::color_path;
use crate::graph::Graph;
use crate::listcolor::{
    check_consistent_family, check_reduction, FamilyVerdict, ListAssignment, Oracle, PartialColoring, ReductionSearch,
    Role,
};
use crate::topology::{face_width, is_contractible, is_short_inseparable, Width};

/// The face distance used when none is given.
pub const DEFAULT_FACE_DISTANCE: usize = 34;

/// Colorings tried per face window before giving up.
const WINDOW_ATTEMPTS: usize = 64;

/// One step of a connector run.
#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub detail: String,
}

/// A verified connector output.
#[derive(Clone, Debug, Serialize)]
pub struct ConnectorCertificate {
    pub a: Vec<usize>,
    pub phi: PartialColoring,
    pub stages: Vec<Stage>,
    /// The family the union was assembled from.
    pub family: Vec<(Vec<usize>, PartialColoring)>,
}

fn stage(stages: &mut Vec<Stage>, name: impl Into<String>, detail: impl Into<String>) {
    stages.push(Stage { name: name.into(), detail: detail.into() });
}

fn exhausted(name: &str, detail: impl Into<String>) -> Error {
    Error::SearchExhausted { stage: name.into(), detail: detail.into() }
}

/// Hypotheses shared by both connectors: short-inseparable, face-width at
/// least six, all faces outside the family are triangles, family faces
/// pairwise at distance at least `d`, and 5-lists off the family.
fn common_hypotheses(emb: &RotationEmbedding, lists: &ListAssignment, faces: &[Vec<usize>], d: usize) -> Result<()> {
    let g = emb.graph();
    let mut in_family = vec![false; emb.n()];
    for f in faces {
        if emb.find_face(f).is_none() {
            return Err(Error::Hypothesis(format!("{f:?} is not a facial cycle")));
        }
        for &v in f {
            in_family[v] = true;
        }
    }
    let mut sorted_faces: Vec<Vec<usize>> = faces
        .iter()
        .map(|f| {
            let mut s = f.clone();
            s.sort_unstable();
            s
        })
        .collect();
    sorted_faces.sort();
    for f in 0..emb.num_faces() {
        let mut walk = emb.face_walk(f);
        if walk.len() == 3 {
            continue;
        }
        walk.sort_unstable();
        if sorted_faces.binary_search(&walk).is_err() {
            return Err(Error::Hypothesis(format!("face {f} is neither a triangle nor in the family")));
        }
    }
    if let Some(v) = (0..emb.n()).find(|&v| !in_family[v] && lists.get(v).len() < 5) {
        return Err(Error::Hypothesis(format!("vertex {v} off the family has a list of size < 5")));
    }
    for i in 0..faces.len() {
        for j in i + 1..faces.len() {
            let dd = g.set_distance(&faces[i], &faces[j]);
            if dd < d {
                return Err(Error::Hypothesis(format!("faces {i} and {j} are at distance {dd} < {d}")));
            }
        }
    }
    if !is_short_inseparable(emb)? {
        return Err(Error::Hypothesis("embedding is not short-inseparable".into()));
    }
    match face_width(emb)? {
        Width::Finite(k) if k < 6 => return Err(Error::Hypothesis(format!("face-width {k} < 6"))),
        _ => {}
    }
    Ok(())
}

/// Checks that the face's collar is 4-determined; returns `Sh⁴` of the face.
fn require_determined(emb: &RotationEmbedding, face: &[usize], lists: &ListAssignment) -> Result<Vec<usize>> {
    let collar = Collar::new(emb, face, lists)?;
    collar.shadow(4).map_err(|e| Error::Hypothesis(format!("face {face:?}: {e}")))
}

/// Orders a face and its window vertices for the coloring search: around
/// the face, each window vertex right after its predecessor.
fn window_order(g: &Graph, face: &[usize], windows: &[Vec<usize>]) -> Vec<usize> {
    let mut order = Vec::new();
    for &c in face {
        order.push(c);
        for win in windows {
            // win[0] is on the face; the rest follow it.
            if win[0] == c {
                order.extend(win[1..].iter().copied());
            }
        }
    }
    debug_assert!(order.iter().all(|&v| v < g.n()));
    order
}

/// Visits colorings of `face ∪ windows` that are reductions on their own.
fn for_each_window_coloring(
    g: &Graph,
    lists: &ListAssignment,
    face: &[usize],
    windows: &[Vec<usize>],
    oracle: &Oracle,
    mut f: impl FnMut(&[usize], &PartialColoring) -> ControlFlow<()>,
) -> Result<()> {
    let mut roles = vec![Role::Outside; g.n()];
    for &v in face.iter().chain(windows.iter().flatten()) {
        roles[v] = Role::Colored;
    }
    let order = window_order(g, face, windows);
    let mut search = ReductionSearch::new(g, lists, roles, PartialColoring::new(g.n()))?
        .oracle(*oracle)
        .budget(5_000_000)
        .order(order);
    search.for_each(|c| f(&c.a, &c.phi))?;
    Ok(())
}

/// `G[A]` connected.
fn induced_connected(g: &Graph, a: &[usize]) -> bool {
    let mut mask = vec![false; g.n()];
    for &v in a {
        mask[v] = true;
    }
    g.components_of(&mask).len() == 1
}

/// Clause 1 of both statements: every vertex of `D_1(A)` keeps three colors.
fn boundary_clause(g: &Graph, lists: &ListAssignment, a: &[usize], phi: &PartialColoring) -> Result<()> {
    for v in g.boundary(a) {
        let r = lists.residual(g, phi, v).len();
        if r < 3 {
            return Err(Error::TheoremViolation(format!("boundary vertex {v} keeps only {r} colors")));
        }
    }
    Ok(())
}

fn assemble(
    g: &Graph,
    lists: &ListAssignment,
    family: Vec<(Vec<usize>, PartialColoring)>,
    oracle: &Oracle,
    stages: &mut Vec<Stage>,
) -> Result<(Vec<usize>, PartialColoring, Vec<(Vec<usize>, PartialColoring)>)> {
    match check_consistent_family(g, lists, &family, oracle)? {
        FamilyVerdict::Consistent { union } => {
            stage(stages, "family", format!("{} members consistent; |A| = {}", family.len(), union.a.len()));
            let cert = check_reduction(g, lists, &union.a, &union.phi, true, oracle)?
                .map_err(|r| Error::TheoremViolation(format!("union is not a complete reduction: {r:?}")))?;
            Ok((cert.a, cert.phi, family))
        }
        other => Err(exhausted("family", format!("{other:?}"))),
    }
}

/// Connects the faces `faces[connect[i]]` through `paths[i]` (each running
/// from its face to the root face `faces[connect[root]]`; `paths[root]` is
/// ignored). Returns a complete reduction `(A, φ)` such that every vertex
/// of `D_1(A)` keeps three colors, `G[A]` is connected and meets every
/// connected face, and `A` lies within distance two of the faces and
/// paths (or in their 4-shadows).
#[allow(clippy::too_many_arguments)]
pub fn connect_faces(
    emb: &RotationEmbedding,
    lists: &ListAssignment,
    faces: &[Vec<usize>],
    connect: &[usize],
    root: usize,
    paths: &[Vec<usize>],
    d: usize,
    oracle: &Oracle,
) -> Result<ConnectorCertificate> {
    let g = emb.graph();
    let mut stages = Vec::new();
    if connect.len() < 2 {
        return Err(Error::Hypothesis("at least two faces must be connected".into()));
    }
    if root >= connect.len() || paths.len() != connect.len() || connect.iter().any(|&c| c >= faces.len()) {
        return Err(Error::InvalidArgument("root, paths and face indices must match".into()));
    }
    common_hypotheses(emb, lists, faces, d)?;
    let root_face = &faces[connect[root]];
    let others: Vec<usize> = (0..connect.len()).filter(|&i| i != root).collect();
    for &i in &others {
        let face = &faces[connect[i]];
        let p = &paths[i];
        let dd = g.set_distance(face, root_face);
        if p.len() != dd + 1 || !face.contains(&p[0]) || !root_face.contains(p.last().unwrap()) || !g.is_path(p) {
            return Err(Error::Hypothesis(format!("path {i} is not a shortest path from its face to the root")));
        }
        if p.len() < 6 {
            return Err(Error::Hypothesis(format!("path {i} is too short for separate end windows")));
        }
    }
    for (x, &i) in others.iter().enumerate() {
        for &j in &others[x + 1..] {
            if g.set_distance(&paths[i], &paths[j]) < d {
                return Err(Error::Hypothesis(format!("paths {i} and {j} are closer than {d}")));
            }
        }
    }
    let mut shadows = Vec::new();
    for &c in connect {
        if faces[c].iter().any(|&v| lists.get(v).len() != 3) {
            return Err(Error::Hypothesis(format!("face {c} has a vertex whose list is not of size three")));
        }
        shadows.push(require_determined(emb, &faces[c], lists)?);
    }
    stage(&mut stages, "hypotheses", format!("{} faces, {} to connect, d = {d}", faces.len(), connect.len()));

    // Root face with the last two interior vertices of every path.
    let root_windows: Vec<Vec<usize>> = others
        .iter()
        .map(|&i| {
            let p = &paths[i];
            let m = p.len();
            vec![p[m - 1], p[m - 2], p[m - 3]]
        })
        .collect();
    let mut result = None;
    let mut root_tries = 0;
    for_each_window_coloring(g, lists, root_face, &root_windows, oracle, |root_a, root_phi| {
        root_tries += 1;
        let mut family = vec![(root_a.to_vec(), root_phi.clone())];
        let mut local = Vec::new();
        for &i in &others {
            let face = &faces[connect[i]];
            let p = &paths[i];
            let window = vec![p[0], p[1], p[2]];
            let mut done = None;
            let mut tries = 0;
            let r = for_each_window_coloring(g, lists, face, std::slice::from_ref(&window), oracle, |a, phi| {
                tries += 1;
                let mut fixed = phi.clone();
                for (v, c) in root_phi.pairs() {
                    fixed.set(v, c);
                }
                match color_path(g, lists, p, &fixed) {
                    Ok(Some(full)) => {
                        let path_phi = full.restrict(p);
                        done = Some(((a.to_vec(), phi.clone()), (p.clone(), path_phi)));
                        ControlFlow::Break(())
                    }
                    _ if tries >= WINDOW_ATTEMPTS => ControlFlow::Break(()),
                    _ => ControlFlow::Continue(()),
                }
            });
            if r.is_err() {
                return ControlFlow::Break(());
            }
            match done {
                Some((face_member, path_member)) => {
                    local.push(format!("face {} window after {tries} colorings", connect[i]));
                    family.push(face_member);
                    family.push(path_member);
                }
                None => return if root_tries >= WINDOW_ATTEMPTS { ControlFlow::Break(()) } else { ControlFlow::Continue(()) },
            }
        }
        result = Some((family, local));
        ControlFlow::Break(())
    })?;
    let (family, local) = result.ok_or_else(|| exhausted("paths", "no face colorings admit a path sweep"))?;
    stage(&mut stages, "root", format!("root face colored after {root_tries} colorings"));
    for l in local {
        stage(&mut stages, "face", l);
    }
    stage(&mut stages, "paths", format!("{} paths swept", others.len()));
    let (a, phi, family) = assemble(g, lists, family, oracle, &mut stages)?;

    // Independent clause checks.
    boundary_clause(g, lists, &a, &phi)?;
    if !induced_connected(g, &a) {
        return Err(Error::TheoremViolation("G[A] is disconnected".into()));
    }
    for &c in connect {
        if !faces[c].iter().any(|v| a.binary_search(v).is_ok()) {
            return Err(Error::TheoremViolation(format!("A misses face {c}")));
        }
    }
    let mut allowed = vec![false; g.n()];
    let mut mark_ball = |x: &[usize]| {
        for v in g.ball(x, 2) {
            allowed[v] = true;
        }
    };
    mark_ball(root_face);
    for &i in &others {
        let mut x = faces[connect[i]].clone();
        x.extend(paths[i].iter().copied());
        mark_ball(&x);
    }
    for v in shadows.into_iter().flatten() {
        allowed[v] = true;
    }
    if let Some(v) = a.iter().find(|&&v| !allowed[v]) {
        return Err(Error::TheoremViolation(format!("vertex {v} of A lies outside the permitted region")));
    }
    stage(&mut stages, "clauses", "boundary lists, connectivity and containment verified");
    Ok(ConnectorCertificate { a, phi, stages, family })
}

/// Connects the face `face` to itself through the returning path `path`.
/// Returns a complete reduction `(A, φ)` with `V(F) ∪ V(v_3 P v_{n−3}) ⊆ A
/// ⊆ B_2(F ∪ P) ∪ Sh⁴(F)`, `G[A]` connected and every vertex of `D_1(A)`
/// keeping three colors.
pub fn connect_single_face(
    emb: &RotationEmbedding,
    lists: &ListAssignment,
    face: &[usize],
    path: &[usize],
    d: usize,
    oracle: &Oracle,
) -> Result<ConnectorCertificate> {
    let g = emb.graph();
    let mut stages = Vec::new();
    common_hypotheses(emb, lists, std::slice::from_ref(&face.to_vec()), d)?;
    if face.iter().any(|&v| lists.get(v).len() < 3) {
        return Err(Error::Hypothesis("a vertex of F has a list of size < 3".into()));
    }
    let shadow = require_determined(emb, face, lists)?;
    let n_p = path.len().saturating_sub(1);
    if n_p < d || !g.is_path(path) || !g.is_shortest_path(path) {
        return Err(Error::Hypothesis(format!("P must be a shortest path of length ≥ {d}")));
    }
    let dist = g.distances_from(face);
    for k in 0..=3 {
        let mut on: Vec<usize> = (0..path.len()).filter(|&i| dist[path[i]] == k).collect();
        on.sort_unstable();
        let mut want = vec![k, n_p - k];
        want.dedup();
        if on != want {
            return Err(Error::Hypothesis(format!("P meets D_{k}(F) at positions {on:?}, expected {want:?}")));
        }
    }
    // The closed curve P + (an arc of F) must be noncontractible.
    let k = face.len();
    let i0 = face.iter().position(|&v| v == path[0]).unwrap();
    let i1 = face.iter().position(|&v| v == path[n_p]).unwrap();
    let mut closed: Vec<usize> = path.to_vec();
    let mut i = (i1 + 1) % k;
    while i != i0 {
        closed.push(face[i]);
        i = (i + 1) % k;
    }
    if is_contractible(emb, &closed)? {
        return Err(Error::Hypothesis("F ∪ P contains no noncontractible closed curve".into()));
    }
    stage(&mut stages, "hypotheses", format!("|F| = {}, |E(P)| = {n_p}, d = {d}", face.len()));

    let windows = vec![vec![path[0], path[1], path[2]], vec![path[n_p], path[n_p - 1], path[n_p - 2]]];
    let mut result = None;
    let mut tries = 0;
    for_each_window_coloring(g, lists, face, &windows, oracle, |a, phi| {
        tries += 1;
        match color_path(g, lists, path, phi) {
            Ok(Some(full)) => {
                result = Some(vec![(a.to_vec(), phi.clone()), (path.to_vec(), full.restrict(path))]);
                ControlFlow::Break(())
            }
            _ if tries >= WINDOW_ATTEMPTS * 4 => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    })?;
    let family = result.ok_or_else(|| exhausted("path", "no face coloring admits a path sweep"))?;
    stage(&mut stages, "face", format!("face and both windows colored after {tries} colorings"));
    stage(&mut stages, "path", "returning path swept");
    let (a, phi, family) = assemble(g, lists, family, oracle, &mut stages)?;

    boundary_clause(g, lists, &a, &phi)?;
    if !induced_connected(g, &a) {
        return Err(Error::TheoremViolation("G[A] is disconnected".into()));
    }
    let must: Vec<usize> = face.iter().chain(path[3..=n_p - 3].iter()).copied().collect();
    if let Some(v) = must.iter().find(|v| a.binary_search(v).is_err()) {
        return Err(Error::TheoremViolation(format!("vertex {v} of F ∪ v_3Pv_(n−3) is missing from A")));
    }
    let mut x: Vec<usize> = face.to_vec();
    x.extend(path.iter().copied());
    let mut allowed = vec![false; g.n()];
    for v in g.ball(&x, 2) {
        allowed[v] = true;
    }
    for v in shadow {
        allowed[v] = true;
    }
    if let Some(v) = a.iter().find(|&&v| !allowed[v]) {
        return Err(Error::TheoremViolation(format!("vertex {v} of A lies outside B_2(F ∪ P) ∪ Sh⁴(F)")));
    }
    stage(&mut stages, "clauses", "boundary lists, connectivity and containment verified");
    Ok(ConnectorCertificate { a, phi, stages, family })
}

/// Graphviz rendering with `A` highlighted and colors as labels. Edges and
/// vertices are sorted.
pub fn to_dot(emb: &RotationEmbedding, a: &[usize], phi: &PartialColoring) -> String {
    let g = emb.graph();
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in 0..g.n() {
        let in_a = a.binary_search(&v).is_ok();
        let label = match phi.get(v) {
            Some(c) => format!("{v}:{c}"),
            None => v.to_string(),
        };
        if in_a {
            out.push_str(&format!("  {v} [label=\"{label}\", style=filled, fillcolor=lightblue];\n"));
        } else {
            out.push_str(&format!("  {v} [label=\"{label}\"];\n"));
        }
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.sort_unstable();
    for (u, v) in edges {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{single_face_instance, two_face_surface_instance};

    #[test]
    fn two_faces_are_connected_and_certified() {
        let fam = two_face_surface_instance(1, DEFAULT_FACE_DISTANCE).unwrap();
        let oracle = Oracle::default();
        let cert = connect_faces(
            &fam.embedding,
            &fam.lists,
            &fam.faces,
            &fam.connect,
            fam.root,
            &fam.paths,
            DEFAULT_FACE_DISTANCE,
            &oracle,
        )
        .unwrap();
        let g = fam.embedding.graph();
        assert!(check_reduction(g, &fam.lists, &cert.a, &cert.phi, true, &oracle).unwrap().is_ok());
        assert!(matches!(
            check_consistent_family(g, &fam.lists, &cert.family, &oracle).unwrap(),
            FamilyVerdict::Consistent { .. }
        ));
        assert!(cert.stages.iter().any(|s| s.name == "clauses"));
        let dot = to_dot(&fam.embedding, &cert.a, &cert.phi);
        assert!(dot.starts_with("graph G {"));
    }

    #[test]
    fn single_face_is_connected_around_the_handle() {
        let inst = single_face_instance(3, DEFAULT_FACE_DISTANCE).unwrap();
        let oracle = Oracle::default();
        let cert =
            connect_single_face(&inst.embedding, &inst.lists, &inst.face, &inst.path, DEFAULT_FACE_DISTANCE, &oracle)
                .unwrap();
        assert!(inst.face.iter().all(|v| cert.a.contains(v)));
    }

    #[test]
    fn one_face_is_rejected() {
        let fam = two_face_surface_instance(2, DEFAULT_FACE_DISTANCE).unwrap();
        let err = connect_faces(
            &fam.embedding,
            &fam.lists,
            &fam.faces,
            &fam.connect[..1],
            0,
            &fam.paths[..1],
            DEFAULT_FACE_DISTANCE,
            &Oracle::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }
}
