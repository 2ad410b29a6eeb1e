//! List assignments, partial colorings and the reduced-list algebra, together
//! with the exact oracle ([`oracle`]), inertness ([`inert`]) and reductions
//! ([`reduction`]).

pub mod inert;
pub mod oracle;
pub mod reduction;
pub mod search;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::colorset::{Color, ColorSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};

pub use inert::{is_inert, is_inert_brute, is_inert_full_domain, InertVerdict};
pub use oracle::Oracle;
pub use search::{ReductionSearch, Role, SearchOutcome};
pub use reduction::{
    check_consistent_family, check_reduction, red_set, FamilyVerdict, ReductionCertificate, ReductionRefutation,
};

/// A color list per vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ListAssignment(Vec<ColorSet>);

impl ListAssignment {
    pub fn new(lists: Vec<ColorSet>) -> Self {
        ListAssignment(lists)
    }

    /// Every vertex gets the same list.
    pub fn uniform(n: usize, list: ColorSet) -> Self {
        ListAssignment(vec![list; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> ColorSet {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, list: ColorSet) {
        self.0[v] = list;
    }

    pub fn as_slice(&self) -> &[ColorSet] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<ColorSet> {
        self.0
    }

    /// Lists restricted to `verts`, renumbered in the given order.
    pub fn restrict(&self, verts: &[usize]) -> ListAssignment {
        ListAssignment(verts.iter().map(|&v| self.0[v]).collect())
    }

    /// `L_φ(v)`: `L(v)` minus the colors of colored neighbors.
    pub fn residual(&self, g: &Graph, phi: &PartialColoring, v: usize) -> ColorSet {
        let mut l = self.0[v];
        for &w in g.neighbors(v) {
            if let Some(c) = phi.get(w) {
                l.remove(c);
            }
        }
        l
    }

    /// All colors used by any list.
    pub fn palette(&self) -> ColorSet {
        self.0.iter().fold(ColorSet::EMPTY, |a, &b| a.union(b))
    }
}

impl std::ops::Index<usize> for ListAssignment {
    type Output = ColorSet;
    fn index(&self, v: usize) -> &ColorSet {
        &self.0[v]
    }
}

/// A partial coloring of a graph on `n` vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialColoring {
    colors: Vec<Option<Color>>,
}

impl PartialColoring {
    /// The empty coloring.
    pub fn new(n: usize) -> Self {
        PartialColoring { colors: vec![None; n] }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, Color)]) -> Self {
        let mut phi = PartialColoring::new(n);
        for &(v, c) in pairs {
            phi.set(v, c);
        }
        phi
    }

    pub fn from_options(colors: Vec<Option<Color>>) -> Self {
        PartialColoring { colors }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.colors[v]
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.colors[v] = Some(c);
    }

    pub fn unset(&mut self, v: usize) {
        self.colors[v] = None;
    }

    pub fn contains(&self, v: usize) -> bool {
        self.colors[v].is_some()
    }

    pub fn as_options(&self) -> &[Option<Color>] {
        &self.colors
    }

    /// Sorted domain.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.colors[v].is_some()).collect()
    }

    pub fn domain_mask(&self) -> Vec<bool> {
        self.colors.iter().map(Option::is_some).collect()
    }

    pub fn size(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    pub fn pairs(&self) -> Vec<(usize, Color)> {
        (0..self.n()).filter_map(|v| self.colors[v].map(|c| (v, c))).collect()
    }

    /// Restriction to the vertices of `keep`.
    pub fn restrict(&self, keep: &[usize]) -> PartialColoring {
        let mut out = PartialColoring::new(self.n());
        for &v in keep {
            if let Some(c) = self.colors[v] {
                out.set(v, c);
            }
        }
        out
    }

    /// Whether `self` agrees with `other` wherever `other` is defined.
    pub fn extends(&self, other: &PartialColoring) -> bool {
        (0..self.n()).all(|v| other.colors[v].is_none() || other.colors[v] == self.colors[v])
    }

    /// Proper on the induced subgraph of its domain and respecting `lists`.
    pub fn validate(&self, g: &Graph, lists: &ListAssignment) -> Result<()> {
        if self.n() != g.n() || lists.len() != g.n() {
            return Err(Error::InvalidColoring(format!(
                "size mismatch: coloring {}, lists {}, graph {}",
                self.n(),
                lists.len(),
                g.n()
            )));
        }
        for v in 0..g.n() {
            if let Some(c) = self.colors[v] {
                if !lists.get(v).contains(c) {
                    return Err(Error::InvalidColoring(format!("color {c} of vertex {v} is not in its list")));
                }
            }
        }
        self.validate_proper(g)
    }

    pub fn validate_proper(&self, g: &Graph) -> Result<()> {
        for (u, v) in g.edges() {
            if let (Some(a), Some(b)) = (self.colors[u], self.colors[v]) {
                if a == b {
                    return Err(Error::InvalidColoring(format!("edge {u}-{v} has both ends colored {a}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        self.validate_proper(g).is_ok()
    }

    /// A total coloring: every vertex colored, properly, from its list.
    pub fn is_full_coloring(&self, g: &Graph, lists: &ListAssignment) -> bool {
        self.size() == g.n() && self.validate(g, lists).is_ok()
    }
}

impl fmt::Debug for PartialColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, c)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{c}")?;
        }
        f.write_str("}")
    }
}

#[derive(Serialize, Deserialize)]
struct ColoringRepr {
    n: usize,
    assignment: Vec<(usize, Color)>,
}

impl Serialize for PartialColoring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ColoringRepr { n: self.n(), assignment: self.pairs() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialColoring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ColoringRepr::deserialize(d)?;
        if let Some(&(v, _)) = repr.assignment.iter().find(|&&(v, _)| v >= repr.n) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(PartialColoring::from_pairs(repr.n, &repr.assignment))
    }
}

/// Why two partial colorings cannot be combined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Incompatibility {
    /// Both color the vertex, differently.
    Vertex { v: usize, left: Color, right: Color },
    /// An edge whose ends receive the same color from the two sides.
    Edge { u: usize, v: usize, color: Color },
}

/// `φ ∪ ψ` when well defined.
pub fn union_colorings(
    g: &Graph,
    phi: &PartialColoring,
    psi: &PartialColoring,
) -> std::result::Result<PartialColoring, Incompatibility> {
    let mut out = phi.clone();
    for v in 0..g.n() {
        match (phi.get(v), psi.get(v)) {
            (Some(a), Some(b)) if a != b => return Err(Incompatibility::Vertex { v, left: a, right: b }),
            (None, Some(b)) => out.set(v, b),
            _ => {}
        }
    }
    for (u, v) in g.edges() {
        for (x, y) in [(u, v), (v, u)] {
            if let (Some(a), Some(b)) = (phi.get(x), psi.get(y)) {
                if a == b {
                    return Err(Incompatibility::Edge { u: x, v: y, color: a });
                }
            }
        }
    }
    Ok(out)
}

/// The reduced instance `G ∖ (dom φ ∖ S)` with lists `L^S_φ`.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub graph: Graph,
    pub lists: ListAssignment,
    /// New index → old vertex.
    pub vertex_map: Vec<usize>,
    /// Old vertex → new index (`UNREACHED` when deleted).
    pub old_to_new: Vec<usize>,
}

impl ReducedInstance {
    /// Lifts a coloring of the reduced graph back to the original vertex set.
    pub fn lift(&self, psi: &PartialColoring) -> PartialColoring {
        let mut out = PartialColoring::new(self.old_to_new.len());
        for (i, &v) in self.vertex_map.iter().enumerate() {
            if let Some(c) = psi.get(i) {
                out.set(v, c);
            }
        }
        out
    }
}

/// `L^S_φ` as lists on the original index set; vertices of `dom φ ∖ S`
/// (which are deleted) get the empty list. Also returns the kept-vertex mask.
pub fn reduced_lists(
    g: &Graph,
    lists: &ListAssignment,
    phi: &PartialColoring,
    s: &[usize],
) -> (Vec<bool>, ListAssignment) {
    let mut in_s = vec![false; g.n()];
    for &v in s {
        in_s[v] = true;
    }
    let keep: Vec<bool> = (0..g.n()).map(|v| !phi.contains(v) || in_s[v]).collect();
    let out = (0..g.n())
        .map(|v| match phi.get(v) {
            Some(c) if in_s[v] => ColorSet::singleton(c),
            Some(_) => ColorSet::EMPTY,
            None => {
                let mut l = lists.get(v);
                for &w in g.neighbors(v) {
                    if !in_s[w] {
                        if let Some(c) = phi.get(w) {
                            l.remove(c);
                        }
                    }
                }
                l
            }
        })
        .collect();
    (keep, ListAssignment(out))
}

/// Builds the reduced instance `(G ∖ (dom φ ∖ S), L^S_φ)`.
pub fn reduce_lists(g: &Graph, lists: &ListAssignment, phi: &PartialColoring, s: &[usize]) -> ReducedInstance {
    let (keep, l) = reduced_lists(g, lists, phi, s);
    let vertex_map: Vec<usize> = (0..g.n()).filter(|&v| keep[v]).collect();
    let mut old_to_new = vec![UNREACHED; g.n()];
    for (i, &v) in vertex_map.iter().enumerate() {
        old_to_new[v] = i;
    }
    ReducedInstance { graph: g.induced(&vertex_map), lists: l.restrict(&vertex_map), vertex_map, old_to_new }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(v: &[Color]) -> ColorSet {
        v.iter().copied().collect()
    }

    #[test]
    fn reduce_triangle() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let l = ListAssignment::uniform(3, cs(&[1, 2, 3]));
        let phi = PartialColoring::from_pairs(3, &[(0, 1)]);
        let r = reduce_lists(&g, &l, &phi, &[]);
        assert_eq!(r.vertex_map, vec![1, 2]);
        assert_eq!(r.lists.get(0), cs(&[2, 3]));
        assert_eq!(r.graph.num_edges(), 1);
    }

    #[test]
    fn reduce_path_keeping_an_end() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let l = ListAssignment::uniform(3, cs(&[1, 2, 3]));
        let phi = PartialColoring::from_pairs(3, &[(0, 1), (2, 1)]);
        let r = reduce_lists(&g, &l, &phi, &[2]);
        assert_eq!(r.vertex_map, vec![1, 2]);
        assert_eq!(r.lists.get(0), cs(&[2, 3]));
        assert_eq!(r.lists.get(1), cs(&[1]));
    }

    #[test]
    fn unions() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let a = PartialColoring::from_pairs(2, &[(0, 1)]);
        let b = PartialColoring::from_pairs(2, &[(0, 2)]);
        let c = PartialColoring::from_pairs(2, &[(1, 1)]);
        let d = PartialColoring::from_pairs(2, &[(1, 2)]);
        assert_eq!(union_colorings(&g, &a, &b), Err(Incompatibility::Vertex { v: 0, left: 1, right: 2 }));
        assert_eq!(union_colorings(&g, &a, &c), Err(Incompatibility::Edge { u: 0, v: 1, color: 1 }));
        assert_eq!(union_colorings(&g, &a, &d).unwrap().pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn coloring_json_round_trip() {
        let phi = PartialColoring::from_pairs(4, &[(1, 3), (3, 0)]);
        let s = serde_json::to_string(&phi).unwrap();
        let back: PartialColoring = serde_json::from_str(&s).unwrap();
        assert_eq!(back, phi);
        assert!(serde_json::from_str::<PartialColoring>(r#"{"n":2,"assignment":[[5,1]]}"#).is_err());
    }
}
