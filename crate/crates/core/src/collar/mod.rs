//! Collars: a contractible facial cycle `C` of an embedded graph together
//! with a list assignment, and the structures hanging off `C`.
//!
//! * chord sides — for every generalized chord `Q` of `C`, which of the two
//!   natural sides is the small one (a disc whose non-`C` vertices carry
//!   5-lists) and which is the large one;
//! * shadows `Sh^k(C)` and `Sh^k(P)` for subpaths `P ⊆ C`, `k`-consistency;
//! * `Link(P)` colorings, `P`-peaks and the "one more vertex" reductions;
//! * `w`-enclosures, `(Q, uw)`-targets and `(Q, uw)`-pairs, and `Sp(C)`;
//! * the face connectors in [`connect`].
//!
//! When both sides of a chord satisfy the small-side clause (a pure disc
//! with 5-lists everywhere) the side with fewer vertices is called small,
//! ties broken by the lexicographically smaller vertex set, and the
//! determination is flagged as *weak*.

pub mod connect;

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::ControlFlow;
use std::rc::Rc;

use serde::Serialize;

use crate::colorset::ColorSet;
use crate::embedding::RotationEmbedding;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::listcolor::{
    is_inert, ListAssignment, Oracle, PartialColoring, ReductionCertificate, ReductionSearch, Role, SearchOutcome,
};
use crate::topology::{enumerate_k_chords, is_contractible, natural_partition, GeneralizedChord, PartitionSide};

pub use connect::{
    connect_faces, connect_single_face, to_dot, ConnectorCertificate, Stage, DEFAULT_FACE_DISTANCE,
};

/// A chord of `C` together with its labeled sides.
#[derive(Clone, Debug, Serialize)]
pub struct LabeledChord {
    pub chord: GeneralizedChord,
    pub small: PartitionSide,
    pub large: PartitionSide,
    /// Both sides satisfied the small-side clause; the labeling used the
    /// size convention.
    pub weak: bool,
}

/// The labeled chords of length at most `k`.
#[derive(Clone, Debug, Serialize)]
pub struct Determination {
    pub k: usize,
    pub chords: Vec<LabeledChord>,
    /// Some chord needed the size convention.
    pub weak: bool,
}

impl Determination {
    /// `Sh^j(C)` for `j ≤ k`: the union of `V(G^small_Q ∖ Q)` over chords of
    /// length at most `j`. Sorted.
    pub fn shadow(&self, j: usize) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for lc in self.chords.iter().filter(|lc| lc.chord.len() <= j) {
            for &v in &lc.small.vertices {
                if !lc.chord.vertices.contains(&v) {
                    out.insert(v);
                }
            }
        }
        out.into_iter().collect()
    }
}

/// A facial cycle with lists; see the module docs.
pub struct Collar<'a> {
    pub emb: &'a RotationEmbedding,
    pub cycle: Vec<usize>,
    pub lists: &'a ListAssignment,
    on_c: Vec<bool>,
    c_edges: Vec<(usize, usize)>,
    cache: RefCell<BTreeMap<usize, Rc<Determination>>>,
}

/// A `P`-peak.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Peak {
    pub v: usize,
    /// Not adjacent to an endpoint of `P`.
    pub internal: bool,
}

/// Result of the one-more-vertex search at a single internal peak.
#[derive(Clone, Debug, Serialize)]
pub struct PeakAttempt {
    pub peak: usize,
    pub certificate: Option<ReductionCertificate>,
    /// The search stopped on its node budget rather than by exhaustion.
    pub budget_exceeded: bool,
}

/// A `w`-enclosure.
#[derive(Clone, Debug, Serialize)]
pub struct Enclosure {
    pub w: usize,
    pub chord: GeneralizedChord,
    pub degenerate: bool,
    pub maximal: bool,
    /// Vertex set of `G^small_Q`.
    pub small: Vec<usize>,
    /// Vertex set of `G^large_Q`.
    pub large: Vec<usize>,
}

/// Outcome of the target and pair searches.
#[derive(Clone, Debug, Serialize)]
pub enum PairOutcome {
    Found { set: Vec<usize>, phi: PartialColoring },
    /// The prescribed shape cannot satisfy the definition (reason given).
    Infeasible(String),
    Exhausted,
    BudgetExceeded { nodes: u64 },
}

impl PairOutcome {
    pub fn found(&self) -> Option<(&[usize], &PartialColoring)> {
        match self {
            PairOutcome::Found { set, phi } => Some((set, phi)),
            _ => None,
        }
    }
}

/// An element of `Sp(C)` with its spanning 2-chord `P_y` and `G_y`.
#[derive(Clone, Debug, Serialize)]
pub struct Spanner {
    pub y: usize,
    pub chord: GeneralizedChord,
    /// Vertex set of `G_y = G^small_{P_y}`.
    pub region: Vec<usize>,
}

fn count_components_on_path(side: &PartitionSide, path: &[usize]) -> usize {
    let on: Vec<usize> = path.iter().copied().filter(|&v| side.contains(v)).collect();
    if on.is_empty() {
        return 0;
    }
    let idx: HashMap<usize, usize> = on.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..on.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for w in path.windows(2) {
        let e = (w[0].min(w[1]), w[0].max(w[1]));
        if let (Some(&i), Some(&j)) = (idx.get(&w[0]), idx.get(&w[1])) {
            if side.edges.binary_search(&e).is_ok() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..on.len()).filter(|&i| find(&mut parent, i) == i).count()
}

impl<'a> Collar<'a> {
    /// `cycle` must be a contractible facial cycle.
    pub fn new(emb: &'a RotationEmbedding, cycle: &[usize], lists: &'a ListAssignment) -> Result<Self> {
        if emb.find_face(cycle).is_none() {
            return Err(Error::NotACycle(format!("{cycle:?} is not a facial cycle")));
        }
        if !emb.graph().is_cycle(cycle) {
            return Err(Error::NotACycle(format!("facial walk {cycle:?} is not a cycle")));
        }
        if !is_contractible(emb, cycle)? {
            return Err(Error::Hypothesis("collar cycle is noncontractible".into()));
        }
        if lists.len() != emb.n() {
            return Err(Error::InvalidArgument("list assignment has the wrong size".into()));
        }
        let mut on_c = vec![false; emb.n()];
        for &v in cycle {
            on_c[v] = true;
        }
        let k = cycle.len();
        let c_edges = (0..k).map(|i| (cycle[i], cycle[(i + 1) % k])).collect();
        Ok(Collar { emb, cycle: cycle.to_vec(), lists, on_c, c_edges, cache: RefCell::new(BTreeMap::new()) })
    }

    pub fn graph(&self) -> &Graph {
        self.emb.graph()
    }

    pub fn on_cycle(&self, v: usize) -> bool {
        self.on_c[v]
    }

    /// Whether `(a, b)` is an edge of `C`.
    pub fn is_cycle_edge(&self, a: usize, b: usize) -> bool {
        self.c_edges.iter().any(|&(x, y)| (x == a && y == b) || (x == b && y == a))
    }

    /// Distances from `C`.
    pub fn distances(&self) -> Vec<usize> {
        self.graph().distances_from(&self.cycle)
    }

    /// `D_j(C)`.
    pub fn shell(&self, j: usize) -> Vec<usize> {
        self.graph().shell(&self.cycle, j)
    }

    /// The small-side clause: the side is a disc and its vertices off `C`
    /// have lists of size at least five.
    fn small_clause(&self, side: &PartitionSide) -> bool {
        side.is_disc && side.vertices.iter().all(|&v| self.on_c[v] || self.lists.get(v).len() >= 5)
    }

    /// Labels the two sides of one chord.
    pub fn label(&self, q: &GeneralizedChord) -> Result<LabeledChord> {
        let part = natural_partition(self.emb, &self.cycle, q).map_err(|e| Error::NotDetermined {
            k: q.len(),
            witness: format!("chord {:?}: {e}", q.vertices),
        })?;
        let [s0, s1] = part.sides;
        let a0 = self.small_clause(&s0);
        let a1 = self.small_clause(&s1);
        match (a0, a1) {
            (true, false) => Ok(LabeledChord { chord: q.clone(), small: s0, large: s1, weak: false }),
            (false, true) => Ok(LabeledChord { chord: q.clone(), small: s1, large: s0, weak: false }),
            (true, true) => {
                let first_small = (s0.vertices.len(), &s0.vertices) <= (s1.vertices.len(), &s1.vertices);
                let (small, large) = if first_small { (s0, s1) } else { (s1, s0) };
                Ok(LabeledChord { chord: q.clone(), small, large, weak: true })
            }
            (false, false) => Err(Error::NotDetermined {
                k: q.len(),
                witness: format!("neither side of chord {:?} is a 5-listed disc", q.vertices),
            }),
        }
    }

    /// Labels every generalized chord of length at most `k`; fails with the
    /// first chord whose sides cannot be labeled. Cached per `k`.
    pub fn determine(&self, k: usize) -> Result<Rc<Determination>> {
        if let Some(d) = self.cache.borrow().get(&k) {
            return Ok(d.clone());
        }
        let mut chords = Vec::new();
        let mut weak = false;
        for q in enumerate_k_chords(self.graph(), &self.cycle, &self.c_edges, k) {
            let lc = self.label(&q)?;
            weak |= lc.weak;
            chords.push(lc);
        }
        let d = Rc::new(Determination { k, chords, weak });
        self.cache.borrow_mut().insert(k, d.clone());
        Ok(d)
    }

    /// Whether the collar is uniquely `k`-determined: `Some(weak)` when every
    /// chord is labeled (with `weak` set if the size convention was used),
    /// `None` otherwise.
    pub fn uniquely_k_determined(&self, k: usize) -> Result<Option<bool>> {
        match self.determine(k) {
            Ok(d) => Ok(Some(d.weak)),
            Err(Error::NotDetermined { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// `Sh^k(C)`.
    pub fn shadow(&self, k: usize) -> Result<Vec<usize>> {
        Ok(self.determine(k)?.shadow(k))
    }

    fn check_subpath(&self, path: &[usize]) -> Result<()> {
        if path.is_empty() || path.iter().any(|&v| !self.on_c[v]) {
            return Err(Error::InvalidArgument("P must be a nonempty subpath of C".into()));
        }
        if path.len() > 1 && !self.graph().is_path(path) {
            return Err(Error::InvalidArgument(format!("{path:?} is not a path")));
        }
        if path.windows(2).any(|w| !self.is_cycle_edge(w[0], w[1])) {
            return Err(Error::InvalidArgument("P must follow edges of C".into()));
        }
        Ok(())
    }

    /// `Sh^k(P)`, sorted.
    pub fn sh_k_of_path(&self, path: &[usize], k: usize) -> Result<Vec<usize>> {
        self.check_subpath(path)?;
        let det = self.determine(k)?;
        let mut out = BTreeSet::new();
        for lc in &det.chords {
            if !lc.chord.proper {
                continue;
            }
            let (a, b) = lc.chord.endpoints();
            if !path.contains(&a) || !path.contains(&b) {
                continue;
            }
            if count_components_on_path(&lc.small, path) == 1 && count_components_on_path(&lc.large, path) == 2 {
                for &v in &lc.small.vertices {
                    if !lc.chord.vertices.contains(&v) {
                        out.insert(v);
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// `None` if `P` is `k`-consistent, otherwise the reason.
    pub fn k_consistency(&self, path: &[usize], k: usize) -> Result<Option<String>> {
        self.check_subpath(path)?;
        let g = self.graph();
        let in_p: BTreeSet<usize> = path.iter().copied().collect();
        for &p in path {
            for &x in g.neighbors(p) {
                if self.on_c[x] && !in_p.contains(&x) && !self.is_cycle_edge(p, x) {
                    return Ok(Some(format!("chord {p}-{x} leaves P")));
                }
            }
        }
        let det = self.determine(k)?;
        let interior: BTreeSet<usize> =
            if path.len() > 2 { path[1..path.len() - 1].iter().copied().collect() } else { BTreeSet::new() };
        for lc in &det.chords {
            if !lc.chord.proper {
                continue;
            }
            let (a, b) = lc.chord.endpoints();
            if !in_p.contains(&a) || !in_p.contains(&b) || !(interior.contains(&a) || interior.contains(&b)) {
                continue;
            }
            let s = count_components_on_path(&lc.small, path);
            let l = count_components_on_path(&lc.large, path);
            if s != 1 || l != 2 {
                return Ok(Some(format!(
                    "chord {:?} meets P in {s} small-side and {l} large-side components",
                    lc.chord.vertices
                )));
            }
        }
        Ok(None)
    }

    pub fn is_k_consistent(&self, path: &[usize], k: usize) -> Result<bool> {
        Ok(self.k_consistency(path, k)?.is_none())
    }

    /// Visits `Link(P)` elements whose endpoint colors lie in `a` (first
    /// vertex) and `a_end` (last vertex). Stops when `f` breaks.
    pub fn for_each_link(
        &self,
        path: &[usize],
        a: ColorSet,
        a_end: ColorSet,
        oracle: &Oracle,
        mut f: impl FnMut(&PartialColoring) -> ControlFlow<()>,
    ) -> Result<()> {
        let sh2 = self.sh_k_of_path(path, 2)?;
        let g = self.graph();
        let n = g.n();
        let free: Vec<usize> = path.iter().copied().filter(|v| sh2.binary_search(v).is_err()).collect();
        let first = path[0];
        let last = *path.last().unwrap();
        let mut near_sh = vec![false; n];
        for &v in &sh2 {
            for &u in g.neighbors(v) {
                near_sh[u] = true;
            }
        }
        let mut memo: HashMap<Vec<(usize, u8)>, bool> = HashMap::new();
        let mut phi = PartialColoring::new(n);
        let mut err = None;
        fn rec(
            i: usize,
            ctx: &mut (
                &Graph,
                &ListAssignment,
                &[usize],
                &[usize],
                &Oracle,
                &[bool],
                &mut HashMap<Vec<(usize, u8)>, bool>,
                &mut Option<Error>,
            ),
            bounds: (usize, usize, ColorSet, ColorSet),
            phi: &mut PartialColoring,
            f: &mut dyn FnMut(&PartialColoring) -> ControlFlow<()>,
        ) -> ControlFlow<()> {
            let (g, lists, free, sh2, oracle, near_sh, memo, err) = ctx;
            if i == free.len() {
                let key: Vec<(usize, u8)> = phi.pairs().into_iter().filter(|&(v, _)| near_sh[v]).collect();
                let inert = match memo.get(&key) {
                    Some(&b) => b,
                    None => match is_inert(g, lists, sh2, phi, oracle) {
                        Ok(v) => {
                            memo.insert(key, v.is_inert());
                            v.is_inert()
                        }
                        Err(e) => {
                            **err = Some(e);
                            return ControlFlow::Break(());
                        }
                    },
                };
                return if inert { f(phi) } else { ControlFlow::Continue(()) };
            }
            let v = free[i];
            let (first, last, a, a_end) = bounds;
            let mut opts = lists.residual(g, phi, v);
            if v == first {
                opts = opts.intersection(a);
            }
            if v == last {
                opts = opts.intersection(a_end);
            }
            for c in opts.iter() {
                phi.set(v, c);
                let flow = rec(i + 1, ctx, bounds, phi, f);
                phi.unset(v);
                flow?;
            }
            ControlFlow::Continue(())
        }
        let mut ctx = (g, self.lists, &free[..], &sh2[..], oracle, &near_sh[..], &mut memo, &mut err);
        let _ = rec(0, &mut ctx, (first, last, a, a_end), &mut phi, &mut f);
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// A `Link(P)` element with endpoint colors in `a` and `a_end`, if any.
    pub fn find_link(
        &self,
        path: &[usize],
        a: ColorSet,
        a_end: ColorSet,
        oracle: &Oracle,
    ) -> Result<Option<PartialColoring>> {
        let mut found = None;
        self.for_each_link(path, a, a_end, oracle, |phi| {
            found = Some(phi.clone());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    /// Up to `limit` elements of `Link(P)`.
    pub fn link_set(&self, path: &[usize], limit: usize, oracle: &Oracle) -> Result<Vec<PartialColoring>> {
        let all = ColorSet::range(0, crate::colorset::MAX_COLOR + 1);
        let mut out = Vec::new();
        self.for_each_link(path, all, all, oracle, |phi| {
            out.push(phi.clone());
            if out.len() >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(out)
    }

    /// `P`-peaks, sorted by vertex.
    pub fn peaks(&self, path: &[usize]) -> Result<Vec<Peak>> {
        let sh2 = self.sh_k_of_path(path, 2)?;
        let g = self.graph();
        let ends = [path[0], *path.last().unwrap()];
        let mut out = Vec::new();
        for v in self.shell(1) {
            let on_p = g.neighbors(v).iter().filter(|u| path.contains(u)).count();
            if on_p >= 2 && sh2.binary_search(&v).is_err() {
                let internal = !ends.iter().any(|&e| g.has_edge(v, e));
                out.push(Peak { v, internal });
            }
        }
        Ok(out)
    }

    /// Checks the hypotheses of the one-more-vertex statement for `P`;
    /// `None` when they hold. Short-inseparability is the caller's job.
    pub fn link_plus_one_hypotheses(&self, path: &[usize]) -> Result<Option<String>> {
        self.check_subpath(path)?;
        if self.uniquely_k_determined(3)?.is_none() {
            return Ok(Some("collar is not uniquely 3-determined".into()));
        }
        if let Some(r) = self.k_consistency(path, 3)? {
            return Ok(Some(format!("P is not 3-consistent: {r}")));
        }
        if path.len() >= self.cycle.len() {
            return Ok(Some("C ∖ P is empty".into()));
        }
        if path.len() > 2 && path[1..path.len() - 1].iter().any(|&v| self.lists.get(v).len() < 3) {
            return Ok(Some("an internal vertex of P has a list of size < 3".into()));
        }
        if let Some(r) = self.b2_condition() {
            return Ok(Some(r));
        }
        Ok(None)
    }

    /// Every face touching `B_2(C)` other than `C` is a triangle and every
    /// vertex of `B_2(C) ∖ C` has a 5-list. `None` when it holds.
    pub fn b2_condition(&self) -> Option<String> {
        let dist = self.distances();
        let c_face = self.emb.find_face(&self.cycle).map(|(f, _)| f);
        for f in 0..self.emb.num_faces() {
            if Some(f) == c_face {
                continue;
            }
            let walk = self.emb.face_walk(f);
            if walk.len() != 3 && walk.iter().any(|&v| dist[v] <= 2) {
                return Some(format!("face {walk:?} near C is not a triangle"));
            }
        }
        (0..self.emb.n())
            .find(|&v| dist[v] >= 1 && dist[v] <= 2 && self.lists.get(v).len() < 5)
            .map(|v| format!("vertex {v} near C has a list of size < 5"))
    }

    /// For every internal `P`-peak `w`, searches an `L`-reduction `(T, τ)`
    /// with `V(P) ⊆ T ⊆ V(P + w) ∪ Sh³(P)` and `τ ⊇ φ` (the coloring of the
    /// two endpoints). Every certificate comes from `check_reduction`.
    pub fn link_plus_one(
        &self,
        path: &[usize],
        phi: &PartialColoring,
        oracle: &Oracle,
        budget: u64,
    ) -> Result<Vec<PeakAttempt>> {
        self.check_subpath(path)?;
        let ends = [path[0], *path.last().unwrap()];
        if phi.domain().iter().any(|v| !ends.contains(v)) || ends.iter().any(|&e| !phi.contains(e)) {
            return Err(Error::InvalidArgument("φ must color exactly the endpoints of P".into()));
        }
        let g = self.graph();
        let sh3 = self.sh_k_of_path(path, 3)?;
        let mut out = Vec::new();
        for peak in self.peaks(path)?.into_iter().filter(|p| p.internal) {
            let w = peak.v;
            let mut roles = vec![Role::Outside; g.n()];
            for &v in path.iter().chain(sh3.iter()) {
                roles[v] = Role::Optional;
            }
            roles[w] = Role::Optional;
            let mut order: Vec<usize> = path.iter().copied().filter(|v| !phi.contains(*v)).collect();
            order.push(w);
            for &v in &sh3 {
                if !order.contains(&v) && !phi.contains(v) {
                    order.push(v);
                }
            }
            let outcome = ReductionSearch::new(g, self.lists, roles, phi.clone())?
                .oracle(*oracle)
                .budget(budget)
                .order(order)
                .uncolored_first(false)
                .find_first()?;
            let (certificate, budget_exceeded) = match outcome {
                SearchOutcome::Found(c) => (Some(c), false),
                SearchOutcome::Exhausted => (None, false),
                SearchOutcome::BudgetExceeded { .. } => (None, true),
            };
            out.push(PeakAttempt { peak: w, certificate, budget_exceeded });
        }
        Ok(out)
    }

    /// Whether `w ∈ D_2(C)` is degenerate: `G[N(w) ∩ D_1(C)]` is a path of
    /// length at most one.
    pub fn is_degenerate(&self, w: usize) -> bool {
        let dist = self.distances();
        let g = self.graph();
        let n1: Vec<usize> = g.neighbors(w).iter().copied().filter(|&v| dist[v] == 1).collect();
        match n1.len() {
            1 => true,
            2 => g.has_edge(n1[0], n1[1]),
            _ => false,
        }
    }

    /// All `w`-enclosures, each labeled, maximal ones flagged.
    pub fn enumerate_enclosures(&self, w: usize) -> Result<Vec<Enclosure>> {
        let dist = self.distances();
        if dist[w] != 2 {
            return Err(Error::InvalidArgument(format!("vertex {w} is not at distance two from C")));
        }
        let g = self.graph();
        let n1: Vec<usize> = g.neighbors(w).iter().copied().filter(|&v| dist[v] == 1).collect();
        let c_nbrs = |v: usize| -> Vec<usize> { g.neighbors(v).iter().copied().filter(|&x| self.on_c[x]).collect() };
        let degenerate = self.is_degenerate(w);
        let mut chords: Vec<GeneralizedChord> = Vec::new();
        if !degenerate {
            for (i, &a) in n1.iter().enumerate() {
                for &b in &n1[i + 1..] {
                    if g.has_edge(a, b) {
                        continue;
                    }
                    for &c in &c_nbrs(a) {
                        for &c2 in &c_nbrs(b) {
                            if c != c2 {
                                chords.push(GeneralizedChord::path(vec![c, a, w, b, c2]));
                            }
                        }
                    }
                }
            }
        } else {
            // Q ∖ C = a y y' b inside D_1(C), with N(w) ∩ D_1(C) ⊆ {y, y'}.
            for y in 0..g.n() {
                if dist[y] != 1 {
                    continue;
                }
                for &y2 in g.neighbors(y) {
                    if dist[y2] != 1 || !n1.iter().all(|&x| x == y || x == y2) {
                        continue;
                    }
                    if !(n1.contains(&y) || n1.contains(&y2)) {
                        continue;
                    }
                    for &a in g.neighbors(y) {
                        if dist[a] != 1 || a == y2 {
                            continue;
                        }
                        for &b in g.neighbors(y2) {
                            if dist[b] != 1 || b == y || b == a {
                                continue;
                            }
                            for &c in &c_nbrs(a) {
                                for &c2 in &c_nbrs(b) {
                                    if c == c2 {
                                        chords.push(GeneralizedChord::cycle(vec![c, a, y, y2, b]));
                                    } else {
                                        chords.push(GeneralizedChord::path(vec![c, a, y, y2, b, c2]));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        // Each chord is listed in both directions; keep one orientation.
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for q in chords {
            let mut key = q.vertices.clone();
            if q.proper {
                let mut rev = key.clone();
                rev.reverse();
                key = key.min(rev);
            } else {
                let mut rev = vec![key[0]];
                rev.extend(key[1..].iter().rev());
                key = key.min(rev);
            }
            if !seen.insert((q.proper, key)) {
                continue;
            }
            let lc = self.label(&q)?;
            out.push(Enclosure {
                w,
                chord: q,
                degenerate,
                maximal: false,
                small: lc.small.vertices.clone(),
                large: lc.large.vertices.clone(),
            });
        }
        let smalls: Vec<BTreeSet<usize>> = out.iter().map(|e| e.small.iter().copied().collect()).collect();
        for i in 0..out.len() {
            out[i].maximal = !(0..out.len())
                .any(|j| j != i && smalls[i].is_subset(&smalls[j]) && smalls[i].len() < smalls[j].len());
        }
        out.sort_by(|a, b| a.chord.cmp(&b.chord));
        Ok(out)
    }

    /// Checks the hypotheses shared by the target and pair statements;
    /// `None` when they hold. Short-inseparability is the caller's job.
    pub fn enclosure_hypotheses(&self, enc: &Enclosure, u: usize) -> Result<Option<String>> {
        let dist = self.distances();
        let g = self.graph();
        if dist[u] != 3 || !g.has_edge(u, enc.w) {
            return Ok(Some("uw must be an edge with d(u, C) = 3".into()));
        }
        if self.uniquely_k_determined(4)?.is_none() {
            return Ok(Some("collar is not uniquely 4-determined".into()));
        }
        let sh4 = self.shadow(4)?;
        if sh4.binary_search(&u).is_ok() || sh4.binary_search(&enc.w).is_ok() {
            return Ok(Some("u or w lies in Sh^4(C)".into()));
        }
        if let Some(v) = (0..g.n()).find(|&v| dist[v] >= 1 && dist[v] <= 4 && self.lists.get(v).len() < 5) {
            return Ok(Some(format!("vertex {v} of B_4(C) ∖ C has a list of size < 5")));
        }
        Ok(None)
    }

    /// Searches a `(Q, uw)`-target for the enclosure `enc`. The reduction is
    /// checked on `V(G^small_Q ∖ (Q ∖ dom ψ)) ∪ {u}` (u carries a color of ψ).
    pub fn find_target(&self, enc: &Enclosure, u: usize, oracle: &Oracle, budget: u64) -> Result<PairOutcome> {
        if let Some(r) = self.enclosure_hypotheses(enc, u)? {
            return Err(Error::Hypothesis(r));
        }
        let g = self.graph();
        let q = &enc.chord.vertices;
        let (p, p2) = enc.chord.endpoints();
        let mut roles = vec![Role::Outside; g.n()];
        for &v in &enc.small {
            roles[v] = Role::Optional;
        }
        let q_off: Vec<usize> = q.iter().copied().filter(|&v| !self.on_c[v]).collect();
        for &v in &q_off {
            roles[v] = Role::Outside;
        }
        roles[p] = Role::Colored;
        roles[p2] = Role::Colored;
        roles[u] = Role::Colored;
        let mut middle = Vec::new();
        if enc.degenerate {
            // Q ∖ C = a y y' b; the middle edge may be colored.
            middle = vec![q_off[1], q_off[2]];
            for &y in &middle {
                roles[y] = Role::Optional;
            }
        } else {
            roles[enc.w] = Role::Colored;
        }
        let w = enc.w;
        let mut search = ReductionSearch::new(g, self.lists, roles, PartialColoring::new(g.n()))?
            .oracle(*oracle)
            .budget(budget)
            .uncolored_first(false);
        if enc.degenerate {
            search = search.leaf_filter(move |tau: &PartialColoring| {
                middle.iter().any(|&y| tau.contains(y) && g.has_edge(y, w))
            });
        }
        Ok(match search.find_first()? {
            SearchOutcome::Found(c) => {
                // Uncolored middle vertices are not part of the reduction set.
                let set: Vec<usize> =
                    c.a.iter().copied().filter(|&v| self.on_c[v] || !q.contains(&v) || c.phi.contains(v)).collect();
                PairOutcome::Found { set, phi: c.phi }
            }
            SearchOutcome::Exhausted => PairOutcome::Exhausted,
            SearchOutcome::BudgetExceeded { nodes } => PairOutcome::BudgetExceeded { nodes },
        })
    }

    /// `Sp(C)` relative to the enclosure `enc`, sorted by vertex.
    pub fn sp_set(&self, enc: &Enclosure) -> Result<Vec<Spanner>> {
        let g = self.graph();
        let large_c: Vec<usize> = self.cycle.iter().copied().filter(|v| enc.large.binary_search(v).is_ok()).collect();
        // Order the large-side part of C as a path x_1 … x_n.
        let order = self.path_order(&large_c);
        let mut out = Vec::new();
        for y in self.shell(1) {
            let cn: Vec<usize> = g.neighbors(y).iter().copied().filter(|&x| self.on_c[x]).collect();
            if cn.len() < 2 || !cn.iter().any(|x| large_c.contains(x)) {
                continue;
            }
            let positions: Vec<usize> = cn.iter().filter_map(|x| order.iter().position(|o| o == x)).collect();
            let (lo, hi) = match (positions.iter().min(), positions.iter().max()) {
                (Some(&lo), Some(&hi)) if lo != hi => (lo, hi),
                _ => continue,
            };
            let chord = GeneralizedChord::path(vec![order[lo], y, order[hi]]);
            let region = if g.has_edge(order[lo], order[hi]) && hi - lo == 1 {
                vec![order[lo], y, order[hi]]
            } else {
                self.label(&chord)?.small.vertices
            };
            out.push(Spanner { y, chord, region });
        }
        Ok(out)
    }

    /// Orders a set of cycle vertices that forms a subpath of `C` along `C`.
    fn path_order(&self, set: &[usize]) -> Vec<usize> {
        let k = self.cycle.len();
        let inside: Vec<bool> = self.cycle.iter().map(|v| set.contains(v)).collect();
        if inside.iter().all(|&b| b) {
            return self.cycle.clone();
        }
        let start = (0..k).find(|&i| inside[i] && !inside[(i + k - 1) % k]).unwrap_or(0);
        (0..k).map(|j| (start + j) % k).take_while(|&i| inside[i]).map(|i| self.cycle[i]).collect()
    }

    /// Whether every vertex of `s` is reachable from `C` through vertices of
    /// `s` and faces all of whose vertices lie in `s ∪ V(C)` — the
    /// combinatorial surrogate for a face-respecting arc.
    pub fn topologically_reachable(&self, s: &[usize]) -> bool {
        let n = self.emb.n();
        let mut in_s = vec![false; n];
        for &v in s.iter().chain(self.cycle.iter()) {
            in_s[v] = true;
        }
        let c_face = self.emb.find_face(&self.cycle).map(|(f, _)| f);
        let mut reached = vec![false; n];
        let mut stack: Vec<usize> = self.cycle.clone();
        for &v in &self.cycle {
            reached[v] = true;
        }
        let faces_at: Vec<Vec<usize>> = {
            let mut fa = vec![Vec::new(); n];
            for f in 0..self.emb.num_faces() {
                if Some(f) == c_face {
                    continue;
                }
                let walk = self.emb.face_walk(f);
                if walk.iter().all(|&v| in_s[v]) {
                    for &v in &walk {
                        fa[v].push(f);
                    }
                }
            }
            fa
        };
        while let Some(v) = stack.pop() {
            let mut next: Vec<usize> = self.graph().neighbors(v).iter().copied().filter(|&u| in_s[u]).collect();
            for &f in &faces_at[v] {
                next.extend(self.emb.face_walk(f));
            }
            for u in next {
                if !reached[u] {
                    reached[u] = true;
                    stack.push(u);
                }
            }
        }
        s.iter().all(|&v| reached[v])
    }

    /// Searches a `(Q, uw)`-pair for a maximal enclosure `enc`: a complete
    /// reduction `(S, φ)` with `V(C) ⊆ S ⊆ B_3(C) ∪ Sh⁴(C)`, `u ∈ dom φ`,
    /// the shell conditions on `D_2` and `D_3`, the domain condition on the
    /// large side of `C`, and reachability from `C`.
    ///
    /// The set `S` is fixed up front — `C`, `G^small_Q` (minus shell
    /// vertices that would break the `D_2`/`D_3` conditions), `Sh⁴(C)`,
    /// the `D_1` vertices with three or more neighbors on the large side of
    /// `C`, and `u` — and the search chooses the coloring.
    pub fn find_pair(&self, enc: &Enclosure, u: usize, oracle: &Oracle, budget: u64) -> Result<PairOutcome> {
        if let Some(r) = self.enclosure_hypotheses(enc, u)? {
            return Err(Error::Hypothesis(r));
        }
        if self.cycle.iter().any(|&v| self.lists.get(v).len() < 3) {
            return Err(Error::Hypothesis("a vertex of C has a list of size < 3".into()));
        }
        let g = self.graph();
        let n = g.n();
        let dist = self.distances();
        let sh4 = self.shadow(4)?;
        let sh2 = self.shadow(2)?;
        let in_sh4 = |v: usize| sh4.binary_search(&v).is_ok();
        let large_c: Vec<usize> = self.cycle.iter().copied().filter(|v| enc.large.binary_search(v).is_ok()).collect();
        let mut roles = vec![Role::Outside; n];
        for &v in &self.cycle {
            roles[v] = Role::Optional;
        }
        for &v in &large_c {
            roles[v] = if sh2.binary_search(&v).is_ok() { Role::Uncolored } else { Role::Colored };
        }
        for &v in &enc.small {
            if self.on_c[v] {
                continue;
            }
            let shell_ok = match dist[v] {
                1 => true,
                2 => v == enc.w || in_sh4(v),
                _ => in_sh4(v),
            };
            if shell_ok {
                roles[v] = Role::Optional;
            }
        }
        for &v in &sh4 {
            if dist[v] <= 3 && roles[v] == Role::Outside {
                roles[v] = Role::Optional;
            }
        }
        for y in self.shell(1) {
            let on_large = g.neighbors(y).iter().filter(|x| large_c.contains(x)).count();
            if on_large >= 3 && roles[y] == Role::Outside && !in_sh4(y) {
                roles[y] = Role::Optional;
            }
        }
        roles[enc.w] = Role::Optional;
        roles[u] = Role::Colored;
        let s: Vec<usize> = (0..n).filter(|&v| roles[v] != Role::Outside).collect();
        // Shape checks that do not depend on the coloring.
        let shell_of = |j: usize| -> Vec<usize> {
            s.iter().copied().filter(|&v| dist[v] == j && !in_sh4(v)).collect()
        };
        if shell_of(3) != vec![u] || shell_of(2) != vec![enc.w] {
            return Ok(PairOutcome::Infeasible("shell conditions on D_2/D_3 fail for the fixed set".into()));
        }
        if !self.topologically_reachable(&s) {
            return Ok(PairOutcome::Infeasible("set is not reachable from C".into()));
        }
        if let Some(v) = g.boundary(&s).into_iter().find(|&v| self.lists.get(v).len() < 5) {
            return Ok(PairOutcome::Infeasible(format!("boundary vertex {v} has a list of size < 5")));
        }
        // Decision order: around C, each extra D_1 vertex right after its
        // last cycle neighbor, then the rest by distance.
        let mut order = Vec::new();
        let mut placed = vec![false; n];
        let start = self.cycle.iter().position(|v| large_c.contains(v)).unwrap_or(0);
        let k = self.cycle.len();
        for j in 0..k {
            let c = self.cycle[(start + j) % k];
            if matches!(roles[c], Role::Colored | Role::Optional) && !placed[c] {
                order.push(c);
                placed[c] = true;
            }
            for &y in g.neighbors(c) {
                if placed[y] || dist[y] != 1 || !matches!(roles[y], Role::Colored | Role::Optional) {
                    continue;
                }
                if g.neighbors(y).iter().filter(|&&x| self.on_c[x]).all(|x| placed[*x]) {
                    order.push(y);
                    placed[y] = true;
                }
            }
        }
        let mut rest: Vec<usize> = (0..n)
            .filter(|&v| !placed[v] && matches!(roles[v], Role::Colored | Role::Optional))
            .collect();
        rest.sort_by_key(|&v| (dist[v], v));
        order.extend(rest);
        let outcome = ReductionSearch::new(g, self.lists, roles, PartialColoring::new(n))?
            .oracle(*oracle)
            .budget(budget)
            .order(order)
            .uncolored_first(false)
            .find_first()?;
        Ok(match outcome {
            SearchOutcome::Found(c) => PairOutcome::Found { set: c.a, phi: c.phi },
            SearchOutcome::Exhausted => PairOutcome::Exhausted,
            SearchOutcome::BudgetExceeded { nodes } => PairOutcome::BudgetExceeded { nodes },
        })
    }

    /// Independent check of the pair clauses for `(s, φ)`; `None` when all
    /// hold (the reduction itself is checked by `check_reduction`).
    pub fn check_pair_shape(&self, enc: &Enclosure, u: usize, s: &[usize], phi: &PartialColoring) -> Result<Option<String>> {
        let dist = self.distances();
        let sh4 = self.shadow(4)?;
        let sh2 = self.shadow(2)?;
        let in_sh4 = |v: &usize| sh4.binary_search(v).is_ok();
        if s.iter().any(|v| dist[*v] > 3 && !in_sh4(v)) {
            return Ok(Some("S leaves B_3(C) ∪ Sh⁴(C)".into()));
        }
        if !phi.contains(u) {
            return Ok(Some("u is uncolored".into()));
        }
        if !self.topologically_reachable(s) {
            return Ok(Some("S is not reachable from C".into()));
        }
        let sh = |j: usize| -> Vec<usize> { s.iter().copied().filter(|v| dist[*v] == j && !in_sh4(v)).collect() };
        if sh(3) != vec![u] || sh(2) != vec![enc.w] {
            return Ok(Some("shell conditions fail".into()));
        }
        if self.cycle.iter().any(|v| !s.contains(v)) {
            return Ok(Some("V(C) ⊄ S".into()));
        }
        for &v in &self.cycle {
            if enc.large.binary_search(&v).is_err() {
                continue;
            }
            let want = sh2.binary_search(&v).is_err();
            if phi.contains(v) != want {
                return Ok(Some(format!("domain condition fails at {v}")));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{disc_collar, hex_disc, SplitMix64};
    use crate::listcolor::check_reduction;

    fn uniform_disc(radius: usize) -> (RotationEmbedding, Vec<usize>, ListAssignment) {
        let (emb, outer) = hex_disc(radius).unwrap();
        let mut lists = ListAssignment::uniform(emb.n(), ColorSet::range(0, 5));
        for &v in &outer {
            lists.set(v, ColorSet::range(0, 3));
        }
        (emb, outer, lists)
    }

    #[test]
    fn pure_disc_is_weakly_determined() {
        let (emb, outer, lists) = uniform_disc(3);
        let collar = Collar::new(&emb, &outer, &lists).unwrap();
        assert_eq!(collar.uniquely_k_determined(2).unwrap(), Some(true));
        // Corners of the hexagon have degree three: their 2-chords shadow them.
        let sh2 = collar.shadow(2).unwrap();
        assert_eq!(sh2.len(), 6);
        assert!(sh2.iter().all(|&v| emb.graph().degree(v) == 3));
    }

    #[test]
    fn small_list_marks_the_large_side() {
        let dc = disc_collar(3, 6, 6).unwrap();
        let collar = Collar::new(&dc.embedding, &dc.cycle, &dc.lists).unwrap();
        let det = collar.determine(4).unwrap();
        assert!(!det.weak);
        for lc in &det.chords {
            assert!(dc.hole.iter().all(|h| lc.large.contains(*h) && !lc.small.contains(*h)));
        }
        // Shadows grow with k.
        let s2 = collar.shadow(2).unwrap();
        let s4 = collar.shadow(4).unwrap();
        assert!(s2.iter().all(|v| s4.contains(v)));
    }

    #[test]
    fn interior_short_list_on_both_sides_is_not_determined() {
        let (emb, outer, mut lists) = uniform_disc(3);
        let g = emb.graph();
        // Give a short list to a vertex next to C: every chord through it fails.
        let v = g.shell(&outer, 1)[0];
        lists.set(v, ColorSet::range(0, 2));
        let collar = Collar::new(&emb, &outer, &lists).unwrap();
        assert_eq!(collar.uniquely_k_determined(2).unwrap(), None);
    }

    #[test]
    fn consistency_and_peaks_on_a_side() {
        let dc = disc_collar(5, 6, 6).unwrap();
        let collar = Collar::new(&dc.embedding, &dc.cycle, &dc.lists).unwrap();
        let path: Vec<usize> = dc.cycle[1..6].to_vec();
        assert!(collar.is_k_consistent(&path, 3).unwrap());
        let peaks = collar.peaks(&path).unwrap();
        assert!(!peaks.is_empty());
        assert!(peaks.iter().any(|p| p.internal));
        let sh2 = collar.sh_k_of_path(&path, 2).unwrap();
        assert!(peaks.iter().all(|p| !sh2.contains(&p.v)));
    }

    #[test]
    fn links_are_inert_and_hit_endpoint_sets() {
        let dc = disc_collar(11, 6, 6).unwrap();
        let collar = Collar::new(&dc.embedding, &dc.cycle, &dc.lists).unwrap();
        let oracle = Oracle::default();
        let path: Vec<usize> = dc.cycle[0..7].to_vec();
        let (p, p2) = (path[0], path[6]);
        let a = dc.lists.get(p);
        let a2: ColorSet = dc.lists.get(p2).iter().take(1).collect();
        let phi = collar.find_link(&path, a, a2, &oracle).unwrap().expect("3 + 1 ≥ 4 colors suffice");
        assert!(a2.contains(phi.get(p2).unwrap()));
        let sh2 = collar.sh_k_of_path(&path, 2).unwrap();
        assert!(is_inert(dc.embedding.graph(), &dc.lists, &sh2, &phi, &oracle).unwrap().is_inert());
        assert!(!collar.link_set(&path, 5, &oracle).unwrap().is_empty());
    }

    #[test]
    fn one_more_vertex_reductions_are_certified() {
        let dc = disc_collar(2, 6, 6).unwrap();
        let collar = Collar::new(&dc.embedding, &dc.cycle, &dc.lists).unwrap();
        let oracle = Oracle::default();
        let path: Vec<usize> = dc.cycle[2..9].to_vec();
        assert_eq!(collar.link_plus_one_hypotheses(&path).unwrap(), None);
        let mut rng = SplitMix64::new(4);
        let (p, p2) = (path[0], *path.last().unwrap());
        let l0: Vec<_> = dc.lists.get(p).iter().collect();
        let l1: Vec<_> = dc.lists.get(p2).iter().collect();
        let phi = PartialColoring::from_pairs(dc.embedding.n(), &[(p, l0[rng.below(3)]), (p2, l1[rng.below(3)])]);
        let attempts = collar.link_plus_one(&path, &phi, &oracle, 200_000).unwrap();
        assert!(!attempts.is_empty());
        let failures = attempts.iter().filter(|a| a.certificate.is_none()).count();
        assert!(failures <= 3);
        for a in attempts.iter().filter_map(|a| a.certificate.as_ref()) {
            assert!(path.iter().all(|v| a.a.contains(v)));
            assert!(check_reduction(dc.embedding.graph(), &dc.lists, &a.a, &a.phi, false, &oracle).unwrap().is_ok());
        }
    }

    #[test]
    fn enclosures_targets_and_pairs() {
        let dc = disc_collar(7, 7, 6).unwrap();
        let collar = Collar::new(&dc.embedding, &dc.cycle, &dc.lists).unwrap();
        let g = dc.embedding.graph();
        let oracle = Oracle::default();
        let dist = collar.distances();
        let sh4 = collar.shadow(4).unwrap();
        // A distance-two vertex in the middle of a side, with a distance-three neighbor.
        let w = (0..g.n())
            .find(|&w| dist[w] == 2 && !sh4.contains(&w) && !collar.is_degenerate(w))
            .unwrap();
        let u = *g.neighbors(w).iter().find(|&&u| dist[u] == 3 && !sh4.contains(&u)).unwrap();
        let encs = collar.enumerate_enclosures(w).unwrap();
        assert!(!encs.is_empty());
        let enc = encs.iter().find(|e| e.maximal).unwrap();
        assert!(enc.small.contains(&w));
        let target = collar.find_target(enc, u, &oracle, 500_000).unwrap();
        let (set, psi) = target.found().expect("target exists");
        assert!(psi.contains(u) && psi.contains(w));
        assert!(check_reduction(g, &dc.lists, set, psi, false, &oracle).unwrap().is_ok());
        let pair = collar.find_pair(enc, u, &oracle, 2_000_000).unwrap();
        let (s, phi) = pair.found().expect("pair exists");
        assert!(check_reduction(g, &dc.lists, s, phi, true, &oracle).unwrap().is_ok());
        assert_eq!(collar.check_pair_shape(enc, u, s, phi).unwrap(), None);
        assert!(!collar.sp_set(enc).unwrap().is_empty());
    }
}
