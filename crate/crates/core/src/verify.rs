//! Property harness: runs one statement over a deterministic stream of
//! generated instances and tallies the outcomes.
//!
//! Instances are produced in fixed-size batches; each batch is checked in
//! parallel (feature `parallel`) or sequentially, and results are consumed
//! in stream order, so reports are identical either way. The budget counts
//! instances whose hypotheses hold; vacuous draws are tallied separately
//! and capped at [`ATTEMPT_FACTOR`] times the budget.

use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::collar::Collar;
use crate::colorset::{Color, ColorSet};
use crate::error::{Error, Result};
use crate::filament::{
    check_filament_output, color_path, filament_reduce, red_extend, scan_length_four, scan_length_two, strip_filament,
};
use crate::generators::{disc_collar, near_triangulations, random_plane_graph, NearTriangulation, SplitMix64};
use crate::graph::Graph;
use crate::instance::Instance;
use crate::listcolor::{check_reduction, ListAssignment, Oracle, PartialColoring};
use crate::rainbow::{self, cycle_subpath, random_rainbow_lists, Check, ListShape, Rainbow};

/// Default number of non-vacuous instances per run.
pub const DEFAULT_BUDGET: usize = 200;
/// Vacuous draws allowed per budgeted instance before a run gives up.
pub const ATTEMPT_FACTOR: usize = 40;
/// Largest near-triangulation used for rainbow statements.
pub const RAINBOW_MAX_VERTICES: usize = 9;
const BATCH: usize = 64;

/// The statements the harness can exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Statement {
    /// Non-extending colorings of `V(P)` leave a chord or a 2-list behind.
    PartialPathExtension,
    /// A universal color at `p_3`, or a broken wheel.
    UniversalDichotomy,
    /// `End` of a 2-path is nonempty, and a singleton only with an even fan path.
    TwoPathEnds,
    /// `Crown` of a 4-path is nonempty.
    CrownFour,
    /// Crowns through each middle vertex of a chorded 5-path.
    CrownFive,
    /// Crowns with prescribed end colors on a 5-path, or an obstruction.
    CrownFiveEnds,
    /// Link elements hitting prescribed endpoint sets.
    LinkEnds,
    /// One-more-vertex reductions at all but three internal peaks.
    LinkPlusOne,
    /// Length-four windows of a bad filament contain a gap.
    GapInterior,
    /// Length-two windows of a bad filament have a gap endpoint.
    GapEndpoint,
    /// Filaments reduce.
    FilamentReduce,
    /// The forward sweep extends terminal reductions.
    RedExtend,
}

/// Command-line names, in the order reports list them.
pub const NAMES: [(&str, Statement); 12] = [
    ("lemma4.4", Statement::PartialPathExtension),
    ("obs5.5", Statement::UniversalDichotomy),
    ("thm5.6", Statement::TwoPathEnds),
    ("thm5.7", Statement::CrownFour),
    ("thm5.8", Statement::CrownFive),
    ("thm5.9", Statement::CrownFiveEnds),
    ("thm6.2", Statement::LinkEnds),
    ("thm6.4", Statement::LinkPlusOne),
    ("lemma8.1", Statement::GapInterior),
    ("lemma9.1", Statement::GapEndpoint),
    ("thm9.2", Statement::FilamentReduce),
    ("lemma9.7", Statement::RedExtend),
];

impl Statement {
    pub fn name(self) -> &'static str {
        NAMES.iter().find(|(_, s)| *s == self).map(|(n, _)| *n).unwrap()
    }
}

impl FromStr for Statement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NAMES.iter().find(|(n, _)| *n == s).map(|(_, st)| *st).ok_or_else(|| {
            let known: Vec<&str> = NAMES.iter().map(|(n, _)| *n).collect();
            Error::InvalidArgument(format!("unknown statement {s:?}; known: {}", known.join(", ")))
        })
    }
}

/// Run parameters.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub budget: usize,
    pub max_oracle_vertices: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { budget: DEFAULT_BUDGET, max_oracle_vertices: crate::listcolor::oracle::DEFAULT_MAX_FREE, seed: 0 }
    }
}

/// A refuted instance with a reproducible dump.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub detail: String,
    /// The instance in the text format accepted by `Instance::parse`.
    pub dump: String,
}

/// Tally of one run.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub statement: &'static str,
    pub budget: usize,
    /// Instances whose hypotheses held.
    pub checked: usize,
    pub held: usize,
    /// Draws rejected by the hypotheses.
    pub vacuous: usize,
    /// Instances the checker could not decide (size guard or search budget).
    pub undecided: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Statement-specific counters, sorted by key.
    pub notes: Vec<(String, usize)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.undecided == 0
    }
}

/// Outcome of one draw.
enum Draw {
    Vacuous,
    Undecided(String),
    Held(Vec<&'static str>),
    Refuted(Counterexample),
}

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
/// The output order matches the input order.
pub fn fan_out<T, R>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R>
where
    T: Sync,
    R: Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Runs `statement` until `budget` non-vacuous instances were checked or
/// the attempt cap is hit.
pub fn run(statement: Statement, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let oracle = Oracle::new(cfg.max_oracle_vertices);
    let mut report = VerifyReport {
        statement: statement.name(),
        budget: cfg.budget,
        checked: 0,
        held: 0,
        vacuous: 0,
        undecided: 0,
        counterexamples: Vec::new(),
        notes: Vec::new(),
    };
    let mut notes = std::collections::BTreeMap::<&'static str, usize>::new();
    let cap = cfg.budget.saturating_mul(ATTEMPT_FACTOR).max(BATCH);
    let mut next = 0usize;
    while report.checked < cfg.budget && next < cap {
        let idx: Vec<usize> = (next..(next + BATCH).min(cap)).collect();
        next += idx.len();
        let draws = fan_out(&idx, |&i| draw(statement, cfg.seed, i, &oracle));
        for d in draws {
            if report.checked >= cfg.budget {
                break;
            }
            match d? {
                Draw::Vacuous => report.vacuous += 1,
                Draw::Undecided(why) => {
                    report.checked += 1;
                    report.undecided += 1;
                    *notes.entry(undecided_key(&why)).or_default() += 1;
                }
                Draw::Held(tags) => {
                    report.checked += 1;
                    report.held += 1;
                    for t in tags {
                        *notes.entry(t).or_default() += 1;
                    }
                }
                Draw::Refuted(mut cx) => {
                    report.checked += 1;
                    cx.dump = dump_header(statement, cfg, &cx) + &cx.dump;
                    report.counterexamples.push(cx);
                }
            }
        }
    }
    report.notes = notes.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    Ok(report)
}

const DUMP_MAGIC: &str = "# slw counterexample";

fn dump_header(statement: Statement, cfg: &VerifyConfig, cx: &Counterexample) -> String {
    format!(
        "{DUMP_MAGIC}\n# statement: {}\n# seed: {}\n# index: {}\n# max-oracle-vertices: {}\n# detail: {}\n",
        statement.name(),
        cfg.seed,
        cx.index,
        cfg.max_oracle_vertices,
        cx.detail.replace('\n', " ")
    )
}

/// Result of re-checking a counterexample dump.
#[derive(Clone, Debug, Serialize)]
pub struct Replay {
    pub statement: &'static str,
    pub seed: u64,
    pub index: usize,
    /// The regenerated draw is refuted again.
    pub refuted: bool,
    /// The regenerated instance is byte-identical to the dumped one.
    pub instance_matches: bool,
    pub detail: String,
}

impl Replay {
    pub fn confirmed(&self) -> bool {
        self.refuted && self.instance_matches
    }
}

/// Re-loads a dump written by [`run`] and re-checks it: the instance must
/// parse, the recorded draw must regenerate the same instance, and the
/// statement's check must fail on it again.
pub fn replay(dump: &str) -> Result<Replay> {
    let mut lines = dump.lines();
    if lines.next().map(str::trim) != Some(DUMP_MAGIC) {
        return Err(Error::Parse { line: 1, msg: format!("missing `{DUMP_MAGIC}` header") });
    }
    let mut fields = std::collections::BTreeMap::new();
    let mut header_len = 1;
    for line in lines {
        let Some((k, v)) = line.strip_prefix("# ").and_then(|l| l.split_once(": ")) else { break };
        if !["statement", "seed", "index", "max-oracle-vertices", "detail"].contains(&k) {
            break;
        }
        fields.insert(k, v.trim().to_string());
        header_len += 1;
    }
    let field = |k: &str| {
        fields.get(k).ok_or_else(|| Error::Parse { line: header_len, msg: format!("dump header lacks `{k}`") })
    };
    let bad = |k: &str| Error::Parse { line: header_len, msg: format!("bad `{k}` in dump header") };
    let statement: Statement = field("statement")?.parse()?;
    let seed: u64 = field("seed")?.parse().map_err(|_| bad("seed"))?;
    let index: usize = field("index")?.parse().map_err(|_| bad("index"))?;
    let max_free: usize = field("max-oracle-vertices")?.parse().map_err(|_| bad("max-oracle-vertices"))?;
    let body: String = dump.lines().skip(header_len).map(|l| format!("{l}\n")).collect();
    // The dump must stand on its own as an instance file.
    Instance::parse(&body)?;
    let oracle = Oracle::new(max_free);
    let (refuted, instance_matches, detail) = match draw(statement, seed, index, &oracle)? {
        Draw::Refuted(cx) => (true, cx.dump == body, cx.detail),
        Draw::Held(_) => (false, false, "the regenerated instance satisfies the statement".into()),
        Draw::Vacuous => (false, false, "the regenerated draw is vacuous".into()),
        Draw::Undecided(why) => (false, false, why),
    };
    Ok(Replay { statement: statement.name(), seed, index, refuted, instance_matches, detail })
}

fn undecided_key(why: &str) -> &'static str {
    if why.contains("budget") {
        "undecided: search budget"
    } else {
        "undecided: size guard"
    }
}

/// The per-draw RNG: independent of batch layout and thread count.
fn draw_rng(seed: u64, statement: Statement, i: usize) -> SplitMix64 {
    let mut mix = SplitMix64::new(seed ^ ((statement as u64) << 48) ^ (i as u64).wrapping_mul(0x9E37_79B9));
    SplitMix64::new(mix.next_u64())
}

fn draw(statement: Statement, seed: u64, i: usize, oracle: &Oracle) -> Result<Draw> {
    let mut rng = draw_rng(seed, statement, i);
    let out = match statement {
        Statement::PartialPathExtension
        | Statement::UniversalDichotomy
        | Statement::TwoPathEnds
        | Statement::CrownFour
        | Statement::CrownFive
        | Statement::CrownFiveEnds => rainbow_draw(statement, i, &mut rng, oracle),
        Statement::LinkEnds => link_ends_draw(i, &mut rng, oracle),
        Statement::LinkPlusOne => link_plus_one_draw(i, &mut rng, oracle),
        Statement::GapInterior | Statement::GapEndpoint | Statement::FilamentReduce | Statement::RedExtend => {
            filament_draw(statement, i, &mut rng, oracle)
        }
    };
    // Oversized instances are reported, not fatal.
    match out {
        Err(Error::SizeGuard { .. }) => Ok(Draw::Undecided("size guard".into())),
        other => other,
    }
}

/// Near-triangulations used for rainbow statements, built once.
pub fn rainbow_hosts() -> &'static [NearTriangulation] {
    static HOSTS: OnceLock<Vec<NearTriangulation>> = OnceLock::new();
    HOSTS.get_or_init(|| {
        near_triangulations(RAINBOW_MAX_VERTICES, &[3, 4, 5, 6, 7, 8, 9]).expect("enumeration of small near-triangulations")
    })
}

/// `(host, start, length)` triples whose graph-only hypotheses hold for
/// `statement`; list conditions are left to the draw.
fn eligible(statement: Statement) -> &'static [(usize, usize, usize)] {
    static POOLS: [OnceLock<Vec<(usize, usize, usize)>>; 6] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = statement as usize;
    POOLS[slot].get_or_init(|| {
        let mut out = Vec::new();
        for (h, nt) in rainbow_hosts().iter().enumerate() {
            let k = nt.outer.len();
            let g = nt.embedding.graph();
            let uniform = ListAssignment::uniform(g.n(), ColorSet::range(0, 5));
            let lens: Vec<usize> = match statement {
                Statement::PartialPathExtension => (1..=4).collect(),
                Statement::UniversalDichotomy | Statement::TwoPathEnds => vec![2],
                Statement::CrownFour => vec![4],
                _ => vec![5],
            };
            for len in lens.into_iter().filter(|&l| l < k) {
                for start in 0..k {
                    let path = cycle_subpath(&nt.outer, start, len);
                    let rb = Rainbow::new(&nt.embedding, &nt.outer, &path, &uniform).expect("uniform lists make a rainbow");
                    if structurally_eligible(statement, &rb) {
                        out.push((h, start, len));
                    }
                }
            }
        }
        out
    })
}

fn structurally_eligible(statement: Statement, rb: &Rainbow) -> bool {
    let g = rb.graph();
    let interior = rb.interior();
    match statement {
        Statement::UniversalDichotomy => {
            let p2 = rb.path[1];
            rb.cycle.len() > 4
                && rb.chords().iter().all(|&(a, b)| a == p2 || b == p2)
                && crate::topology::is_short_inseparable(rb.emb).unwrap_or(false)
        }
        Statement::CrownFour => {
            let (q, q2) = (rb.path[1], rb.path[3]);
            !g.neighbors(q).iter().any(|&x| rb.on_cycle(x) && !rb.path.contains(&x) && g.has_edge(x, q2))
        }
        Statement::CrownFive => {
            let chords = rb.chords();
            interior.iter().all(|&v| {
                chords.iter().any(|&(a, b)| (a == v && !interior.contains(&b)) || (b == v && !interior.contains(&a)))
            })
        }
        Statement::CrownFiveEnds => interior
            .iter()
            .all(|&v| g.neighbors(v).iter().any(|&u| rb.on_cycle(u) && !interior.contains(&u))),
        _ => true,
    }
}

fn rainbow_dump(rb: &Rainbow) -> String {
    let inst = Instance::new(rb.emb.clone(), rb.lists.clone()).with_outer(rb.cycle.clone());
    format!("# P = {:?}\n{}", rb.path, inst.to_text())
}

fn rainbow_draw(statement: Statement, i: usize, rng: &mut SplitMix64, oracle: &Oracle) -> Result<Draw> {
    let hosts = rainbow_hosts();
    let pool = eligible(statement);
    if pool.is_empty() {
        return Ok(Draw::Vacuous);
    }
    let (h, start, len) = pool[rng.below(pool.len())];
    let nt = &hosts[h];
    let shape = match statement {
        Statement::PartialPathExtension => ListShape { palette: 5, ends: (1, 3), interior: (1, 5), rest: 3 },
        Statement::UniversalDichotomy => ListShape { palette: 5, ends: (2, 3), interior: (1, 5), rest: 3 },
        Statement::TwoPathEnds => ListShape { palette: 5, ends: (1, 3), interior: (1, 5), rest: 3 },
        Statement::CrownFour | Statement::CrownFive => ListShape { palette: 6, ends: (1, 3), interior: (5, 5), rest: 3 },
        _ => ListShape { palette: 6, ends: (3, 3), interior: (5, 5), rest: 3 },
    };
    let path = cycle_subpath(&nt.outer, start, len);
    let mut lists = random_rainbow_lists(rng, nt.embedding.n(), &nt.outer, &path, shape);
    if statement == Statement::UniversalDichotomy && rng.chance(1, 2) {
        // Shared rim lists are where universal colors can fail.
        let rim = ColorSet::range(0, 3);
        for &v in nt.outer.iter().filter(|v| !path.contains(v)) {
            lists.set(v, rim);
        }
        let size = rng.range(2, 3);
        lists.set(path[2], rng.subset(rim, size));
    }
    let rb = Rainbow::new(&nt.embedding, &nt.outer, &path, &lists)?;
    let check = match statement {
        Statement::PartialPathExtension => return partial_path_draw(&rb, i, rng, oracle),
        Statement::UniversalDichotomy => rainbow::check_universal_dichotomy(&rb, oracle)?,
        Statement::TwoPathEnds => rainbow::check_two_path_ends(&rb, oracle)?,
        Statement::CrownFour => rainbow::check_crown_four(&rb, oracle)?,
        Statement::CrownFive => rainbow::check_crown_five(&rb, oracle)?,
        _ => rainbow::check_crown_five_ends(&rb, oracle)?,
    };
    #[cfg(test)]
    let check = tests::maybe_invert(check);
    Ok(match check {
        Check::Vacuous(_) => Draw::Vacuous,
        Check::Holds(d) => Draw::Held(vec![held_tag(statement, &d)]),
        Check::Violated(detail) => Draw::Refuted(Counterexample { index: i, detail, dump: rainbow_dump(&rb) }),
    })
}

fn held_tag(statement: Statement, detail: &str) -> &'static str {
    match statement {
        Statement::UniversalDichotomy if detail.starts_with("broken") => "broken wheel",
        Statement::UniversalDichotomy => "universal color",
        Statement::TwoPathEnds if detail.contains("fan") => "|End| = 1 with even fan path",
        Statement::TwoPathEnds => "|End| >= 2",
        Statement::CrownFiveEnds if detail.starts_with("obstruction") => "obstruction",
        Statement::CrownFiveEnds => "crowns with end colors",
        _ => "held",
    }
}

/// Checks the partial-path lemma for every proper partial coloring of
/// `V(P)` containing both ends (at most 128, in a shuffled order).
fn partial_path_draw(rb: &Rainbow, i: usize, rng: &mut SplitMix64, oracle: &Oracle) -> Result<Draw> {
    let g = rb.graph();
    let mut all = Vec::new();
    fn rec(g: &Graph, lists: &ListAssignment, path: &[usize], j: usize, phi: &mut PartialColoring, out: &mut Vec<PartialColoring>) {
        if out.len() >= 4096 {
            return;
        }
        if j == path.len() {
            out.push(phi.clone());
            return;
        }
        let v = path[j];
        if j != 0 && j != path.len() - 1 {
            rec(g, lists, path, j + 1, phi, out);
        }
        for c in lists.residual(g, phi, v).iter() {
            phi.set(v, c);
            rec(g, lists, path, j + 1, phi, out);
            phi.unset(v);
        }
    }
    rec(g, rb.lists, &rb.path, 0, &mut PartialColoring::new(g.n()), &mut all);
    rng.shuffle(&mut all);
    all.truncate(128);
    if all.is_empty() {
        return Ok(Draw::Vacuous);
    }
    let mut extending = 0;
    for phi in &all {
        match rainbow::check_partial_path_extension(rb, phi, oracle)? {
            Check::Violated(detail) => {
                return Ok(Draw::Refuted(Counterexample { index: i, detail, dump: rainbow_dump(rb) }));
            }
            Check::Holds(d) if d == "φ extends" => extending += 1,
            _ => {}
        }
    }
    Ok(Draw::Held(vec![if extending == all.len() { "all colorings extend" } else { "non-extending colorings witnessed" }]))
}

/// Disc collars used by the link statements: radius 6, seeds `0..8`.
fn collar_hosts() -> &'static [crate::generators::DiscCollar] {
    static HOSTS: OnceLock<Vec<crate::generators::DiscCollar>> = OnceLock::new();
    HOSTS.get_or_init(|| (0..8).map(|s| disc_collar(s, 6, 6).expect("disc collar")).collect())
}

fn collar_dump(dc: &crate::generators::DiscCollar, path: &[usize], extra: &str) -> String {
    let inst = Instance::new(dc.embedding.clone(), dc.lists.clone()).with_outer(dc.cycle.clone());
    format!("# P = {path:?}\n# {extra}\n{}", inst.to_text())
}

fn random_subset_of(rng: &mut SplitMix64, set: ColorSet, lo: usize) -> ColorSet {
    let size = rng.range(lo.min(set.len()), set.len());
    rng.subset(set, size)
}

fn link_ends_draw(i: usize, rng: &mut SplitMix64, oracle: &Oracle) -> Result<Draw> {
    let hosts = collar_hosts();
    let dc = &hosts[rng.below(hosts.len())];
    let collar = Collar::new(&dc.embedding, &dc.cycle, &dc.lists)?;
    if collar.uniquely_k_determined(2)?.is_none() {
        return Ok(Draw::Vacuous);
    }
    let k = dc.cycle.len();
    // Length zero is the single-vertex clause: A = A′.
    let len = rng.range(0, 9);
    let path = cycle_subpath(&dc.cycle, rng.below(k), len);
    if !collar.is_k_consistent(&path, 2)? {
        return Ok(Draw::Vacuous);
    }
    let (p, p2) = (path[0], *path.last().unwrap());
    let a = random_subset_of(rng, dc.lists.get(p), 1);
    let mut a2 = random_subset_of(rng, dc.lists.get(p2), 1);
    if len == 0 {
        a2 = a;
    } else if a.len() + a2.len() < 4 {
        a2 = dc.lists.get(p2);
        if a.len() + a2.len() < 4 {
            return Ok(Draw::Vacuous);
        }
    }
    let chord = dc.embedding.graph().has_edge(p, p2) && !collar.is_cycle_edge(p, p2);
    if chord && !a.intersection(a2).is_empty() {
        return Ok(Draw::Vacuous);
    }
    match collar.find_link(&path, a, a2, oracle)? {
        Some(phi) => {
            let ok = a.contains(phi.get(p).unwrap()) && a2.contains(phi.get(p2).unwrap());
            let sh2 = collar.sh_k_of_path(&path, 2)?;
            let mut set = path.clone();
            set.extend(sh2.iter().copied().filter(|v| !path.contains(v)));
            let reduction = check_reduction(dc.embedding.graph(), &dc.lists, &set, &phi, false, oracle)?.is_ok();
            if ok && reduction {
                Ok(Draw::Held(vec![if len == 0 { "single vertex: color in A" } else { "link found and certified" }]))
            } else {
                Ok(Draw::Refuted(Counterexample {
                    index: i,
                    detail: format!("link {:?} misses A/A′ or is not a reduction", phi.pairs()),
                    dump: collar_dump(dc, &path, &format!("A = {a}, A′ = {a2}")),
                }))
            }
        }
        None => Ok(Draw::Refuted(Counterexample {
            index: i,
            detail: format!("no link with A = {a}, A′ = {a2}"),
            dump: collar_dump(dc, &path, &format!("A = {a}, A′ = {a2}")),
        })),
    }
}

fn link_plus_one_draw(i: usize, rng: &mut SplitMix64, oracle: &Oracle) -> Result<Draw> {
    let hosts = collar_hosts();
    let dc = &hosts[rng.below(hosts.len())];
    let collar = Collar::new(&dc.embedding, &dc.cycle, &dc.lists)?;
    let k = dc.cycle.len();
    let len = rng.range(3, 12);
    let path = cycle_subpath(&dc.cycle, rng.below(k), len);
    if collar.link_plus_one_hypotheses(&path)?.is_some() {
        return Ok(Draw::Vacuous);
    }
    let (p, p2) = (path[0], *path.last().unwrap());
    let c0 = rng.subset(dc.lists.get(p), 1).min().unwrap();
    let c1 = rng.subset(dc.lists.get(p2), 1).min().unwrap();
    let g = dc.embedding.graph();
    if g.has_edge(p, p2) && c0 == c1 {
        return Ok(Draw::Vacuous);
    }
    let phi = PartialColoring::from_pairs(g.n(), &[(p, c0), (p2, c1)]);
    let attempts = collar.link_plus_one(&path, &phi, oracle, 200_000)?;
    if attempts.iter().any(|a| a.budget_exceeded) {
        return Ok(Draw::Undecided("search budget".into()));
    }
    let failures: Vec<usize> = attempts.iter().filter(|a| a.certificate.is_none()).map(|a| a.peak).collect();
    for a in attempts.iter().filter_map(|a| a.certificate.as_ref()) {
        if check_reduction(g, &dc.lists, &a.a, &a.phi, false, oracle)?.is_err() || !path.iter().all(|v| a.a.contains(v)) {
            return Ok(Draw::Refuted(Counterexample {
                index: i,
                detail: "a peak certificate does not re-verify".into(),
                dump: collar_dump(dc, &path, &format!("φ = {:?}", phi.pairs())),
            }));
        }
    }
    if failures.len() > 3 {
        return Ok(Draw::Refuted(Counterexample {
            index: i,
            detail: format!("{} internal peaks fail: {failures:?}", failures.len()),
            dump: collar_dump(dc, &path, &format!("φ = {:?}", phi.pairs())),
        }));
    }
    Ok(Draw::Held(vec![match (attempts.len(), failures.len()) {
        (0, _) => "no internal peaks",
        (_, 0) => "every internal peak reduces",
        _ => "some internal peaks fail (at most three)",
    }]))
}

fn filament_draw(statement: Statement, i: usize, rng: &mut SplitMix64, oracle: &Oracle) -> Result<Draw> {
    let middle = rng.range(30, 36);
    let (emb, lists, fil) = strip_filament(rng.next_u64(), middle)?;
    let g = emb.graph();
    if fil.validate(&emb, &lists, oracle, false).is_err() {
        return Ok(Draw::Vacuous);
    }
    let dump = || format!("# filament path = {:?}, t = {}, t′ = {}\n{}", fil.path, fil.t, fil.t_prime, Instance::new(emb.clone(), lists.clone()).to_text());
    let refute = |detail: String| Ok(Draw::Refuted(Counterexample { index: i, detail, dump: dump() }));
    match statement {
        Statement::FilamentReduce => match filament_reduce(&emb, &lists, &fil, oracle, 200_000) {
            Ok(out) => match check_filament_output(g, &fil, &out) {
                Ok(()) => Ok(Draw::Held(vec![if out.method == "sweep" { "reduced by the sweep" } else { "reduced by search" }])),
                Err(e) => refute(e.to_string()),
            },
            Err(Error::SearchExhausted { detail, .. }) if detail.contains("budget") => Ok(Draw::Undecided(detail)),
            Err(e) => refute(e.to_string()),
        },
        Statement::GapInterior | Statement::GapEndpoint => {
            // A filament is bad when it admits no reduction of the promised shape.
            let bad = match filament_reduce(&emb, &lists, &fil, oracle, 200_000) {
                Ok(_) => false,
                Err(Error::SearchExhausted { detail, .. }) if detail.contains("budget") => {
                    return Ok(Draw::Undecided(detail));
                }
                Err(_) => true,
            };
            let scan = if statement == Statement::GapInterior {
                scan_length_four(g, &lists, &fil, bad)
            } else {
                scan_length_two(g, &lists, &fil, bad)
            };
            if let Some(&s) = scan.violations.first() {
                return refute(format!("window at path index {s} has no gap"));
            }
            Ok(Draw::Held(vec![match (bad, scan.direct == scan.windows) {
                (true, _) => "bad filament, gaps present",
                (false, true) => "not bad; every window has a gap",
                (false, false) => "not bad; some windows lack a gap",
            }]))
        }
        _ => {
            // A random element of Red(Q′) for a short prefix, extended by the sweep.
            let prefix = rng.range(1, 3);
            let q = &fil.path;
            let mut fixed = PartialColoring::new(g.n());
            let start: Vec<Color> = lists.get(q[0]).iter().collect();
            fixed.set(q[0], start[rng.below(start.len())]);
            let Some(tau) = color_path(g, &lists, &q[..prefix], &fixed)? else {
                return Ok(Draw::Vacuous);
            };
            if check_reduction(g, &lists, &q[..prefix], &tau, false, oracle)?.is_err() {
                return Ok(Draw::Vacuous);
            }
            match red_extend(g, &lists, q, prefix, &tau, oracle) {
                Ok(psi) if psi.extends(&tau) => Ok(Draw::Held(vec!["extended"])),
                Ok(_) => refute("sweep output does not extend the prefix coloring".into()),
                Err(e) => refute(e.to_string()),
            }
        }
    }
}

/// Runs every statement with `cfg` (used by the acceptance suite and the
/// CLI's `--name all`).
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<VerifyReport>> {
    NAMES.iter().map(|(_, s)| run(*s, cfg)).collect()
}

/// Tally of a randomized algebra check.
#[derive(Clone, Debug, Default, Serialize)]
pub struct AlgebraReport {
    /// Cases whose hypotheses held.
    pub cases: usize,
    /// Draws made to find them.
    pub attempts: usize,
    pub failures: Vec<String>,
}

fn algebra_host(rng: &mut SplitMix64, max_n: usize) -> Result<(Graph, ListAssignment)> {
    let n = rng.range(6, max_n);
    let outer = rng.range(3, 5.min(n));
    let (emb, _) = random_plane_graph(n, outer, rng.next_u64(), 4, rng.below(3))?;
    let palette = ColorSet::range(0, 5);
    let lists: Vec<ColorSet> = (0..n).map(|_| {
        let size = rng.range(2, 5);
        rng.subset(palette, size)
    }).collect();
    Ok((emb.graph().clone(), ListAssignment::new(lists)))
}

/// A random proper partial coloring of a random subset of `pool`.
fn random_partial(rng: &mut SplitMix64, g: &Graph, lists: &ListAssignment, pool: &[usize], base: &PartialColoring) -> PartialColoring {
    let mut phi = base.clone();
    for &v in pool {
        if phi.contains(v) || !rng.chance(1, 2) {
            continue;
        }
        let avail = lists.residual(g, &phi, v);
        if let Some(c) = rng.subset(avail, 1).min() {
            phi.set(v, c);
        }
    }
    phi
}

fn random_set(rng: &mut SplitMix64, g: &Graph) -> Vec<usize> {
    let centre = rng.below(g.n());
    let mut s = vec![centre];
    for &u in g.neighbors(centre) {
        if rng.chance(1, 3) {
            s.push(u);
        }
    }
    s.sort_unstable();
    s
}

/// Combining inert sets: for random `(S, φ)`, `(S′, φ′)` with `φ ∪ φ′`
/// well defined, the uncolored parts at distance at least two and not
/// colored by the other coloring, and both sets inert, checks that
/// `S ∪ S′` is `(L, φ ∪ φ′)`-inert.
pub fn inert_union_cases(count: usize, seed: u64, oracle: &Oracle) -> Result<AlgebraReport> {
    algebra_run(count, |i| {
        let mut rng = SplitMix64::new(seed ^ 0x1_0E27 ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let (g, lists) = algebra_host(&mut rng, 11)?;
        let s1 = random_set(&mut rng, &g);
        let s2 = random_set(&mut rng, &g);
        let empty = PartialColoring::new(g.n());
        let phi1 = random_partial(&mut rng, &g, &lists, &g.ball(&s1, 1), &empty);
        let phi2 = random_partial(&mut rng, &g, &lists, &g.ball(&s2, 1), &empty);
        let Ok(union) = crate::listcolor::union_colorings(&g, &phi1, &phi2) else {
            return Ok(None);
        };
        let core = |s: &[usize], phi: &PartialColoring| -> Vec<usize> { s.iter().copied().filter(|&v| !phi.contains(v)).collect() };
        let (c1, c2) = (core(&s1, &phi1), core(&s2, &phi2));
        if !c1.is_empty() && !c2.is_empty() && g.set_distance(&c1, &c2) < 2 {
            return Ok(None);
        }
        // Neither coloring may color the other's uncolored part.
        if c1.iter().any(|&v| phi2.contains(v)) || c2.iter().any(|&v| phi1.contains(v)) {
            return Ok(None);
        }
        if !crate::listcolor::inert::is_inert(&g, &lists, &s1, &phi1, oracle)?.is_inert()
            || !crate::listcolor::inert::is_inert(&g, &lists, &s2, &phi2, oracle)?.is_inert()
        {
            return Ok(None);
        }
        let mut both = s1.clone();
        both.extend(s2.iter().copied().filter(|v| !s1.contains(v)));
        Ok(Some(match crate::listcolor::inert::is_inert(&g, &lists, &both, &union, oracle)? {
            v if v.is_inert() => None,
            v => Some(format!("draw {i}: S = {s1:?}, S′ = {s2:?}, union not inert: {v:?}")),
        }))
    })
}

/// Reduced instances: for a random proper `φ` and `S ⊆ dom φ`, the
/// reduced instance has exactly as many colorings as `φ` has extensions,
/// and lifted witnesses are proper extensions of `φ`.
pub fn reduce_lists_cases(count: usize, seed: u64, oracle: &Oracle) -> Result<AlgebraReport> {
    algebra_run(count, |i| {
        let mut rng = SplitMix64::new(seed ^ 0x2_4ED ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let (g, lists) = algebra_host(&mut rng, 12)?;
        let all: Vec<usize> = (0..g.n()).collect();
        let phi = random_partial(&mut rng, &g, &lists, &all, &PartialColoring::new(g.n()));
        let s: Vec<usize> = phi.domain().into_iter().filter(|_| rng.chance(1, 2)).collect();
        let red = crate::listcolor::reduce_lists(&g, &lists, &phi, &s);
        let before = oracle.count(&g, &lists, &phi)?;
        let after = oracle.count(&red.graph, &red.lists, &PartialColoring::new(red.graph.n()))?;
        if before != after {
            return Ok(Some(Some(format!("draw {i}: {before} extensions but {after} reduced colorings"))));
        }
        if let Some(w) = oracle.extend(&red.graph, &red.lists, &PartialColoring::new(red.graph.n()))? {
            let lifted = crate::listcolor::union_colorings(&g, &red.lift(&w), &phi);
            match lifted {
                Ok(full) if full.is_full_coloring(&g, &lists) => {}
                _ => return Ok(Some(Some(format!("draw {i}: lifted witness is not an extension")))),
            }
        }
        Ok(Some(None))
    })
}

/// Draws until `count` cases meet their hypotheses (`Some`), collecting
/// failures (`Some(Some(..))`). Attempts are capped at 200 per case.
fn algebra_run(
    count: usize,
    case: impl Fn(usize) -> Result<Option<Option<String>>> + Sync + Send,
) -> Result<AlgebraReport> {
    let mut report = AlgebraReport::default();
    let cap = count.saturating_mul(200).max(BATCH);
    while report.cases < count && report.attempts < cap {
        let idx: Vec<usize> = (report.attempts..(report.attempts + 4 * BATCH).min(cap)).collect();
        let outs = fan_out(&idx, |&i| case(i));
        for out in outs {
            report.attempts += 1;
            if report.cases >= count {
                break;
            }
            if let Some(failure) = out? {
                report.cases += 1;
                report.failures.extend(failure);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::Cell;

    thread_local! {
        /// Turns every held rainbow check on this thread into a violation,
        /// so that dumps of refuted draws can be produced and replayed.
        static INVERT: Cell<bool> = const { Cell::new(false) };
    }

    pub(super) fn maybe_invert(check: Check) -> Check {
        match check {
            Check::Holds(d) if INVERT.with(Cell::get) => Check::Violated(format!("inverted: {d}")),
            other => other,
        }
    }

    #[test]
    fn names_round_trip() {
        for (n, s) in NAMES {
            assert_eq!(n.parse::<Statement>().unwrap(), s);
            assert_eq!(s.name(), n);
        }
        assert!("thm1.1".parse::<Statement>().is_err());
    }

    #[test]
    fn fan_out_keeps_order() {
        let v: Vec<usize> = (0..1000).collect();
        assert_eq!(fan_out(&v, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn small_runs_pass_and_are_deterministic() {
        let cfg = VerifyConfig { budget: 12, ..Default::default() };
        for s in [Statement::TwoPathEnds, Statement::PartialPathExtension, Statement::RedExtend] {
            let a = run(s, &cfg).unwrap();
            let b = run(s, &cfg).unwrap();
            assert!(a.passed(), "{a:?}");
            assert_eq!(a.checked, 12);
            assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        }
    }

    #[test]
    fn replay_rejects_malformed_and_unrefuted_dumps() {
        assert!(replay("0: 1\n1: 0\n").is_err());
        let inst = crate::generators::torus_ladder(4).unwrap().to_text();
        let head = |name: &str| format!("{DUMP_MAGIC}\n# statement: {name}\n# seed: 0\n# index: 0\n# max-oracle-vertices: 64\n# detail: x\n");
        assert!(replay(&(head("thm1.1") + &inst)).is_err());
        assert!(replay(&(head("thm5.6") + "garbage\n")).is_err());
        let r = replay(&(head("thm5.6") + &inst)).unwrap();
        assert!(!r.confirmed());
        assert_eq!((r.statement, r.seed, r.index), ("thm5.6", 0, 0));
    }

    #[test]
    fn refuted_dumps_reload_and_refute_again() {
        INVERT.with(|f| f.set(true));
        let cfg = VerifyConfig::default();
        let oracle = Oracle::new(cfg.max_oracle_vertices);
        let cx = (0..)
            .find_map(|i| match draw(Statement::TwoPathEnds, cfg.seed, i, &oracle).unwrap() {
                Draw::Refuted(cx) => Some(cx),
                _ => None,
            })
            .unwrap();
        let dump = dump_header(Statement::TwoPathEnds, &cfg, &cx) + &cx.dump;
        let r = replay(&dump).unwrap();
        assert!(r.confirmed(), "{r:?}");
        assert_eq!(r.index, cx.index);
        // A tampered instance no longer matches the recorded draw.
        let tampered = dump.replacen("lists:\n0: ", "lists:\n0: 9 ", 1);
        assert_ne!(tampered, dump);
        assert!(!replay(&tampered).unwrap().instance_matches);
        INVERT.with(|f| f.set(false));
        assert!(!replay(&dump).unwrap().refuted);
    }
}
