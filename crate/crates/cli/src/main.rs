//! `slw`: command-line workbench over `slw-core`.
//!
//! Exit codes: 0 success or pass, 1 refutation or counterexample (a dump
//! file is written), 2 usage or parse error, 3 undecided (size guard or
//! search budget).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use slw_core::colorset::ColorSet;
use slw_core::collar::{connect_faces, connect_single_face, to_dot, ConnectorCertificate, DEFAULT_FACE_DISTANCE};
use slw_core::error::Error;
use slw_core::generators::{
    single_face_instance, stacked_triangulation, thomassen_case, torus_ladder, two_face_surface_instance,
};
use slw_core::instance::Instance;
use slw_core::listcolor::{check_reduction, ListAssignment, Oracle, PartialColoring};
use slw_core::planar::{check_thomassen_hypotheses, thomassen_extend};
use slw_core::topology::{edge_width_avoiding, face_width, is_short_inseparable};
use slw_core::verify::{self, Statement, VerifyConfig, VerifyReport, NAMES};

const DEFAULT_MAX_ORACLE_VERTICES: usize = 64;

#[derive(Parser)]
#[command(name = "slw", version, about = "Embedded graphs and list colorings: solve, analyze, generate, verify")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true, env = "SLW_JSON")]
    json: bool,
    /// Directory for counterexample and refutation dumps.
    #[arg(long, global = true, env = "SLW_DUMP_DIR", default_value = ".")]
    dump_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide L-colorability of an instance (extending its precoloring).
    Solve {
        #[arg(long, env = "SLW_INSTANCE")]
        instance: PathBuf,
        #[arg(long, value_enum, env = "SLW_ALGORITHM", default_value_t = Algorithm::Auto)]
        algorithm: Algorithm,
        /// Also count the extensions (oracle only).
        #[arg(long)]
        count: bool,
        #[arg(long, env = "SLW_MAX_ORACLE_VERTICES", default_value_t = DEFAULT_MAX_ORACLE_VERTICES)]
        max_oracle_vertices: usize,
    },
    /// Report sizes, genus, edge-width, face-width and short-inseparability.
    Analyze {
        #[arg(long, env = "SLW_INSTANCE")]
        instance: PathBuf,
    },
    /// Generate an instance file.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Ladder length (torus-ladder).
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Vertex count (stacked, thomassen: upper bound).
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, env = "SLW_SEED", default_value_t = 0)]
        seed: u64,
        /// Face distance (two-face, single-face).
        #[arg(long, default_value_t = DEFAULT_FACE_DISTANCE)]
        d: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a connector reduction around faces of an instance.
    Connect {
        #[arg(long, env = "SLW_INSTANCE")]
        instance: PathBuf,
        /// Face ids to connect; the first is the root.
        #[arg(long, value_delimiter = ',', required = true)]
        faces: Vec<usize>,
        /// Further faces of the family that are not connected.
        #[arg(long, value_delimiter = ',')]
        others: Vec<usize>,
        /// Returning path (exactly one face): vertex ids.
        #[arg(long, value_delimiter = ',')]
        path: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_FACE_DISTANCE)]
        d: usize,
        /// Write the DOT drawing here.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, env = "SLW_MAX_ORACLE_VERTICES", default_value_t = DEFAULT_MAX_ORACLE_VERTICES)]
        max_oracle_vertices: usize,
    },
    /// Run the property harness for a statement (or `all`).
    VerifyLemma {
        #[arg(long)]
        name: String,
        #[arg(long, env = "SLW_BUDGET", default_value_t = verify::DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, env = "SLW_MAX_ORACLE_VERTICES", default_value_t = DEFAULT_MAX_ORACLE_VERTICES)]
        max_oracle_vertices: usize,
        #[arg(long, env = "SLW_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Re-check an artifact: a counterexample dump, or a reduction certificate.
    Certify {
        /// Counterexample dump written by `verify-lemma`.
        #[arg(long, conflicts_with_all = ["instance", "certificate"], required_unless_present = "certificate")]
        dump: Option<PathBuf>,
        #[arg(long, requires = "certificate")]
        instance: Option<PathBuf>,
        /// JSON with fields `a` and `phi` (e.g. `connect --json` output).
        #[arg(long, requires = "instance")]
        certificate: Option<PathBuf>,
        /// Require every boundary vertex to keep a list of size five.
        #[arg(long)]
        complete: bool,
        #[arg(long, env = "SLW_MAX_ORACLE_VERTICES", default_value_t = DEFAULT_MAX_ORACLE_VERTICES)]
        max_oracle_vertices: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// The constructive planar recursion when its hypotheses hold, else the oracle.
    Auto,
    Oracle,
    Thomassen,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    TorusLadder,
    Stacked,
    Thomassen,
    TwoFace,
    SingleFace,
}

/// A finished command: exit code, human text, JSON value.
struct Outcome {
    code: u8,
    text: String,
    json: Value,
}

impl Outcome {
    fn new(code: u8, text: impl Into<String>, json: Value) -> Self {
        Outcome { code, text: text.into(), json }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { ref instance, algorithm, count, max_oracle_vertices } => {
            solve(instance, algorithm, count, max_oracle_vertices)
        }
        Command::Analyze { ref instance } => analyze(instance),
        Command::Gen { family, k, n, seed, d, ref output } => gen(family, k, n, seed, d, output.as_deref(), cli.json),
        Command::Connect { ref instance, ref faces, ref others, ref path, d, ref dot, max_oracle_vertices } => connect(
            &cli.dump_dir,
            instance,
            faces,
            others,
            path,
            d,
            dot.as_deref(),
            max_oracle_vertices,
        ),
        Command::VerifyLemma { ref name, budget, max_oracle_vertices, seed } => {
            verify_lemma(&cli.dump_dir, name, VerifyConfig { budget, max_oracle_vertices, seed })
        }
        Command::Certify { ref dump, ref instance, ref certificate, complete, max_oracle_vertices } => match dump {
            Some(d) => certify_dump(d),
            None => certify_certificate(
                instance.as_deref().expect("clap enforces --instance"),
                certificate.as_deref().expect("clap enforces --certificate"),
                complete,
                max_oracle_vertices,
            ),
        },
    };
    let failed = result.is_err();
    let out = result.unwrap_or_else(|e| {
        let code = error_code(&e);
        Outcome::new(code, format!("error: {e}"), json!({ "error": e.to_string(), "exit": code }))
    });
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    if cli.json {
        let _ = writeln!(io::stdout(), "{}", serde_json::to_string_pretty(&out.json).expect("JSON values serialize"));
    } else if failed {
        let _ = writeln!(io::stderr(), "{}", out.text);
    } else if !out.text.is_empty() {
        let _ = writeln!(io::stdout(), "{}", out.text);
    }
    ExitCode::from(out.code)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::TheoremViolation(_) => 1,
        Error::SizeGuard { .. } | Error::SearchExhausted { .. } => 3,
        _ => 2,
    }
}

fn load(path: &Path) -> Result<Instance, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let inst = Instance::parse(&text)?;
    inst.validate()?;
    Ok(inst)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_dump(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Error> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    write_file(&path, contents)?;
    Ok(path)
}

fn coloring_text(phi: &PartialColoring) -> String {
    phi.pairs().iter().map(|(v, c)| format!("{v}: {c}")).collect::<Vec<_>>().join("\n")
}

/// The outer edge `xy` to run the planar recursion from: the precolored
/// vertices must lie on it and the hypotheses must hold.
fn thomassen_edge(inst: &Instance) -> Option<(Vec<usize>, usize, usize)> {
    let outer = inst.outer.clone()?;
    let dom = inst.precolor.domain();
    let k = outer.len();
    (0..k).map(|i| (outer[i], outer[(i + 1) % k])).find_map(|(x, y)| {
        let fits = dom.iter().all(|&v| v == x || v == y);
        (fits && check_thomassen_hypotheses(&inst.embedding, &outer, x, y, &inst.lists).is_ok())
            .then(|| (outer.clone(), x, y))
    })
}

fn solve(path: &Path, algorithm: Algorithm, count: bool, max_free: usize) -> Result<Outcome, Error> {
    let inst = load(path)?;
    let g = inst.embedding.graph();
    let oracle = Oracle::new(max_free);
    let edge = match algorithm {
        Algorithm::Oracle => None,
        Algorithm::Auto => thomassen_edge(&inst),
        Algorithm::Thomassen => Some(thomassen_edge(&inst).ok_or_else(|| {
            Error::Hypothesis("no outer edge xy meets the planar extension hypotheses".into())
        })?),
    };
    let (used, coloring) = match edge {
        Some((outer, x, y)) => {
            ("thomassen", Some(thomassen_extend(&inst.embedding, &outer, x, y, &inst.lists, &inst.precolor)?))
        }
        None => ("oracle", oracle.extend(g, &inst.lists, &inst.precolor)?),
    };
    let total = if count { Some(oracle.count(g, &inst.lists, &inst.precolor)?) } else { None };
    let count_line = total.map(|t| format!("\nextensions: {t}")).unwrap_or_default();
    let count_json = total.map(|t| json!(t.to_string()));
    Ok(match coloring {
        Some(phi) => Outcome::new(
            0,
            format!("L-colorable ({used}){count_line}\n{}", coloring_text(&phi)),
            json!({ "colorable": true, "algorithm": used, "coloring": phi, "count": count_json }),
        ),
        None => Outcome::new(
            1,
            format!("not L-colorable ({used}){count_line}"),
            json!({ "colorable": false, "algorithm": used, "count": count_json }),
        ),
    })
}

fn analyze(path: &Path) -> Result<Outcome, Error> {
    let inst = load(path)?;
    let emb = &inst.embedding;
    let genus = emb.genus()?;
    let ew = edge_width_avoiding(emb, &inst.scaffold)?;
    let fw = face_width(emb)?;
    let si = is_short_inseparable(emb)?;
    let scaffold = if inst.scaffold.is_empty() {
        String::new()
    } else {
        format!(" (ignoring scaffold {:?})", inst.scaffold)
    };
    let text = format!(
        "|V| = {}\n|E| = {}\n|F| = {}\ngenus = {genus}\new = {ew}{scaffold}\nfw = {fw}\nshort-inseparable = {si}",
        emb.n(),
        emb.num_edges(),
        emb.num_faces()
    );
    let json = json!({
        "vertices": emb.n(),
        "edges": emb.num_edges(),
        "faces": emb.num_faces(),
        "genus": genus,
        "edge_width": ew,
        "face_width": fw,
        "short_inseparable": si,
        "scaffold": inst.scaffold,
    });
    Ok(Outcome::new(0, text, json))
}

fn face_id(inst: &Instance, cycle: &[usize]) -> Result<usize, Error> {
    inst.embedding
        .find_face(cycle)
        .map(|(f, _)| f)
        .ok_or_else(|| Error::Inconsistent(format!("{cycle:?} is not a face of the generated map")))
}

fn gen(family: Family, k: usize, n: usize, seed: u64, d: usize, output: Option<&Path>, json: bool) -> Result<Outcome, Error> {
    let mut extra = serde_json::Map::new();
    let (name, inst) = match family {
        Family::TorusLadder => ("torus-ladder", torus_ladder(k)?),
        Family::Stacked => {
            let (emb, outer) = stacked_triangulation(n, seed)?;
            let mut lists = ListAssignment::uniform(emb.n(), ColorSet::range(0, 5));
            for &v in &outer {
                lists.set(v, ColorSet::range(0, 3));
            }
            ("stacked", Instance::new(emb, lists).with_outer(outer))
        }
        Family::Thomassen => {
            let case = thomassen_case(seed, n)?;
            extra.insert("xy".into(), json!([case.x, case.y]));
            ("thomassen", case.instance)
        }
        Family::TwoFace => {
            let fam = two_face_surface_instance(seed, d)?;
            let inst = Instance::new(fam.embedding, fam.lists);
            let mut order = vec![fam.connect[fam.root]];
            order.extend(fam.connect.iter().copied().filter(|&c| c != fam.connect[fam.root]));
            let faces = order.iter().map(|&c| face_id(&inst, &fam.faces[c])).collect::<Result<Vec<_>, _>>()?;
            let others = (0..fam.faces.len())
                .filter(|c| !fam.connect.contains(c))
                .map(|c| face_id(&inst, &fam.faces[c]))
                .collect::<Result<Vec<_>, _>>()?;
            extra.insert("faces".into(), json!(faces));
            extra.insert("others".into(), json!(others));
            ("two-face", inst)
        }
        Family::SingleFace => {
            let rp = single_face_instance(seed, d)?;
            let inst = Instance::new(rp.embedding, rp.lists);
            extra.insert("faces".into(), json!([face_id(&inst, &rp.face)?]));
            extra.insert("path".into(), json!(rp.path));
            ("single-face", inst)
        }
    };
    inst.validate()?;
    let body = if json { inst.to_json() } else { inst.to_text() };
    let hints: Vec<String> = ["faces", "others", "path", "xy"]
        .iter()
        .filter_map(|key| {
            let vs = extra.get(*key)?.as_array()?;
            let vs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            (!vs.is_empty()).then(|| format!("{key}: {}", vs.join(",")))
        })
        .collect();
    let mut summary = json!({ "family": name, "vertices": inst.n(), "edges": inst.embedding.num_edges() });
    summary.as_object_mut().expect("object").extend(extra);
    match output {
        Some(path) => {
            write_file(path, &body)?;
            summary["output"] = json!(path.display().to_string());
            let mut text = format!("wrote {name} ({} vertices) to {}", inst.n(), path.display());
            for h in hints {
                text.push_str(&format!("\n{h}"));
            }
            Ok(Outcome::new(0, text, summary))
        }
        None => {
            summary["instance"] = serde_json::from_str(&body).unwrap_or(Value::Null);
            let comments: String = hints.iter().map(|h| format!("# {h}\n")).collect();
            Ok(Outcome::new(0, format!("{comments}{}", body.trim_end()), summary))
        }
    }
}

fn certificate_json(cert: &ConnectorCertificate, dot: &str) -> Value {
    json!({ "a": cert.a, "phi": cert.phi, "stages": cert.stages, "dot": dot })
}

#[allow(clippy::too_many_arguments)]
fn connect(
    dump_dir: &Path,
    path: &Path,
    faces: &[usize],
    others: &[usize],
    returning: &[usize],
    d: usize,
    dot_path: Option<&Path>,
    max_free: usize,
) -> Result<Outcome, Error> {
    let inst = load(path)?;
    let emb = &inst.embedding;
    let oracle = Oracle::new(max_free);
    if let Some(&f) = faces.iter().chain(others).find(|&&f| f >= emb.num_faces()) {
        return Err(Error::InvalidArgument(format!("face {f} out of range (the map has {} faces)", emb.num_faces())));
    }
    let walks: Vec<Vec<usize>> = faces.iter().chain(others).map(|&f| emb.face_walk(f)).collect();
    let result = if faces.len() == 1 {
        if returning.is_empty() {
            return Err(Error::InvalidArgument("a single face needs --path".into()));
        }
        connect_single_face(emb, &inst.lists, &walks[0], returning, d, &oracle)
    } else {
        let g = emb.graph();
        let mut paths = vec![Vec::new()];
        for w in &walks[1..faces.len()] {
            paths.push(
                slw_core::generators::shortest_set_path(g, w, &walks[0])
                    .ok_or_else(|| Error::Hypothesis("a face cannot reach the root face".into()))?,
            );
        }
        let connect: Vec<usize> = (0..faces.len()).collect();
        connect_faces(emb, &inst.lists, &walks, &connect, 0, &paths, d, &oracle)
    };
    let cert = match result {
        Ok(cert) => cert,
        Err(e @ (Error::SearchExhausted { .. } | Error::TheoremViolation(_))) => {
            let ids = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let header = format!(
                "# slw connect failure: {e}\n# faces: {}\n# others: {}\n# path: {}\n# d: {d}\n",
                ids(faces),
                ids(others),
                ids(returning)
            );
            let dump = write_dump(dump_dir, "connect-failure.txt", &(header + &inst.to_text()))?;
            return Ok(Outcome::new(
                1,
                format!("connector failed: {e}\ndump: {}", dump.display()),
                json!({ "error": e.to_string(), "dump": dump.display().to_string() }),
            ));
        }
        Err(e) => return Err(e),
    };
    let dot = to_dot(emb, &cert.a, &cert.phi);
    let mut text = format!("A ({} vertices): {:?}\nφ: {:?}\nstages:", cert.a.len(), cert.a, cert.phi.pairs());
    for s in &cert.stages {
        text.push_str(&format!("\n  {}: {}", s.name, s.detail));
    }
    match dot_path {
        Some(p) => {
            write_file(p, &dot)?;
            text.push_str(&format!("\nDOT written to {}", p.display()));
        }
        None => text.push_str(&format!("\n{}", dot.trim_end())),
    }
    Ok(Outcome::new(0, text, certificate_json(&cert, &dot)))
}

fn report_text(r: &VerifyReport, dumps: &[PathBuf]) -> String {
    let verdict = if r.passed() {
        "PASS"
    } else if r.counterexamples.is_empty() {
        "UNDECIDED"
    } else {
        "FAIL"
    };
    let mut out = format!(
        "{}: {verdict} ({} instances checked, {} held, {} undecided, {} counterexamples; {} vacuous draws)",
        r.statement,
        r.checked,
        r.held,
        r.undecided,
        r.counterexamples.len(),
        r.vacuous
    );
    for (k, v) in &r.notes {
        out.push_str(&format!("\n  {k}: {v}"));
    }
    for (cx, p) in r.counterexamples.iter().zip(dumps) {
        out.push_str(&format!("\n  counterexample #{}: {} (dump: {})", cx.index, cx.detail, p.display()));
    }
    out
}

fn verify_lemma(dump_dir: &Path, name: &str, cfg: VerifyConfig) -> Result<Outcome, Error> {
    let statements: Vec<Statement> =
        if name == "all" { NAMES.iter().map(|(_, s)| *s).collect() } else { vec![name.parse()?] };
    let mut texts = Vec::new();
    let mut reports = Vec::new();
    let (mut refuted, mut undecided) = (false, false);
    for s in statements {
        let report = verify::run(s, &cfg)?;
        let mut dumps = Vec::new();
        for cx in &report.counterexamples {
            dumps.push(write_dump(dump_dir, &format!("{}-{}.txt", report.statement, cx.index), &cx.dump)?);
        }
        refuted |= !report.counterexamples.is_empty();
        undecided |= report.undecided > 0;
        texts.push(report_text(&report, &dumps));
        let mut j = serde_json::to_value(&report).expect("reports serialize");
        j["passed"] = json!(report.passed());
        j["dumps"] = json!(dumps.iter().map(|p| p.display().to_string()).collect::<Vec<_>>());
        reports.push(j);
    }
    let code = if refuted {
        1
    } else if undecided {
        3
    } else {
        0
    };
    let json = if reports.len() == 1 { reports.pop().expect("one report") } else { json!(reports) };
    Ok(Outcome::new(code, texts.join("\n"), json))
}

fn certify_dump(path: &Path) -> Result<Outcome, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let r = verify::replay(&text)?;
    let json = serde_json::to_value(&r).expect("replays serialize");
    Ok(if r.confirmed() {
        Outcome::new(1, format!("{}: counterexample confirmed (draw #{}): {}", r.statement, r.index, r.detail), json)
    } else if r.refuted {
        Outcome::new(2, format!("{}: the dumped instance differs from the recorded draw", r.statement), json)
    } else {
        Outcome::new(0, format!("{}: not refuted: {}", r.statement, r.detail), json)
    })
}

fn certify_certificate(instance: &Path, certificate: &Path, complete: bool, max_free: usize) -> Result<Outcome, Error> {
    let inst = load(instance)?;
    let text = fs::read_to_string(certificate).map_err(|e| Error::Io(format!("{}: {e}", certificate.display())))?;
    let bad = |e: serde_json::Error| Error::Parse { line: e.line(), msg: e.to_string() };
    let value: Value = serde_json::from_str(&text).map_err(bad)?;
    let a: Vec<usize> = serde_json::from_value(value.get("a").cloned().unwrap_or(Value::Null)).map_err(bad)?;
    let phi: PartialColoring =
        serde_json::from_value(value.get("phi").cloned().unwrap_or(Value::Null)).map_err(bad)?;
    if phi.n() != inst.n() || a.iter().any(|&v| v >= inst.n()) {
        return Err(Error::InvalidArgument("the certificate does not match the instance size".into()));
    }
    let oracle = Oracle::new(max_free);
    Ok(match check_reduction(inst.embedding.graph(), &inst.lists, &a, &phi, complete, &oracle)? {
        Ok(_) => Outcome::new(
            0,
            format!("valid reduction: |A| = {}, |dom φ| = {}", a.len(), phi.size()),
            json!({ "valid": true, "a": a.len(), "colored": phi.size() }),
        ),
        Err(refutation) => {
            let why = serde_json::to_value(&refutation).expect("refutations serialize");
            Outcome::new(1, format!("not a reduction: {why}"), json!({ "valid": false, "refutation": why }))
        }
    })
}
