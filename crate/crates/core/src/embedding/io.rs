//! Text and JSON serializations of rotation embeddings.
//!
//! Text format (one graph per file, `#` starts a comment):
//!
//! ```text
//! V 3 E 3
//! rot 0: 0 1
//! rot 1: 2 3
//! rot 2: 4 5
//! twin: 0 3 1 4 2 5
//! ```
//!
//! `rot v:` lists the darts leaving `v` in cyclic order; `twin:` lists dart
//! pairs (it may be split across several lines).

use serde::{Deserialize, Serialize};

use super::RotationEmbedding;
use crate::error::{Error, Result};

/// JSON mirror of the text format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingData {
    pub vertices: usize,
    pub vertex_of: Vec<usize>,
    pub next_around_vertex: Vec<usize>,
    pub twin: Vec<usize>,
}

impl EmbeddingData {
    pub fn build(&self) -> Result<RotationEmbedding> {
        let emb = RotationEmbedding::from_darts(
            self.vertices,
            self.vertex_of.clone(),
            self.next_around_vertex.clone(),
            self.twin.clone(),
        )?;
        emb.validate_input()?;
        Ok(emb)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| parse_err(line, format!("expected a nonnegative integer, found `{tok}`")))
}

/// Parses the text format from an iterator of `(line_number, line)` pairs.
/// Stops at the first line that is not part of the embedding grammar and
/// returns how many lines were consumed.
pub(crate) fn parse_embedding_lines<'a, I>(lines: I) -> Result<(RotationEmbedding, usize)>
where
    I: IntoIterator<Item = (usize, &'a str)>,
{
    let mut header: Option<(usize, usize)> = None;
    let mut rot: Vec<Option<Vec<usize>>> = Vec::new();
    let mut twins: Vec<usize> = Vec::new();
    let mut last_line = 0;
    let mut consumed = 0;
    for (no, raw) in lines {
        let line = raw.split('#').next().unwrap_or("").trim();
        last_line = no;
        if line.is_empty() {
            consumed += 1;
            continue;
        }
        if let Some(rest) = line.strip_prefix("V ") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 3 || toks[1] != "E" {
                return Err(parse_err(no, "header must be `V <n> E <m>`"));
            }
            let n = parse_usize(toks[0], no)?;
            let m = parse_usize(toks[2], no)?;
            header = Some((n, m));
            rot = vec![None; n];
        } else if let Some(rest) = line.strip_prefix("rot ") {
            let (n, _) = header.ok_or_else(|| parse_err(no, "`rot` before header"))?;
            let (v, darts) = rest.split_once(':').ok_or_else(|| parse_err(no, "expected `rot v: d1 ... dk`"))?;
            let v = parse_usize(v.trim(), no)?;
            if v >= n {
                return Err(parse_err(no, format!("vertex {v} out of range")));
            }
            if rot[v].is_some() {
                return Err(parse_err(no, format!("rotation of vertex {v} given twice")));
            }
            let ds = darts.split_whitespace().map(|t| parse_usize(t, no)).collect::<Result<Vec<_>>>()?;
            rot[v] = Some(ds);
        } else if let Some(rest) = line.strip_prefix("twin:") {
            if header.is_none() {
                return Err(parse_err(no, "`twin` before header"));
            }
            for t in rest.split_whitespace() {
                twins.push(parse_usize(t, no)?);
            }
        } else {
            break;
        }
        consumed += 1;
    }
    let (n, m) = header.ok_or_else(|| parse_err(last_line, "missing `V <n> E <m>` header"))?;
    let nd = 2 * m;
    let mut vertex_of = vec![usize::MAX; nd];
    let mut next = vec![usize::MAX; nd];
    for (v, r) in rot.iter().enumerate() {
        let r = r.clone().unwrap_or_default();
        for (i, &d) in r.iter().enumerate() {
            if d >= nd {
                return Err(parse_err(last_line, format!("dart {d} out of range (E = {m})")));
            }
            if vertex_of[d] != usize::MAX {
                return Err(parse_err(last_line, format!("dart {d} appears in two rotations")));
            }
            vertex_of[d] = v;
            next[d] = r[(i + 1) % r.len()];
        }
    }
    if let Some(d) = vertex_of.iter().position(|&v| v == usize::MAX) {
        return Err(parse_err(last_line, format!("dart {d} is not in any rotation")));
    }
    if twins.len() != nd {
        return Err(parse_err(last_line, format!("expected {m} twin pairs, found {} values", twins.len())));
    }
    let mut twin = vec![usize::MAX; nd];
    for pair in twins.chunks(2) {
        let (a, b) = (pair[0], pair[1]);
        if a >= nd || b >= nd || twin[a] != usize::MAX || twin[b] != usize::MAX {
            return Err(parse_err(last_line, format!("invalid twin pair {a} {b}")));
        }
        twin[a] = b;
        twin[b] = a;
    }
    let emb = RotationEmbedding::from_darts(n, vertex_of, next, twin)?;
    emb.validate_input()?;
    Ok((emb, consumed))
}

/// Parses a complete text-format embedding.
pub fn parse_embedding_text(text: &str) -> Result<RotationEmbedding> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let (emb, consumed) = parse_embedding_lines(lines.iter().copied())?;
    if let Some((no, l)) = lines[consumed..].iter().find(|(_, l)| !l.split('#').next().unwrap_or("").trim().is_empty()) {
        return Err(parse_err(*no, format!("unexpected line `{}`", l.trim())));
    }
    Ok(emb)
}

pub fn parse_embedding_json(text: &str) -> Result<RotationEmbedding> {
    let data: EmbeddingData = serde_json::from_str(text)?;
    data.build()
}

impl RotationEmbedding {
    /// Emits the text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("V {} E {}\n", self.n(), self.num_edges());
        for v in 0..self.n() {
            let ds: Vec<String> = self.darts_at(v).iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("rot {v}: {}\n", ds.join(" ")));
        }
        let pairs: Vec<String> = (0..self.num_darts())
            .filter(|&d| d < self.twin(d))
            .map(|d| format!("{} {}", d, self.twin(d)))
            .collect();
        out.push_str(&format!("twin: {}\n", pairs.join(" ")));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.data()).expect("embedding data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::samples;

    #[test]
    fn text_roundtrip_is_bit_exact() {
        for emb in [samples::k7_torus(), samples::wheel(6), samples::tetrahedron()] {
            let text = emb.to_text();
            let back = parse_embedding_text(&text).unwrap();
            // Rotation listing starts at each vertex's first dart, so the
            // successor arrays coincide exactly.
            assert!(back.same_darts(&emb));
            let json = emb.to_json();
            assert!(parse_embedding_json(&json).unwrap().same_darts(&emb));
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "V 2 E 1\nrot 0: 0\nrot 1: 1\ntwin: 0\n";
        assert!(matches!(parse_embedding_text(bad), Err(Error::Parse { .. })));
        let junk = "V 2 E 1\nrot 0: 0\nrot 1: 1\ntwin: 0 1\nbogus\n";
        assert!(matches!(parse_embedding_text(junk), Err(Error::Parse { line: 5, .. })));
        let disconnected = "V 3 E 1\nrot 0: 0\nrot 1: 1\ntwin: 0 1\n";
        assert!(matches!(parse_embedding_text(disconnected), Err(Error::NotConnected { .. })));
    }
}
