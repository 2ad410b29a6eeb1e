//! Coloring instances: an embedding plus lists, an optional precoloring and
//! an optional distinguished facial walk.
//!
//! Text format — the embedding text format followed by
//!
//! ```text
//! lists:
//! 0: 1 2 3
//! 1: 1 2 3
//! precolor:
//! 0: 2
//! outer: 0 1 2
//! scaffold: 7
//! ```
//!
//! Vertices missing from `lists:` get the empty list.

use serde::{Deserialize, Serialize};

use crate::colorset::{Color, ColorSet, MAX_COLOR};
use crate::embedding::io::parse_embedding_lines;
use crate::embedding::{EmbeddingData, RotationEmbedding};
use crate::error::{Error, Result};
use crate::listcolor::{ListAssignment, PartialColoring};

/// A list-coloring instance on an embedded graph.
#[derive(Clone, Debug)]
pub struct Instance {
    pub embedding: RotationEmbedding,
    pub lists: ListAssignment,
    pub precolor: PartialColoring,
    /// A distinguished facial cycle (e.g. the outer face), if given.
    pub outer: Option<Vec<usize>>,
    /// Scaffold vertices: present only to make a non-cellular drawing
    /// cellular. Width computations ignore them.
    pub scaffold: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct InstanceData {
    embedding: EmbeddingData,
    lists: ListAssignment,
    #[serde(default)]
    precolor: Option<PartialColoring>,
    #[serde(default)]
    outer: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    scaffold: Vec<usize>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

#[derive(PartialEq)]
enum Section {
    None,
    Lists,
    Precolor,
}

impl Instance {
    pub fn new(embedding: RotationEmbedding, lists: ListAssignment) -> Self {
        let n = embedding.n();
        Instance { embedding, lists, precolor: PartialColoring::new(n), outer: None, scaffold: Vec::new() }
    }

    pub fn with_precolor(mut self, precolor: PartialColoring) -> Self {
        self.precolor = precolor;
        self
    }

    pub fn with_outer(mut self, outer: Vec<usize>) -> Self {
        self.outer = Some(outer);
        self
    }

    pub fn n(&self) -> usize {
        self.embedding.n()
    }

    /// Checks sizes, list/precoloring consistency and the outer walk.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.lists.len() != n || self.precolor.n() != n {
            return Err(Error::InvalidArgument(format!(
                "instance has {n} vertices but {} lists and a coloring on {}",
                self.lists.len(),
                self.precolor.n()
            )));
        }
        self.precolor.validate(self.embedding.graph(), &self.lists)?;
        if let Some(&v) = self.scaffold.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidArgument(format!("scaffold vertex {v} out of range")));
        }
        if let Some(outer) = &self.outer {
            if self.embedding.find_face(outer).is_none() {
                return Err(Error::NotACycle(format!("outer walk {outer:?} is not a facial cycle")));
            }
        }
        Ok(())
    }

    pub fn parse_text(text: &str) -> Result<Instance> {
        let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
        let (embedding, consumed) = parse_embedding_lines(lines.iter().copied())?;
        let n = embedding.n();
        let mut lists = vec![ColorSet::EMPTY; n];
        let mut precolor = PartialColoring::new(n);
        let mut outer = None;
        let mut scaffold = Vec::new();
        let mut section = Section::None;
        for &(no, raw) in &lines[consumed..] {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "lists:" {
                section = Section::Lists;
                continue;
            }
            if line == "precolor:" {
                section = Section::Precolor;
                continue;
            }
            for (key, slot) in [("outer:", 0), ("scaffold:", 1)] {
                let Some(rest) = line.strip_prefix(key) else { continue };
                let vs = rest
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| perr(no, format!("bad vertex `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                if vs.iter().any(|&v| v >= n) {
                    return Err(perr(no, format!("`{key}` vertex out of range")));
                }
                if slot == 0 {
                    outer = Some(vs);
                } else {
                    scaffold = vs;
                }
            }
            if line.starts_with("outer:") || line.starts_with("scaffold:") {
                continue;
            }
            let (v, rest) = line.split_once(':').ok_or_else(|| perr(no, format!("unexpected line `{line}`")))?;
            let v: usize = v.trim().parse().map_err(|_| perr(no, format!("bad vertex `{}`", v.trim())))?;
            if v >= n {
                return Err(perr(no, format!("vertex {v} out of range")));
            }
            let colors = rest
                .split_whitespace()
                .map(|t| match t.parse::<Color>() {
                    Ok(c) if c <= MAX_COLOR => Ok(c),
                    _ => Err(perr(no, format!("bad color `{t}` (colors are 0..={MAX_COLOR})"))),
                })
                .collect::<Result<Vec<_>>>()?;
            match section {
                Section::Lists => lists[v] = colors.into_iter().collect(),
                Section::Precolor => {
                    if colors.len() != 1 {
                        return Err(perr(no, "precolor lines take exactly one color"));
                    }
                    precolor.set(v, colors[0]);
                }
                Section::None => return Err(perr(no, "vertex line outside `lists:`/`precolor:`")),
            }
        }
        let inst = Instance { embedding, lists: ListAssignment::new(lists), precolor, outer, scaffold };
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.embedding.to_text();
        out.push_str("lists:\n");
        for v in 0..self.n() {
            let cs: Vec<String> = self.lists.get(v).iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("{v}: {}\n", cs.join(" ")));
        }
        if !self.precolor.is_empty() {
            out.push_str("precolor:\n");
            for (v, c) in self.precolor.pairs() {
                out.push_str(&format!("{v}: {c}\n"));
            }
        }
        if let Some(outer) = &self.outer {
            let vs: Vec<String> = outer.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("outer: {}\n", vs.join(" ")));
        }
        if !self.scaffold.is_empty() {
            let vs: Vec<String> = self.scaffold.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("scaffold: {}\n", vs.join(" ")));
        }
        out
    }

    pub fn parse_json(text: &str) -> Result<Instance> {
        let data: InstanceData = serde_json::from_str(text)?;
        let embedding = data.embedding.build()?;
        let n = embedding.n();
        let inst = Instance {
            embedding,
            lists: data.lists,
            precolor: data.precolor.unwrap_or_else(|| PartialColoring::new(n)),
            outer: data.outer,
            scaffold: data.scaffold,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        let data = InstanceData {
            embedding: self.embedding.data(),
            lists: self.lists.clone(),
            precolor: Some(self.precolor.clone()),
            outer: self.outer.clone(),
            scaffold: self.scaffold.clone(),
        };
        serde_json::to_string_pretty(&data).expect("instance serializes")
    }

    /// Parses JSON when the text starts with `{`, the text format otherwise.
    pub fn parse(text: &str) -> Result<Instance> {
        if text.trim_start().starts_with('{') {
            Instance::parse_json(text)
        } else {
            Instance::parse_text(text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::samples;

    #[test]
    fn round_trips() {
        let emb = samples::wheel(5);
        let lists = ListAssignment::uniform(6, (0..5).collect());
        let inst = Instance::new(emb, lists)
            .with_precolor(PartialColoring::from_pairs(6, &[(0, 1), (1, 2)]))
            .with_outer(vec![0, 1, 2, 3, 4]);
        let back = Instance::parse_text(&inst.to_text()).unwrap();
        assert!(back.embedding.same_darts(&inst.embedding));
        assert_eq!(back.lists, inst.lists);
        assert_eq!(back.precolor, inst.precolor);
        assert_eq!(back.outer, inst.outer);
        let back = Instance::parse(&inst.to_json()).unwrap();
        assert_eq!(back.lists, inst.lists);
        assert_eq!(back.precolor, inst.precolor);
    }

    #[test]
    fn rejects_bad_sections() {
        let emb = samples::triangle().to_text();
        let text = format!("{emb}lists:\n0: 1 2\n1: 99\n");
        assert!(matches!(Instance::parse_text(&text), Err(Error::Parse { .. })));
        let text = format!("{emb}0: 1\n");
        assert!(matches!(Instance::parse_text(&text), Err(Error::Parse { .. })));
        let text = format!("{emb}lists:\n0: 1\n1: 1\n2: 2\nprecolor:\n0: 1\n1: 1\n");
        assert!(matches!(Instance::parse_text(&text), Err(Error::InvalidColoring(_))));
    }
}
