//! Vertex and edge colorings with a declared palette and defect, plus their text format.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub type Color = u64;

/// Colors in `1..=palette`, with at most `claimed_defect` same-colored neighbors per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexColoring {
    pub colors: BTreeMap<VertexId, Color>,
    pub palette: u64,
    pub claimed_defect: u64,
}

/// Keys are `(lower Id, higher Id)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub colors: BTreeMap<(VertexId, VertexId), Color>,
    pub palette: u64,
    pub claimed_defect: u64,
}

impl VertexColoring {
    /// Builds from a vector indexed like `g`'s vertices.
    pub fn from_aligned(g: &Graph, colors: Vec<Color>, palette: u64, claimed_defect: u64) -> Self {
        assert_eq!(colors.len(), g.n());
        VertexColoring { colors: g.ids().iter().copied().zip(colors).collect(), palette, claimed_defect }
    }

    /// Colors indexed like `g`'s vertices; errors when some vertex is uncolored.
    pub fn aligned(&self, g: &Graph) -> Result<Vec<Color>> {
        let mut out = Vec::with_capacity(g.n());
        let mut missing = Vec::new();
        for &id in g.ids() {
            match self.colors.get(&id) {
                Some(&c) => out.push(c),
                None => {
                    missing.push(id);
                    out.push(0);
                }
            }
        }
        if missing.is_empty() {
            Ok(out)
        } else {
            Err(Error::Uncolored(format_list(&missing)))
        }
    }

    pub fn get(&self, id: VertexId) -> Option<Color> {
        self.colors.get(&id).copied()
    }

    /// Number of distinct colors used.
    pub fn colors_used(&self) -> u64 {
        let mut v: Vec<Color> = self.colors.values().copied().collect();
        v.sort_unstable();
        v.dedup();
        v.len() as u64
    }

    pub fn max_color(&self) -> Color {
        self.colors.values().copied().max().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("palette {} defect {}\n", self.palette, self.claimed_defect);
        for (id, c) in &self.colors {
            let _ = writeln!(s, "{id} {c}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = data_lines(text);
        let (palette, claimed_defect) = parse_header(&mut lines)?;
        let mut colors = BTreeMap::new();
        for (ln, line) in lines {
            let f = fields(ln, line, 2)?;
            if colors.insert(f[0] as VertexId, f[1]).is_some() {
                return Err(Error::Parse { line: ln, msg: format!("vertex {} colored twice", f[0]) });
            }
        }
        Ok(VertexColoring { colors, palette, claimed_defect })
    }
}

impl EdgeColoring {
    /// Builds from a vector indexed by `g`'s edge numbers.
    pub fn from_aligned(g: &Graph, colors: Vec<Color>, palette: u64, claimed_defect: u64) -> Self {
        assert_eq!(colors.len(), g.m());
        let colors = colors.into_iter().enumerate().map(|(e, c)| (g.edge_ids(e), c)).collect();
        EdgeColoring { colors, palette, claimed_defect }
    }

    pub fn aligned(&self, g: &Graph) -> Result<Vec<Color>> {
        let mut out = Vec::with_capacity(g.m());
        let mut missing = Vec::new();
        for e in 0..g.m() {
            let key = g.edge_ids(e);
            match self.colors.get(&key) {
                Some(&c) => out.push(c),
                None => {
                    missing.push(key);
                    out.push(0);
                }
            }
        }
        if missing.is_empty() {
            Ok(out)
        } else {
            let s: Vec<String> = missing.iter().take(20).map(|(a, b)| format!("({a},{b})")).collect();
            Err(Error::Uncolored(s.join(" ")))
        }
    }

    pub fn get(&self, u: VertexId, w: VertexId) -> Option<Color> {
        self.colors.get(&(u.min(w), u.max(w))).copied()
    }

    pub fn colors_used(&self) -> u64 {
        let mut v: Vec<Color> = self.colors.values().copied().collect();
        v.sort_unstable();
        v.dedup();
        v.len() as u64
    }

    pub fn max_color(&self) -> Color {
        self.colors.values().copied().max().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("palette {} defect {}\n", self.palette, self.claimed_defect);
        for ((u, w), c) in &self.colors {
            let _ = writeln!(s, "{u} {w} {c}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = data_lines(text);
        let (palette, claimed_defect) = parse_header(&mut lines)?;
        let mut colors = BTreeMap::new();
        for (ln, line) in lines {
            let f = fields(ln, line, 3)?;
            let (u, w) = (f[0] as VertexId, f[1] as VertexId);
            if colors.insert((u.min(w), u.max(w)), f[2]).is_some() {
                return Err(Error::Parse { line: ln, msg: format!("edge {u} {w} colored twice") });
            }
        }
        Ok(EdgeColoring { colors, palette, claimed_defect })
    }
}

fn format_list(ids: &[VertexId]) -> String {
    let mut s: Vec<String> = ids.iter().take(20).map(|x| x.to_string()).collect();
    if ids.len() > 20 {
        s.push(format!("... ({} total)", ids.len()));
    }
    s.join(" ")
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<(u64, u64)> {
    let (ln, h) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let t: Vec<&str> = h.split_whitespace().collect();
    if t.len() != 4 || t[0] != "palette" || t[2] != "defect" {
        return Err(Error::Parse { line: ln, msg: "expected `palette P defect D`".into() });
    }
    let p = t[1].parse().map_err(|e: std::num::ParseIntError| Error::Parse { line: ln, msg: e.to_string() })?;
    let d = t[3].parse().map_err(|e: std::num::ParseIntError| Error::Parse { line: ln, msg: e.to_string() })?;
    Ok((p, d))
}

fn fields(ln: usize, line: &str, k: usize) -> Result<Vec<u64>> {
    let f: std::result::Result<Vec<u64>, _> = line.split_whitespace().map(str::parse).collect();
    let f = f.map_err(|e: std::num::ParseIntError| Error::Parse { line: ln, msg: e.to_string() })?;
    if f.len() != k {
        return Err(Error::Parse { line: ln, msg: format!("expected {k} integers") });
    }
    Ok(f)
}
