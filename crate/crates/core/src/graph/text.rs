//! Line-based graph format.
//!
//! ```text
//! colours 0 1 2:1
//! vertex a key=1,0
//! vertex b key=0,3
//! edge a 1 b
//! order a >= b
//! ```
//!
//! `colours` declares family members that may have no edges. Either every
//! vertex has a `key=` (lexicographic order on keys) or none does (order
//! given by `order` lines, reflexive pairs implied). `#` starts a comment.

use std::fmt::Write;

use fixedbitset::FixedBitSet;

use super::{ColouredGraph, Order, OrderedGraph};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::words::{Colour, ColourFamily};

pub(crate) struct RawGraph {
    pub colours: Vec<Colour>,
    pub vertices: Vec<(String, Option<Vec<Ordinal>>)>,
    /// Colour token kept raw so callers can give special tokens meaning.
    pub edges: Vec<(String, String, String)>,
    pub orders: Vec<(String, String)>,
    /// Lines with a keyword from `extra`, split into words.
    pub extra: Vec<(usize, Vec<String>)>,
}

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

pub(crate) fn parse_raw(text: &str, extra: &[&str]) -> Result<RawGraph> {
    let mut raw = RawGraph {
        colours: Vec::new(),
        vertices: Vec::new(),
        edges: Vec::new(),
        orders: Vec::new(),
        extra: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.split('#').next().unwrap().trim();
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["colours", cs @ ..] => {
                for c in cs {
                    raw.colours.push(c.parse().map_err(|e| err(lineno, e))?);
                }
            }
            ["vertex", id] => raw.vertices.push((id.to_string(), None)),
            ["vertex", id, key] => {
                let key = key
                    .strip_prefix("key=")
                    .ok_or_else(|| err(lineno, "expected key=<ordinals>"))?;
                let key = key
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<Ordinal>>>()
                    .map_err(|e| err(lineno, e))?;
                raw.vertices.push((id.to_string(), Some(key)));
            }
            ["edge", s, c, d] => raw
                .edges
                .push((s.to_string(), c.to_string(), d.to_string())),
            ["order", a, ">=", b] => raw.orders.push((a.to_string(), b.to_string())),
            [kw, ..] if extra.contains(kw) => raw
                .extra
                .push((lineno, words.iter().map(|w| w.to_string()).collect())),
            _ => return Err(err(lineno, format!("cannot parse `{line}`"))),
        }
    }
    Ok(raw)
}

impl RawGraph {
    pub(crate) fn order(&self, g: &ColouredGraph) -> Result<Order> {
        let keyed = self.vertices.iter().filter(|(_, k)| k.is_some()).count();
        if keyed == self.vertices.len() && keyed > 0 {
            if !self.orders.is_empty() {
                return Err(Error::parse(
                    "use either vertex keys or order lines, not both",
                ));
            }
            return Ok(Order::Keys(
                self.vertices
                    .iter()
                    .map(|(_, k)| k.clone().unwrap())
                    .collect(),
            ));
        }
        if keyed > 0 {
            return Err(Error::parse("either every vertex has a key or none does"));
        }
        let n = g.len();
        let mut rel = vec![FixedBitSet::with_capacity(n); n];
        for (v, row) in rel.iter_mut().enumerate() {
            row.insert(v);
        }
        for (a, b) in &self.orders {
            rel[g.vertex(a)?].insert(g.vertex(b)?);
        }
        Ok(Order::Relation(rel))
    }
}

pub fn parse_graph(text: &str) -> Result<OrderedGraph> {
    let raw = parse_raw(text, &[])?;
    let mut edges = Vec::with_capacity(raw.edges.len());
    let mut family = ColourFamily::new();
    for c in &raw.colours {
        family.insert(c);
    }
    for (s, c, d) in &raw.edges {
        let c: Colour = c.parse()?;
        family.insert(&c);
        edges.push((s, c, d));
    }
    let labels = raw.vertices.iter().map(|(id, _)| id.clone()).collect();
    let mut g = ColouredGraph::new(family, labels)?;
    for (s, c, d) in edges {
        let (s, d) = (g.vertex(s)?, g.vertex(d)?);
        g.add_edge(s, &c, d)?;
    }
    let order = raw.order(&g)?;
    OrderedGraph::new(g, order)
}

pub fn write_graph(g: &OrderedGraph) -> String {
    let mut out = String::new();
    if !g.colours().is_empty() {
        out.push_str("colours");
        for c in g.colours() {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    for v in 0..g.len() {
        write!(out, "vertex {}", g.label(v)).unwrap();
        if let Order::Keys(k) = &g.order {
            let key: Vec<String> = k[v].iter().map(Ordinal::to_string).collect();
            write!(out, " key={}", key.join(",")).unwrap();
        }
        out.push('\n');
    }
    for (v, c, w) in g.edges() {
        writeln!(out, "edge {} {} {}", g.label(v), g.colour(c), g.label(w)).unwrap();
    }
    if let Order::Relation(rel) = &g.order {
        for (u, row) in rel.iter().enumerate() {
            for v in row.ones().filter(|&v| v != u) {
                writeln!(out, "order {} >= {}", g.label(u), g.label(v)).unwrap();
            }
        }
    }
    out
}
