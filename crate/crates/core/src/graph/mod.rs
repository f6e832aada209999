//! Edge-coloured graphs with a vertex order, and the algebra on them.
//!
//! Vertices are dense indices `0..n` carrying string ids. Every graph owns a
//! [`ColourFamily`]; colours are numbered densely in family order, and each
//! colour stores one successor bitset per vertex.

mod check;
mod morphism;
mod ops;
pub(crate) mod text;

use std::collections::{HashMap, VecDeque};
use std::ops::Deref;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::words::{Colour, ColourFamily};

pub use check::{
    check_monotone, check_partial_order, order_isomorphic_identical, MonotoneReport,
    MonotoneViolation, OrderReport, Side,
};
pub use morphism::{morphism_check, morphism_search, EdgeViolation, Morphism, MorphismSearcher};
pub use ops::{chain_graph, directed_sum, lex_product, loop_graph, tensor};
pub use text::{parse_graph, write_graph};

#[derive(Clone, Debug)]
pub struct ColouredGraph {
    labels: Vec<String>,
    lookup: HashMap<String, usize>,
    family: ColourFamily,
    colours: Vec<Colour>,
    /// `succ[c][v]`: targets of `c`-edges out of `v`.
    succ: Vec<Vec<FixedBitSet>>,
}

impl ColouredGraph {
    pub fn new(family: ColourFamily, labels: Vec<String>) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if lookup.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let n = labels.len();
        let colours = family.colours();
        let succ = colours
            .iter()
            .map(|_| vec![FixedBitSet::with_capacity(n); n])
            .collect();
        Ok(ColouredGraph {
            labels,
            lookup,
            family,
            colours,
            succ,
        })
    }

    /// Vertices labelled `0..n`.
    pub fn with_size(family: ColourFamily, n: usize) -> Self {
        Self::new(family, (0..n).map(|i| i.to_string()).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.lookup
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn family(&self) -> &ColourFamily {
        &self.family
    }

    /// Colours in dense-id order.
    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    pub fn colour(&self, id: usize) -> &Colour {
        &self.colours[id]
    }

    pub fn colour_id(&self, c: &Colour) -> Option<usize> {
        self.colours.binary_search(c).ok()
    }

    pub fn add_edge(&mut self, src: usize, c: &Colour, dst: usize) -> Result<()> {
        let id = self
            .colour_id(c)
            .ok_or_else(|| Error::ColourOutsideFamily(c.clone()))?;
        self.add_edge_id(src, id, dst);
        Ok(())
    }

    pub fn add_edge_id(&mut self, src: usize, colour: usize, dst: usize) {
        self.succ[colour][src].insert(dst);
    }

    pub fn has_edge(&self, src: usize, colour: usize, dst: usize) -> bool {
        self.succ[colour][src].contains(dst)
    }

    pub fn succ(&self, colour: usize, v: usize) -> &FixedBitSet {
        &self.succ[colour][v]
    }

    pub(crate) fn succ_mut(&mut self, colour: usize, v: usize) -> &mut FixedBitSet {
        &mut self.succ[colour][v]
    }

    /// All edges as `(src, colour id, dst)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.len()).flat_map(move |v| {
            (0..self.colours.len())
                .flat_map(move |c| self.succ[c][v].ones().map(move |w| (v, c, w)))
        })
    }

    pub fn num_edges(&self) -> usize {
        self.succ
            .iter()
            .flat_map(|rows| rows.iter().map(|r| r.count_ones(..)))
            .sum()
    }

    /// Successors over all colours.
    pub fn any_succ(&self, v: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for rows in &self.succ {
            out.union_with(&rows[v]);
        }
        out
    }

    pub fn reachable_from(&self, v: usize) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.len());
        seen.insert(v);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for w in self.any_succ(u).ones() {
                if !seen.put(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Induced subgraph on `keep` (ascending), with the original labels.
    pub fn induced(&self, keep: &[usize]) -> ColouredGraph {
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let mut g = ColouredGraph::new(self.family.clone(), labels).unwrap();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        for (i, &v) in keep.iter().enumerate() {
            for c in 0..self.colours.len() {
                for w in self.succ[c][v].ones() {
                    if pos[w] != usize::MAX {
                        g.succ[c][i].insert(pos[w]);
                    }
                }
            }
        }
        g
    }

    /// Same vertices and edges over a larger family.
    pub fn widen(&self, family: &ColourFamily) -> Result<ColouredGraph> {
        let mut g = ColouredGraph::new(self.family.union(family), self.labels.clone())?;
        for (v, c, w) in self.edges() {
            g.add_edge(v, &self.colours[c], w)?;
        }
        Ok(g)
    }
}

/// Induced subgraph on the vertices reachable from `v` (including `v`).
pub fn reachable_restrict(g: &ColouredGraph, v: &str) -> Result<ColouredGraph> {
    let v = g.vertex(v)?;
    let keep: Vec<usize> = g.reachable_from(v).ones().collect();
    Ok(g.induced(&keep))
}

/// Vertex order. `Keys` compares lexicographic key vectors (a proper prefix
/// is smaller); `Relation` stores `geq[u]`, the set of `v` with `u ≥ v`.
#[derive(Clone, Debug, PartialEq)]
pub enum Order {
    Keys(Vec<Vec<Ordinal>>),
    Relation(Vec<FixedBitSet>),
}

#[derive(Clone, Debug)]
pub struct OrderedGraph {
    pub graph: ColouredGraph,
    pub order: Order,
}

impl Deref for OrderedGraph {
    type Target = ColouredGraph;

    fn deref(&self) -> &ColouredGraph {
        &self.graph
    }
}

pub(crate) fn nat_key(parts: &[usize]) -> Vec<Ordinal> {
    parts.iter().map(|&p| Ordinal::nat(p as u64)).collect()
}

impl OrderedGraph {
    pub fn new(graph: ColouredGraph, order: Order) -> Result<Self> {
        let n = graph.len();
        let ok = match &order {
            Order::Keys(k) => k.len() == n,
            Order::Relation(r) => r.len() == n && r.iter().all(|row| row.len() == n),
        };
        if !ok {
            return Err(Error::InvalidGraph(
                "order size does not match vertex count".into(),
            ));
        }
        Ok(OrderedGraph { graph, order })
    }

    /// Order by natural-number keys.
    pub fn with_nat_keys(graph: ColouredGraph, keys: &[Vec<usize>]) -> Self {
        let keys = keys.iter().map(|k| nat_key(k)).collect();
        Self::new(graph, Order::Keys(keys)).unwrap()
    }

    /// Discrete order: only `v ≥ v`.
    pub fn discrete(graph: ColouredGraph) -> Self {
        let n = graph.len();
        let rel = (0..n)
            .map(|v| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert(v);
                row
            })
            .collect();
        OrderedGraph {
            graph,
            order: Order::Relation(rel),
        }
    }

    pub fn geq(&self, u: usize, v: usize) -> bool {
        match &self.order {
            Order::Keys(k) => k[u] >= k[v],
            Order::Relation(r) => r[u].contains(v),
        }
    }

    pub fn gt(&self, u: usize, v: usize) -> bool {
        self.geq(u, v) && !self.geq(v, u)
    }

    pub fn geq_matrix(&self) -> Vec<FixedBitSet> {
        match &self.order {
            Order::Relation(r) => r.clone(),
            Order::Keys(_) => {
                let n = self.len();
                let asc = self.ascending();
                let mut out = vec![FixedBitSet::with_capacity(n); n];
                let mut below = FixedBitSet::with_capacity(n);
                let mut i = 0;
                while i < n {
                    let mut j = i;
                    while j < n && self.geq(asc[i], asc[j]) {
                        below.insert(asc[j]);
                        j += 1;
                    }
                    for &v in &asc[i..j] {
                        out[v] = below.clone();
                    }
                    i = j;
                }
                out
            }
        }
    }

    /// Vertices sorted ascending along a linear extension of the order.
    pub fn ascending(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = (0..self.len()).collect();
        match &self.order {
            Order::Keys(k) => vs.sort_by(|&a, &b| k[a].cmp(&k[b]).then(a.cmp(&b))),
            Order::Relation(r) => vs.sort_by_key(|&v| (r[v].count_ones(..), v)),
        }
        vs
    }

    /// Rank of every vertex when the order is a linear (total, antisymmetric)
    /// order; `None` otherwise.
    pub fn linear_ranks(&self) -> Option<Vec<usize>> {
        let asc = self.ascending();
        let mut rank = vec![0; self.len()];
        for (r, &v) in asc.iter().enumerate() {
            rank[v] = r;
        }
        match &self.order {
            Order::Keys(k) => {
                if asc.windows(2).any(|w| k[w[0]] == k[w[1]]) {
                    return None;
                }
            }
            Order::Relation(rel) => {
                for (u, row) in rel.iter().enumerate() {
                    if row.count_ones(..) != rank[u] + 1 || row.ones().any(|v| rank[v] > rank[u]) {
                        return None;
                    }
                }
            }
        }
        Some(rank)
    }

    /// Dense ranks of a total preorder given by keys (ties share a rank).
    pub(crate) fn dense_key_ranks(&self) -> Option<Vec<usize>> {
        let Order::Keys(k) = &self.order else {
            return None;
        };
        let asc = self.ascending();
        let mut rank = vec![0; self.len()];
        let mut r = 0;
        for (i, &v) in asc.iter().enumerate() {
            if i > 0 && k[asc[i - 1]] != k[v] {
                r += 1;
            }
            rank[v] = r;
        }
        Some(rank)
    }

    /// Restriction of graph and order to `keep` (ascending).
    pub fn induced(&self, keep: &[usize]) -> OrderedGraph {
        let graph = self.graph.induced(keep);
        let order = match &self.order {
            Order::Keys(k) => Order::Keys(keep.iter().map(|&v| k[v].clone()).collect()),
            Order::Relation(r) => Order::Relation(
                keep.iter()
                    .map(|&u| {
                        let mut row = FixedBitSet::with_capacity(keep.len());
                        for (j, &v) in keep.iter().enumerate() {
                            row.set(j, r[u].contains(v));
                        }
                        row
                    })
                    .collect(),
            ),
        };
        OrderedGraph { graph, order }
    }

    pub fn widen(&self, family: &ColourFamily) -> Result<OrderedGraph> {
        Ok(OrderedGraph {
            graph: self.graph.widen(family)?,
            order: self.order.clone(),
        })
    }
}
