//! Does a finite graph satisfy an objective, and is a graph (almost)
//! universal at desk scale.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{write_graph, ColouredGraph, MorphismSearcher, OrderedGraph};
use crate::objective::{AtomProduct, ObjectiveExpr, ProductKind};
use crate::ordinal::Ordinal;
use crate::words::{Colour, ColourFamily, LassoWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub lasso: LassoWord,
    /// Vertex ids along the cycle, starting at the source of its first edge.
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatisfactionReport {
    pub satisfied: bool,
    pub witness: Option<Witness>,
}

impl SatisfactionReport {
    fn ok() -> Self {
        SatisfactionReport {
            satisfied: true,
            witness: None,
        }
    }
}

/// An edge for the cycle criteria; `None` is the neutral colour.
#[derive(Clone, Debug)]
pub(crate) struct LabelledEdge {
    pub src: usize,
    pub colour: Option<Colour>,
    pub dst: usize,
}

fn graph_edges(g: &ColouredGraph) -> Vec<LabelledEdge> {
    g.edges()
        .map(|(src, c, dst)| LabelledEdge {
            src,
            colour: Some(g.colour(c).clone()),
            dst,
        })
        .collect()
}

/// Strongly connected component ids (iterative Tarjan).
pub(crate) fn scc(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Whether an edge labelled `colour` is kept when looking for cycles whose
/// critical index is `lambda`.
fn allowed(kind: ProductKind, colour: &Option<Colour>, lambda: &Ordinal) -> bool {
    match colour {
        None => true,
        Some(c) => match kind {
            ProductKind::Max => c.index <= *lambda,
            ProductKind::Min => c.index >= *lambda,
        },
    }
}

/// A cycle (as edge indices) that violates the atom product, if any.
///
/// Max-lex: a rejecting edge at index λ on a cycle using indices ≤ λ.
/// Min-lex: the same with indices ≥ λ. Neutral edges are always usable and
/// never rejecting.
pub(crate) fn find_violation(
    n: usize,
    edges: &[LabelledEdge],
    product: &AtomProduct,
) -> Option<Vec<usize>> {
    let rejecting = |e: &LabelledEdge| -> bool {
        e.colour.as_ref().is_some_and(|c| {
            product
                .atom(&c.index)
                .is_some_and(|a| a.rejects_symbol(c.symbol))
        })
    };
    let lambdas: BTreeSet<&Ordinal> = edges
        .iter()
        .filter(|e| rejecting(e))
        .map(|e| &e.colour.as_ref().unwrap().index)
        .collect();
    for lambda in lambdas {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if allowed(product.kind, &e.colour, lambda) {
                adj[e.src].push(e.dst);
                out[e.src].push(i);
            }
        }
        let comp = scc(&adj);
        let critical = edges.iter().position(|e| {
            rejecting(e)
                && e.colour.as_ref().unwrap().index == *lambda
                && comp[e.src] == comp[e.dst]
        });
        if let Some(first) = critical {
            let start = edges[first].src;
            let mut cycle = vec![first];
            cycle.extend(shortest_path(edges, &out, edges[first].dst, start));
            return Some(cycle);
        }
    }
    None
}

/// Sources of rejecting edges that lie on a violating cycle: exactly the
/// vertices from which a violating play can be forced to loop.
pub(crate) fn violating_sources(
    n: usize,
    edges: &[LabelledEdge],
    product: &AtomProduct,
) -> Vec<bool> {
    let mut bad = vec![false; n];
    let rejecting: Vec<usize> = (0..edges.len())
        .filter(|&i| {
            edges[i].colour.as_ref().is_some_and(|c| {
                product
                    .atom(&c.index)
                    .is_some_and(|a| a.rejects_symbol(c.symbol))
            })
        })
        .collect();
    let lambdas: BTreeSet<&Ordinal> = rejecting
        .iter()
        .map(|&i| &edges[i].colour.as_ref().unwrap().index)
        .collect();
    for lambda in lambdas {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in edges {
            if allowed(product.kind, &e.colour, lambda) {
                adj[e.src].push(e.dst);
            }
        }
        let comp = scc(&adj);
        for &i in &rejecting {
            let e = &edges[i];
            if e.colour.as_ref().unwrap().index == *lambda && comp[e.src] == comp[e.dst] {
                bad[e.src] = true;
            }
        }
    }
    bad
}

/// Edge indices of a shortest path `from -> to` over `out`.
fn shortest_path(edges: &[LabelledEdge], out: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let n = out.len();
    let mut via = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &e in &out[v] {
            let w = edges[e].dst;
            if !seen[w] {
                seen[w] = true;
                via[w] = e;
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let e = via[v];
        path.push(e);
        v = edges[e].src;
    }
    path.reverse();
    path
}

pub(crate) fn witness_of(
    edges: &[LabelledEdge],
    cycle: &[usize],
    label: impl Fn(usize) -> String,
) -> Option<Witness> {
    let colours: Vec<Colour> = cycle
        .iter()
        .filter_map(|&e| edges[e].colour.clone())
        .collect();
    if colours.is_empty() {
        return None;
    }
    Some(Witness {
        lasso: LassoWord::periodic(colours),
        cycle: cycle.iter().map(|&e| label(edges[e].src)).collect(),
    })
}

fn check_family(g: &ColouredGraph, w: &ObjectiveExpr) -> Result<()> {
    for (_, c, _) in g.edges() {
        if !w.accepts_colour(g.colour(c)) {
            return Err(Error::ColourOutsideFamily(g.colour(c).clone()));
        }
    }
    Ok(())
}

/// Exact check by cycle criteria; `w` must flatten to a product of atoms.
pub fn satisfies_exact(g: &ColouredGraph, w: &ObjectiveExpr) -> Result<SatisfactionReport> {
    check_family(g, w)?;
    let indices: BTreeSet<Ordinal> = g.family().indices().cloned().collect();
    let product = w.atom_product(&indices)?;
    let edges = graph_edges(g);
    Ok(match find_violation(g.len(), &edges, &product) {
        None => SatisfactionReport::ok(),
        Some(cycle) => SatisfactionReport {
            satisfied: false,
            witness: witness_of(&edges, &cycle, |v| g.label(v).to_string()),
        },
    })
}

/// Looks for a rejected lasso among the closed walks of length at most
/// `bound`. Every objective here is prefix independent, so the access path
/// to a cycle never matters.
pub fn satisfies_bounded(
    g: &ColouredGraph,
    w: &ObjectiveExpr,
    bound: usize,
) -> Result<SatisfactionReport> {
    check_family(g, w)?;
    let edges = graph_edges(g);
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    for (i, e) in edges.iter().enumerate() {
        out[e.src].push(i);
    }
    let mut path = Vec::new();
    for start in 0..g.len() {
        if let Some(cycle) = walk(start, start, bound, &edges, &out, w, &mut path)? {
            return Ok(SatisfactionReport {
                satisfied: false,
                witness: witness_of(&edges, &cycle, |v| g.label(v).to_string()),
            });
        }
    }
    Ok(SatisfactionReport::ok())
}

/// Closed walks from `start` through vertices `≥ start` (so each cycle is
/// seen from its least vertex).
fn walk(
    start: usize,
    at: usize,
    budget: usize,
    edges: &[LabelledEdge],
    out: &[Vec<usize>],
    w: &ObjectiveExpr,
    path: &mut Vec<usize>,
) -> Result<Option<Vec<usize>>> {
    if budget == 0 {
        return Ok(None);
    }
    for &e in &out[at] {
        let next = edges[e].dst;
        if next < start {
            continue;
        }
        path.push(e);
        if next == start {
            let colours: Vec<Colour> = path
                .iter()
                .map(|&i| edges[i].colour.clone().unwrap())
                .collect();
            if !w.member(&LassoWord::periodic(colours))?.accepted {
                return Ok(Some(path.clone()));
            }
        }
        if let Some(found) = walk(start, next, budget - 1, edges, out, w, path)? {
            return Ok(Some(found));
        }
        path.pop();
    }
    Ok(None)
}

/// Number of labelled graphs on `n` vertices over `colours`, or `None` on
/// overflow.
pub fn graph_count(colours: &ColourFamily, n: usize) -> Option<u128> {
    let bits = n.checked_mul(n)?.checked_mul(colours.len())?;
    1u128.checked_shl(u32::try_from(bits).ok()?)
}

/// The `index`-th graph of the enumeration: bit `(c·n + u)·n + v` of
/// `index` is the edge `u -c-> v`.
pub fn graph_from_index(colours: &ColourFamily, n: usize, index: u128) -> ColouredGraph {
    let mut g = ColouredGraph::with_size(colours.clone(), n);
    let ncol = g.colours().len();
    for c in 0..ncol {
        for u in 0..n {
            for v in 0..n {
                if index >> ((c * n + u) * n + v) & 1 == 1 {
                    g.add_edge_id(u, c, v);
                }
            }
        }
    }
    g
}

/// Every edge set over `n` labelled vertices, in index order.
pub fn enumerate_graphs(
    colours: &ColourFamily,
    n: usize,
    budget: u128,
) -> Result<impl Iterator<Item = ColouredGraph> + '_> {
    let total = check_budget(colours, n, budget)?;
    Ok((0..total).map(move |i| graph_from_index(colours, n, i)))
}

fn check_budget(colours: &ColourFamily, n: usize, budget: u128) -> Result<u128> {
    match graph_count(colours, n) {
        Some(total) if total <= budget => Ok(total),
        other => Err(Error::Budget {
            what: "graph enumeration",
            needed: other.unwrap_or(u128::MAX),
            budget,
        }),
    }
}

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 20;

#[derive(Clone, Debug)]
pub struct UniversalityOptions {
    pub budget: u128,
    /// Use the bounded lasso search with this bound instead of the exact
    /// criteria.
    pub bound: Option<usize>,
    /// Failures kept in the report (all are counted).
    pub keep_failures: usize,
}

impl Default for UniversalityOptions {
    fn default() -> Self {
        UniversalityOptions {
            budget: DEFAULT_ENUMERATION_BUDGET,
            bound: None,
            keep_failures: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    NoMorphism,
    NoVertexWithMappedCone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniversalityFailure {
    pub index: u128,
    /// The offending graph in the text format.
    pub graph: String,
    pub reason: FailureReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniversalityReport {
    /// Candidate graphs enumerated.
    pub checked_count: u128,
    /// Candidates satisfying the objective.
    pub satisfying_count: u128,
    pub failure_count: u128,
    pub failures: Vec<UniversalityFailure>,
}

impl UniversalityReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// Every graph on exactly `n` vertices over `colours` that satisfies `w`
/// must map into `u`. Smaller graphs are covered: padding with isolated
/// vertices changes neither satisfaction nor the existence of a morphism.
pub fn check_universality(
    u: &OrderedGraph,
    w: &ObjectiveExpr,
    colours: &ColourFamily,
    n: usize,
    opts: &UniversalityOptions,
) -> Result<UniversalityReport> {
    sweep(u, w, colours, n, opts, false)
}

/// Like [`check_universality`], but only some vertex's reachable cone has to
/// map into `u`.
pub fn check_almost_universality(
    u: &OrderedGraph,
    w: &ObjectiveExpr,
    colours: &ColourFamily,
    n: usize,
    opts: &UniversalityOptions,
) -> Result<UniversalityReport> {
    sweep(u, w, colours, n, opts, true)
}

fn sweep(
    u: &OrderedGraph,
    w: &ObjectiveExpr,
    colours: &ColourFamily,
    n: usize,
    opts: &UniversalityOptions,
    almost: bool,
) -> Result<UniversalityReport> {
    let total = check_budget(colours, n, opts.budget)?;
    // surface objective errors once instead of per graph
    let probe = graph_from_index(colours, n, total - 1);
    satisfies(&probe, w, opts.bound)?;
    let searcher = MorphismSearcher::new(u);
    let outcomes: Vec<(bool, Option<FailureReason>)> = (0..total)
        .into_par_iter()
        .map(|i| {
            let g = graph_from_index(colours, n, i);
            if !satisfies(&g, w, opts.bound).unwrap().satisfied {
                return (false, None);
            }
            let maps = if almost {
                (0..g.len()).any(|v| {
                    let keep: Vec<usize> = g.reachable_from(v).ones().collect();
                    searcher.search(&g.induced(&keep)).is_some()
                })
            } else {
                searcher.search(&g).is_some()
            };
            let reason = match (maps, almost) {
                (true, _) => None,
                (false, false) => Some(FailureReason::NoMorphism),
                (false, true) => Some(FailureReason::NoVertexWithMappedCone),
            };
            (true, reason)
        })
        .collect();
    let mut report = UniversalityReport {
        checked_count: total,
        satisfying_count: 0,
        failure_count: 0,
        failures: Vec::new(),
    };
    for (i, (sat, reason)) in outcomes.into_iter().enumerate() {
        report.satisfying_count += sat as u128;
        if let Some(reason) = reason {
            report.failure_count += 1;
            if report.failures.len() < opts.keep_failures {
                let g = graph_from_index(colours, n, i as u128);
                report.failures.push(UniversalityFailure {
                    index: i as u128,
                    graph: write_graph(&OrderedGraph::discrete(g)),
                    reason,
                });
            }
        }
    }
    Ok(report)
}

fn satisfies(
    g: &ColouredGraph,
    w: &ObjectiveExpr,
    bound: Option<usize>,
) -> Result<SatisfactionReport> {
    match bound {
        Some(l) => satisfies_bounded(g, w, l),
        None => satisfies_exact(g, w),
    }
}
