use std::collections::VecDeque;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{check_monotone, ColouredGraph, OrderedGraph};
use crate::error::{Error, Result};

/// Vertex map `G -> H`, indexed by `G`'s vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Morphism {
    pub map: Vec<usize>,
}

impl Morphism {
    pub fn identity(n: usize) -> Self {
        Morphism {
            map: (0..n).collect(),
        }
    }

    /// `other ∘ self`
    pub fn then(&self, other: &Morphism) -> Morphism {
        Morphism {
            map: self.map.iter().map(|&v| other.map[v]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeViolation {
    pub src: String,
    pub colour: String,
    pub dst: String,
}

/// Colour ids of `g` mapped into `h`; errors on an edge colour `h` lacks.
fn colour_map(g: &ColouredGraph, h: &ColouredGraph) -> Result<Vec<Option<usize>>> {
    let mut out = Vec::with_capacity(g.colours().len());
    for (c, colour) in g.colours().iter().enumerate() {
        let id = h.colour_id(colour);
        if id.is_none() && (0..g.len()).any(|v| !g.succ(c, v).is_clear()) {
            return Err(Error::ColourOutsideFamily(colour.clone()));
        }
        out.push(id);
    }
    Ok(out)
}

/// First `G`-edge whose image is not an `H`-edge, if any.
pub fn morphism_check(
    g: &ColouredGraph,
    h: &ColouredGraph,
    phi: &Morphism,
) -> Result<Option<EdgeViolation>> {
    if phi.map.len() != g.len() || phi.map.iter().any(|&x| x >= h.len()) {
        return Err(Error::InvalidMorphism(format!(
            "map has {} entries for {} vertices",
            phi.map.len(),
            g.len()
        )));
    }
    let cmap = colour_map(g, h)?;
    for (v, c, w) in g.edges() {
        let hc = cmap[c].unwrap();
        if !h.has_edge(phi.map[v], hc, phi.map[w]) {
            return Ok(Some(EdgeViolation {
                src: g.label(v).to_string(),
                colour: g.colour(c).to_string(),
                dst: g.label(w).to_string(),
            }));
        }
    }
    Ok(None)
}

struct FastPath {
    rank: Vec<usize>,
    asc: Vec<usize>,
    /// `minsrc[c][t]`: least rank of a vertex with a `c`-edge to the vertex
    /// of rank `t`, or `usize::MAX`.
    minsrc: Vec<Vec<usize>>,
}

/// Morphism search into a fixed target graph. Build once, query many times.
pub struct MorphismSearcher<'a> {
    h: &'a OrderedGraph,
    fast: Option<FastPath>,
    asc: Vec<usize>,
    pred: OnceLock<Vec<Vec<FixedBitSet>>>,
}

impl<'a> MorphismSearcher<'a> {
    pub fn new(h: &'a OrderedGraph) -> Self {
        let fast = h
            .linear_ranks()
            .filter(|_| check_monotone(h).ok)
            .map(|rank| {
                let m = h.len();
                let mut asc = vec![0; m];
                for (v, &r) in rank.iter().enumerate() {
                    asc[r] = v;
                }
                let minsrc = (0..h.colours().len())
                    .map(|c| {
                        let mut best = vec![usize::MAX; m];
                        for (r, &u) in asc.iter().enumerate() {
                            for t in h.succ(c, u).ones() {
                                if best[rank[t]] == usize::MAX {
                                    best[rank[t]] = r;
                                }
                            }
                        }
                        best
                    })
                    .collect();
                FastPath { rank, asc, minsrc }
            });
        MorphismSearcher {
            h,
            fast,
            asc: h.ascending(),
            pred: OnceLock::new(),
        }
    }

    /// Whether the least-morphism lifting applies.
    pub fn has_fast_path(&self) -> bool {
        self.fast.is_some()
    }

    pub fn search(&self, g: &ColouredGraph) -> Option<Morphism> {
        let cmap = colour_map(g, self.h).ok()?;
        match &self.fast {
            Some(fast) => Self::least(g, &cmap, fast),
            None => self.backtrack(g, &cmap),
        }
    }

    /// Forces the backtracking path, for cross-checks.
    pub fn search_backtracking(&self, g: &ColouredGraph) -> Option<Morphism> {
        let cmap = colour_map(g, self.h).ok()?;
        self.backtrack(g, &cmap)
    }

    fn least(g: &ColouredGraph, cmap: &[Option<usize>], fast: &FastPath) -> Option<Morphism> {
        let n = g.len();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (v, c, w) in g.edges() {
            let hc = cmap[c]?;
            preds[w].push(v);
            out[v].push((hc, w));
        }
        let mut phi = vec![0usize; n];
        let mut queue: VecDeque<usize> = (0..n).collect();
        let mut queued = vec![true; n];
        while let Some(v) = queue.pop_front() {
            queued[v] = false;
            let mut need = phi[v];
            for &(hc, w) in &out[v] {
                need = need.max(fast.minsrc[hc][phi[w]]);
            }
            if need == usize::MAX {
                return None;
            }
            if need > phi[v] {
                phi[v] = need;
                for &u in &preds[v] {
                    if !queued[u] {
                        queued[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        debug_assert!(phi.iter().all(|&r| fast.rank[fast.asc[r]] == r));
        Some(Morphism {
            map: phi.into_iter().map(|r| fast.asc[r]).collect(),
        })
    }

    fn pred(&self) -> &Vec<Vec<FixedBitSet>> {
        self.pred.get_or_init(|| {
            let m = self.h.len();
            let mut pred = vec![vec![FixedBitSet::with_capacity(m); m]; self.h.colours().len()];
            for (u, c, t) in self.h.edges() {
                pred[c][t].insert(u);
            }
            pred
        })
    }

    fn backtrack(&self, g: &ColouredGraph, cmap: &[Option<usize>]) -> Option<Morphism> {
        let n = g.len();
        let m = self.h.len();
        let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut domains = vec![FixedBitSet::with_capacity(m); n];
        for d in &mut domains {
            d.insert_range(..);
        }
        for (v, c, w) in g.edges() {
            let hc = cmap[c]?;
            if v == w {
                let mut loops = FixedBitSet::with_capacity(m);
                loops.extend((0..m).filter(|&x| self.h.has_edge(x, hc, x)));
                domains[v].intersect_with(&loops);
            } else {
                out[v].push((hc, w));
                inc[w].push((hc, v));
            }
        }
        // most-connected vertices first
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(out[v].len() + inc[v].len()));
        let mut assign = vec![usize::MAX; n];
        if self.assign(0, &order, &out, &inc, domains, &mut assign) {
            Some(Morphism { map: assign })
        } else {
            None
        }
    }

    fn assign(
        &self,
        depth: usize,
        order: &[usize],
        out: &[Vec<(usize, usize)>],
        inc: &[Vec<(usize, usize)>],
        domains: Vec<FixedBitSet>,
        assign: &mut [usize],
    ) -> bool {
        let Some(&v) = order.get(depth) else {
            return true;
        };
        let pred = if inc[v].is_empty() {
            None
        } else {
            Some(self.pred())
        };
        'cand: for &x in &self.asc {
            if !domains[v].contains(x) {
                continue;
            }
            let mut next = domains.clone();
            for &(hc, w) in &out[v] {
                if assign[w] == usize::MAX {
                    next[w].intersect_with(self.h.succ(hc, x));
                    if next[w].is_clear() {
                        continue 'cand;
                    }
                }
            }
            for &(hc, u) in &inc[v] {
                if assign[u] == usize::MAX {
                    next[u].intersect_with(&pred.unwrap()[hc][x]);
                    if next[u].is_clear() {
                        continue 'cand;
                    }
                }
            }
            assign[v] = x;
            if self.assign(depth + 1, order, out, inc, next, assign) {
                return true;
            }
            assign[v] = usize::MAX;
        }
        false
    }
}

/// One-shot search; see [`MorphismSearcher`] to reuse the target.
pub fn morphism_search(g: &ColouredGraph, h: &OrderedGraph) -> Option<Morphism> {
    MorphismSearcher::new(h).search(g)
}
