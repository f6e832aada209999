use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::OrderedGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `u ≥ v` and `v -c-> w` but not `u -c-> w`.
    Left,
    /// `v -c-> w` and `w ≥ w'` but not `v -c-> w'`.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneViolation {
    pub side: Side,
    /// Vertex ids: for `Left`, `(u, v, w)`; for `Right`, `(v, w, w')`.
    pub vertices: [String; 3],
    pub colour: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MonotoneReport {
    pub ok: bool,
    pub violations: Vec<MonotoneViolation>,
}

const MAX_REPORTED: usize = 16;

/// Checks left- and right-monotonicity. Linear orders take a fast path
/// (successor sets must be down-sets growing with the rank); other orders
/// are checked triple by triple.
pub fn check_monotone(g: &OrderedGraph) -> MonotoneReport {
    let mut violations = Vec::new();
    let mut report = |side, a: usize, b: usize, d: usize, c: usize| {
        if violations.len() < MAX_REPORTED {
            violations.push(MonotoneViolation {
                side,
                vertices: [a, b, d].map(|x| g.label(x).to_string()),
                colour: g.colour(c).to_string(),
            });
        }
    };
    let ncol = g.colours().len();
    let n = g.len();
    let mut failed = false;
    if let Some(rank) = g.linear_ranks() {
        let mut asc = vec![0; n];
        for (v, &r) in rank.iter().enumerate() {
            asc[r] = v;
        }
        for c in 0..ncol {
            for r in 0..n {
                let v = asc[r];
                let row = g.succ(c, v);
                if r + 1 < n {
                    let u = asc[r + 1];
                    if let Some(w) = row.difference(g.succ(c, u)).next() {
                        failed = true;
                        report(Side::Left, u, v, w, c);
                    }
                }
                // a down-set in rank order is exactly a prefix
                if let Some(top) = row.ones().map(|w| rank[w]).max() {
                    if row.count_ones(..) != top + 1 {
                        failed = true;
                        let w = asc[top];
                        let lower = (0..top)
                            .map(|i| asc[i])
                            .find(|&x| !row.contains(x))
                            .unwrap();
                        report(Side::Right, v, w, lower, c);
                    }
                }
            }
        }
    } else {
        let geq = g.geq_matrix();
        for c in 0..ncol {
            for v in 0..n {
                let row = g.succ(c, v);
                for u in 0..n {
                    if u != v && geq[u].contains(v) {
                        if let Some(w) = row.difference(g.succ(c, u)).next() {
                            failed = true;
                            report(Side::Left, u, v, w, c);
                        }
                    }
                }
                for w in row.ones() {
                    if let Some(w2) = geq[w].difference(row).next() {
                        failed = true;
                        report(Side::Right, v, w, w2, c);
                    }
                }
            }
        }
    }
    MonotoneReport {
        ok: !failed,
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub reflexive: bool,
    pub antisymmetric: bool,
    pub transitive: bool,
    pub total: bool,
    pub well_founded: bool,
    pub well_order: bool,
    pub well_partial_order: bool,
    /// Largest antichain; only meaningful for partial orders.
    pub max_antichain: usize,
}

impl OrderReport {
    pub fn is_partial_order(&self) -> bool {
        self.reflexive && self.antisymmetric && self.transitive
    }
}

pub fn check_partial_order(g: &OrderedGraph) -> OrderReport {
    let n = g.len();
    let geq = g.geq_matrix();
    let reflexive = (0..n).all(|v| geq[v].contains(v));
    let antisymmetric = (0..n).all(|u| geq[u].ones().all(|v| u == v || !geq[v].contains(u)));
    let transitive = (0..n).all(|u| geq[u].ones().all(|v| geq[v].is_subset(&geq[u])));
    let total = (0..n).all(|u| (0..n).all(|v| geq[u].contains(v) || geq[v].contains(u)));
    // strict part acyclic; always true on finite preorders, checked anyway
    let strict: Vec<FixedBitSet> = (0..n)
        .map(|u| {
            let mut row = FixedBitSet::with_capacity(n);
            for v in geq[u].ones() {
                if !geq[v].contains(u) {
                    row.insert(v);
                }
            }
            row
        })
        .collect();
    let well_founded = acyclic(&strict);
    let partial = reflexive && antisymmetric && transitive;
    OrderReport {
        reflexive,
        antisymmetric,
        transitive,
        total,
        well_founded,
        well_order: partial && total && well_founded,
        well_partial_order: partial && well_founded,
        max_antichain: n - max_matching(&strict),
    }
}

fn acyclic(rel: &[FixedBitSet]) -> bool {
    // Kahn's algorithm on the strict relation
    let n = rel.len();
    let mut indeg = vec![0usize; n];
    for row in rel {
        for v in row.ones() {
            indeg[v] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for v in rel[u].ones() {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                stack.push(v);
            }
        }
    }
    seen == n
}

/// Maximum bipartite matching on `u -> v` pairs (Kuhn). For a strict
/// partial order, `n - matching` is the width (Dilworth).
fn max_matching(rel: &[FixedBitSet]) -> usize {
    fn augment(u: usize, rel: &[FixedBitSet], seen: &mut FixedBitSet, mate: &mut [usize]) -> bool {
        for v in rel[u].ones() {
            if !seen.put(v) && (mate[v] == usize::MAX || augment(mate[v], rel, seen, mate)) {
                mate[v] = u;
                return true;
            }
        }
        false
    }
    let n = rel.len();
    let mut mate = vec![usize::MAX; n];
    let mut size = 0;
    for u in 0..n {
        let mut seen = FixedBitSet::with_capacity(n);
        if augment(u, rel, &mut seen, &mut mate) {
            size += 1;
        }
    }
    size
}

/// Whether two linearly ordered graphs become identical (same vertex count,
/// same colours, same edges) once vertices are matched by rank.
pub fn order_isomorphic_identical(g: &OrderedGraph, h: &OrderedGraph) -> Result<(), String> {
    if g.len() != h.len() {
        return Err(format!("vertex counts differ: {} vs {}", g.len(), h.len()));
    }
    if g.colours() != h.colours() {
        return Err("colour families differ".into());
    }
    let (Some(rg), Some(rh)) = (g.linear_ranks(), h.linear_ranks()) else {
        return Err("both orders must be linear".into());
    };
    let mut by_rank = vec![0; h.len()];
    for (v, &r) in rh.iter().enumerate() {
        by_rank[r] = v;
    }
    let to_h = |v: usize| by_rank[rg[v]];
    for c in 0..g.colours().len() {
        for v in 0..g.len() {
            let mut mapped = FixedBitSet::with_capacity(h.len());
            mapped.extend(g.succ(c, v).ones().map(to_h));
            if &mapped != h.succ(c, to_h(v)) {
                return Err(format!(
                    "{}-edges out of {} / {} differ",
                    g.colour(c),
                    g.label(v),
                    h.label(to_h(v))
                ));
            }
        }
    }
    Ok(())
}
