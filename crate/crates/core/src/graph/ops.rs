use fixedbitset::FixedBitSet;

use super::{nat_key, ColouredGraph, Order, OrderedGraph};
use crate::error::{Error, Result};
use crate::words::ColourFamily;

/// One vertex with a loop of every colour in `family`.
pub fn loop_graph(family: &ColourFamily) -> OrderedGraph {
    let mut g = ColouredGraph::new(family.clone(), vec!["o".into()]).unwrap();
    for c in 0..g.colours().len() {
        g.add_edge_id(0, c, 0);
    }
    OrderedGraph::with_nat_keys(g, &[vec![0]])
}

/// The strict order on `0..k` as a graph: `i -c-> j` for every colour and
/// every `i > j`.
pub fn chain_graph(family: &ColourFamily, k: usize) -> Result<OrderedGraph> {
    if k == 0 {
        return Err(Error::InvalidGraph(
            "a chain needs at least one vertex".into(),
        ));
    }
    let mut g = ColouredGraph::with_size(family.clone(), k);
    for c in 0..g.colours().len() {
        for i in 0..k {
            g.succ_mut(c, i).insert_range(0..i);
        }
    }
    let keys: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
    Ok(OrderedGraph::with_nat_keys(g, &keys))
}

/// Disjoint union with every-colour edges from each part to all earlier
/// parts; later parts sit above earlier ones.
pub fn directed_sum(parts: &[OrderedGraph]) -> Result<OrderedGraph> {
    let family = parts
        .iter()
        .fold(ColourFamily::new(), |f, p| f.union(p.family()));
    let mut labels = Vec::new();
    let mut offsets = Vec::with_capacity(parts.len());
    for (mu, p) in parts.iter().enumerate() {
        offsets.push(labels.len());
        labels.extend(p.labels().iter().map(|l| format!("{mu}/{l}")));
    }
    let n = labels.len();
    let mut g = ColouredGraph::new(family, labels)?;
    let ncol = g.colours().len();
    for (mu, p) in parts.iter().enumerate() {
        let off = offsets[mu];
        let cmap: Vec<usize> = p
            .colours()
            .iter()
            .map(|c| g.colour_id(c).unwrap())
            .collect();
        for v in 0..p.len() {
            for (pc, &gc) in cmap.iter().enumerate() {
                for w in p.succ(pc, v).ones() {
                    g.add_edge_id(off + v, gc, off + w);
                }
            }
            for c in 0..ncol {
                g.succ_mut(c, off + v).insert_range(0..off);
            }
        }
    }
    let all_keys = parts.iter().all(|p| matches!(p.order, Order::Keys(_)));
    let order = if all_keys {
        let mut keys = Vec::with_capacity(n);
        for (mu, p) in parts.iter().enumerate() {
            let Order::Keys(k) = &p.order else {
                unreachable!()
            };
            for key in k {
                let mut full = nat_key(&[mu]);
                full.extend(key.iter().cloned());
                keys.push(full);
            }
        }
        Order::Keys(keys)
    } else {
        let mut rel = vec![FixedBitSet::with_capacity(n); n];
        for (mu, p) in parts.iter().enumerate() {
            let off = offsets[mu];
            let m = p.geq_matrix();
            for v in 0..p.len() {
                rel[off + v].insert_range(0..off);
                for w in m[v].ones() {
                    rel[off + v].insert(off + w);
                }
            }
        }
        Order::Relation(rel)
    };
    OrderedGraph::new(g, order)
}

/// Directed sum of `k` copies of `g`.
pub fn tensor(g: &OrderedGraph, k: usize) -> Result<OrderedGraph> {
    if k == 0 {
        return Err(Error::InvalidGraph("tensor needs at least one copy".into()));
    }
    directed_sum(&vec![g.clone(); k])
}

/// Lexicographic product with `g1` (the higher colours) dominant.
///
/// Vertex `(v0, v1)` has index `v1 * |g0| + v0` and id `(v0,v1)`. A colour of
/// `g1` moves the second coordinate along a `g1` edge and resets the first
/// coordinate freely; a colour of `g0` either strictly lowers the second
/// coordinate (first arbitrary) or keeps it and follows a `g0` edge.
pub fn lex_product(g0: &OrderedGraph, g1: &OrderedGraph) -> Result<OrderedGraph> {
    if let Some(i) = g0
        .family()
        .indices()
        .find(|i| g1.family().class(i).is_some())
    {
        return Err(Error::OverlappingColours(i.clone()));
    }
    let (n0, n1) = (g0.len(), g1.len());
    let labels = (0..n1)
        .flat_map(|v1| (0..n0).map(move |v0| (v0, v1)))
        .map(|(v0, v1)| format!("({},{})", g0.label(v0), g1.label(v1)))
        .collect();
    let mut g = ColouredGraph::new(g0.family().union(g1.family()), labels)?;
    let idx = |v0: usize, v1: usize| v1 * n0 + v0;
    let block = |v1: usize| v1 * n0..(v1 + 1) * n0;

    for c1 in 0..g1.colours().len() {
        let c = g.colour_id(g1.colour(c1)).unwrap();
        for v1 in 0..n1 {
            for w1 in g1.succ(c1, v1).ones() {
                for v0 in 0..n0 {
                    g.succ_mut(c, idx(v0, v1)).insert_range(block(w1));
                }
            }
        }
    }
    let below: Vec<Vec<usize>> = (0..n1)
        .map(|v1| (0..n1).filter(|&w1| g1.gt(v1, w1)).collect())
        .collect();
    for c0 in 0..g0.colours().len() {
        let c = g.colour_id(g0.colour(c0)).unwrap();
        for v1 in 0..n1 {
            for v0 in 0..n0 {
                let row = g.succ_mut(c, idx(v0, v1));
                for &w1 in &below[v1] {
                    row.insert_range(block(w1));
                }
                for w0 in g0.succ(c0, v0).ones() {
                    row.insert(idx(w0, v1));
                }
            }
        }
    }

    let order = match (g0.dense_key_ranks(), g1.dense_key_ranks()) {
        (Some(r0), Some(r1)) => Order::Keys(
            (0..n1)
                .flat_map(|v1| (0..n0).map(move |v0| (v0, v1)))
                .map(|(v0, v1)| nat_key(&[r1[v1], r0[v0]]))
                .collect(),
        ),
        _ => {
            let n = n0 * n1;
            let m0 = g0.geq_matrix();
            let mut rel = vec![FixedBitSet::with_capacity(n); n];
            for v1 in 0..n1 {
                for v0 in 0..n0 {
                    let row = &mut rel[idx(v0, v1)];
                    for &w1 in &below[v1] {
                        row.insert_range(block(w1));
                    }
                    for w0 in m0[v0].ones() {
                        row.insert(idx(w0, v1));
                    }
                }
            }
            Order::Relation(rel)
        }
    };
    OrderedGraph::new(g, order)
}
