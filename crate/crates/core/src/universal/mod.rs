//! Universal graphs: ⊤-augmentation, the signature graph for max-parity,
//! the power graph for min-lexicographic products, and the morphisms that
//! glue them.

mod power;
mod signature;

use fixedbitset::FixedBitSet;

use crate::error::Result;
use crate::graph::{nat_key, tensor, ColouredGraph, Order, OrderedGraph};

pub use power::{
    embed_product, power_graph, power_graph_size, sum_morphism, PowerGraph, PowerLevel,
    PowerVertex, TOP_LABEL,
};
pub use signature::{signature_coords, signature_graph, signature_size};

/// Adds a fresh vertex `T` above everything, with an edge of every colour to
/// every original vertex and no incoming edges. `T` is the last vertex.
pub fn add_top(u: &OrderedGraph) -> Result<OrderedGraph> {
    let n = u.len();
    let mut labels = u.labels().to_vec();
    labels.push(power::TOP_LABEL.to_string());
    let mut g = ColouredGraph::new(u.family().clone(), labels)?;
    for (v, c, w) in u.edges() {
        g.add_edge_id(v, c, w);
    }
    for c in 0..g.colours().len() {
        g.succ_mut(c, n).insert_range(0..n);
    }
    let order = match u.dense_key_ranks() {
        Some(r) => {
            let top = r.iter().max().map_or(0, |m| m + 1);
            Order::Keys(r.iter().chain([&top]).map(|&x| nat_key(&[x])).collect())
        }
        None => {
            let mut rel = u.geq_matrix();
            for row in &mut rel {
                row.grow(n + 1);
            }
            let mut top = FixedBitSet::with_capacity(n + 1);
            top.insert_range(..);
            rel.push(top);
            Order::Relation(rel)
        }
    };
    OrderedGraph::new(g, order)
}

/// `k` order-stacked copies of `u`: turns an almost universal graph into a
/// universal one for graphs with at most `k` vertices.
pub fn wrap_top(u: &OrderedGraph, k: usize) -> Result<OrderedGraph> {
    tensor(u, k)
}
