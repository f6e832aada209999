use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, OrderedGraph};
use crate::words::{Colour, ColourFamily};

/// Even positions `0, 2, …` up to and including `alpha` carrying a
/// coordinate.
pub fn signature_coords(alpha: u64) -> Vec<u64> {
    (0..=alpha).step_by(2).collect()
}

/// Vertex count `kappa^(number of coordinates)`, saturating.
pub fn signature_size(alpha: u64, kappa: usize) -> u128 {
    let m = signature_coords(alpha).len() as u32;
    (kappa as u128).checked_pow(m).unwrap_or(u128::MAX)
}

/// Compares the suffixes of two coordinate vectors from position `from`,
/// most significant (highest) coordinate first. Vectors are stored
/// low-to-high by coordinate position.
fn cmp_suffix(coords: &[u64], a: &[usize], b: &[usize], from: u64) -> Ordering {
    for i in (0..coords.len()).rev() {
        if coords[i] < from {
            break;
        }
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn suffix_nonzero(coords: &[u64], a: &[usize], from: u64) -> bool {
    coords.iter().zip(a).any(|(&p, &x)| p >= from && x > 0)
}

/// Signature graph for `MaxParity(alpha)` with counters below `kappa`.
///
/// Vertices are vectors of counters at the even positions `≤ alpha`,
/// ordered lexicographically with higher positions more significant.
/// Colour `λ < alpha`:
/// * even `λ`: `v -λ-> v'` iff `v_{≥λ} > v'_{≥λ}`;
/// * odd `λ`: iff `v_{≥λ+1}` is nonzero and `v_{≥λ+1} ≥ v'_{≥λ+1}`.
///
/// Vertex ids look like `v(0:1,2:0)`.
pub fn signature_graph(alpha: u64, kappa: usize) -> Result<OrderedGraph> {
    if kappa == 0 {
        return Err(Error::InvalidGraph("kappa must be at least 1".into()));
    }
    let coords = signature_coords(alpha);
    let m = coords.len();
    let n = usize::try_from(signature_size(alpha, kappa))
        .map_err(|_| Error::InvalidGraph("signature graph too large".into()))?;
    // vertex i: digits of i in base kappa, lowest position first
    let vectors: Vec<Vec<usize>> = (0..n)
        .map(|mut i| {
            (0..m)
                .map(|_| {
                    let d = i % kappa;
                    i /= kappa;
                    d
                })
                .collect()
        })
        .collect();
    let labels = vectors
        .iter()
        .map(|v| {
            let parts: Vec<String> = coords
                .iter()
                .zip(v)
                .map(|(p, x)| format!("{p}:{x}"))
                .collect();
            format!("v({})", parts.join(","))
        })
        .collect();
    let family = ColourFamily::singletons(0..alpha);
    let mut g = ColouredGraph::new(family, labels)?;
    for lambda in 0..alpha {
        let c = g.colour_id(&Colour::of(lambda)).unwrap();
        for (s, a) in vectors.iter().enumerate() {
            for (t, b) in vectors.iter().enumerate() {
                let edge = if lambda % 2 == 0 {
                    cmp_suffix(&coords, a, b, lambda) == Ordering::Greater
                } else {
                    suffix_nonzero(&coords, a, lambda + 1)
                        && cmp_suffix(&coords, a, b, lambda + 1) != Ordering::Less
                };
                if edge {
                    g.add_edge_id(s, c, t);
                }
            }
        }
    }
    let keys: Vec<Vec<usize>> = vectors
        .iter()
        .map(|v| v.iter().rev().copied().collect())
        .collect();
    Ok(OrderedGraph::with_nat_keys(g, &keys))
}
