use std::cmp::Ordering;
use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::add_top;
use crate::error::{Error, Result};
use crate::graph::{
    check_monotone, check_partial_order, directed_sum, lex_product, morphism_check, nat_key,
    ColouredGraph, Morphism, Order, OrderedGraph,
};
use crate::ordinal::Ordinal;
use crate::words::ColourFamily;

pub const TOP_LABEL: &str = "T";

/// One factor of a min-lexicographic product: a monotone, antisymmetric
/// graph over the single colour class at `index`.
#[derive(Clone, Debug)]
pub struct PowerLevel {
    pub index: Ordinal,
    pub base: OrderedGraph,
}

impl PowerLevel {
    pub fn new(base: OrderedGraph) -> Result<Self> {
        if base.family().num_classes() != 1 {
            return Err(Error::InvalidGraph(
                "a power-graph base must use exactly one colour class".into(),
            ));
        }
        let index = base.family().indices().next().unwrap().clone();
        Ok(PowerLevel { index, base })
    }
}

/// `f` over positions `0..k` (with `f(k) = 0` implied) and `S`, indices into
/// the ⊤-augmented bases (the last index of each is ⊤).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerVertex {
    pub f: Vec<usize>,
    pub s: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PowerGraph {
    pub graph: OrderedGraph,
    pub vertices: Vec<PowerVertex>,
    pub beta: usize,
    pub levels: Vec<PowerLevel>,
    /// ⊤-augmented bases.
    pub tops: Vec<OrderedGraph>,
    lookup: HashMap<PowerVertex, usize>,
}

impl PowerGraph {
    pub fn vertex_of(&self, v: &PowerVertex) -> Option<usize> {
        self.lookup.get(v).copied()
    }

    pub fn is_top(&self, level: usize, s: usize) -> bool {
        s + 1 == self.tops[level].len()
    }

    /// Position `λ` lies in `0..k`; `f(k)` reads as 0.
    fn f_at(&self, v: &PowerVertex, pos: usize) -> usize {
        v.f.get(pos).copied().unwrap_or(0)
    }

    /// Vertex condition: `S(λ) ≠ ⊤` implies `f(λ) > f(λ+1)`, plus `f`
    /// non-increasing with values below β.
    pub fn vertex_ok(&self, v: &PowerVertex) -> bool {
        let k = self.levels.len();
        v.f.len() == k
            && v.s.len() == k
            && v.f.iter().all(|&x| x < self.beta)
            && v.f.windows(2).all(|w| w[0] >= w[1])
            && (0..k).all(|i| {
                v.s[i] < self.tops[i].len()
                    && (self.is_top(i, v.s[i]) || v.f[i] > self.f_at(v, i + 1))
            })
    }

    /// Partial lexicographic comparison of `ext_λ` (f up to and including
    /// `λ`, S strictly below `λ`); `None` when incomparable.
    pub fn cmp_ext(&self, a: &PowerVertex, b: &PowerVertex, level: usize) -> Option<Ordering> {
        cmp_interleaved(&self.tops, a, b, level, false)
    }

    /// Full vertex order.
    pub fn cmp_vertex(&self, a: &PowerVertex, b: &PowerVertex) -> Option<Ordering> {
        cmp_interleaved(&self.tops, a, b, self.levels.len(), true)
    }

    /// Edge property: every edge on a level-`λ` colour has
    /// `ext_λ(src) ≥ ext_λ(dst)`. Returns the first offending edge.
    pub fn check_edge_property(&self) -> std::result::Result<(), String> {
        let level_of = self.colour_levels();
        for (s, c, t) in self.graph.edges() {
            let lvl = level_of[c];
            match self.cmp_ext(&self.vertices[s], &self.vertices[t], lvl) {
                Some(Ordering::Greater | Ordering::Equal) => {}
                _ => {
                    return Err(format!(
                        "edge {} -{}-> {} raises the level-{lvl} prefix",
                        self.graph.label(s),
                        self.graph.colour(c),
                        self.graph.label(t)
                    ))
                }
            }
        }
        Ok(())
    }

    pub fn check_vertex_condition(&self) -> std::result::Result<(), String> {
        match self.vertices.iter().position(|v| !self.vertex_ok(v)) {
            None => Ok(()),
            Some(i) => Err(format!(
                "vertex {} violates the vertex condition",
                self.graph.label(i)
            )),
        }
    }

    /// Level of each colour id of the graph.
    pub fn colour_levels(&self) -> Vec<usize> {
        self.graph
            .colours()
            .iter()
            .map(|c| self.levels.iter().position(|l| l.index == c.index).unwrap())
            .collect()
    }
}

fn cmp_interleaved(
    tops: &[OrderedGraph],
    a: &PowerVertex,
    b: &PowerVertex,
    upto: usize,
    full: bool,
) -> Option<Ordering> {
    for i in 0..=upto.min(a.f.len()) {
        let fa = a.f.get(i).copied().unwrap_or(0);
        let fb = b.f.get(i).copied().unwrap_or(0);
        match fa.cmp(&fb) {
            Ordering::Equal => {}
            o => return Some(o),
        }
        if i == upto && !full || i >= a.s.len() {
            break;
        }
        let (sa, sb) = (a.s[i], b.s[i]);
        if sa != sb {
            let t = &tops[i];
            return match (t.geq(sa, sb), t.geq(sb, sa)) {
                (true, false) => Some(Ordering::Greater),
                (false, true) => Some(Ordering::Less),
                _ => None,
            };
        }
    }
    Some(Ordering::Equal)
}

/// Number of vertices of the power graph, without building it.
pub fn power_graph_size(base_sizes: &[usize], beta: usize) -> u128 {
    // ways[x]: fillings of positions i.. given f(i) = x, walking down from
    // the top position; f(k) = 0
    let Some(&last) = base_sizes.last() else {
        return 1;
    };
    let choices = |size: usize, x: usize, y: usize| if x > y { 1 + size as u128 } else { 1 };
    let mut ways: Vec<u128> = (0..beta).map(|x| choices(last, x, 0)).collect();
    for &size in base_sizes.iter().rev().skip(1) {
        ways = (0..beta)
            .map(|x| {
                (0..=x).fold(0u128, |acc, y| {
                    acc.saturating_add(ways[y].saturating_mul(choices(size, x, y)))
                })
            })
            .collect();
    }
    ways.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

/// Power graph `U^β` for the min-lexicographic product of the levels'
/// objectives. Levels must be listed by increasing colour index.
///
/// Vertices `(f, S)`: `f` non-increasing below β with `f(k) = 0`, `S(λ)` a
/// vertex of the ⊤-augmented base, and `S(λ) ≠ ⊤ ⇒ f(λ) > f(λ+1)`. The
/// order is lexicographic over `f(0), S(0), f(1), S(1), …`, lower positions
/// first. An edge on a level-`λ` colour exists iff `ext_λ(src) > ext_λ(dst)`,
/// or they are equal and `S(λ) -c-> S'(λ)` in the augmented base.
///
/// Vertex ids look like `[2.1|o|T]`: the values of `f`, then each `S(λ)`.
pub fn power_graph(levels: Vec<PowerLevel>, beta: usize) -> Result<PowerGraph> {
    if beta == 0 {
        return Err(Error::InvalidGraph("beta must be at least 1".into()));
    }
    for w in levels.windows(2) {
        if w[0].index >= w[1].index {
            return Err(Error::InvalidGraph(
                "power-graph levels must have increasing colour indices".into(),
            ));
        }
    }
    let mut tops = Vec::with_capacity(levels.len());
    for l in &levels {
        if !check_monotone(&l.base).ok {
            return Err(Error::InvalidGraph(format!(
                "base at index {} is not monotone",
                l.index
            )));
        }
        if !check_partial_order(&l.base).antisymmetric {
            return Err(Error::InvalidGraph(format!(
                "base at index {} is not antisymmetric",
                l.index
            )));
        }
        tops.push(add_top(&l.base)?);
    }
    let k = levels.len();

    let mut vertices = Vec::new();
    let mut f = vec![0usize; k];
    enumerate_f(0, beta, &mut f, &mut |f| {
        let mut s = vec![0usize; k];
        enumerate_s(0, f, &tops, &mut s, &mut |s| {
            vertices.push(PowerVertex {
                f: f.to_vec(),
                s: s.to_vec(),
            })
        });
    });
    vertices.sort_by(|a, b| {
        cmp_interleaved(&tops, a, b, k, true)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.cmp(b))
    });
    let n = vertices.len();

    let labels = vertices
        .iter()
        .map(|v| {
            let f: Vec<String> = v.f.iter().map(usize::to_string).collect();
            let s: Vec<&str> =
                v.s.iter()
                    .enumerate()
                    .map(|(i, &x)| tops[i].label(x))
                    .collect();
            format!("[{}|{}]", f.join("."), s.join("|"))
        })
        .collect();
    let family = levels
        .iter()
        .fold(ColourFamily::new(), |acc, l| acc.union(l.base.family()));
    let mut g = ColouredGraph::new(family, labels)?;
    let colour_level: Vec<(usize, usize)> = g
        .colours()
        .iter()
        .map(|c| {
            let lvl = levels.iter().position(|l| l.index == c.index).unwrap();
            (lvl, tops[lvl].colour_id(c).unwrap())
        })
        .collect();
    for (cid, &(lvl, base_c)) in colour_level.iter().enumerate() {
        for (si, s) in vertices.iter().enumerate() {
            for (ti, t) in vertices.iter().enumerate() {
                let edge = match cmp_interleaved(&tops, s, t, lvl, false) {
                    Some(Ordering::Greater) => true,
                    Some(Ordering::Equal) => tops[lvl].has_edge(s.s[lvl], base_c, t.s[lvl]),
                    _ => false,
                };
                if edge {
                    g.add_edge_id(si, cid, ti);
                }
            }
        }
    }

    let order = if tops.iter().all(|t| matches!(t.order, Order::Keys(_))) {
        let ranks: Vec<Vec<usize>> = tops.iter().map(|t| t.dense_key_ranks().unwrap()).collect();
        Order::Keys(
            vertices
                .iter()
                .map(|v| {
                    let mut key = Vec::with_capacity(2 * k);
                    for i in 0..k {
                        key.push(v.f[i]);
                        key.push(ranks[i][v.s[i]]);
                    }
                    nat_key(&key)
                })
                .collect(),
        )
    } else {
        let mut rel = vec![FixedBitSet::with_capacity(n); n];
        for (a, va) in vertices.iter().enumerate() {
            for (b, vb) in vertices.iter().enumerate() {
                if matches!(
                    cmp_interleaved(&tops, va, vb, k, true),
                    Some(Ordering::Greater | Ordering::Equal)
                ) {
                    rel[a].insert(b);
                }
            }
        }
        Order::Relation(rel)
    };
    let lookup = vertices.iter().cloned().zip(0..).collect();
    Ok(PowerGraph {
        graph: OrderedGraph::new(g, order)?,
        vertices,
        beta,
        levels,
        tops,
        lookup,
    })
}

fn enumerate_f(pos: usize, beta: usize, f: &mut Vec<usize>, out: &mut impl FnMut(&[usize])) {
    if pos == f.len() {
        out(f);
        return;
    }
    let hi = if pos == 0 { beta } else { f[pos - 1] + 1 };
    for x in 0..hi {
        f[pos] = x;
        enumerate_f(pos + 1, beta, f, out);
    }
}

fn enumerate_s(
    pos: usize,
    f: &[usize],
    tops: &[OrderedGraph],
    s: &mut Vec<usize>,
    out: &mut impl FnMut(&[usize]),
) {
    if pos == f.len() {
        out(s);
        return;
    }
    let top = tops[pos].len() - 1;
    let next = f.get(pos + 1).copied().unwrap_or(0);
    let choices = if f[pos] > next { 0..=top } else { top..=top };
    for x in choices {
        s[pos] = x;
        enumerate_s(pos + 1, f, tops, s, out);
    }
}

fn same_levels(a: &[PowerLevel], b: &[PowerLevel]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.index == y.index
                && x.base.labels() == y.base.labels()
                && x.base.edges().eq(y.base.edges())
        })
}

/// The embedding of `left ⋉ right` into `whole` (bound `β + β'`): below
/// the split `g = β' + f`, `R = S`; from the split on, `g = f'`, `R = S'`.
///
/// Returns the product graph (built with [`lex_product`], the higher-index
/// part as the lower factor since the lower indices dominate a
/// min-lexicographic product) and the map. Vertex `(r, l)` of the product has
/// index `l * |right| + r`.
pub fn embed_product(
    left: &PowerGraph,
    right: &PowerGraph,
    whole: &PowerGraph,
) -> Result<(OrderedGraph, Morphism)> {
    let split = left.levels.len();
    let mut joined = left.levels.clone();
    joined.extend(right.levels.iter().cloned());
    if !same_levels(&joined, &whole.levels) {
        return Err(Error::InvalidMorphism(
            "the two halves do not split the whole family".into(),
        ));
    }
    if whole.beta != left.beta + right.beta {
        return Err(Error::InvalidMorphism(format!(
            "whole bound {} is not {} + {}",
            whole.beta, left.beta, right.beta
        )));
    }
    let product = lex_product(&right.graph, &left.graph)?;
    let nr = right.vertices.len();
    let mut map = Vec::with_capacity(product.len());
    for (l, vl) in left.vertices.iter().enumerate() {
        for (r, vr) in right.vertices.iter().enumerate() {
            debug_assert_eq!(map.len(), l * nr + r);
            let mut f: Vec<usize> = vl.f.iter().map(|x| x + right.beta).collect();
            f.extend(&vr.f);
            let mut s = vl.s.clone();
            s.extend(&vr.s);
            let image = PowerVertex { f, s };
            let idx = whole.vertex_of(&image).ok_or_else(|| {
                Error::InvalidMorphism(format!("image {image:?} is not a vertex"))
            })?;
            debug_assert!(split == vl.f.len());
            map.push(idx);
        }
    }
    Ok((product, Morphism { map }))
}

/// Given morphisms `φ_μ : G_μ → U^{β_μ}` (all over the same levels), the
/// morphism from the directed sum of the `G_μ` into `whole` = `U^{Σβ_μ}`
/// that adds `Σ_{μ'<μ} β_μ'` to every `f` value of part `μ`.
pub fn sum_morphism(
    parts: &[(OrderedGraph, Morphism, &PowerGraph)],
    whole: &PowerGraph,
) -> Result<(OrderedGraph, Morphism)> {
    let mut offset = 0;
    let mut map = Vec::new();
    for (mu, (g, phi, target)) in parts.iter().enumerate() {
        if !same_levels(&target.levels, &whole.levels) {
            return Err(Error::InvalidMorphism(format!(
                "part {mu} maps into a power graph over other levels"
            )));
        }
        if let Some(v) = morphism_check(g, &target.graph, phi)? {
            return Err(Error::InvalidMorphism(format!(
                "part {mu}: edge {} -{}-> {} is not preserved",
                v.src, v.colour, v.dst
            )));
        }
        for &x in &phi.map {
            let pv = &target.vertices[x];
            let image = PowerVertex {
                f: pv.f.iter().map(|y| y + offset).collect(),
                s: pv.s.clone(),
            };
            map.push(whole.vertex_of(&image).ok_or_else(|| {
                Error::InvalidMorphism(format!("image {image:?} is not a vertex"))
            })?);
        }
        offset += target.beta;
    }
    if offset != whole.beta {
        return Err(Error::InvalidMorphism(format!(
            "bounds sum to {offset}, target bound is {}",
            whole.beta
        )));
    }
    let graphs: Vec<OrderedGraph> = parts.iter().map(|(g, _, _)| g.clone()).collect();
    Ok((directed_sum(&graphs)?, Morphism { map }))
}
