//! Games on coloured graphs, solved for Eve by lifting a progress measure
//! into a monotone, totally ordered universal graph.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::text::parse_raw;
use crate::graph::{
    chain_graph, check_monotone, lex_product, loop_graph, nat_key, tensor, ColouredGraph, Order,
    OrderedGraph,
};
use crate::objective::{Atom, AtomProduct, ObjectiveExpr, ProductKind};
use crate::ordinal::Ordinal;
use crate::universal::{power_graph, power_graph_size, signature_graph, wrap_top, PowerLevel};
use crate::verify::{find_violation, violating_sources, LabelledEdge};
use crate::words::{Colour, ColourFamily};

/// Reserved colour token for neutral edges.
pub const EPSILON: &str = "eps";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Eve,
    Adam,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameEdge {
    pub src: usize,
    /// `None` is ε.
    pub colour: Option<Colour>,
    pub dst: usize,
}

#[derive(Clone, Debug)]
pub struct Game {
    labels: Vec<String>,
    owner: Vec<Player>,
    edges: Vec<GameEdge>,
    out: Vec<Vec<usize>>,
    family: ColourFamily,
    objective: ObjectiveExpr,
}

impl Game {
    /// Edges keep their given order, which is also their id.
    pub fn new(
        labels: Vec<String>,
        owner: Vec<Player>,
        edges: Vec<GameEdge>,
        objective: ObjectiveExpr,
    ) -> Result<Game> {
        let n = labels.len();
        if owner.len() != n {
            return Err(Error::InvalidGame("one owner per vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let mut out = vec![Vec::new(); n];
        let mut family = ColourFamily::new();
        for (i, e) in edges.iter().enumerate() {
            if e.src >= n || e.dst >= n {
                return Err(Error::InvalidGame(format!(
                    "edge {i} leaves the vertex range"
                )));
            }
            if let Some(c) = &e.colour {
                if !objective.accepts_colour(c) {
                    return Err(Error::ColourOutsideFamily(c.clone()));
                }
                family.insert(c);
            }
            out[e.src].push(i);
        }
        if let Some(v) = out.iter().position(Vec::is_empty) {
            return Err(Error::InvalidGame(format!(
                "vertex {} has no outgoing edge",
                labels[v]
            )));
        }
        Ok(Game {
            labels,
            owner,
            edges,
            out,
            family,
            objective,
        })
    }

    /// Graph format plus `owner <id> eve|adam` lines; `eps` is the neutral
    /// colour. Every vertex needs an owner.
    pub fn parse(text: &str, objective: ObjectiveExpr) -> Result<Game> {
        let raw = parse_raw(text, &["owner"])?;
        if !raw.orders.is_empty() || raw.vertices.iter().any(|(_, k)| k.is_some()) {
            return Err(Error::parse("games carry no vertex order"));
        }
        let labels: Vec<String> = raw.vertices.iter().map(|(id, _)| id.clone()).collect();
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let vertex = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))
        };
        let mut owner: Vec<Option<Player>> = vec![None; labels.len()];
        for (line, words) in &raw.extra {
            let [_, id, who] = words.as_slice() else {
                return Err(Error::parse(format!(
                    "line {line}: expected `owner <id> eve|adam`"
                )));
            };
            let p = match who.as_str() {
                "eve" => Player::Eve,
                "adam" => Player::Adam,
                _ => return Err(Error::parse(format!("line {line}: unknown player `{who}`"))),
            };
            owner[vertex(id)?] = Some(p);
        }
        let owner = owner
            .into_iter()
            .enumerate()
            .map(|(v, p)| {
                p.ok_or_else(|| Error::parse(format!("vertex {} has no owner", labels[v])))
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = raw
            .edges
            .iter()
            .map(|(s, c, d)| {
                Ok(GameEdge {
                    src: vertex(s)?,
                    colour: if c == EPSILON { None } else { Some(c.parse()?) },
                    dst: vertex(d)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Game::new(labels, owner, edges, objective)
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

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn edges(&self) -> &[GameEdge] {
        &self.edges
    }

    /// Outgoing edge ids of `v`.
    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Colours used on edges (ε excluded).
    pub fn family(&self) -> &ColourFamily {
        &self.family
    }

    pub fn objective(&self) -> &ObjectiveExpr {
        &self.objective
    }

    fn labelled_edges(&self) -> Vec<LabelledEdge> {
        self.edges
            .iter()
            .map(|e| LabelledEdge {
                src: e.src,
                colour: e.colour.clone(),
                dst: e.dst,
            })
            .collect()
    }

    fn atom_product(&self) -> Result<AtomProduct> {
        let indices: BTreeSet<Ordinal> = self.family.indices().cloned().collect();
        self.objective.atom_product(&indices)
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for v in 0..self.len() {
            writeln!(out, "vertex {}", self.labels[v])?;
        }
        for v in 0..self.len() {
            let who = match self.owner[v] {
                Player::Eve => "eve",
                Player::Adam => "adam",
            };
            writeln!(out, "owner {} {who}", self.labels[v])?;
        }
        for e in &self.edges {
            let c = e
                .colour
                .as_ref()
                .map_or(EPSILON.to_string(), Colour::to_string);
            writeln!(
                out,
                "edge {} {c} {}",
                self.labels[e.src], self.labels[e.dst]
            )?;
        }
        f.write_str(&out)
    }
}

/// A positional strategy: one outgoing edge id per Eve vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub choice: Vec<Option<usize>>,
}

impl Strategy {
    fn check(&self, game: &Game) -> Result<()> {
        if self.choice.len() != game.len() {
            return Err(Error::InvalidGame("strategy has the wrong length".into()));
        }
        for v in 0..game.len() {
            match (game.owner(v), self.choice[v]) {
                (Player::Eve, Some(e)) if game.out(v).contains(&e) => {}
                (Player::Adam, None) => {}
                _ => {
                    return Err(Error::InvalidGame(format!(
                        "strategy is not a choice of outgoing edge at {}",
                        game.label(v)
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Values are vertices of the universal graph; `None` is ⊤.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressMeasure {
    pub rho: Vec<Option<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub winning: Vec<bool>,
    pub strategy: Strategy,
    pub measure: ProgressMeasure,
}

impl Solution {
    pub fn winning_labels<'a>(&self, game: &'a Game) -> Vec<&'a str> {
        (0..game.len())
            .filter(|&v| self.winning[v])
            .map(|v| game.label(v))
            .collect()
    }
}

/// One lift, in rank space (rank `m` is ⊤ for a universal graph with `m`
/// vertices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Lift {
    pub vertex: usize,
    pub from: usize,
    pub to: usize,
}

/// A universal graph prepared for lifting: its vertices by rank, and for
/// each colour and target rank the least source rank with such an edge.
#[derive(Clone, Debug)]
pub struct LiftingTable {
    by_rank: Vec<usize>,
    graph: ColouredGraph,
    min_source: Vec<Vec<usize>>,
}

impl LiftingTable {
    pub fn new(u: &OrderedGraph) -> Result<LiftingTable> {
        let ranks = u.linear_ranks().ok_or_else(|| {
            Error::UnsuitableUniversal("the universal graph must be totally ordered".into())
        })?;
        if !check_monotone(u).ok {
            return Err(Error::UnsuitableUniversal(
                "the universal graph must be monotone".into(),
            ));
        }
        let m = u.len();
        let mut by_rank = vec![0; m];
        for (v, &r) in ranks.iter().enumerate() {
            by_rank[r] = v;
        }
        let min_source = (0..u.colours().len())
            .map(|c| {
                let mut best = vec![m; m];
                for r in (0..m).rev() {
                    for t in u.succ(c, by_rank[r]).ones() {
                        best[ranks[t]] = r;
                    }
                }
                best
            })
            .collect();
        Ok(LiftingTable {
            by_rank,
            graph: u.graph.clone(),
            min_source,
        })
    }

    pub fn len(&self) -> usize {
        self.by_rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_rank.is_empty()
    }

    fn colour_ids(&self, game: &Game) -> Result<Vec<Option<usize>>> {
        game.edges
            .iter()
            .map(|e| match &e.colour {
                None => Ok(None),
                Some(c) => self
                    .graph
                    .colour_id(c)
                    .map(Some)
                    .ok_or_else(|| Error::ColourOutsideFamily(c.clone())),
            })
            .collect()
    }

    pub fn solve(&self, game: &Game) -> Result<Solution> {
        self.run(game, None)
    }

    pub fn solve_traced(&self, game: &Game) -> Result<(Solution, Vec<Lift>)> {
        let mut trace = Vec::new();
        let s = self.run(game, Some(&mut trace))?;
        Ok((s, trace))
    }

    fn run(&self, game: &Game, mut trace: Option<&mut Vec<Lift>>) -> Result<Solution> {
        let colour = self.colour_ids(game)?;
        let top = self.len();
        let n = game.len();
        let mut rho = vec![0usize; n];
        // least value at the source that supports edge `e`
        let need_edge = |rho: &[usize], e: usize| -> usize {
            let t = rho[game.edges[e].dst];
            match colour[e] {
                None => t,
                Some(_) if t == top => top,
                Some(c) => self.min_source[c][t],
            }
        };
        let need = |rho: &[usize], v: usize| -> usize {
            let vals = game.out[v].iter().map(|&e| need_edge(rho, e));
            match game.owner[v] {
                Player::Eve => vals.min().unwrap(),
                Player::Adam => vals.max().unwrap(),
            }
        };
        let mut pred = vec![Vec::new(); n];
        for e in &game.edges {
            pred[e.dst].push(e.src);
        }
        let mut queue: VecDeque<usize> = (0..n).collect();
        let mut queued = vec![true; n];
        while let Some(v) = queue.pop_front() {
            queued[v] = false;
            let want = need(&rho, v);
            if want > rho[v] {
                if let Some(t) = trace.as_deref_mut() {
                    t.push(Lift {
                        vertex: v,
                        from: rho[v],
                        to: want,
                    });
                }
                rho[v] = want;
                for &p in &pred[v] {
                    if !queued[p] {
                        queued[p] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
        let choice = (0..n)
            .map(|v| {
                (game.owner[v] == Player::Eve).then(|| {
                    let supported: Vec<usize> = game.out[v]
                        .iter()
                        .copied()
                        .filter(|&e| need_edge(&rho, e) <= rho[v])
                        .collect();
                    let pool = if supported.is_empty() {
                        &game.out[v]
                    } else {
                        &supported
                    };
                    *pool
                        .iter()
                        .min_by_key(|&&e| (rho[game.edges[e].dst], e))
                        .unwrap()
                })
            })
            .collect();
        Ok(Solution {
            winning: rho.iter().map(|&r| r != top).collect(),
            strategy: Strategy { choice },
            measure: ProgressMeasure {
                rho: rho
                    .iter()
                    .map(|&r| (r != top).then(|| self.by_rank[r]))
                    .collect(),
            },
        })
    }
}

pub fn solve(game: &Game, u: &OrderedGraph) -> Result<Solution> {
    LiftingTable::new(u)?.solve(game)
}

pub fn solve_traced(game: &Game, u: &OrderedGraph) -> Result<(Solution, Vec<Lift>)> {
    LiftingTable::new(u)?.solve_traced(game)
}

pub const DEFAULT_STRATEGY_BUDGET: u128 = 1 << 20;

/// Winning region by trying every positional Eve strategy. Adam is handled
/// by the cycle criteria, which quantify over all of his plays.
pub fn oracle_solve(game: &Game, budget: u128) -> Result<Vec<bool>> {
    let product = game.atom_product()?;
    let n = game.len();
    let eve: Vec<usize> = (0..n).filter(|&v| game.owner[v] == Player::Eve).collect();
    let count = eve
        .iter()
        .try_fold(1u128, |acc, &v| acc.checked_mul(game.out[v].len() as u128));
    let count = match count {
        Some(c) if c <= budget => c,
        other => {
            return Err(Error::Budget {
                what: "oracle strategies",
                needed: other.unwrap_or(u128::MAX),
                budget,
            })
        }
    };
    let all = game.labelled_edges();
    let mut winning = vec![false; n];
    let mut digits = vec![0usize; eve.len()];
    for _ in 0..count {
        let keep: Vec<bool> = (0..all.len())
            .map(|e| match eve.iter().position(|&v| v == all[e].src) {
                Some(i) => game.out[all[e].src][digits[i]] == e,
                None => true,
            })
            .collect();
        let edges: Vec<LabelledEdge> = all
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(e, _)| e.clone())
            .collect();
        let bad = violating_sources(n, &edges, &product);
        let losing = backward_reach(n, &edges, &bad);
        for v in 0..n {
            winning[v] |= !losing[v];
        }
        // next strategy in mixed radix
        for (i, d) in digits.iter_mut().enumerate() {
            *d += 1;
            if *d < game.out[eve[i]].len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(winning)
}

fn backward_reach(n: usize, edges: &[LabelledEdge], targets: &[bool]) -> Vec<bool> {
    let mut pred = vec![Vec::new(); n];
    for e in edges {
        pred[e.dst].push(e.src);
    }
    let mut seen = targets.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&v| targets[v]).collect();
    while let Some(v) = stack.pop() {
        for &p in &pred[v] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Every play from `v` consistent with `sigma` is won by Eve.
pub fn verify_strategy(game: &Game, sigma: &Strategy, v: usize) -> Result<bool> {
    sigma.check(game)?;
    let product = game.atom_product()?;
    let n = game.len();
    let edges: Vec<LabelledEdge> = game
        .labelled_edges()
        .into_iter()
        .enumerate()
        .filter(|(i, e)| game.owner[e.src] == Player::Adam || sigma.choice[e.src] == Some(*i))
        .map(|(_, e)| e)
        .collect();
    let mut cone = vec![false; n];
    cone[v] = true;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for e in edges.iter().filter(|e| e.src == x) {
            if !cone[e.dst] {
                cone[e.dst] = true;
                stack.push(e.dst);
            }
        }
    }
    let inside: Vec<LabelledEdge> = edges.into_iter().filter(|e| cone[e.src]).collect();
    Ok(find_violation(n, &inside, &product).is_none())
}

/// Universal graph the solver uses when none is given.
///
/// With `n` game vertices, counters go up to `κ = n + 1` and the power graph
/// uses `β = n + (number of levels)`; the result is wrapped with `n` copies.
/// A vertex with loops at every level already needs `f` to drop at each of
/// them, so `β = n + 1` is not enough. Max-parity uses
/// the signature graph; other max-lex products stack loops and chains with
/// the lexicographic product; min-lex products use the power graph.
pub fn auto_universal(
    objective: &ObjectiveExpr,
    indices: &BTreeSet<Ordinal>,
    n: usize,
    vertex_budget: u128,
) -> Result<OrderedGraph> {
    let n = n.max(1);
    let kappa = n + 1;
    let over = |needed: u128| Error::Budget {
        what: "universal graph vertices",
        needed,
        budget: vertex_budget,
    };
    if let ObjectiveExpr::MaxParity(a) = objective {
        if let Some(alpha) = a.as_nat() {
            let size = crate::universal::signature_size(alpha, kappa).saturating_mul(n as u128);
            if size > vertex_budget {
                return Err(over(size));
            }
            return wrap_top(&signature_graph(alpha, kappa)?, n);
        }
    }
    let product = objective.atom_product(indices)?;
    let level = |index: &Ordinal, atom: Atom| -> Result<OrderedGraph> {
        let single = |symbols: &[u32]| {
            let mut f = ColourFamily::new();
            f.insert_class(index.clone(), symbols.iter().copied());
            f
        };
        match atom {
            Atom::TW => Ok(loop_graph(&single(&[0]))),
            Atom::TL => chain_graph(&single(&[0]), kappa),
            Atom::CoBuchi => cobuchi_chain(index, kappa),
        }
    };
    let sizes: Vec<usize> = product
        .atoms
        .iter()
        .map(|(_, a)| if *a == Atom::TW { 1 } else { kappa })
        .collect();
    match product.kind {
        ProductKind::Max => {
            let size = sizes
                .iter()
                .fold(n as u128, |acc, &s| acc.saturating_mul(s as u128));
            if size > vertex_budget {
                return Err(over(size));
            }
            let mut acc: Option<OrderedGraph> = None;
            for (index, atom) in &product.atoms {
                let g = level(index, *atom)?;
                acc = Some(match acc {
                    None => g,
                    Some(lower) => lex_product(&lower, &g)?,
                });
            }
            let acc = acc.ok_or_else(|| Error::UnsupportedObjective("empty product".into()))?;
            tensor(&acc, n)
        }
        ProductKind::Min => {
            let beta = n + sizes.len();
            let size = power_graph_size(&sizes, beta).saturating_mul(n as u128);
            if size > vertex_budget {
                return Err(over(size));
            }
            let levels = product
                .atoms
                .iter()
                .map(|(index, atom)| PowerLevel::new(level(index, *atom)?))
                .collect::<Result<Vec<_>>>()?;
            wrap_top(&power_graph(levels, beta)?.graph, n)
        }
    }
}

/// Universal graph for a coBüchi class at `index`: counters below `k`,
/// symbol 2 strictly decreases, symbol 1 never increases.
pub fn cobuchi_chain(index: &Ordinal, k: usize) -> Result<OrderedGraph> {
    let mut fam = ColourFamily::new();
    fam.insert_class(index.clone(), [1, 2]);
    let mut g = ColouredGraph::with_size(fam, k);
    for i in 0..k {
        for j in 0..=i {
            g.add_edge(i, &Colour::new(index.clone(), 1), j)?;
            if j < i {
                g.add_edge(i, &Colour::new(index.clone(), 2), j)?;
            }
        }
    }
    OrderedGraph::new(g, Order::Keys((0..k).map(|i| nat_key(&[i])).collect()))
}

type AutoKey = (String, Vec<Ordinal>, usize);

/// Prepared `--auto` graphs keyed by objective, index set and vertex count.
#[derive(Default)]
pub struct AutoCache {
    tables: Mutex<HashMap<AutoKey, Arc<LiftingTable>>>,
}

impl AutoCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Lifting table for the game's objective, built on first use.
    pub fn table(&self, game: &Game, vertex_budget: u128) -> Result<Arc<LiftingTable>> {
        let indices: BTreeSet<Ordinal> = match game.objective.family() {
            Some(f) => f.indices().cloned().collect(),
            None => game.family.indices().cloned().collect(),
        };
        let key = (
            game.objective.to_string(),
            indices.iter().cloned().collect(),
            game.len(),
        );
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let u = auto_universal(&game.objective, &indices, game.len(), vertex_budget)?;
        let t = Arc::new(LiftingTable::new(&u)?);
        self.tables.lock().unwrap().insert(key, t.clone());
        Ok(t)
    }
}
