//! Seeded random instances: games, machines, lassos, ordinals.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::objective::ObjectiveExpr;
use crate::ordinal::Ordinal;
use crate::reductions::{pointwise_leq, Machine};
use crate::solver::{Game, GameEdge, Player};
use crate::words::{Colour, ColourFamily, LassoWord};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct GameParams {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Chance that an edge is neutral.
    pub epsilon_rate: f64,
}

impl Default for GameParams {
    fn default() -> Self {
        GameParams {
            max_vertices: 5,
            max_edges: 8,
            epsilon_rate: 0.1,
        }
    }
}

/// A sinkless game with colours from `colours`. Every vertex gets one edge
/// first; the remaining edges are spread at random.
pub fn random_game(
    rng: &mut impl Rng,
    objective: &ObjectiveExpr,
    colours: &ColourFamily,
    params: &GameParams,
) -> Result<Game> {
    let palette = colours.colours();
    let n = rng.gen_range(1..=params.max_vertices.max(1));
    let m = rng.gen_range(n..=params.max_edges.max(n));
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    let owner = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Player::Eve
            } else {
                Player::Adam
            }
        })
        .collect();
    let mut sources: Vec<usize> = (0..n).collect();
    sources.extend((n..m).map(|_| rng.gen_range(0..n)));
    sources.sort_unstable();
    let edges = sources
        .into_iter()
        .map(|src| {
            let colour = if palette.is_empty() || rng.gen_bool(params.epsilon_rate) {
                None
            } else {
                Some(palette.choose(rng).unwrap().clone())
            };
            GameEdge {
                src,
                colour,
                dst: rng.gen_range(0..n),
            }
        })
        .collect();
    Game::new(labels, owner, edges, objective.clone())
}

/// A machine with between 1 and `max_states` states and outputs in `{1,2}`.
pub fn random_machine(rng: &mut impl Rng, family: &ColourFamily, max_states: usize) -> Machine {
    let n = rng.gen_range(1..=max_states.max(1));
    let k = family.len();
    let trans = (0..n)
        .map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    let out = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let names = (0..n).map(|i| format!("q{i}")).collect();
    Machine::new(family.clone(), names, rng.gen_range(0..n), trans, out).unwrap()
}

/// A pointwise decreasing chain `f_0 ≥ … ≥ f_{k-1}` of machines with at
/// most `max_states` states. Each link is a random machine below the
/// previous one, found by rejection; after 64 misses the previous link is
/// copied with some 2-outputs lowered to 1.
pub fn random_chain(
    rng: &mut impl Rng,
    family: &ColourFamily,
    k: usize,
    max_states: usize,
) -> Vec<Machine> {
    let mut chain: Vec<Machine> = Vec::with_capacity(k);
    for i in 0..k {
        if i == 0 {
            chain.push(random_machine(rng, family, max_states));
            continue;
        }
        let prev = &chain[i - 1];
        let found = (0..64)
            .map(|_| random_machine(rng, family, max_states))
            .find(|m| pointwise_leq(m, prev).unwrap());
        let next = found.unwrap_or_else(|| {
            let out = (0..prev.num_states())
                .map(|q| if rng.gen_bool(0.5) { 1 } else { prev.output(q) })
                .collect();
            prev.with_outputs(out).unwrap()
        });
        chain.push(next);
    }
    chain
}

pub fn random_lasso(
    rng: &mut impl Rng,
    alphabet: &[Colour],
    max_u: usize,
    max_v: usize,
) -> LassoWord {
    let u = rng.gen_range(0..=max_u);
    let v = rng.gen_range(1..=max_v.max(1));
    let mut pick = |len| {
        (0..len)
            .map(|_| alphabet.choose(rng).unwrap().clone())
            .collect()
    };
    LassoWord::new(pick(u), pick(v)).unwrap()
}

/// Every lasso with `|u| ≤ max_u` and `1 ≤ |v| ≤ max_v` over `alphabet`, as
/// written (different pairs may denote the same word).
pub fn all_lassos(alphabet: &[Colour], max_u: usize, max_v: usize) -> Vec<LassoWord> {
    let words = |max: usize, min: usize| {
        let mut all: Vec<Vec<Colour>> = vec![Vec::new()];
        let mut layer: Vec<Vec<Colour>> = vec![Vec::new()];
        for _ in 0..max {
            layer = layer
                .iter()
                .flat_map(|w| {
                    alphabet.iter().map(move |c| {
                        let mut w = w.clone();
                        w.push(c.clone());
                        w
                    })
                })
                .collect();
            all.extend(layer.iter().cloned());
        }
        all.retain(|w| w.len() >= min);
        all
    };
    let spokes = words(max_u, 0);
    let cycles = words(max_v, 1);
    let mut out = Vec::with_capacity(spokes.len() * cycles.len());
    for u in &spokes {
        for v in &cycles {
            out.push(LassoWord::new(u.clone(), v.clone()).unwrap());
        }
    }
    out
}

/// A CNF ordinal below `ω^max_degree` with at most `max_terms` terms and
/// coefficients at most `max_coeff`.
pub fn random_ordinal(
    rng: &mut impl Rng,
    max_degree: u64,
    max_terms: usize,
    max_coeff: u64,
) -> Ordinal {
    let terms = rng.gen_range(0..=max_terms);
    let mut exps: Vec<u64> = (0..terms)
        .map(|_| rng.gen_range(0..max_degree.max(1)))
        .collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps.dedup();
    let terms = exps
        .into_iter()
        .map(|e| (Ordinal::nat(e), rng.gen_range(1..=max_coeff.max(1))))
        .collect();
    Ordinal::from_terms(terms).unwrap()
}
