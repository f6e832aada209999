//! Finite-state prefix functions `C* -> {1,2}`, the operators that combine
//! them, and the letter maps used by the completeness reductions.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::words::{Colour, ColourFamily, LassoWord};

/// A deterministic machine emitting a natural after every prefix (including
/// the empty one). Prefix functions are machines with outputs in `{1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Machine {
    family: ColourFamily,
    colours: Vec<Colour>,
    names: Vec<String>,
    init: usize,
    /// `[state][colour id]`
    trans: Vec<Vec<usize>>,
    out: Vec<u64>,
}

pub type PrefixFunction = Machine;

impl Machine {
    pub fn new(
        family: ColourFamily,
        names: Vec<String>,
        init: usize,
        trans: Vec<Vec<usize>>,
        out: Vec<u64>,
    ) -> Result<Machine> {
        let colours = family.colours();
        let n = names.len();
        if n == 0 || init >= n || trans.len() != n || out.len() != n {
            return Err(Error::InvalidMachine("state tables do not match".into()));
        }
        if trans
            .iter()
            .any(|row| row.len() != colours.len() || row.iter().any(|&t| t >= n))
        {
            return Err(Error::InvalidMachine(
                "every state needs one transition per colour".into(),
            ));
        }
        if names.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidMachine("duplicate state name".into()));
        }
        Ok(Machine {
            family,
            colours,
            names,
            init,
            trans,
            out,
        })
    }

    /// A one-state machine with a fixed output.
    pub fn constant(family: &ColourFamily, value: u64) -> Machine {
        let k = family.len();
        Machine::new(
            family.clone(),
            vec!["c".into()],
            0,
            vec![vec![0; k]],
            vec![value],
        )
        .unwrap()
    }

    pub fn family(&self) -> &ColourFamily {
        &self.family
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn output(&self, state: usize) -> u64 {
        self.out[state]
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn is_two_valued(&self) -> bool {
        self.out.iter().all(|&o| o == 1 || o == 2)
    }

    fn colour_id(&self, c: &Colour) -> Result<usize> {
        self.colours
            .binary_search(c)
            .map_err(|_| Error::ColourOutsideFamily(c.clone()))
    }

    pub fn step(&self, state: usize, c: &Colour) -> Result<usize> {
        Ok(self.trans[state][self.colour_id(c)?])
    }

    /// State after reading `x` from the initial state.
    pub fn run<'a>(&self, x: impl IntoIterator<Item = &'a Colour>) -> Result<usize> {
        x.into_iter().try_fold(self.init, |s, c| self.step(s, c))
    }

    /// Text form: optional `colours` line, `state <id> out=<n>`, `init <id>`,
    /// `trans <src> <colour> <dst>`.
    pub fn parse(text: &str) -> Result<Machine> {
        let mut family = ColourFamily::new();
        let mut states: Vec<(String, u64)> = Vec::new();
        let mut init = None;
        let mut trans_raw = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            let words: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::parse(format!("line {}: cannot parse `{line}`", i + 1));
            match words.as_slice() {
                [] => {}
                ["colours", cs @ ..] => {
                    for c in cs {
                        family.insert(&c.parse()?);
                    }
                }
                ["state", id, out] => {
                    let o = out
                        .strip_prefix("out=")
                        .and_then(|o| o.parse().ok())
                        .ok_or_else(bad)?;
                    states.push((id.to_string(), o));
                }
                ["init", id] => init = Some(id.to_string()),
                ["trans", s, c, d] => {
                    let c: Colour = c.parse()?;
                    family.insert(&c);
                    trans_raw.push((s.to_string(), c, d.to_string()));
                }
                _ => return Err(bad()),
            }
        }
        let index: HashMap<&str, usize> = states
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.as_str(), i))
            .collect();
        let state = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidMachine(format!("unknown state `{id}`")))
        };
        let colours = family.colours();
        let mut trans = vec![vec![usize::MAX; colours.len()]; states.len()];
        for (s, c, d) in &trans_raw {
            let slot = &mut trans[state(s)?][colours.binary_search(c).unwrap()];
            if *slot != usize::MAX {
                return Err(Error::InvalidMachine(format!(
                    "two transitions from {s} on {c}"
                )));
            }
            *slot = state(d)?;
        }
        if trans.iter().flatten().any(|&t| t == usize::MAX) {
            return Err(Error::InvalidMachine(
                "transition function is not total".into(),
            ));
        }
        let init = state(&init.ok_or_else(|| Error::InvalidMachine("no init line".into()))?)?;
        let (names, out) = states.into_iter().unzip();
        Machine::new(family, names, init, trans, out)
    }

    /// Same states and transitions with new outputs.
    pub fn with_outputs(&self, out: Vec<u64>) -> Result<Machine> {
        Machine::new(
            self.family.clone(),
            self.names.clone(),
            self.init,
            self.trans.clone(),
            out,
        )
    }

    /// Keeps only states reachable from the initial one, in BFS order.
    pub fn trim(&self) -> Machine {
        let mut order = vec![self.init];
        let mut index = vec![usize::MAX; self.num_states()];
        index[self.init] = 0;
        let mut i = 0;
        while i < order.len() {
            for &t in &self.trans[order[i]] {
                if index[t] == usize::MAX {
                    index[t] = order.len();
                    order.push(t);
                }
            }
            i += 1;
        }
        Machine {
            family: self.family.clone(),
            colours: self.colours.clone(),
            names: order.iter().map(|&s| self.names[s].clone()).collect(),
            init: 0,
            trans: order
                .iter()
                .map(|&s| self.trans[s].iter().map(|&t| index[t]).collect())
                .collect(),
            out: order.iter().map(|&s| self.out[s]).collect(),
        }
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::from("colours");
        for c in &self.colours {
            write!(s, " {c}")?;
        }
        s.push('\n');
        for (name, o) in self.names.iter().zip(&self.out) {
            writeln!(s, "state {name} out={o}")?;
        }
        writeln!(s, "init {}", self.names[self.init])?;
        for (q, row) in self.trans.iter().enumerate() {
            for (c, &t) in row.iter().enumerate() {
                writeln!(
                    s,
                    "trans {} {} {}",
                    self.names[q], self.colours[c], self.names[t]
                )?;
            }
        }
        f.write_str(&s)
    }
}

impl std::str::FromStr for Machine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Machine::parse(s)
    }
}

/// Output after reading `x`.
pub fn eval_prefix(f: &Machine, x: &[Colour]) -> Result<u64> {
    Ok(f.out[f.run(x)?])
}

/// Outputs along `w`, split into spoke and period.
fn image_outputs(f: &Machine, w: &LassoWord) -> Result<(Vec<u64>, Vec<u64>)> {
    let u = w.spoke();
    let v = w.cycle();
    let mut state = f.run(u)?;
    let mut outs: Vec<u64> = Vec::new();
    {
        let mut s = f.init;
        for c in u {
            outs.push(f.out[s]);
            s = f.step(s, c)?;
        }
    }
    // position n = |u| + t reads v[t mod |v|] next
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut t = 0usize;
    loop {
        let key = (state, t % v.len());
        if let Some(&first) = seen.get(&key) {
            let cycle = outs.split_off(u.len() + first);
            return Ok((outs, cycle));
        }
        seen.insert(key, t);
        outs.push(f.out[state]);
        state = f.step(state, &v[t % v.len()])?;
        t += 1;
    }
}

/// `f̃(w)` over the class `{1, 2}` at index 0.
pub fn lasso_image(f: &Machine, w: &LassoWord) -> Result<LassoWord> {
    two_valued(f)?;
    let (u, v) = image_outputs(f, w)?;
    let colour = |o: u64| Colour::new(0, o as u32);
    LassoWord::new(
        u.into_iter().map(colour).collect(),
        v.into_iter().map(colour).collect(),
    )
}

/// Output lasso of a priority machine: output `η` becomes colour `η`.
pub fn priority_image(f: &Machine, w: &LassoWord) -> Result<LassoWord> {
    let (u, v) = image_outputs(f, w)?;
    LassoWord::new(
        u.into_iter().map(Colour::of).collect(),
        v.into_iter().map(Colour::of).collect(),
    )
}

/// `w ∈ ⟦f⟧`: `f` emits 2 only finitely often along `w`.
pub fn cobuchi_sem(f: &Machine, w: &LassoWord) -> Result<bool> {
    two_valued(f)?;
    Ok(image_outputs(f, w)?.1.iter().all(|&o| o != 2))
}

fn two_valued(f: &Machine) -> Result<()> {
    if f.is_two_valued() {
        Ok(())
    } else {
        Err(Error::InvalidMachine("outputs must lie in {1, 2}".into()))
    }
}

fn same_family(fs: &[&Machine]) -> Result<()> {
    if fs.windows(2).any(|p| p[0].family != p[1].family) {
        return Err(Error::InvalidMachine(
            "machines read different colour families".into(),
        ));
    }
    Ok(())
}

/// Reachable product of machines with an extra state component `X`.
/// `next(states, extra, colour id, next states)` gives the new extra value.
fn product<X: Clone + Eq + Hash + fmt::Debug>(
    ms: &[&Machine],
    extra0: X,
    next: impl Fn(&[usize], &X, &[usize]) -> X,
    out: impl Fn(&[usize], &X) -> u64,
    name_extra: impl Fn(&X) -> Option<String>,
) -> Machine {
    let family = ms[0].family.clone();
    let ncol = ms[0].colours.len();
    let start: (Vec<usize>, X) = (ms.iter().map(|m| m.init).collect(), extra0);
    let mut index: HashMap<(Vec<usize>, X), usize> = HashMap::from([(start.clone(), 0)]);
    let mut order = vec![start];
    let mut trans: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let (qs, x) = order[i].clone();
        let mut row = Vec::with_capacity(ncol);
        for c in 0..ncol {
            let qs2: Vec<usize> = ms.iter().zip(&qs).map(|(m, &q)| m.trans[q][c]).collect();
            let x2 = next(&qs, &x, &qs2);
            let key = (qs2, x2);
            let id = *index.entry(key.clone()).or_insert_with(|| {
                order.push(key);
                order.len() - 1
            });
            row.push(id);
        }
        trans.push(row);
        i += 1;
    }
    let names = order
        .iter()
        .map(|(qs, x)| {
            let mut parts: Vec<String> = ms
                .iter()
                .zip(qs)
                .map(|(m, &q)| m.names[q].clone())
                .collect();
            parts.extend(name_extra(x));
            format!("({})", parts.join(","))
        })
        .collect();
    let outs = order.iter().map(|(qs, x)| out(qs, x)).collect();
    Machine::new(family, names, 0, trans, outs).unwrap()
}

/// Pointwise maximum; `⟦max(f,g)⟧ = ⟦f⟧ ∩ ⟦g⟧`.
pub fn op_max(f: &Machine, g: &Machine) -> Result<Machine> {
    same_family(&[f, g])?;
    Ok(product(
        &[f, g],
        (),
        |_, _, _| (),
        |q, _| f.out[q[0]].max(g.out[q[1]]),
        |_| None,
    ))
}

/// Pointwise minimum; below both arguments.
pub fn op_min(f: &Machine, g: &Machine) -> Result<Machine> {
    same_family(&[f, g])?;
    Ok(product(
        &[f, g],
        (),
        |_, _, _| (),
        |q, _| f.out[q[0]].min(g.out[q[1]]),
        |_| None,
    ))
}

/// `union(f, g)`: 2 exactly when `f(x) = 2` and the last `g`-2 at a prefix
/// of `x` is later than the last `f`-2 at a strict prefix of `x`.
/// `⟦union(f,g)⟧ = ⟦f⟧ ∪ ⟦g⟧` and `union(f,g) ≤ f`.
///
/// The extra bit records `|x_g| > |x'_f|`. Reading `a` after `x`: a 2 from
/// `g` at `xa` sets it, otherwise a 2 from `f` at `x` clears it.
pub fn op_union(f: &Machine, g: &Machine) -> Result<Machine> {
    same_family(&[f, g])?;
    two_valued(f)?;
    two_valued(g)?;
    Ok(product(
        &[f, g],
        false,
        |q, &later, q2| {
            if g.out[q2[1]] == 2 {
                true
            } else if f.out[q[0]] == 2 {
                false
            } else {
                later
            }
        },
        |q, &later| if f.out[q[0]] == 2 && later { 2 } else { 1 },
        |&later| Some(u8::from(later).to_string()),
    ))
}

/// `f ≤ g` pointwise: wherever `g` outputs 1, so does `f`. Decided on the
/// reachable product.
pub fn pointwise_leq(f: &Machine, g: &Machine) -> Result<bool> {
    same_family(&[f, g])?;
    let p = product(
        &[f, g],
        (),
        |_, _, _| (),
        |q, _| (g.out[q[1]] == 1 && f.out[q[0]] == 2) as u64,
        |_| None,
    );
    Ok(p.out.iter().all(|&o| o == 0))
}

/// `max(union(g_small, f_next), g_big)`: has the semantics of `f_next`
/// whenever `⟦g_small⟧ ⊆ ⟦f_next⟧ ⊆ ⟦g_big⟧`, and sits between the bounds.
pub fn successor_step(g_small: &Machine, g_big: &Machine, f_next: &Machine) -> Result<Machine> {
    if !pointwise_leq(g_big, g_small)? {
        return Err(Error::Precondition("g_big ≤ g_small does not hold".into()));
    }
    op_max(&op_union(g_small, f_next)?, g_big)
}

/// For a pointwise decreasing chain `f_0 ≥ … ≥ f_{k-1}`, the machine
/// emitting after each prefix the least `η` with `f_η(x) = 1`, or `k`.
pub fn chain_reduction(chain: &[Machine]) -> Result<Machine> {
    if chain.is_empty() {
        return Err(Error::Precondition("empty chain".into()));
    }
    let refs: Vec<&Machine> = chain.iter().collect();
    same_family(&refs)?;
    for f in chain {
        two_valued(f)?;
    }
    for (i, pair) in chain.windows(2).enumerate() {
        if !pointwise_leq(&pair[1], &pair[0])? {
            return Err(Error::Precondition(format!(
                "chain is not pointwise decreasing at {}",
                i + 1
            )));
        }
    }
    let k = chain.len() as u64;
    Ok(product(
        &refs,
        (),
        |_, _, _| (),
        |q, _| {
            (0..chain.len())
                .find(|&i| chain[i].out[q[i]] == 1)
                .map_or(k, |i| i as u64)
        },
        |_| None,
    ))
}

/// Replaces index `i` by `2i` letterwise.
pub fn double_map(w: &LassoWord) -> Result<LassoWord> {
    if let Some(c) = w.letters().find(|c| c.index.as_nat().is_none()) {
        return Err(Error::Precondition(format!(
            "index {} is not a natural number",
            c.index
        )));
    }
    Ok(w.map(|c| Colour::new(2 * c.index.as_nat().unwrap(), c.symbol)))
}

/// Replaces the letter `alpha` at position `i` by `gammas[i]`. `alpha` may
/// only occur in the spoke: in the cycle the image would not be ultimately
/// periodic.
pub fn limit_collapse(w: &LassoWord, alpha: &Ordinal, gammas: &[Ordinal]) -> Result<LassoWord> {
    if w.cycle().iter().any(|c| c.index == *alpha) {
        return Err(Error::Precondition(format!(
            "{alpha} occurs in the cycle, so its replacements would not repeat periodically"
        )));
    }
    if let Some(c) = w.letters().find(|c| c.index > *alpha) {
        return Err(Error::Precondition(format!("letter {c} is above {alpha}")));
    }
    let u = w.spoke();
    if gammas.len() < u.len() {
        return Err(Error::Precondition(
            "not enough replacement ordinals".into(),
        ));
    }
    if gammas.windows(2).any(|p| p[0] >= p[1]) || gammas.iter().any(|g| g >= alpha) {
        return Err(Error::Precondition(
            "replacements must increase strictly and stay below the limit".into(),
        ));
    }
    let spoke = u
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.index == *alpha {
                Colour::new(gammas[i].clone(), c.symbol)
            } else {
                c.clone()
            }
        })
        .collect();
    LassoWord::new(spoke, w.cycle().to_vec())
}
