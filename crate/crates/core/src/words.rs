//! Colours, colour families and ultimately periodic (lasso) words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// A colour is a symbol inside the class at `index`. Singleton classes use
/// symbol 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Colour {
    pub index: Ordinal,
    pub symbol: u32,
}

impl Colour {
    pub fn new(index: impl Into<Ordinal>, symbol: u32) -> Self {
        Colour {
            index: index.into(),
            symbol,
        }
    }

    /// The only colour of the singleton class at `index`.
    pub fn of(index: impl Into<Ordinal>) -> Self {
        Self::new(index, 0)
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbol == 0 {
            write!(f, "{}", self.index)
        } else {
            write!(f, "{}:{}", self.index, self.symbol)
        }
    }
}

impl fmt::Debug for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Colour {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Colour {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((idx, sym)) => {
                let symbol = sym
                    .parse()
                    .map_err(|_| Error::parse(format!("bad colour symbol in `{s}`")))?;
                Ok(Colour::new(idx.parse::<Ordinal>()?, symbol))
            }
            None => Ok(Colour::of(s.parse::<Ordinal>()?)),
        }
    }
}

/// Finite association from class index to its (nonempty) symbol set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ColourFamily {
    classes: BTreeMap<Ordinal, BTreeSet<u32>>,
}

impl ColourFamily {
    pub fn new() -> Self {
        Self::default()
    }

    /// Singleton classes `{0}` at each of the given indices.
    pub fn singletons<I, O>(indices: I) -> Self
    where
        I: IntoIterator<Item = O>,
        O: Into<Ordinal>,
    {
        let mut fam = Self::new();
        for i in indices {
            fam.insert_class(i.into(), [0]);
        }
        fam
    }

    /// Adds symbols to the class at `index`, creating it if needed.
    pub fn insert_class(&mut self, index: Ordinal, symbols: impl IntoIterator<Item = u32>) {
        let entry = self.classes.entry(index).or_default();
        entry.extend(symbols);
        debug_assert!(!entry.is_empty());
    }

    pub fn insert(&mut self, c: &Colour) {
        self.classes
            .entry(c.index.clone())
            .or_default()
            .insert(c.symbol);
    }

    pub fn contains(&self, c: &Colour) -> bool {
        self.classes
            .get(&c.index)
            .is_some_and(|s| s.contains(&c.symbol))
    }

    pub fn class(&self, index: &Ordinal) -> Option<&BTreeSet<u32>> {
        self.classes.get(index)
    }

    pub fn indices(&self) -> impl Iterator<Item = &Ordinal> + '_ {
        self.classes.keys()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// All colours, sorted by (index, symbol).
    pub fn colours(&self) -> Vec<Colour> {
        self.classes
            .iter()
            .flat_map(|(i, syms)| syms.iter().map(move |&s| Colour::new(i.clone(), s)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.classes.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn union(&self, other: &ColourFamily) -> ColourFamily {
        let mut out = self.clone();
        for (i, syms) in &other.classes {
            out.insert_class(i.clone(), syms.iter().copied());
        }
        out
    }

    pub fn is_disjoint_from(&self, other: &ColourFamily) -> bool {
        self.classes.keys().all(|i| !other.classes.contains_key(i))
    }

    pub fn restrict(&self, keep: impl Fn(&Ordinal) -> bool) -> ColourFamily {
        ColourFamily {
            classes: self
                .classes
                .iter()
                .filter(|(i, _)| keep(i))
                .map(|(i, s)| (i.clone(), s.clone()))
                .collect(),
        }
    }
}

/// Predicate on colour indices used by [`project`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexPred {
    Eq(Ordinal),
    Lt(Ordinal),
    Le(Ordinal),
    Gt(Ordinal),
    Ge(Ordinal),
}

impl IndexPred {
    pub fn holds(&self, i: &Ordinal) -> bool {
        match self {
            IndexPred::Eq(l) => i == l,
            IndexPred::Lt(l) => i < l,
            IndexPred::Le(l) => i <= l,
            IndexPred::Gt(l) => i > l,
            IndexPred::Ge(l) => i >= l,
        }
    }
}

/// The ultimately periodic word `spoke · cycle^ω`.
///
/// Always kept in normal form: the cycle is primitive (shortest period) and
/// the spoke is as short as possible, so two lassos denote the same word iff
/// they are equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LassoWord {
    spoke: Vec<Colour>,
    cycle: Vec<Colour>,
}

impl LassoWord {
    pub fn new(spoke: Vec<Colour>, cycle: Vec<Colour>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::parse("lasso cycle must be nonempty"));
        }
        let mut w = LassoWord { spoke, cycle };
        w.normalize();
        Ok(w)
    }

    /// `cycle^ω`; panics on an empty cycle.
    pub fn periodic(cycle: Vec<Colour>) -> Self {
        Self::new(Vec::new(), cycle).expect("empty cycle")
    }

    fn normalize(&mut self) {
        let n = self.cycle.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| self.cycle[i] == self.cycle[i - p]))
            .unwrap_or(n);
        self.cycle.truncate(period);
        while let Some(last) = self.spoke.last() {
            if *last != *self.cycle.last().unwrap() {
                break;
            }
            self.spoke.pop();
            self.cycle.rotate_right(1);
        }
    }

    pub fn spoke(&self) -> &[Colour] {
        &self.spoke
    }

    pub fn cycle(&self) -> &[Colour] {
        &self.cycle
    }

    /// The letter at position `n`.
    pub fn letter(&self, n: usize) -> &Colour {
        if n < self.spoke.len() {
            &self.spoke[n]
        } else {
            &self.cycle[(n - self.spoke.len()) % self.cycle.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<Colour> {
        (0..n).map(|i| self.letter(i).clone()).collect()
    }

    /// All colours of the word, spoke and cycle.
    pub fn letters(&self) -> impl Iterator<Item = &Colour> {
        self.spoke.iter().chain(&self.cycle)
    }

    pub fn map(&self, mut f: impl FnMut(&Colour) -> Colour) -> LassoWord {
        LassoWord::new(
            self.spoke.iter().map(&mut f).collect(),
            self.cycle.iter().map(&mut f).collect(),
        )
        .unwrap()
    }

    /// Prepends a finite word.
    pub fn with_prefix(&self, prefix: &[Colour]) -> LassoWord {
        let mut spoke = prefix.to_vec();
        spoke.extend(self.spoke.iter().cloned());
        LassoWord::new(spoke, self.cycle.clone()).unwrap()
    }

    /// The same word with the spoke dropped: `cycle^ω`.
    pub fn tail(&self) -> LassoWord {
        LassoWord::periodic(self.cycle.clone())
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.spoke {
            write!(f, "{c} ")?;
        }
        write!(f, "|")?;
        for c in &self.cycle {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for LassoWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (u, v) = s
            .split_once('|')
            .ok_or_else(|| Error::parse(format!("lasso `{s}` lacks `|`")))?;
        let parse = |part: &str| -> Result<Vec<Colour>> {
            part.split_whitespace().map(str::parse).collect()
        };
        LassoWord::new(parse(u)?, parse(v)?)
    }
}

/// Result of projecting a lasso onto a set of indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    Lasso(LassoWord),
    Finite(Vec<Colour>),
}

/// Subword of the colours whose index satisfies `pred`.
pub fn project(w: &LassoWord, pred: &IndexPred) -> Projection {
    project_by(w, |i| pred.holds(i))
}

pub fn project_by(w: &LassoWord, keep: impl Fn(&Ordinal) -> bool) -> Projection {
    let pick =
        |cs: &[Colour]| -> Vec<Colour> { cs.iter().filter(|c| keep(&c.index)).cloned().collect() };
    let spoke = pick(&w.spoke);
    let cycle = pick(&w.cycle);
    if cycle.is_empty() {
        Projection::Finite(spoke)
    } else {
        Projection::Lasso(LassoWord::new(spoke, cycle).unwrap())
    }
}

/// Largest index on the cycle: the limsup of the index sequence.
pub fn limsup_index(w: &LassoWord) -> Ordinal {
    w.cycle.iter().map(|c| &c.index).max().unwrap().clone()
}

/// Smallest index occurring infinitely often.
pub fn mininf_index(w: &LassoWord) -> Ordinal {
    w.cycle.iter().map(|c| &c.index).min().unwrap().clone()
}

/// The index at which the word is supported. Every lasso is supported at
/// its cycle minimum.
pub fn support_index(w: &LassoWord) -> Ordinal {
    mininf_index(w)
}
