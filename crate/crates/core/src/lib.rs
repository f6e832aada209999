//! Ordinal-indexed lexicographic products of objectives, their universal
//! graphs, and a positional game solver built on them.

// Index loops over several parallel tables read better than zipped iterators.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod gen;
pub mod graph;
pub mod objective;
pub mod ordinal;
pub mod reductions;
pub mod solver;
pub mod universal;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use graph::{ColouredGraph, Morphism, Order, OrderedGraph};
pub use objective::{MembershipVerdict, ObjectiveExpr};
pub use ordinal::{Ordinal, OrdinalKind, Parity};
pub use reductions::{Machine, PrefixFunction};
pub use solver::{Game, Player, Solution, Strategy};
pub use universal::PowerGraph;
pub use verify::{SatisfactionReport, UniversalityReport};
pub use words::{Colour, ColourFamily, IndexPred, LassoWord, Projection};
