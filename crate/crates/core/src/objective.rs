//! Objective expressions: trivial atoms, coBüchi atoms, max- and
//! min-lexicographic products, and the named parity-like families.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::words::{self, Colour, ColourFamily, LassoWord, Projection};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ObjectiveExpr {
    /// Trivially winning over the singleton class at the index.
    TW(Ordinal),
    /// Trivially losing over the singleton class at the index.
    TL(Ordinal),
    /// coBüchi over the class `{1, 2}` at the index: 2 occurs finitely often.
    CoBuchi(Ordinal),
    MaxLex(Vec<(Ordinal, ObjectiveExpr)>),
    MinLex(Vec<(Ordinal, ObjectiveExpr)>),
    /// `TW_0 ⋉ TL_1 ⋉ … ⋉ TW_d` for even `d`: the largest priority seen
    /// infinitely often is even.
    ParityD(u64),
    /// Largest index seen infinitely often is odd; indices `< α`.
    MaxParity(Ordinal),
    /// Supported at an even index; indices `< α`.
    MinParity(Ordinal),
    /// Some index repeats forever; indices `< α`.
    OmegaBuchi(Ordinal),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipVerdict {
    pub accepted: bool,
    /// Index the verdict was decided at: the limsup for max-lex products, the
    /// support for min-lex products.
    pub witness_index: Ordinal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    TW,
    TL,
    CoBuchi,
}

impl Atom {
    /// Whether infinitely many edges labelled `symbol` make the atom reject.
    pub fn rejects_symbol(self, symbol: u32) -> bool {
        match self {
            Atom::TW => false,
            Atom::TL => true,
            Atom::CoBuchi => symbol == 2,
        }
    }
}

/// A flat product of atoms, the shape handled by the exact cycle criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomProduct {
    pub kind: ProductKind,
    pub atoms: Vec<(Ordinal, Atom)>,
}

impl AtomProduct {
    pub fn atom(&self, index: &Ordinal) -> Option<Atom> {
        self.atoms
            .binary_search_by(|(i, _)| i.cmp(index))
            .ok()
            .map(|k| self.atoms[k].1)
    }
}

impl ObjectiveExpr {
    /// Max-lex product; validates the family.
    pub fn max_lex(entries: Vec<(Ordinal, ObjectiveExpr)>) -> Result<Self> {
        validate_family(&entries)?;
        Ok(ObjectiveExpr::MaxLex(entries))
    }

    pub fn min_lex(entries: Vec<(Ordinal, ObjectiveExpr)>) -> Result<Self> {
        validate_family(&entries)?;
        Ok(ObjectiveExpr::MinLex(entries))
    }

    /// Atom at its own index, for building products.
    pub fn keyed(self) -> (Ordinal, ObjectiveExpr) {
        let key = match &self {
            ObjectiveExpr::TW(i) | ObjectiveExpr::TL(i) | ObjectiveExpr::CoBuchi(i) => i.clone(),
            _ => self.min_index().unwrap_or_else(Ordinal::zero),
        };
        (key, self)
    }

    pub fn is_named(&self) -> bool {
        matches!(
            self,
            ObjectiveExpr::ParityD(_)
                | ObjectiveExpr::MaxParity(_)
                | ObjectiveExpr::MinParity(_)
                | ObjectiveExpr::OmegaBuchi(_)
        )
    }

    /// Whether colours with this index belong to the objective.
    pub fn covers_index(&self, i: &Ordinal) -> bool {
        match self {
            ObjectiveExpr::TW(l) | ObjectiveExpr::TL(l) | ObjectiveExpr::CoBuchi(l) => l == i,
            ObjectiveExpr::MaxLex(es) | ObjectiveExpr::MinLex(es) => {
                es.iter().any(|(_, e)| e.covers_index(i))
            }
            ObjectiveExpr::ParityD(d) => i.as_nat().is_some_and(|n| n <= *d),
            ObjectiveExpr::MaxParity(a)
            | ObjectiveExpr::MinParity(a)
            | ObjectiveExpr::OmegaBuchi(a) => i < a,
        }
    }

    pub fn accepts_colour(&self, c: &Colour) -> bool {
        match self {
            ObjectiveExpr::CoBuchi(l) => *l == c.index && matches!(c.symbol, 1 | 2),
            ObjectiveExpr::MaxLex(es) | ObjectiveExpr::MinLex(es) => {
                es.iter().any(|(_, e)| e.accepts_colour(c))
            }
            _ => c.symbol == 0 && self.covers_index(&c.index),
        }
    }

    /// Colour family of the objective, when it is finite.
    pub fn family(&self) -> Option<ColourFamily> {
        let mut fam = ColourFamily::new();
        match self {
            ObjectiveExpr::TW(l) | ObjectiveExpr::TL(l) => fam.insert_class(l.clone(), [0]),
            ObjectiveExpr::CoBuchi(l) => fam.insert_class(l.clone(), [1, 2]),
            ObjectiveExpr::MaxLex(es) | ObjectiveExpr::MinLex(es) => {
                for (_, e) in es {
                    fam = fam.union(&e.family()?);
                }
            }
            ObjectiveExpr::ParityD(d) => fam = ColourFamily::singletons(0..=*d),
            ObjectiveExpr::MaxParity(a)
            | ObjectiveExpr::MinParity(a)
            | ObjectiveExpr::OmegaBuchi(a) => fam = ColourFamily::singletons(0..a.as_nat()?),
        }
        Some(fam)
    }

    fn min_index(&self) -> Option<Ordinal> {
        match self {
            ObjectiveExpr::TW(l) | ObjectiveExpr::TL(l) | ObjectiveExpr::CoBuchi(l) => {
                Some(l.clone())
            }
            ObjectiveExpr::MaxLex(es) | ObjectiveExpr::MinLex(es) => {
                es.first().and_then(|(_, e)| e.min_index())
            }
            _ => Some(Ordinal::zero()),
        }
    }

    fn max_index(&self) -> Option<Ordinal> {
        match self {
            ObjectiveExpr::TW(l) | ObjectiveExpr::TL(l) | ObjectiveExpr::CoBuchi(l) => {
                Some(l.clone())
            }
            ObjectiveExpr::MaxLex(es) | ObjectiveExpr::MinLex(es) => {
                es.last().and_then(|(_, e)| e.max_index())
            }
            ObjectiveExpr::ParityD(d) => Some(Ordinal::nat(*d)),
            ObjectiveExpr::MaxParity(a)
            | ObjectiveExpr::MinParity(a)
            | ObjectiveExpr::OmegaBuchi(a) => {
                a.as_nat().and_then(|n| n.checked_sub(1)).map(Ordinal::nat)
            }
        }
    }

    /// Structural expansion of a named family into a product of trivial
    /// atoms. Infinite bounds need [`ObjectiveExpr::expand_over`].
    pub fn expand(&self) -> Result<ObjectiveExpr> {
        let bound = match self {
            ObjectiveExpr::ParityD(d) => {
                if d % 2 == 1 {
                    return Err(Error::OddParityBound(*d));
                }
                d + 1
            }
            ObjectiveExpr::MaxParity(a)
            | ObjectiveExpr::MinParity(a)
            | ObjectiveExpr::OmegaBuchi(a) => a.as_nat().ok_or_else(|| {
                Error::InvalidObjective(format!(
                    "cannot expand {self} over infinitely many indices; use expand_over"
                ))
            })?,
            _ => return Ok(self.clone()),
        };
        self.expand_over((0..bound).map(Ordinal::nat))
    }

    /// Expansion restricted to the given indices (those outside the
    /// family's range are dropped).
    pub fn expand_over(&self, indices: impl IntoIterator<Item = Ordinal>) -> Result<ObjectiveExpr> {
        if let ObjectiveExpr::ParityD(d) = self {
            if d % 2 == 1 {
                return Err(Error::OddParityBound(*d));
            }
        }
        let indices: BTreeSet<Ordinal> = indices
            .into_iter()
            .filter(|i| self.covers_index(i))
            .collect();
        let atom = |i: &Ordinal| -> ObjectiveExpr {
            let win = match self {
                ObjectiveExpr::ParityD(_) => i.is_even(),
                ObjectiveExpr::MaxParity(_) => i.is_odd(),
                ObjectiveExpr::MinParity(_) => i.is_even(),
                _ => true,
            };
            if win {
                ObjectiveExpr::TW(i.clone())
            } else {
                ObjectiveExpr::TL(i.clone())
            }
        };
        let entries = indices.iter().map(|i| (i.clone(), atom(i))).collect();
        match self {
            ObjectiveExpr::ParityD(_) | ObjectiveExpr::MaxParity(_) => {
                Ok(ObjectiveExpr::MaxLex(entries))
            }
            ObjectiveExpr::MinParity(_) | ObjectiveExpr::OmegaBuchi(_) => {
                Ok(ObjectiveExpr::MinLex(entries))
            }
            _ => Ok(self.clone()),
        }
    }

    /// Flattens into a product of atoms over `indices` (named families are
    /// expanded over them). Nested products are rejected.
    pub fn atom_product(&self, indices: &BTreeSet<Ordinal>) -> Result<AtomProduct> {
        let expr = if self.is_named() {
            self.expand_over(indices.iter().cloned())?
        } else {
            self.clone()
        };
        let unsupported = || Error::UnsupportedObjective(self.to_string());
        let (kind, entries) = match &expr {
            ObjectiveExpr::MaxLex(es) => (ProductKind::Max, es.clone()),
            ObjectiveExpr::MinLex(es) => (ProductKind::Min, es.clone()),
            atom => (ProductKind::Max, vec![atom.clone().keyed()]),
        };
        let atoms = entries
            .iter()
            .map(|(k, e)| {
                let atom = match e {
                    ObjectiveExpr::TW(_) => Atom::TW,
                    ObjectiveExpr::TL(_) => Atom::TL,
                    ObjectiveExpr::CoBuchi(_) => Atom::CoBuchi,
                    _ => return Err(unsupported()),
                };
                Ok((k.clone(), atom))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AtomProduct { kind, atoms })
    }

    /// Lasso membership.
    pub fn member(&self, w: &LassoWord) -> Result<MembershipVerdict> {
        if let Some(bad) = w.letters().find(|c| !self.accepts_colour(c)) {
            return Err(Error::ColourOutsideFamily(bad.clone()));
        }
        if let ObjectiveExpr::ParityD(d) = self {
            if d % 2 == 1 {
                return Err(Error::OddParityBound(*d));
            }
        }
        Ok(self.eval(w))
    }

    fn eval(&self, w: &LassoWord) -> MembershipVerdict {
        let verdict = |accepted, witness_index| MembershipVerdict {
            accepted,
            witness_index,
        };
        match self {
            ObjectiveExpr::TW(l) => verdict(true, l.clone()),
            ObjectiveExpr::TL(l) => verdict(false, l.clone()),
            ObjectiveExpr::CoBuchi(l) => {
                verdict(w.cycle().iter().all(|c| c.symbol != 2), l.clone())
            }
            ObjectiveExpr::ParityD(_) => {
                let top = words::limsup_index(w);
                verdict(top.is_even(), top)
            }
            ObjectiveExpr::MaxParity(_) => {
                let top = words::limsup_index(w);
                verdict(top.is_odd(), top)
            }
            ObjectiveExpr::MinParity(_) => {
                let sup = words::support_index(w);
                verdict(sup.is_even(), sup)
            }
            ObjectiveExpr::OmegaBuchi(_) => verdict(true, words::support_index(w)),
            ObjectiveExpr::MaxLex(es) | ObjectiveExpr::MinLex(es) => {
                let key_of = |c: &Colour| {
                    es.iter()
                        .position(|(_, e)| e.covers_index(&c.index))
                        .expect("colour checked against family")
                };
                let keys = w.cycle().iter().map(key_of);
                let chosen = if matches!(self, ObjectiveExpr::MaxLex(_)) {
                    keys.max()
                } else {
                    keys.min()
                }
                .unwrap();
                let (key, sub) = &es[chosen];
                let Projection::Lasso(part) = words::project_by(w, |i| sub.covers_index(i)) else {
                    unreachable!("the chosen entry occurs on the cycle")
                };
                verdict(sub.eval(&part).accepted, key.clone())
            }
        }
    }
}

fn validate_family(entries: &[(Ordinal, ObjectiveExpr)]) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidObjective(m));
    for (i, (key, e)) in entries.iter().enumerate() {
        match e {
            ObjectiveExpr::TW(l) | ObjectiveExpr::TL(l) | ObjectiveExpr::CoBuchi(l) if l != key => {
                return bad(format!("entry {key} holds an atom over class {l}"));
            }
            ObjectiveExpr::MaxLex(es) | ObjectiveExpr::MinLex(es) if es.is_empty() => {
                return bad(format!("entry {key} is an empty product"));
            }
            e if e.is_named() => {
                return bad(format!(
                    "named objective {e} inside a product; expand it first"
                ));
            }
            _ => {}
        }
        if i > 0 {
            let (prev_key, prev) = &entries[i - 1];
            if prev_key >= key {
                return bad("product indices must be strictly increasing".into());
            }
            if prev.max_index() >= e.min_index() {
                return bad(format!(
                    "entries {prev_key} and {key} have overlapping or misordered colour classes"
                ));
            }
        }
    }
    Ok(())
}

impl fmt::Display for ObjectiveExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveExpr::TW(l) => write!(f, "TW@{l}"),
            ObjectiveExpr::TL(l) => write!(f, "TL@{l}"),
            ObjectiveExpr::CoBuchi(l) => write!(f, "coBuchi@{l}"),
            ObjectiveExpr::MaxLex(es) | ObjectiveExpr::MinLex(es) => {
                let name = if matches!(self, ObjectiveExpr::MaxLex(_)) {
                    "maxlex"
                } else {
                    "minlex"
                };
                write!(f, "{name}{{")?;
                for (i, (k, e)) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k}:{e}")?;
                }
                write!(f, "}}")
            }
            ObjectiveExpr::ParityD(d) => write!(f, "Parity({d})"),
            ObjectiveExpr::MaxParity(a) => write!(f, "MaxParity({a})"),
            ObjectiveExpr::MinParity(a) => write!(f, "MinParity({a})"),
            ObjectiveExpr::OmegaBuchi(a) => write!(f, "omegaBuchi({a})"),
        }
    }
}

impl Serialize for ObjectiveExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for ObjectiveExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = ExprParser {
            src: compact.as_str(),
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.src.len() {
            return Err(Error::parse(format!(
                "trailing input `{}` in objective",
                &p.src[p.pos..]
            )));
        }
        Ok(e)
    }
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl ExprParser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(Error::parse(format!(
                "expected `{tok}` at `{}`",
                self.rest()
            )))
        }
    }

    /// Longest prefix that can belong to an ordinal literal.
    fn ordinal(&mut self) -> Result<Ordinal> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut end = start;
        while end < bytes.len() {
            match bytes[end] {
                b'0'..=b'9' | b'w' | b'*' | b'+' => end += 1,
                b'^' => {
                    end += 1;
                    if bytes.get(end) == Some(&b'(') {
                        let mut depth = 0;
                        while end < bytes.len() {
                            match bytes[end] {
                                b'(' => depth += 1,
                                b')' => depth -= 1,
                                _ => {}
                            }
                            end += 1;
                            if depth == 0 {
                                break;
                            }
                        }
                    }
                }
                _ => break,
            }
        }
        self.pos = end;
        self.src[start..end].parse()
    }

    fn call_arg(&mut self) -> Result<Ordinal> {
        self.expect("(")?;
        let o = self.ordinal()?;
        self.expect(")")?;
        Ok(o)
    }

    fn entries(&mut self) -> Result<Vec<(Ordinal, ObjectiveExpr)>> {
        self.expect("{")?;
        let mut out = Vec::new();
        if !self.eat("}") {
            loop {
                let key = self.ordinal()?;
                self.expect(":")?;
                let mut e = self.expr()?;
                if e.is_named() {
                    e = e.expand()?;
                }
                out.push((key, e));
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<ObjectiveExpr> {
        if self.eat("TW@") {
            Ok(ObjectiveExpr::TW(self.ordinal()?))
        } else if self.eat("TL@") {
            Ok(ObjectiveExpr::TL(self.ordinal()?))
        } else if self.eat("coBuchi@") {
            Ok(ObjectiveExpr::CoBuchi(self.ordinal()?))
        } else if self.eat("maxlex") {
            ObjectiveExpr::max_lex(self.entries()?)
        } else if self.eat("minlex") {
            ObjectiveExpr::min_lex(self.entries()?)
        } else if self.eat("MaxParity") {
            Ok(ObjectiveExpr::MaxParity(self.call_arg()?))
        } else if self.eat("MinParity") {
            Ok(ObjectiveExpr::MinParity(self.call_arg()?))
        } else if self.eat("Parity") {
            let d = self.call_arg()?;
            let d = d
                .as_nat()
                .ok_or_else(|| Error::parse("Parity(d) needs a natural d"))?;
            if d % 2 == 1 {
                return Err(Error::OddParityBound(d));
            }
            Ok(ObjectiveExpr::ParityD(d))
        } else if self.eat("omegaBuchi") {
            Ok(ObjectiveExpr::OmegaBuchi(self.call_arg()?))
        } else {
            Err(Error::parse(format!(
                "unknown objective at `{}`",
                self.rest()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(s: &str) -> ObjectiveExpr {
        s.parse().unwrap()
    }

    fn lasso(s: &str) -> LassoWord {
        s.parse().unwrap()
    }

    fn n(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }

    #[test]
    fn expand_examples() {
        assert_eq!(
            ObjectiveExpr::ParityD(2).expand().unwrap(),
            obj("maxlex{0:TW@0, 1:TL@1, 2:TW@2}")
        );
        assert_eq!(
            ObjectiveExpr::MaxParity(n(3)).expand().unwrap(),
            obj("maxlex{0:TL@0, 1:TW@1, 2:TL@2}")
        );
        assert_eq!(
            ObjectiveExpr::OmegaBuchi(n(3)).expand().unwrap(),
            obj("minlex{0:TW@0, 1:TW@1, 2:TW@2}")
        );
        assert_eq!(
            ObjectiveExpr::ParityD(3).expand(),
            Err(Error::OddParityBound(3))
        );
        assert!(ObjectiveExpr::MinParity(Ordinal::omega()).expand().is_err());
    }

    #[test]
    fn member_examples() {
        let v = obj("MaxParity(3)").member(&lasso("| 1 2")).unwrap();
        assert_eq!(
            v,
            MembershipVerdict {
                accepted: false,
                witness_index: n(2)
            }
        );
        let v = obj("MinParity(w)").member(&lasso("1 | 2")).unwrap();
        assert!(v.accepted);
        assert_eq!(v.witness_index, n(2));
        assert!(!obj("Parity(2)").member(&lasso("| 0 1")).unwrap().accepted);
        assert!(
            obj("omegaBuchi(5)")
                .member(&lasso("0 3 | 4 1 2"))
                .unwrap()
                .accepted
        );
        let top = "w+1".parse::<Ordinal>().unwrap();
        let v = obj("MaxParity(w+2)").member(&lasso("| w+1")).unwrap();
        assert_eq!(
            v,
            MembershipVerdict {
                accepted: true,
                witness_index: top
            }
        );
    }

    #[test]
    fn member_rejects_foreign_colours() {
        assert_eq!(
            obj("MaxParity(3)").member(&lasso("| 3")),
            Err(Error::ColourOutsideFamily(Colour::of(3)))
        );
        assert!(obj("coBuchi@0").member(&lasso("| 0")).is_err());
        assert!(obj("coBuchi@0").member(&lasso("| 0:1 0:2")).is_ok());
    }

    #[test]
    fn cobuchi_atom() {
        let w = obj("maxlex{0:coBuchi@0, 1:TL@1}");
        assert!(w.member(&lasso("0:2 1 | 0:1")).unwrap().accepted);
        assert!(!w.member(&lasso("| 0:1 0:2")).unwrap().accepted);
        assert!(!w.member(&lasso("| 0:1 1")).unwrap().accepted);
    }

    #[test]
    fn cli_style_examples() {
        let v = obj("minlex{0:TW@0,1:TL@1}").member(&lasso("| 0")).unwrap();
        assert_eq!(
            v,
            MembershipVerdict {
                accepted: true,
                witness_index: n(0)
            }
        );
    }

    #[test]
    fn nested_products() {
        // two groups: {0,1} and {2,3}
        let nested = obj("minlex{0:minlex{0:TL@0, 1:TW@1}, 1:minlex{2:TW@2, 3:TL@3}}");
        let flat = obj("minlex{0:TL@0, 1:TW@1, 2:TW@2, 3:TL@3}");
        for w in ["| 1 2", "0 | 3", "| 2 3", "| 0 3", "| 3"] {
            assert_eq!(
                nested.member(&lasso(w)).unwrap().accepted,
                flat.member(&lasso(w)).unwrap().accepted,
                "{w}"
            );
        }
    }

    #[test]
    fn rejects_malformed_families() {
        assert!("maxlex{1:TW@0}".parse::<ObjectiveExpr>().is_err());
        assert!("maxlex{1:TW@1, 0:TL@0}".parse::<ObjectiveExpr>().is_err());
        assert!("minlex{0:minlex{0:TW@0, 2:TW@2}, 1:TW@1}"
            .parse::<ObjectiveExpr>()
            .is_err());
        assert!("Parity(3)".parse::<ObjectiveExpr>().is_err());
        assert!("Parity(w)".parse::<ObjectiveExpr>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "TW@w+1",
            "maxlex{0:TW@0, 1:TL@1}",
            "minlex{0:coBuchi@0, w:TL@w}",
            "MaxParity(w^2+1)",
            "MinParity(w)",
            "Parity(4)",
            "omegaBuchi(3)",
        ] {
            assert_eq!(obj(s).to_string(), s);
        }
    }

    #[test]
    fn atom_product_shapes() {
        let idx: BTreeSet<Ordinal> = (0..4).map(n).collect();
        let p = obj("MinParity(w)").atom_product(&idx).unwrap();
        assert_eq!(p.kind, ProductKind::Min);
        assert_eq!(p.atoms.len(), 4);
        assert_eq!(p.atom(&n(1)), Some(Atom::TL));
        let single = obj("TL@1").atom_product(&idx).unwrap();
        assert_eq!(single.atoms, vec![(n(1), Atom::TL)]);
        assert!(obj("maxlex{0:minlex{0:TW@0}}").atom_product(&idx).is_err());
    }
}
