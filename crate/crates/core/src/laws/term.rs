//! Printable program syntax and tabulated functions for the fuzzer.
//!
//! Everything a law quantifies over is generated as data, never as code,
//! so a failing case can be printed and shrunk.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::LawError;
use crate::prog::{choice, fail, get_then, ret, EffectKind, EffectSet, Prog};

/// A program over integer values and integer states, with every `get`
/// continuation written out as a table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Ret(i64),
    Fail,
    Choice(Box<Term>, Box<Term>),
    Get(Vec<(i64, Term)>),
    Put(i64, Box<Term>),
}

impl Term {
    pub fn choice(l: Term, r: Term) -> Term {
        Term::Choice(Box::new(l), Box::new(r))
    }

    pub fn put(s: i64, c: Term) -> Term {
        Term::Put(s, Box::new(c))
    }

    /// The program this term denotes. A `get` reaching a state missing from
    /// its table panics with [`LawError::DomainViolation`].
    pub fn to_prog(&self) -> Prog<i64, i64> {
        match self {
            Term::Ret(v) => ret(*v),
            Term::Fail => fail(),
            Term::Choice(l, r) => choice(l.to_prog(), r.to_prog()),
            Term::Get(table) => {
                let table: Arc<Vec<(i64, Prog<i64, i64>)>> = Arc::new(table.iter().map(|(s, t)| (*s, t.to_prog())).collect());
                get_then(move |s: &i64| lookup(&table, *s).unwrap_or_else(|e| panic!("{e}")).clone())
            }
            Term::Put(s, c) => Prog::Put(*s, Arc::new(c.to_prog())),
        }
    }

    /// Nodes on the longest root-to-leaf path; a leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Ret(_) | Term::Fail => 1,
            Term::Choice(l, r) => 1 + l.depth().max(r.depth()),
            Term::Get(table) => 1 + table.iter().map(|(_, t)| t.depth()).max().unwrap_or(0),
            Term::Put(_, c) => 1 + c.depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Ret(_) | Term::Fail => 1,
            Term::Choice(l, r) => 1 + l.size() + r.size(),
            Term::Get(table) => 1 + table.iter().map(|(_, t)| t.size()).sum::<usize>(),
            Term::Put(_, c) => 1 + c.size(),
        }
    }

    /// Effects used anywhere in the term.
    pub fn footprint(&self) -> EffectSet {
        let mut found = EffectSet::new();
        self.collect_effects(&mut found);
        found
    }

    fn collect_effects(&self, found: &mut EffectSet) {
        match self {
            Term::Ret(_) => {}
            Term::Fail => found.insert(EffectKind::Nondet),
            Term::Choice(l, r) => {
                found.insert(EffectKind::Nondet);
                l.collect_effects(found);
                r.collect_effects(found);
            }
            Term::Get(table) => {
                found.insert(EffectKind::StateEff);
                for (_, t) in table {
                    t.collect_effects(found);
                }
            }
            Term::Put(_, c) => {
                found.insert(EffectKind::StateEff);
                c.collect_effects(found);
            }
        }
    }
}

type Pair = (i64, i64);

fn lookup<T>(table: &[(i64, T)], key: i64) -> Result<&T, LawError> {
    table.iter().find(|(k, _)| *k == key).map(|(_, v)| v).ok_or(LawError::DomainViolation { value: key })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Ret(v) => write!(f, "(ret {v})"),
            Term::Fail => f.write_str("(fail)"),
            Term::Choice(l, r) => write!(f, "(choice {l} {r})"),
            Term::Get(table) => {
                f.write_str("(get")?;
                for (s, t) in table {
                    write!(f, " [{s}: {t}]")?;
                }
                f.write_str(")")
            }
            Term::Put(s, c) => write!(f, "(put {s} {c})"),
        }
    }
}

/// A function from integers to programs, given by its table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KontTable {
    pub entries: Vec<(i64, Term)>,
}

impl KontTable {
    pub fn apply(&self, v: i64) -> Result<&Term, LawError> {
        lookup(&self.entries, v)
    }

    /// The table as a continuation; panics outside its domain.
    pub fn to_fn(&self) -> impl Fn(i64) -> Prog<i64, i64> + Send + Sync + Clone + 'static {
        let table: Arc<Vec<(i64, Prog<i64, i64>)>> = Arc::new(self.entries.iter().map(|(v, t)| (*v, t.to_prog())).collect());
        move |v| lookup(&table, v).unwrap_or_else(|e| panic!("{e}")).clone()
    }

    pub fn depth(&self) -> usize {
        self.entries.iter().map(|(_, t)| t.depth()).max().unwrap_or(0)
    }
}

impl fmt::Display for KontTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        f.write_str("}")
    }
}

/// A curried two-argument function to programs, given by its table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Kont2Table {
    pub entries: Vec<((i64, i64), Term)>,
}

impl Kont2Table {
    pub fn apply(&self, a: i64, b: i64) -> Result<&Term, LawError> {
        self.entries
            .iter()
            .find(|(k, _)| *k == (a, b))
            .map(|(_, t)| t)
            .ok_or(LawError::DomainViolation { value: if self.entries.iter().any(|((x, _), _)| *x == a) { b } else { a } })
    }

    pub fn to_fn(&self) -> impl Fn(i64, i64) -> Prog<i64, i64> + Send + Sync + Clone + 'static {
        let table: Arc<Vec<(Pair, Prog<i64, i64>)>> = Arc::new(self.entries.iter().map(|(k, t)| (*k, t.to_prog())).collect());
        move |a, b| match table.iter().find(|(k, _)| *k == (a, b)) {
            Some((_, p)) => p.clone(),
            None => panic!("{}", LawError::DomainViolation { value: b }),
        }
    }

    pub fn depth(&self) -> usize {
        self.entries.iter().map(|(_, t)| t.depth()).max().unwrap_or(0)
    }
}

impl fmt::Display for Kont2Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, ((a, b), t)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a} {b} -> {t}")?;
        }
        f.write_str("}")
    }
}

/// A pure function on integers, given by its table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FnTable {
    pub entries: Vec<(i64, i64)>,
}

impl FnTable {
    pub fn apply(&self, v: i64) -> Result<i64, LawError> {
        lookup(&self.entries, v).copied()
    }

    pub fn to_fn(&self) -> impl Fn(i64) -> i64 + Send + Sync + Clone + 'static {
        let entries = Arc::new(self.entries.clone());
        move |v| *lookup(&entries, v).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for FnTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a} -> {b}")?;
        }
        f.write_str("}")
    }
}

/// A periodic predicate on all integers: `holds(v) = bits[v mod period]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredTable {
    pub bits: Vec<bool>,
}

impl PredTable {
    pub fn holds(&self, v: i64) -> bool {
        self.bits[v.rem_euclid(self.bits.len() as i64) as usize]
    }

    pub fn to_fn(&self) -> impl Fn(i64) -> bool + Send + Sync + Clone + 'static {
        let p = self.clone();
        move |v| p.holds(v)
    }
}

impl fmt::Display for PredTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mod {} in {{", self.bits.len())?;
        let hits: Vec<String> = self.bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i.to_string()).collect();
        write!(f, "{}}}", hits.join(", "))
    }
}

/// Accumulating operators used as `⊕`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BinOp {
    Add,
    Max,
    /// `(acc * 2 + x) mod 7`
    DoubleAddMod7,
}

impl BinOp {
    pub const ALL: [BinOp; 3] = [BinOp::Add, BinOp::Max, BinOp::DoubleAddMod7];

    pub fn apply(self, acc: i64, x: i64) -> i64 {
        match self {
            BinOp::Add => acc + x,
            BinOp::Max => acc.max(x),
            BinOp::DoubleAddMod7 => (acc * 2 + x).rem_euclid(7),
        }
    }
}

impl fmt::Display for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinOp::Add => "add",
            BinOp::Max => "max",
            BinOp::DoubleAddMod7 => "double-add-mod-7",
        })
    }
}
