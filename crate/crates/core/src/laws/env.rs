//! Named bindings a law case quantifies over.

use std::fmt;

use crate::prog::{EffectSet, Prog};

use super::term::{BinOp, FnTable, Kont2Table, KontTable, PredTable, Term};

/// One generated value. Programs and continuations remember the effects they
/// were allowed to use, so shrinking never widens them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Prog { term: Term, footprint: EffectSet },
    Kont { table: KontTable, footprint: EffectSet },
    Kont2 { table: Kont2Table, footprint: EffectSet },
    Fn(FnTable),
    Pred(PredTable),
    Op(BinOp),
    Int(i64),
    List(Vec<i64>),
    Bool(bool),
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Prog { term, .. } => write!(f, "{term}"),
            Binding::Kont { table, .. } => write!(f, "{table}"),
            Binding::Kont2 { table, .. } => write!(f, "{table}"),
            Binding::Fn(t) => write!(f, "{t}"),
            Binding::Pred(p) => write!(f, "{p}"),
            Binding::Op(op) => write!(f, "{op}"),
            Binding::Int(v) => write!(f, "{v}"),
            Binding::List(xs) => write!(f, "{xs:?}"),
            Binding::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// The environment of one law case, in generation order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    pub bindings: Vec<(&'static str, Binding)>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn with(mut self, name: &'static str, b: Binding) -> Self {
        self.bindings.push((name, b));
        self
    }

    pub fn get(&self, name: &str) -> &Binding {
        self.bindings.iter().find(|(n, _)| *n == name).map(|(_, b)| b).unwrap_or_else(|| panic!("law environment has no binding `{name}`"))
    }

    pub fn term(&self, name: &str) -> &Term {
        match self.get(name) {
            Binding::Prog { term, .. } => term,
            other => panic!("`{name}` is not a program: {other:?}"),
        }
    }

    pub fn prog(&self, name: &str) -> Prog<i64, i64> {
        self.term(name).to_prog()
    }

    pub fn kont(&self, name: &str) -> impl Fn(i64) -> Prog<i64, i64> + Send + Sync + Clone + 'static {
        match self.get(name) {
            Binding::Kont { table, .. } => table.to_fn(),
            other => panic!("`{name}` is not a continuation: {other:?}"),
        }
    }

    pub fn kont2(&self, name: &str) -> impl Fn(i64, i64) -> Prog<i64, i64> + Send + Sync + Clone + 'static {
        match self.get(name) {
            Binding::Kont2 { table, .. } => table.to_fn(),
            other => panic!("`{name}` is not a two-argument continuation: {other:?}"),
        }
    }

    pub fn func(&self, name: &str) -> impl Fn(i64) -> i64 + Send + Sync + Clone + 'static {
        match self.get(name) {
            Binding::Fn(t) => t.to_fn(),
            other => panic!("`{name}` is not a function: {other:?}"),
        }
    }

    pub fn pred(&self, name: &str) -> impl Fn(i64) -> bool + Send + Sync + Clone + 'static {
        match self.get(name) {
            Binding::Pred(p) => p.to_fn(),
            other => panic!("`{name}` is not a predicate: {other:?}"),
        }
    }

    pub fn op(&self, name: &str) -> BinOp {
        match self.get(name) {
            Binding::Op(op) => *op,
            other => panic!("`{name}` is not an operator: {other:?}"),
        }
    }

    pub fn int(&self, name: &str) -> i64 {
        match self.get(name) {
            Binding::Int(v) => *v,
            other => panic!("`{name}` is not an integer: {other:?}"),
        }
    }

    pub fn list(&self, name: &str) -> Vec<i64> {
        match self.get(name) {
            Binding::List(xs) => xs.clone(),
            other => panic!("`{name}` is not a list: {other:?}"),
        }
    }

    pub fn flag(&self, name: &str) -> bool {
        match self.get(name) {
            Binding::Bool(b) => *b,
            other => panic!("`{name}` is not a boolean: {other:?}"),
        }
    }

    /// Deepest program anywhere in the environment, including continuation
    /// images; 0 if there are none.
    pub fn depth(&self) -> usize {
        self.bindings
            .iter()
            .map(|(_, b)| match b {
                Binding::Prog { term, .. } => term.depth(),
                Binding::Kont { table, .. } => table.depth(),
                Binding::Kont2 { table, .. } => table.depth(),
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, b)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{name} = {b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_render() {
        let env = Env::new()
            .with("m", Binding::Prog { term: Term::choice(Term::Ret(1), Term::Fail), footprint: EffectSet::nondet() })
            .with("x", Binding::Int(2))
            .with("p", Binding::Bool(true));
        assert_eq!(env.int("x"), 2);
        assert!(env.flag("p"));
        assert_eq!(env.depth(), 2);
        assert_eq!(env.to_string(), "m = (choice (ret 1) (fail)); x = 2; p = true");
    }

    #[test]
    #[should_panic(expected = "no binding `y`")]
    fn missing_binding_panics() {
        Env::new().int("y");
    }
}
