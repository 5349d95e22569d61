//! Local-state denotation and program equality.
//!
//! The state handler runs inside the nondeterminism handler, so every
//! branch of a choice starts from the state current at the choice point and
//! its updates never leak into sibling branches. A program denotes a map
//! from initial states to bags of `(value, final state)` pairs; two programs
//! are equal when these bags agree on every initial state considered.
//!
//! Bags, not lists: right-distributivity forces choice to be commutative,
//! which only holds if results are compared without regard to order.

use std::collections::BTreeMap;

use crate::prog::{Prog, Value};

/// A finite multiset.
///
/// Items are kept in the order the handler produced them (left-to-right over
/// choices) so raw runs are reproducible, but equality ignores that order.
#[derive(Debug, Clone, Default)]
pub struct Bag<T> {
    items: Vec<T>,
}

impl<T> Bag<T> {
    pub fn new() -> Self {
        Bag { items: Vec::new() }
    }

    pub fn push(&mut self, item: T) {
        self.items.push(item);
    }

    /// Multiset union.
    pub fn union(mut self, other: Bag<T>) -> Bag<T> {
        self.items.extend(other.items);
        self
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.items.iter()
    }

    /// Items in production order.
    pub fn into_vec(self) -> Vec<T> {
        self.items
    }
}

impl<T: Ord + Clone> Bag<T> {
    /// Items in ascending order.
    pub fn sorted(&self) -> Vec<T> {
        let mut v = self.items.clone();
        v.sort();
        v
    }

    pub fn multiplicities(&self) -> BTreeMap<&T, usize> {
        let mut counts = BTreeMap::new();
        for item in &self.items {
            *counts.entry(item).or_insert(0) += 1;
        }
        counts
    }

    pub fn multiplicity(&self, item: &T) -> usize {
        self.items.iter().filter(|x| *x == item).count()
    }
}

impl<T: Ord + Clone> PartialEq for Bag<T> {
    fn eq(&self, other: &Self) -> bool {
        bag_equal(self, other)
    }
}

impl<T: Ord + Clone> Eq for Bag<T> {}

impl<T> From<Vec<T>> for Bag<T> {
    fn from(items: Vec<T>) -> Self {
        Bag { items }
    }
}

impl<T> FromIterator<T> for Bag<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Bag { items: iter.into_iter().collect() }
    }
}

impl<T> IntoIterator for Bag<T> {
    type Item = T;
    type IntoIter = std::vec::IntoIter<T>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.into_iter()
    }
}

/// True iff every element occurs equally often in both bags.
pub fn bag_equal<T: Ord + Clone>(x: &Bag<T>, y: &Bag<T>) -> bool {
    x.len() == y.len() && x.multiplicities() == y.multiplicities()
}

/// An interpretation of [`Prog`] into bags of `(value, final state)` pairs.
///
/// The library ships only [`LocalState`]; the trait exists so the law
/// checker can be pointed at other handler stacks.
pub trait Handler: Sync {
    fn run<S: Value, A: Value>(&self, m: &Prog<S, A>, s0: S) -> Bag<(A, S)>;
}

/// State handled inside nondeterminism: each branch owns its state.
#[derive(Debug, Clone, Copy, Default)]
pub struct LocalState;

impl Handler for LocalState {
    fn run<S: Value, A: Value>(&self, m: &Prog<S, A>, s0: S) -> Bag<(A, S)> {
        run_local(m, s0)
    }
}

/// Runs `m` from `s0` under the local-state handler stack.
pub fn run_local<S: Value, A: Value>(m: &Prog<S, A>, s0: S) -> Bag<(A, S)> {
    let mut out = Bag::new();
    run_into(m, s0, &mut out);
    out
}

fn run_into<S: Value, A: Value>(m: &Prog<S, A>, s: S, out: &mut Bag<(A, S)>) {
    match m {
        Prog::Ret(a) => out.push((a.clone(), s)),
        Prog::Fail => {}
        Prog::Choice(l, r) => {
            run_into(l, s.clone(), out);
            run_into(r, s, out);
        }
        Prog::Get(k) => {
            let next = k.apply(&s);
            run_into(&next, s, out);
        }
        Prog::Put(s1, c) => run_into(c, s1.clone(), out),
    }
}

/// A state on which two programs disagree, with both denotations.
#[derive(Debug, Clone)]
pub struct Difference<S, A> {
    pub state: S,
    pub lhs: Bag<(A, S)>,
    pub rhs: Bag<(A, S)>,
}

/// The first state in `states` on which `m` and `n` have different
/// denotations under handler `h`.
pub fn first_difference<H, S, A>(h: &H, m: &Prog<S, A>, n: &Prog<S, A>, states: &[S]) -> Option<Difference<S, A>>
where
    H: Handler + ?Sized,
    S: Value + Ord,
    A: Value + Ord,
{
    states.iter().find_map(|s| {
        let lhs = h.run(m, s.clone());
        let rhs = h.run(n, s.clone());
        (!bag_equal(&lhs, &rhs)).then(|| Difference { state: s.clone(), lhs, rhs })
    })
}

/// Denotational equality under the local-state handler, checked on every
/// state in `states`.
///
/// # Panics
///
/// If `states` is empty: equality over no states says nothing.
pub fn prog_equal<S, A>(m: &Prog<S, A>, n: &Prog<S, A>, states: &[S]) -> bool
where
    S: Value + Ord,
    A: Value + Ord,
{
    assert!(!states.is_empty(), "prog_equal needs at least one initial state");
    first_difference(&LocalState, m, n, states).is_none()
}
