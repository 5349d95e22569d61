//! Program trees over nondeterminism and state.
//!
//! A [`Prog`] is a finite syntax tree whose nodes are `return`, failure,
//! binary choice, `get` and `put`. It means nothing on its own; a handler
//! (see [`crate::handler`]) assigns the denotation. Sequencing is done by
//! grafting: [`Prog::bind`] replaces every `Ret` leaf with the tree produced
//! by the continuation, so the three monad laws hold on the syntax itself.
//!
//! `Get` holds its continuation as a function value. Grafting under a `Get`
//! composes the continuation instead of evaluating it, which makes the
//! substitution under `Get` happen on demand when a handler supplies the
//! state.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::CalcError;

/// Bound shared by every result and state type a program may carry.
pub trait Value: Clone + Send + Sync + 'static {}

impl<T: Clone + Send + Sync + 'static> Value for T {}

/// Continuation stored in a `Get` node.
pub struct Cont<S, A>(ContFn<S, A>);

type ContFn<S, A> = Arc<dyn Fn(&S) -> Prog<S, A> + Send + Sync>;

impl<S, A> Cont<S, A> {
    pub fn new(f: impl Fn(&S) -> Prog<S, A> + Send + Sync + 'static) -> Self {
        Cont(Arc::new(f))
    }

    pub fn apply(&self, s: &S) -> Prog<S, A> {
        (self.0)(s)
    }
}

impl<S, A> Clone for Cont<S, A> {
    fn clone(&self) -> Self {
        Cont(Arc::clone(&self.0))
    }
}

/// An effectful computation over state `S` producing values of type `A`.
pub enum Prog<S, A> {
    Ret(A),
    Fail,
    Choice(Arc<Prog<S, A>>, Arc<Prog<S, A>>),
    Get(Cont<S, A>),
    Put(S, Arc<Prog<S, A>>),
}

impl<S: Clone, A: Clone> Clone for Prog<S, A> {
    fn clone(&self) -> Self {
        match self {
            Prog::Ret(a) => Prog::Ret(a.clone()),
            Prog::Fail => Prog::Fail,
            Prog::Choice(l, r) => Prog::Choice(Arc::clone(l), Arc::clone(r)),
            Prog::Get(k) => Prog::Get(k.clone()),
            Prog::Put(s, c) => Prog::Put(s.clone(), Arc::clone(c)),
        }
    }
}

impl<S: fmt::Debug, A: fmt::Debug> fmt::Debug for Prog<S, A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prog::Ret(a) => write!(f, "(ret {a:?})"),
            Prog::Fail => write!(f, "(fail)"),
            Prog::Choice(l, r) => write!(f, "(choice {l:?} {r:?})"),
            Prog::Get(_) => write!(f, "(get <fn>)"),
            Prog::Put(s, c) => write!(f, "(put {s:?} {c:?})"),
        }
    }
}

type Kont<S, A, B> = Arc<dyn Fn(A) -> Prog<S, B> + Send + Sync>;

/// `return a`.
pub fn ret<S, A>(a: A) -> Prog<S, A> {
    Prog::Ret(a)
}

/// The failing computation.
pub fn fail<S, A>() -> Prog<S, A> {
    Prog::Fail
}

/// Nondeterministic choice between two computations.
pub fn choice<S, A>(m: Prog<S, A>, n: Prog<S, A>) -> Prog<S, A> {
    Prog::Choice(Arc::new(m), Arc::new(n))
}

/// Reads the current state.
pub fn get<S: Value>() -> Prog<S, S> {
    Prog::Get(Cont::new(|s: &S| Prog::Ret(s.clone())))
}

/// Overwrites the state.
pub fn put<S>(s: S) -> Prog<S, ()> {
    Prog::Put(s, Arc::new(Prog::Ret(())))
}

/// `get >>= k`, without going through an intermediate `Ret`.
pub fn get_then<S, A>(k: impl Fn(&S) -> Prog<S, A> + Send + Sync + 'static) -> Prog<S, A> {
    Prog::Get(Cont::new(k))
}

/// Kleisli composition `f >=> g`.
pub fn kleisli<S, A, B, C, F, G>(f: F, g: G) -> impl Fn(A) -> Prog<S, C> + Send + Sync + 'static
where
    S: Value,
    B: Value,
    C: Value,
    F: Fn(A) -> Prog<S, B> + Send + Sync + 'static,
    G: Fn(B) -> Prog<S, C> + Send + Sync + 'static,
{
    let g: Kont<S, B, C> = Arc::new(g);
    move |x| f(x).graft(&g)
}

impl<S: Value, A: Value> Prog<S, A> {
    /// `m >>= k`: grafts `k(a)` at every `Ret(a)` leaf.
    pub fn bind<B, K>(&self, k: K) -> Prog<S, B>
    where
        B: Value,
        K: Fn(A) -> Prog<S, B> + Send + Sync + 'static,
    {
        let k: Kont<S, A, B> = Arc::new(k);
        self.graft(&k)
    }

    fn graft<B: Value>(&self, k: &Kont<S, A, B>) -> Prog<S, B> {
        match self {
            Prog::Ret(a) => k(a.clone()),
            Prog::Fail => Prog::Fail,
            Prog::Choice(l, r) => Prog::Choice(Arc::new(l.graft(k)), Arc::new(r.graft(k))),
            Prog::Get(c) => {
                let c = c.clone();
                let k = Arc::clone(k);
                Prog::Get(Cont::new(move |s| c.apply(s).graft(&k)))
            }
            Prog::Put(s, c) => Prog::Put(s.clone(), Arc::new(c.graft(k))),
        }
    }

    /// `m >> n`.
    pub fn then<B: Value>(&self, n: Prog<S, B>) -> Prog<S, B> {
        self.bind(move |_| n.clone())
    }

    /// `f <$> m`.
    pub fn map<B, F>(&self, f: F) -> Prog<S, B>
    where
        B: Value,
        F: Fn(A) -> B + Send + Sync + 'static,
    {
        self.bind(move |a| Prog::Ret(f(a)))
    }

    /// `m [] n`.
    pub fn or(self, n: Prog<S, A>) -> Prog<S, A> {
        choice(self, n)
    }

    /// Number of nodes, with `Get` continuations tabulated over `states`.
    pub fn size_over(&self, states: &[S]) -> usize {
        match self {
            Prog::Ret(_) | Prog::Fail => 1,
            Prog::Choice(l, r) => 1 + l.size_over(states) + r.size_over(states),
            Prog::Get(c) => 1 + states.iter().map(|s| c.apply(s).size_over(states)).sum::<usize>(),
            Prog::Put(_, c) => 1 + c.size_over(states),
        }
    }

    /// Values at the `Ret` leaves, with `Get` continuations tabulated over `states`.
    pub fn leaf_values(&self, states: &[S]) -> Vec<A> {
        let mut out = Vec::new();
        self.collect_leaves(states, &mut out);
        out
    }

    fn collect_leaves(&self, states: &[S], out: &mut Vec<A>) {
        match self {
            Prog::Ret(a) => out.push(a.clone()),
            Prog::Fail => {}
            Prog::Choice(l, r) => {
                l.collect_leaves(states, out);
                r.collect_leaves(states, out);
            }
            Prog::Get(c) => {
                for s in states {
                    c.apply(s).collect_leaves(states, out);
                }
            }
            Prog::Put(_, c) => c.collect_leaves(states, out),
        }
    }

    /// The set of effects that occur syntactically in the program.
    ///
    /// `Get` continuations are scanned at every state of `domain`; an
    /// unbounded domain can only be handled if the scan is unnecessary
    /// because both effect kinds have already been seen.
    pub fn effect_footprint(&self, domain: &StateDomain<S>) -> Result<EffectSet, CalcError> {
        let mut found = EffectSet::new();
        self.scan_effects(domain, &mut found)?;
        Ok(found)
    }

    fn scan_effects(&self, domain: &StateDomain<S>, found: &mut EffectSet) -> Result<(), CalcError> {
        match self {
            Prog::Ret(_) => Ok(()),
            Prog::Fail => {
                found.insert(EffectKind::Nondet);
                Ok(())
            }
            Prog::Choice(l, r) => {
                found.insert(EffectKind::Nondet);
                l.scan_effects(domain, found)?;
                r.scan_effects(domain, found)
            }
            Prog::Get(c) => {
                found.insert(EffectKind::StateEff);
                if found.is_full() {
                    return Ok(());
                }
                match domain {
                    StateDomain::Finite(states) => {
                        for s in states {
                            c.apply(s).scan_effects(domain, found)?;
                        }
                        Ok(())
                    }
                    StateDomain::Unbounded => Err(CalcError::UnboundedStateDomain),
                }
            }
            Prog::Put(_, c) => {
                found.insert(EffectKind::StateEff);
                c.scan_effects(domain, found)
            }
        }
    }
}

/// The two effect kinds a program may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EffectKind {
    Nondet,
    StateEff,
}

impl fmt::Display for EffectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EffectKind::Nondet => f.write_str("nondet"),
            EffectKind::StateEff => f.write_str("state"),
        }
    }
}

/// A set of [`EffectKind`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EffectSet(BTreeSet<EffectKind>);

impl EffectSet {
    pub fn new() -> Self {
        EffectSet(BTreeSet::new())
    }

    pub fn nondet() -> Self {
        [EffectKind::Nondet].into_iter().collect()
    }

    pub fn state() -> Self {
        [EffectKind::StateEff].into_iter().collect()
    }

    pub fn both() -> Self {
        [EffectKind::Nondet, EffectKind::StateEff].into_iter().collect()
    }

    pub fn insert(&mut self, kind: EffectKind) {
        self.0.insert(kind);
    }

    pub fn contains(&self, kind: EffectKind) -> bool {
        self.0.contains(&kind)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &EffectSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &EffectSet) -> EffectSet {
        EffectSet(self.0.union(&other.0).copied().collect())
    }

    fn is_full(&self) -> bool {
        self.0.len() == 2
    }
}

impl FromIterator<EffectKind> for EffectSet {
    fn from_iter<I: IntoIterator<Item = EffectKind>>(iter: I) -> Self {
        EffectSet(iter.into_iter().collect())
    }
}

impl fmt::Display for EffectSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("}")
    }
}

/// The states over which `Get` continuations may be tabulated.
#[derive(Debug, Clone)]
pub enum StateDomain<S> {
    Finite(Vec<S>),
    Unbounded,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handler::{prog_equal, run_local, Bag};

    fn states() -> Vec<i64> {
        vec![0, 1, 2, 3]
    }

    #[test]
    fn ret_runs_to_singleton() {
        let m: Prog<i64, i64> = ret(3);
        assert_eq!(run_local(&m, 0), Bag::from(vec![(3, 0)]));
    }

    #[test]
    fn bind_on_ret_applies_continuation() {
        let m: Prog<i64, i64> = ret(3);
        let lhs = m.bind(|x| ret(x + 1));
        assert!(prog_equal(&lhs, &ret(4), &states()));
    }

    #[test]
    fn bind_on_fail_is_fail() {
        let m: Prog<i64, i64> = fail();
        let lhs = m.bind(|x| ret(x + 1));
        assert!(matches!(lhs, Prog::Fail));
    }

    #[test]
    fn bind_distributes_into_choice() {
        let m: Prog<i64, i64> = choice(ret(1), ret(2));
        let lhs = m.bind(|x| ret(2 * x));
        assert!(prog_equal(&lhs, &choice(ret(2), ret(4)), &states()));
    }

    #[test]
    fn seq_examples() {
        let m: Prog<i64, i64> = ret(0);
        assert!(prog_equal(&m.then(ret(7)), &ret(7), &states()));
        let f: Prog<i64, i64> = fail();
        assert!(prog_equal(&f.then(ret(7)), &fail(), &states()));
        let lhs = put(2).then(get());
        let rhs = put(2).then(ret(2));
        assert!(prog_equal(&lhs, &rhs, &states()));
    }

    #[test]
    fn map_examples() {
        let m: Prog<i64, i64> = ret(2);
        assert!(prog_equal(&m.map(|x| x + 1), &ret(3), &states()));
        let m: Prog<i64, i64> = choice(get(), put(3).then(ret(1)));
        let f = |x: i64| x * 3;
        let g = |x: i64| x - 1;
        assert!(prog_equal(&m.map(move |x| f(g(x))), &m.map(g).map(f), &states()));
    }

    #[test]
    fn kleisli_identities() {
        let f = |x: i64| -> Prog<i64, i64> { choice(ret(x), put(x).then(ret(x + 1))) };
        let left = kleisli(ret, f);
        let right = kleisli(f, ret);
        for x in 0..4 {
            assert!(prog_equal(&left(x), &f(x), &states()));
            assert!(prog_equal(&right(x), &f(x), &states()));
        }
    }

    #[test]
    fn state_examples() {
        let m = put(1).then(get::<i64>());
        assert_eq!(run_local(&m, 0), Bag::from(vec![(1, 1)]));
        let gp = get::<i64>().bind(put);
        assert!(prog_equal(&gp, &ret(()), &states()));
        assert!(prog_equal(&put(1).then(put(2)), &put(2), &states()));
    }

    #[test]
    fn choice_keeps_multiplicity() {
        let m: Prog<i64, i64> = choice(ret(1), ret(1));
        assert_eq!(run_local(&m, 0), Bag::from(vec![(1, 0), (1, 0)]));
    }

    #[test]
    fn footprint_examples() {
        let d = StateDomain::Finite(states());
        let m: Prog<i64, i64> = ret(1);
        assert!(m.effect_footprint(&d).unwrap().is_empty());
        let m: Prog<i64, i64> = choice(fail(), ret(1));
        assert_eq!(m.effect_footprint(&d).unwrap(), EffectSet::nondet());
        let m = get::<i64>().bind(put);
        assert_eq!(m.effect_footprint(&d).unwrap(), EffectSet::state());
    }

    #[test]
    fn footprint_scans_get_continuations() {
        let d = StateDomain::Finite(states());
        let m: Prog<i64, i64> = get_then(|s| if *s == 3 { fail() } else { ret(*s) });
        assert_eq!(m.effect_footprint(&d).unwrap(), EffectSet::both());
    }

    #[test]
    fn footprint_on_unbounded_domain() {
        let m: Prog<i64, i64> = get();
        assert_eq!(m.effect_footprint(&StateDomain::Unbounded), Err(CalcError::UnboundedStateDomain));
        // no scan needed once both kinds are known
        let m: Prog<i64, i64> = choice(fail(), get());
        assert_eq!(m.effect_footprint(&StateDomain::Unbounded).unwrap(), EffectSet::both());
        // nondet-only programs never need the domain
        let m: Prog<i64, i64> = choice(fail(), ret(2));
        assert_eq!(m.effect_footprint(&StateDomain::Unbounded).unwrap(), EffectSet::nondet());
    }
}
