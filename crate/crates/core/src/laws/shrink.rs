//! Greedy shrinking of failing law environments.
//!
//! Each step tries single edits (a subterm replaced by a leaf or by one of
//! its children, a `ret` value replaced by the first domain value, a list
//! element dropped) and keeps the first edit under which the case still
//! fails. Every edit strictly reduces the environment's total size, or keeps
//! it and reduces the number of non-default `ret` values, so shrinking
//! terminates.

use crate::prog::{EffectKind, EffectSet};

use super::env::{Binding, Env};
use super::term::Term;

/// Upper bound on accepted edits, far above anything default-sized cases need.
const MAX_STEPS: usize = 10_000;

/// Shrinks `env` while `fails` keeps returning true for the candidate.
pub fn shrink(mut env: Env, default: i64, fails: impl Fn(&Env) -> bool) -> Env {
    for _ in 0..MAX_STEPS {
        match candidates(&env, default).into_iter().find(|c| fails(c)) {
            Some(smaller) => env = smaller,
            None => break,
        }
    }
    env
}

fn candidates(env: &Env, default: i64) -> Vec<Env> {
    let mut out = Vec::new();
    for (i, (_, binding)) in env.bindings.iter().enumerate() {
        let replaced = |b: Binding| {
            let mut e = env.clone();
            e.bindings[i].1 = b;
            e
        };
        match binding {
            Binding::Prog { term, footprint } => {
                for t in term_edits(term, footprint, default) {
                    out.push(replaced(Binding::Prog { term: t, footprint: footprint.clone() }));
                }
            }
            Binding::Kont { table, footprint } => {
                for (j, (_, t)) in table.entries.iter().enumerate() {
                    for t in term_edits(t, footprint, default) {
                        let mut table = table.clone();
                        table.entries[j].1 = t;
                        out.push(replaced(Binding::Kont { table, footprint: footprint.clone() }));
                    }
                }
            }
            Binding::Kont2 { table, footprint } => {
                for (j, (_, t)) in table.entries.iter().enumerate() {
                    for t in term_edits(t, footprint, default) {
                        let mut table = table.clone();
                        table.entries[j].1 = t;
                        out.push(replaced(Binding::Kont2 { table, footprint: footprint.clone() }));
                    }
                }
            }
            Binding::List(xs) => {
                for j in 0..xs.len() {
                    let mut ys = xs.clone();
                    ys.remove(j);
                    out.push(replaced(Binding::List(ys)));
                }
            }
            _ => {}
        }
    }
    out
}

/// Single-position edits of `t`, largest reductions first.
fn term_edits(t: &Term, footprint: &EffectSet, default: i64) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Ret(v) if *v != default => out.push(Term::Ret(default)),
        Term::Ret(_) | Term::Fail => {}
        Term::Choice(l, r) => {
            out.push(Term::Ret(default));
            if footprint.contains(EffectKind::Nondet) {
                out.push(Term::Fail);
            }
            out.push((**l).clone());
            out.push((**r).clone());
            for l2 in term_edits(l, footprint, default) {
                out.push(Term::Choice(Box::new(l2), r.clone()));
            }
            for r2 in term_edits(r, footprint, default) {
                out.push(Term::Choice(l.clone(), Box::new(r2)));
            }
        }
        Term::Get(table) => {
            out.push(Term::Ret(default));
            if footprint.contains(EffectKind::Nondet) {
                out.push(Term::Fail);
            }
            out.extend(table.iter().map(|(_, c)| c.clone()));
            for (j, (_, c)) in table.iter().enumerate() {
                for c2 in term_edits(c, footprint, default) {
                    let mut table = table.clone();
                    table[j].1 = c2;
                    out.push(Term::Get(table));
                }
            }
        }
        Term::Put(s, c) => {
            out.push(Term::Ret(default));
            if footprint.contains(EffectKind::Nondet) {
                out.push(Term::Fail);
            }
            out.push((**c).clone());
            for c2 in term_edits(c, footprint, default) {
                out.push(Term::put(*s, c2));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prog_env(term: Term, footprint: EffectSet) -> Env {
        Env::new().with("m", Binding::Prog { term, footprint })
    }

    fn uses_put(t: &Term) -> bool {
        match t {
            Term::Put(..) => true,
            Term::Choice(l, r) => uses_put(l) || uses_put(r),
            Term::Get(table) => table.iter().any(|(_, c)| uses_put(c)),
            _ => false,
        }
    }

    #[test]
    fn shrinks_to_the_essential_node() {
        let big = Term::choice(Term::Get(vec![(0, Term::Ret(2)), (1, Term::put(3, Term::Ret(1)))]), Term::choice(Term::Fail, Term::Ret(3)));
        let small = shrink(prog_env(big, EffectSet::both()), 0, |e| uses_put(e.term("m")));
        assert_eq!(small.term("m"), &Term::put(3, Term::Ret(0)));
    }

    #[test]
    fn never_introduces_fail_outside_footprint() {
        let t = Term::put(1, Term::Get(vec![(0, Term::Ret(1)), (1, Term::Ret(2))]));
        let small = shrink(prog_env(t, EffectSet::state()), 0, |_| true);
        assert_eq!(small.term("m"), &Term::Ret(0));
        assert!(small.term("m").footprint().is_subset(&EffectSet::state()));
    }

    #[test]
    fn keeps_env_when_nothing_smaller_fails() {
        let t = Term::choice(Term::Ret(1), Term::Ret(2));
        let env = prog_env(t.clone(), EffectSet::nondet());
        let same = shrink(env, 0, |e| e.term("m") == &t);
        assert_eq!(same.term("m"), &t);
    }

    #[test]
    fn drops_list_elements() {
        let env = Env::new().with("xs", Binding::List(vec![4, 1, 4, 2]));
        let small = shrink(env, 0, |e| e.list("xs").contains(&4));
        assert_eq!(small.list("xs"), vec![4]);
    }
}
