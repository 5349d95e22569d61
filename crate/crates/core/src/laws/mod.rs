//! Randomised checking of the algebraic laws behind the derivation.
//!
//! Each law in [`LawId::ALL`] draws an environment of programs and tabulated
//! functions, builds both sides, and compares their denotations on every
//! initial state. Cases run in parallel; each case seeds its own generator
//! from `(seed, law, case index)`, so reports do not depend on scheduling.

mod catalogue;
mod env;
mod gen;
mod shrink;
mod term;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::LawError;
use crate::handler::{Handler, LocalState};

pub use catalogue::{queens_shape_sides, queens_states, render_bag, LawId, Mismatch};
pub use env::{Binding, Env};
pub use gen::{gen_fn, gen_kont, gen_kont2, gen_kont_over, gen_list, gen_op, gen_pred, gen_prog};
pub use shrink::shrink;
pub use term::{BinOp, FnTable, Kont2Table, KontTable, PredTable, Term};

/// Printed above law reports: the commuting theorem is only exercised with
/// state as the other effect.
pub const SUITE_NOTE: &str =
    "note: thm2 pairs nondeterministic programs with state-only partners; state is the only other effect available";

/// Domains and sizes for generated cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzConfig {
    pub value_domain: Vec<i64>,
    pub state_domain: Vec<i64>,
    pub max_depth: usize,
    pub cases: usize,
    pub seed: u64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { value_domain: vec![0, 1, 2, 3], state_domain: vec![0, 1, 2, 3], max_depth: 4, cases: 500, seed: 0 }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<(), LawError> {
        if self.value_domain.is_empty() {
            return Err(LawError::InvalidConfig("value domain is empty"));
        }
        if self.state_domain.is_empty() {
            return Err(LawError::InvalidConfig("state domain is empty"));
        }
        if self.max_depth == 0 {
            return Err(LawError::InvalidConfig("max depth must be at least 1"));
        }
        Ok(())
    }

    /// The generator for one case; a pure function of seed, law and index.
    pub fn case_rng(&self, law: LawId, case: usize) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&fnv1a(law.name().as_bytes()).to_le_bytes());
        key[16..24].copy_from_slice(&(case as u64).to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(*b)).wrapping_mul(0x0100_0000_01b3))
}

/// One failing case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: usize,
    /// The environment as generated.
    pub env: String,
    /// The environment after shrinking; equal to `env` for all but the first
    /// failure of a law, which is the only one shrunk.
    pub shrunk: String,
    /// Deepest program in the shrunk environment.
    pub depth: usize,
    pub state: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of checking one law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law_id: LawId,
    pub cases_run: usize,
    pub failures: Vec<Failure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the named laws under the local-state handler.
pub fn run_suite<T: AsRef<str>>(cfg: &FuzzConfig, names: &[T]) -> Result<Vec<LawReport>, LawError> {
    let ids = names.iter().map(|n| LawId::parse(n.as_ref())).collect::<Result<Vec<_>, _>>()?;
    run_suite_with(&LocalState, cfg, &ids)
}

/// Checks `ids` under handler `h`, in the given order.
pub fn run_suite_with<H: Handler + ?Sized>(h: &H, cfg: &FuzzConfig, ids: &[LawId]) -> Result<Vec<LawReport>, LawError> {
    cfg.validate()?;
    Ok(ids.iter().map(|id| run_law(h, cfg, *id)).collect())
}

fn run_law<H: Handler + ?Sized>(h: &H, cfg: &FuzzConfig, id: LawId) -> LawReport {
    let outcomes: Vec<Option<(usize, crate::laws::Env, Mismatch)>> = (0..cfg.cases)
        .into_par_iter()
        .map(|case| {
            let env = id.generate(cfg, &mut cfg.case_rng(id, case));
            id.check(h, cfg, &env).map(|m| (case, env, m))
        })
        .collect();
    let mut failures = Vec::new();
    for (case, env, mismatch) in outcomes.into_iter().flatten() {
        let (shrunk, mismatch) = if failures.is_empty() {
            let small = shrink(env.clone(), cfg.value_domain[0], |e| id.check(h, cfg, e).is_some());
            let m = id.check(h, cfg, &small).expect("shrinking keeps the case failing");
            (small, m)
        } else {
            (env.clone(), mismatch)
        };
        failures.push(Failure {
            case,
            env: env.to_string(),
            shrunk: shrunk.to_string(),
            depth: shrunk.depth(),
            state: mismatch.state,
            lhs: mismatch.lhs,
            rhs: mismatch.rhs,
        });
    }
    LawReport { law_id: id, cases_run: cfg.cases, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handler::Bag;
    use crate::prog::{Prog, Value};

    /// Threads one state through all branches, left to right: state handled
    /// outside nondeterminism. Each result carries the state current when it
    /// was produced.
    struct GlobalState;

    impl Handler for GlobalState {
        fn run<S: Value, A: Value>(&self, m: &Prog<S, A>, s0: S) -> Bag<(A, S)> {
            fn go<S: Value, A: Value>(m: &Prog<S, A>, s: S, out: &mut Vec<(A, S)>) -> S {
                match m {
                    Prog::Ret(a) => {
                        out.push((a.clone(), s.clone()));
                        s
                    }
                    Prog::Fail => s,
                    Prog::Choice(l, r) => {
                        let s = go(l, s, out);
                        go(r, s, out)
                    }
                    Prog::Get(k) => go(&k.apply(&s), s, out),
                    Prog::Put(s1, c) => go(c, s1.clone(), out),
                }
            }
            let mut out = Vec::new();
            go(m, s0, &mut out);
            Bag::from(out)
        }
    }

    fn small() -> FuzzConfig {
        FuzzConfig { cases: 60, seed: 5, ..FuzzConfig::default() }
    }

    #[test]
    fn validation() {
        assert!(FuzzConfig::default().validate().is_ok());
        let bad = FuzzConfig { value_domain: vec![], ..FuzzConfig::default() };
        assert!(matches!(bad.validate(), Err(LawError::InvalidConfig(_))));
        let bad = FuzzConfig { max_depth: 0, ..FuzzConfig::default() };
        assert!(matches!(run_suite(&bad, &["eq01"]), Err(LawError::InvalidConfig(_))));
    }

    #[test]
    fn unknown_law_is_rejected() {
        assert_eq!(run_suite(&small(), &["eq01", "eq99"]), Err(LawError::UnknownLaw("eq99".into())));
    }

    #[test]
    fn monad_and_nondeterminism_laws_pass() {
        let names = ["eq01", "eq02", "eq03", "eq04", "eq05", "eq06", "eq18", "eq19"];
        for r in run_suite(&small(), &names).unwrap() {
            assert!(r.passed(), "{:?}", r);
            assert_eq!(r.cases_run, 60);
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let ids = [LawId::Eq18, LawId::Eq13];
        let a = run_suite_with(&GlobalState, &small(), &ids).unwrap();
        let b = run_suite_with(&GlobalState, &small(), &ids).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn case_rngs_differ_by_law_and_index() {
        use rand::Rng;
        let cfg = small();
        let draw = |id, i| cfg.case_rng(id, i).gen::<u64>();
        assert_ne!(draw(LawId::Eq01, 0), draw(LawId::Eq01, 1));
        assert_ne!(draw(LawId::Eq01, 0), draw(LawId::Eq02, 0));
        assert_eq!(draw(LawId::Eq07, 3), draw(LawId::Eq07, 3));
    }

    #[test]
    fn global_state_breaks_right_distributivity() {
        use crate::handler::first_difference;
        use crate::prog::{choice, get, put, ret};
        // hand-made: m = get, f1 s = put (s+1) >> get, f2 = return; the
        // right-hand side re-reads the state f1 left behind
        let m: Prog<i64, i64> = get();
        let f1 = |s: i64| put(s + 1).then(get());
        let lhs = m.bind(move |x| choice(f1(x), ret(x)));
        let rhs = choice(m.bind(f1), m.bind(ret));
        assert!(first_difference(&GlobalState, &lhs, &rhs, &[0]).is_some());
        assert!(first_difference(&LocalState, &lhs, &rhs, &[0]).is_none());

        let reports = run_suite_with(&GlobalState, &small(), &[LawId::Eq18]).unwrap();
        let first = &reports[0].failures[0];
        assert!(first.depth <= 3, "{first:?}");
    }
}
