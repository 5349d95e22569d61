//! The n-queens puzzle, specified by generate-and-test and solved by the
//! fused backtracker.
//!
//! A placement lists, for each column `0..n`, the row of its queen, so
//! permutations of `0..n` already avoid shared rows and columns. What is
//! left is the diagonals: queen `(c, r)` sits on up-diagonal `c + r` and
//! down-diagonal `c - r`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::combinators::{filt, hylo_m, perm, protect, pruning_step, select, solve, unfold_m, SolveSpec};
use crate::error::CalcError;
use crate::handler::run_local;
use crate::prog::{put, ret, Prog};

/// Row index per column.
pub type Placement = Vec<i64>;

/// Accumulator of the left-to-right safety scan: number of queens placed,
/// and the up and down diagonals they occupy, most recent first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QueensState {
    pub i: i64,
    pub us: Vec<i64>,
    pub ds: Vec<i64>,
}

impl QueensState {
    /// `(0, [], [])`.
    pub fn initial() -> Self {
        QueensState { i: 0, us: Vec::new(), ds: Vec::new() }
    }
}

/// Up-diagonal index of each queen: `zipWith (+) [0..]`.
pub fn ups(xs: &[i64]) -> Vec<i64> {
    xs.iter().zip(0..).map(|(x, c)| c + x).collect()
}

/// Down-diagonal index of each queen: `zipWith (-) [0..]`.
pub fn downs(xs: &[i64]) -> Vec<i64> {
    xs.iter().zip(0..).map(|(x, c)| c - x).collect()
}

pub fn nodup<T: PartialEq>(xs: &[T]) -> bool {
    xs.iter().enumerate().all(|(k, x)| !xs[k + 1..].contains(x))
}

/// No two queens share a diagonal.
pub fn safe(xs: &[i64]) -> bool {
    nodup(&ups(xs)) && nodup(&downs(xs))
}

/// `safe` generalised with an accumulator: the queens of `xs` start at
/// column `i` and must avoid each other as well as the diagonals in `us`
/// and `ds`.
pub fn safe_acc(acc: &QueensState, xs: &[i64]) -> bool {
    let new_us: Vec<i64> = xs.iter().zip(acc.i..).map(|(x, c)| c + x).collect();
    let new_ds: Vec<i64> = xs.iter().zip(acc.i..).map(|(x, c)| c - x).collect();
    nodup(&new_us) && nodup(&new_ds) && new_us.iter().all(|u| !acc.us.contains(u)) && new_ds.iter().all(|d| !acc.ds.contains(d))
}

/// Places the next queen in row `x`: `(i+1, (i+x):us, (i-x):ds)`.
pub fn oplus(st: &QueensState, x: &i64) -> QueensState {
    let mut us = Vec::with_capacity(st.us.len() + 1);
    us.push(st.i + x);
    us.extend_from_slice(&st.us);
    let mut ds = Vec::with_capacity(st.ds.len() + 1);
    ds.push(st.i - x);
    ds.extend_from_slice(&st.ds);
    QueensState { i: st.i + 1, us, ds }
}

/// The newest queen's diagonals are not occupied by an earlier queen.
pub fn ok_check(st: &QueensState) -> Result<bool, CalcError> {
    match (st.us.split_first(), st.ds.split_first()) {
        (Some((u, us)), Some((d, ds))) => Ok(!us.contains(u) && !ds.contains(d)),
        _ => Err(CalcError::EmptyState),
    }
}

/// [`ok_check`] on a state with at least one queen placed.
///
/// # Panics
///
/// On the empty state. Along `solve` it only ever sees states `st ⊕ x`.
pub fn ok(st: &QueensState) -> bool {
    ok_check(st).expect("ok is only checked after a queen is placed")
}

fn rows(n: usize) -> Vec<i64> {
    (0..n as i64).collect()
}

/// Generate-and-test: `perm [0..n-1] >>= filt safe`.
pub fn queens_naive(n: usize) -> Prog<QueensState, Placement> {
    perm(&rows(n)).bind(|xs| filt(|xs: &Placement| safe(xs), xs))
}

/// The n-queens instance of [`SolveSpec`], generating seeds with `generate`.
pub fn queens_spec(
    n: usize,
    generate: impl Fn(&Vec<i64>) -> Prog<QueensState, (i64, Vec<i64>)> + Send + Sync + 'static,
) -> SolveSpec<Vec<i64>, i64, QueensState> {
    SolveSpec::new(|y: &Vec<i64>| y.is_empty(), generate, ok, oplus, QueensState::initial(), rows(n))
        .with_measure(|y: &Vec<i64>| y.len())
        .with_fuel(n)
}

/// The derived backtracker: `solve null select ok (⊕) (0,[],[]) [0..n-1]`.
pub fn queens_derived(n: usize) -> Result<Prog<QueensState, Placement>, CalcError> {
    solve(&queens_spec(n, |y: &Vec<i64>| select(y)))
}

/// Which of the two queens programs to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Naive,
    Derived,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Naive => "naive",
            Variant::Derived => "derived",
        }
    }
}

/// Outcome of one instrumented run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueensRun {
    /// Solutions in lexicographic order.
    pub solutions: Vec<Placement>,
    /// Number of `(element, rest)` splits produced by `select`.
    pub expansions: usize,
}

/// Builds and runs one variant from `(0, [], [])`, counting every split
/// `select` produces, whether while the program is built or while it runs.
pub fn run_counted(n: usize, variant: Variant) -> Result<QueensRun, CalcError> {
    let counter = Arc::new(AtomicUsize::new(0));
    let tally = Arc::clone(&counter);
    let counted_select = move |y: &Vec<i64>| {
        tally.fetch_add(y.len(), Ordering::Relaxed);
        select(y)
    };
    let prog = match variant {
        Variant::Naive => unfold_m(|y: &Vec<i64>| y.is_empty(), counted_select, rows(n), n)?.bind(|xs| filt(|xs: &Placement| safe(xs), xs)),
        // solve's body without its one-off generator probe, which would
        // otherwise count as an extra expansion
        Variant::Derived => protect(put(QueensState::initial()).then(hylo_m(
            pruning_step(ok, oplus),
            ret(Vec::new()),
            |y: &Vec<i64>| y.is_empty(),
            counted_select,
            rows(n),
            n,
        )?)),
    };
    let mut solutions: Vec<Placement> = run_local(&prog, QueensState::initial()).into_iter().map(|(xs, _)| xs).collect();
    solutions.sort();
    Ok(QueensRun { solutions, expansions: counter.load(Ordering::Relaxed) })
}

/// Number of `select` splits a variant performs for board size `n`.
pub fn expansion_count(n: usize, variant: Variant) -> usize {
    run_counted(n, variant).expect("row lists shrink on every step").expansions
}

/// States reachable from `(0, [], [])` by placing at most two queens in rows
/// `0..4`. Used as the initial-state set when comparing queens-shaped
/// programs.
pub fn queens_state_domain() -> Vec<QueensState> {
    let mut out = vec![QueensState::initial()];
    let mut frontier = vec![QueensState::initial()];
    for _ in 0..2 {
        let next: Vec<QueensState> = frontier.iter().flat_map(|s| (0..4).map(move |x| oplus(s, &x))).collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
