//! Acceptance criteria. Each criterion prints one `PASS`/`FAIL` line with
//! its measured value and pinned bound; the test fails if any line fails.

use std::process::Command;
use std::time::{Duration, Instant};

use backtrack_calc::combinators::{foldr_m, pruning_step, select, solve, unfold_m, Deferred, SolveSpec, Step};
use backtrack_calc::handler::{prog_equal, Bag, Handler};
use backtrack_calc::laws::{queens_shape_sides, queens_states, run_suite, run_suite_with, FuzzConfig, LawId};
use backtrack_calc::prog::{ret, Prog, Value};
use backtrack_calc::queens::{expansion_count, ok, oplus, QueensState, Variant};

const LAW_SUITE_BUDGET: Duration = Duration::from_secs(60);
const BOTH_N8_BUDGET: Duration = Duration::from_secs(10);
const DERIVED_N8_BUDGET: Duration = Duration::from_secs(1);
const SHRUNK_DEPTH_BOUND: usize = 3;

fn backtrack(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_backtrack")).args(args).output().expect("binary runs");
    let elapsed = start.elapsed();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"), elapsed)
}

struct Ledger {
    failed: Vec<&'static str>,
}

impl Ledger {
    fn record(&mut self, id: &'static str, pass: bool, detail: String) {
        println!("[{}] {id}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(id);
        }
    }
}

fn cfg500() -> FuzzConfig {
    FuzzConfig { cases: 500, seed: 42, ..FuzzConfig::default() }
}

fn law_suite(l: &mut Ledger) {
    let (code, out, t) = backtrack(&["lawcheck", "--all", "--cases", "500", "--seed", "42"]);
    let law_lines: Vec<&str> = out.lines().filter(|s| !s.starts_with("note:") && !s.starts_with(' ')).collect();
    let passing = law_lines.iter().filter(|s| s.ends_with(" 500 PASS")).count();
    let pass = code == 0 && passing == LawId::ALL.len() && law_lines.len() == LawId::ALL.len() && t < LAW_SUITE_BUDGET;
    l.record(
        "C1 lawcheck --all --cases 500 --seed 42",
        pass,
        format!(
            "{passing}/{} laws pass, exit {code}, {:.2} s (bound < {} s)",
            LawId::ALL.len(),
            t.as_secs_f64(),
            LAW_SUITE_BUDGET.as_secs()
        ),
    );
}

fn suite_line(l: &mut Ledger, id: &'static str, names: &[&str]) {
    let reports = run_suite(&cfg500(), names).expect("registered laws");
    let failures: usize = reports.iter().map(|r| r.failures.len()).sum();
    let cases: usize = reports.iter().map(|r| r.cases_run).sum();
    l.record(id, failures == 0 && cases == 500 * names.len(), format!("{cases} cases, {failures} failures (bound: 0)"));
}

fn exhaustive_queens_shape(l: &mut Ledger) {
    let states = queens_states();
    let mut checked = 0;
    let mut bad = Vec::new();
    for mask in 0u32..64 {
        let seed: Vec<i64> = (0..6).filter(|i| mask & (1 << i) != 0).collect();

        // fused hylomorphism against unfold-then-fold
        let (fused, unfused) = queens_shape_sides(&seed);
        if !prog_equal(&fused, &unfused, states) {
            bad.push(format!("hylo {seed:?}"));
        }

        // solve against generate-and-test
        let spec = SolveSpec::new(|y: &Vec<i64>| y.is_empty(), |y: &Vec<i64>| select(y), ok, oplus, QueensState::initial(), seed.clone())
            .with_measure(|y: &Vec<i64>| y.len());
        if !prog_equal(&solve(&spec).unwrap(), &spec.specification().unwrap(), states) {
            bad.push(format!("solve {seed:?}"));
        }

        // the fused step commutes with the nondeterministic unfold
        let step: Step<QueensState, i64, Vec<i64>> = pruning_step(ok, oplus);
        let n: Prog<QueensState, Vec<i64>> =
            unfold_m(|y: &Vec<i64>| y.is_empty(), |y: &Vec<i64>| select(y), seed.clone(), seed.len()).unwrap();
        let s1 = step.clone();
        let k = move |ys: Vec<i64>| foldr_m(&s1, ret(Vec::new()), &ys);
        for x in 0..6 {
            let (step_l, k_l) = (step.clone(), k.clone());
            let lhs = n.bind(move |ys| step_l(x, Deferred::ready(k_l(ys))));
            let rhs = step(x, Deferred::ready(n.bind(k.clone())));
            if !prog_equal(&lhs, &rhs, states) {
                bad.push(format!("odot x={x} {seed:?}"));
            }
        }
        checked += 1;
    }
    l.record(
        "C4 queens-shaped hylo, solve and fused-step commutation, all 64 seeds over {0..5}",
        bad.is_empty() && checked == 64,
        format!("{checked} seeds x {} initial states, {} mismatches (bound: 0) {bad:?}", states.len(), bad.len()),
    );
}

fn queens_counts(l: &mut Ledger) {
    let expected = [1usize, 0, 0, 2, 10, 4, 40, 92];
    let mut got = Vec::new();
    let mut all_match = true;
    for n in 1..=8 {
        let (code, out, _) = backtrack(&["queens", "--n", &n.to_string(), "--mode", "both", "--count-only"]);
        let lines: Vec<&str> = out.lines().collect();
        got.push(lines.first().and_then(|s| s.parse::<usize>().ok()).unwrap_or(usize::MAX));
        all_match &= code == 0 && lines.get(1) == Some(&"match");
    }
    l.record(
        "C5a queens counts n=1..8 in both modes",
        got == expected && all_match,
        format!("counts {got:?} (expected {expected:?}), every run reports match: {all_match}"),
    );

    let (code, out, t_both) = backtrack(&["queens", "--n", "8", "--mode", "both"]);
    l.record(
        "C5b queens n=8 both modes",
        code == 0 && out.lines().count() == 93 && t_both < BOTH_N8_BUDGET,
        format!("{:.3} s (bound < {} s)", t_both.as_secs_f64(), BOTH_N8_BUDGET.as_secs()),
    );
    let (code, out, t_derived) = backtrack(&["queens", "--n", "8", "--mode", "derived"]);
    l.record(
        "C5c queens n=8 derived",
        code == 0 && out.lines().count() == 92 && t_derived < DERIVED_N8_BUDGET,
        format!("{:.3} s (bound < {} s)", t_derived.as_secs_f64(), DERIVED_N8_BUDGET.as_secs()),
    );
}

fn pruning(l: &mut Ledger) {
    let mut rows = Vec::new();
    let mut strict = true;
    for n in 4..=8 {
        let (naive, derived) = (expansion_count(n, Variant::Naive), expansion_count(n, Variant::Derived));
        strict &= derived < naive;
        rows.push(format!("n={n}: {derived} < {naive}"));
    }
    let runs: Vec<String> = (0..2).map(|_| backtrack(&["queens", "--n", "8", "--mode", "both", "--count-only", "--stats"]).1).collect();
    let stable = runs[0] == runs[1] && runs[0].contains("expansions derived");
    l.record(
        "C6 derived expands fewer nodes than naive for n=4..8, stats deterministic",
        strict && stable,
        format!("{} ; identical --stats output across runs: {stable}", rows.join(", ")),
    );
}

/// State threaded through all branches, left to right: the handler order
/// the local-state laws rule out.
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

fn negative_control(l: &mut Ledger) {
    let reports = run_suite_with(&GlobalState, &cfg500(), &[LawId::Eq18]).unwrap();
    let r = &reports[0];
    let first = r.failures.first();
    let depth = first.map(|f| f.depth);
    let pass = !r.failures.is_empty() && depth.is_some_and(|d| d <= SHRUNK_DEPTH_BOUND);
    l.record(
        "C7 global-state handler fails eq18 with a small counterexample",
        pass,
        format!(
            "{} failing cases of 500, shrunk depth {:?} (bound <= {SHRUNK_DEPTH_BOUND}); counterexample: {}",
            r.failures.len(),
            depth,
            first.map(|f| format!("{} from {}: {} vs {}", f.shrunk, f.state, f.lhs, f.rhs)).unwrap_or_default()
        ),
    );
    // and the local-state handler accepts the very same cases
    let local = run_suite(&cfg500(), &["eq18"]).unwrap();
    l.record(
        "C7b local-state handler passes the same eq18 cases",
        local[0].passed(),
        format!("{} failures (bound: 0)", local[0].failures.len()),
    );
}

#[test]
fn acceptance() {
    let mut l = Ledger { failed: Vec::new() };
    law_suite(&mut l);
    suite_line(&mut l, "C2 protect . scanlM equals return . scanl+ (thm1, 500 cases)", &["thm1"]);
    suite_line(&mut l, "C3 fold/guard fusion and its corollary (thm3, cor4, 500 cases each)", &["thm3", "cor4"]);
    exhaustive_queens_shape(&mut l);
    queens_counts(&mut l);
    pruning(&mut l);
    negative_control(&mut l);
    assert!(l.failed.is_empty(), "failed criteria: {:?}", l.failed);
}
