//! The registered laws: how each one generates its environment and what
//! two programs it asserts equal.

use std::fmt::Debug;
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::combinators::{
    cons, filt, foldr_m, guard, hylo_m, odot_step, protect, pruning_step, scanl_m, scanl_plus, scanl_step, select, solve, unfold_m,
    Deferred, SolveSpec, Step,
};
use crate::error::LawError;
use crate::handler::{first_difference, Bag, Handler};
use crate::prog::{choice, fail, get, put, ret, EffectSet, Prog, Value};
use crate::queens::{self, QueensState};

use super::env::{Binding, Env};
use super::gen::{gen_fn, gen_kont, gen_kont2, gen_list, gen_op, gen_pred, gen_prog, pick};
use super::FuzzConfig;

macro_rules! laws {
    ($($variant:ident => $name:literal, $desc:literal;)*) => {
        /// Identifier of a registered law.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub enum LawId { $($variant),* }

        impl LawId {
            /// Every registered law, in report order.
            pub const ALL: &'static [LawId] = &[$(LawId::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(LawId::$variant => $name),* }
            }

            /// The equation checked, in one line.
            pub fn statement(self) -> &'static str {
                match self { $(LawId::$variant => $desc),* }
            }
        }
    };
}

laws! {
    Eq01 => "eq01", "return x >>= k = k x";
    Eq02 => "eq02", "m >>= return = m";
    Eq03 => "eq03", "(m >>= f) >>= g = m >>= (\\x -> f x >>= g)";
    Eq04 => "eq04", "(f . g) <$> m = f <$> (g <$> m)";
    Eq05 => "eq05", "(f <$> m) >>= g = m >>= (g . f)";
    Eq06 => "eq06", "f <$> (m >>= k) = m >>= (\\x -> f <$> k x)";
    Eq07 => "eq07", "(m [] n) [] k = m [] (n [] k)";
    Eq08 => "eq08", "fail [] m = m = m [] fail";
    Eq09 => "eq09", "(m1 [] m2) >>= f = (m1 >>= f) [] (m2 >>= f)";
    Eq10 => "eq10", "fail >>= f = fail";
    Eq11 => "eq11", "guard (p && q) = guard p >> guard q";
    Eq12 => "eq12", "guard p >> (f <$> m) = f <$> (guard p >> m)";
    Eq13 => "eq13", "guard p >> m = m >>= (\\x -> guard p >> return x)";
    Eq14 => "eq14", "put st >> put st' = put st'";
    Eq15 => "eq15", "put st >> get = put st >> return st";
    Eq16 => "eq16", "get >>= put = return ()";
    Eq17 => "eq17", "get >>= (\\st -> get >>= k st) = get >>= (\\st -> k st st)";
    Eq18 => "eq18", "m >>= (\\x -> f1 x [] f2 x) = (m >>= f1) [] (m >>= f2)";
    Eq19 => "eq19", "m >> fail = fail";
    Eq20 => "eq20", "m >>= \\x -> n >>= \\y -> return (x, y) = n >>= \\y -> m >>= \\x -> return (x, y)  (m nondet, n state)";
    Thm1 => "thm1", "return (scanl+ (+) st xs) = protect (scanlM (+) st xs)";
    Thm2 => "thm2", "m >>= \\x -> stmt >>= \\y -> f x y = stmt >>= \\y -> m >>= \\x -> f x y  (m nondet, stmt state)";
    Thm3 => "thm3", "foldr (*) (return []) xs >>= (guard . all ok) >> return xs = foldr (.) (return []) xs";
    Cor4 => "cor4", "filt (all ok . scanl+ (+) st) xs = protect (put st >> foldr (.) (return []) xs)";
    Thm5QueensShape => "thm5_queens_shape", "hyloM (.) (return []) null select xs = unfoldM null select xs >>= foldr (.) (return [])  (queens ok and +)";
    Lemma6 => "lemma6", "n >>= ((x .) . k) = x . (n >>= k)  (n nondet)";
    Cor7 => "cor7", "solve null select ok (+) st xs = unfoldM null select xs >>= filt (all ok . scanl+ (+) st)";
}

impl LawId {
    pub fn parse(name: &str) -> Result<LawId, LawError> {
        LawId::ALL.iter().copied().find(|id| id.name() == name).ok_or_else(|| LawError::UnknownLaw(name.to_string()))
    }

    /// Draws the values the law quantifies over.
    pub fn generate<R: Rng + ?Sized>(self, cfg: &FuzzConfig, rng: &mut R) -> Env {
        let any = EffectSet::both;
        let nd = EffectSet::nondet;
        let st = EffectSet::state;
        let env = Env::new();
        match self {
            LawId::Eq01 => env.with("x", Binding::Int(pick(&cfg.value_domain, rng))).with("k", kont(cfg, any(), rng)),
            LawId::Eq02 | LawId::Eq08 | LawId::Eq19 => env.with("m", prog(cfg, any(), rng)),
            LawId::Eq03 => env.with("m", prog(cfg, any(), rng)).with("f", kont(cfg, any(), rng)).with("g", kont(cfg, any(), rng)),
            LawId::Eq04 => {
                env.with("f", Binding::Fn(gen_fn(cfg, rng))).with("g", Binding::Fn(gen_fn(cfg, rng))).with("m", prog(cfg, any(), rng))
            }
            LawId::Eq05 => env.with("f", Binding::Fn(gen_fn(cfg, rng))).with("g", kont(cfg, any(), rng)).with("m", prog(cfg, any(), rng)),
            LawId::Eq06 => env.with("f", Binding::Fn(gen_fn(cfg, rng))).with("m", prog(cfg, any(), rng)).with("k", kont(cfg, any(), rng)),
            LawId::Eq07 => env.with("m", prog(cfg, any(), rng)).with("n", prog(cfg, any(), rng)).with("k", prog(cfg, any(), rng)),
            LawId::Eq09 => env.with("m1", prog(cfg, any(), rng)).with("m2", prog(cfg, any(), rng)).with("f", kont(cfg, any(), rng)),
            LawId::Eq10 => env.with("f", kont(cfg, any(), rng)),
            LawId::Eq11 => env.with("p", Binding::Bool(rng.gen())).with("q", Binding::Bool(rng.gen())),
            LawId::Eq12 => {
                env.with("p", Binding::Bool(rng.gen())).with("f", Binding::Fn(gen_fn(cfg, rng))).with("m", prog(cfg, any(), rng))
            }
            LawId::Eq13 => env.with("p", Binding::Bool(rng.gen())).with("m", prog(cfg, any(), rng)),
            LawId::Eq14 => {
                env.with("st", Binding::Int(pick(&cfg.state_domain, rng))).with("st'", Binding::Int(pick(&cfg.state_domain, rng)))
            }
            LawId::Eq15 => env.with("st", Binding::Int(pick(&cfg.state_domain, rng))),
            LawId::Eq16 => env,
            LawId::Eq17 => {
                env.with("k", Binding::Kont2 { table: gen_kont2(&cfg.state_domain, &cfg.state_domain, cfg, &any(), rng), footprint: any() })
            }
            LawId::Eq18 => env.with("m", prog(cfg, any(), rng)).with("f1", kont(cfg, any(), rng)).with("f2", kont(cfg, any(), rng)),
            LawId::Eq20 => env.with("m", prog(cfg, nd(), rng)).with("n", prog(cfg, st(), rng)),
            LawId::Thm2 => env
                .with("m", prog(cfg, nd(), rng))
                .with("stmt", prog(cfg, st(), rng))
                .with("f", Binding::Kont2 { table: gen_kont2(&cfg.value_domain, &cfg.value_domain, cfg, &any(), rng), footprint: any() }),
            LawId::Thm1 => env
                .with("op", Binding::Op(gen_op(rng)))
                .with("st", Binding::Int(pick(&cfg.state_domain, rng)))
                .with("xs", Binding::List(gen_list(cfg, 5, rng))),
            LawId::Thm3 => env
                .with("ok", Binding::Pred(gen_pred(rng)))
                .with("op", Binding::Op(gen_op(rng)))
                .with("xs", Binding::List(gen_list(cfg, 5, rng))),
            LawId::Cor4 => env
                .with("ok", Binding::Pred(gen_pred(rng)))
                .with("op", Binding::Op(gen_op(rng)))
                .with("st", Binding::Int(pick(&cfg.state_domain, rng)))
                .with("xs", Binding::List(gen_list(cfg, 5, rng))),
            LawId::Thm5QueensShape => {
                let len = rng.gen_range(0..=5);
                let mut rows: Vec<i64> = (0..6).collect();
                rows.shuffle(rng);
                rows.truncate(len);
                env.with("xs", Binding::List(rows))
            }
            LawId::Lemma6 => env
                .with("x", Binding::Int(pick(&cfg.value_domain, rng)))
                .with("p", Binding::Pred(gen_pred(rng)))
                .with("op", Binding::Op(gen_op(rng)))
                .with("n", prog(cfg, nd(), rng))
                .with("k", kont(cfg, any(), rng)),
            LawId::Cor7 => env
                .with("ok", Binding::Pred(gen_pred(rng)))
                .with("op", Binding::Op(gen_op(rng)))
                .with("st", Binding::Int(pick(&cfg.state_domain, rng)))
                .with("xs", Binding::List(gen_list(cfg, 4, rng))),
        }
    }

    /// Runs both sides of the law on `env` under `h` from every initial
    /// state of the law's domain; the first disagreement, if any.
    pub fn check<H: Handler + ?Sized>(self, h: &H, cfg: &FuzzConfig, env: &Env) -> Option<Mismatch> {
        let states = &cfg.state_domain[..];
        match self {
            LawId::Eq01 => {
                let (x, k) = (env.int("x"), env.kont("k"));
                compare(h, &ret(x).bind(k.clone()), &k(x), states)
            }
            LawId::Eq02 => {
                let m = env.prog("m");
                compare(h, &m.bind(ret), &m, states)
            }
            LawId::Eq03 => {
                let (m, f, g) = (env.prog("m"), env.kont("f"), env.kont("g"));
                let lhs = m.bind(f.clone()).bind(g.clone());
                let rhs = m.bind(move |x| f(x).bind(g.clone()));
                compare(h, &lhs, &rhs, states)
            }
            LawId::Eq04 => {
                let (f, g, m) = (env.func("f"), env.func("g"), env.prog("m"));
                let (f1, g1) = (f.clone(), g.clone());
                compare(h, &m.map(move |x| f1(g1(x))), &m.map(g).map(f), states)
            }
            LawId::Eq05 => {
                let (f, g, m) = (env.func("f"), env.kont("g"), env.prog("m"));
                let (f1, g1) = (f.clone(), g.clone());
                compare(h, &m.map(f).bind(g), &m.bind(move |x| g1(f1(x))), states)
            }
            LawId::Eq06 => {
                let (f, m, k) = (env.func("f"), env.prog("m"), env.kont("k"));
                let lhs = m.bind(k.clone()).map(f.clone());
                let rhs = m.bind(move |x| k(x).map(f.clone()));
                compare(h, &lhs, &rhs, states)
            }
            LawId::Eq07 => {
                let (m, n, k) = (env.prog("m"), env.prog("n"), env.prog("k"));
                let lhs = choice(choice(m.clone(), n.clone()), k.clone());
                compare(h, &lhs, &choice(m, choice(n, k)), states)
            }
            LawId::Eq08 => {
                let m = env.prog("m");
                compare(h, &choice(fail(), m.clone()), &m, states).or_else(|| compare(h, &choice(m.clone(), fail()), &m, states))
            }
            LawId::Eq09 => {
                let (m1, m2, f) = (env.prog("m1"), env.prog("m2"), env.kont("f"));
                let lhs = choice(m1.clone(), m2.clone()).bind(f.clone());
                compare(h, &lhs, &choice(m1.bind(f.clone()), m2.bind(f)), states)
            }
            LawId::Eq10 => compare(h, &fail::<i64, i64>().bind(env.kont("f")), &fail(), states),
            LawId::Eq11 => {
                let (p, q) = (env.flag("p"), env.flag("q"));
                compare(h, &guard::<i64>(p && q), &guard(p).then(guard(q)), states)
            }
            LawId::Eq12 => {
                let (p, f, m) = (env.flag("p"), env.func("f"), env.prog("m"));
                let lhs = guard(p).then(m.map(f.clone()));
                compare(h, &lhs, &guard(p).then(m).map(f), states)
            }
            LawId::Eq13 => {
                let (p, m) = (env.flag("p"), env.prog("m"));
                let rhs = m.bind(move |x| guard(p).then(ret(x)));
                compare(h, &guard(p).then(m), &rhs, states)
            }
            LawId::Eq14 => {
                let (s1, s2) = (env.int("st"), env.int("st'"));
                compare(h, &put(s1).then(put(s2)), &put(s2), states)
            }
            LawId::Eq15 => {
                let s1 = env.int("st");
                compare(h, &put(s1).then(get()), &put(s1).then(ret(s1)), states)
            }
            LawId::Eq16 => compare(h, &get::<i64>().bind(put), &ret(()), states),
            LawId::Eq17 => {
                let k = env.kont2("k");
                let k1 = k.clone();
                let lhs = get::<i64>().bind(move |s| {
                    let k1 = k1.clone();
                    get::<i64>().bind(move |s2| k1(s, s2))
                });
                let rhs = get::<i64>().bind(move |s| k(s, s));
                compare(h, &lhs, &rhs, states)
            }
            LawId::Eq18 => {
                let (m, f1, f2) = (env.prog("m"), env.kont("f1"), env.kont("f2"));
                let (g1, g2) = (f1.clone(), f2.clone());
                let lhs = m.bind(move |x| choice(g1(x), g2(x)));
                compare(h, &lhs, &choice(m.bind(f1), m.bind(f2)), states)
            }
            LawId::Eq19 => compare(h, &env.prog("m").then(fail::<i64, i64>()), &fail(), states),
            LawId::Eq20 => {
                let (m, n) = (env.prog("m"), env.prog("n"));
                let (m1, n1) = (m.clone(), n.clone());
                let lhs = m.bind(move |x| n1.map(move |y| (x, y)));
                let rhs = n.bind(move |y| m1.map(move |x| (x, y)));
                compare(h, &lhs, &rhs, states)
            }
            LawId::Thm2 => {
                let (m, stmt, f) = (env.prog("m"), env.prog("stmt"), env.kont2("f"));
                let (m1, stmt1, f1) = (m.clone(), stmt.clone(), f.clone());
                let lhs = m.bind(move |x| {
                    let f1 = f1.clone();
                    stmt1.bind(move |y| f1(x, y))
                });
                let rhs = stmt.bind(move |y| {
                    let f = f.clone();
                    m1.bind(move |x| f(x, y))
                });
                compare(h, &lhs, &rhs, states)
            }
            LawId::Thm1 => {
                let (op, st, xs) = (env.op("op"), env.int("st"), env.list("xs"));
                let oplus = move |a: &i64, x: &i64| op.apply(*a, *x);
                let lhs: Prog<i64, Vec<i64>> = ret(scanl_plus(oplus, &st, &xs));
                compare(h, &lhs, &protect(scanl_m(oplus, st, &xs)), states)
            }
            LawId::Thm3 => {
                let (ok, op, xs) = (env.pred("ok"), env.op("op"), env.list("xs"));
                let oplus = move |a: &i64, x: &i64| op.apply(*a, *x);
                let ok1 = ok.clone();
                let kept = xs.clone();
                let lhs = foldr_m(&scanl_step(oplus), ret(Vec::new()), &xs)
                    .bind(move |ys| guard(ys.iter().all(|s| ok1(*s))).then(ret(kept.clone())));
                let rhs = foldr_m(&pruning_step(move |s: &i64| ok(*s), oplus), ret(Vec::new()), &xs);
                compare(h, &lhs, &rhs, states)
            }
            LawId::Cor4 => {
                let (ok, op, st, xs) = (env.pred("ok"), env.op("op"), env.int("st"), env.list("xs"));
                let oplus = move |a: &i64, x: &i64| op.apply(*a, *x);
                let ok1 = ok.clone();
                let lhs = filt(move |ys: &Vec<i64>| scanl_plus(oplus, &st, ys).iter().all(|s| ok1(*s)), xs.clone());
                let rhs = protect(put(st).then(foldr_m(&pruning_step(move |s: &i64| ok(*s), oplus), ret(Vec::new()), &xs)));
                compare(h, &lhs, &rhs, states)
            }
            LawId::Thm5QueensShape => {
                let xs = env.list("xs");
                let (lhs, rhs) = queens_shape_sides(&xs);
                compare(h, &lhs, &rhs, queens_states())
            }
            LawId::Lemma6 => {
                let (x, p, op, n, k) = (env.int("x"), env.pred("p"), env.op("op"), env.prog("n"), env.kont("k"));
                let domain = cfg.state_domain.clone();
                let step: Step<i64, i64, Vec<i64>> = odot_step(
                    move |x: &i64, st: &i64| p(5 * st + x),
                    move |x: &i64, st: &i64| domain[op.apply(*st, *x).rem_euclid(domain.len() as i64) as usize],
                    |x: &i64, ys: Vec<i64>| cons(*x, ys),
                );
                let k = move |a: i64| k(a).map(|v| vec![v]);
                let (step1, k1) = (Arc::clone(&step), k.clone());
                let lhs = n.bind(move |a| step1(x, Deferred::ready(k1(a))));
                let rhs = step(x, Deferred::ready(n.bind(k)));
                compare(h, &lhs, &rhs, states)
            }
            LawId::Cor7 => {
                let (ok, op, st, xs) = (env.pred("ok"), env.op("op"), env.int("st"), env.list("xs"));
                let spec = SolveSpec::new(
                    |y: &Vec<i64>| y.is_empty(),
                    |y: &Vec<i64>| select(y),
                    move |s: &i64| ok(*s),
                    move |a: &i64, x: &i64| op.apply(*a, *x),
                    st,
                    xs,
                )
                .with_measure(|y: &Vec<i64>| y.len());
                let fused = solve(&spec).expect("select is nondeterministic and shortens its seed");
                let unfused = spec.specification().expect("select shortens its seed");
                compare(h, &fused, &unfused, states)
            }
        }
    }
}

fn prog<R: Rng + ?Sized>(cfg: &FuzzConfig, footprint: EffectSet, rng: &mut R) -> Binding {
    Binding::Prog { term: gen_prog(cfg, &footprint, rng), footprint }
}

fn kont<R: Rng + ?Sized>(cfg: &FuzzConfig, footprint: EffectSet, rng: &mut R) -> Binding {
    Binding::Kont { table: gen_kont(cfg, &footprint, rng), footprint }
}

/// Initial states for queens-shaped laws: every state reachable by placing
/// up to two queens in rows `0..4`.
pub fn queens_states() -> &'static [QueensState] {
    static STATES: OnceLock<Vec<QueensState>> = OnceLock::new();
    STATES.get_or_init(queens::queens_state_domain)
}

/// Fused and unfused forms of the queens-shaped backtracker over seed `xs`:
/// `hyloM (⊙) (return []) null select xs` and
/// `unfoldM null select xs >>= foldr (⊙) (return [])`.
pub fn queens_shape_sides(xs: &[i64]) -> (Prog<QueensState, Vec<i64>>, Prog<QueensState, Vec<i64>>) {
    let step: Step<QueensState, i64, Vec<i64>> = pruning_step(queens::ok, queens::oplus);
    let null = |y: &Vec<i64>| y.is_empty();
    let gen = |y: &Vec<i64>| select(y);
    let fused = hylo_m(Arc::clone(&step), ret(Vec::new()), null, gen, xs.to_vec(), xs.len()).expect("select shortens its seed");
    let unfused =
        unfold_m(null, gen, xs.to_vec(), xs.len()).expect("select shortens its seed").bind(move |ys| foldr_m(&step, ret(Vec::new()), &ys));
    (fused, unfused)
}

/// Where and how the two sides of a law disagreed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub state: String,
    pub lhs: String,
    pub rhs: String,
}

fn compare<H, S, A>(h: &H, lhs: &Prog<S, A>, rhs: &Prog<S, A>, states: &[S]) -> Option<Mismatch>
where
    H: Handler + ?Sized,
    S: Value + Ord + Debug,
    A: Value + Ord + Debug,
{
    first_difference(h, lhs, rhs, states).map(|d| Mismatch {
        state: format!("{:?}", d.state),
        lhs: render_bag(&d.lhs),
        rhs: render_bag(&d.rhs),
    })
}

/// A bag in ascending order, e.g. `{(1, 0), (1, 0), (2, 3)}`.
pub fn render_bag<T: Ord + Clone + Debug>(b: &Bag<T>) -> String {
    let items: Vec<String> = b.sorted().iter().map(|x| format!("{x:?}")).collect();
    format!("{{{}}}", items.join(", "))
}
