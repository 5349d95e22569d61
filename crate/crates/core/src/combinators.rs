//! The derivation stack: from generate-and-test to a fused backtracker.
//!
//! Reading order follows the calculation. `select`/`unfold_m` generate
//! candidates, `filt` over `scanl_plus` tests them, `scanl_m` moves the
//! accumulator into the state, the pruning step fuses the test into a
//! stateful `foldr_m`, and `hylo_m` fuses that fold with the unfold.
//! [`solve`] is the end product.
//!
//! Folding steps receive the recursive result as a [`Deferred`] so a step
//! can decide not to build it. The pruning step forces it only after its
//! guard has passed, which is where backtracking saves work.

use std::sync::Arc;

use crate::error::CalcError;
use crate::prog::{fail, get_then, put, ret, EffectKind, Prog, StateDomain, Value};

/// `guard b`: unit if `b`, failure otherwise.
pub fn guard<S>(b: bool) -> Prog<S, ()> {
    if b {
        ret(())
    } else {
        fail()
    }
}

/// `filt p x = guard (p x) >> return x`.
pub fn filt<S: Value, A: Value>(p: impl Fn(&A) -> bool, x: A) -> Prog<S, A> {
    guard(p(&x)).then(ret(x))
}

/// Nondeterministically splits off one element:
/// `select [] = fail`, `select (x:xs) = return (x,xs) [] ((id × (x:)) <$> select xs)`.
pub fn select<S: Value, A: Value>(xs: &[A]) -> Prog<S, (A, Vec<A>)> {
    match xs.split_first() {
        None => fail(),
        Some((x, rest)) => {
            let here = ret((x.clone(), rest.to_vec()));
            let x = x.clone();
            let later = select(rest).map(move |(y, ys)| (y, cons(x.clone(), ys)));
            here.or(later)
        }
    }
}

pub(crate) fn cons<A>(x: A, mut xs: Vec<A>) -> Vec<A> {
    xs.insert(0, x);
    xs
}

/// `all p = foldr (&&) True . map p`.
pub fn all<T>(p: impl Fn(&T) -> bool, ys: &[T]) -> bool {
    ys.iter().all(p)
}

pub type Pred<B> = Arc<dyn Fn(&B) -> bool + Send + Sync>;
pub type Gen<S, A, B> = Arc<dyn Fn(&B) -> Prog<S, (A, B)> + Send + Sync>;
pub type Accum<S, A> = Arc<dyn Fn(&S, &A) -> S + Send + Sync>;
pub type Measure<B> = Arc<dyn Fn(&B) -> usize + Send + Sync>;

/// Monadic unfold: `return []` once `p y` holds, otherwise
/// `f y >>= \(x, z) -> (x:) <$> unfold_m p f z`.
///
/// `fuel` bounds the depth of the unfolding. Running out while building
/// the tree returns [`CalcError::FuelExhausted`]; if `f` reads the state,
/// the levels below its `get` are built when the program runs, and running
/// out there panics with the same message.
pub fn unfold_m<S, A, B>(
    p: impl Fn(&B) -> bool + Send + Sync + 'static,
    f: impl Fn(&B) -> Prog<S, (A, B)> + Send + Sync + 'static,
    y: B,
    fuel: usize,
) -> Result<Prog<S, Vec<A>>, CalcError>
where
    S: Value,
    A: Value,
    B: Value,
{
    let p: Pred<B> = Arc::new(p);
    let f: Gen<S, A, B> = Arc::new(f);
    unfold_from(&p, &f, y, fuel, fuel)
}

fn unfold_from<S: Value, A: Value, B: Value>(
    p: &Pred<B>,
    f: &Gen<S, A, B>,
    y: B,
    left: usize,
    budget: usize,
) -> Result<Prog<S, Vec<A>>, CalcError> {
    if p(&y) {
        return Ok(ret(Vec::new()));
    }
    if left == 0 {
        return Err(CalcError::FuelExhausted { fuel: budget });
    }
    let (p2, f2) = (Arc::clone(p), Arc::clone(f));
    let k = move |(x, z): (A, B)| -> Result<Prog<S, Vec<A>>, CalcError> {
        let rest = unfold_from(&p2, &f2, z, left - 1, budget)?;
        Ok(rest.map(move |xs| cons(x.clone(), xs)))
    };
    let k: TryKont<S, (A, B), Vec<A>> = Arc::new(k);
    try_graft(&f(&y), &k)
}

type TryKont<S, A, B> = Arc<dyn Fn(A) -> Result<Prog<S, B>, CalcError> + Send + Sync>;

/// Grafting with a fallible continuation. Errors surface eagerly except
/// under `Get`, whose continuation only runs inside a handler.
fn try_graft<S: Value, A: Value, B: Value>(m: &Prog<S, A>, k: &TryKont<S, A, B>) -> Result<Prog<S, B>, CalcError> {
    Ok(match m {
        Prog::Ret(a) => k(a.clone())?,
        Prog::Fail => Prog::Fail,
        Prog::Choice(l, r) => Prog::Choice(Arc::new(try_graft(l, k)?), Arc::new(try_graft(r, k)?)),
        Prog::Put(s, c) => Prog::Put(s.clone(), Arc::new(try_graft(c, k)?)),
        Prog::Get(c) => {
            let (c, k) = (c.clone(), Arc::clone(k));
            get_then(move |s| try_graft(&c.apply(s), &k).unwrap_or_else(|e| panic!("{e}")))
        }
    })
}

/// `perm = unfold_m null select`.
pub fn perm<S: Value, A: Value>(xs: &[A]) -> Prog<S, Vec<A>> {
    unfold_m(|y: &Vec<A>| y.is_empty(), |y: &Vec<A>| select(y), xs.to_vec(), xs.len()).expect("select shortens the seed on every step")
}

/// `scanl` without the initial accumulator: `foldl` over every non-empty prefix.
pub fn scanl_plus<S: Clone, A>(oplus: impl Fn(&S, &A) -> S, st: &S, xs: &[A]) -> Vec<S> {
    let mut acc = st.clone();
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        acc = oplus(&acc, x);
        out.push(acc.clone());
    }
    out
}

/// A recursive result a folding step may or may not build.
pub struct Deferred<S, C>(Arc<dyn Fn() -> Prog<S, C> + Send + Sync>);

impl<S: Value, C: Value> Deferred<S, C> {
    pub fn new(f: impl Fn() -> Prog<S, C> + Send + Sync + 'static) -> Self {
        Deferred(Arc::new(f))
    }

    /// An already-built result.
    pub fn ready(m: Prog<S, C>) -> Self {
        Deferred(Arc::new(move || m.clone()))
    }

    pub fn force(&self) -> Prog<S, C> {
        (self.0)()
    }
}

impl<S, C> Clone for Deferred<S, C> {
    fn clone(&self) -> Self {
        Deferred(Arc::clone(&self.0))
    }
}

/// A right-fold step `x ⊗ m` over programs.
pub type Step<S, A, C> = Arc<dyn Fn(A, Deferred<S, C>) -> Prog<S, C> + Send + Sync>;

/// `foldr (⊗) e xs` where the fold builds a program.
pub fn foldr_m<S: Value, A: Value, C: Value>(step: &Step<S, A, C>, e: Prog<S, C>, xs: &[A]) -> Prog<S, C> {
    xs.iter().rev().fold(e, |acc, x| step(x.clone(), Deferred::ready(acc)))
}

/// The step of `scanl_m`:
/// `x ⊗ n = get >>= \st -> let st' = st ⊕ x in (st':) <$> (put st' >> n)`.
pub fn scanl_step<S: Value, A: Value>(oplus: impl Fn(&S, &A) -> S + Send + Sync + 'static) -> Step<S, A, Vec<S>> {
    let oplus = Arc::new(oplus);
    Arc::new(move |x: A, n: Deferred<S, Vec<S>>| {
        let oplus = Arc::clone(&oplus);
        get_then(move |st| {
            let next = oplus(st, &x);
            let head = next.clone();
            put(next).then(n.force()).map(move |ys| cons(head.clone(), ys))
        })
    })
}

/// `scanl_plus` with its accumulator kept in the state:
/// `put st >> foldr (⊗) (return []) xs`.
pub fn scanl_m<S: Value, A: Value>(oplus: impl Fn(&S, &A) -> S + Send + Sync + 'static, st: S, xs: &[A]) -> Prog<S, Vec<S>> {
    put(st).then(foldr_m(&scanl_step(oplus), ret(Vec::new()), xs))
}

/// Runs `n`, then restores the state it started from:
/// `get >>= \ini -> n >>= \x -> put ini >> return x`.
pub fn protect<S: Value, B: Value>(n: Prog<S, B>) -> Prog<S, B> {
    get_then(move |ini: &S| {
        let ini = ini.clone();
        n.bind(move |x| put(ini.clone()).then(ret(x)))
    })
}

/// The generic fused step
/// `x ⊙ m = get >>= \st -> guard (p x st) >> put (next x st) >> (res x <$> m)`.
///
/// `m` is forced only on branches whose guard holds.
pub fn odot_step<S, A, B>(
    p: impl Fn(&A, &S) -> bool + Send + Sync + 'static,
    next: impl Fn(&A, &S) -> S + Send + Sync + 'static,
    res: impl Fn(&A, B) -> B + Send + Sync + 'static,
) -> Step<S, A, B>
where
    S: Value,
    A: Value,
    B: Value,
{
    let p = Arc::new(p);
    let next = Arc::new(next);
    let res = Arc::new(res);
    Arc::new(move |x: A, m: Deferred<S, B>| {
        let (p, next, res) = (Arc::clone(&p), Arc::clone(&next), Arc::clone(&res));
        get_then(move |st| {
            let (x, m, res) = (x.clone(), m.clone(), Arc::clone(&res));
            let st1 = next(&x, st);
            guard(p(&x, st)).bind(move |()| {
                let (x, res) = (x.clone(), Arc::clone(&res));
                put(st1.clone()).then(m.force()).map(move |b| res(&x, b))
            })
        })
    })
}

/// The instance of [`odot_step`] that fuses `filt (all ok . scanl_plus (⊕) st)`
/// into the fold: `p x st = ok (st ⊕ x)`, `next x st = st ⊕ x`, `res x = (x:)`.
pub fn pruning_step<S: Value, A: Value>(
    ok: impl Fn(&S) -> bool + Send + Sync + 'static,
    oplus: impl Fn(&S, &A) -> S + Send + Sync + 'static,
) -> Step<S, A, Vec<A>> {
    let oplus = Arc::new(oplus);
    let oplus2 = Arc::clone(&oplus);
    odot_step(move |x, st| ok(&oplus(st, x)), move |x, st| oplus2(st, x), |x: &A, xs| cons(x.clone(), xs))
}

struct Hylo<S, A, B, C> {
    step: Step<S, A, C>,
    base: Prog<S, C>,
    stop: Pred<B>,
    generate: Gen<S, A, B>,
    budget: usize,
}

/// Fused unfold-then-fold:
/// `hylo_m y | p y = e | otherwise = f y >>= \(x, z) -> x ⊗ hylo_m z`.
///
/// Equals `unfold_m p f y >>= foldr_m (⊗) e` when `⊗` commutes past the
/// unfolded program (as [`odot_step`] does for nondeterministic generators);
/// that side condition is the caller's to establish.
///
/// The recursive call is handed to `⊗` unbuilt. `fuel` bounds the depth:
/// running out at `y` itself returns [`CalcError::FuelExhausted`], running
/// out in a level built later by the step panics with that error's message.
pub fn hylo_m<S, A, B, C>(
    step: Step<S, A, C>,
    e: Prog<S, C>,
    p: impl Fn(&B) -> bool + Send + Sync + 'static,
    f: impl Fn(&B) -> Prog<S, (A, B)> + Send + Sync + 'static,
    y: B,
    fuel: usize,
) -> Result<Prog<S, C>, CalcError>
where
    S: Value,
    A: Value,
    B: Value,
    C: Value,
{
    let h = Arc::new(Hylo { step, base: e, stop: Arc::new(p), generate: Arc::new(f), budget: fuel });
    hylo_from(&h, y, fuel)
}

fn hylo_from<S: Value, A: Value, B: Value, C: Value>(h: &Arc<Hylo<S, A, B, C>>, y: B, left: usize) -> Result<Prog<S, C>, CalcError> {
    if (h.stop)(&y) {
        return Ok(h.base.clone());
    }
    if left == 0 {
        return Err(CalcError::FuelExhausted { fuel: h.budget });
    }
    let h2 = Arc::clone(h);
    Ok((h.generate)(&y).bind(move |(x, z)| {
        let h3 = Arc::clone(&h2);
        let rest = Deferred::new(move || hylo_from(&h3, z.clone(), left - 1).unwrap_or_else(|e| panic!("{e}")));
        (h2.step)(x, rest)
    }))
}

/// Fuel used by [`SolveSpec`] when the caller sets none.
pub const DEFAULT_FUEL: usize = 4096;

/// One backtracking problem: candidates come from unfolding `seed` with
/// `generate` until `stop`; a candidate is accepted when `ok` holds on every
/// prefix accumulator `initial ⊕ x1 ⊕ ... ⊕ xi`.
pub struct SolveSpec<B, A, S> {
    pub stop: Pred<B>,
    pub generate: Gen<S, A, B>,
    pub ok: Pred<S>,
    pub oplus: Accum<S, A>,
    pub initial: S,
    pub seed: B,
    /// Optional measure that must strictly decrease from a seed to each seed
    /// it generates.
    pub measure: Option<Measure<B>>,
    pub fuel: usize,
}

impl<B: Value, A: Value, S: Value> SolveSpec<B, A, S> {
    pub fn new(
        stop: impl Fn(&B) -> bool + Send + Sync + 'static,
        generate: impl Fn(&B) -> Prog<S, (A, B)> + Send + Sync + 'static,
        ok: impl Fn(&S) -> bool + Send + Sync + 'static,
        oplus: impl Fn(&S, &A) -> S + Send + Sync + 'static,
        initial: S,
        seed: B,
    ) -> Self {
        SolveSpec {
            stop: Arc::new(stop),
            generate: Arc::new(generate),
            ok: Arc::new(ok),
            oplus: Arc::new(oplus),
            initial,
            seed,
            measure: None,
            fuel: DEFAULT_FUEL,
        }
    }

    pub fn with_measure(mut self, measure: impl Fn(&B) -> usize + Send + Sync + 'static) -> Self {
        self.measure = Some(Arc::new(measure));
        self
    }

    pub fn with_fuel(mut self, fuel: usize) -> Self {
        self.fuel = fuel;
        self
    }

    /// The generate-and-test form
    /// `unfold_m p f z >>= filt (all ok . scanl_plus (⊕) st)`.
    pub fn specification(&self) -> Result<Prog<S, Vec<A>>, CalcError> {
        let (stop, generate) = (Arc::clone(&self.stop), Arc::clone(&self.generate));
        let candidates = unfold_m(move |y| stop(y), move |y| generate(y), self.seed.clone(), self.fuel)?;
        let (ok, oplus, st) = (Arc::clone(&self.ok), Arc::clone(&self.oplus), self.initial.clone());
        Ok(candidates.bind(move |xs| filt(|xs: &Vec<A>| all(|s| ok(s), &scanl_plus(|s, x| oplus(s, x), &st, xs)), xs)))
    }

    /// Checks the generator on the seed and the seeds it yields: it must be
    /// nondeterministic only, and the measure (if any) must decrease.
    fn validate(&self) -> Result<(), CalcError> {
        if (self.stop)(&self.seed) {
            return Ok(());
        }
        let step = (self.generate)(&self.seed);
        match step.effect_footprint(&StateDomain::Unbounded) {
            Ok(fp) if !fp.contains(EffectKind::StateEff) => {}
            Ok(fp) => return Err(CalcError::EffectfulGenerator { found: fp.to_string() }),
            Err(_) => return Err(CalcError::EffectfulGenerator { found: "{nondet?, state}".into() }),
        }
        if let Some(measure) = &self.measure {
            let from = measure(&self.seed);
            for (_, z) in step.leaf_values(&[]) {
                let to = measure(&z);
                if to >= from {
                    return Err(CalcError::MeasureNotDecreasing { from, to });
                }
            }
        }
        Ok(())
    }
}

/// The fused backtracker:
/// `protect (put st >> hylo_m (⊙) (return []) p f z)` with `⊙` the
/// [`pruning_step`] for `ok` and `⊕`.
pub fn solve<B: Value, A: Value, S: Value>(spec: &SolveSpec<B, A, S>) -> Result<Prog<S, Vec<A>>, CalcError> {
    spec.validate()?;
    let (ok, oplus) = (Arc::clone(&spec.ok), Arc::clone(&spec.oplus));
    let step = pruning_step(move |s| ok(s), move |s, x| oplus(s, x));
    let (stop, generate) = (Arc::clone(&spec.stop), Arc::clone(&spec.generate));
    let body = hylo_m(step, ret(Vec::new()), move |y| stop(y), move |y| generate(y), spec.seed.clone(), spec.fuel)?;
    Ok(protect(put(spec.initial.clone()).then(body)))
}
