//! Random programs and tabulated functions.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::prog::{EffectKind, EffectSet};

use super::term::{BinOp, FnTable, Kont2Table, KontTable, PredTable, Term};
use super::FuzzConfig;

/// A random program of depth at most `cfg.max_depth` built only from the
/// constructors `footprint` allows. `Ret` is always allowed; `get` tables
/// cover `cfg.state_domain`, `put` and `ret` draw from the domains.
pub fn gen_prog<R: Rng + ?Sized>(cfg: &FuzzConfig, footprint: &EffectSet, rng: &mut R) -> Term {
    gen_term(cfg, footprint, cfg.max_depth, rng)
}

fn gen_term<R: Rng + ?Sized>(cfg: &FuzzConfig, footprint: &EffectSet, depth: usize, rng: &mut R) -> Term {
    let nondet = footprint.contains(EffectKind::Nondet);
    let state = footprint.contains(EffectKind::StateEff);
    if depth <= 1 || (!nondet && !state) || rng.gen_bool(0.3) {
        return if nondet && rng.gen_bool(0.2) { Term::Fail } else { Term::Ret(pick(&cfg.value_domain, rng)) };
    }
    let mut options = Vec::with_capacity(3);
    if nondet {
        options.push(0);
    }
    if state {
        options.extend([1, 2]);
    }
    match options.choose(rng).copied() {
        Some(0) => Term::choice(gen_term(cfg, footprint, depth - 1, rng), gen_term(cfg, footprint, depth - 1, rng)),
        Some(1) => Term::Get(cfg.state_domain.iter().map(|s| (*s, gen_term(cfg, footprint, depth - 1, rng))).collect()),
        _ => Term::put(pick(&cfg.state_domain, rng), gen_term(cfg, footprint, depth - 1, rng)),
    }
}

/// A random continuation tabulated over `cfg.value_domain`.
pub fn gen_kont<R: Rng + ?Sized>(cfg: &FuzzConfig, footprint: &EffectSet, rng: &mut R) -> KontTable {
    gen_kont_over(&cfg.value_domain, cfg, footprint, rng)
}

/// A random continuation tabulated over `domain`.
pub fn gen_kont_over<R: Rng + ?Sized>(domain: &[i64], cfg: &FuzzConfig, footprint: &EffectSet, rng: &mut R) -> KontTable {
    KontTable { entries: domain.iter().map(|v| (*v, gen_prog(cfg, footprint, rng))).collect() }
}

/// A random curried continuation tabulated over `xs × ys`.
pub fn gen_kont2<R: Rng + ?Sized>(xs: &[i64], ys: &[i64], cfg: &FuzzConfig, footprint: &EffectSet, rng: &mut R) -> Kont2Table {
    let mut entries = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            entries.push(((*x, *y), gen_prog(cfg, footprint, rng)));
        }
    }
    Kont2Table { entries }
}

/// A random endofunction on `cfg.value_domain`.
pub fn gen_fn<R: Rng + ?Sized>(cfg: &FuzzConfig, rng: &mut R) -> FnTable {
    FnTable { entries: cfg.value_domain.iter().map(|v| (*v, pick(&cfg.value_domain, rng))).collect() }
}

/// A random periodic predicate with period 1 to 4.
pub fn gen_pred<R: Rng + ?Sized>(rng: &mut R) -> PredTable {
    let period = rng.gen_range(1..=4);
    PredTable { bits: (0..period).map(|_| rng.gen_bool(0.7)).collect() }
}

pub fn gen_op<R: Rng + ?Sized>(rng: &mut R) -> BinOp {
    *BinOp::ALL.choose(rng).expect("operator pool is nonempty")
}

/// A list of up to `max_len` elements drawn from `cfg.value_domain`.
pub fn gen_list<R: Rng + ?Sized>(cfg: &FuzzConfig, max_len: usize, rng: &mut R) -> Vec<i64> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| pick(&cfg.value_domain, rng)).collect()
}

pub fn pick<R: Rng + ?Sized>(domain: &[i64], rng: &mut R) -> i64 {
    *domain.choose(rng).expect("domains are validated nonempty")
}
