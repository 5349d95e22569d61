//! Nondeterministic, stateful programs as data, a local-state handler that
//! gives them meaning, and the calculation that turns a generate-and-test
//! search into a pruning backtracker.
//!
//! * [`prog`]: the program tree and its monadic operators.
//! * [`handler`]: the local-state denotation and bag equality.
//! * [`combinators`]: `select`, `unfold_m`, `scanl_m`, `protect`, the fused
//!   step, `hylo_m` and [`solve`].
//! * [`laws`]: randomised checks of every algebraic law the library relies on.
//! * [`queens`]: n-queens in naive and derived form.
//! * [`cli`]: the `backtrack` command line.

pub mod cli;
pub mod combinators;
pub mod error;
pub mod handler;
pub mod laws;
pub mod prog;
pub mod queens;

pub use combinators::{
    filt, foldr_m, guard, hylo_m, odot_step, perm, protect, pruning_step, scanl_m, scanl_plus, select, solve, unfold_m, Deferred,
    SolveSpec, Step,
};
pub use error::{CalcError, LawError};
pub use handler::{bag_equal, prog_equal, run_local, Bag, Handler, LocalState};
pub use prog::{choice, fail, get, get_then, kleisli, put, ret, EffectKind, EffectSet, Prog, StateDomain, Value};
pub use queens::{expansion_count, queens_derived, queens_naive, QueensState, Variant};
