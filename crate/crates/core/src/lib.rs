//! Complement and difference calculus for constrained patterns in logically
//! constrained term rewrite systems (LCTRSs), culminating in a decision
//! procedure for quasi-reducibility of left-linear systems.
//!
//! The library is organised bottom-up:
//!
//! * [`signature`] / [`term`] / [`subst`] — sorted signatures, first-order
//!   terms split into a theory part (values, calculation symbols) and a term
//!   part (constructors, defined symbols), substitutions and matching.
//! * [`unify`] — syntactic unification by a transformation system without an
//!   Orient rule, so most general unifiers inherit linearity from linear
//!   inputs (the property the complement construction depends on).
//! * [`complement`] — complements of linear constructor terms (`cocterm`),
//!   of constructor substitutions (`cosubst`) and of patterns (`copattern`).
//! * [`solver`] — ground evaluation of theory terms, a built-in
//!   Fourier–Motzkin satisfiability procedure for linear integer arithmetic,
//!   and an external SMT-LIB 2 backend.
//! * [`cterm`] — constrained terms/patterns, the value-free transformation,
//!   unifiability of constrained terms and equivalence modulo renaming.
//! * [`diff`] — the difference operator on constrained patterns and its
//!   extension to sets, with the termination weight exposed for inspection.
//! * [`qr`] — rewrite rules, systems, pattern complements per defined symbol
//!   and the quasi-reducibility verdict; also root-step rewriting.
//! * [`io`] — the textual format for systems and pattern sets, printing and
//!   JSON export.
//! * [`oracle`] — brute-force enumeration of ground instances over finite
//!   fragments, used to cross-check the symbolic operations in tests and via
//!   the command line.

pub mod build;
pub mod complement;
pub mod cterm;
pub mod diff;
pub mod io;
pub mod oracle;
pub mod qr;
pub mod signature;
pub mod solver;
pub mod subst;
pub mod term;
pub mod unify;

#[cfg(test)]
pub(crate) mod testutil;

pub use cterm::{ConstrainedPattern, ConstrainedTerm, EquivMode};
pub use diff::{DiffCtx, DiffError, DiffSplit, DiffStatus, SetDiff, SetDiffTrace};
pub use qr::{Lctrs, LctrsError, QrError, QrReport, QrVerdict, Rule};
pub use signature::{FunctionSymbol, Signature, Sort, SortKind, SymbolKind};
pub use solver::{SatResult, Solver, TieredSolver};
pub use subst::Substitution;
pub use term::{FreshVars, Position, Term, Var};
