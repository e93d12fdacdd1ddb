//! Satisfiability and equivalence checking for constraints.
//!
//! Two backends implement the [`Solver`] trait: a builtin decision procedure
//! for linear integer arithmetic with booleans ([`builtin::BuiltinSolver`]),
//! and a client for an external SMT-LIB 2 process
//! ([`smtlib::ExternalSolver`]). [`TieredSolver`] composes them: the builtin
//! backend answers first and the external one is consulted only when the
//! builtin result is [`SatResult::Unknown`].
//!
//! Every satisfiability verdict of `Sat` carries a model covering the free
//! variables of the query, and every model is re-checked by ground
//! evaluation before it is returned.

pub mod builtin;
pub mod eval;
pub mod smtlib;

use std::collections::BTreeSet;

use crate::signature::Signature;
use crate::subst::Substitution;
use crate::term::{Term, Var};

pub use builtin::BuiltinSolver;
pub use eval::{eval_ground, EvalError, Value};
pub use smtlib::ExternalSolver;

/// Result of a satisfiability query. `Sat` carries a model whose domain
/// covers the free variables of the query and which has been validated by
/// ground evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Substitution),
    Unsat,
    Unknown,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SatResult::Unsat)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, SatResult::Unknown)
    }
}

/// Result of an equivalence query between two formulas, with designated
/// shared free variables; variables outside the shared set are read
/// existentially on their own side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivResult {
    Equiv,
    NotEquiv,
    Unknown,
}

pub trait Solver {
    fn name(&self) -> String;

    /// Is `phi` satisfiable by an assignment of values to its variables?
    fn sat(&mut self, sig: &Signature, phi: &Term) -> SatResult;

    /// Do `a` and `b` agree for every assignment of the `shared` variables,
    /// reading variables outside `shared` existentially on each side?
    fn check_equiv(
        &mut self,
        sig: &Signature,
        a: &Term,
        b: &Term,
        shared: &BTreeSet<Var>,
    ) -> EquivResult;
}

/// Check a claimed model by substituting and evaluating the ground result.
pub fn validate_model(phi: &Term, model: &Substitution) -> bool {
    matches!(
        eval::eval_ground(&model.apply(phi)),
        Ok(eval::Value::Bool(true))
    )
}

/// Builtin solver with an optional external fallback consulted on Unknown.
pub struct TieredSolver {
    builtin: BuiltinSolver,
    external: Option<ExternalSolver>,
}

impl TieredSolver {
    pub fn builtin_only() -> TieredSolver {
        TieredSolver { builtin: BuiltinSolver::new(), external: None }
    }

    pub fn with_external(external: ExternalSolver) -> TieredSolver {
        TieredSolver { builtin: BuiltinSolver::new(), external: Some(external) }
    }

    pub fn has_external(&self) -> bool {
        self.external.is_some()
    }
}

impl Solver for TieredSolver {
    fn name(&self) -> String {
        match &self.external {
            None => "builtin".into(),
            Some(e) => format!("builtin+{}", e.name()),
        }
    }

    fn sat(&mut self, sig: &Signature, phi: &Term) -> SatResult {
        match self.builtin.sat(sig, phi) {
            SatResult::Unknown => {}
            decided => return decided,
        }
        match &mut self.external {
            None => SatResult::Unknown,
            Some(ext) => match ext.sat(sig, phi) {
                SatResult::Sat(model) if !validate_model(phi, &model) => SatResult::Unknown,
                decided => decided,
            },
        }
    }

    fn check_equiv(
        &mut self,
        sig: &Signature,
        a: &Term,
        b: &Term,
        shared: &BTreeSet<Var>,
    ) -> EquivResult {
        match self.builtin.check_equiv(sig, a, b, shared) {
            EquivResult::Unknown => {}
            decided => return decided,
        }
        match &mut self.external {
            None => EquivResult::Unknown,
            Some(ext) => ext.check_equiv(sig, a, b, shared),
        }
    }
}
