//! Constrained terms `⟨t | φ⟩`: a term paired with a boolean constraint
//! over theory variables.
//!
//! The ground instances of `⟨t | φ⟩` are the instances `tσ` under
//! substitutions that respect `φ`: ground constructor images everywhere,
//! values for the variables of `φ`, and `φσ` evaluating to true. All
//! pattern-difference machinery works on these objects.

use std::collections::BTreeSet;
use std::fmt;

use crate::build;
use crate::signature::Signature;
use crate::solver::{SatResult, Solver};
use crate::subst::Substitution;
use crate::term::{FreshVars, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConstrainedTerm {
    term: Term,
    constraint: Term,
}

/// A constrained term whose term part is a pattern (a defined or
/// calculation symbol applied to constructor terms).
pub type ConstrainedPattern = ConstrainedTerm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CtermError {
    /// The constraint is not a boolean term.
    NotBoolean(String),
}

impl fmt::Display for CtermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CtermError::NotBoolean(t) => write!(f, "constraint `{}` is not boolean", t),
        }
    }
}

impl std::error::Error for CtermError {}

/// The satisfiability check needed by an operation came back `Unknown`, so
/// the operation cannot certify its result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatInconclusive {
    pub formula: String,
}

impl fmt::Display for SatInconclusive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "satisfiability of `{}` could not be decided", self.formula)
    }
}

impl std::error::Error for SatInconclusive {}

impl ConstrainedTerm {
    pub fn new(term: Term, constraint: Term) -> Result<ConstrainedTerm, CtermError> {
        if !constraint.sort().is_bool() {
            return Err(CtermError::NotBoolean(constraint.to_string()));
        }
        Ok(ConstrainedTerm { term, constraint })
    }

    /// `⟨t | true⟩`.
    pub fn unconstrained(sig: &Signature, term: Term) -> ConstrainedTerm {
        ConstrainedTerm { term, constraint: build::truth(sig) }
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn constraint(&self) -> &Term {
        &self.constraint
    }

    pub fn is_pattern(&self) -> bool {
        self.term.is_pattern()
    }

    /// Variables of the term part and the constraint, term part first.
    pub fn var_set(&self) -> BTreeSet<Var> {
        let mut vars = self.term.var_set();
        vars.extend(self.constraint.var_set());
        vars
    }

    pub fn height(&self) -> u32 {
        self.term.height()
    }

    /// Apply a substitution to both components.
    pub fn apply(&self, subst: &Substitution) -> ConstrainedTerm {
        ConstrainedTerm {
            term: subst.apply(&self.term),
            constraint: subst.apply(&self.constraint),
        }
    }

    /// Rename all variables to fresh ones.
    pub fn rename_apart(&self, fresh: &mut FreshVars) -> ConstrainedTerm {
        let delta = crate::subst::renaming_apart(self.var_set().iter(), fresh);
        self.apply(&delta)
    }

    /// Is the term part free of value occurrences?
    pub fn is_value_free(&self) -> bool {
        self.term.is_value_free()
    }
}

impl fmt::Display for ConstrainedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = crate::io::printer::cterm_to_string(self);
        write!(f, "{}", s)
    }
}

/// Replace every value occurrence in the term part by a fresh variable and
/// record the binding in the constraint: `⟨f(1, x) | φ⟩` becomes
/// `⟨f(y, x) | φ ∧ y = 1⟩`. Ground instances are unchanged.
pub fn value_free(ct: &ConstrainedTerm, sig: &Signature, fresh: &mut FreshVars) -> ConstrainedTerm {
    fresh.absorb_term(&ct.term);
    fresh.absorb_term(&ct.constraint);
    let mut bindings: Vec<Term> = Vec::new();
    let term = strip_values(&ct.term, sig, fresh, &mut bindings);
    let constraint = bindings
        .into_iter()
        .fold(ct.constraint.clone(), |acc, eq| build::and_norm(sig, acc, eq));
    ConstrainedTerm { term, constraint }
}

fn strip_values(
    t: &Term,
    sig: &Signature,
    fresh: &mut FreshVars,
    bindings: &mut Vec<Term>,
) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => {
            if f.is_value() {
                let y = fresh.fresh_for_sort(&f.result_sort());
                bindings.push(build::eq(sig, Term::var(y.clone()), t.clone()));
                return Term::var(y);
            }
            let new_args: Vec<Term> =
                args.iter().map(|a| strip_values(a, sig, fresh, bindings)).collect();
            Term::app(f.clone(), new_args).expect("sorts unchanged by value stripping")
        }
    }
}

/// Constrained unifiability: the term parts have an mgu `θ` that maps every
/// variable of either constraint to a value or a variable, and the combined
/// instantiated constraint is satisfiable. Returns the mgu when all three
/// conditions hold, `None` when any fails definitely, and an error when the
/// satisfiability check is inconclusive.
pub fn constrained_unifiable(
    s: &ConstrainedTerm,
    t: &ConstrainedTerm,
    sig: &Signature,
    solver: &mut dyn Solver,
) -> Result<Option<Substitution>, SatInconclusive> {
    let theta = match crate::unify::unify(&s.term, &t.term) {
        Ok(Some(theta)) => theta,
        _ => return Ok(None),
    };
    let constraint_vars: BTreeSet<Var> = s
        .constraint
        .var_set()
        .into_iter()
        .chain(t.constraint.var_set())
        .collect();
    for x in &constraint_vars {
        let image = theta.image(x);
        if !(image.is_var() || image.is_value()) {
            return Ok(None);
        }
    }
    let combined = build::and_norm(
        sig,
        theta.apply(&s.constraint),
        theta.apply(&t.constraint),
    );
    match solver.sat(sig, &combined) {
        SatResult::Sat(_) => Ok(Some(theta)),
        SatResult::Unsat => Ok(None),
        SatResult::Unknown => Err(SatInconclusive { formula: combined.to_string() }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivMode {
    /// Equal up to a variable renaming of the whole pair.
    Syntactic,
    /// Terms equal up to renaming; constraints checked for logical
    /// equivalence by the solver (falling back to the syntactic check when
    /// the solver cannot decide).
    Semantic,
}

/// Equality of constrained terms up to renaming, with the constraint
/// compared syntactically or semantically.
pub fn dot_equal(
    a: &ConstrainedTerm,
    b: &ConstrainedTerm,
    mode: EquivMode,
    sig: &Signature,
    solver: &mut dyn Solver,
) -> bool {
    let syntactic = crate::term::alpha_eq_all(&[
        (&a.term, &b.term),
        (&a.constraint, &b.constraint),
    ]);
    if syntactic || mode == EquivMode::Syntactic {
        return syntactic;
    }
    let Some(delta) = term_renaming(&a.term, &b.term) else {
        return false;
    };
    let renamed = delta.apply(&a.constraint);
    let shared: BTreeSet<Var> =
        b.term.var_set().into_iter().filter(|v| v.sort().is_theory()).collect();
    matches!(
        solver.check_equiv(sig, &renamed, &b.constraint, &shared),
        crate::solver::EquivResult::Equiv
    )
}

/// A variable renaming `δ` with `t δ = u`, if one exists. The mapping must
/// be injective on the variables of `t`.
pub fn term_renaming(t: &Term, u: &Term) -> Option<Substitution> {
    use std::collections::BTreeMap;
    fn walk(
        t: &Term,
        u: &Term,
        fwd: &mut BTreeMap<Var, Var>,
        taken: &mut BTreeSet<Var>,
    ) -> bool {
        match (t, u) {
            (Term::Var(x), Term::Var(y)) => {
                if x.sort() != y.sort() {
                    return false;
                }
                match fwd.get(x) {
                    Some(prev) => prev == y,
                    None => {
                        if taken.contains(y) {
                            return false;
                        }
                        taken.insert(y.clone());
                        fwd.insert(x.clone(), y.clone());
                        true
                    }
                }
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                f == g && fa.iter().zip(ga).all(|(a, b)| walk(a, b, fwd, taken))
            }
            _ => false,
        }
    }
    let mut fwd = BTreeMap::new();
    let mut taken = BTreeSet::new();
    if walk(t, u, &mut fwd, &mut taken) {
        let pairs = fwd
            .into_iter()
            .filter(|(x, y)| x != y)
            .map(|(x, y)| (x, Term::var(y)));
        Substitution::from_pairs(pairs).ok()
    } else {
        None
    }
}

/// Union of constrained-term sets up to dot-equality: members of `extra`
/// are appended unless an equal member is already present.
pub fn dotted_union(
    base: &mut Vec<ConstrainedTerm>,
    extra: impl IntoIterator<Item = ConstrainedTerm>,
    mode: EquivMode,
    sig: &Signature,
    solver: &mut dyn Solver,
) {
    for ct in extra {
        if !base.iter().any(|have| dot_equal(have, &ct, mode, sig, solver)) {
            base.push(ct);
        }
    }
}
