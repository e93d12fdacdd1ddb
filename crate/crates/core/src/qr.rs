//! Rewrite systems over a signature with constraints, and the decision
//! procedure for quasi-reducibility.
//!
//! A system is quasi-reducible when every ground pattern — a defined symbol
//! applied to ground constructor terms, with values in the theory argument
//! positions — matches some rule whose guard can be satisfied. The check
//! computes, per defined symbol, the difference between the most general
//! pattern and the value-freed rule left-hand sides; leftover patterns are
//! exactly the uncovered inputs and double as counterexample witnesses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use std::sync::Arc;

use crate::cterm::{value_free, ConstrainedTerm, EquivMode};
use crate::diff::{DiffCtx, DiffError, DiffStatus, SetDiff};
use crate::signature::{FunctionSymbol, IntValueFamily, Signature, SymbolKind};
use crate::solver::{eval_ground, SatResult, Solver, Value};
use crate::subst::{more_general, Substitution};
use crate::term::{FreshVars, Term, Var};

/// A rewrite rule `lhs -> rhs [guard]`. Variables of the guard, and
/// variables of the right-hand side that do not occur on the left, are
/// logical: they range over values only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
    pub guard: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term, guard: Term) -> Rule {
        Rule { lhs, rhs, guard }
    }

    /// The variables that must be instantiated by values: guard variables
    /// and right-hand-side variables not bound by the left-hand side.
    pub fn logical_vars(&self) -> BTreeSet<Var> {
        let lhs_vars = self.lhs.var_set();
        let mut out = self.guard.var_set();
        out.extend(self.rhs.var_set().into_iter().filter(|v| !lhs_vars.contains(v)));
        out
    }

    pub fn validate(&self) -> Result<(), LctrsError> {
        let root = match &self.lhs {
            Term::Var(_) => {
                return Err(LctrsError::LhsIsVariable(self.to_string()));
            }
            Term::App(f, _) => f,
        };
        if root.kind() != SymbolKind::Defined {
            return Err(LctrsError::LhsRootNotDefined {
                rule: self.to_string(),
                symbol: root.display_name(),
            });
        }
        if !self.guard.sort().is_bool() {
            return Err(LctrsError::GuardNotBoolean(self.to_string()));
        }
        if self.lhs.sort() != self.rhs.sort() {
            return Err(LctrsError::SortMismatch(self.to_string()));
        }
        for v in self.logical_vars() {
            if !v.sort().is_theory() {
                return Err(LctrsError::LogicalVarNotTheory {
                    rule: self.to_string(),
                    var: v.to_string(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)?;
        let trivial = matches!(&self.guard, Term::App(g, args)
            if args.is_empty() && g.as_bool() == Some(true));
        if !trivial {
            write!(f, " [{}]", self.guard)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LctrsError {
    LhsIsVariable(String),
    LhsRootNotDefined { rule: String, symbol: String },
    GuardNotBoolean(String),
    SortMismatch(String),
    LogicalVarNotTheory { rule: String, var: String },
}

impl fmt::Display for LctrsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LctrsError::LhsIsVariable(r) => {
                write!(f, "rule `{}`: left-hand side is a variable", r)
            }
            LctrsError::LhsRootNotDefined { rule, symbol } => write!(
                f,
                "rule `{}`: left-hand side root `{}` is not a defined term symbol",
                rule, symbol
            ),
            LctrsError::GuardNotBoolean(r) => {
                write!(f, "rule `{}`: guard is not boolean", r)
            }
            LctrsError::SortMismatch(r) => {
                write!(f, "rule `{}`: left- and right-hand sides differ in sort", r)
            }
            LctrsError::LogicalVarNotTheory { rule, var } => write!(
                f,
                "rule `{}`: logical variable `{}` must have a theory sort",
                rule, var
            ),
        }
    }
}

impl std::error::Error for LctrsError {}

/// How severe a [`ValidationIssue`] is: errors block the quasi-reducibility
/// decision, warnings restrict what it may conclude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A finding about a system that is structurally well-formed but falls
/// outside (or at the edge of) what the decision procedure supports.
#[derive(Debug, Clone)]
pub struct ValidationIssue {
    pub severity: Severity,
    pub message: String,
}

/// A logically constrained term rewrite system: a signature together with
/// constrained rules.
#[derive(Debug, Clone)]
pub struct Lctrs {
    pub sig: Signature,
    pub rules: Vec<Rule>,
}

impl Lctrs {
    pub fn new(sig: Signature, rules: Vec<Rule>) -> Lctrs {
        Lctrs { sig, rules }
    }

    pub fn validate(&self) -> Result<(), LctrsError> {
        for rule in &self.rules {
            rule.validate()?;
        }
        Ok(())
    }

    pub fn is_left_linear(&self) -> bool {
        self.rules.iter().all(|r| r.lhs.is_linear())
    }

    /// Check the hypotheses of the quasi-reducibility decision. Non-linear
    /// left-hand sides and user constructors producing a theory sort are
    /// errors — with either present the procedure cannot run. Rules whose
    /// left-hand side is not a pattern are warnings: they are excluded from
    /// the analysis, which can weaken a negative answer to `Unknown` but
    /// never invalidates a positive one.
    pub fn diagnostics(&self) -> Vec<ValidationIssue> {
        let mut out = Vec::new();
        for sym in self.sig.term_symbols() {
            if sym.kind() == SymbolKind::Constructor && sym.result_sort().is_theory() {
                out.push(ValidationIssue {
                    severity: Severity::Error,
                    message: format!(
                        "constructor `{}` has theory result sort `{}`; theory sorts admit only values",
                        sym.display_name(),
                        sym.result_sort().name()
                    ),
                });
            }
        }
        for rule in &self.rules {
            if !rule.lhs.is_linear() {
                out.push(ValidationIssue {
                    severity: Severity::Error,
                    message: format!(
                        "rule `{}` is not left-linear; the decision procedure requires left-linear rules",
                        rule
                    ),
                });
            } else if !rule.lhs.is_pattern() {
                out.push(ValidationIssue {
                    severity: Severity::Warning,
                    message: format!(
                        "rule `{}` is excluded: its left-hand side is not a pattern",
                        rule
                    ),
                });
            }
        }
        out
    }
}

#[derive(Debug)]
pub enum QrError {
    Invalid(LctrsError),
    /// The system is well-formed but violates a hypothesis of the decision
    /// procedure (see [`Lctrs::diagnostics`]); the issues carried here
    /// include at least one error.
    Preconditions(Vec<ValidationIssue>),
    Diff(DiffError),
}

impl fmt::Display for QrError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QrError::Invalid(e) => write!(f, "{}", e),
            QrError::Preconditions(issues) => {
                let msgs: Vec<&str> = issues
                    .iter()
                    .filter(|i| i.severity == Severity::Error)
                    .map(|i| i.message.as_str())
                    .collect();
                write!(f, "{}", msgs.join("; "))
            }
            QrError::Diff(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for QrError {}

impl From<LctrsError> for QrError {
    fn from(e: LctrsError) -> QrError {
        QrError::Invalid(e)
    }
}

impl From<DiffError> for QrError {
    fn from(e: DiffError) -> QrError {
        QrError::Diff(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrVerdict {
    QuasiReducible,
    NotQuasiReducible,
    Unknown,
}

impl fmt::Display for QrVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QrVerdict::QuasiReducible => write!(f, "quasi-reducible"),
            QrVerdict::NotQuasiReducible => write!(f, "not quasi-reducible"),
            QrVerdict::Unknown => write!(f, "unknown"),
        }
    }
}

/// An uncovered constrained pattern reported by the quasi-reducibility
/// check, together with how certain the procedure is about it: an `Exact`
/// witness is definitely uncovered, an `Inconclusive` one is a candidate
/// some undecided constraint may still rule out.
#[derive(Debug, Clone)]
pub struct Witness {
    pub pattern: ConstrainedTerm,
    pub status: DiffStatus,
}

impl Witness {
    pub fn term(&self) -> &Term {
        self.pattern.term()
    }

    pub fn constraint(&self) -> &Term {
        self.pattern.constraint()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pattern)
    }
}

/// Outcome of the quasi-reducibility check. On `NotQuasiReducible` the
/// witnesses are constrained patterns all of whose ground instances fail to
/// match any rule; on `Unknown` they are candidates the procedure could not
/// certify either way, and `reason` says what blocked a definite answer.
#[derive(Debug, Clone)]
pub struct QrReport {
    pub verdict: QrVerdict,
    pub witnesses: Vec<Witness>,
    pub reason: Option<String>,
    pub diagnostics: Vec<String>,
}

/// The complement of `q` with respect to the defined symbol `f`: leftover
/// patterns of `{f(x1,..,xn) [true]} ⊖ q`. Members of `q` not rooted in `f`
/// never unify with the most general `f`-pattern, so they are ignored — the
/// result depends only on the `f`-rooted part of `q`.
pub fn copat_f(
    sig: &Signature,
    solver: &mut dyn Solver,
    equiv: EquivMode,
    q: &[ConstrainedTerm],
    f: &Arc<FunctionSymbol>,
) -> Result<SetDiff, DiffError> {
    let args: Vec<Term> = f
        .arg_sorts()
        .iter()
        .enumerate()
        .map(|(i, s)| Term::var(Var::new(&format!("x{}", i + 1), s.clone())))
        .collect();
    let top = ConstrainedTerm::unconstrained(
        sig,
        Term::app(f.clone(), args).expect("fresh variables match the declared sorts"),
    );
    let mut ctx = DiffCtx::new(sig, solver, equiv);
    ctx.diff_sets(&[top], q)
}

/// The complement of `q` over all defined symbols of the term signature:
/// the union of [`copat_f`] across them, with the joined status. Empty
/// exactly when `q` covers every ground pattern.
pub fn copat(
    sig: &Signature,
    solver: &mut dyn Solver,
    equiv: EquivMode,
    q: &[ConstrainedTerm],
) -> Result<(Vec<ConstrainedTerm>, DiffStatus), DiffError> {
    let mut out = Vec::new();
    let mut status = DiffStatus::Exact;
    for f in sig.defined_symbols() {
        let result = copat_f(sig, solver, equiv, q, &f)?;
        status = status.join(result.status);
        out.extend(result.p);
    }
    Ok((out, status))
}

/// Decide quasi-reducibility. Works symbol by symbol: the uncovered inputs
/// of `f` are `{f(x1,..,xn) [true]} ⊖ Q_f` where `Q_f` holds the value-freed
/// left-hand sides (with guards) of the rules rooted in `f`.
///
/// The hypotheses of [`Lctrs::diagnostics`] are enforced first; an error
/// there (a non-left-linear rule, a theory-sorted constructor) aborts with
/// [`QrError::Preconditions`]. Rules whose left-hand side is not a pattern
/// are excluded with a warning: the computed leftovers then over-approximate
/// the uncovered inputs, so an empty result still certifies
/// quasi-reducibility, while leftovers rooted in a symbol with excluded
/// rules yield `Unknown` rather than a counterexample.
pub fn quasi_reducible(
    lctrs: &Lctrs,
    solver: &mut dyn Solver,
    equiv: EquivMode,
) -> Result<QrReport, QrError> {
    lctrs.validate()?;
    let issues = lctrs.diagnostics();
    if issues.iter().any(|i| i.severity == Severity::Error) {
        return Err(QrError::Preconditions(issues));
    }
    let sig = &lctrs.sig;
    let mut diagnostics: Vec<String> = issues.into_iter().map(|i| i.message).collect();
    let mut fresh = FreshVars::new();
    let mut groups: BTreeMap<(String, usize), Vec<ConstrainedTerm>> = BTreeMap::new();
    let mut excluded_roots: BTreeSet<(String, usize)> = BTreeSet::new();
    for rule in &lctrs.rules {
        let root = match &rule.lhs {
            Term::App(f, _) => (f.display_name(), f.arity()),
            Term::Var(_) => unreachable!("validated left-hand sides are applications"),
        };
        if !rule.lhs.is_pattern() {
            excluded_roots.insert(root);
            continue;
        }
        let ct = ConstrainedTerm::new(rule.lhs.clone(), rule.guard.clone())
            .expect("validated guards are boolean");
        groups.entry(root).or_default().push(value_free(&ct, sig, &mut fresh));
    }

    let inhabited = sig.inhabited_sorts();
    let mut witnesses: Vec<Witness> = Vec::new();
    let mut refuted = false;
    let mut undecided = false;
    let mut excluded_matter = false;
    for f in sig.defined_symbols() {
        let key = (f.display_name(), f.arity());
        let q = groups.get(&key).cloned().unwrap_or_default();
        let result = copat_f(sig, solver, equiv, &q, &f)?;
        let status = result.status;
        if status != DiffStatus::Exact {
            undecided = true;
            diagnostics.push(format!(
                "constraints for `{}` could not all be decided; its result is approximate",
                f.display_name()
            ));
        }
        let leftovers: Vec<ConstrainedTerm> = result
            .p
            .into_iter()
            .filter(|ct| ct.term().var_set().iter().all(|v| inhabited.contains(v.sort())))
            .collect();
        if leftovers.is_empty() {
            continue;
        }
        if status == DiffStatus::Exact && !excluded_roots.contains(&key) {
            refuted = true;
        } else if excluded_roots.contains(&key) {
            excluded_matter = true;
            diagnostics.push(format!(
                "witnesses for `{}` may still be covered by its excluded non-pattern rules",
                f.display_name()
            ));
        }
        witnesses.extend(leftovers.into_iter().map(|pattern| Witness { pattern, status }));
    }

    let mut reason = None;
    let verdict = if witnesses.is_empty() && !undecided {
        QrVerdict::QuasiReducible
    } else if refuted {
        QrVerdict::NotQuasiReducible
    } else {
        let mut causes = Vec::new();
        if undecided {
            causes.push("some constraints could not be decided");
        }
        if excluded_matter {
            causes.push("rules with non-pattern left-hand sides were excluded");
        }
        reason = Some(causes.join("; "));
        QrVerdict::Unknown
    };
    Ok(QrReport { verdict, witnesses, reason, diagnostics })
}

/// The default value of a theory sort, used for logical variables the guard
/// leaves unconstrained.
fn default_value(sig: &Signature, v: &Var) -> Term {
    let sym = if v.sort().is_bool() {
        sig.bool_value(true)
    } else {
        match sig.int_value_family() {
            IntValueFamily::Finite(vs) if !vs.contains(&0) => {
                sig.int_value(*vs.first().expect("finite value families are nonempty"))
            }
            _ => sig.int_value(0),
        }
    };
    Term::constant(sym).expect("values are constants")
}

/// A substitution making `rule` fire on the ground term `t` at the root:
/// the match of the left-hand side, extended with values for the logical
/// variables so the guard holds. `None` when the rule does not apply, or
/// when the solver cannot confirm the guard.
fn rule_match(
    rule: &Rule,
    t: &Term,
    sig: &Signature,
    solver: &mut dyn Solver,
) -> Option<Substitution> {
    let mut sigma = more_general(&rule.lhs, t)?;
    // Logical variables range over values; a match that plugs a non-value
    // (say, an unevaluated sum) into the guard is not a redex.
    for v in rule.logical_vars() {
        if let Some(image) = sigma.get(&v) {
            if !image.is_value() {
                return None;
            }
        }
    }
    let guard = sigma.apply(&rule.guard);
    if guard.var_set().is_empty() {
        if !matches!(eval_ground(&guard), Ok(Value::Bool(true))) {
            return None;
        }
    } else {
        match solver.sat(sig, &guard) {
            SatResult::Sat(model) => {
                let pairs: Vec<(Var, Term)> =
                    model.iter().map(|(v, t)| (v.clone(), t.clone())).collect();
                for (v, value) in pairs {
                    sigma.insert(v, value).expect("models are well-sorted");
                }
            }
            SatResult::Unsat => return None,
            // An unconfirmed guard counts as a failed match, keeping redex
            // checks conservative.
            SatResult::Unknown => return None,
        }
    }
    for v in rule.rhs.var_set() {
        if sigma.get(&v).is_none() {
            let value = default_value(sig, &v);
            sigma.insert(v.clone(), value).expect("defaults are well-sorted");
        }
    }
    Some(sigma)
}

/// Is the ground term `t` a redex — does some rule apply at its root, or is
/// it a calculation on values?
pub fn is_redex(lctrs: &Lctrs, solver: &mut dyn Solver, t: &Term) -> bool {
    let (f, args) = match t {
        Term::Var(_) => return false,
        Term::App(f, args) => (f, args),
    };
    if f.kind() == SymbolKind::Calculation && args.iter().all(Term::is_value) {
        // The calculation rules rewrite `f(values)` to the result value; an
        // evaluation error (division by zero, overflow) leaves the term
        // stuck instead.
        return eval_ground(t).is_ok();
    }
    lctrs
        .rules
        .iter()
        .any(|rule| rule_match(rule, t, &lctrs.sig, solver).is_some())
}

/// One leftmost-innermost rewrite step on a ground term, trying arguments
/// left to right before the root, and at the root the rules in their given
/// order before the calculation rules.
pub fn rewrite_step(lctrs: &Lctrs, solver: &mut dyn Solver, t: &Term) -> Option<Term> {
    let (f, args) = match t {
        Term::Var(_) => return None,
        Term::App(f, args) => (f, args),
    };
    for (i, arg) in args.iter().enumerate() {
        if let Some(reduced) = rewrite_step(lctrs, solver, arg) {
            let mut new_args = args.clone();
            new_args[i] = reduced;
            return Some(Term::app(f.clone(), new_args).expect("rewriting preserves sorts"));
        }
    }
    for rule in &lctrs.rules {
        if let Some(sigma) = rule_match(rule, t, &lctrs.sig, solver) {
            return Some(sigma.apply(&rule.rhs));
        }
    }
    if f.kind() == SymbolKind::Calculation && args.iter().all(Term::is_value) {
        if let Ok(value) = eval_ground(t) {
            let sym = match value {
                Value::Int(n) => lctrs.sig.int_value(n),
                Value::Bool(b) => lctrs.sig.bool_value(b),
            };
            return Some(Term::constant(sym).expect("values are constants"));
        }
    }
    None
}

/// Rewrite to normal form, up to `fuel` steps. Returns the final term and
/// the number of steps taken; the term is a normal form unless the fuel ran
/// out exactly at the boundary.
pub fn rewrite(lctrs: &Lctrs, solver: &mut dyn Solver, t: &Term, fuel: usize) -> (Term, usize) {
    let mut current = t.clone();
    for steps in 0..fuel {
        match rewrite_step(lctrs, solver, &current) {
            Some(next) => current = next,
            None => return (current, steps),
        }
    }
    (current, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Sort;
    use crate::solver::BuiltinSolver;
    use crate::testutil::*;

    /// The three-rule list system from the worked examples: sums the
    /// positive elements at even offsets, consuming fuel `y`.
    fn base_rules(sig: &Signature) -> Vec<Rule> {
        vec![
            Rule::new(
                fterm(sig, nil(sig), ivar_t("y1")),
                int(sig, 0),
                leq(sig, ivar_t("y1"), int(sig, 0)),
            ),
            Rule::new(
                fterm(sig, cons(sig, ivar_t("x2"), lvar_t("xs2")), ivar_t("y2")),
                fterm(sig, lvar_t("xs2"), sub(sig, ivar_t("y2"), int(sig, 1))),
                and(
                    sig,
                    leq(sig, ivar_t("x2"), int(sig, 0)),
                    gt(sig, ivar_t("y2"), int(sig, 0)),
                ),
            ),
            Rule::new(
                fterm(
                    sig,
                    cons(sig, ivar_t("x3"), cons(sig, ivar_t("z3"), lvar_t("zs3"))),
                    ivar_t("y3"),
                ),
                add(
                    sig,
                    ivar_t("x3"),
                    fterm(sig, lvar_t("zs3"), sub(sig, ivar_t("y3"), int(sig, 2))),
                ),
                and(
                    sig,
                    gt(sig, ivar_t("x3"), int(sig, 0)),
                    gt(sig, ivar_t("y3"), int(sig, 1)),
                ),
            ),
        ]
    }

    /// The completion of [`base_rules`]: three extra rules that send the
    /// uncovered inputs to 0.
    fn completed_rules(sig: &Signature) -> Vec<Rule> {
        let mut rules = base_rules(sig);
        let g2 = |x: Term, y: Term| {
            and(sig, leq(sig, x, int(sig, 0)), gt(sig, y, int(sig, 0)))
        };
        let g3 = |x: Term, y: Term| {
            and(sig, gt(sig, x, int(sig, 0)), gt(sig, y, int(sig, 1)))
        };
        rules.push(Rule::new(
            fterm(sig, nil(sig), ivar_t("ya")),
            int(sig, 0),
            not(sig, leq(sig, ivar_t("ya"), int(sig, 0))),
        ));
        rules.push(Rule::new(
            fterm(sig, cons(sig, ivar_t("xb"), nil(sig)), ivar_t("yb")),
            int(sig, 0),
            not(sig, g2(ivar_t("xb"), ivar_t("yb"))),
        ));
        rules.push(Rule::new(
            fterm(
                sig,
                cons(sig, ivar_t("xc"), cons(sig, ivar_t("zc"), lvar_t("zsc"))),
                ivar_t("yc"),
            ),
            int(sig, 0),
            and(
                sig,
                not(sig, g2(ivar_t("xc"), ivar_t("yc"))),
                not(sig, g3(ivar_t("xc"), ivar_t("yc"))),
            ),
        ));
        rules
    }

    fn base_system() -> Lctrs {
        let sig = list_signature();
        let rules = base_rules(&sig);
        Lctrs::new(sig, rules)
    }

    fn completed_system() -> Lctrs {
        let sig = list_signature();
        let rules = completed_rules(&sig);
        Lctrs::new(sig, rules)
    }

    fn ground_list(sig: &Signature, items: &[i64]) -> Term {
        items
            .iter()
            .rev()
            .fold(nil(sig), |acc, &n| cons(sig, int(sig, n), acc))
    }

    #[test]
    fn validation_accepts_the_example_and_rejects_malformed_rules() {
        let lctrs = base_system();
        assert!(lctrs.validate().is_ok());
        assert!(lctrs.is_left_linear());
        let sig = &lctrs.sig;
        let constructor_rooted = Rule::new(nil(sig), nil(sig), tt(sig));
        assert!(matches!(
            constructor_rooted.validate(),
            Err(LctrsError::LhsRootNotDefined { .. })
        ));
        let variable_lhs = Rule::new(lvar_t("xs"), nil(sig), tt(sig));
        assert!(matches!(variable_lhs.validate(), Err(LctrsError::LhsIsVariable(_))));
        // An extra guard variable of theory sort is a fine logical variable…
        let extra_guard_var = Rule::new(
            fterm(sig, lvar_t("xs"), ivar_t("y")),
            int(sig, 0),
            eq(sig, ivar_t("y"), ivar_t("w")),
        );
        assert!(extra_guard_var.validate().is_ok());
        // …but a term-sorted variable appearing only on the right is not.
        let unbound_list = Rule::new(
            fterm(sig, lvar_t("xs"), ivar_t("y")),
            fterm(sig, lvar_t("other"), ivar_t("y")),
            tt(sig),
        );
        assert!(matches!(
            unbound_list.validate(),
            Err(LctrsError::LogicalVarNotTheory { .. })
        ));
        let int_guard = Rule::new(fterm(sig, lvar_t("xs"), ivar_t("y")), int(sig, 0), int(sig, 1));
        assert!(matches!(int_guard.validate(), Err(LctrsError::GuardNotBoolean(_))));
        let sort_clash = Rule::new(fterm(sig, lvar_t("xs"), ivar_t("y")), nil(sig), tt(sig));
        assert!(matches!(sort_clash.validate(), Err(LctrsError::SortMismatch(_))));
    }

    #[test]
    fn incomplete_system_yields_the_three_witnesses() {
        let lctrs = base_system();
        let mut solver = BuiltinSolver::new();
        let report = quasi_reducible(&lctrs, &mut solver, EquivMode::Syntactic).unwrap();
        assert_eq!(report.verdict, QrVerdict::NotQuasiReducible);
        assert_eq!(report.witnesses.len(), 3, "witnesses: {:?}", report.witnesses);
        let sig = &lctrs.sig;
        let nil_witness = report
            .witnesses
            .iter()
            .find(|w| matches!(w.term(), Term::App(_, args) if args[0] == nil(sig)))
            .expect("a witness with an empty list");
        assert!(nil_witness.to_string().contains("not"));
    }

    #[test]
    fn completed_system_is_quasi_reducible() {
        let lctrs = completed_system();
        let mut solver = BuiltinSolver::new();
        let report = quasi_reducible(&lctrs, &mut solver, EquivMode::Syntactic).unwrap();
        assert_eq!(
            report.verdict,
            QrVerdict::QuasiReducible,
            "witnesses: {:?}",
            report.witnesses
        );
        assert!(report.witnesses.is_empty());
    }

    #[test]
    fn value_freeing_handles_literals_in_left_hand_sides() {
        // g(0) -> 0 and g(x) -> x [x ≠ 0] cover all of int between them.
        let mut sig = Signature::new();
        sig.add_defined("g", &[Sort::int()], Sort::int()).unwrap();
        let g = |a: Term| Term::app(sig.lookup_unique("g", 1).unwrap(), vec![a]).unwrap();
        let rules = vec![
            Rule::new(g(int(&sig, 0)), int(&sig, 0), tt(&sig)),
            Rule::new(g(ivar_t("x")), ivar_t("x"), neq(&sig, ivar_t("x"), int(&sig, 0))),
        ];
        let lctrs = Lctrs::new(sig, rules);
        lctrs.validate().unwrap();
        let mut solver = BuiltinSolver::new();
        let report = quasi_reducible(&lctrs, &mut solver, EquivMode::Syntactic).unwrap();
        assert_eq!(
            report.verdict,
            QrVerdict::QuasiReducible,
            "witnesses: {:?}",
            report.witnesses
        );
        // Dropping the literal rule uncovers exactly the zero input.
        let shorter = Lctrs::new(lctrs.sig.clone(), lctrs.rules[1..].to_vec());
        let report2 = quasi_reducible(&shorter, &mut solver, EquivMode::Syntactic).unwrap();
        assert_eq!(report2.verdict, QrVerdict::NotQuasiReducible);
        assert_eq!(report2.witnesses.len(), 1);
        let w = &report2.witnesses[0];
        assert!(w.to_string().contains("not"), "witness: {}", w);
    }

    #[test]
    fn ruleless_symbols_are_refuted() {
        let mut sig = list_signature();
        sig.add_defined("h", &[Sort::int()], Sort::int()).unwrap();
        let lctrs = Lctrs::new(sig.clone(), base_rules(&sig));
        let mut solver = BuiltinSolver::new();
        let report = quasi_reducible(&lctrs, &mut solver, EquivMode::Syntactic).unwrap();
        assert_eq!(report.verdict, QrVerdict::NotQuasiReducible);
        assert_eq!(report.witnesses.len(), 4, "witnesses: {:?}", report.witnesses);
    }

    #[test]
    fn nonlinear_rules_are_rejected_by_the_decision_procedure() {
        // p(x, x) -> x is a legal rule, but the decision needs linearity.
        let mut sig = Signature::new();
        sig.add_defined("p", &[Sort::int(), Sort::int()], Sort::int()).unwrap();
        let p = |a: Term, b: Term| {
            Term::app(sig.lookup_unique("p", 2).unwrap(), vec![a, b]).unwrap()
        };
        let rules = vec![Rule::new(p(ivar_t("x"), ivar_t("x")), ivar_t("x"), tt(&sig))];
        let lctrs = Lctrs::new(sig.clone(), rules);
        lctrs.validate().unwrap();
        assert!(!lctrs.is_left_linear());
        let issues = lctrs.diagnostics();
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].severity, Severity::Error);
        assert!(issues[0].message.contains("left-linear"), "{}", issues[0].message);
        let mut solver = BuiltinSolver::new();
        let err = quasi_reducible(&lctrs, &mut solver, EquivMode::Syntactic).unwrap_err();
        assert!(matches!(err, QrError::Preconditions(_)), "{}", err);
        // Rewriting is unaffected: the rule still matches equal arguments.
        assert!(is_redex(&lctrs, &mut solver, &p(int(&sig, 3), int(&sig, 3))));
        assert!(!is_redex(&lctrs, &mut solver, &p(int(&sig, 3), int(&sig, 4))));
    }

    #[test]
    fn theory_sorted_constructors_are_rejected() {
        let mut sig = list_signature();
        sig.add_constructor("weight", &[sig.sort("list").unwrap()], Sort::int()).unwrap();
        let lctrs = Lctrs::new(sig.clone(), base_rules(&sig));
        let issues = lctrs.diagnostics();
        assert!(issues
            .iter()
            .any(|i| i.severity == Severity::Error && i.message.contains("weight")));
        let mut solver = BuiltinSolver::new();
        let err = quasi_reducible(&lctrs, &mut solver, EquivMode::Syntactic).unwrap_err();
        assert!(matches!(err, QrError::Preconditions(_)));
    }

    #[test]
    fn non_pattern_rules_are_excluded_with_a_warning() {
        // f's only rule has a defined symbol below the root, so it is
        // excluded and f's leftover survives — but only as a candidate.
        let mut sig = Signature::new();
        sig.add_defined("g", &[Sort::int()], Sort::int()).unwrap();
        sig.add_defined("f", &[Sort::int()], Sort::int()).unwrap();
        let g = |a: Term| Term::app(sig.lookup_unique("g", 1).unwrap(), vec![a]).unwrap();
        let f = |a: Term| Term::app(sig.lookup_unique("f", 1).unwrap(), vec![a]).unwrap();
        let rules = vec![
            Rule::new(f(g(ivar_t("x"))), int(&sig, 0), tt(&sig)),
            Rule::new(g(ivar_t("x")), ivar_t("x"), tt(&sig)),
        ];
        let lctrs = Lctrs::new(sig, rules);
        lctrs.validate().unwrap();
        let issues = lctrs.diagnostics();
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].severity, Severity::Warning);
        let mut solver = BuiltinSolver::new();
        let report = quasi_reducible(&lctrs, &mut solver, EquivMode::Syntactic).unwrap();
        assert_eq!(report.verdict, QrVerdict::Unknown);
        assert_eq!(report.witnesses.len(), 1);
        assert!(report.witnesses[0].term().to_string().starts_with("f("));
        assert!(report.reason.is_some());
        assert!(report.diagnostics.iter().any(|d| d.contains("not a pattern")));
    }

    #[test]
    fn witnesses_as_rules_complete_the_system() {
        // Extending the incomplete system by one rule per witness (any
        // right-hand side works) must make it quasi-reducible.
        let lctrs = base_system();
        let mut solver = BuiltinSolver::new();
        let report = quasi_reducible(&lctrs, &mut solver, EquivMode::Syntactic).unwrap();
        assert_eq!(report.verdict, QrVerdict::NotQuasiReducible);
        let mut rules = lctrs.rules.clone();
        for w in &report.witnesses {
            rules.push(Rule::new(
                w.term().clone(),
                int(&lctrs.sig, 0),
                w.constraint().clone(),
            ));
        }
        let extended = Lctrs::new(lctrs.sig.clone(), rules);
        extended.validate().unwrap();
        let report2 = quasi_reducible(&extended, &mut solver, EquivMode::Syntactic).unwrap();
        assert_eq!(
            report2.verdict,
            QrVerdict::QuasiReducible,
            "witnesses: {:?}",
            report2.witnesses
        );
    }

    #[test]
    fn complement_ignores_patterns_with_other_roots() {
        // Noise rooted in another defined symbol leaves the per-symbol
        // complement alone.
        let mut sig = list_signature();
        sig.add_defined("g", &[Sort::int()], Sort::int()).unwrap();
        let f = sig.lookup_unique("f", 2).unwrap();
        let g = Term::app(sig.lookup_unique("g", 1).unwrap(), vec![ivar_t("n")]).unwrap();
        let q = vec![ConstrainedTerm::new(
            fterm(&sig, nil(&sig), ivar_t("y")),
            leq(&sig, ivar_t("y"), int(&sig, 0)),
        )
        .unwrap()];
        let noise = ConstrainedTerm::unconstrained(&sig, g);
        let mut with_noise = q.clone();
        with_noise.push(noise);
        let mut solver = BuiltinSolver::new();
        let plain = copat_f(&sig, &mut solver, EquivMode::Syntactic, &q, &f).unwrap();
        let noisy = copat_f(&sig, &mut solver, EquivMode::Syntactic, &with_noise, &f).unwrap();
        assert_eq!(plain.status, DiffStatus::Exact);
        assert_eq!(noisy.status, DiffStatus::Exact);
        assert_eq!(plain.p.len(), noisy.p.len());
        for (a, b) in plain.p.iter().zip(noisy.p.iter()) {
            assert!(
                crate::term::alpha_eq_all(&[
                    (a.term(), b.term()),
                    (a.constraint(), b.constraint())
                ]),
                "complement changed under noise: {} vs {}",
                a,
                b
            );
        }
    }

    #[test]
    fn uninhabited_sorts_produce_no_witnesses() {
        // `stream` has a single constructor needing another stream, so it
        // has no ground terms: a function on streams is vacuously covered.
        let mut sig = list_signature();
        let stream = sig.add_sort("stream").unwrap();
        sig.add_constructor("scons", &[Sort::int(), stream.clone()], stream.clone())
            .unwrap();
        sig.add_defined("head", &[stream], Sort::int()).unwrap();
        let lctrs = Lctrs::new(sig.clone(), base_rules(&sig));
        let mut solver = BuiltinSolver::new();
        let report = quasi_reducible(&lctrs, &mut solver, EquivMode::Syntactic).unwrap();
        // `f` is still refuted, but `head` adds nothing.
        assert_eq!(report.verdict, QrVerdict::NotQuasiReducible);
        assert_eq!(report.witnesses.len(), 3, "witnesses: {:?}", report.witnesses);
        assert!(report
            .witnesses
            .iter()
            .all(|w| w.term().to_string().starts_with("f(")));
    }

    #[test]
    fn redex_checks_follow_the_guards() {
        let base = base_system();
        let completed = completed_system();
        let mut solver = BuiltinSolver::new();
        let sig = &base.sig;
        // Covered by rule 1 / uncovered without the completion.
        let good = fterm(sig, nil(sig), int(sig, 0));
        let stuck = fterm(sig, nil(sig), int(sig, 1));
        assert!(is_redex(&base, &mut solver, &good));
        assert!(!is_redex(&base, &mut solver, &stuck));
        assert!(is_redex(&completed, &mut solver, &stuck));
        // Rule 2 needs a non-positive head and fuel.
        let covered = fterm(sig, ground_list(sig, &[0]), int(sig, 1));
        assert!(is_redex(&base, &mut solver, &covered));
        let uncovered = fterm(sig, ground_list(sig, &[5]), int(sig, 1));
        assert!(!is_redex(&base, &mut solver, &uncovered));
        assert!(is_redex(&completed, &mut solver, &uncovered));
        // A match that would bind a guard variable to a non-value is not a
        // redex, even though the sum evaluates to something covered.
        let unevaluated = fterm(sig, nil(sig), add(sig, int(sig, 0), int(sig, 0)));
        assert!(!is_redex(&base, &mut solver, &unevaluated));
        // Calculations on values are redexes; division by zero is stuck.
        assert!(is_redex(&base, &mut solver, &add(sig, int(sig, 1), int(sig, 2))));
        let div = |a: Term, b: Term| {
            Term::app(sig.lookup_unique("div", 2).unwrap(), vec![a, b]).unwrap()
        };
        assert!(!is_redex(&base, &mut solver, &div(int(sig, 1), int(sig, 0))));
        // Values and constructor terms are never redexes.
        assert!(!is_redex(&base, &mut solver, &int(sig, 7)));
        assert!(!is_redex(&base, &mut solver, &ground_list(sig, &[1, 2])));
    }

    /// The worked rewrite: summing the positive elements at even offsets of
    /// `[1, 2, 0, 3, 4]` with fuel 5 yields 1 + 3 = 4.
    #[test]
    fn rewriting_the_worked_example_reaches_four() {
        let lctrs = base_system();
        let mut solver = BuiltinSolver::new();
        let sig = &lctrs.sig;
        let start = fterm(sig, ground_list(sig, &[1, 2, 0, 3, 4]), int(sig, 5));
        let (normal, steps) = rewrite(&lctrs, &mut solver, &start, 100);
        assert_eq!(normal, int(sig, 4));
        assert!(steps > 0 && steps < 100);
        // The completed system computes the same value on covered input.
        let completed = completed_system();
        let (normal2, _) = rewrite(&completed, &mut solver, &start, 100);
        assert_eq!(normal2, int(sig, 4));
    }

    #[test]
    fn rewrite_uses_solver_models_for_extra_logical_variables() {
        // q(x) -> y [y = x + 1] forces y by constraint rather than match.
        let mut sig = Signature::new();
        sig.add_defined("q", &[Sort::int()], Sort::int()).unwrap();
        let q = |a: Term| Term::app(sig.lookup_unique("q", 1).unwrap(), vec![a]).unwrap();
        let rule = Rule::new(
            q(ivar_t("x")),
            ivar_t("y"),
            eq(&sig, ivar_t("y"), add(&sig, ivar_t("x"), int(&sig, 1))),
        );
        let lctrs = Lctrs::new(sig.clone(), vec![rule]);
        lctrs.validate().unwrap();
        let mut solver = BuiltinSolver::new();
        let (normal, steps) = rewrite(&lctrs, &mut solver, &q(int(&sig, 41)), 10);
        assert_eq!(normal, int(&sig, 42));
        assert_eq!(steps, 1);
        // An unconstrained right-hand-side variable falls back to the
        // default value 0.
        let rule2 = Rule::new(q(ivar_t("x")), ivar_t("z"), tt(&sig));
        let lctrs2 = Lctrs::new(sig.clone(), vec![rule2]);
        let (normal2, _) = rewrite(&lctrs2, &mut solver, &q(int(&sig, 5)), 10);
        assert_eq!(normal2, int(&sig, 0));
    }
}
