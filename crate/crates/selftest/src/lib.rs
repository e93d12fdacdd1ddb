//! Randomized, seeded self-check suites for the pattern calculus.
//!
//! Every suite builds a deterministic corpus from a fixed seed, exercises
//! one part of the library against an independent oracle — finite ground
//! enumeration, model evaluation, or a round trip through the concrete
//! syntax — and reports a one-line summary. The suites are plain functions
//! returning `Result<String, String>` so the same corpora back both
//! `cargo test` and the command-line acceptance checks.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Duration;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lctrs_core::build;
use lctrs_core::cterm::constrained_unifiable;
use lctrs_core::diff::weight_decreases;
use lctrs_core::io::{parse_constrained_pattern, printer};
use lctrs_core::oracle::{Enumerator, FiniteFragment};
use lctrs_core::solver::{eval_ground, validate_model, BuiltinSolver, ExternalSolver, Value};
use lctrs_core::subst::{more_general, strictly_more_general};
use lctrs_core::term::{alpha_eq_all, FreshVars};
use lctrs_core::unify::unify_with_stats;
use lctrs_core::{
    ConstrainedTerm, DiffCtx, DiffStatus, EquivMode, FunctionSymbol, SatResult, Signature,
    Solver, Sort, Substitution, Term, Var,
};

/// Default seeds, shared between the unit tests and the acceptance checks
/// so both run the same corpora.
pub mod seeds {
    pub const PARTITION: u64 = 17;
    pub const SET_DIFF: u64 = 29;
    pub const UNIFICATION: u64 = 43;
    pub const SOLVER: u64 = 59;
    pub const ROUNDTRIP: u64 = 71;
}

/// The two-sort signature every suite draws from: integer lists with three
/// constructors and one defined symbol `f : list * int => int`.
struct Corpus {
    sig: Signature,
    list: Sort,
    nil: Arc<FunctionSymbol>,
    unit: Arc<FunctionSymbol>,
    cons: Arc<FunctionSymbol>,
    f: Arc<FunctionSymbol>,
}

impl Corpus {
    fn new() -> Corpus {
        let mut sig = Signature::new();
        let list = sig.add_sort("list").unwrap();
        let nil = sig.add_constructor("nil", &[], list.clone()).unwrap();
        let unit = sig.add_constructor("unit", &[Sort::int()], list.clone()).unwrap();
        let cons = sig
            .add_constructor("cons", &[Sort::int(), list.clone()], list.clone())
            .unwrap();
        let f = sig.add_defined("f", &[list.clone(), Sort::int()], Sort::int()).unwrap();
        Corpus { sig, list, nil, unit, cons, f }
    }
}

/// Names fresh variables with a per-pattern prefix so the two sides of a
/// difference never share a variable; a nonzero `reuse` probability makes
/// integer variables repeat, producing nonlinear terms.
struct VarPool {
    prefix: String,
    next: usize,
    ints: Vec<Var>,
    reuse: f64,
}

impl VarPool {
    fn new(prefix: &str, reuse: f64) -> VarPool {
        VarPool { prefix: prefix.to_string(), next: 0, ints: Vec::new(), reuse }
    }

    fn int_term(&mut self, rng: &mut ChaCha8Rng) -> Term {
        if !self.ints.is_empty() && rng.gen_bool(self.reuse) {
            let v = self.ints[rng.gen_range(0..self.ints.len())].clone();
            return Term::var(v);
        }
        let v = Var::new(&format!("{}{}", self.prefix, self.next), Sort::int());
        self.next += 1;
        self.ints.push(v.clone());
        Term::var(v)
    }

    fn list_var(&mut self, sort: &Sort) -> Term {
        let v = Var::new(&format!("{}l{}", self.prefix, self.next), sort.clone());
        self.next += 1;
        Term::var(v)
    }
}

struct Gen<'a> {
    c: &'a Corpus,
    rng: ChaCha8Rng,
}

impl<'a> Gen<'a> {
    fn new(c: &'a Corpus, seed: u64) -> Gen<'a> {
        Gen { c, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A random list term: a spine of at most `budget` conses ending in
    /// `nil`, `unit(n)`, or a fresh list variable.
    fn list_term(&mut self, budget: u32, pool: &mut VarPool) -> Term {
        let pick = if budget == 0 { self.rng.gen_range(0..3) } else { self.rng.gen_range(0..8) };
        match pick {
            0 => pool.list_var(&self.c.list),
            1 => Term::constant(self.c.nil.clone()).unwrap(),
            2 => Term::app(self.c.unit.clone(), vec![pool.int_term(&mut self.rng)]).unwrap(),
            _ => {
                let head = pool.int_term(&mut self.rng);
                let tail = self.list_term(budget - 1, pool);
                Term::app(self.c.cons.clone(), vec![head, tail]).unwrap()
            }
        }
    }

    /// A random comparison atom with unit coefficients: `v ⋈ c` or
    /// `v ± w ⋈ c` over distinct variables and constants in `-2..=2`, the
    /// fragment the built-in solver decides exactly.
    fn atom(&mut self, vars: &[Var]) -> Term {
        let lhs = if vars.len() >= 2 && self.rng.gen_bool(0.3) {
            let i = self.rng.gen_range(0..vars.len());
            let mut j = self.rng.gen_range(0..vars.len() - 1);
            if j >= i {
                j += 1;
            }
            let (a, b) = (Term::var(vars[i].clone()), Term::var(vars[j].clone()));
            if self.rng.gen_bool(0.5) {
                build::add(&self.c.sig, a, b)
            } else {
                build::sub(&self.c.sig, a, b)
            }
        } else {
            Term::var(vars[self.rng.gen_range(0..vars.len())].clone())
        };
        let rhs = build::int(&self.c.sig, self.rng.gen_range(-2..=2));
        match self.rng.gen_range(0..6) {
            0 => build::eq(&self.c.sig, lhs, rhs),
            1 => build::neq(&self.c.sig, lhs, rhs),
            2 => build::leq(&self.c.sig, lhs, rhs),
            3 => build::lt(&self.c.sig, lhs, rhs),
            4 => build::geq(&self.c.sig, lhs, rhs),
            _ => build::gt(&self.c.sig, lhs, rhs),
        }
    }

    /// A random constraint over `vars`: one to three atoms joined by
    /// conjunction and disjunction, occasionally negated, occasionally just
    /// `true`. When `witness` is given, one extra atom mentions it so the
    /// variable really occurs in the constraint.
    fn constraint(&mut self, vars: &[Var], witness: Option<&Var>) -> Term {
        if vars.is_empty() || (witness.is_none() && self.rng.gen_bool(0.15)) {
            return build::truth(&self.c.sig);
        }
        let count = self.rng.gen_range(1..=3);
        let mut atoms = Vec::new();
        for _ in 0..count {
            let a = self.atom(vars);
            atoms.push(if self.rng.gen_bool(0.2) { build::not(&self.c.sig, a) } else { a });
        }
        if let Some(w) = witness {
            atoms.push(self.atom(std::slice::from_ref(w)));
        }
        let mut out = atoms.remove(0);
        for a in atoms {
            out = if self.rng.gen_bool(0.7) {
                build::and(&self.c.sig, out, a)
            } else {
                build::or(&self.c.sig, out, a)
            };
        }
        out
    }

    /// A random constrained pattern rooted in `f`. A nonzero `reuse` makes
    /// nonlinear terms possible; `extra_var` sometimes adds a constraint
    /// variable that does not occur in the term.
    fn pattern(&mut self, prefix: &str, reuse: f64, extra_var: bool) -> ConstrainedTerm {
        let mut pool = VarPool::new(prefix, reuse);
        let budget = self.rng.gen_range(0..=2);
        let lst = self.list_term(budget, &mut pool);
        let fuel = pool.int_term(&mut self.rng);
        let term = Term::app(self.c.f.clone(), vec![lst, fuel]).unwrap();
        let witness = if extra_var && self.rng.gen_bool(0.15) {
            Some(Var::new(&format!("{prefix}w"), Sort::int()))
        } else {
            None
        };
        let constraint = self.constraint(&pool.ints, witness.as_ref());
        ConstrainedTerm::new(term, constraint).unwrap()
    }

    /// One to three patterns over pairwise non-unifiable constructor
    /// skeletons, so the family has no overlaps whatever its constraints.
    fn disjoint_family(&mut self, tag: &str) -> Vec<ConstrainedTerm> {
        let mut shapes = [0usize, 1, 2, 3];
        for i in 0..shapes.len() {
            let j = self.rng.gen_range(i..shapes.len());
            shapes.swap(i, j);
        }
        let count = self.rng.gen_range(1..=3);
        shapes[..count].iter().map(|&which| self.skeleton(which, tag)).collect()
    }

    /// The four skeletons fix the list argument's length at zero, one (two
    /// constructors), or at least two, so no two share a ground instance.
    fn skeleton(&mut self, which: usize, tag: &str) -> ConstrainedTerm {
        let mut pool = VarPool::new(&format!("{tag}{which}"), 0.0);
        let nil = Term::constant(self.c.nil.clone()).unwrap();
        let lst = match which {
            0 => nil,
            1 => Term::app(self.c.unit.clone(), vec![pool.int_term(&mut self.rng)]).unwrap(),
            2 => Term::app(self.c.cons.clone(), vec![pool.int_term(&mut self.rng), nil]).unwrap(),
            _ => {
                let tail = pool.list_var(&self.c.list);
                let inner = Term::app(
                    self.c.cons.clone(),
                    vec![pool.int_term(&mut self.rng), tail],
                )
                .unwrap();
                Term::app(self.c.cons.clone(), vec![pool.int_term(&mut self.rng), inner]).unwrap()
            }
        };
        let fuel = pool.int_term(&mut self.rng);
        let term = Term::app(self.c.f.clone(), vec![lst, fuel]).unwrap();
        let constraint = self.constraint(&pool.ints, None);
        ConstrainedTerm::new(term, constraint).unwrap()
    }

    /// An arbitrary term (possibly nonlinear) and a linear partner of the
    /// same sort over disjoint variables.
    fn term_pair(&mut self) -> (Term, Term) {
        let mut sp = VarPool::new("x", 0.3);
        let mut tp = VarPool::new("t", 0.0);
        if self.rng.gen_bool(0.5) {
            (self.list_term(3, &mut sp), self.list_term(3, &mut tp))
        } else {
            let s = self.list_term(2, &mut sp);
            let s = Term::app(self.c.f.clone(), vec![s, sp.int_term(&mut self.rng)]).unwrap();
            let t = self.list_term(2, &mut tp);
            let t = Term::app(self.c.f.clone(), vec![t, tp.int_term(&mut self.rng)]).unwrap();
            (s, t)
        }
    }

    /// A closed constraint over two or three integer variables, conjoined
    /// with a contradictory pair about one of them every few cases so both
    /// verdicts occur in the corpus.
    fn closed_constraint(&mut self) -> Term {
        let count = self.rng.gen_range(2..=3);
        let vars: Vec<Var> =
            (0..count).map(|i| Var::new(&format!("v{i}"), Sort::int())).collect();
        let base = self.constraint(&vars, None);
        if self.rng.gen_bool(0.25) {
            let v = Term::var(vars[self.rng.gen_range(0..vars.len())].clone());
            let sig = &self.c.sig;
            let clash = build::and(
                sig,
                build::lt(sig, v.clone(), build::int(sig, 0)),
                build::gt(sig, v, build::int(sig, 0)),
            );
            build::and(sig, base, clash)
        } else {
            base
        }
    }
}

fn case_error(
    suite: &str,
    case: usize,
    seed: u64,
    detail: &str,
    sets: &[(&str, &[ConstrainedTerm])],
) -> String {
    let mut msg = format!("{suite} suite, case {case} (seed {seed}): {detail}");
    for (label, pats) in sets {
        for (i, p) in pats.iter().enumerate() {
            let _ = write!(msg, "\n  {label}[{i}] = {}", printer::cterm_to_string(p));
        }
    }
    msg
}

/// Checks the five clauses of the binary-difference partition theorem on
/// randomized (dividend, linear divisor) pairs: the results have pairwise
/// disjoint ground instances, stay linear when the dividend is linear, are
/// instances of the dividend (strict instances on the substitution branch),
/// never outgrow the inputs, and together cover exactly the dividend
/// instances that are not divisor instances. Ground semantics come from
/// enumeration over integers `-2..=2` up to height 4.
pub fn partition_suite(cases: usize, seed: u64) -> Result<String, String> {
    const SUITE: &str = "partition";
    let corpus = Corpus::new();
    let mut g = Gen::new(&corpus, seed);
    let mut solver = BuiltinSolver::new();
    let mut oracle = Enumerator::new(&corpus.sig, FiniteFragment::new(-2, 2, 4));
    let mut effective = 0usize;
    let mut produced = 0usize;
    for case in 0..cases {
        let s = g.pattern("x", 0.2, true);
        let t = g.pattern("t", 0.0, false);
        let err = |detail: String| {
            case_error(
                SUITE,
                case,
                seed,
                &detail,
                &[("dividend", std::slice::from_ref(&s)), ("divisor", std::slice::from_ref(&t))],
            )
        };

        let split = {
            let mut ctx = DiffCtx::new(&corpus.sig, &mut solver, EquivMode::Syntactic);
            ctx.diff(&s, &t).map_err(|e| err(format!("difference failed: {e}")))?
        };
        if split.status != DiffStatus::Exact {
            return Err(err("the difference was not decided exactly".into()));
        }
        let members = split.members();
        if split.effective {
            effective += 1;
        } else if members.len() != 1
            || !alpha_eq_all(&[
                (members[0].term(), s.term()),
                (members[0].constraint(), s.constraint()),
            ])
        {
            return Err(err("an ineffective difference must return the dividend".into()));
        }
        produced += members.len();

        let cap = s.height().max(t.height());
        let dividend_linear = s.term().is_linear();
        for u in &members {
            let shown = printer::cterm_to_string(u);
            if !u.is_pattern() || !u.is_value_free() {
                return Err(err(format!("result `{shown}` is not a value-free pattern")));
            }
            if dividend_linear && !u.term().is_linear() {
                return Err(err(format!("a linear dividend produced nonlinear `{shown}`")));
            }
            if u.height() > cap {
                return Err(err(format!("result `{shown}` outgrew the inputs")));
            }
            if more_general(s.term(), u.term()).is_none() {
                return Err(err(format!("result `{shown}` is not an instance of the dividend")));
            }
        }
        if split.effective {
            // An ineffective difference returns the dividend itself, so
            // strictness is only promised for real substitution branches.
            for u in &split.cosubst_branch {
                if !strictly_more_general(s.term(), u.term()) {
                    return Err(err(format!(
                        "substitution-branch result `{}` is not a strict instance of the dividend",
                        printer::cterm_to_string(u)
                    )));
                }
            }
        }

        let s_inst = oracle.ground_instances(&s);
        let t_inst = oracle.ground_instances(&t);
        let expected: BTreeSet<Term> = s_inst.difference(&t_inst).cloned().collect();
        let insts: Vec<BTreeSet<Term>> =
            members.iter().map(|u| oracle.ground_instances(u)).collect();
        let mut union: BTreeSet<Term> = BTreeSet::new();
        for (i, a) in insts.iter().enumerate() {
            if insts[i + 1..].iter().any(|b| a.intersection(b).next().is_some()) {
                return Err(err("two results share a ground instance".into()));
            }
            union.extend(a.iter().cloned());
        }
        if union != expected {
            return Err(err(format!(
                "ground semantics differ: {} result instances, {} expected",
                union.len(),
                expected.len()
            )));
        }
    }
    if effective < cases / 5 {
        return Err(format!(
            "{SUITE} suite: only {effective} of {cases} differences were effective; the corpus is too weak"
        ));
    }
    Ok(format!(
        "{cases} dividend/divisor pairs: {effective} effective, {produced} result patterns, \
         ground instances checked on integers -2..=2 up to height 4"
    ))
}

fn state_weight(
    ctx: &mut DiffCtx,
    state: &(Vec<ConstrainedTerm>, Vec<ConstrainedTerm>),
) -> Result<Vec<(Term, usize)>, String> {
    let mut weight = Vec::new();
    for u in &state.0 {
        let n = ctx.overlap_count(u, &state.1).map_err(|e| e.to_string())?;
        weight.push((u.term().clone(), n));
    }
    for v in &state.1 {
        let n = ctx.overlap_count(v, &state.0).map_err(|e| e.to_string())?;
        weight.push((v.term().clone(), n));
    }
    Ok(weight)
}

/// Checks the set difference on randomized families whose left set is
/// pairwise non-overlapping by construction: the results carry exactly the
/// ground instances of the two asymmetric differences, the left results stay
/// pairwise non-overlapping, and the termination weight strictly decreases
/// at every rewriting step.
pub fn set_diff_suite(cases: usize, seed: u64) -> Result<String, String> {
    const SUITE: &str = "set difference";
    let corpus = Corpus::new();
    let mut g = Gen::new(&corpus, seed);
    let mut solver = BuiltinSolver::new();
    let mut oracle = Enumerator::new(&corpus.sig, FiniteFragment::new(-2, 2, 4));
    let mut steps_total = 0usize;
    for case in 0..cases {
        let p = g.disjoint_family("p");
        // Half the right-hand families are free-form and may overlap
        // internally; the other half are non-overlapping by construction,
        // which is what the right result's exactness depends on.
        let q_disjoint = g.rng.gen_bool(0.5);
        let q: Vec<ConstrainedTerm> = if q_disjoint {
            g.disjoint_family("q")
        } else {
            let q_count = g.rng.gen_range(1..=2);
            (0..q_count).map(|i| g.pattern(&format!("q{i}x"), 0.0, false)).collect()
        };
        let err = |detail: String| {
            case_error(SUITE, case, seed, &detail, &[("left", &p), ("right", &q)])
        };

        let trace = {
            let mut ctx = DiffCtx::new(&corpus.sig, &mut solver, EquivMode::Syntactic);
            let trace = ctx
                .diff_sets_traced(&p, &q)
                .map_err(|e| err(format!("set difference failed: {e}")))?;
            for (step, win) in trace.snapshots.windows(2).enumerate() {
                let before = state_weight(&mut ctx, &win[0]).map_err(|e| err(e))?;
                let after = state_weight(&mut ctx, &win[1]).map_err(|e| err(e))?;
                if !weight_decreases(&before, &after) {
                    return Err(err(format!("the weight did not decrease at step {step}")));
                }
            }
            trace
        };
        if trace.status != DiffStatus::Exact {
            return Err(err("the set difference was not decided exactly".into()));
        }
        steps_total += trace.snapshots.len().saturating_sub(1);
        let result = trace.into_result();

        let p_inst = oracle.ground_instances_of_all(&p);
        let q_inst = oracle.ground_instances_of_all(&q);
        let expect_p: BTreeSet<Term> = p_inst.difference(&q_inst).cloned().collect();
        let expect_q: BTreeSet<Term> = q_inst.difference(&p_inst).cloned().collect();
        if oracle.ground_instances_of_all(&result.p) != expect_p {
            return Err(err("the left result's ground instances are wrong".into()));
        }
        let got_q = oracle.ground_instances_of_all(&result.q);
        if q_disjoint && got_q != expect_q {
            return Err(err("the right result's ground instances are wrong".into()));
        }
        // When the right family overlaps internally, a left pattern can be
        // consumed before meeting every right pattern that it covers, so
        // only the two containments are promised.
        if !expect_q.is_subset(&got_q) || !got_q.is_subset(&q_inst) {
            return Err(err("the right result's ground instances left the promised bounds".into()));
        }

        for (i, a) in result.p.iter().enumerate() {
            for b in &result.p[i + 1..] {
                let mut fresh = FreshVars::new();
                fresh.absorb_term(a.term());
                fresh.absorb_term(a.constraint());
                let b = b.rename_apart(&mut fresh);
                match constrained_unifiable(a, &b, &corpus.sig, &mut solver) {
                    Ok(None) => {}
                    Ok(Some(_)) => {
                        return Err(err(format!(
                            "left results `{}` and `{}` overlap",
                            printer::cterm_to_string(a),
                            printer::cterm_to_string(&b)
                        )))
                    }
                    Err(e) => return Err(err(format!("an overlap check was inconclusive: {e}"))),
                }
            }
        }
    }
    if steps_total < cases / 2 {
        return Err(format!(
            "{SUITE} suite: only {steps_total} rewriting steps over {cases} cases; the corpus is too weak"
        ));
    }
    Ok(format!(
        "{cases} set pairs: {steps_total} rewriting steps with strictly decreasing weight, \
         ground instances checked on integers -2..=2 up to height 4"
    ))
}

/// Unifies arbitrary generated terms against linear, variable-disjoint
/// partners and checks that every most general unifier actually unifies the
/// pair and restricts to a linearity-preserving substitution on the left
/// term's variables.
pub fn unification_suite(cases: usize, seed: u64) -> Result<String, String> {
    const SUITE: &str = "unification";
    let corpus = Corpus::new();
    let mut g = Gen::new(&corpus, seed);
    let mut unified = 0usize;
    let mut decompositions = 0usize;
    for case in 0..cases {
        let (s, t) = g.term_pair();
        match unify_with_stats(&s, &t) {
            Err(e) => {
                return Err(format!(
                    "{SUITE} suite, case {case} (seed {seed}): unifying `{s}` with `{t}` errored: {e}"
                ))
            }
            Ok((None, _)) => {}
            Ok((Some(mgu), stats)) => {
                unified += 1;
                decompositions += stats.decompose;
                if mgu.apply(&s) != mgu.apply(&t) {
                    return Err(format!(
                        "{SUITE} suite, case {case} (seed {seed}): the mgu does not unify `{s}` and `{t}`"
                    ));
                }
                let left_vars = s.var_set();
                if !mgu.restrict(&left_vars).is_linearity_preserving(&left_vars) {
                    return Err(format!(
                        "{SUITE} suite, case {case} (seed {seed}): the mgu of `{s}` and `{t}` \
                         does not restrict to a linearity-preserving substitution"
                    ));
                }
            }
        }
    }
    if unified < cases / 5 {
        return Err(format!(
            "{SUITE} suite: only {unified} of {cases} pairs unified; the corpus is too weak"
        ));
    }
    Ok(format!(
        "{cases} pairs against linear partners: {unified} unifiable, every restriction \
         linearity-preserving, {decompositions} decompositions"
    ))
}

/// Exhaustively searches assignments over `-3..=3` for one satisfying the
/// constraint; `None` means no witness exists in that box.
fn sweep_for_model(sig: &Signature, phi: &Term, vars: &[Var]) -> Option<String> {
    let mut assignment = vec![-3i64; vars.len()];
    loop {
        let sigma: Substitution = vars
            .iter()
            .cloned()
            .zip(assignment.iter().map(|&n| build::int(sig, n)))
            .collect();
        if let Ok(Value::Bool(true)) = eval_ground(&sigma.apply(phi)) {
            let witness: Vec<String> =
                vars.iter().zip(&assignment).map(|(v, n)| format!("{v} = {n}")).collect();
            return Some(witness.join(", "));
        }
        let mut i = 0;
        loop {
            if i == assignment.len() {
                return None;
            }
            assignment[i] += 1;
            if assignment[i] <= 3 {
                break;
            }
            assignment[i] = -3;
            i += 1;
        }
    }
}

/// Generates unit-coefficient constraints, re-validates every satisfiable
/// verdict of the built-in solver by evaluating the model, cross-checks
/// every unsatisfiable verdict by exhaustive evaluation over `-3..=3`, and,
/// when an external command is configured, requires verdict-for-verdict
/// agreement between the two backends.
pub fn solver_agreement_suite(
    cases: usize,
    seed: u64,
    external: Option<&str>,
) -> Result<String, String> {
    const SUITE: &str = "solver";
    let corpus = Corpus::new();
    let sig = &corpus.sig;
    let mut g = Gen::new(&corpus, seed);
    let mut builtin = BuiltinSolver::new();
    let mut ext = external.map(|cmd| ExternalSolver::new(cmd, Duration::from_secs(10)));
    let mut sat = 0usize;
    let mut unsat = 0usize;
    for case in 0..cases {
        let phi = g.closed_constraint();
        let verdict = builtin.sat(sig, &phi);
        match &verdict {
            SatResult::Sat(model) => {
                sat += 1;
                if !validate_model(&phi, model) {
                    return Err(format!(
                        "{SUITE} suite, case {case} (seed {seed}): the model claimed for `{phi}` \
                         does not evaluate to true"
                    ));
                }
            }
            SatResult::Unsat => {
                unsat += 1;
                let vars: Vec<Var> = phi.var_set().into_iter().collect();
                if let Some(witness) = sweep_for_model(sig, &phi, &vars) {
                    return Err(format!(
                        "{SUITE} suite, case {case} (seed {seed}): `{phi}` was called \
                         unsatisfiable but {witness} satisfies it"
                    ));
                }
            }
            SatResult::Unknown => {
                return Err(format!(
                    "{SUITE} suite, case {case} (seed {seed}): the built-in solver could not \
                     decide the unit-coefficient constraint `{phi}`"
                ));
            }
        }
        if let Some(ext) = ext.as_mut() {
            let theirs = ext.sat(sig, &phi);
            let agree = matches!(
                (&verdict, &theirs),
                (SatResult::Sat(_), SatResult::Sat(_)) | (SatResult::Unsat, SatResult::Unsat)
            );
            if !agree {
                return Err(format!(
                    "{SUITE} suite, case {case} (seed {seed}): the backends disagree on `{phi}`: \
                     builtin says {}, external says {}",
                    verdict_name(&verdict),
                    verdict_name(&theirs)
                ));
            }
            if let SatResult::Sat(model) = &theirs {
                if !validate_model(&phi, model) {
                    return Err(format!(
                        "{SUITE} suite, case {case} (seed {seed}): the external model for \
                         `{phi}` does not evaluate to true"
                    ));
                }
            }
        }
    }
    if sat == 0 || unsat == 0 {
        return Err(format!(
            "{SUITE} suite: the corpus is too weak ({sat} satisfiable, {unsat} unsatisfiable)"
        ));
    }
    let backend = match external {
        Some(cmd) => format!("external `{cmd}` agreed on every verdict"),
        None => "no external backend configured, agreement skipped".to_string(),
    };
    Ok(format!(
        "{cases} constraints: {sat} satisfiable with validated models, {unsat} unsatisfiable \
         confirmed by exhaustive evaluation over -3..=3; {backend}"
    ))
}

fn verdict_name(r: &SatResult) -> &'static str {
    match r {
        SatResult::Sat(_) => "sat",
        SatResult::Unsat => "unsat",
        SatResult::Unknown => "unknown",
    }
}

/// Prints random constrained patterns and parses them back, requiring the
/// result to be alpha-equivalent to the original and the reprint to be
/// byte-identical.
pub fn roundtrip_suite(cases: usize, seed: u64) -> Result<String, String> {
    const SUITE: &str = "round-trip";
    let corpus = Corpus::new();
    let mut g = Gen::new(&corpus, seed);
    let mut bytes = 0usize;
    for case in 0..cases {
        let ct = g.pattern("x", 0.25, true);
        let text = printer::cterm_to_string(&ct);
        let back = match parse_constrained_pattern(&text, &corpus.sig) {
            Ok(back) => back,
            Err(diags) => {
                let joined: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
                return Err(format!(
                    "{SUITE} suite, case {case} (seed {seed}): `{text}` failed to parse back: {}",
                    joined.join("; ")
                ));
            }
        };
        if !alpha_eq_all(&[(ct.term(), back.term()), (ct.constraint(), back.constraint())]) {
            return Err(format!(
                "{SUITE} suite, case {case} (seed {seed}): `{text}` reparsed as `{}`",
                printer::cterm_to_string(&back)
            ));
        }
        let again = printer::cterm_to_string(&back);
        if again != text {
            return Err(format!(
                "{SUITE} suite, case {case} (seed {seed}): the reprint drifted from `{text}` \
                 to `{again}`"
            ));
        }
        bytes += text.len();
    }
    Ok(format!(
        "{cases} patterns printed and reparsed ({bytes} bytes): alpha-equivalent, reprints \
         byte-identical"
    ))
}
