//! Syntactic unification by a transformation system without an Orient rule.
//!
//! Equations are oriented as given and stay oriented: besides Delete and
//! Decompose there are two elimination rules, one per side. A normal form is
//! either an extended solved form — every equation has a variable on one
//! side, those variables are pairwise distinct and occur in no right-hand
//! term — or evidence of non-unifiability (a clash or an occurs-cycle).
//!
//! Keeping orientations has a consequence the complement construction relies
//! on: when the two input terms share no variables and the right one is
//! linear, the right elimination rule never fires, and the resulting most
//! general unifier is linear on the variables of the left term.

use std::collections::BTreeSet;
use std::fmt;

use crate::signature::Sort;
use crate::subst::Substitution;
use crate::term::{Term, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnifyError {
    /// The two sides of an input equation have different sorts. This is a
    /// caller error, distinct from ordinary non-unifiability.
    SortMismatch { left: Sort, right: Sort },
}

impl fmt::Display for UnifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnifyError::SortMismatch { left, right } => {
                write!(f, "cannot unify terms of sorts {} and {}", left, right)
            }
        }
    }
}

impl std::error::Error for UnifyError {}

/// How often each transformation rule fired while solving a problem.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnifyStats {
    pub delete: usize,
    pub decompose: usize,
    pub eliminate_l: usize,
    pub eliminate_r: usize,
}

/// An oriented unification problem: a set of equations, kept as a
/// duplicate-free list in deterministic order.
#[derive(Debug, Clone)]
struct Problem {
    eqs: Vec<(Term, Term)>,
}

impl Problem {
    fn dedup(&mut self) {
        let mut seen: BTreeSet<(Term, Term)> = BTreeSet::new();
        self.eqs.retain(|eq| seen.insert(eq.clone()));
    }

    /// Variables of all equations except the one at `skip`.
    fn vars_elsewhere(&self, skip: usize) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for (i, (l, r)) in self.eqs.iter().enumerate() {
            if i == skip {
                continue;
            }
            out.extend(l.vars_iter().cloned());
            out.extend(r.vars_iter().cloned());
        }
        out
    }

    /// Apply `{x -> t}` to every equation except the one at `skip`.
    fn substitute_elsewhere(&mut self, skip: usize, x: &Var, t: &Term) {
        let s: Substitution = [(x.clone(), t.clone())].into_iter().collect();
        for (i, (l, r)) in self.eqs.iter_mut().enumerate() {
            if i == skip {
                continue;
            }
            *l = s.apply(l);
            *r = s.apply(r);
        }
    }

    /// Apply the first applicable rule under the fixed strategy: Delete,
    /// then Decompose, then the eliminations, each scanning left to right.
    fn step(&mut self, stats: &mut UnifyStats) -> bool {
        // Delete: drop a trivial equation.
        if let Some(i) = self.eqs.iter().position(|(l, r)| l == r) {
            self.eqs.remove(i);
            stats.delete += 1;
            return true;
        }
        // Decompose: split an equation between equal root symbols.
        for i in 0..self.eqs.len() {
            if let (Term::App(f, fs), Term::App(g, gs)) = (&self.eqs[i].0, &self.eqs[i].1) {
                if f == g {
                    let children: Vec<(Term, Term)> =
                        fs.iter().cloned().zip(gs.iter().cloned()).collect();
                    self.eqs.splice(i..=i, children);
                    stats.decompose += 1;
                    self.dedup();
                    return true;
                }
            }
        }
        // EliminateL: a left-hand variable that occurs elsewhere but not in
        // its own right-hand side is substituted away elsewhere.
        for i in 0..self.eqs.len() {
            if let (Term::Var(x), t) = (&self.eqs[i].0, &self.eqs[i].1) {
                if !t.contains_var(x) && self.vars_elsewhere(i).contains(x) {
                    let (x, t) = (x.clone(), t.clone());
                    self.substitute_elsewhere(i, &x, &t);
                    stats.eliminate_l += 1;
                    self.dedup();
                    return true;
                }
            }
        }
        // EliminateR: the mirror rule for right-hand variables.
        for i in 0..self.eqs.len() {
            if let (t, Term::Var(x)) = (&self.eqs[i].0, &self.eqs[i].1) {
                if !t.is_var() && !t.contains_var(x) && self.vars_elsewhere(i).contains(x) {
                    let (x, t) = (x.clone(), t.clone());
                    self.substitute_elsewhere(i, &x, &t);
                    stats.eliminate_r += 1;
                    self.dedup();
                    return true;
                }
            }
        }
        false
    }

    /// Read a normal form: `Some(mgu)` if it is an extended solved form,
    /// `None` otherwise (clash or occurs-cycle — not unifiable).
    fn into_solution(self) -> Option<Substitution> {
        let mut binders: Vec<(Var, Term)> = Vec::new();
        for (l, r) in &self.eqs {
            match (l, r) {
                (Term::Var(x), t) => binders.push((x.clone(), t.clone())),
                (t, Term::Var(x)) => binders.push((x.clone(), t.clone())),
                _ => return None, // two applications in normal form: a clash
            }
        }
        let binder_set: BTreeSet<&Var> = binders.iter().map(|(x, _)| x).collect();
        if binder_set.len() != binders.len() {
            return None;
        }
        for (_, t) in &binders {
            if t.vars_iter().any(|v| binder_set.contains(v)) {
                return None;
            }
        }
        Some(Substitution::from_pairs(binders).expect("equations are sort-aligned"))
    }
}

/// Solve a list of oriented equations. Returns the most general unifier (an
/// idempotent substitution whose domain is contained in the problem's
/// variables) or `None`, together with rule-application counts.
pub fn solve(
    equations: Vec<(Term, Term)>,
) -> Result<(Option<Substitution>, UnifyStats), UnifyError> {
    for (l, r) in &equations {
        if l.sort() != r.sort() {
            return Err(UnifyError::SortMismatch { left: l.sort(), right: r.sort() });
        }
    }
    let mut problem = Problem { eqs: equations };
    problem.dedup();
    let mut stats = UnifyStats::default();
    let mut fuel: u64 = 1_000_000;
    while problem.step(&mut stats) {
        fuel -= 1;
        if fuel == 0 {
            unreachable!("unification transformation failed to terminate");
        }
    }
    Ok((problem.into_solution(), stats))
}

/// Unify two terms of equal sort.
pub fn unify(s: &Term, t: &Term) -> Result<Option<Substitution>, UnifyError> {
    Ok(solve(vec![(s.clone(), t.clone())])?.0)
}

/// [`unify`], also reporting how often each transformation rule fired.
pub fn unify_with_stats(
    s: &Term,
    t: &Term,
) -> Result<(Option<Substitution>, UnifyStats), UnifyError> {
    solve(vec![(s.clone(), t.clone())])
}
