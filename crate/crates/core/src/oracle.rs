//! A brute-force oracle over a finite fragment of the ground terms:
//! constructor terms of bounded height whose integer values come from a
//! fixed range. The symbolic operations elsewhere in this crate are checked
//! against literal enumeration here — the oracle shares no machinery with
//! the difference calculus beyond term construction and ground evaluation.

use std::collections::{BTreeMap, BTreeSet};

use crate::cterm::ConstrainedTerm;
use crate::signature::{IntValueFamily, Signature, Sort};
use crate::solver::{eval_ground, Value};
use crate::subst::Substitution;
use crate::term::{Term, Var};

/// The fragment bounds: integer values in `int_min..=int_max`, ground terms
/// of height at most `max_height`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteFragment {
    pub int_min: i64,
    pub int_max: i64,
    pub max_height: usize,
}

impl FiniteFragment {
    pub fn new(int_min: i64, int_max: i64, max_height: usize) -> FiniteFragment {
        assert!(int_min <= int_max, "empty integer range");
        FiniteFragment { int_min, int_max, max_height }
    }
}

/// Memoizing enumerator for one signature and fragment.
pub struct Enumerator<'a> {
    sig: &'a Signature,
    fragment: FiniteFragment,
    memo: BTreeMap<(Sort, usize), Vec<Term>>,
}

impl<'a> Enumerator<'a> {
    pub fn new(sig: &'a Signature, fragment: FiniteFragment) -> Enumerator<'a> {
        Enumerator { sig, fragment, memo: BTreeMap::new() }
    }

    pub fn fragment(&self) -> FiniteFragment {
        self.fragment
    }

    /// The fragment's integer values: the configured range, cut down to the
    /// signature's value family when that is finite.
    fn int_values(&self) -> Vec<i64> {
        let range = self.fragment.int_min..=self.fragment.int_max;
        match self.sig.int_value_family() {
            IntValueFamily::Unbounded => range.collect(),
            IntValueFamily::Finite(vs) => {
                vs.iter().copied().filter(|n| range.contains(n)).collect()
            }
        }
    }

    /// The values of a theory sort, as terms.
    fn theory_values(&self, sort: &Sort) -> Vec<Term> {
        if sort.is_bool() {
            vec![
                Term::constant(self.sig.bool_value(true)).expect("values are constants"),
                Term::constant(self.sig.bool_value(false)).expect("values are constants"),
            ]
        } else {
            self.int_values()
                .into_iter()
                .map(|n| Term::constant(self.sig.int_value(n)).expect("values are constants"))
                .collect()
        }
    }

    /// Every ground constructor term of `sort` with height at most
    /// `max_height`, in a deterministic order.
    pub fn ground_terms(&mut self, sort: &Sort, max_height: usize) -> Vec<Term> {
        let key = (sort.clone(), max_height);
        if let Some(cached) = self.memo.get(&key) {
            return cached.clone();
        }
        let mut out = Vec::new();
        if max_height >= 1 {
            if sort.is_theory() {
                out = self.theory_values(sort);
            } else {
                let ctors = self
                    .sig
                    .constructors_of(sort)
                    .expect("term sorts always have a constructor list");
                for c in ctors {
                    let choices: Vec<Vec<Term>> = c
                        .arg_sorts()
                        .iter()
                        .map(|s| self.ground_terms(s, max_height - 1))
                        .collect();
                    product(&choices, &mut |args| {
                        out.push(
                            Term::app(c.clone(), args.to_vec())
                                .expect("enumerated arguments are well-sorted"),
                        );
                    });
                }
            }
        }
        self.memo.insert(key, out.clone());
        out
    }

    /// Every ground instance of the constrained term within the fragment:
    /// term variables run over ground constructor terms, constraint-only
    /// variables over values, and an instance counts when the instantiated
    /// constraint evaluates to true and the result stays within the height
    /// bound. A constraint whose evaluation fails (division by zero, say)
    /// rejects the assignment.
    pub fn ground_instances(&mut self, ct: &ConstrainedTerm) -> BTreeSet<Term> {
        let term_vars: Vec<Var> = ct.term().var_set().into_iter().collect();
        let extra_vars: Vec<Var> = ct
            .constraint()
            .var_set()
            .into_iter()
            .filter(|v| !term_vars.contains(v))
            .collect();
        let depths = occurrence_depths(ct.term());
        let mut vars = Vec::new();
        let mut choices: Vec<Vec<Term>> = Vec::new();
        for v in term_vars {
            let depth = depths.get(&v).copied().unwrap_or(0);
            let budget = self.fragment.max_height.saturating_sub(depth);
            vars.push(v.clone());
            choices.push(if v.sort().is_theory() {
                if budget >= 1 { self.theory_values(v.sort()) } else { Vec::new() }
            } else {
                self.ground_terms(v.sort(), budget)
            });
        }
        for v in extra_vars {
            assert!(v.sort().is_theory(), "constraint variables have theory sorts");
            vars.push(v.clone());
            choices.push(self.theory_values(v.sort()));
        }
        let mut out = BTreeSet::new();
        let max_height = self.fragment.max_height;
        product(&choices, &mut |images| {
            let mut sigma = Substitution::new();
            for (v, img) in vars.iter().zip(images) {
                sigma.insert(v.clone(), img.clone()).expect("images are well-sorted");
            }
            if !matches!(eval_ground(&sigma.apply(ct.constraint())), Ok(Value::Bool(true))) {
                return;
            }
            let instance = sigma.apply(ct.term());
            if instance.height() as usize <= max_height {
                out.insert(instance);
            }
        });
        out
    }

    /// The union of the ground instances of several constrained terms.
    pub fn ground_instances_of_all(&mut self, cts: &[ConstrainedTerm]) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        for ct in cts {
            out.extend(self.ground_instances(ct));
        }
        out
    }
}

/// Call `visit` with every combination drawn from the choice lists, in
/// odometer order. No combinations when any list is empty; one empty
/// combination when there are no lists.
fn product(choices: &[Vec<Term>], visit: &mut dyn FnMut(&[Term])) {
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut indices = vec![0usize; choices.len()];
    loop {
        let combo: Vec<Term> = indices.iter().zip(choices).map(|(&i, c)| c[i].clone()).collect();
        visit(&combo);
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < choices[pos].len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}

/// The maximum depth at which each variable occurs (root depth 0).
fn occurrence_depths(t: &Term) -> BTreeMap<Var, usize> {
    fn walk(t: &Term, depth: usize, out: &mut BTreeMap<Var, usize>) {
        match t {
            Term::Var(v) => {
                let entry = out.entry(v.clone()).or_insert(depth);
                *entry = (*entry).max(depth);
            }
            Term::App(_, args) => {
                for a in args {
                    walk(a, depth + 1, out);
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(t, 0, &mut out);
    out
}
