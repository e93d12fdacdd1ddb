//! Shared constructors for unit tests: the list signature from the worked
//! examples and shorthand builders for terms over it.

use std::sync::Arc;

use crate::signature::{FunctionSymbol, Signature, Sort};
use crate::term::{Term, Var};

/// Signature with sorts {int, bool, list}, constructors nil/cons and a
/// defined symbol f : list * int => int.
pub(crate) fn list_signature() -> Signature {
    let mut sig = Signature::new();
    let list = sig.add_sort("list").unwrap();
    sig.add_constructor("nil", &[], list.clone()).unwrap();
    sig.add_constructor("cons", &[Sort::int(), list.clone()], list.clone()).unwrap();
    sig.add_defined("f", &[list, Sort::int()], Sort::int()).unwrap();
    sig
}

/// The finite-constructor variant used by the complement examples: integer
/// values restricted to {0, 1}.
pub(crate) fn c1prime_signature() -> Signature {
    let mut sig = list_signature();
    sig.restrict_int_values([0, 1]);
    sig
}

pub(crate) fn ivar(name: &str) -> Var {
    Var::new(name, Sort::int())
}

pub(crate) fn bvar(name: &str) -> Var {
    Var::new(name, Sort::boolean())
}

pub(crate) fn lvar(name: &str) -> Var {
    Var::new(name, Sort::term("list"))
}

pub(crate) fn ivar_t(name: &str) -> Term {
    Term::var(ivar(name))
}

pub(crate) fn bvar_t(name: &str) -> Term {
    Term::var(bvar(name))
}

pub(crate) fn lvar_t(name: &str) -> Term {
    Term::var(lvar(name))
}

fn sym(sig: &Signature, name: &str, arity: usize) -> Arc<FunctionSymbol> {
    sig.lookup_unique(name, arity)
        .unwrap_or_else(|| panic!("symbol {}/{} not found", name, arity))
}

pub(crate) fn nil(sig: &Signature) -> Term {
    Term::constant(sym(sig, "nil", 0)).unwrap()
}

pub(crate) fn cons(sig: &Signature, head: Term, tail: Term) -> Term {
    Term::app(sym(sig, "cons", 2), vec![head, tail]).unwrap()
}

pub(crate) fn fterm(sig: &Signature, l: Term, n: Term) -> Term {
    Term::app(sym(sig, "f", 2), vec![l, n]).unwrap()
}

pub(crate) fn int(sig: &Signature, n: i64) -> Term {
    Term::constant(sig.int_value(n)).unwrap()
}

pub(crate) fn tt(sig: &Signature) -> Term {
    Term::constant(sig.bool_value(true)).unwrap()
}

pub(crate) fn ff(sig: &Signature) -> Term {
    Term::constant(sig.bool_value(false)).unwrap()
}

pub(crate) fn and(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::and(sig, a, b)
}

pub(crate) fn or(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::or(sig, a, b)
}

pub(crate) fn not(sig: &Signature, a: Term) -> Term {
    crate::build::not(sig, a)
}

pub(crate) fn imp(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::implies(sig, a, b)
}

pub(crate) fn iff(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::iff(sig, a, b)
}

pub(crate) fn eq(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::eq(sig, a, b)
}

pub(crate) fn neq(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::neq(sig, a, b)
}

pub(crate) fn leq(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::leq(sig, a, b)
}

pub(crate) fn lt(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::lt(sig, a, b)
}

pub(crate) fn geq(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::geq(sig, a, b)
}

pub(crate) fn gt(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::gt(sig, a, b)
}

pub(crate) fn add(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::add(sig, a, b)
}

pub(crate) fn sub(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::sub(sig, a, b)
}

pub(crate) fn mul(sig: &Signature, a: Term, b: Term) -> Term {
    crate::build::mul(sig, a, b)
}

/// Set equality up to renaming: some bijection between the slices maps each
/// element to an alpha-equivalent partner. Quadratic backtracking matching,
/// fine for the small sets in tests.
pub(crate) fn alpha_set_eq(left: &[Term], right: &[Term]) -> bool {
    fn matching(left: &[Term], right: &[Term], used: &mut Vec<bool>, i: usize) -> bool {
        if i == left.len() {
            return true;
        }
        for j in 0..right.len() {
            if !used[j] && crate::term::alpha_eq(&left[i], &right[j]) {
                used[j] = true;
                if matching(left, right, used, i + 1) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    left.len() == right.len() && matching(left, right, &mut vec![false; right.len()], 0)
}

pub(crate) fn pretty(terms: &[Term]) -> Vec<String> {
    terms.iter().map(|t| t.to_string()).collect()
}
