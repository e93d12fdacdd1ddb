//! Convenience constructors for theory terms over a signature.
//!
//! These resolve the calculation symbols by name (picking the overload that
//! matches the first argument's sort) and panic on ill-sorted use, which is
//! appropriate for internal construction of constraints whose operands are
//! already sort-checked.

use crate::signature::{names, Signature};
use crate::term::Term;

fn binary(sig: &Signature, name: &str, a: Term, b: Term) -> Term {
    let sym = sig
        .lookup(name, 2)
        .into_iter()
        .find(|f| f.arg_sorts()[0] == a.sort())
        .unwrap_or_else(|| panic!("no overload of {} for sort {}", name, a.sort()));
    Term::app(sym, vec![a, b]).expect("sort-checked binary application")
}

pub fn int(sig: &Signature, n: i64) -> Term {
    Term::constant(sig.int_value(n)).expect("integer value")
}

pub fn boolean(sig: &Signature, b: bool) -> Term {
    Term::constant(sig.bool_value(b)).expect("boolean value")
}

pub fn truth(sig: &Signature) -> Term {
    boolean(sig, true)
}

pub fn and(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::AND, a, b)
}

pub fn or(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::OR, a, b)
}

pub fn not(sig: &Signature, a: Term) -> Term {
    let sym = sig.lookup_unique(names::NOT, 1).expect("not symbol");
    Term::app(sym, vec![a]).expect("boolean negation")
}

pub fn implies(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::IMP, a, b)
}

pub fn iff(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::IFF, a, b)
}

pub fn eq(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::EQ, a, b)
}

pub fn neq(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::NEQ, a, b)
}

pub fn leq(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::LE, a, b)
}

pub fn lt(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::LT, a, b)
}

pub fn geq(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::GE, a, b)
}

pub fn gt(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::GT, a, b)
}

pub fn add(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::ADD, a, b)
}

pub fn sub(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::SUB, a, b)
}

pub fn mul(sig: &Signature, a: Term, b: Term) -> Term {
    binary(sig, names::MUL, a, b)
}

/// Conjunction that drops `true` operands instead of nesting them.
pub fn and_norm(sig: &Signature, a: Term, b: Term) -> Term {
    if a == truth(sig) {
        b
    } else if b == truth(sig) {
        a
    } else {
        and(sig, a, b)
    }
}

/// Conjunction of all formulas, `true` when empty, without a leading
/// redundant `true` otherwise.
pub fn conj_all(sig: &Signature, parts: impl IntoIterator<Item = Term>) -> Term {
    let mut iter = parts.into_iter();
    match iter.next() {
        None => truth(sig),
        Some(first) => iter.fold(first, |acc, p| and(sig, acc, p)),
    }
}

/// Disjunction of all formulas, `false` when empty.
pub fn disj_all(sig: &Signature, parts: impl IntoIterator<Item = Term>) -> Term {
    let mut iter = parts.into_iter();
    match iter.next() {
        None => boolean(sig, false),
        Some(first) => iter.fold(first, |acc, p| or(sig, acc, p)),
    }
}
