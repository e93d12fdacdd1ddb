//! Complements of constructor terms, constructor substitutions and
//! patterns.
//!
//! The complement of a linear constructor term `u` of sort `ι` is a finite
//! set of linear constructor terms whose ground instances are exactly the
//! ground terms of sort `ι` that are not instances of `u`: terms headed by a
//! different constructor, plus terms that agree with `u` up to some argument
//! and differ inside it. Complements of variables are empty; complements of
//! value-sorted terms exist only when the value family of that sort is
//! finite.

use std::fmt;

use crate::signature::{Signature, Sort};
use crate::subst::Substitution;
use crate::term::{FreshVars, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplementError {
    /// Input mentions a non-constructor symbol.
    NotConstructorTerm(String),
    /// The sort has unboundedly many constructors (an unrestricted value
    /// family), so the complement is not a finite set of terms.
    InfiniteComplement(Sort),
}

impl fmt::Display for ComplementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplementError::NotConstructorTerm(t) => {
                write!(f, "`{}` is not a constructor term", t)
            }
            ComplementError::InfiniteComplement(s) => write!(
                f,
                "complement over sort {} is infinite (unbounded value family)",
                s
            ),
        }
    }
}

impl std::error::Error for ComplementError {}

/// The complement of a linear constructor term. Fresh variables are drawn
/// from `fresh`; members are returned deduplicated, in a canonical
/// structural order.
pub fn cocterm(
    u: &Term,
    sig: &Signature,
    fresh: &mut FreshVars,
) -> Result<Vec<Term>, ComplementError> {
    if !u.is_constructor_term() {
        return Err(ComplementError::NotConstructorTerm(u.to_string()));
    }
    debug_assert!(u.is_linear(), "complement of a non-linear constructor term");
    let mut out = cocterm_rec(u, sig, fresh)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn cocterm_rec(
    u: &Term,
    sig: &Signature,
    fresh: &mut FreshVars,
) -> Result<Vec<Term>, ComplementError> {
    let (c, args) = match u {
        Term::Var(_) => return Ok(Vec::new()),
        Term::App(c, args) => (c, args),
    };
    let sort = u.sort();
    let siblings = sig
        .constructors_of(&sort)
        .ok_or_else(|| ComplementError::InfiniteComplement(sort.clone()))?;
    let mut out = Vec::new();
    // Terms headed by any other constructor of the same sort, with fresh
    // pairwise-distinct variable arguments.
    for c2 in siblings {
        if &c2 == c {
            continue;
        }
        let fresh_args: Vec<Term> = c2
            .arg_sorts()
            .iter()
            .map(|s| Term::var(fresh.fresh_for_sort(s)))
            .collect();
        out.push(Term::app(c2, fresh_args).expect("constructor arity matches"));
    }
    // Terms that agree with u on the first i-1 arguments, differ inside the
    // i-th, and are free beyond it.
    for (i, arg) in args.iter().enumerate() {
        for diff_arg in cocterm_rec(arg, sig, fresh)? {
            let mut new_args: Vec<Term> = args[..i].to_vec();
            new_args.push(diff_arg);
            for s in &c.arg_sorts()[i + 1..] {
                new_args.push(Term::var(fresh.fresh_for_sort(s)));
            }
            out.push(Term::app(c.clone(), new_args).expect("constructor arity matches"));
        }
    }
    Ok(out)
}

/// The complement of a constructor substitution: all substitutions with the
/// same domain that replace at least one image by a member of its
/// complement. The returned substitutions are pairwise distinct and distinct
/// from `sigma`.
pub fn cosubst(
    sigma: &Substitution,
    sig: &Signature,
    fresh: &mut FreshVars,
) -> Result<Vec<Substitution>, ComplementError> {
    let domain: Vec<_> = sigma.domain().cloned().collect();
    let mut choices: Vec<Vec<Term>> = Vec::with_capacity(domain.len());
    for x in &domain {
        let image = sigma.image(x);
        if !image.is_constructor_term() {
            return Err(ComplementError::NotConstructorTerm(image.to_string()));
        }
        let mut alts = vec![image.clone()];
        alts.extend(cocterm(&image, sig, fresh)?);
        choices.push(alts);
    }
    let mut out = Vec::new();
    let mut index = vec![0usize; domain.len()];
    loop {
        // Skip the all-original choice: that is sigma itself.
        if index.iter().any(|&i| i > 0) {
            let pairs = domain
                .iter()
                .cloned()
                .zip(index.iter().enumerate().map(|(k, &i)| choices[k][i].clone()));
            out.push(Substitution::from_pairs(pairs).expect("complements preserve sorts"));
        }
        // Advance the mixed-radix counter.
        let mut k = domain.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            index[k] += 1;
            if index[k] < choices[k].len() {
                break;
            }
            index[k] = 0;
        }
    }
}

/// The complement of the pattern `s σ` relative to `s`: instances `s ρ` for
/// `ρ` in the complement of `σ`, excluding those equal to `s σ` itself.
pub fn copattern(
    s: &Term,
    sigma: &Substitution,
    sig: &Signature,
    fresh: &mut FreshVars,
) -> Result<Vec<Term>, ComplementError> {
    let original = sigma.apply(s);
    let mut out: Vec<Term> = cosubst(sigma, sig, fresh)?
        .iter()
        .map(|rho| rho.apply(s))
        .filter(|t| t != &original)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
