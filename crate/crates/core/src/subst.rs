//! Substitutions, matching and generality.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use crate::term::{FreshVars, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstError {
    /// Binding a variable to a term of a different sort.
    SortMismatch { var: Var, term_sort: String },
}

impl fmt::Display for SubstError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstError::SortMismatch { var, term_sort } => write!(
                f,
                "cannot bind `{}` of sort {} to a term of sort {}",
                var,
                var.sort(),
                term_sort
            ),
        }
    }
}

impl std::error::Error for SubstError {}

/// A sort-preserving substitution with finite domain. Identity bindings are
/// never stored, so the domain is exactly the set of variables moved.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution { map: BTreeMap::new() }
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, Term)>>(
        pairs: I,
    ) -> Result<Substitution, SubstError> {
        let mut s = Substitution::new();
        for (v, t) in pairs {
            s.insert(v, t)?;
        }
        Ok(s)
    }

    /// Bind `v` to `t`. An identity binding is dropped silently.
    pub fn insert(&mut self, v: Var, t: Term) -> Result<(), SubstError> {
        if t.sort() != *v.sort() {
            return Err(SubstError::SortMismatch { var: v, term_sort: t.sort().to_string() });
        }
        if t.as_var() == Some(&v) {
            self.map.remove(&v);
            return Ok(());
        }
        self.map.insert(v, t);
        Ok(())
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    pub fn domain_set(&self) -> BTreeSet<Var> {
        self.map.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    /// The image of a variable (the variable itself when outside the
    /// domain).
    pub fn image(&self, v: &Var) -> Term {
        self.map.get(v).cloned().unwrap_or_else(|| Term::var(v.clone()))
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.image(v),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    /// The restriction of the substitution to the given variables.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    /// All images are variables and pairwise distinct.
    pub fn is_renaming(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.map.values().all(|t| match t.as_var() {
            Some(v) => seen.insert(v.clone()),
            None => false,
        })
    }

    /// All images are constructor terms (a C-substitution).
    pub fn has_constructor_range(&self) -> bool {
        self.map.values().all(Term::is_constructor_term)
    }

    /// All images are variables.
    pub fn has_variable_range(&self) -> bool {
        self.map.values().all(Term::is_var)
    }

    /// Nothing in the range mentions a domain variable, i.e. applying twice
    /// equals applying once.
    pub fn is_idempotent(&self) -> bool {
        self.map
            .values()
            .all(|t| t.vars_iter().all(|v| !self.map.contains_key(v)))
    }

    /// X-linearity preservation: every image of a variable in `xs` is
    /// linear, and images of distinct variables of `xs` share no variables.
    /// Variables outside the domain count with themselves as image.
    pub fn is_linearity_preserving(&self, xs: &BTreeSet<Var>) -> bool {
        let images: Vec<Term> = xs.iter().map(|v| self.image(v)).collect();
        if !images.iter().all(Term::is_linear) {
            return false;
        }
        let mut seen: BTreeSet<Var> = BTreeSet::new();
        for img in &images {
            for v in img.vars() {
                if !seen.insert(v) {
                    return false;
                }
            }
        }
        true
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    /// Builds a substitution, panicking on ill-sorted bindings; use
    /// [`Substitution::from_pairs`] to handle that case.
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Substitution {
        Substitution::from_pairs(iter).expect("ill-sorted binding")
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", v, t)?;
        }
        write!(f, "}}")
    }
}

/// A renaming that maps every variable of `vars` to a fresh variable of the
/// same sort and display base.
pub fn renaming_apart<'a, I: IntoIterator<Item = &'a Var>>(
    vars: I,
    fresh: &mut FreshVars,
) -> Substitution {
    let mut s = Substitution::new();
    for v in vars {
        let w = fresh.fresh_like(v);
        s.insert(v.clone(), Term::var(w)).expect("renaming preserves sorts");
    }
    s
}

/// Matching: the substitution `σ` with `s σ = t`, if it exists. `None` means
/// `t` is not an instance of `s`.
pub fn more_general(s: &Term, t: &Term) -> Option<Substitution> {
    let mut map: BTreeMap<Var, Term> = BTreeMap::new();
    fn walk(s: &Term, t: &Term, map: &mut BTreeMap<Var, Term>) -> bool {
        match s {
            Term::Var(v) => {
                if *v.sort() != t.sort() {
                    return false;
                }
                match map.get(v) {
                    Some(prev) => prev == t,
                    None => {
                        map.insert(v.clone(), t.clone());
                        true
                    }
                }
            }
            Term::App(f, args) => match t {
                Term::App(g, targs) if f == g => {
                    args.iter().zip(targs).all(|(a, b)| walk(a, b, map))
                }
                _ => false,
            },
        }
    }
    if walk(s, t, &mut map) {
        Some(Substitution::from_pairs(map).expect("matching preserves sorts"))
    } else {
        None
    }
}

/// `s` is strictly more general than `t`: `t` is an instance of `s` but not
/// the other way around.
pub fn strictly_more_general(s: &Term, t: &Term) -> bool {
    more_general(s, t).is_some() && more_general(t, s).is_none()
}
