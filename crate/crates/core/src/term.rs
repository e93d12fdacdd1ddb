//! First-order terms over a sorted signature.
//!
//! Terms are variables or applications; values are nullary applications of
//! value symbols. Heights count applications: variables have height 0,
//! constants height 1. Positions are sequences of 1-based argument indices.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::signature::{FunctionSymbol, Sort, SymbolKind};

/// A sorted variable.
///
/// `marker` distinguishes generated variables from parsed ones: variables
/// read from input carry marker 0, fresh variables carry the positive counter
/// value they were issued with. Display names stay readable because the
/// printer resolves collisions, not the variable itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: String,
    marker: u64,
    sort: Sort,
}

impl Var {
    /// A variable as written in input (marker 0).
    pub fn new(name: &str, sort: Sort) -> Var {
        Var { name: name.to_string(), marker: 0, sort }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn marker(&self) -> u64 {
        self.marker
    }

    pub fn sort(&self) -> &Sort {
        &self.sort
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.marker == 0 {
            f.write_str(&self.name)
        } else {
            write!(f, "{}_{}", self.name, self.marker)
        }
    }
}

/// A source of fresh variables.
///
/// Freshness is by marker: every issued variable carries a marker strictly
/// greater than any marker absorbed from the inputs, and parsed variables
/// always carry marker 0. One source is threaded through each top-level
/// operation, so everything generated within that operation is mutually
/// distinct.
#[derive(Debug, Clone)]
pub struct FreshVars {
    next: u64,
}

impl Default for FreshVars {
    fn default() -> Self {
        FreshVars::new()
    }
}

impl FreshVars {
    pub fn new() -> FreshVars {
        FreshVars { next: 1 }
    }

    /// Raise the counter above every marker occurring in `t`.
    pub fn absorb_term(&mut self, t: &Term) {
        for v in t.vars_iter() {
            self.absorb_var(v);
        }
    }

    pub fn absorb_var(&mut self, v: &Var) {
        if v.marker() >= self.next {
            self.next = v.marker() + 1;
        }
    }

    /// A fresh variable of the given sort. The hint only affects the display
    /// name.
    pub fn fresh(&mut self, hint: &str, sort: Sort) -> Var {
        let marker = self.next;
        self.next += 1;
        Var { name: hint.to_string(), marker, sort }
    }

    /// A fresh variable named after the sort it stands for.
    pub fn fresh_for_sort(&mut self, sort: &Sort) -> Var {
        let hint = hint_for_sort(sort);
        self.fresh(&hint, sort.clone())
    }

    /// A fresh variable with the same display base and sort as `v`.
    pub fn fresh_like(&mut self, v: &Var) -> Var {
        self.fresh(v.name(), v.sort().clone())
    }
}

fn hint_for_sort(sort: &Sort) -> String {
    if sort.is_int() {
        "x".to_string()
    } else if sort.is_bool() {
        "p".to_string()
    } else if sort.name() == "list" {
        "xs".to_string()
    } else {
        sort.name().chars().take(1).collect()
    }
}

/// A position: a sequence of 1-based argument indices, the empty sequence
/// being the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<u32>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn from_indices(indices: &[u32]) -> Position {
        debug_assert!(indices.iter().all(|&i| i >= 1), "positions are 1-based");
        Position(indices.to_vec())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// This position extended by one child step.
    pub fn child(&self, i: u32) -> Position {
        debug_assert!(i >= 1);
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            f.write_str(&parts.join("."))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    Arity { symbol: String, expected: usize, got: usize },
    ArgSort { symbol: String, index: usize, expected: Sort, got: Sort },
    PositionOutOfRange(Position),
    ReplacementSort { expected: Sort, got: Sort },
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::Arity { symbol, expected, got } => {
                write!(f, "symbol `{}` expects {} arguments, got {}", symbol, expected, got)
            }
            TermError::ArgSort { symbol, index, expected, got } => write!(
                f,
                "argument {} of `{}` must have sort {}, got {}",
                index, symbol, expected, got
            ),
            TermError::PositionOutOfRange(p) => write!(f, "position {} does not exist", p),
            TermError::ReplacementSort { expected, got } => {
                write!(f, "replacement must have sort {}, got {}", expected, got)
            }
        }
    }
}

impl std::error::Error for TermError {}

/// A term: a variable or an application of a function symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Arc<FunctionSymbol>, Vec<Term>),
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    /// A well-sorted application. Checks arity and argument sorts.
    pub fn app(symbol: Arc<FunctionSymbol>, args: Vec<Term>) -> Result<Term, TermError> {
        if args.len() != symbol.arity() {
            return Err(TermError::Arity {
                symbol: symbol.display_name(),
                expected: symbol.arity(),
                got: args.len(),
            });
        }
        for (i, (arg, expected)) in args.iter().zip(symbol.arg_sorts()).enumerate() {
            if &arg.sort() != expected {
                return Err(TermError::ArgSort {
                    symbol: symbol.display_name(),
                    index: i + 1,
                    expected: expected.clone(),
                    got: arg.sort(),
                });
            }
        }
        Ok(Term::App(symbol, args))
    }

    pub fn constant(symbol: Arc<FunctionSymbol>) -> Result<Term, TermError> {
        Term::app(symbol, Vec::new())
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(v) => v.sort().clone(),
            Term::App(f, _) => f.result_sort().clone(),
        }
    }

    pub fn root_symbol(&self) -> Option<&Arc<FunctionSymbol>> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    /// Height: 0 for variables, 1 + maximum argument height for
    /// applications. Constants have height 1 (the maximum over no arguments
    /// is 0).
    pub fn height(&self) -> u32 {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::height).max().unwrap_or(0),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Variable occurrences in left-to-right order (with repetitions).
    pub fn vars_iter(&self) -> impl Iterator<Item = &Var> {
        let mut out = Vec::new();
        fn walk<'a>(t: &'a Term, out: &mut Vec<&'a Var>) {
            match t {
                Term::Var(v) => out.push(v),
                Term::App(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        walk(self, &mut out);
        out.into_iter()
    }

    /// Distinct variables, first occurrence first.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vars_iter() {
            if seen.insert(v.clone()) {
                out.push(v.clone());
            }
        }
        out
    }

    pub fn var_set(&self) -> BTreeSet<Var> {
        self.vars_iter().cloned().collect()
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.vars_iter().any(|w| w == v)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// No variable occurs more than once.
    pub fn is_linear(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.vars_iter().all(|v| seen.insert(v.clone()))
    }

    /// No variable from `xs` occurs more than once.
    pub fn is_linear_wrt(&self, xs: &BTreeSet<Var>) -> bool {
        let mut seen = BTreeSet::new();
        self.vars_iter()
            .filter(|v| xs.contains(v))
            .all(|v| seen.insert(v.clone()))
    }

    /// All positions of the term in preorder, root first.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        fn walk(t: &Term, here: Position, out: &mut Vec<Position>) {
            out.push(here.clone());
            if let Term::App(_, args) = t {
                for (i, arg) in args.iter().enumerate() {
                    walk(arg, here.child(i as u32 + 1), out);
                }
            }
        }
        walk(self, Position::root(), &mut out);
        out
    }

    pub fn subterm_at(&self, pos: &Position) -> Option<&Term> {
        let mut t = self;
        for &i in pos.indices() {
            t = t.args().get(i as usize - 1)?;
        }
        Some(t)
    }

    /// The term with the subterm at `pos` replaced. The replacement must
    /// have the sort of the subterm it replaces.
    pub fn replace_at(&self, pos: &Position, replacement: Term) -> Result<Term, TermError> {
        let target = self
            .subterm_at(pos)
            .ok_or_else(|| TermError::PositionOutOfRange(pos.clone()))?;
        if target.sort() != replacement.sort() {
            return Err(TermError::ReplacementSort {
                expected: target.sort(),
                got: replacement.sort(),
            });
        }
        fn go(t: &Term, indices: &[u32], replacement: Term) -> Term {
            match indices {
                [] => replacement,
                [i, rest @ ..] => match t {
                    Term::App(f, args) => {
                        let mut args = args.clone();
                        let slot = *i as usize - 1;
                        args[slot] = go(&args[slot], rest, replacement);
                        Term::App(f.clone(), args)
                    }
                    Term::Var(_) => unreachable!("position checked above"),
                },
            }
        }
        Ok(go(self, pos.indices(), replacement))
    }

    /// A value: a nullary application of a value symbol.
    pub fn is_value(&self) -> bool {
        matches!(self, Term::App(f, args) if f.is_value() && args.is_empty())
    }

    /// Built only from constructors (values included) and variables.
    pub fn is_constructor_term(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::App(f, args) => f.is_constructor() && args.iter().all(Term::is_constructor_term),
        }
    }

    /// Built only from theory symbols and variables.
    pub fn is_theory_term(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::App(f, args) => f.is_theory() && args.iter().all(Term::is_theory_term),
        }
    }

    /// Contains no value symbol.
    pub fn is_value_free(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::App(f, args) => !f.is_value() && args.iter().all(Term::is_value_free),
        }
    }

    /// A pattern: a defined or calculation symbol applied to constructor
    /// terms.
    pub fn is_pattern(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(f, args) => {
                matches!(f.kind(), SymbolKind::Defined | SymbolKind::Calculation)
                    && args.iter().all(Term::is_constructor_term)
            }
        }
    }

    /// Positions (preorder) of all value subterms.
    pub fn value_positions(&self) -> Vec<Position> {
        self.positions()
            .into_iter()
            .filter(|p| self.subterm_at(p).map(Term::is_value).unwrap_or(false))
            .collect()
    }
}

/// Alpha-equivalence of a sequence of term pairs under one shared variable
/// bijection: there is a renaming carrying each left term to the matching
/// right term.
pub fn alpha_eq_all(pairs: &[(&Term, &Term)]) -> bool {
    use std::collections::BTreeMap;
    let mut fwd: BTreeMap<Var, Var> = BTreeMap::new();
    let mut bwd: BTreeMap<Var, Var> = BTreeMap::new();
    fn walk(
        s: &Term,
        t: &Term,
        fwd: &mut std::collections::BTreeMap<Var, Var>,
        bwd: &mut std::collections::BTreeMap<Var, Var>,
    ) -> bool {
        match (s, t) {
            (Term::Var(v), Term::Var(w)) => {
                if v.sort() != w.sort() {
                    return false;
                }
                match (fwd.get(v), bwd.get(w)) {
                    (None, None) => {
                        fwd.insert(v.clone(), w.clone());
                        bwd.insert(w.clone(), v.clone());
                        true
                    }
                    (Some(w2), Some(v2)) => w2 == w && v2 == v,
                    _ => false,
                }
            }
            (Term::App(f, fs), Term::App(g, gs)) => {
                f == g && fs.iter().zip(gs).all(|(a, b)| walk(a, b, fwd, bwd))
            }
            _ => false,
        }
    }
    pairs.iter().all(|(s, t)| walk(s, t, &mut fwd, &mut bwd))
}

/// Alpha-equivalence of two terms: equal up to a variable renaming.
pub fn alpha_eq(s: &Term, t: &Term) -> bool {
    alpha_eq_all(&[(s, t)])
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::printer::term_to_string(self))
    }
}
