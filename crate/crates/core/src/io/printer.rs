//! Textual rendering of terms and constraints.
//!
//! Infix theory symbols are printed with the minimal parentheses the grammar
//! needs back: implication/equivalence bind loosest, then disjunction,
//! conjunction, negation, comparisons, additive and multiplicative
//! arithmetic. `not` always parenthesises a non-atomic argument, favouring
//! readability over minimality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::signature::{names, FunctionSymbol, SymbolKind};
use crate::term::{Term, Var};

/// Binding strength of an infix operator; higher binds tighter.
fn infix_level(name: &str) -> Option<(u8, Assoc)> {
    match name {
        names::IMP | names::IFF => Some((0, Assoc::Right)),
        names::OR => Some((1, Assoc::Left)),
        names::AND => Some((2, Assoc::Left)),
        names::EQ | names::NEQ | names::LE | names::LT | names::GE | names::GT => {
            Some((4, Assoc::None))
        }
        names::ADD | names::SUB => Some((5, Assoc::Left)),
        names::MUL | names::DIV | names::MOD | names::EXP => Some((6, Assoc::Left)),
        _ => None,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Assoc {
    Left,
    Right,
    None,
}

const PREC_NOT: u8 = 3;

/// Assigns stable, collision-free display names to variables: the variable's
/// own base name when free, otherwise the base primed until unique.
#[derive(Debug, Default)]
pub struct VarNamer {
    map: BTreeMap<Var, String>,
    used: BTreeSet<String>,
}

impl VarNamer {
    pub fn new() -> VarNamer {
        VarNamer::default()
    }

    /// Register the variables of `t` in first-occurrence order.
    pub fn absorb(&mut self, t: &Term) {
        for v in t.vars() {
            self.assign(&v);
        }
    }

    fn assign(&mut self, v: &Var) {
        if self.map.contains_key(v) {
            return;
        }
        let mut candidate = v.name().to_string();
        while !self.used.insert(candidate.clone()) {
            candidate.push('\'');
        }
        self.map.insert(v.clone(), candidate);
    }

    fn name_of(&self, v: &Var) -> Option<&str> {
        self.map.get(v).map(String::as_str)
    }
}

fn symbol_level(f: &FunctionSymbol) -> Option<(u8, Assoc)> {
    if f.kind() != SymbolKind::Calculation || f.arity() != 2 {
        return None;
    }
    infix_level(&f.display_name())
}

fn is_atom(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(f, _) => symbol_level(f).is_none() && f.display_name() != names::NOT,
    }
}

fn write_term(t: &Term, min_prec: u8, namer: Option<&VarNamer>, out: &mut String) {
    match t {
        Term::Var(v) => {
            match namer.and_then(|n| n.name_of(v)) {
                Some(name) => out.push_str(name),
                None => {
                    let _ = write!(out, "{}", v);
                }
            };
        }
        Term::App(f, args) => {
            if f.display_name() == names::NOT && args.len() == 1 {
                let parens = min_prec > PREC_NOT || !is_atom(&args[0]);
                out.push_str("not ");
                if parens {
                    out.push('(');
                }
                write_term(&args[0], if parens { 0 } else { PREC_NOT }, namer, out);
                if parens {
                    out.push(')');
                }
                return;
            }
            if let Some((level, assoc)) = symbol_level(f) {
                let parens = level < min_prec;
                if parens {
                    out.push('(');
                }
                let (lmin, rmin) = match assoc {
                    Assoc::Left => (level, level + 1),
                    Assoc::Right => (level + 1, level),
                    Assoc::None => (level + 1, level + 1),
                };
                write_term(&args[0], lmin, namer, out);
                let _ = write!(out, " {} ", f.display_name());
                write_term(&args[1], rmin, namer, out);
                if parens {
                    out.push(')');
                }
                return;
            }
            let _ = write!(out, "{}", f);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_term(a, 0, namer, out);
                }
                out.push(')');
            }
        }
    }
}

/// Render a term with raw variable names (base plus freshness marker).
pub fn term_to_string(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, 0, None, &mut out);
    out
}

/// Render a term using the canonical names assigned by `namer`.
pub fn term_to_string_with(t: &Term, namer: &VarNamer) -> String {
    let mut out = String::new();
    write_term(t, 0, Some(namer), &mut out);
    out
}

fn is_true(t: &Term) -> bool {
    matches!(t, Term::App(f, _) if f.as_bool() == Some(true))
}

/// Cosmetic normalization for display only: drop `true` conjuncts and
/// collapse double negation. The logical meaning is unchanged.
fn display_normal(t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) if f.display_name() == names::AND && args.len() == 2 => {
            let a = display_normal(&args[0]);
            let b = display_normal(&args[1]);
            if is_true(&a) {
                b
            } else if is_true(&b) {
                a
            } else {
                Term::app(f.clone(), vec![a, b]).expect("sorts unchanged")
            }
        }
        Term::App(f, args) if f.display_name() == names::NOT && args.len() == 1 => {
            let inner = display_normal(&args[0]);
            if let Term::App(g, inner_args) = &inner {
                if g.display_name() == names::NOT && inner_args.len() == 1 {
                    return inner_args[0].clone();
                }
            }
            Term::app(f.clone(), vec![inner]).expect("sorts unchanged")
        }
        Term::App(f, args) => {
            let args: Vec<Term> = args.iter().map(display_normal).collect();
            Term::app(f.clone(), args).expect("sorts unchanged")
        }
    }
}

/// The canonical renderings of a constrained term's two parts, sharing one
/// set of variable names. The constraint is cosmetically normalized.
pub fn cterm_parts(ct: &crate::cterm::ConstrainedTerm) -> (String, String) {
    let constraint = display_normal(ct.constraint());
    let mut namer = VarNamer::new();
    namer.absorb(ct.term());
    namer.absorb(&constraint);
    let term = term_to_string_with(ct.term(), &namer);
    (term, term_to_string_with(&constraint, &namer))
}

/// Render a constrained term as `term [constraint]`, with canonical
/// variable names shared across both parts. The bracket is always present,
/// so an unconstrained term prints as `t [true]`.
pub fn cterm_to_string(ct: &crate::cterm::ConstrainedTerm) -> String {
    let (term, constraint) = cterm_parts(ct);
    format!("{} [{}]", term, constraint)
}
