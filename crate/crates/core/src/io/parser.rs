//! Parser for system files and constrained-pattern lists.
//!
//! A system file has three sections. `SORTS` declares term sorts, one
//! identifier per `;`-terminated item; `int` and `bool` are built in.
//! `SIGNATURE` declares symbols, `nil : list ;` for constants and
//! `cons : int * list => list ;` for functions. `RULES` holds items
//! `lhs -> rhs [ guard ] ;` with the guard bracket optional. Comments run
//! from `#` to the end of the line.
//!
//! Whether a declared symbol is a constructor or a defined symbol is not
//! written down: a symbol is defined exactly when it occurs as the root of
//! some rule's left-hand side, so classification happens after a first scan
//! of the rules.
//!
//! Undeclared identifiers are variables. Their sorts are inferred from the
//! argument position they appear in; using one name at two different sorts
//! within an item is an error. Equality and disequality are overloaded over
//! `int` and `bool` and resolve by the first overload (integer first) whose
//! operands elaborate; an equation between two otherwise-unconstrained
//! variables therefore reads as an integer equation.
//!
//! All errors are reported as [`Diagnostic`]s with a [`SourceSpan`] into
//! the input; parsing continues at the next item so one pass surfaces
//! multiple mistakes.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cterm::ConstrainedTerm;
use crate::io::lexer::{tokenize, SourceSpan, Token, TokenKind};
use crate::qr::{Lctrs, Rule};
use crate::signature::{names, FunctionSymbol, Signature, Sort};
use crate::term::{Term, Var};

/// A parse problem, anchored to the source text.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub message: String,
    pub span: SourceSpan,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

fn diag(span: SourceSpan, message: impl Into<String>) -> Diagnostic {
    Diagnostic { message: message.into(), span }
}

/// Raw expression tree, before sorts are known.
#[derive(Debug, Clone)]
enum Expr {
    Int(i128, SourceSpan),
    Ident(String, SourceSpan),
    Call(String, SourceSpan, Vec<Expr>),
    Not(SourceSpan, Box<Expr>),
    Binary(&'static str, SourceSpan, Box<Expr>, Box<Expr>),
}

impl Expr {
    fn span(&self) -> SourceSpan {
        match self {
            Expr::Int(_, s)
            | Expr::Ident(_, s)
            | Expr::Call(_, s, _)
            | Expr::Not(s, _)
            | Expr::Binary(_, s, _, _) => *s,
        }
    }
}

struct RawDecl {
    name: String,
    span: SourceSpan,
    args: Vec<(String, SourceSpan)>,
    result: (String, SourceSpan),
}

struct RawRule {
    lhs: Expr,
    rhs: Expr,
    guard: Option<Expr>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Assoc {
    Left,
    Right,
    None,
}

const PREC_NOT: u8 = 3;

/// Infix operators with printer-compatible binding strength: implication
/// and equivalence bind loosest, then `\/`, `/\`, negation, comparisons,
/// additive and multiplicative arithmetic.
fn infix_op(kind: &TokenKind) -> Option<(&'static str, u8, Assoc)> {
    Some(match kind {
        TokenKind::FatArrow => (names::IMP, 0, Assoc::Right),
        TokenKind::Iff => (names::IFF, 0, Assoc::Right),
        TokenKind::Or => (names::OR, 1, Assoc::Left),
        TokenKind::And => (names::AND, 2, Assoc::Left),
        TokenKind::Eq => (names::EQ, 4, Assoc::None),
        TokenKind::Neq => (names::NEQ, 4, Assoc::None),
        TokenKind::Le => (names::LE, 4, Assoc::None),
        TokenKind::Lt => (names::LT, 4, Assoc::None),
        TokenKind::Ge => (names::GE, 4, Assoc::None),
        TokenKind::Gt => (names::GT, 4, Assoc::None),
        TokenKind::Plus => (names::ADD, 5, Assoc::Left),
        TokenKind::Minus => (names::SUB, 5, Assoc::Left),
        TokenKind::Star => (names::MUL, 6, Assoc::Left),
        TokenKind::Ident(w) => match w.as_str() {
            "div" => (names::DIV, 6, Assoc::Left),
            "mod" => (names::MOD, 6, Assoc::Left),
            "exp" => (names::EXP, 6, Assoc::Left),
            _ => return None,
        },
        _ => return None,
    })
}

fn is_section_keyword(kind: &TokenKind) -> bool {
    matches!(kind, TokenKind::Ident(w) if w == "SORTS" || w == "SIGNATURE" || w == "RULES")
}

struct TokenStream<'t> {
    toks: &'t [Token],
    pos: usize,
    src_len: usize,
}

impl<'t> TokenStream<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.toks.get(self.pos)?;
        self.pos += 1;
        Some(t)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Span of the next token, or a zero-width span at the end of input.
    fn here(&self) -> SourceSpan {
        match self.peek() {
            Some(t) => t.span,
            None => {
                let (line, column) = self
                    .toks
                    .last()
                    .map(|t| (t.span.line, t.span.column + (t.span.end - t.span.start)))
                    .unwrap_or((1, 1));
                SourceSpan { line, column, start: self.src_len, end: self.src_len }
            }
        }
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<&'t Token, Diagnostic> {
        match self.peek() {
            Some(t) if &t.kind == kind => Ok(self.bump().unwrap()),
            Some(t) => Err(diag(t.span, format!("expected {}, found {}", what, t.kind))),
            None => Err(diag(self.here(), format!("expected {}, found end of input", what))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, SourceSpan), Diagnostic> {
        match self.peek() {
            Some(Token { kind: TokenKind::Ident(name), span }) => {
                let out = (name.clone(), *span);
                self.pos += 1;
                Ok(out)
            }
            Some(t) => Err(diag(t.span, format!("expected {}, found {}", what, t.kind))),
            None => Err(diag(self.here(), format!("expected {}, found end of input", what))),
        }
    }

    /// Recover after an item-level error: skip up to and over the next `;`,
    /// stopping early at a section keyword.
    fn synchronize(&mut self) {
        while let Some(t) = self.peek() {
            if is_section_keyword(&t.kind) {
                return;
            }
            self.pos += 1;
            if t.kind == TokenKind::Semi {
                return;
            }
        }
    }

    fn parse_expr(&mut self, min_prec: u8) -> Result<Expr, Diagnostic> {
        let mut lhs = self.parse_unary()?;
        loop {
            let (name, prec, assoc) = match self.peek().and_then(|t| infix_op(&t.kind)) {
                Some(op) if op.1 >= min_prec => op,
                _ => return Ok(lhs),
            };
            let span = self.bump().expect("peeked").span;
            let next_min = match assoc {
                Assoc::Left => prec + 1,
                Assoc::Right => prec,
                Assoc::None => prec + 1,
            };
            let rhs = self.parse_expr(next_min)?;
            if assoc == Assoc::None {
                if let Some((_, p, Assoc::None)) = self.peek().and_then(|t| infix_op(&t.kind)) {
                    if p == prec {
                        return Err(diag(
                            self.here(),
                            "comparison operators do not chain; parenthesize one side",
                        ));
                    }
                }
            }
            lhs = Expr::Binary(name, span, Box::new(lhs), Box::new(rhs));
        }
    }

    fn parse_unary(&mut self) -> Result<Expr, Diagnostic> {
        if let Some(Token { kind: TokenKind::Ident(w), span }) = self.peek() {
            if w == "not" {
                let span = *span;
                self.pos += 1;
                let inner = self.parse_expr(PREC_NOT)?;
                return Ok(Expr::Not(span, Box::new(inner)));
            }
        }
        self.parse_primary()
    }

    fn parse_primary(&mut self) -> Result<Expr, Diagnostic> {
        let t = match self.peek() {
            Some(t) => t,
            None => return Err(diag(self.here(), "expected a term, found end of input")),
        };
        match &t.kind {
            TokenKind::Int(n) => {
                let e = Expr::Int(*n, t.span);
                self.pos += 1;
                Ok(e)
            }
            TokenKind::Minus => {
                let span = t.span;
                self.pos += 1;
                match self.peek() {
                    Some(Token { kind: TokenKind::Int(n), span: nspan }) => {
                        let full = SourceSpan {
                            line: span.line,
                            column: span.column,
                            start: span.start,
                            end: nspan.end,
                        };
                        let e = Expr::Int(-n, full);
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(diag(span, "`-` here must start an integer literal")),
                }
            }
            TokenKind::Ident(name) => {
                let name = name.clone();
                let span = t.span;
                self.pos += 1;
                if self.eat(&TokenKind::LParen) {
                    let mut args = vec![self.parse_expr(0)?];
                    while self.eat(&TokenKind::Comma) {
                        args.push(self.parse_expr(0)?);
                    }
                    self.expect(&TokenKind::RParen, "`)`")?;
                    Ok(Expr::Call(name, span, args))
                } else {
                    Ok(Expr::Ident(name, span))
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let e = self.parse_expr(0)?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            other => Err(diag(t.span, format!("expected a term, found {}", other))),
        }
    }

    /// `lhs -> rhs [ guard ] ;` with the guard optional.
    fn parse_rule(&mut self) -> Result<RawRule, Diagnostic> {
        let lhs = self.parse_expr(0)?;
        self.expect(&TokenKind::Arrow, "`->`")?;
        let rhs = self.parse_expr(0)?;
        let guard = if self.eat(&TokenKind::LBracket) {
            let g = self.parse_expr(0)?;
            self.expect(&TokenKind::RBracket, "`]`")?;
            Some(g)
        } else {
            None
        };
        self.expect(&TokenKind::Semi, "`;`")?;
        Ok(RawRule { lhs, rhs, guard })
    }

    /// `name : sort ;` or `name : sort * ... * sort => sort ;`.
    fn parse_decl(&mut self) -> Result<RawDecl, Diagnostic> {
        let (name, span) = self.expect_ident("a symbol name")?;
        self.expect(&TokenKind::Colon, "`:`")?;
        let first = self.expect_ident("a sort name")?;
        let mut sorts = vec![first];
        let mut has_arrow = false;
        loop {
            if self.eat(&TokenKind::Star) {
                sorts.push(self.expect_ident("a sort name")?);
            } else if self.eat(&TokenKind::FatArrow) {
                sorts.push(self.expect_ident("a sort name")?);
                has_arrow = true;
                break;
            } else {
                break;
            }
        }
        self.expect(&TokenKind::Semi, "`;`")?;
        if !has_arrow && sorts.len() > 1 {
            return Err(diag(span, "argument sorts need a `=> result` to follow"));
        }
        let result = sorts.pop().expect("at least one sort");
        Ok(RawDecl { name, span, args: sorts, result })
    }
}

/// Sort checking and variable inference for one item (rule or pattern):
/// a map from variable names to their inferred sorts.
struct Elaborator<'a> {
    sig: &'a Signature,
    vars: BTreeMap<String, Sort>,
}

impl<'a> Elaborator<'a> {
    fn new(sig: &'a Signature) -> Elaborator<'a> {
        Elaborator { sig, vars: BTreeMap::new() }
    }

    fn elaborate(&mut self, e: &Expr, expected: Option<&Sort>) -> Result<Term, Diagnostic> {
        match e {
            Expr::Int(n, span) => {
                let n = i64::try_from(*n)
                    .map_err(|_| diag(*span, format!("integer literal `{}` is out of range", n)))?;
                let term = Term::constant(self.sig.int_value(n)).expect("values are constants");
                self.check_expected(&term, expected, *span)?;
                Ok(term)
            }
            Expr::Ident(name, span) => {
                if name == names::TRUE || name == names::FALSE {
                    let term = Term::constant(self.sig.bool_value(name == names::TRUE))
                        .expect("values are constants");
                    self.check_expected(&term, expected, *span)?;
                    return Ok(term);
                }
                if let Some(sym) = self.sig.lookup(name, 0).into_iter().next() {
                    let term = Term::constant(sym).expect("constants have no arguments");
                    self.check_expected(&term, expected, *span)?;
                    return Ok(term);
                }
                let sort = match (self.vars.get(name), expected) {
                    (Some(bound), Some(want)) if bound != want => {
                        return Err(diag(
                            *span,
                            format!(
                                "variable `{}` is used at two sorts: `{}` and `{}`",
                                name,
                                bound.name(),
                                want.name()
                            ),
                        ));
                    }
                    (Some(bound), _) => bound.clone(),
                    (None, Some(want)) => {
                        self.vars.insert(name.clone(), want.clone());
                        want.clone()
                    }
                    (None, None) => {
                        return Err(diag(
                            *span,
                            format!("cannot infer the sort of `{}` here", name),
                        ));
                    }
                };
                Ok(Term::var(Var::new(name, sort)))
            }
            Expr::Call(name, span, args) => self.call(name, *span, args, expected),
            Expr::Not(span, inner) => {
                let args = [(**inner).clone()];
                self.call(names::NOT, *span, &args, expected)
            }
            Expr::Binary(name, span, l, r) => {
                let args = [(**l).clone(), (**r).clone()];
                self.call(name, *span, &args, expected)
            }
        }
    }

    /// Resolve an application. With overloaded candidates (`=` and `!=`
    /// exist for both theory sorts) each is tried in declaration order;
    /// variable bindings made during a failed attempt are rolled back.
    fn call(
        &mut self,
        name: &str,
        span: SourceSpan,
        args: &[Expr],
        expected: Option<&Sort>,
    ) -> Result<Term, Diagnostic> {
        let candidates = self.sig.lookup(name, args.len());
        if candidates.is_empty() {
            return Err(diag(
                span,
                format!("unknown symbol `{}` with {} argument(s)", name, args.len()),
            ));
        }
        let mut first_err = None;
        for sym in candidates {
            let snapshot = self.vars.clone();
            match self.try_candidate(&sym, span, args, expected) {
                Ok(term) => return Ok(term),
                Err(e) => {
                    self.vars = snapshot;
                    first_err.get_or_insert(e);
                }
            }
        }
        Err(first_err.expect("at least one candidate was tried"))
    }

    fn try_candidate(
        &mut self,
        sym: &Arc<FunctionSymbol>,
        span: SourceSpan,
        args: &[Expr],
        expected: Option<&Sort>,
    ) -> Result<Term, Diagnostic> {
        let mut arg_terms = Vec::with_capacity(args.len());
        for (raw, want) in args.iter().zip(sym.arg_sorts()) {
            arg_terms.push(self.elaborate(raw, Some(want))?);
        }
        let term = Term::app(sym.clone(), arg_terms).expect("argument sorts were checked");
        self.check_expected(&term, expected, span)?;
        Ok(term)
    }

    fn check_expected(
        &self,
        term: &Term,
        expected: Option<&Sort>,
        span: SourceSpan,
    ) -> Result<(), Diagnostic> {
        if let Some(want) = expected {
            let got = term.sort();
            if &got != want {
                return Err(diag(
                    span,
                    format!("expected sort `{}`, found `{}`", want.name(), got.name()),
                ));
            }
        }
        Ok(())
    }

    fn truth(&self) -> Term {
        Term::constant(self.sig.bool_value(true)).expect("values are constants")
    }
}

fn lex_or_diag(text: &str) -> Result<Vec<Token>, Vec<Diagnostic>> {
    tokenize(text).map_err(|e| vec![diag(e.span, e.message)])
}

/// Parse a system file: sorts, signature, rules. Symbols are classified
/// (constructor vs defined) from the rule left-hand sides, every rule is
/// sort-checked and validated, and the result is ready for the analysis.
pub fn parse_lctrs(text: &str) -> Result<Lctrs, Vec<Diagnostic>> {
    let toks = lex_or_diag(text)?;
    let mut ts = TokenStream { toks: &toks, pos: 0, src_len: text.len() };
    let mut diags: Vec<Diagnostic> = Vec::new();

    let mut sorts: Vec<(String, SourceSpan)> = Vec::new();
    let mut decls: Vec<RawDecl> = Vec::new();
    let mut rules: Vec<RawRule> = Vec::new();

    #[derive(Clone, Copy, PartialEq)]
    enum Section {
        Sorts,
        Signature,
        Rules,
    }
    let mut section = None;
    while let Some(t) = ts.peek() {
        if let TokenKind::Ident(w) = &t.kind {
            let new_section = match w.as_str() {
                "SORTS" => Some(Section::Sorts),
                "SIGNATURE" => Some(Section::Signature),
                "RULES" => Some(Section::Rules),
                _ => None,
            };
            if let Some(s) = new_section {
                section = Some(s);
                ts.pos += 1;
                continue;
            }
        }
        let item = match section {
            None => {
                diags.push(diag(
                    t.span,
                    "expected a section keyword: `SORTS`, `SIGNATURE` or `RULES`",
                ));
                ts.synchronize();
                continue;
            }
            Some(Section::Sorts) => ts.expect_ident("a sort name").and_then(|entry| {
                ts.expect(&TokenKind::Semi, "`;`")?;
                sorts.push(entry);
                Ok(())
            }),
            Some(Section::Signature) => ts.parse_decl().map(|d| decls.push(d)),
            Some(Section::Rules) => ts.parse_rule().map(|r| rules.push(r)),
        };
        if let Err(e) = item {
            diags.push(e);
            ts.synchronize();
        }
    }

    let mut sig = Signature::new();
    for (name, span) in &sorts {
        if let Err(e) = sig.add_sort(name) {
            diags.push(diag(*span, e.to_string()));
        }
    }

    // A symbol is defined exactly when some rule's left-hand side is rooted
    // in it; everything else declared is a constructor.
    let mut lhs_roots: Vec<(String, usize)> = Vec::new();
    for rule in &rules {
        match &rule.lhs {
            Expr::Call(name, _, args) => lhs_roots.push((name.clone(), args.len())),
            Expr::Ident(name, _) => lhs_roots.push((name.clone(), 0)),
            _ => {}
        }
    }
    for d in &decls {
        let mut arg_sorts = Vec::with_capacity(d.args.len());
        let mut ok = true;
        for (name, span) in d.args.iter().chain(std::iter::once(&d.result)) {
            match sig.sort(name) {
                Some(s) => arg_sorts.push(s),
                None => {
                    diags.push(diag(*span, format!("sort `{}` is not declared", name)));
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        let result = arg_sorts.pop().expect("result sort resolved");
        let defined = lhs_roots.iter().any(|(n, a)| n == &d.name && *a == d.args.len());
        let declared = if defined {
            sig.add_defined(&d.name, &arg_sorts, result)
        } else {
            sig.add_constructor(&d.name, &arg_sorts, result)
        };
        if let Err(e) = declared {
            diags.push(diag(d.span, e.to_string()));
        }
    }

    let mut out_rules = Vec::with_capacity(rules.len());
    for raw in &rules {
        let mut elab = Elaborator::new(&sig);
        let span = raw.lhs.span();
        let built = elab.elaborate(&raw.lhs, None).and_then(|lhs| {
            let lhs_sort = lhs.sort();
            let rhs = elab.elaborate(&raw.rhs, Some(&lhs_sort))?;
            let guard = match &raw.guard {
                Some(g) => elab.elaborate(g, Some(&Sort::boolean()))?,
                None => elab.truth(),
            };
            Ok(Rule::new(lhs, rhs, guard))
        });
        match built {
            Ok(rule) => {
                if let Err(e) = rule.validate() {
                    diags.push(diag(span, e.to_string()));
                } else {
                    out_rules.push(rule);
                }
            }
            Err(e) => diags.push(e),
        }
    }

    if diags.is_empty() {
        Ok(Lctrs::new(sig, out_rules))
    } else {
        Err(diags)
    }
}

/// Parse a constrained-pattern list over an existing signature: items
/// `term ;` or `term [ constraint ] ;`. Each item's variables are scoped to
/// that item, and each term must be a pattern — a defined or calculation
/// symbol applied to constructor terms.
pub fn parse_patterns(text: &str, sig: &Signature) -> Result<Vec<ConstrainedTerm>, Vec<Diagnostic>> {
    let toks = lex_or_diag(text)?;
    let mut ts = TokenStream { toks: &toks, pos: 0, src_len: text.len() };
    let mut diags = Vec::new();
    let mut out = Vec::new();
    while ts.peek().is_some() {
        match parse_pattern_item(&mut ts, sig, true) {
            Ok(ct) => out.push(ct),
            Err(e) => {
                diags.push(e);
                ts.synchronize();
            }
        }
    }
    if diags.is_empty() {
        Ok(out)
    } else {
        Err(diags)
    }
}

/// Parse a single constrained pattern, `term` or `term [ constraint ]`,
/// with no trailing `;`.
pub fn parse_constrained_pattern(
    text: &str,
    sig: &Signature,
) -> Result<ConstrainedTerm, Vec<Diagnostic>> {
    let toks = lex_or_diag(text)?;
    let mut ts = TokenStream { toks: &toks, pos: 0, src_len: text.len() };
    let ct = parse_pattern_item(&mut ts, sig, false).map_err(|e| vec![e])?;
    match ts.peek() {
        None => Ok(ct),
        Some(t) => Err(vec![diag(t.span, format!("expected end of input, found {}", t.kind))]),
    }
}

fn parse_pattern_item(
    ts: &mut TokenStream<'_>,
    sig: &Signature,
    want_semi: bool,
) -> Result<ConstrainedTerm, Diagnostic> {
    let raw = ts.parse_expr(0)?;
    let raw_constraint = if ts.eat(&TokenKind::LBracket) {
        let g = ts.parse_expr(0)?;
        ts.expect(&TokenKind::RBracket, "`]`")?;
        Some(g)
    } else {
        None
    };
    if want_semi {
        ts.expect(&TokenKind::Semi, "`;`")?;
    }
    let span = raw.span();
    let mut elab = Elaborator::new(sig);
    let term = elab.elaborate(&raw, None)?;
    let constraint = match &raw_constraint {
        Some(g) => elab.elaborate(g, Some(&Sort::boolean()))?,
        None => elab.truth(),
    };
    if !term.is_pattern() {
        return Err(diag(
            span,
            format!(
                "`{}` is not a pattern: it must be a defined or calculation symbol applied to constructor terms",
                term
            ),
        ));
    }
    ConstrainedTerm::new(term, constraint).map_err(|e| diag(span, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qr::QrVerdict;
    use crate::signature::SymbolKind;
    use crate::solver::BuiltinSolver;

    const R1: &str = "\
# Sums the positive elements at even offsets, consuming fuel y.
SORTS list ;

SIGNATURE
  nil  : list ;
  cons : int * list => list ;
  f    : list * int => int ;

RULES
  f(nil, y) -> 0 [ y <= 0 ] ;
  f(cons(x, xs), y) -> f(xs, y - 1) [ x <= 0 /\\ y > 0 ] ;
  f(cons(x, cons(z, zs)), y) -> x + f(zs, y - 2) [ x > 0 /\\ y > 1 ] ;
";

    #[test]
    fn the_running_example_parses() {
        let lctrs = parse_lctrs(R1).unwrap();
        assert_eq!(lctrs.rules.len(), 3);
        let sig = &lctrs.sig;
        assert_eq!(sig.lookup_unique("nil", 0).unwrap().kind(), SymbolKind::Constructor);
        assert_eq!(sig.lookup_unique("cons", 2).unwrap().kind(), SymbolKind::Constructor);
        assert_eq!(sig.lookup_unique("f", 2).unwrap().kind(), SymbolKind::Defined);
        assert!(lctrs.validate().is_ok());
        // The first guard compares the inferred integer variable with 0.
        assert_eq!(lctrs.rules[0].to_string(), "f(nil, y) -> 0 [y <= 0]");
        // Rule variables are rule-local: both `y`s are integer-sorted.
        assert!(lctrs.rules.iter().all(|r| r.lhs.is_linear() && r.lhs.is_pattern()));
    }

    #[test]
    fn guards_default_to_true() {
        let src = "\
SORTS list ;
SIGNATURE
  nil : list ;
  cons : int * list => list ;
  g : list => list ;
RULES
  g(cons(x, xs)) -> xs ;
";
        let lctrs = parse_lctrs(src).unwrap();
        assert_eq!(lctrs.rules.len(), 1);
        assert!(matches!(&lctrs.rules[0].guard, Term::App(f, _) if f.as_bool() == Some(true)));
    }

    #[test]
    fn precedence_and_negative_literals() {
        let lctrs = parse_lctrs(R1).unwrap();
        let sig = &lctrs.sig;
        // not binds looser than comparisons, /\ looser than not.
        let ct = parse_constrained_pattern("f(nil, y) [not y <= -2 /\\ z = 3]", sig).unwrap();
        assert_eq!(ct.constraint().to_string(), "not (y <= -2) /\\ z = 3");
        // Arithmetic: * over +, both left-associative; div/mod/exp words.
        let ct = parse_constrained_pattern("f(nil, y) [y - 1 - 2 * y div 3 >= 0]", sig).unwrap();
        assert_eq!(ct.constraint().to_string(), "y - 1 - 2 * y div 3 >= 0");
        // Implication right-associates, <=> at the same level.
        let ct = parse_constrained_pattern("f(nil, y) [y = 0 => y = 1 => y = 2]", sig).unwrap();
        assert_eq!(ct.constraint().to_string(), "y = 0 => y = 1 => y = 2");
    }

    #[test]
    fn variables_get_positional_sorts() {
        let lctrs = parse_lctrs(R1).unwrap();
        let sig = &lctrs.sig;
        let ct = parse_constrained_pattern("f(cons(h, t), fuel)", sig).unwrap();
        let sorts: Vec<String> = ct
            .term()
            .var_set()
            .iter()
            .map(|v| format!("{}:{}", v.name(), v.sort().name()))
            .collect();
        assert_eq!(sorts, vec!["fuel:int", "h:int", "t:list"]);
        // A variable cannot be a list in one position and an int in another.
        let err = parse_constrained_pattern("f(x, x)", sig).unwrap_err();
        assert!(err[0].message.contains("two sorts"), "{}", err[0].message);
    }

    #[test]
    fn equality_overloads_resolve_by_operands() {
        let lctrs = parse_lctrs(R1).unwrap();
        let sig = &lctrs.sig;
        let ct = parse_constrained_pattern("f(nil, y) [b = false /\\ y = 0]", sig).unwrap();
        let c = ct.constraint();
        let b = c.var_set().into_iter().find(|v| v.name() == "b").unwrap();
        assert!(b.sort().is_bool());
    }

    #[test]
    fn diagnostics_carry_spans() {
        let src = "\
SORTS list ;
SIGNATURE
  nil : list ;
  f : list => int ;
RULES
  f(nil) -> 0 [ true ] ;
  f(undeclared(nil)) -> 1 ;
";
        let errs = parse_lctrs(src).unwrap_err();
        assert_eq!(errs.len(), 1, "{:?}", errs);
        assert!(errs[0].message.contains("unknown symbol `undeclared`"));
        assert_eq!(errs[0].span.line, 7);
        let text_at = &src[errs[0].span.start..errs[0].span.end];
        assert_eq!(text_at, "undeclared");
    }

    #[test]
    fn malformed_items_recover_and_collect() {
        let src = "\
SORTS list ; list ;
SIGNATURE
  nil : list ;
  nil : list ;
  c : nowhere ;
RULES
  nil -> nil ;
  f(nil) -> ;
";
        let errs = parse_lctrs(src).unwrap_err();
        // Duplicate sort, duplicate symbol, unknown sort, constructor-rooted
        // (or unknown) lhs, missing rhs: all five surface in one pass.
        assert!(errs.len() >= 4, "{:?}", errs);
        let all = errs.iter().map(|e| e.message.clone()).collect::<Vec<_>>().join("\n");
        assert!(all.contains("already declared") || all.contains("duplicate"), "{}", all);
        assert!(all.contains("nowhere"), "{}", all);
    }

    #[test]
    fn pattern_lists_parse_over_a_system_signature() {
        let lctrs = parse_lctrs(R1).unwrap();
        let sig = &lctrs.sig;
        let pats = parse_patterns(
            "f(nil, ya) [not (ya <= 0)] ;\nf(cons(xb, nil), yb) ;\n",
            sig,
        )
        .unwrap();
        assert_eq!(pats.len(), 2);
        assert_eq!(pats[0].to_string(), "f(nil, ya) [not (ya <= 0)]");
        assert_eq!(pats[1].to_string(), "f(cons(xb, nil), yb) [true]");
        // Non-patterns are rejected with a span.
        let errs = parse_patterns("cons(x, nil) ;", sig).unwrap_err();
        assert!(errs[0].message.contains("not a pattern"));
        // Booleans constrain but a list-sorted variable cannot.
        let errs = parse_patterns("f(xs, y) [xs] ;", sig).unwrap_err();
        assert!(errs[0].message.contains("two sorts"), "{}", errs[0].message);
    }

    #[test]
    fn parsed_systems_run_the_decision_procedure() {
        let lctrs = parse_lctrs(R1).unwrap();
        let mut solver = BuiltinSolver::new();
        let report =
            crate::qr::quasi_reducible(&lctrs, &mut solver, crate::cterm::EquivMode::Syntactic)
                .unwrap();
        assert_eq!(report.verdict, QrVerdict::NotQuasiReducible);
        assert_eq!(report.witnesses.len(), 3);
    }

    #[test]
    fn printed_patterns_parse_back() {
        let lctrs = parse_lctrs(R1).unwrap();
        let sig = &lctrs.sig;
        let original = parse_constrained_pattern(
            "f(cons(x, cons(z, zs)), y) [not (x <= 0 /\\ y > 0) /\\ not (x > 0 /\\ y > 1)]",
            sig,
        )
        .unwrap();
        let printed = original.to_string();
        let reparsed = parse_constrained_pattern(&printed, sig).unwrap();
        assert!(crate::term::alpha_eq_all(&[
            (original.term(), reparsed.term()),
            (original.constraint(), reparsed.constraint()),
        ]));
        assert_eq!(printed, reparsed.to_string());
    }
}
