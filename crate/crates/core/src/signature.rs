//! Sorts, function symbols and signatures.
//!
//! A signature is split into a theory part and a term part. The theory part
//! is fixed: the sorts `int` and `bool`, their values, and the usual
//! calculation symbols (boolean connectives, comparisons, arithmetic). The
//! term part is user-declared: term sorts, constructors and defined symbols.
//! Integer values form an infinite family by default; a signature may
//! restrict them to a finite set, which makes complements of value-sorted
//! terms enumerable (used by the small worked examples and the test suite).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Canonical names of the built-in theory symbols, shared by the parser, the
/// printer, the evaluator and the SMT-LIB translation.
pub mod names {
    pub const TRUE: &str = "true";
    pub const FALSE: &str = "false";
    pub const AND: &str = "/\\";
    pub const OR: &str = "\\/";
    pub const NOT: &str = "not";
    pub const IMP: &str = "=>";
    pub const IFF: &str = "<=>";
    pub const EQ: &str = "=";
    pub const NEQ: &str = "!=";
    pub const LE: &str = "<=";
    pub const LT: &str = "<";
    pub const GE: &str = ">=";
    pub const GT: &str = ">";
    pub const ADD: &str = "+";
    pub const SUB: &str = "-";
    pub const MUL: &str = "*";
    pub const DIV: &str = "div";
    pub const MOD: &str = "mod";
    pub const EXP: &str = "exp";
}

/// Whether a sort belongs to the built-in theory or to the term signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SortKind {
    Theory,
    Term,
}

/// A sort. The theory sorts `int` and `bool` are built in; term sorts carry
/// the name they were declared under.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort {
    name: String,
    kind: SortKind,
}

impl Sort {
    pub fn int() -> Sort {
        Sort { name: "int".to_string(), kind: SortKind::Theory }
    }

    pub fn boolean() -> Sort {
        Sort { name: "bool".to_string(), kind: SortKind::Theory }
    }

    /// A term sort with the given name. The name must be registered in the
    /// signature before symbols over it can be declared.
    pub fn term(name: &str) -> Sort {
        Sort { name: name.to_string(), kind: SortKind::Term }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SortKind {
        self.kind
    }

    pub fn is_theory(&self) -> bool {
        self.kind == SortKind::Theory
    }

    pub fn is_int(&self) -> bool {
        self.is_theory() && self.name == "int"
    }

    pub fn is_bool(&self) -> bool {
        self.is_theory() && self.name == "bool"
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Classification of a function symbol.
///
/// `Value` and `Calculation` symbols form the theory signature; constructors
/// and defined symbols form the term signature. Values are the nullary
/// constructors of the theory sorts (integer literals, `true`, `false`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Value,
    Calculation,
    Constructor,
    Defined,
}

/// A symbol name: an identifier/operator, or an integer literal (the name of
/// an integer value symbol). Two integer value symbols are equal exactly when
/// their literals are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymName {
    Ident(String),
    Int(i64),
}

impl fmt::Display for SymName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymName::Ident(s) => f.write_str(s),
            SymName::Int(n) => write!(f, "{}", n),
        }
    }
}

/// A sorted function symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionSymbol {
    name: SymName,
    arg_sorts: Vec<Sort>,
    result_sort: Sort,
    kind: SymbolKind,
}

impl FunctionSymbol {
    pub fn name(&self) -> &SymName {
        &self.name
    }

    /// The identifier of the symbol, or the decimal rendering of a value.
    pub fn display_name(&self) -> String {
        self.name.to_string()
    }

    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }

    pub fn arg_sorts(&self) -> &[Sort] {
        &self.arg_sorts
    }

    pub fn result_sort(&self) -> &Sort {
        &self.result_sort
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_value(&self) -> bool {
        self.kind == SymbolKind::Value
    }

    /// Theory symbols are the values and calculation symbols.
    pub fn is_theory(&self) -> bool {
        matches!(self.kind, SymbolKind::Value | SymbolKind::Calculation)
    }

    /// Constructors in the sense of the complement construction: values and
    /// declared constructors.
    pub fn is_constructor(&self) -> bool {
        matches!(self.kind, SymbolKind::Value | SymbolKind::Constructor)
    }

    /// The integer carried by an integer value symbol.
    pub fn as_int(&self) -> Option<i64> {
        match self.name {
            SymName::Int(n) => Some(n),
            _ => None,
        }
    }

    /// The boolean carried by `true`/`false`.
    pub fn as_bool(&self) -> Option<bool> {
        if self.kind != SymbolKind::Value || !self.result_sort.is_bool() {
            return None;
        }
        match &self.name {
            SymName::Ident(s) if s == names::TRUE => Some(true),
            SymName::Ident(s) if s == names::FALSE => Some(false),
            _ => None,
        }
    }
}

impl fmt::Display for FunctionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// The family of integer values available in a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntValueFamily {
    /// All of `i64` (stands in for the unbounded mathematical family).
    Unbounded,
    /// A finite, explicitly listed family, kept sorted.
    Finite(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureError {
    DuplicateSort(String),
    /// Symbol with this name and arity already declared.
    DuplicateSymbol(String, usize),
    UnknownSort(String),
    /// The name collides with a built-in theory symbol or value.
    ReservedName(String),
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::DuplicateSort(s) => write!(f, "sort `{}` is already declared", s),
            SignatureError::DuplicateSymbol(s, n) => {
                write!(f, "symbol `{}` with arity {} is already declared", s, n)
            }
            SignatureError::UnknownSort(s) => write!(f, "sort `{}` is not declared", s),
            SignatureError::ReservedName(s) => {
                write!(f, "`{}` is reserved for a built-in theory symbol", s)
            }
        }
    }
}

impl std::error::Error for SignatureError {}

/// A signature: the fixed theory part plus user-declared term sorts,
/// constructors and defined symbols.
#[derive(Debug, Clone)]
pub struct Signature {
    term_sorts: Vec<Sort>,
    /// Declared (non-value) symbols, in declaration order. Built-in
    /// calculation symbols first, then user symbols.
    symbols: Vec<Arc<FunctionSymbol>>,
    int_values: IntValueFamily,
}

fn calc(name: &str, args: &[Sort], result: Sort) -> Arc<FunctionSymbol> {
    Arc::new(FunctionSymbol {
        name: SymName::Ident(name.to_string()),
        arg_sorts: args.to_vec(),
        result_sort: result,
        kind: SymbolKind::Calculation,
    })
}

impl Default for Signature {
    fn default() -> Self {
        Signature::new()
    }
}

impl Signature {
    /// A signature containing only the built-in theory: sorts `int` and
    /// `bool`, their values, boolean connectives, equalities for both theory
    /// sorts, integer arithmetic and comparisons.
    pub fn new() -> Signature {
        let i = Sort::int();
        let b = Sort::boolean();
        let bb = [b.clone(), b.clone()];
        let ii = [i.clone(), i.clone()];
        let symbols = vec![
            calc(names::AND, &bb, b.clone()),
            calc(names::OR, &bb, b.clone()),
            calc(names::IMP, &bb, b.clone()),
            calc(names::IFF, &bb, b.clone()),
            calc(names::NOT, &[b.clone()], b.clone()),
            calc(names::EQ, &ii, b.clone()),
            calc(names::NEQ, &ii, b.clone()),
            calc(names::EQ, &bb, b.clone()),
            calc(names::NEQ, &bb, b.clone()),
            calc(names::LE, &ii, b.clone()),
            calc(names::LT, &ii, b.clone()),
            calc(names::GE, &ii, b.clone()),
            calc(names::GT, &ii, b.clone()),
            calc(names::ADD, &ii, i.clone()),
            calc(names::SUB, &ii, i.clone()),
            calc(names::MUL, &ii, i.clone()),
            calc(names::DIV, &ii, i.clone()),
            calc(names::MOD, &ii, i.clone()),
            calc(names::EXP, &ii, i.clone()),
        ];
        Signature { term_sorts: Vec::new(), symbols, int_values: IntValueFamily::Unbounded }
    }

    /// Restrict the integer value family to a finite set. Complements over
    /// `int`-sorted terms become enumerable.
    pub fn restrict_int_values<I: IntoIterator<Item = i64>>(&mut self, values: I) {
        let mut vs: Vec<i64> = values.into_iter().collect();
        vs.sort_unstable();
        vs.dedup();
        self.int_values = IntValueFamily::Finite(vs);
    }

    pub fn int_value_family(&self) -> &IntValueFamily {
        &self.int_values
    }

    /// Declare a term sort.
    pub fn add_sort(&mut self, name: &str) -> Result<Sort, SignatureError> {
        if name == "int" || name == "bool" || self.term_sorts.iter().any(|s| s.name() == name) {
            return Err(SignatureError::DuplicateSort(name.to_string()));
        }
        let sort = Sort::term(name);
        self.term_sorts.push(sort.clone());
        Ok(sort)
    }

    pub fn sort(&self, name: &str) -> Option<Sort> {
        match name {
            "int" => Some(Sort::int()),
            "bool" => Some(Sort::boolean()),
            _ => self.term_sorts.iter().find(|s| s.name() == name).cloned(),
        }
    }

    pub fn term_sorts(&self) -> &[Sort] {
        &self.term_sorts
    }

    /// Sorts with at least one ground constructor term. `int` and `bool`
    /// always qualify (a finite integer family is never empty); a term sort
    /// qualifies when some constructor takes only inhabited argument sorts.
    pub fn inhabited_sorts(&self) -> BTreeSet<Sort> {
        let mut done: BTreeSet<Sort> = [Sort::int(), Sort::boolean()].into();
        loop {
            let mut changed = false;
            for sort in &self.term_sorts {
                if done.contains(sort) {
                    continue;
                }
                let ctors = self.constructors_of(sort).expect("term sorts have symbol lists");
                if ctors.iter().any(|c| c.arg_sorts().iter().all(|a| done.contains(a))) {
                    done.insert(sort.clone());
                    changed = true;
                }
            }
            if !changed {
                return done;
            }
        }
    }

    fn declare(
        &mut self,
        name: &str,
        args: &[Sort],
        result: Sort,
        kind: SymbolKind,
    ) -> Result<Arc<FunctionSymbol>, SignatureError> {
        if name == names::TRUE || name == names::FALSE || name.parse::<i64>().is_ok() {
            return Err(SignatureError::ReservedName(name.to_string()));
        }
        if self
            .symbols
            .iter()
            .any(|f| f.display_name() == name && f.arity() == args.len())
        {
            return Err(SignatureError::DuplicateSymbol(name.to_string(), args.len()));
        }
        for s in args.iter().chain(std::iter::once(&result)) {
            if self.sort(s.name()).as_ref() != Some(s) {
                return Err(SignatureError::UnknownSort(s.name().to_string()));
            }
        }
        let sym = Arc::new(FunctionSymbol {
            name: SymName::Ident(name.to_string()),
            arg_sorts: args.to_vec(),
            result_sort: result,
            kind,
        });
        self.symbols.push(sym.clone());
        Ok(sym)
    }

    pub fn add_constructor(
        &mut self,
        name: &str,
        args: &[Sort],
        result: Sort,
    ) -> Result<Arc<FunctionSymbol>, SignatureError> {
        self.declare(name, args, result, SymbolKind::Constructor)
    }

    pub fn add_defined(
        &mut self,
        name: &str,
        args: &[Sort],
        result: Sort,
    ) -> Result<Arc<FunctionSymbol>, SignatureError> {
        self.declare(name, args, result, SymbolKind::Defined)
    }

    /// The integer value symbol for `n`.
    pub fn int_value(&self, n: i64) -> Arc<FunctionSymbol> {
        Arc::new(FunctionSymbol {
            name: SymName::Int(n),
            arg_sorts: Vec::new(),
            result_sort: Sort::int(),
            kind: SymbolKind::Value,
        })
    }

    pub fn bool_value(&self, b: bool) -> Arc<FunctionSymbol> {
        Arc::new(FunctionSymbol {
            name: SymName::Ident(if b { names::TRUE } else { names::FALSE }.to_string()),
            arg_sorts: Vec::new(),
            result_sort: Sort::boolean(),
            kind: SymbolKind::Value,
        })
    }

    /// All declared symbols with the given name and arity. Equality and
    /// disequality are overloaded over `int` and `bool`, so more than one
    /// candidate is possible; the parser disambiguates by operand sort.
    pub fn lookup(&self, name: &str, arity: usize) -> Vec<Arc<FunctionSymbol>> {
        if arity == 0 {
            if name == names::TRUE {
                return vec![self.bool_value(true)];
            }
            if name == names::FALSE {
                return vec![self.bool_value(false)];
            }
            if let Ok(n) = name.parse::<i64>() {
                return vec![self.int_value(n)];
            }
        }
        self.symbols
            .iter()
            .filter(|f| f.display_name() == name && f.arity() == arity)
            .cloned()
            .collect()
    }

    /// The unique declared symbol with this name and arity, if there is
    /// exactly one.
    pub fn lookup_unique(&self, name: &str, arity: usize) -> Option<Arc<FunctionSymbol>> {
        let cands = self.lookup(name, arity);
        if cands.len() == 1 {
            cands.into_iter().next()
        } else {
            None
        }
    }

    /// The constructors with the given result sort, in a deterministic
    /// order. For `bool` these are `true` and `false`; for `int` the finite
    /// value family in ascending order, or `None` when the family is
    /// unbounded; for a term sort the declared constructors in declaration
    /// order.
    pub fn constructors_of(&self, sort: &Sort) -> Option<Vec<Arc<FunctionSymbol>>> {
        if sort.is_bool() {
            return Some(vec![self.bool_value(true), self.bool_value(false)]);
        }
        if sort.is_int() {
            return match &self.int_values {
                IntValueFamily::Unbounded => None,
                IntValueFamily::Finite(vs) => {
                    Some(vs.iter().map(|&n| self.int_value(n)).collect())
                }
            };
        }
        Some(
            self.symbols
                .iter()
                .filter(|f| f.kind() == SymbolKind::Constructor && f.result_sort() == sort)
                .cloned()
                .collect(),
        )
    }

    /// Defined symbols of the term signature, in declaration order.
    pub fn defined_symbols(&self) -> Vec<Arc<FunctionSymbol>> {
        self.symbols
            .iter()
            .filter(|f| f.kind() == SymbolKind::Defined)
            .cloned()
            .collect()
    }

    /// All declared (non-value) symbols, built-ins included.
    pub fn symbols(&self) -> &[Arc<FunctionSymbol>] {
        &self.symbols
    }

    /// User-declared term-signature symbols (constructors and defined), in
    /// declaration order.
    pub fn term_symbols(&self) -> Vec<Arc<FunctionSymbol>> {
        self.symbols
            .iter()
            .filter(|f| matches!(f.kind(), SymbolKind::Constructor | SymbolKind::Defined))
            .cloned()
            .collect()
    }
}
